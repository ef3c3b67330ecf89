fn main() {
    std::process::exit(gapforge_cli::run(std::env::args_os()));
}
