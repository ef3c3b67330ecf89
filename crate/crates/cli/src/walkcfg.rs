use crate::{read_json, report, to_value, CliError, CliResult, Global};
use clap::Args;
use gapforge_core::serial::RatS;
use gapforge_core::walk::{
    anticoncentration_experiment, atom_experiment, decoupling_check, extremal_containment, log_escape_experiment,
    ExperimentReport, Overlay, StepDistribution,
};
use gapforge_core::{GenSet, Mat, MultiPoly};
use serde::Deserialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct WalkArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured number of trials.
    #[arg(long)]
    trials: Option<u64>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the estimates as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write log-frequency against n as an SVG chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Anticoncentration,
    Atoms,
    Decoupling,
    Containment,
    ExtremalContainment,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepCfg {
    support: Vec<Mat>,
    /// Uniform when absent.
    #[serde(default)]
    probs: Option<Vec<RatS>>,
    #[serde(default)]
    beta_hint: Option<RatS>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OverlayCfg {
    c_v: f64,
    c: f64,
}

/// Symbolic constants carried through to the report; never used in checks.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Constants {
    #[serde(default)]
    gap_d: Option<RatS>,
    #[serde(default)]
    kappa_prime_d: Option<RatS>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkConfig {
    schema: String,
    experiment: Kind,
    #[serde(default)]
    steps: Vec<StepCfg>,
    #[serde(default)]
    n_values: Vec<usize>,
    #[serde(default)]
    variety: Vec<MultiPoly>,
    #[serde(default)]
    stabilizer: Vec<MultiPoly>,
    #[serde(default)]
    split: Option<usize>,
    #[serde(default)]
    overlay: Option<OverlayCfg>,
    #[serde(default)]
    set: Vec<Mat>,
    #[serde(default)]
    family: Vec<MultiPoly>,
    #[serde(default)]
    degrees: Vec<u32>,
    #[serde(default = "default_n_cap")]
    n_cap: usize,
    #[serde(default = "default_budget")]
    budget: u64,
    #[serde(default = "default_trials")]
    trials: u64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    constants: Option<Constants>,
}

fn default_n_cap() -> usize {
    8
}
fn default_budget() -> u64 {
    2_000_000
}
fn default_trials() -> u64 {
    10_000
}

fn steps(cfg: &[StepCfg]) -> CliResult<Vec<StepDistribution>> {
    if cfg.is_empty() {
        return Err(CliError::Usage("the experiment needs \"steps\"".into()));
    }
    cfg.iter()
        .map(|s| {
            let beta = s.beta_hint.as_ref().map(|b| b.0.clone());
            let d = match &s.probs {
                Some(p) => StepDistribution::new(s.support.clone(), p.iter().map(|q| q.0.clone()).collect(), beta)?,
                None => {
                    let u = StepDistribution::uniform(s.support.clone())?;
                    match beta {
                        Some(b) => u.with_beta(b)?,
                        None => u,
                    }
                }
            };
            Ok(d)
        })
        .collect()
}

fn csv_of(rep: &ExperimentReport) -> String {
    let mut s = String::from("n,hits,trials,freq,wilson_lo,wilson_hi\n");
    for e in &rep.estimates {
        let _ = writeln!(s, "{},{},{},{},{},{}", e.n, e.hits, e.trials, e.freq, e.wilson_lo, e.wilson_hi);
    }
    s
}

/// A plain SVG line chart of log10(freq) against n, with the overlay curve
/// dashed when present.
fn svg_of(rep: &ExperimentReport) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let pts: Vec<(f64, f64)> =
        rep.estimates.iter().filter(|e| e.hits > 0).map(|e| (e.n as f64, e.freq.log10())).collect();
    let curve: Vec<(f64, f64)> = rep
        .bound_curve
        .iter()
        .flat_map(|c| rep.n_values.iter().zip(c).filter(|(_, y)| **y > 0.0).map(|(n, y)| (*n as f64, y.log10())))
        .collect();
    let all: Vec<&(f64, f64)> = pts.iter().chain(&curve).collect();
    let mut svg = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n");
    if all.is_empty() {
        svg.push_str("<text x=\"20\" y=\"30\">no nonzero estimates</text>\n</svg>\n");
        return svg;
    }
    let (x0, x1) = all.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (y0, y1) = all.iter().fold((f64::MAX, f64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let sx = |x: f64| pad + (x - x0) / (x1 - x0).max(1e-9) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0).max(1e-9) * (h - 2.0 * pad);
    let _ = writeln!(
        svg,
        "<line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/><line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{}\" stroke=\"black\"/>",
        h - pad, w - pad, h - pad, h - pad
    );
    let _ = writeln!(svg, "<text x=\"{}\" y=\"{}\">n</text>", w / 2.0, h - 10.0);
    let _ = writeln!(svg, "<text x=\"5\" y=\"{}\">log10 freq</text>", pad - 15.0);
    let _ = writeln!(svg, "<text x=\"{pad}\" y=\"{}\">{x0}</text><text x=\"{}\" y=\"{}\">{x1}</text>", h - pad + 15.0, w - pad, h - pad + 15.0);
    let _ = writeln!(svg, "<text x=\"5\" y=\"{}\">{y0:.2}</text><text x=\"5\" y=\"{}\">{y1:.2}</text>", h - pad, pad);
    for (series, style) in [(&pts, "stroke=\"steelblue\""), (&curve, "stroke=\"gray\" stroke-dasharray=\"4 3\"")] {
        if series.is_empty() {
            continue;
        }
        let path: Vec<String> = series.iter().map(|p| format!("{:.1},{:.1}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(svg, "<polyline fill=\"none\" {style} points=\"{}\"/>", path.join(" "));
    }
    for p in &pts {
        let _ = writeln!(svg, "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"steelblue\"/>", sx(p.0), sy(p.1));
    }
    svg.push_str("</svg>\n");
    svg
}

fn write(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn walk(a: &WalkArgs, _g: &Global) -> CliResult<Value> {
    let cfg: WalkConfig = read_json(&a.config)?;
    if cfg.schema != crate::SCHEMA {
        return Err(CliError::Usage(format!("unsupported schema {:?}", cfg.schema)));
    }
    let trials = a.trials.unwrap_or(cfg.trials);
    let seed = a.seed.unwrap_or(cfg.seed);
    let overlay = cfg.overlay.as_ref().map(|o| Overlay { c_v: o.c_v, c: o.c });
    let mut r = report("walk");
    r.insert("experiment".into(), json!(format!("{:?}", cfg.experiment).to_lowercase()));
    if let Some(c) = &cfg.constants {
        r.insert(
            "constants".into(),
            json!({"gap_d": c.gap_d.as_ref().map(to_value), "kappa_prime_d": c.kappa_prime_d.as_ref().map(to_value), "used": false}),
        );
    }
    let mut table: Option<&ExperimentReport> = None;
    let rep;
    match cfg.experiment {
        Kind::Anticoncentration | Kind::Atoms => {
            let st = steps(&cfg.steps)?;
            rep = if cfg.experiment == Kind::Atoms {
                atom_experiment(&st, &cfg.n_values, trials, seed, overlay.as_ref())?
            } else {
                if cfg.variety.is_empty() {
                    return Err(CliError::Usage("the experiment needs \"variety\"".into()));
                }
                anticoncentration_experiment(&st, &cfg.variety, &cfg.n_values, trials, seed, overlay.as_ref())?
            };
            r.insert("report".into(), to_value(&rep));
            table = Some(&rep);
        }
        Kind::Decoupling => {
            let st = steps(&cfg.steps)?;
            let d = decoupling_check(&st, &cfg.variety, &cfg.stabilizer, cfg.split, trials, seed)?;
            r.insert("seed".into(), json!(seed));
            r.insert("report".into(), to_value(&d));
        }
        Kind::Containment | Kind::ExtremalContainment => {
            let s = GenSet::new(cfg.set.clone())?;
            let c = if cfg.experiment == Kind::Containment {
                log_escape_experiment(&s, &cfg.family, cfg.n_cap, cfg.budget)?
            } else {
                extremal_containment(&s, &cfg.degrees, cfg.n_cap, cfg.budget)?
            };
            r.insert("report".into(), to_value(&c));
        }
    }
    if let Some(t) = table {
        if let Some(p) = &a.csv {
            write(p, &csv_of(t))?;
        }
        if let Some(p) = &a.svg {
            write(p, &svg_of(t))?;
        }
    } else if a.csv.is_some() || a.svg.is_some() {
        return Err(CliError::Usage("--csv and --svg apply to frequency experiments only".into()));
    }
    Ok(Value::Object(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gapforge_core::walk::Estimate;

    #[test]
    fn svg_and_csv() {
        let rep = ExperimentReport {
            seed: 1,
            trials: 10,
            n_values: vec![1, 2],
            estimates: vec![Estimate::new(1, 5, 10), Estimate::new(2, 0, 10)],
            fitted_rate: None,
            bound_curve: Some(vec![0.5, 0.25]),
            note: String::new(),
        };
        assert_eq!(csv_of(&rep).lines().count(), 3);
        let s = svg_of(&rep);
        assert!(s.starts_with("<svg") && s.contains("polyline"));
    }
}
