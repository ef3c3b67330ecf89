//! Small randomized invariant suites, fast enough to run on every install.

use crate::{report, CliError, CliResult, Global};
use clap::Args;
use gapforge_core::jsr::{jsr_lower, jsr_upper};
use gapforge_core::metrics::{delta_gap, proj_dist};
use gapforge_core::pingpong::{certify_pingpong, random_points, verify, verify_position_sample};
use gapforge_core::place::product_over_places;
use gapforge_core::rat::{int, rat};
use gapforge_core::walk::wilson;
use gapforge_core::{serial, GenSet, Mat, Place, Rat, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn random_rat(rng: &mut ChaCha20Rng, bound: i64) -> Rat {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    rat(n, d)
}

fn random_mat(rng: &mut ChaCha20Rng, d: usize, bound: i64) -> Mat {
    Mat::new(d, d, (0..d * d).map(|_| int(rng.gen_range(-bound..=bound))).collect())
}

fn random_subspace(rng: &mut ChaCha20Rng, d: usize, k: usize) -> Subspace {
    let rows: Vec<Vec<Rat>> = (0..k).map(|_| (0..d).map(|_| random_rat(rng, 6)).collect()).collect();
    Subspace::span(d, &rows)
}

/// Each suite returns (instances checked, failures).
type Suite = fn(&mut ChaCha20Rng, &Rat) -> (usize, usize);

fn product_formula(rng: &mut ChaCha20Rng, _t: &Rat) -> (usize, usize) {
    let mut bad = 0;
    for _ in 0..500 {
        let mut x = random_rat(rng, 1_000_000_000);
        if x == int(0) {
            x = int(1);
        }
        bad += (product_over_places(&x) != int(1)) as usize;
    }
    (500, bad)
}

fn triangle(rng: &mut ChaCha20Rng, t: &Rat) -> (usize, usize) {
    let mut bad = 0;
    let pts = random_points(3, 600, 30, rng.gen());
    for c in pts.chunks(3) {
        for p in [2, 3, 5] {
            let v = Place::Finite(p);
            let xz = proj_dist(&c[0], &c[2], v, t);
            let sum = proj_dist(&c[0], &c[1], v, t).interval().add(&proj_dist(&c[1], &c[2], v, t).interval());
            bad += (xz.lo > sum.hi) as usize;
        }
    }
    (600, bad)
}

fn delta_symmetry(rng: &mut ChaCha20Rng, t: &Rat) -> (usize, usize) {
    let mut bad = 0;
    for _ in 0..100 {
        let (ka, kb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a = random_subspace(rng, 3, ka);
        let b = random_subspace(rng, 3, kb);
        let v = Place::Finite([2, 3][rng.gen_range(0..2)]);
        bad += (delta_gap(&a, &b, v, t) != delta_gap(&b, &a, v, t)) as usize;
    }
    (100, bad)
}

fn jsr_sandwich(rng: &mut ChaCha20Rng, t: &Rat) -> (usize, usize) {
    let mut bad = 0;
    for _ in 0..10 {
        let mut els = vec![random_mat(rng, 2, 4), random_mat(rng, 2, 4)];
        els.retain(|m| m.det() != int(0));
        if els.is_empty() {
            els.push(Mat::identity(2));
        }
        let s = GenSet::new(els).unwrap();
        let v = Place::Finite(2);
        let lo = jsr_lower(&s, v, 4, 100_000, t).unwrap().value;
        for n in 1..=4 {
            bad += !lo.le_possible(&jsr_upper(&s, v, n, 100_000, t).unwrap()) as usize;
        }
    }
    (40, bad)
}

fn round_trip(rng: &mut ChaCha20Rng, _t: &Rat) -> (usize, usize) {
    let mut bad = 0;
    for _ in 0..200 {
        let m = Mat::new(2, 3, (0..6).map(|_| random_rat(rng, 1_000_000)).collect());
        let back: Mat = serial::from_str(&serial::to_string(&m)).unwrap();
        bad += (back != m) as usize;
    }
    (200, bad)
}

fn certificate_closure(rng: &mut ChaCha20Rng, t: &Rat) -> (usize, usize) {
    let gamma = Mat::diag(&[int(5), rat(1, 5)]);
    let conj = [Mat::identity(2), Mat::from_ints(&[&[1, 1], &[1, 2]])];
    let Ok((_, cert)) = certify_pingpong(&gamma, &conj, Place::Finite(5), &int(1), t) else {
        return (1, 1);
    };
    let back = serial::from_str(&serial::to_string(&cert)).unwrap();
    let pts = random_points(2, 200, 1000, rng.gen());
    let pos = verify_position_sample(&back, None, &pts, t).map(|p| p.violations()).unwrap_or(1);
    (1, (!verify(&back, t).accepted() || pos != 0) as usize)
}

fn wilson_coverage(rng: &mut ChaCha20Rng, _t: &Rat) -> (usize, usize) {
    // 95% intervals on 400 Bernoulli(0.3) streams; flag coverage below 90%
    let runs = 400;
    let covered = (0..runs)
        .filter(|_| {
            let hits = (0..500).filter(|_| rng.gen_bool(0.3)).count() as u64;
            let (lo, hi) = wilson(hits, 500, 1.96);
            lo <= 0.3 && 0.3 <= hi
        })
        .count();
    (1, (covered * 10 < runs * 9) as usize)
}

pub fn selftest(a: &SelftestArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let suites: [(&str, Suite); 7] = [
        ("product_formula", product_formula),
        ("projective_triangle", triangle),
        ("delta_symmetry", delta_symmetry),
        ("jsr_sandwich", jsr_sandwich),
        ("serialization_round_trip", round_trip),
        ("certificate_closure", certificate_closure),
        ("wilson_coverage", wilson_coverage),
    ];
    let mut r = report("selftest");
    let mut results = Vec::new();
    let mut ok = true;
    for (i, (name, f)) in suites.iter().enumerate() {
        let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
        rng.set_stream(i as u64);
        let t0 = Instant::now();
        let (n, bad) = f(&mut rng, &tol);
        ok &= bad == 0;
        eprintln!("{} {name}: {n} instances, {bad} failures", if bad == 0 { "PASS" } else { "FAIL" });
        results.push(json!({"suite": name, "instances": n, "failures": bad, "seconds": t0.elapsed().as_secs_f64()}));
    }
    r.insert("seed".into(), json!(a.seed));
    r.insert("suites".into(), json!(results));
    r.insert("passed".into(), json!(ok));
    if ok {
        Ok(Value::Object(r))
    } else {
        Err(CliError::Rejected(Value::Object(r)))
    }
}
