//! End-to-end acceptance run: eleven criteria, each with its own runtime
//! limit. One PASS/FAIL line per criterion goes to stderr; the test fails if
//! any criterion does.

use gapforge_core::eigen::{cursor_candidates, eigensplit};
use gapforge_core::escape::{escape_orbit, LinearProduct};
use gapforge_core::heights::{arakelov_height, matrix_height, weil_height, HeightValue};
use gapforge_core::jsr::{jsr_lower, jsr_upper};
use gapforge_core::lattice::{is_orthogonal, orthogonal_complement};
use gapforge_core::magnitude::{NormValue, Radical};
use gapforge_core::metrics::{
    arakelov_distance, delta_gap, dynamics_check, intersection_distance_check, point_to_subspace, proj_dist,
    subspace_dist, ProjPoint,
};
use gapforge_core::pingpong::{locgap_search, random_points, verify, verify_position_sample, PingPongCert, SearchSettings};
use gapforge_core::place::{product_over_places, wedge_norm};
use gapforge_core::qrnorm::{
    estimate_qr_norm, free_group_norm, free_return_probability, QrAction, WordMeasure,
};
use gapforge_core::rat::{factorize, int, rat, support_primes};
use gapforge_core::subspace::wedge;
use gapforge_core::walk::{anticoncentration_experiment, StepDistribution};
use gapforge_core::{serial, GenSet, Mat, MultiPoly, Place, Rat, Subspace};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::cmp::Ordering;
use std::io::Write;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn tol() -> Rat {
    rat(1, 1 << 30)
}

fn rng_for(criterion: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(20_240_601);
    r.set_stream(criterion);
    r
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- independent p-adic oracle ----------

fn vp(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(&p) {
        n /= &p;
        k += 1;
    }
    k
}

/// |q|_p computed from scratch.
fn padic_abs(q: &Rat, p: u64) -> Rat {
    if q.is_zero() {
        return Rat::zero();
    }
    let e = vp(q.numer(), p) - vp(q.denom(), p);
    let pp = Rat::from_integer(BigInt::from(p));
    if e >= 0 {
        Rat::one() / num_traits::pow(pp, e as usize)
    } else {
        num_traits::pow(pp, (-e) as usize)
    }
}

fn sup_norm(v: &[Rat], p: u64) -> Rat {
    v.iter().map(|x| padic_abs(x, p)).max().unwrap_or_else(Rat::zero)
}

// ---------- random instances ----------

fn rvec(rng: &mut ChaCha20Rng, d: usize, b: i64) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..d).map(|_| int(rng.gen_range(-b..=b))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn rpoint(rng: &mut ChaCha20Rng, d: usize, b: i64) -> ProjPoint {
    ProjPoint::new(&rvec(rng, d, b)).unwrap()
}

/// Subspaces spanned by subsets of a shared pool, so intersections are often
/// nontrivial.
fn pool(rng: &mut ChaCha20Rng, d: usize, b: i64) -> Vec<Vec<Rat>> {
    (0..d + 1).map(|_| rvec(rng, d, b)).collect()
}

fn from_pool(rng: &mut ChaCha20Rng, pool: &[Vec<Rat>], k: usize) -> Subspace {
    let d = pool[0].len();
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    for i in (1..idx.len()).rev() {
        idx.swap(i, rng.gen_range(0..=i));
    }
    let rows: Vec<Vec<Rat>> = idx[..k].iter().map(|&i| pool[i].clone()).collect();
    Subspace::span(d, &rows)
}

fn rsub(rng: &mut ChaCha20Rng, d: usize, k: usize, b: i64) -> Subspace {
    let rows: Vec<Vec<Rat>> = (0..k).map(|_| rvec(rng, d, b)).collect();
    Subspace::span(d, &rows)
}

/// A random nonzero vector of a nonzero subspace.
fn rmember(rng: &mut ChaCha20Rng, w: &Subspace) -> Vec<Rat> {
    loop {
        let mut v = vec![Rat::zero(); w.ambient()];
        for b in w.basis() {
            let c = int(rng.gen_range(-3..=3));
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn rmat(rng: &mut ChaCha20Rng, d: usize, b: i64) -> Mat {
    Mat::new(d, d, (0..d * d).map(|_| int(rng.gen_range(-b..=b))).collect())
}

fn rinvertible(rng: &mut ChaCha20Rng, d: usize, b: i64) -> Mat {
    loop {
        let m = rmat(rng, d, b);
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn finite_place(rng: &mut ChaCha20Rng) -> u64 {
    [2, 3, 5, 7][rng.gen_range(0..4)]
}

// ---------- comparisons ----------

/// a ≤ b: exact at finite places, not contradicted by the enclosures at ∞.
fn le(a: &NormValue, b: &NormValue, v: Place) -> bool {
    match v {
        Place::Finite(_) => a.is_exact() && b.is_exact() && a.le_certain(b),
        Place::Infinite => a.le_possible(b),
    }
}

fn eq(a: &NormValue, b: &NormValue, v: Place) -> bool {
    match (v, &a.exact, &b.exact) {
        (Place::Finite(_), Some(x), Some(y)) => x.cmp_exact(y) == Ordering::Equal,
        (Place::Finite(_), _, _) => false,
        (Place::Infinite, _, _) => a.cmp_certain(b).map_or(true, |o| o == Ordering::Equal),
    }
}

fn log2() -> HeightValue {
    weil_height(&int(2), &tol())
}

// ---------- criteria ----------

fn c1_product_formula() -> Outcome {
    let mut rng = rng_for(1);
    let lim = 1_000_000_000_000_000_000u64;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=lim) as i128 * if rng.gen_bool(0.5) { 1 } else { -1 };
        let d = rng.gen_range(1..=lim);
        let x = Rat::new(BigInt::from(n), BigInt::from(d));
        for part in [x.numer().magnitude(), x.denom().magnitude()] {
            let back = factorize(part).iter().fold(BigUint::one(), |acc, (q, e)| acc * num_traits::pow(q.clone(), *e as usize));
            check(&back == part, || format!("factorization of {part} does not multiply back"))?;
        }
        // the same product, with the finite factors from the oracle
        let mut prod = x.abs();
        for p in support_primes(&x) {
            prod *= padic_abs(&x, p);
        }
        check(prod.is_one(), || format!("oracle product for {x} is {prod}"))?;
        check(product_over_places(&x).is_one(), || format!("product over places of {x} is not 1"))?;
    }
    Ok("10000 rationals".into())
}

fn c2_wedge_equality() -> Outcome {
    let mut rng = rng_for(2);
    let (mut equal, mut strict) = (0, 0);
    for _ in 0..1000 {
        let p = finite_place(&mut rng);
        let d = rng.gen_range(3..=4);
        let b = 2 * p as i64;
        let kv = rng.gen_range(1..d);
        let kw = rng.gen_range(1..=d - kv);
        let v = rsub(&mut rng, d, kv, b);
        let w = rsub(&mut rng, d, kw, b);
        let mut rows = v.basis().to_vec();
        rows.extend(w.basis().iter().cloned());
        let joint = wedge(&rows, d);
        let wv = wedge(v.basis(), d);
        let ww = wedge(w.basis(), d);
        let lhs = sup_norm(&joint, p);
        let rhs = sup_norm(&wv, p) * sup_norm(&ww, p);
        let core = wedge_norm(&joint, Place::Finite(p), &tol());
        check(core.as_rational() == Some(&lhs), || "wedge_norm disagrees with the oracle".into())?;
        check(lhs <= rhs, || format!("wedge inequality fails at p = {p}"))?;
        check((lhs == rhs) == is_orthogonal(&v, &w, p), || format!("equality case disagrees with orthogonality at p = {p}"))?;
        if lhs == rhs {
            equal += 1;
        } else {
            strict += 1;
        }
    }
    Ok(format!("1000 pairs ({equal} equal, {strict} strict)"))
}

fn c3_metric_laws() -> Outcome {
    let mut rng = rng_for(3);
    let t = tol();
    let mut counts = [0usize; 2];
    for (slot, reps) in [(0usize, 10_000usize), (1, 1_000)] {
        for _ in 0..reps {
            let (v, b) = if slot == 0 {
                let p = finite_place(&mut rng);
                (Place::Finite(p), 2 * p as i64)
            } else {
                (Place::Infinite, 6)
            };
            let d = 3;
            // triangle inequality
            let (x, y, z) = (rpoint(&mut rng, d, b), rpoint(&mut rng, d, b), rpoint(&mut rng, d, b));
            let xz = proj_dist(&x, &z, v, &t);
            let sum = proj_dist(&x, &y, v, &t).interval().add(&proj_dist(&y, &z, v, &t).interval());
            check(xz.lo <= sum.hi && (v.is_archimedean() || xz.is_exact()), || format!("triangle inequality at {v}"))?;
            // disjoint subspaces: δ = d
            let (a, c) = loop {
                let a = rsub(&mut rng, d, 1, b);
                let k = rng.gen_range(1..=2);
                let c = rsub(&mut rng, d, k, b);
                if a.intersect(&c).is_zero() {
                    break (a, c);
                }
            };
            check(eq(&delta_gap(&a, &c, v, &t), &subspace_dist(&a, &c, v, &t), v), || format!("delta of disjoint subspaces at {v}"))?;
            // symmetry
            let pl = pool(&mut rng, d, b);
            let (ka, kc) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let a = from_pool(&mut rng, &pl, ka);
            let c = from_pool(&mut rng, &pl, kc);
            check(eq(&delta_gap(&a, &c, v, &t), &delta_gap(&c, &a, v, &t), v), || format!("delta symmetry at {v}"))?;
            // monotonicity under passing to a part orthogonal to V ∩ W
            let i = a.intersect(&c);
            let comp = match v {
                Place::Finite(p) => orthogonal_complement(&i, &a, p),
                Place::Infinite => a.intersect(&i.euclidean_complement()),
            };
            if !comp.is_zero() {
                let k = rng.gen_range(1..=comp.dim());
                let rows: Vec<Vec<Rat>> = (0..k).map(|_| rmember(&mut rng, &comp)).collect();
                let sub = Subspace::span(d, &rows);
                check(le(&delta_gap(&a, &c, v, &t), &delta_gap(&sub, &c, v, &t), v), || format!("monotonicity at {v}"))?;
            }
            // point-to-subspace distance is an infimum
            let k = rng.gen_range(1..=2);
            let w = rsub(&mut rng, d, k, b);
            let inf = point_to_subspace(&x, &w, v, &t);
            for _ in 0..2 {
                let yw = ProjPoint::new(&rmember(&mut rng, &w)).unwrap();
                check(le(&inf, &proj_dist(&x, &yw, v, &t), v), || format!("infimum law at {v}"))?;
            }
            counts[slot] += 1;
        }
    }
    Ok(format!("{} finite and {} archimedean instances per law", counts[0], counts[1]))
}

fn diag_conjugate(rng: &mut ChaCha20Rng, d: usize, v: Place) -> (Mat, Vec<Rat>) {
    loop {
        let p = rinvertible(rng, d, 3);
        let lambdas: Vec<Rat> = (0..d)
            .map(|_| {
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                match v {
                    Place::Finite(q) => {
                        let units: Vec<i64> = [1, 2, 3, 4, 6, 7].into_iter().filter(|u| u % q as i64 != 0).collect();
                        let u = units[rng.gen_range(0..units.len())];
                        let e = rng.gen_range(-2i32..=2);
                        let qq = Rat::from_integer(BigInt::from(q));
                        int(s * u) * num_traits::pow(if e >= 0 { qq.clone() } else { Rat::one() / qq }, e.unsigned_abs() as usize)
                    }
                    Place::Infinite => rat(s * rng.gen_range(1..=9), rng.gen_range(1..=5)),
                }
            })
            .collect();
        let g = p.mul(&Mat::diag(&lambdas)).mul(&p.inverse().unwrap());
        let cands = cursor_candidates(&g, v, &tol());
        if !cands.is_empty() {
            return (g, cands);
        }
    }
}

fn c4_intersection_and_dynamics() -> Outcome {
    let mut rng = rng_for(4);
    let t = tol();
    let place = |rng: &mut ChaCha20Rng| {
        if rng.gen_bool(0.25) {
            Place::Infinite
        } else {
            Place::Finite([2, 3, 5][rng.gen_range(0..3)])
        }
    };
    for _ in 0..1000 {
        let v = place(&mut rng);
        let d = rng.gen_range(3..=4);
        let b = v.prime().map_or(5, |p| 2 * p as i64);
        let pl = pool(&mut rng, d, b);
        let r = rng.gen_range(2..=3);
        let vs: Vec<Subspace> = (0..r).map(|_| { let k = rng.gen_range(1..d); from_pool(&mut rng, &pl, k) }).collect();
        let x = rpoint(&mut rng, d, b);
        let rep = intersection_distance_check(&x, &vs, v, &t).map_err(|e| e.to_string())?;
        check(rep.holds && (v.is_archimedean() || rep.certain), || format!("intersection bound at {v}"))?;
    }
    for _ in 0..1000 {
        let v = place(&mut rng);
        let d = rng.gen_range(2..=3);
        let (g, cands) = diag_conjugate(&mut rng, d, v);
        let omega = cands[rng.gen_range(0..cands.len())].clone();
        let x = rpoint(&mut rng, d, 6);
        let n = rng.gen_range(1..=5);
        let rep = dynamics_check(&g, &omega, &x, n, v, &t).map_err(|e| e.to_string())?;
        check(rep.holds && (v.is_archimedean() || rep.certain), || format!("dynamics bound at {v}, n = {n}"))?;
    }
    Ok("1000 + 1000 instances".into())
}

fn c5_heights() -> Outcome {
    let mut rng = rng_for(5);
    let t = tol();
    for _ in 0..1000 {
        let d = rng.gen_range(2..=4);
        let pl = pool(&mut rng, d, 9);
        let (ka, kb) = (rng.gen_range(1..=d), rng.gen_range(1..=d));
        let a = from_pool(&mut rng, &pl, ka);
        let b = from_pool(&mut rng, &pl, kb);
        // submodularity
        let lhs = arakelov_height(&a.intersect(&b), &t).add(&arakelov_height(&a.sum(&b), &t), &t);
        let rhs = arakelov_height(&a, &t).add(&arakelov_height(&b, &t), &t);
        check(lhs.le_possible(&rhs), || "submodularity".into())?;
        // δ_Ar(V, W) ≤ d·max(h(V), h(W))
        let ha = arakelov_height(&a, &t);
        let hb = arakelov_height(&b, &t);
        let big = if ha.le_possible(&hb) && !hb.le_possible(&ha) { hb } else if hb.le_possible(&ha) && !ha.le_possible(&hb) { ha } else {
            // undecided: the larger upper end is still an upper bound
            if ha.hi >= hb.hi { ha } else { hb }
        };
        let dist = arakelov_distance(&a, &b, &t);
        check(dist.le_possible(&big.scale(&int(d as i64), &t)), || "Arakelov distance bound".into())?;
        // h_Ar(im A) ≤ rank(A)·h(A)
        let r = rng.gen_range(1..=d);
        let left = Mat::new(d, r, (0..d * r).map(|_| int(rng.gen_range(-9..=9))).collect());
        let right = Mat::new(r, d, (0..d * r).map(|_| int(rng.gen_range(-9..=9))).collect());
        let m = left.mul(&right);
        let im = Subspace::span(d, &(0..d).map(|j| m.col(j)).collect::<Vec<_>>());
        let bound = matrix_height(&m, &t).scale(&int(im.dim() as i64), &t);
        check(arakelov_height(&im, &t).le_possible(&bound), || "image bound".into())?;
        // invariant subspaces: h_Ar(W) ≤ d²(2h(A) + log 2)
        let v = if rng.gen_bool(0.5) { Place::Infinite } else { Place::Finite([2, 3, 5][rng.gen_range(0..3)]) };
        let (g, cands) = diag_conjugate(&mut rng, d, v);
        let omega = &cands[rng.gen_range(0..cands.len())];
        let split = eigensplit(&g, v, omega, &t).map_err(|e| e.to_string())?;
        let hg = matrix_height(&g, &t);
        let bound = hg.scale(&int(2), &t).add(&log2(), &t).scale(&int((d * d) as i64), &t);
        for w in [&split.a_part, &split.r_part] {
            check(w.is_invariant(&g), || "eigensplit part is not invariant".into())?;
            check(arakelov_height(w, &t).le_possible(&bound), || "invariant-subspace bound".into())?;
        }
    }
    let h2 = log2();
    check(h2.magnitude == Some(Radical::rational(int(2))), || "h(2) is not log 2".into())?;
    for d in 1..=5 {
        for k in 0..=d {
            let idx: Vec<usize> = (0..k).collect();
            let h = arakelov_height(&Subspace::coordinate(d, &idx), &t);
            check(h.magnitude == Some(Radical::rational(int(1))) && h.lo.is_zero() && h.hi.is_zero(), || format!("coordinate subspace of dim {k} in {d}"))?;
        }
    }
    Ok("1000 instances of each bound; exact values match".into())
}

fn c6_jsr() -> Outcome {
    let mut rng = rng_for(6);
    let t = tol();
    for _ in 0..100 {
        let s = GenSet::new(vec![rinvertible(&mut rng, 2, 6), rinvertible(&mut rng, 2, 6)]).unwrap();
        let v = Place::Finite([2, 3, 5][rng.gen_range(0..3)]);
        let lo = jsr_lower(&s, v, 4, 1_000_000, &t).map_err(|e| e.to_string())?.value;
        let lo = lo.exact.ok_or("lower bound not exact")?;
        for n in 1..=12 {
            let hi = jsr_upper(&s, v, n, 1_000_000, &t).map_err(|e| e.to_string())?;
            let hi = hi.exact.ok_or("upper bound not exact")?;
            check(lo.cmp_exact(&hi) != Ordering::Greater, || format!("lower bound exceeds upper at {v}, n = {n}"))?;
        }
    }
    let golden = GenSet::new(vec![Mat::from_ints(&[&[1, 1], &[0, 1]]), Mat::from_ints(&[&[1, 0], &[1, 1]])]).unwrap();
    let phi = jsr_lower(&golden, Place::Infinite, 4, 1_000_000, &rat(1, 1 << 26)).map_err(|e| e.to_string())?.value;
    let f = |x: &Rat| x * x - x - int(1);
    check(phi.width() <= rat(1, 1_000_000), || "golden enclosure too wide".into())?;
    check(f(&phi.lo) <= int(0) && f(&phi.hi) >= int(0) && phi.lo > int(1), || "enclosure misses the golden ratio".into())?;
    Ok(format!("100 pairs; phi in [{:.9}, {:.9}]", phi.lo_f64(), phi.hi_f64()))
}

trait Ends {
    fn lo_f64(&self) -> f64;
    fn hi_f64(&self) -> f64;
}

impl Ends for NormValue {
    fn lo_f64(&self) -> f64 {
        self.interval().to_f64_pair().0
    }
    fn hi_f64(&self) -> f64 {
        self.interval().to_f64_pair().1
    }
}

/// X ↦ gX on row-major flattened d×d matrices.
fn left_mult(g: &Mat) -> Mat {
    let d = g.rows();
    let mut m = Mat::zero(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                m.set(i * d + j, k * d + j, g.get(i, k).clone());
            }
        }
    }
    m
}

fn flat(m: &Mat) -> Vec<Rat> {
    m.entries().to_vec()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn c7_escape() -> Outcome {
    let mut rng = rng_for(7);
    let mut longest = 0;
    for _ in 0..200 {
        let d = rng.gen_range(2..=3);
        // two generators whose words span all d×d matrices, one with
        // determinant of absolute value ≥ 2
        let gens = loop {
            let g = vec![rinvertible(&mut rng, d, 3), rinvertible(&mut rng, d, 3)];
            if g[0].det().abs() < int(2) {
                continue;
            }
            let mut words = vec![Mat::identity(d)];
            let mut layer = words.clone();
            for _ in 0..3 {
                layer = layer.iter().flat_map(|w| g.iter().map(move |s| w.mul(s))).collect();
                words.extend(layer.iter().cloned());
            }
            if Subspace::span(d * d, &words.iter().map(flat).collect::<Vec<_>>()).dim() == d * d {
                break g;
            }
        };
        let early = [Mat::identity(d), gens[0].clone(), gens[1].clone(), gens[0].mul(&gens[1]), gens[1].mul(&gens[0])];
        let deg = rng.gen_range(1..=4);
        let factors: Vec<Vec<Rat>> = (0..deg)
            .map(|_| {
                let q = flat(&early[rng.gen_range(0..early.len())]);
                loop {
                    let c = rvec(&mut rng, d * d, 5);
                    let cq: Rat = c.iter().zip(&q).map(|(a, b)| a * b).sum();
                    let qq: Rat = q.iter().map(|a| a * a).sum();
                    let f: Vec<Rat> = c.iter().zip(&q).map(|(a, b)| a * &qq - &cq * b).collect();
                    if f.iter().any(|x| !x.is_zero()) {
                        return f;
                    }
                }
            })
            .collect();
        let f = LinearProduct { nvars: d * d, factors: factors.clone() };
        let mut sigma = vec![Mat::identity(d * d)];
        sigma.extend(gens.iter().map(left_mult));
        let u = flat(&Mat::identity(d));
        let e = escape_orbit(&sigma, &u, &f, 50_000_000).map_err(|e| e.to_string())?;
        let bound = binom((d * d) as u64 + deg as u64, deg as u64);
        let (Some(word), Some(point)) = (e.word.clone(), e.point.clone()) else {
            return Err(format!("no witness for d = {d}, deg = {deg}"));
        };
        let mut x = u.clone();
        for &i in word.iter().rev() {
            x = sigma[i].apply(&x);
        }
        check(x == point, || "witness point does not match its word".into())?;
        let val = factors.iter().fold(Rat::one(), |acc, c| acc * c.iter().zip(&x).map(|(a, b)| a * b).sum::<Rat>());
        check(!val.is_zero(), || "witness does not escape".into())?;
        check((e.n as u64) < bound && (word.len() as u64) < bound, || format!("witness length {} exceeds the bound {bound}", e.n))?;
        longest = longest.max(e.n);
    }
    Ok(format!("200 instances, longest witness {longest}"))
}

fn search_cert(gens: Vec<Mat>, place: Option<Place>) -> Result<(PingPongCert, u32), String> {
    let s = GenSet::new(gens).map_err(|e| e.to_string())?;
    let set = SearchSettings { r: 2, m: 2, m_cap: 4, budget: 2_000_000, tol: tol(), place };
    let res = locgap_search(&s, &set).map_err(|e| e.to_string())?;
    Ok((res.cert, res.min_n))
}

fn with_inverses(ms: &[Mat]) -> Vec<Mat> {
    let mut out = vec![Mat::identity(ms[0].rows())];
    for m in ms {
        out.push(m.clone());
        out.push(m.inverse().unwrap());
    }
    out
}

fn five_adic_set() -> Vec<Mat> {
    with_inverses(&[Mat::diag(&[int(5), rat(1, 5)]), Mat::from_ints(&[&[1, 1], &[1, 2]])])
}

/// d(x, y) for lines in Q², from scratch.
fn line_dist(x: &[Rat], y: &[Rat], p: u64) -> Rat {
    padic_abs(&(&x[0] * &y[1] - &x[1] * &y[0]), p) / (sup_norm(x, p) * sup_norm(y, p))
}

fn c8_pingpong() -> Outcome {
    let t = tol();
    let (cert, min_n) = search_cert(five_adic_set(), None)?;
    check(cert.place == Place::Finite(5) && min_n == 1 && cert.n == 1, || format!("got place {} and n = {min_n}", cert.place))?;
    // hand evaluation: (C_k²α)ⁿ < δ⁴ with C_k = 1, Δ-exponent 0 in dimension 2
    let p = 5;
    let split = eigensplit(&cert.gamma, cert.place, &cert.omega, &t).map_err(|e| e.to_string())?;
    let (a, r) = (split.a_part.basis()[0].clone(), split.r_part.basis()[0].clone());
    let mut delta: Option<Rat> = None;
    for fam in [&a, &r] {
        let lines: Vec<Vec<Rat>> = cert.conjugators.iter().map(|g| g.apply(fam)).collect();
        for i in 0..lines.len() {
            for j in 0..lines.len() {
                if i != j {
                    let dd = line_dist(&lines[i], &lines[j], p);
                    delta = Some(delta.map_or(dd.clone(), |m: Rat| m.min(dd)));
                }
            }
        }
    }
    let delta = delta.unwrap();
    let eig: Vec<Rat> = (0..2).map(|i| padic_abs(cert.gamma.get(i, i), p)).collect();
    let alpha = eig.iter().min().unwrap() / eig.iter().max().unwrap();
    let hand_n = (1..).find(|&n| num_traits::pow(alpha.clone(), n) < num_traits::pow(delta.clone(), 4)).unwrap() as u32;
    check(hand_n == cert.n, || format!("hand evaluation gives n = {hand_n}"))?;
    check(cert.delta.as_rational() == Some(&delta) && cert.alpha.as_rational() == Some(&alpha), || "delta or alpha differ from the hand values".into())?;
    check(verify(&cert, &t).accepted(), || "verify rejects".into())?;
    let pts = random_points(2, 1000, 1000, 8);
    let pos = verify_position_sample(&cert, None, &pts, &t).map_err(|e| e.to_string())?;
    check(pos.violations() == 0 && pos.checked == 1000, || format!("{} position violations", pos.violations()))?;
    // the command-line verifier on the same certificate
    let dir = std::env::temp_dir().join(format!("gapforge-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("cert.json");
    let out = dir.join("verify.json");
    std::fs::write(&path, serial::to_string(&cert)).map_err(|e| e.to_string())?;
    let code = gapforge_cli::run(["gapforge", "verify", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let report = std::fs::read_to_string(&out).unwrap_or_default();
    let _ = std::fs::remove_dir_all(&dir);
    check(code == 0, || format!("gapforge verify exited with {code}: {report}"))?;
    Ok(format!("place 5, n = 1, delta = {delta}, alpha = {alpha}, {} points clean", pos.checked))
}

fn kesten_set() -> Vec<Mat> {
    let a = Mat::from_ints(&[&[1, 2], &[0, 1]]);
    let b = Mat::from_ints(&[&[1, 0], &[2, 1]]);
    (1..=6)
        .flat_map(|i| {
            let ai = a.pow(i);
            let w = ai.mul(&b).mul(&ai.inverse().unwrap());
            let wi = w.inverse().unwrap();
            [w, wi]
        })
        .collect()
}

fn c9_kesten() -> Outcome {
    let t = tol();
    let a = Mat::from_ints(&[&[1, 2], &[0, 1]]);
    let b = Mat::from_ints(&[&[1, 0], &[2, 1]]);
    let s = GenSet::new(vec![a.clone(), a.inverse().unwrap(), b.clone(), b.inverse().unwrap()]).unwrap();
    let mu = WordMeasure::uniform_on_generators(&s);
    let base = ProjPoint::from_ints(&[1, 0]).unwrap();
    let mut act = QrAction::new(s, base.clone()).map_err(|e| e.to_string())?;
    let q = estimate_qr_norm(&mut act, &mu, 10, 10, 200_000_000, &t).map_err(|e| e.to_string())?;
    let target = free_group_norm(2, &t);
    check(q.lower.le_possible(&target) && target.le_possible(&q.upper), || "bracket misses sqrt(3)/2".into())?;
    check(q.lower.lo >= rat(80, 100), || format!("lower {:.4} below 0.80", q.lower.lo_f64()))?;
    check(q.upper.hi <= rat(93, 100), || format!("upper {:.4} above 0.93", q.upper.hi_f64()))?;
    // twelve free generators in 1-ping-pong position: averaged norm ≤ 2√(1/12)
    let f = GenSet::new(kesten_set()).unwrap();
    let mu_f = WordMeasure::uniform_on_generators(&f);
    let mut act_f = QrAction::new(f, base).map_err(|e| e.to_string())?;
    let qf = estimate_qr_norm(&mut act_f, &mu_f, 4, 3, 200_000_000, &t).map_err(|e| e.to_string())?;
    let (_, avg) = gapforge_core::pingpong::markov_norm_bound(12, 1, &t).map_err(|e| e.to_string())?;
    check(qf.shell_profiles_recur && qf.upper.le_certain(&avg), || format!("12-element upper {:.4} vs {:.4}", qf.upper.hi_f64(), avg.hi_f64()))?;
    Ok(format!(
        "[{:.4}, {:.4}] around {:.4}; 12 elements: {:.4} <= {:.4}",
        q.lower.lo_f64(),
        q.upper.hi_f64(),
        target.lo_f64(),
        qf.upper.hi_f64(),
        avg.lo_f64()
    ))
}

fn c10_anticoncentration() -> Outcome {
    let a = Mat::from_ints(&[&[1, 2], &[0, 1]]);
    let b = Mat::from_ints(&[&[1, 0], &[2, 1]]);
    let step = StepDistribution::uniform(vec![a.clone(), a.inverse().unwrap(), b.clone(), b.inverse().unwrap()]).map_err(|e| e.to_string())?;
    let identity: Vec<MultiPoly> = (0..2)
        .flat_map(|i| (0..2).map(move |j| MultiPoly::entry(2, i, j).add(&MultiPoly::constant(4, int(-((i == j) as i64))))))
        .collect();
    let ns: Vec<usize> = (2..=8).map(|k| 2 * k).collect();
    let trials = 100_000;
    let rep = anticoncentration_experiment(&[step], &identity, &ns, trials, 10, None).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for e in &rep.estimates {
        let p = gapforge_core::rat::to_f64(&free_return_probability(2, e.n));
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let z = (e.freq - p).abs() / sigma;
        worst = worst.max(z);
        check(z <= 3.0, || format!("n = {}: {} vs exact {p:.6} ({z:.2} sigma)", e.n, e.freq))?;
    }
    let fit = rep.fitted_rate.clone().ok_or("no decay fit")?;
    check(fit.rate > 0.0 && fit.ci_lo > 0.0, || format!("rate {} with interval [{}, {}]", fit.rate, fit.ci_lo, fit.ci_hi))?;
    Ok(format!("worst deviation {worst:.2} sigma; rate {:.4} in [{:.4}, {:.4}]", fit.rate, fit.ci_lo, fit.ci_hi))
}

fn mutate(cert: &PingPongCert, rng: &mut ChaCha20Rng) -> (PingPongCert, &'static str) {
    let t = tol();
    let mut m = cert.clone();
    let kind = rng.gen_range(0..5);
    match kind {
        0 => m.n += rng.gen_range(1..=3),
        1 => m.n -= 1,
        2 => {
            let k = rng.gen_range(2..=50);
            let f = if rng.gen_bool(0.5) { rat(k + 1, k) } else { rat(k - 1, k) };
            m.delta = m.delta.scale(&f, &t);
        }
        3 => {
            let iv = m.delta.interval();
            let shift = rat(rng.gen_range(1..=9), 10);
            m.delta = NormValue::enclosure(gapforge_core::interval::Interval::new(&iv.lo * &shift, &iv.hi * &shift));
        }
        _ => {
            let i = rng.gen_range(0..m.conjugators.len());
            let d = m.dim();
            let (r, c) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let g = &mut m.conjugators[i];
            let x = g.get(r, c) + int(if rng.gen_bool(0.5) { 1 } else { -1 });
            g.set(r, c, x);
        }
    }
    (m, ["n raised", "n lowered", "delta scaled", "delta enclosure shifted", "conjugator entry"][kind])
}

fn c11_fuzzing() -> Outcome {
    let mut rng = rng_for(11);
    let t = tol();
    let (c5, _) = search_cert(five_adic_set(), None)?;
    let two_adic = with_inverses(&[Mat::diag(&[int(2), rat(1, 2)]), Mat::from_ints(&[&[1, 2], &[2, 5]])]);
    let (c2, _) = search_cert(two_adic, Some(Place::Finite(2)))?;
    let certs = [c5, c2];
    for c in &certs {
        check(verify(c, &t).accepted(), || "an unmutated certificate is rejected".into())?;
    }
    let mut kinds = std::collections::BTreeMap::new();
    for i in 0..100 {
        let (m, kind) = mutate(&certs[i % certs.len()], &mut rng);
        *kinds.entry(kind).or_insert(0) += 1;
        let ver = verify(&m, &t);
        check(!ver.accepted(), || format!("mutation #{i} ({kind}) accepted"))?;
        // the wire form must be rejected too
        let back: PingPongCert = serial::from_str(&serial::to_string(&m)).map_err(|e| e.to_string())?;
        check(!verify(&back, &t).accepted(), || format!("mutation #{i} ({kind}) accepted after a round trip"))?;
    }
    Ok(format!("100 rejected; n of the 2-adic certificate = {}; {kinds:?}", certs[1].n))
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("product formula", 5, c1_product_formula),
        ("wedge equality law", 30, c2_wedge_equality),
        ("triangle inequality and delta laws", 60, c3_metric_laws),
        ("intersection and dynamics bounds", 120, c4_intersection_and_dynamics),
        ("height suite", 60, c5_heights),
        ("joint spectral radius at finite places", 120, c6_jsr),
        ("escape bound audit", 60, c7_escape),
        ("ping-pong end to end", 30, c8_pingpong),
        ("Kesten bracket", 600, c9_kesten),
        ("anti-concentration decay", 600, c10_anticoncentration),
        ("certificate fuzzing", 30, c11_fuzzing),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    // the harness has already printed "test acceptance ... " without a newline
    let _ = writeln!(std::io::stderr());
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let t0 = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let el = t0.elapsed();
        let in_time = el <= Duration::from_secs(*limit);
        let pass = out.is_ok() && in_time;
        let detail = match &out {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        let timing = if in_time { format!("{:.1}s", el.as_secs_f64()) } else { format!("{:.1}s, limit {limit}s", el.as_secs_f64()) };
        let _ = writeln!(std::io::stderr(), "{} {k:>2} {name}: {detail} ({timing})", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
