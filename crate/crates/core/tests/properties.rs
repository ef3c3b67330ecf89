use gapforge_core::eigen::{cursor_candidates, eigensplit, eigenvalue_moduli};
use gapforge_core::escape::escape_variety;
use gapforge_core::heights::{arakelov_height, matrix_height, weil_height};
use gapforge_core::jsr::{jsr_lower, jsr_upper};
use gapforge_core::metrics::proj_dist;
use gapforge_core::newton::root_exponents;
use gapforge_core::place::{abs_value, operator_norm, vector_norm};
use gapforge_core::qrnorm::{estimate_qr_norm, QrAction, WordMeasure};
use gapforge_core::rat::{int, rat, valuation};
use gapforge_core::walk::wilson;
use gapforge_core::{serial, GenSet, HeightValue, Mat, MultiPoly, NormValue, Place, Poly, ProjPoint, Radical, Rat, Subspace};
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::cmp::Ordering;

fn tol() -> Rat {
    rat(1, 1 << 30)
}

fn q() -> impl Strategy<Value = Rat> {
    (-60i64..=60, 1i64..=40).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_q() -> impl Strategy<Value = Rat> {
    q().prop_filter("nonzero", |x| !x.is_zero())
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn place() -> impl Strategy<Value = Place> {
    prop::sample::select(vec![Place::Infinite, Place::Finite(2), Place::Finite(3), Place::Finite(5)])
}

fn mat(d: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(-6i64..=6, d * d).prop_map(move |v| Mat::new(d, d, v.into_iter().map(int).collect()))
}

fn invertible(d: usize) -> impl Strategy<Value = Mat> {
    mat(d).prop_filter("invertible", |m| !m.det().is_zero())
}

fn vector(d: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(q(), d).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero()))
}

fn subspace(d: usize) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(vector(d), 1..d).prop_map(move |rows| Subspace::span(d, &rows))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ultrametric(x in q(), y in q(), p in prime()) {
        let (ax, ay) = (abs_value(&x, Place::Finite(p)), abs_value(&y, Place::Finite(p)));
        let s = abs_value(&(&x + &y), Place::Finite(p));
        let m = ax.max(&ay);
        prop_assert!(s.le_certain(&m));
        if ax.cmp_certain(&ay) != Some(Ordering::Equal) {
            prop_assert_eq!(s.cmp_certain(&m), Some(Ordering::Equal));
        }
    }

    #[test]
    fn norm_values_are_well_formed(v in vector(3), w in place()) {
        let n = vector_norm(&v, w, &tol());
        prop_assert!(n.lo <= n.hi && n.lo >= Rat::zero());
        prop_assert!(n.width() <= tol());
        if !w.is_archimedean() {
            prop_assert!(n.is_exact());
        }
    }

    #[test]
    fn operator_norm_is_submultiplicative(a in mat(2), c in mat(2), w in place()) {
        let ab = operator_norm(&a.mul(&c), w, &tol());
        let prod = operator_norm(&a, w, &tol()).mul(&operator_norm(&c, w, &tol()), &tol());
        prop_assert!(ab.le_possible(&prod));
    }

    #[test]
    fn height_of_transpose(a in mat(3)) {
        prop_assume!(a.entries().iter().any(|x| !x.is_zero()));
        let (h, ht) = (matrix_height(&a, &tol()), matrix_height(&a.transpose(), &tol()));
        prop_assert!(h.le_possible(&ht) && ht.le_possible(&h));
        prop_assert_eq!(h.magnitude, ht.magnitude);
    }

    #[test]
    fn height_subadditivity(a in mat(2), b in mat(2)) {
        let t = tol();
        let (ha, hb) = (matrix_height(&a, &t), matrix_height(&b, &t));
        prop_assert!(matrix_height(&a.mul(&b), &t).le_possible(&ha.add(&hb, &t)));
        let log2 = weil_height(&int(2), &t);
        prop_assert!(matrix_height(&a.add(&b), &t).le_possible(&ha.add(&hb, &t).add(&log2, &t)));
    }

    #[test]
    fn arakelov_height_nonnegative(v in subspace(4)) {
        let h = arakelov_height(&v, &tol());
        prop_assert!(h.lo >= Rat::zero() && h.lo <= h.hi);
    }

    #[test]
    fn inverse_moduli_are_reciprocal(a in invertible(3), p in prime()) {
        let v = Place::Finite(p);
        let exact = |b: &Mat| -> Vec<Radical> { eigenvalue_moduli(b, v, &tol()).into_iter().map(|x| x.exact.unwrap()).collect() };
        let mut m = exact(&a);
        let mut mi: Vec<Radical> = exact(&a.inverse().unwrap()).iter().map(Radical::recip).collect();
        m.sort_by(|x, y| x.cmp_exact(y));
        mi.sort_by(|x, y| x.cmp_exact(y));
        prop_assert_eq!(m.len(), mi.len());
        for (x, y) in m.iter().zip(&mi) {
            prop_assert_eq!(x.cmp_exact(y), Ordering::Equal);
        }
    }

    #[test]
    fn eigensplit_parts_are_complementary_and_invariant(p in invertible(3), l in prop::collection::vec(nonzero_q(), 3), w in place()) {
        let a = p.mul(&Mat::diag(&l)).mul(&p.inverse().unwrap());
        let cands = cursor_candidates(&a, w, &tol());
        for omega in cands {
            let s = eigensplit(&a, w, &omega, &tol()).unwrap();
            prop_assert!(s.a_part.is_invariant(&a) && s.r_part.is_invariant(&a));
            prop_assert_eq!(s.a_part.dim() + s.r_part.dim(), 3);
            prop_assert!(s.a_part.sum(&s.r_part).is_full());
            if let (Some(small), Some(big)) = (&s.small, &s.big) {
                let om = NormValue::rational(omega.clone());
                prop_assert!(small.lt_certain(&om) && om.le_certain(big));
            }
        }
    }

    #[test]
    fn newton_slopes_match_rational_roots(roots in prop::collection::vec(nonzero_q(), 1..5), p in prime()) {
        let f = roots.iter().fold(Poly::one(), |acc, r| acc.mul(&Poly::linear_root(r)));
        let mut got = root_exponents(&f, p);
        let mut want: Vec<Rat> = roots.iter().map(|r| int(-valuation(r, p).unwrap())).collect();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn projective_distance_is_symmetric_and_bounded(x in vector(3), y in vector(3), w in place()) {
        let (x, y) = (ProjPoint::new(&x).unwrap(), ProjPoint::new(&y).unwrap());
        let (a, b) = (proj_dist(&x, &y, w, &tol()), proj_dist(&y, &x, w, &tol()));
        prop_assert!(a.le_possible(&b) && b.le_possible(&a));
        prop_assert!(a.le_possible(&NormValue::one()));
        prop_assert!(proj_dist(&x, &x, w, &tol()).is_zero());
    }

    #[test]
    fn product_words_reproduce_entries(a in invertible(2), b in invertible(2), n in 1usize..4) {
        let s = GenSet::new(vec![a, b]).unwrap();
        for m in s.product_set(n, 100_000).unwrap() {
            prop_assert_eq!(&s.eval_word(m.word().unwrap()).unwrap(), &m);
        }
    }

    #[test]
    fn wilson_contains_frequency(n in 1u64..5000, frac in 0.0f64..=1.0) {
        let hits = ((n as f64) * frac).floor() as u64;
        let (lo, hi) = wilson(hits, n, 1.96);
        let f = hits as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= f + 1e-12 && f <= hi + 1e-12 && hi <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jsr_lower_is_stable_and_below_upper(a in invertible(2), b in invertible(2), p in prime()) {
        let s = GenSet::new(vec![a, b]).unwrap();
        let v = Place::Finite(p);
        let t = tol();
        let l4 = jsr_lower(&s, v, 4, 1_000_000, &t).unwrap().value;
        let l6 = jsr_lower(&s, v, 6, 1_000_000, &t).unwrap().value;
        prop_assert_eq!(l4.cmp_certain(&l6), Some(Ordering::Equal));
        for n in 1..=5 {
            prop_assert!(l4.le_certain(&jsr_upper(&s, v, n, 1_000_000, &t).unwrap()));
        }
    }

    #[test]
    fn variety_witnesses_are_off_the_variety(a in invertible(2), b in invertible(2), i in 0usize..2, j in 0usize..2) {
        // the (i, j) entry equal to its value at the identity
        let f = MultiPoly::entry(2, i, j).add(&MultiPoly::constant(4, int(-((i == j) as i64))));
        let s = GenSet::new(vec![a, b]).unwrap();
        if let Ok(e) = escape_variety(&s, &f, 1_000_000) {
            prop_assert!(!f.eval_matrix(&e.element).is_zero());
            prop_assert_eq!(s.eval_word(&e.word).unwrap(), e.element);
        }
    }

    #[test]
    fn round_trips(m in mat(3), v in subspace(4), x in vector(3), h in q(), w in place()) {
        let t = tol();
        let back: Mat = serial::from_str(&serial::to_string(&m)).unwrap();
        prop_assert_eq!(back, m.clone());
        let back: Subspace = serial::from_str(&serial::to_string(&v)).unwrap();
        prop_assert_eq!(back, v);
        let pt = ProjPoint::new(&x).unwrap();
        let back: ProjPoint = serial::from_str(&serial::to_string(&pt)).unwrap();
        prop_assert_eq!(back, pt);
        let n = vector_norm(&x, w, &t);
        let back: NormValue = serial::from_str(&serial::to_string(&n)).unwrap();
        prop_assert_eq!(back, n);
        let hv: HeightValue = weil_height(&h, &t);
        let back: HeightValue = serial::from_str(&serial::to_string(&hv)).unwrap();
        prop_assert_eq!(back, hv);
        let back: Place = serial::from_str(&serial::to_string(&w)).unwrap();
        prop_assert_eq!(back, w);
        let f = MultiPoly::linear(&x);
        let back: MultiPoly = serial::from_str(&serial::to_string(&f)).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn qr_lower_bounds_are_monotone() {
    let a = Mat::from_ints(&[&[1, 2], &[0, 1]]);
    let b = Mat::from_ints(&[&[1, 0], &[2, 1]]);
    let s = GenSet::new(vec![a.clone(), a.inverse().unwrap(), b.clone(), b.inverse().unwrap()]).unwrap();
    let mu = WordMeasure::uniform_on_generators(&s);
    let mut act = QrAction::new(s, ProjPoint::from_ints(&[1, 0]).unwrap()).unwrap();
    let q = estimate_qr_norm(&mut act, &mu, 5, 5, 10_000_000, &tol()).unwrap();
    assert!(q.lower.le_possible(&q.upper));
    for w in q.lower_by_step.windows(2) {
        assert!(w[0].le_possible(&w[1]));
    }
    assert!(q.return_probs.iter().all(|p| *p >= Rat::zero() && *p <= Rat::one()));
}

#[test]
fn certificate_round_trip() {
    let t = tol();
    let s = GenSet::new(vec![
        Mat::identity(2),
        Mat::diag(&[int(5), rat(1, 5)]),
        Mat::diag(&[rat(1, 5), int(5)]),
        Mat::from_ints(&[&[1, 1], &[1, 2]]),
        Mat::from_ints(&[&[2, -1], &[-1, 1]]),
    ])
    .unwrap();
    let set = gapforge_core::pingpong::SearchSettings { r: 2, m: 2, m_cap: 4, budget: 1_000_000, tol: t.clone(), place: None };
    let res = gapforge_core::pingpong::locgap_search(&s, &set).unwrap();
    let text = serial::to_string(&res.cert);
    let back: gapforge_core::pingpong::PingPongCert = serial::from_str(&text).unwrap();
    assert_eq!(back, res.cert);
    for (a, b) in back.conjugators.iter().zip(&res.cert.conjugators) {
        assert_eq!(a.word(), b.word());
    }
    assert!(gapforge_core::pingpong::verify(&back, &t).accepted());
}
