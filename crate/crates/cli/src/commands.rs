use crate::{place_arg, positive_rat, rat_arg, read_json, report, to_value, CliError, CliResult, Global};
use clap::Args;
use gapforge_core::escape::{coset_escape_search, escape_orbit, escape_variety, weak_general_position, Escape};
use gapforge_core::heights::{arakelov_height, jsr_height_lower_bound, matrix_height, matrix_height_breakdown, normalized_height_estimate, weil_height, weil_height_algebraic};
use gapforge_core::jsr::{jsr_lower, jsr_upper};
use gapforge_core::metrics::{arakelov_breakdown, arakelov_distance, delta_gap, point_to_subspace, subspace_dist};
use gapforge_core::pingpong::{self, certify_pingpong, locgap_search, markov_norm_bound, random_points, verify_position_sample, PingPongCert, SearchSettings};
use gapforge_core::qrnorm::{estimate_qr_norm, QrAction, WordMeasure};
use gapforge_core::rat::format_rat;
use gapforge_core::serial::{rat_json, RatS};
use gapforge_core::{GenSet, Mat, MultiPoly, Place, Poly, ProjPoint, Rat, Subspace};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Deserialize)]
#[serde(untagged)]
enum SetFile {
    Obj {
        elements: Vec<Mat>,
    },
    Bare(Vec<Mat>),
}

pub(crate) fn read_set(path: &PathBuf) -> CliResult<GenSet> {
    let elements = match read_json::<SetFile>(path)? {
        SetFile::Obj { elements } | SetFile::Bare(elements) => elements,
    };
    Ok(GenSet::new(elements)?)
}

fn words(s: &GenSet) -> Value {
    json!(s.elements().iter().map(|m| to_value(m)).collect::<Vec<_>>())
}

#[derive(Args, Debug)]
pub struct HeightArgs {
    /// Matrix file.
    #[arg(long, group = "what")]
    matrix: Option<PathBuf>,
    /// Subspace file {"ambient", "basis"}.
    #[arg(long, group = "what")]
    subspace: Option<PathBuf>,
    /// A rational number.
    #[arg(long, group = "what", value_parser = rat_arg, allow_hyphen_values = true)]
    rational: Option<Rat>,
    /// Integer minimal polynomial, coefficients from the constant term up, comma separated.
    #[arg(long, group = "what", value_delimiter = ',', allow_hyphen_values = true)]
    minpoly: Option<Vec<i64>>,
}

pub fn height(a: &HeightArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let mut r = report("height");
    if let Some(p) = &a.matrix {
        let m: Mat = read_json(p)?;
        r.insert("matrix".into(), to_value(&m));
        r.insert("height".into(), to_value(&matrix_height(&m, &tol)));
        let br: Vec<Value> = matrix_height_breakdown(&m, &tol)
            .iter()
            .map(|(v, h)| json!({"place": to_value(v), "contribution": to_value(h)}))
            .collect();
        r.insert("places".into(), json!(br));
    } else if let Some(p) = &a.subspace {
        let w: Subspace = read_json(p)?;
        if w.is_zero() {
            return Err(CliError::Usage("the subspace must be nonzero".into()));
        }
        r.insert("subspace".into(), to_value(&w));
        r.insert("height".into(), to_value(&arakelov_height(&w, &tol)));
    } else if let Some(q) = &a.rational {
        r.insert("rational".into(), rat_json(q));
        r.insert("height".into(), to_value(&weil_height(q, &tol)));
    } else if let Some(c) = &a.minpoly {
        r.insert("minpoly".into(), json!(c));
        r.insert("height".into(), to_value(&weil_height_algebraic(&Poly::from_ints(c), &tol)?));
    } else {
        return Err(CliError::Usage("give one of --matrix, --subspace, --rational, --minpoly".into()));
    }
    Ok(Value::Object(r))
}

#[derive(Args, Debug)]
pub struct HhatArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
    /// Longest word for the spectral-radius lower bound (default d²).
    #[arg(long)]
    kmax: Option<usize>,
}

pub fn hhat(a: &HhatArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let s = read_set(&a.set)?;
    if a.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let est = normalized_height_estimate(&s, a.n, a.budget, &tol)?;
    let k = a.kmax.unwrap_or(s.dim() * s.dim());
    let lower = jsr_height_lower_bound(&s, k, a.budget, &tol)?;
    let mut r = report("hhat");
    r.insert(
        "estimates".into(),
        json!(est.iter().enumerate().map(|(i, h)| json!({"n": i + 1, "value": to_value(h)})).collect::<Vec<_>>()),
    );
    r.insert("lower_bound".into(), json!({"kmax": k, "value": to_value(&lower)}));
    Ok(Value::Object(r))
}

#[derive(Args, Debug)]
pub struct JsrArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long, value_parser = place_arg)]
    place: Place,
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    /// Also compute the upper bound ‖S^n‖^(1/n).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

pub fn jsr(a: &JsrArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let s = read_set(&a.set)?;
    if a.kmax == 0 {
        return Err(CliError::Usage("--kmax must be at least 1".into()));
    }
    let lo = jsr_lower(&s, a.place, a.kmax, a.budget, &tol)?;
    let mut r = report("jsr");
    r.insert("place".into(), to_value(&a.place));
    r.insert(
        "lower".into(),
        json!({"value": to_value(&lo.value), "guarantee": to_value(&lo.guarantee), "witness": lo.witness, "length": lo.length, "kmax": a.kmax}),
    );
    if let Some(n) = a.n {
        if n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        r.insert("upper".into(), json!({"n": n, "value": to_value(&jsr_upper(&s, a.place, n, a.budget, &tol)?)}));
    }
    Ok(Value::Object(r))
}

#[derive(Args, Debug)]
pub struct EscapeArgs {
    #[arg(long)]
    set: PathBuf,
    /// Polynomial on Q^d to escape along the orbit of --point.
    #[arg(long, requires = "point", conflicts_with_all = ["variety", "cosets"])]
    poly: Option<PathBuf>,
    #[arg(long)]
    point: Option<PathBuf>,
    /// Polynomial on d×d matrices.
    #[arg(long, conflicts_with = "cosets")]
    variety: Option<PathBuf>,
    /// List of polynomials on matrices tested against S^k S^-k.
    #[arg(long)]
    cosets: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

fn escape_json(e: &Escape) -> Value {
    json!({
        "found": e.found(),
        "n": e.n,
        "word": e.word,
        "point": e.point.as_ref().map(|p| p.iter().map(rat_json).collect::<Vec<_>>()),
        "span_dims": e.span_dims,
        "bound": e.bound.to_string(),
        "exhaustion": e.exhaustion.map(|x| format!("{x:?}")),
    })
}

pub fn escape(a: &EscapeArgs, _g: &Global) -> CliResult<Value> {
    let s = read_set(&a.set)?;
    let mut r = report("escape");
    if let Some(pf) = &a.poly {
        let f: MultiPoly = read_json(pf)?;
        let u: Vec<RatS> = read_json(a.point.as_ref().expect("clap enforces --point"))?;
        let u: Vec<Rat> = u.into_iter().map(|x| x.0).collect();
        let e = escape_orbit(s.elements(), &u, &f, a.budget)?;
        r.insert("mode".into(), json!("orbit"));
        r.insert("result".into(), escape_json(&e));
        if !e.found() {
            return Err(gapforge_core::Error::NotFound(format!("the orbit stays in the zero set ({:?})", e.exhaustion)).into());
        }
    } else if let Some(vf) = &a.variety {
        let v: MultiPoly = read_json(vf)?;
        let e = escape_variety(&s, &v, a.budget)?;
        r.insert("mode".into(), json!("variety"));
        r.insert(
            "result".into(),
            json!({
                "k": e.k, "word": e.word, "element": to_value(&e.element),
                "binomial_bound": e.binomial_bound.to_string(), "power_bound": e.power_bound.to_string(),
                "span_dims": e.span_dims,
            }),
        );
    } else if let Some(cf) = &a.cosets {
        let tests: Vec<MultiPoly> = read_json(cf)?;
        let e = coset_escape_search(&s, &tests, a.kmax, a.budget)?;
        r.insert("mode".into(), json!("cosets"));
        r.insert("result".into(), json!({"k": e.k, "witnesses": e.witnesses.iter().map(to_value).collect::<Vec<_>>()}));
    } else {
        return Err(CliError::Usage("give --poly with --point, --variety, or --cosets".into()));
    }
    Ok(Value::Object(r))
}

#[derive(Args, Debug)]
pub struct WgpArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    hplus: PathBuf,
    #[arg(long)]
    hminus: PathBuf,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 4)]
    mcap: usize,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

pub fn wgp(a: &WgpArgs, _g: &Global) -> CliResult<Value> {
    let s = read_set(&a.set)?;
    let hp: Subspace = read_json(&a.hplus)?;
    let hm: Subspace = read_json(&a.hminus)?;
    let w = weak_general_position(&s, &hp, &hm, a.r, a.mcap, a.budget)?;
    let mut r = report("wgp");
    r.insert("conjugators".into(), json!(w.conjugators.iter().map(to_value).collect::<Vec<_>>()));
    r.insert("step_degrees".into(), json!(w.step_degrees));
    r.insert("degree_caps".into(), json!(w.degree_caps.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    Ok(Value::Object(r))
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Generating set (symmetric, containing the identity) for the search.
    #[arg(long, conflicts_with_all = ["gamma", "conjugators"])]
    set: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Longest word for γ.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Longest word for each conjugator.
    #[arg(long, default_value_t = 4)]
    mcap: usize,
    /// `auto`, `inf` or `p:N`.
    #[arg(long, default_value = "auto")]
    place: String,
    /// Direct mode: γ and the conjugator list.
    #[arg(long, requires_all = ["conjugators", "omega"])]
    gamma: Option<PathBuf>,
    #[arg(long)]
    conjugators: Option<PathBuf>,
    #[arg(long, value_parser = positive_rat)]
    omega: Option<Rat>,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

pub fn certify(a: &CertifyArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let place: Option<Place> = match a.place.as_str() {
        "auto" => None,
        s => Some(s.parse::<Place>().map_err(|e| CliError::Usage(e.to_string()))?),
    };
    let (cert, min_n, tried) = if let Some(sp) = &a.set {
        let s = read_set(sp)?;
        let set = SearchSettings { r: a.r, m: a.m, m_cap: a.mcap, budget: a.budget, tol: tol.clone(), place };
        let res = locgap_search(&s, &set)?;
        (res.cert, res.min_n, Some(res.tried))
    } else if let Some(gp) = &a.gamma {
        let gamma: Mat = read_json(gp)?;
        let conj: Vec<Mat> = read_json(a.conjugators.as_ref().expect("clap enforces"))?;
        let v = place.ok_or_else(|| CliError::Usage("direct mode needs an explicit --place".into()))?;
        let (n, cert) = certify_pingpong(&gamma, &conj, v, a.omega.as_ref().expect("clap enforces"), &tol)?;
        (cert, n, None)
    } else {
        return Err(CliError::Usage("give --set, or --gamma with --conjugators and --omega".into()));
    };
    // the certificate document is the report, so `verify` reads it back directly
    let mut v = to_value(&cert);
    let obj = v.as_object_mut().expect("certificate is an object");
    let mut ann = serde_json::Map::new();
    ann.insert("min_n".into(), json!(min_n));
    if let Some(t) = tried {
        ann.insert("candidates_tried".into(), json!(t));
    }
    ann.insert("alpha_approx".into(), json!(cert.alpha.to_f64()));
    ann.insert("delta_approx".into(), json!(cert.delta.to_f64()));
    obj.insert("annotations".into(), Value::Object(ann));
    Ok(v)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Certificate file written by `certify`.
    cert: PathBuf,
    /// Random points for the position check (0 to skip).
    #[arg(long, default_value_t = 1000)]
    sample: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Neighbourhood radius for the position check (default: inside the admissible window).
    #[arg(long, value_parser = positive_rat)]
    epsilon: Option<Rat>,
}

pub fn verify(a: &VerifyArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let cert: PingPongCert = read_json(&a.cert)?;
    let ver = pingpong::verify(&cert, &tol);
    let mut r = report("verify");
    let checks: Vec<Value> = ver.checks.iter().map(|(name, ok)| json!({"check": name, "passed": ok})).collect();
    r.insert("checks".into(), json!(checks));
    let mut accepted = ver.accepted();
    if accepted && a.sample > 0 {
        let pts = random_points(cert.dim(), a.sample, 1000, a.seed);
        match verify_position_sample(&cert, a.epsilon.clone(), &pts, &tol) {
            Ok(p) => {
                accepted &= p.violations() == 0;
                r.insert(
                    "position".into(),
                    json!({
                        "epsilon": format_rat(&p.epsilon), "checked": p.checked, "seed": a.seed,
                        "violations_contraction": p.violations_contraction,
                        "violations_multiplicity": p.violations_multiplicity,
                        "undecided": p.undecided, "max_multiplicity": p.max_multiplicity,
                    }),
                );
            }
            Err(e) => {
                accepted = false;
                r.insert("position".into(), json!({"error": e.to_string()}));
            }
        }
    }
    r.insert("accepted".into(), json!(accepted));
    if accepted {
        Ok(Value::Object(r))
    } else {
        eprintln!("certificate rejected: {}", ver.failures().join(", "));
        Err(CliError::Rejected(Value::Object(r)))
    }
}

#[derive(Args, Debug)]
pub struct QrnormArgs {
    #[arg(long)]
    set: PathBuf,
    /// Base point of the orbit.
    #[arg(long)]
    point: PathBuf,
    /// Measure {"words": [[i, ...], ...], "probs": [...]} (default: uniform on the set).
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    radius: usize,
    /// Return exponent: 2n steps of the symmetrized walk.
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Compare with the averaged bound 2√(M/F) for F elements in M-ping-pong position.
    #[arg(long, requires = "multiplicity")]
    fsize: Option<u64>,
    #[arg(long)]
    multiplicity: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    words: Vec<Vec<usize>>,
    probs: Vec<RatS>,
}

pub fn qrnorm(a: &QrnormArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let s = read_set(&a.set)?;
    let x: ProjPoint = read_json(&a.point)?;
    if x.ambient() != s.dim() {
        return Err(CliError::Usage("point and set have different dimensions".into()));
    }
    let mu = match &a.measure {
        Some(p) => {
            let m: MeasureFile = read_json(p)?;
            WordMeasure::new(m.words, m.probs.into_iter().map(|q| q.0).collect())?
        }
        None => WordMeasure::uniform_on_generators(&s),
    };
    let mut action = QrAction::new(s, x)?;
    let b = estimate_qr_norm(&mut action, &mu, a.radius, a.n, a.budget, &tol)?;
    let mut r = report("qrnorm");
    r.insert("generators".into(), words(action.generators()));
    r.insert("lower".into(), to_value(&b.lower));
    r.insert("upper".into(), to_value(&b.upper));
    r.insert("radius".into(), json!(a.radius));
    r.insert("n".into(), json!(a.n));
    r.insert("ball_size".into(), json!(b.ball_size));
    r.insert("return_probs".into(), json!(b.return_probs.iter().map(rat_json).collect::<Vec<_>>()));
    r.insert("lower_by_step".into(), json!(b.lower_by_step.iter().map(to_value).collect::<Vec<_>>()));
    r.insert(
        "schur".into(),
        json!({"weight": rat_json(&b.schur_weight), "row": rat_json(&b.schur_row), "col": rat_json(&b.schur_col)}),
    );
    r.insert("upper_bound_scope".into(), json!(if b.shell_profiles_recur { "orbit" } else { "ball" }));
    if let (Some(f), Some(m)) = (a.fsize, a.multiplicity) {
        let (sq, avg) = markov_norm_bound(f, m, &tol)?;
        r.insert(
            "markov".into(),
            json!({
                "fsize": f, "multiplicity": m, "sum_norm_squared_bound": rat_json(&sq),
                "averaged_bound": to_value(&avg), "upper_within_bound": b.upper.le_possible(&avg),
            }),
        );
    }
    Ok(Value::Object(r))
}

#[derive(Args, Debug)]
pub struct DistancesArgs {
    /// Subspace file.
    #[arg(long)]
    u: PathBuf,
    /// Second subspace, or use --x for a point.
    #[arg(long, required_unless_present = "x")]
    w: Option<PathBuf>,
    #[arg(long, conflicts_with = "w")]
    x: Option<PathBuf>,
    #[arg(long, value_parser = place_arg, default_value = "inf")]
    place: Place,
}

pub fn distances(a: &DistancesArgs, g: &Global) -> CliResult<Value> {
    let tol = g.tol();
    let u: Subspace = read_json(&a.u)?;
    let mut r = report("distances");
    r.insert("place".into(), to_value(&a.place));
    if let Some(xp) = &a.x {
        let x: ProjPoint = read_json(xp)?;
        if x.ambient() != u.ambient() || u.is_zero() {
            return Err(CliError::Usage("point and nonzero subspace must share the ambient space".into()));
        }
        r.insert("point_to_subspace".into(), to_value(&point_to_subspace(&x, &u, a.place, &tol)));
        return Ok(Value::Object(r));
    }
    let w: Subspace = read_json(a.w.as_ref().expect("clap enforces"))?;
    if w.ambient() != u.ambient() {
        return Err(CliError::Usage("subspaces live in different ambient spaces".into()));
    }
    r.insert("subspace_dist".into(), to_value(&subspace_dist(&u, &w, a.place, &tol)));
    r.insert("delta_gap".into(), to_value(&delta_gap(&u, &w, a.place, &tol)));
    r.insert("arakelov_distance".into(), to_value(&arakelov_distance(&u, &w, &tol)));
    r.insert(
        "arakelov_places".into(),
        json!(arakelov_breakdown(&u, &w, &tol)
            .iter()
            .map(|(v, h)| json!({"place": to_value(v), "contribution": to_value(h)}))
            .collect::<Vec<_>>()),
    );
    Ok(Value::Object(r))
}
