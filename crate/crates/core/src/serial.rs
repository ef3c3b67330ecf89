//! JSON forms of the core types. Rationals are strings `"n/d"` on output and
//! may be strings or JSON integers on input; floats are never read back.

use crate::heights::HeightValue;
use crate::magnitude::{NormValue, Radical};
use crate::matrix::Mat;
use crate::metrics::ProjPoint;
use crate::multipoly::MultiPoly;
use crate::pingpong::PingPongCert;
use crate::place::Place;
use crate::rat::{format_rat, parse_rat, to_f64, Rat};
use crate::subspace::Subspace;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "gapforge/1";

/// A rational in its wire form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatS(pub Rat);

impl Serialize for RatS {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatS {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d).map_err(|_| de::Error::custom("expected a rational string or an integer"))? {
            Raw::S(s) => parse_rat(&s).map(RatS).map_err(de::Error::custom),
            Raw::I(i) => Ok(RatS(Rat::from_integer(i.into()))),
        }
    }
}

fn wrap(v: &[Rat]) -> Vec<RatS> {
    v.iter().cloned().map(RatS).collect()
}

fn unwrap(v: Vec<RatS>) -> Vec<Rat> {
    v.into_iter().map(|r| r.0).collect()
}

pub fn rat_json(q: &Rat) -> serde_json::Value {
    serde_json::Value::String(format_rat(q))
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatObj {
    rows: Vec<Vec<RatS>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    word: Option<Vec<usize>>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatObj { rows: self.row_vecs().iter().map(|r| wrap(r)).collect(), word: self.word().map(|w| w.to_vec()) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Obj(MatObj),
            Bare(Vec<Vec<RatS>>),
        }
        let (rows, word) = match Raw::deserialize(d)
            .map_err(|_| de::Error::custom("expected a matrix: {\"rows\": [[...]]} or [[...]]"))?
        {
            Raw::Obj(o) => (o.rows, o.word),
            Raw::Bare(r) => (r, None),
        };
        if rows.is_empty() {
            return Err(de::Error::custom("matrix has no rows"));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|r| r.len() != c) {
            return Err(de::Error::custom("matrix rows are empty or ragged"));
        }
        let mut m = Mat::from_rows(&rows.into_iter().map(unwrap).collect::<Vec<_>>());
        m.set_word(word);
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadicalObj {
    radicand: RatS,
    index: u32,
}

impl Serialize for Radical {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RadicalObj { radicand: RatS(self.radicand.clone()), index: self.index }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Radical {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let o = RadicalObj::deserialize(d)?;
        if o.index == 0 || o.radicand.0 < Rat::from_integer(0.into()) {
            return Err(de::Error::custom("radical needs index >= 1 and a nonnegative radicand"));
        }
        Ok(Radical::new(o.radicand.0, o.index))
    }
}

/// Shared shape of NormValue and HeightValue: exact closed form, enclosure,
/// and a decimal annotation ignored on input.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnclosedObj {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<Radical>,
    lo: RatS,
    hi: RatS,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approx: Option<f64>,
}

impl EnclosedObj {
    fn check<E: de::Error>(&self) -> Result<(), E> {
        if self.lo.0 > self.hi.0 {
            return Err(E::custom("enclosure has lo > hi"));
        }
        Ok(())
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnclosedObj {
            exact: self.exact.clone(),
            lo: RatS(self.lo.clone()),
            hi: RatS(self.hi.clone()),
            approx: Some(self.to_f64()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let o = EnclosedObj::deserialize(d)?;
        o.check()?;
        Ok(NormValue { exact: o.exact, lo: o.lo.0, hi: o.hi.0 })
    }
}

impl Serialize for HeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnclosedObj {
            exact: self.magnitude.clone(),
            lo: RatS(self.lo.clone()),
            hi: RatS(self.hi.clone()),
            approx: Some(self.to_f64()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HeightValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let o = EnclosedObj::deserialize(d)?;
        o.check()?;
        Ok(HeightValue { magnitude: o.exact, lo: o.lo.0, hi: o.hi.0 })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceObj {
    ambient: usize,
    basis: Vec<Vec<RatS>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceObj { ambient: self.ambient(), basis: self.basis().iter().map(|r| wrap(r)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let o = SubspaceObj::deserialize(d)?;
        if o.basis.iter().any(|v| v.len() != o.ambient) {
            return Err(de::Error::custom("basis vector length differs from ambient dimension"));
        }
        Ok(Subspace::span(o.ambient, &o.basis.into_iter().map(unwrap).collect::<Vec<_>>()))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        wrap(self.coords()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        ProjPoint::new(&unwrap(Vec::<RatS>::deserialize(d)?)).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermObj {
    exp: Vec<u32>,
    coef: RatS,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyObj {
    nvars: usize,
    terms: Vec<TermObj>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyObj {
            nvars: self.nvars(),
            terms: self.terms().map(|(e, c)| TermObj { exp: e.clone(), coef: RatS(c.clone()) }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let o = PolyObj::deserialize(d)?;
        MultiPoly::from_terms(o.nvars, o.terms.into_iter().map(|t| (t.exp, t.coef.0)).collect())
            .map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertObj {
    schema: String,
    kind: String,
    place: Place,
    #[serde(default)]
    generators: Vec<Mat>,
    gamma: Mat,
    conjugators: Vec<Mat>,
    omega: RatS,
    n: u32,
    delta: NormValue,
    big_delta: NormValue,
    alpha: NormValue,
    m: usize,
    r: usize,
    /// Free-form notes from the producer; ignored when reading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    annotations: Option<serde_json::Value>,
}

const CERT_KIND: &str = "pingpong_certificate";

impl Serialize for PingPongCert {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CertObj {
            schema: SCHEMA.into(),
            kind: CERT_KIND.into(),
            place: self.place,
            generators: self.generators.clone(),
            gamma: self.gamma.clone(),
            conjugators: self.conjugators.clone(),
            omega: RatS(self.omega.clone()),
            n: self.n,
            delta: self.delta.clone(),
            big_delta: self.big_delta.clone(),
            alpha: self.alpha.clone(),
            m: self.m,
            r: self.r,
            annotations: None,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PingPongCert {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let o = CertObj::deserialize(d)?;
        if o.schema != SCHEMA {
            return Err(de::Error::custom(format!("unsupported schema {:?}", o.schema)));
        }
        if o.kind != CERT_KIND {
            return Err(de::Error::custom(format!("not a certificate: kind {:?}", o.kind)));
        }
        Ok(PingPongCert {
            place: o.place,
            generators: o.generators,
            gamma: o.gamma,
            conjugators: o.conjugators,
            omega: o.omega.0,
            n: o.n,
            delta: o.delta,
            big_delta: o.big_delta,
            alpha: o.alpha,
            m: o.m,
            r: o.r,
        })
    }
}

/// Decimal annotation for a rational.
pub fn approx(q: &Rat) -> f64 {
    to_f64(q)
}

pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> crate::error::Result<T> {
    serde_json::from_str(s).map_err(|e| crate::error::Error::Parse(e.to_string()))
}

pub fn to_string<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("core types always serialize")
}
