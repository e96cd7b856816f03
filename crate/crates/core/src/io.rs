//! JSON interchange. Rationals travel as {"num", "den"} pairs, floats with 17
//! significant digits, labels in their text encoding.

use std::collections::BTreeMap;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::certify::{Perturbation, PerturbTarget, RicciCertificate};
use crate::classical::{Family, RootDatum, RootFamily};
use crate::curvature::{Gram, RicciReport, Verdict};
use crate::degeneration::DroppedBracket;
use crate::error::{Error, Result};
use crate::lie::{BasisLabel, LieAlgebra, StructureTensor};
use crate::poly::{BasisMeta, MonomialBasis, Representation, SubspaceSplit};
use crate::rational::{Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct JRat(pub Rat);

#[derive(Serialize, Deserialize)]
struct RatPair {
    num: i128,
    den: i128,
}

impl Serialize for JRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let num = self.0.numer().to_i128().ok_or_else(|| S::Error::custom("numerator exceeds 128 bits"))?;
        let den = self.0.denom().to_i128().ok_or_else(|| S::Error::custom("denominator exceeds 128 bits"))?;
        RatPair { num, den }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = RatPair::deserialize(d)?;
        if p.den == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(JRat(Rat::new(BigInt::from(p.num), BigInt::from(p.den))))
    }
}

/// f64 written as `{:.16e}`, which round-trips exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite float"));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(F17)
    }
}

pub fn rat_matrix_json(m: &RatMatrix) -> Vec<Vec<JRat>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(JRat).collect()).collect()
}

pub fn rat_matrix_from_json(rows: &[Vec<JRat>]) -> Result<RatMatrix> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    Ok(RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()))
}

pub fn f64_matrix_json(m: &DMatrix<f64>) -> Vec<Vec<F17>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| F17(m[(i, j)])).collect()).collect()
}

pub fn f64_matrix_from_json(rows: &[Vec<F17>]) -> Result<DMatrix<f64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j].0))
}

fn f64s(v: &[f64]) -> Vec<F17> {
    v.iter().map(|&x| F17(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub num: i128,
    pub den: i128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootDatumJson {
    pub family: String,
    pub rank: usize,
    pub positive_roots: Vec<Vec<i32>>,
    pub simple_roots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub labels: Vec<String>,
    /// [e_i, e_j] ∋ (num/den) e_k for i < j only.
    pub brackets: Vec<BracketJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootDatumJson>,
}

pub fn algebra_to_json(alg: &LieAlgebra) -> Result<AlgebraJson> {
    let mut brackets = Vec::new();
    for (i, j, k, c) in alg.bracket().iter() {
        let num = c.numer().to_i128().ok_or_else(|| Error::Json("structure constant exceeds 128 bits".into()))?;
        let den = c.denom().to_i128().ok_or_else(|| Error::Json("structure constant exceeds 128 bits".into()))?;
        brackets.push(BracketJson { i, j, k, num, den });
    }
    let roots = alg.root_meta().map(|r| RootDatumJson {
        family: r.family.to_string(),
        rank: r.rank,
        positive_roots: r.positive_roots.clone(),
        simple_roots: r.simple_roots.clone(),
    });
    Ok(AlgebraJson { dim: alg.dim(), labels: alg.labels().iter().map(|l| l.to_string()).collect(), brackets, roots })
}

/// Rebuilds the algebra; the Jacobi identity is re-checked exactly.
pub fn algebra_from_json(j: &AlgebraJson) -> Result<LieAlgebra> {
    if j.labels.len() != j.dim {
        return Err(Error::DimensionMismatch { expected: j.dim, found: j.labels.len() });
    }
    let labels = j.labels.iter().map(|s| BasisLabel::from_str(s)).collect::<Result<Vec<_>>>()?;
    let mut t = StructureTensor::new(j.dim);
    for b in &j.brackets {
        if b.i >= j.dim || b.j >= j.dim || b.k >= j.dim || b.i == b.j || b.den == 0 {
            return Err(Error::Invalid(format!("bad bracket entry ({}, {}) -> {}", b.i, b.j, b.k)));
        }
        t.add(b.i, b.j, b.k, &Rat::new(BigInt::from(b.num), BigInt::from(b.den)));
    }
    let mut alg = LieAlgebra::new(labels, t)?;
    if let Some(r) = &j.roots {
        let meta = RootDatum {
            family: RootFamily::from_str(&r.family)?,
            rank: r.rank,
            positive_roots: r.positive_roots.clone(),
            simple_roots: r.simple_roots.clone(),
        };
        meta.validate()?;
        alg = alg.with_root_meta(meta);
    }
    Ok(alg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub nvars: usize,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepJson {
    pub source: AlgebraJson,
    #[serde(rename = "dim_V")]
    pub dim_v: usize,
    pub labels: Vec<String>,
    /// Keyed by the source basis label.
    pub operators: BTreeMap<String, Vec<Vec<JRat>>>,
    #[serde(rename = "V1", default, skip_serializing_if = "Option::is_none")]
    pub v1: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<MonomialJson>,
}

pub fn rep_to_json(rep: &Representation, split: Option<&SubspaceSplit>) -> Result<RepJson> {
    let operators = rep
        .source()
        .labels()
        .iter()
        .zip(rep.operators())
        .map(|(l, op)| (l.to_string(), rat_matrix_json(op)))
        .collect();
    let monomials = match rep.meta() {
        BasisMeta::Monomial(b) => Some(MonomialJson { nvars: b.nvars, degree: b.degree }),
        BasisMeta::Generic => None,
    };
    Ok(RepJson {
        source: algebra_to_json(rep.source())?,
        dim_v: rep.dim_v(),
        labels: rep.labels().iter().map(|l| l.to_string()).collect(),
        operators,
        v1: split.map(|s| s.v1.clone()),
        monomials,
    })
}

/// The homomorphism property is re-checked exactly.
pub fn rep_from_json(j: &RepJson) -> Result<(Representation, Option<SubspaceSplit>)> {
    let source = algebra_from_json(&j.source)?;
    let mut ops = Vec::with_capacity(source.dim());
    for l in source.labels() {
        let m = j.operators.get(&l.to_string()).ok_or_else(|| Error::Invalid(format!("missing operator for {l}")))?;
        let m = rat_matrix_from_json(m)?;
        if m.rows() != j.dim_v || m.cols() != j.dim_v {
            return Err(Error::DimensionMismatch { expected: j.dim_v, found: m.rows() });
        }
        ops.push(m);
    }
    if j.operators.len() != source.dim() {
        return Err(Error::Invalid("operators keyed by unknown labels".into()));
    }
    let labels = j.labels.iter().map(|s| BasisLabel::from_str(s)).collect::<Result<Vec<_>>>()?;
    let meta = match &j.monomials {
        Some(m) => BasisMeta::Monomial(MonomialBasis::new(m.nvars, m.degree)),
        None => BasisMeta::Generic,
    };
    let rep = Representation::new(source, ops, labels, meta)?;
    let split = j.v1.as_ref().map(|v1| SubspaceSplit::new(v1.clone(), j.dim_v)).transpose()?;
    Ok((rep, split))
}

/// Either an exact matrix of {"num","den"} entries or a float matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GramJson {
    Exact(Vec<Vec<JRat>>),
    Real(Vec<Vec<F17>>),
}

impl<'de> Deserialize<'de> for GramJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let exact = v.as_array().and_then(|rows| rows.iter().find_map(|r| r.as_array()?.first().map(|x| x.is_object())));
        if exact.unwrap_or(true) {
            serde_json::from_value(v).map(GramJson::Exact).map_err(D::Error::custom)
        } else {
            serde_json::from_value(v).map(GramJson::Real).map_err(D::Error::custom)
        }
    }
}

pub fn gram_to_json(g: &Gram) -> GramJson {
    match g {
        Gram::Exact(m) => GramJson::Exact(rat_matrix_json(m)),
        Gram::Real(m) => GramJson::Real(f64_matrix_json(m)),
    }
}

pub fn gram_from_json(j: &GramJson) -> Result<Gram> {
    match j {
        GramJson::Exact(m) => Ok(Gram::Exact(rat_matrix_from_json(m)?)),
        GramJson::Real(m) => Ok(Gram::Real(f64_matrix_from_json(m)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationJson {
    pub v1_scale: JRat,
    pub target: PerturbTarget,
    pub factor: JRat,
    pub grid_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub family: String,
    pub m: usize,
    pub n: u32,
    pub gram: Vec<Vec<JRat>>,
    pub ricci: Vec<Vec<JRat>>,
    pub eigenvalues: Vec<F17>,
    pub lambda_max: F17,
    pub rho: JRat,
    pub perturbation: PerturbationJson,
    pub pipeline: Vec<String>,
}

pub fn certificate_to_json(c: &RicciCertificate) -> CertificateJson {
    CertificateJson {
        family: c.family.to_string(),
        m: c.m,
        n: c.n,
        gram: rat_matrix_json(&c.gram),
        ricci: rat_matrix_json(&c.ricci),
        eigenvalues: f64s(&c.eigenvalues),
        lambda_max: F17(c.lambda_max),
        rho: JRat(c.rho.clone()),
        perturbation: PerturbationJson {
            v1_scale: JRat(c.perturbation.v1_scale.clone()),
            target: c.perturbation.target,
            factor: JRat(c.perturbation.factor.clone()),
            grid_index: c.perturbation.grid_index,
        },
        pipeline: c.pipeline.clone(),
    }
}

/// The algebra travels in its own file next to the certificate.
pub fn certificate_from_json(j: &CertificateJson, algebra: LieAlgebra) -> Result<RicciCertificate> {
    let gram = rat_matrix_from_json(&j.gram)?;
    if gram.rows() != algebra.dim() {
        return Err(Error::DimensionMismatch { expected: algebra.dim(), found: gram.rows() });
    }
    Ok(RicciCertificate {
        family: Family::from_str(&j.family)?,
        m: j.m,
        n: j.n,
        algebra,
        gram,
        ricci: rat_matrix_from_json(&j.ricci)?,
        eigenvalues: j.eigenvalues.iter().map(|x| x.0).collect(),
        lambda_max: j.lambda_max.0,
        rho: j.rho.0.clone(),
        perturbation: Perturbation {
            v1_scale: j.perturbation.v1_scale.0.clone(),
            target: j.perturbation.target,
            factor: j.perturbation.factor.0.clone(),
            grid_index: j.perturbation.grid_index,
        },
        pipeline: j.pipeline.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciJson {
    pub dim: usize,
    pub verdict: Verdict,
    pub lambda_max: F17,
    pub eigenvalues: Vec<F17>,
    pub ricci: Vec<Vec<F17>>,
    pub mean_curvature: Vec<F17>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ricci_exact: Option<Vec<Vec<JRat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_curvature_exact: Option<Vec<JRat>>,
}

pub fn ricci_to_json(r: &RicciReport) -> RicciJson {
    RicciJson {
        dim: r.ricci.nrows(),
        verdict: r.verdict,
        lambda_max: F17(r.lambda_max),
        eigenvalues: f64s(&r.eigenvalues),
        ricci: f64_matrix_json(&r.ricci),
        mean_curvature: r.mean_curvature.iter().map(|&x| F17(x)).collect(),
        ricci_exact: r.exact.as_ref().map(|e| rat_matrix_json(&e.ricci)),
        mean_curvature_exact: r.exact.as_ref().map(|e| e.mean_curvature.iter().cloned().map(JRat).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DroppedJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub exponent: i32,
    pub coefficient: JRat,
}

pub fn dropped_to_json(d: &[DroppedBracket]) -> Vec<DroppedJson> {
    d.iter()
        .map(|b| DroppedJson { i: b.i, j: b.j, k: b.k, exponent: b.exponent, coefficient: JRat(b.coefficient.clone()) })
        .collect()
}

/// Pretty JSON with a trailing newline; identical input gives identical bytes.
pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::build_compact;
    use crate::poly::build_poly_rep;
    use crate::rational::{int, rat};

    #[test]
    fn rational_and_float_encoding() {
        assert_eq!(serde_json::to_string(&JRat(rat(-3, 4))).unwrap(), r#"{"num":-3,"den":4}"#);
        assert_eq!(serde_json::to_string(&F17(-6.0)).unwrap(), "-6.0000000000000000e0");
        let x = 0.1f64 + 0.2;
        let back: F17 = serde_json::from_str(&serde_json::to_string(&F17(x)).unwrap()).unwrap();
        assert_eq!(back.0.to_bits(), x.to_bits());
        assert!(serde_json::from_str::<JRat>(r#"{"num":1,"den":0}"#).is_err());
    }

    #[test]
    fn algebra_round_trip_with_roots() {
        let a = build_compact(Family::So, 5).unwrap().algebra;
        let j = algebra_to_json(&a).unwrap();
        let s = to_json_string(&j).unwrap();
        let back = algebra_from_json(&from_json_str(&s).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rep_round_trip() {
        let p = build_poly_rep(Family::Su, 2, 3).unwrap();
        let j = rep_to_json(&p.rep, Some(&p.split)).unwrap();
        let s = to_json_string(&j).unwrap();
        let (rep, split) = rep_from_json(&from_json_str(&s).unwrap()).unwrap();
        assert_eq!(rep.operators(), p.rep.operators());
        assert_eq!(rep.labels(), p.rep.labels());
        assert_eq!(split.unwrap(), p.split);
    }

    #[test]
    fn gram_variants() {
        let e = Gram::Exact(RatMatrix::from_diag(&[int(2), rat(1, 3)]));
        let r = Gram::Real(DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]));
        for g in [e, r] {
            let s = serde_json::to_string(&gram_to_json(&g)).unwrap();
            let back = gram_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back, g);
        }
    }
}
