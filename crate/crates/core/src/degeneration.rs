//! Diagonal scaling degenerations φ_t(e_i) = c_i t^{k_i} e_i and their limits.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::{BasisLabel, LieAlgebra, StructureTensor};
use crate::poly::SubspaceSplit;
use crate::rational::{Rat, RatMatrix};
use crate::semidirect::{Layout, Semidirect};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingFamily {
    entries: Vec<(i32, Rat)>,
}

impl ScalingFamily {
    pub fn new(entries: Vec<(i32, Rat)>) -> Result<Self> {
        if entries.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::Invalid("scaling constants must be nonzero".into()));
        }
        Ok(ScalingFamily { entries })
    }

    pub fn identity(n: usize) -> Self {
        ScalingFamily { entries: vec![(0, Rat::one()); n] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(i32, Rat)] {
        &self.entries
    }

    pub fn exponents(&self) -> Vec<i32> {
        self.entries.iter().map(|(e, _)| *e).collect()
    }

    /// diag(c_i t^{k_i}).
    pub fn at(&self, t: &Rat) -> RatMatrix {
        let d: Vec<Rat> = self.entries.iter().map(|(e, c)| c * pow(t, *e)).collect();
        RatMatrix::from_diag(&d)
    }
}

fn pow(t: &Rat, e: i32) -> Rat {
    let p = num_traits::pow(t.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Structure constants that are Laurent polynomials in t.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentBracket {
    labels: Vec<BasisLabel>,
    entries: BTreeMap<(usize, usize, usize), BTreeMap<i32, Rat>>,
}

/// A bracket entry removed when passing to the limit.
#[derive(Clone, Debug, PartialEq)]
pub struct DroppedBracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub exponent: i32,
    pub coefficient: Rat,
}

#[derive(Clone, Debug)]
pub struct Limit {
    pub algebra: LieAlgebra,
    pub dropped: Vec<DroppedBracket>,
}

impl LaurentBracket {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// (i, j, k) with i < j mapped to exponent → coefficient.
    pub fn entries(&self) -> &BTreeMap<(usize, usize, usize), BTreeMap<i32, Rat>> {
        &self.entries
    }

    pub fn exponent_of(&self, i: usize, j: usize, k: usize) -> Option<Vec<i32>> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.entries.get(&(a, b, k)).map(|m| m.keys().copied().collect())
    }

    pub fn instantiate(&self, t: &Rat) -> Result<LieAlgebra> {
        let mut tensor = StructureTensor::new(self.dim());
        for ((i, j, k), terms) in &self.entries {
            let mut c = Rat::zero();
            for (e, a) in terms {
                c += a * pow(t, *e);
            }
            tensor.add(*i, *j, *k, &c);
        }
        LieAlgebra::new(self.labels.clone(), tensor)
    }

    pub fn take_limit(&self) -> Result<Limit> {
        let mut tensor = StructureTensor::new(self.dim());
        let mut dropped = Vec::new();
        for ((i, j, k), terms) in &self.entries {
            for (e, a) in terms {
                if *e > 0 {
                    return Err(Error::LimitDiverges { i: *i, j: *j, k: *k, exponent: *e });
                }
                if *e == 0 {
                    tensor.add(*i, *j, *k, a);
                } else {
                    dropped.push(DroppedBracket { i: *i, j: *j, k: *k, exponent: *e, coefficient: a.clone() });
                }
            }
        }
        let algebra = LieAlgebra::new(self.labels.clone(), tensor)?;
        Ok(Limit { algebra, dropped })
    }
}

/// c_t(i,j,k) = f_k / (f_i f_j) c_{ij}^k as a Laurent monomial in t.
pub fn scale_bracket(alg: &LieAlgebra, family: &ScalingFamily) -> Result<LaurentBracket> {
    if family.dim() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: family.dim() });
    }
    let f = &family.entries;
    let mut entries: BTreeMap<(usize, usize, usize), BTreeMap<i32, Rat>> = BTreeMap::new();
    for (i, j, k, c) in alg.bracket().iter() {
        let e = f[k].0 - f[i].0 - f[j].0;
        let coeff = c * &f[k].1 / (&f[i].1 * &f[j].1);
        entries.entry((i, j, k)).or_default().insert(e, coeff);
    }
    Ok(LaurentBracket { labels: alg.labels().to_vec(), entries })
}

pub fn take_limit(lb: &LaurentBracket) -> Result<Limit> {
    lb.take_limit()
}

/// Z, H: t⁰; X, Y: t; V₁: t/ρ; V₂: t², on a product from `central_semidirect`.
pub fn lemma0_family(l: &Semidirect, split: &SubspaceSplit, rho: &Rat) -> Result<ScalingFamily> {
    if rho.is_zero() {
        return Err(Error::Invalid("rho must be nonzero".into()));
    }
    let alg = &l.algebra;
    let lay = &l.layout;
    if split.dim() != lay.n.len() {
        return Err(Error::DimensionMismatch { expected: lay.n.len(), found: split.dim() });
    }
    let mut entries = vec![(0, Rat::one()); alg.dim()];
    for &i in &lay.r {
        entries[i] = match &alg.labels()[i] {
            BasisLabel::Z | BasisLabel::CartanH(_) => (0, Rat::one()),
            BasisLabel::RootX(_) | BasisLabel::RootY(_) => (1, Rat::one()),
            other => return Err(Error::Invalid(format!("label {other} is not a root basis element"))),
        };
    }
    for &v in &split.v1 {
        entries[lay.n[v]] = (1, rho.recip());
    }
    for &v in &split.v2 {
        entries[lay.n[v]] = (2, Rat::one());
    }
    ScalingFamily::new(entries)
}

/// ψ_t: t⁰ on a ⊕ r, t on n.
pub fn psi_family(dim: usize, layout: &Layout) -> ScalingFamily {
    let mut entries = vec![(0, Rat::one()); dim];
    for &i in &layout.n {
        entries[i] = (1, Rat::one());
    }
    ScalingFamily { entries }
}

/// g with g·μ_ρ = μ_ρ' for the limits of `lemma0_family`: ρ/ρ' on V₁, 1 elsewhere.
pub fn rho_witness(l: &Semidirect, split: &SubspaceSplit, rho: &Rat, rho2: &Rat) -> RatMatrix {
    let mut d = vec![Rat::one(); l.algebra.dim()];
    for &v in &split.v1 {
        d[l.layout.n[v]] = rho / rho2;
    }
    RatMatrix::from_diag(&d)
}
