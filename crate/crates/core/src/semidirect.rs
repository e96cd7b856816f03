//! Semidirect products (ℝZ ⊕ u) ⋉ V and (a ⊕ r) ⋉ n.

use num_traits::{One, Zero};

use crate::classical::{build_compact, Family};
use crate::error::{Error, Result};
use crate::lie::{BasisLabel, LieAlgebra, StructureTensor};
use crate::poly::{standard_rep, Representation};
use crate::rational::{int, Rat, RatMatrix};

/// Index sets of a product built here: a (central part of the left factor),
/// r (rest of the left factor) and n (right factor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub a: Vec<usize>,
    pub r: Vec<usize>,
    pub n: Vec<usize>,
}

impl Layout {
    pub fn left(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.a.iter().chain(&self.r).copied().collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug)]
pub struct SemidirectSpec {
    pub left: LieAlgebra,
    pub right: LieAlgebra,
    /// One dim(right)×dim(right) matrix per left basis element.
    pub action: Vec<RatMatrix>,
    /// Left basis elements spanning a; each must commute with the whole left factor.
    pub central: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Semidirect {
    pub algebra: LieAlgebra,
    pub layout: Layout,
}

/// Checks D[x,y] = [Dx,y] + [x,Dy] on all basis pairs; returns the first failing pair.
pub fn derivation_defect(alg: &LieAlgebra, d: &RatMatrix) -> Option<(usize, usize)> {
    let n = alg.dim();
    let cols: Vec<Vec<Rat>> = (0..n).map(|j| d.column(j)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut bij = vec![Rat::zero(); n];
            for (k, c) in alg.bracket().bracket_basis(i, j) {
                bij[k] = c;
            }
            let lhs = d.mul_vec(&bij);
            let mut ei = vec![Rat::zero(); n];
            ei[i] = Rat::one();
            let mut ej = vec![Rat::zero(); n];
            ej[j] = Rat::one();
            let r1 = alg.bracket().bracket(&cols[i], &ej);
            let r2 = alg.bracket().bracket(&ei, &cols[j]);
            if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (a, b))| *l != a + b) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn general_semidirect(spec: &SemidirectSpec) -> Result<Semidirect> {
    let (dl, dr) = (spec.left.dim(), spec.right.dim());
    if spec.action.len() != dl {
        return Err(Error::DimensionMismatch { expected: dl, found: spec.action.len() });
    }
    for m in &spec.action {
        if m.rows() != dr || m.cols() != dr {
            return Err(Error::DimensionMismatch { expected: dr, found: m.rows() });
        }
    }
    for &c in &spec.central {
        if c >= dl {
            return Err(Error::Invalid(format!("central index {c} out of range")));
        }
        for j in 0..dl {
            if j != c && !spec.left.bracket().bracket_basis(c, j).is_empty() {
                return Err(Error::NotCentral(c, j));
            }
        }
    }
    for (x, m) in spec.action.iter().enumerate() {
        if let Some((i, j)) = derivation_defect(&spec.right, m) {
            return Err(Error::NotDerivation { left: x, i, j });
        }
    }
    for i in 0..dl {
        for j in (i + 1)..dl {
            let mut lhs = RatMatrix::zeros(dr, dr);
            for (k, c) in spec.left.bracket().bracket_basis(i, j) {
                lhs = lhs.add(&spec.action[k].scale(&c));
            }
            if lhs != spec.action[i].commutator(&spec.action[j]) {
                return Err(Error::NotHomomorphism(i, j));
            }
        }
    }
    let mut t = StructureTensor::new(dl + dr);
    for (i, j, k, c) in spec.left.bracket().iter() {
        t.add(i, j, k, c);
    }
    for (i, j, k, c) in spec.right.bracket().iter() {
        t.add(dl + i, dl + j, dl + k, c);
    }
    for (x, m) in spec.action.iter().enumerate() {
        for j in 0..dr {
            for k in 0..dr {
                let c = &m[(k, j)];
                if !c.is_zero() {
                    t.add(x, dl + j, dl + k, c);
                }
            }
        }
    }
    let labels: Vec<BasisLabel> = spec.left.labels().iter().chain(spec.right.labels()).cloned().collect();
    let algebra = LieAlgebra::new(labels, t)?;
    let mut a = spec.central.clone();
    a.sort();
    a.dedup();
    let r = (0..dl).filter(|i| !a.contains(i)).collect();
    Ok(Semidirect { algebra, layout: Layout { a, r, n: (dl..dl + dr).collect() } })
}

/// ℝZ ⊕ u with Z first.
pub fn with_central_z(u: &LieAlgebra) -> Result<LieAlgebra> {
    let mut t = StructureTensor::new(u.dim() + 1);
    for (i, j, k, c) in u.bracket().iter() {
        t.add(i + 1, j + 1, k + 1, c);
    }
    let labels = std::iter::once(BasisLabel::Z).chain(u.labels().iter().cloned()).collect();
    LieAlgebra::new(labels, t)
}

/// (ℝZ ⊕ u) ⋉ V with ad Z|_V given by `z_action` (identity in the main construction).
pub fn central_semidirect_with(u: &LieAlgebra, rep: &Representation, z_action: RatMatrix) -> Result<Semidirect> {
    if rep.source() != u {
        return Err(Error::Invalid("representation source differs from u".into()));
    }
    rep.check_homomorphism()?;
    let left = with_central_z(u)?;
    let right = LieAlgebra::abelian(rep.labels().to_vec())?;
    let mut action = vec![z_action];
    action.extend(rep.operators().iter().cloned());
    general_semidirect(&SemidirectSpec { left, right, action, central: vec![0] })
}

pub fn central_semidirect(u: &LieAlgebra, rep: &Representation) -> Result<Semidirect> {
    central_semidirect_with(u, rep, RatMatrix::identity(rep.dim_v()))
}

/// ad Z|_V acting as c_b·Id on each listed block (index sets in V); unlisted
/// coordinates get 1.
pub fn block_scaling(dim_v: usize, blocks: &[(Vec<usize>, Rat)]) -> Result<RatMatrix> {
    let mut d = vec![int(1); dim_v];
    for (idx, c) in blocks {
        if *c <= Rat::zero() {
            return Err(Error::Invalid("block scaling must be positive".into()));
        }
        for &i in idx {
            if i >= dim_v {
                return Err(Error::Invalid(format!("block index {i} out of range")));
            }
            d[i] = c.clone();
        }
    }
    Ok(RatMatrix::from_diag(&d))
}

/// (ℝZ ⊕ su(2)) ⋉ h₅ with su(2) acting on ℝ⁴ = ℂ² by the defining representation,
/// trivially on the center, and Z acting as diag(1,1,1,1,2).
pub fn h5_example() -> Result<Semidirect> {
    let su2 = build_compact(Family::Su, 2)?;
    let std = standard_rep(&su2.algebra, &su2.realization)?;
    let right = crate::lie::heisenberg(2);
    let embed = |m: &RatMatrix| {
        let mut out = RatMatrix::zeros(5, 5);
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] = m[(i, j)].clone();
            }
        }
        out
    };
    let mut action = vec![RatMatrix::from_diag(&[1, 1, 1, 1, 2].map(int))];
    action.extend(std.operators().iter().map(embed));
    let left = with_central_z(&su2.algebra)?;
    general_semidirect(&SemidirectSpec { left, right, action, central: vec![0] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::build_poly_rep;

    #[test]
    fn su2_w2_product() {
        let p = build_poly_rep(Family::Su, 2, 2).unwrap();
        let s = central_semidirect(p.rep.source(), &p.rep).unwrap();
        let l = &s.algebra;
        assert_eq!(l.dim(), 10);
        for h in 1..4 {
            assert!(l.bracket().bracket_basis(0, h).is_empty());
        }
        assert_eq!(l.bracket().bracket_basis(0, 4), vec![(4, int(1))]);
        let tr = l.trace_form();
        assert_eq!(tr[0], int(6));
        assert!(tr[1..].iter().all(|t| t.is_zero()));
        assert!(l.is_ideal(&s.layout.n));
    }

    #[test]
    fn h5_is_valid() {
        let s = h5_example().unwrap();
        assert_eq!(s.algebra.dim(), 9);
        assert!(s.algebra.subalgebra(&s.layout.n).unwrap().is_nilpotent());
    }

    #[test]
    fn non_derivation_rejected() {
        let h3 = crate::lie::heisenberg(1);
        let left = LieAlgebra::abelian(vec![BasisLabel::generic("a")]).unwrap();
        // scales e1 only: D[e1,e2] = 0 but [De1,e2] = e3
        let d = RatMatrix::from_diag(&[1, 0, 0].map(int));
        let err = general_semidirect(&SemidirectSpec { left, right: h3, action: vec![d], central: vec![] }).unwrap_err();
        assert_eq!(err, Error::NotDerivation { left: 0, i: 0, j: 1 });
    }

    #[test]
    fn non_central_rejected() {
        let su2 = build_compact(Family::Su, 2).unwrap().algebra;
        let right = LieAlgebra::abelian(vec![BasisLabel::generic("w")]).unwrap();
        let action = vec![RatMatrix::zeros(1, 1); 3];
        let err = general_semidirect(&SemidirectSpec { left: su2, right, action, central: vec![0] }).unwrap_err();
        assert!(matches!(err, Error::NotCentral(0, _)));
    }
}
