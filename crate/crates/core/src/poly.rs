//! Representations on complex homogeneous polynomials, realified, and other
//! matrix representations of the builders' algebras.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::classical::{build_compact, build_noncompact_sl, so_variables, Family, MatrixRealization, RootFamily};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::lie::{BasisLabel, LieAlgebra, Phase};
use crate::rational::{int, Rat, RatMatrix};

pub const TAU_EIG: f64 = 1e-8;

/// Degree-n monomials in r variables in graded lexicographic order (exponent
/// vectors descending); realified index of (monomial m, phase) is 2m + phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        assert!(nvars >= 1);
        let mut monomials = Vec::new();
        compositions(degree, nvars, &mut Vec::new(), &mut monomials);
        MonomialBasis { nvars, degree, monomials }
    }

    /// Real dimension.
    pub fn dim(&self) -> usize {
        2 * self.monomials.len()
    }

    pub fn monomial_index(&self, exps: &[u32]) -> Option<usize> {
        // descending lex order allows binary search with reversed comparison
        self.monomials.binary_search_by(|m| exps.cmp(m.as_slice())).ok()
    }

    pub fn index_of(&self, exps: &[u32], phase: Phase) -> Option<usize> {
        self.monomial_index(exps).map(|m| 2 * m + usize::from(phase == Phase::I))
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        self.monomials
            .iter()
            .flat_map(|e| [BasisLabel::monomial(e.clone(), Phase::One), BasisLabel::monomial(e.clone(), Phase::I)])
            .collect()
    }

    /// Realified indices of s·z_k^n, s ∈ {1, i}, for the listed variables k.
    pub fn pure_power_indices(&self, vars: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut out = Vec::new();
        for k in vars {
            let mut e = vec![0; self.nvars];
            e[k] = self.degree;
            let m = self.monomial_index(&e).expect("pure power present");
            out.push(2 * m);
            out.push(2 * m + 1);
        }
        out.sort();
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasisMeta {
    Monomial(MonomialBasis),
    Generic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    source: LieAlgebra,
    operators: Vec<RatMatrix>,
    labels: Vec<BasisLabel>,
    meta: BasisMeta,
    pub notes: Vec<String>,
}

impl Representation {
    /// Checks sizes and the homomorphism identity exactly.
    pub fn new(source: LieAlgebra, operators: Vec<RatMatrix>, labels: Vec<BasisLabel>, meta: BasisMeta) -> Result<Self> {
        if operators.len() != source.dim() {
            return Err(Error::DimensionMismatch { expected: source.dim(), found: operators.len() });
        }
        let d = labels.len();
        for op in &operators {
            if op.rows() != d || op.cols() != d {
                return Err(Error::DimensionMismatch { expected: d, found: op.rows() });
            }
        }
        let rep = Representation { source, operators, labels, meta, notes: Vec::new() };
        rep.check_homomorphism()?;
        Ok(rep)
    }

    pub fn check_homomorphism(&self) -> Result<()> {
        let n = self.source.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = self.image(&self.source.bracket().bracket_basis(i, j));
                let rhs = self.operators[i].commutator(&self.operators[j]);
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(i, j));
                }
            }
        }
        Ok(())
    }

    /// π(Σ c_k e_k).
    pub fn image(&self, coeffs: &[(usize, Rat)]) -> RatMatrix {
        let d = self.dim_v();
        let mut out = RatMatrix::zeros(d, d);
        for (k, c) in coeffs {
            out = out.add(&self.operators[*k].scale(c));
        }
        out
    }

    pub fn source(&self) -> &LieAlgebra {
        &self.source
    }

    pub fn dim_v(&self) -> usize {
        self.labels.len()
    }

    pub fn operators(&self) -> &[RatMatrix] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &RatMatrix {
        &self.operators[i]
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn meta(&self) -> &BasisMeta {
        &self.meta
    }

    /// Multiplies every operator by c (a representation only for the abelian
    /// case; used for scaling arguments on operator data).
    pub fn scaled_operators(&self, c: &Rat) -> Vec<RatMatrix> {
        self.operators.iter().map(|o| o.scale(c)).collect()
    }

    /// Direct sum with another representation of the same source.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        if self.source != other.source {
            return Err(Error::Invalid("direct sum needs a common source algebra".into()));
        }
        let (a, b) = (self.dim_v(), other.dim_v());
        let ops = self
            .operators
            .iter()
            .zip(&other.operators)
            .map(|(x, y)| {
                let mut m = RatMatrix::zeros(a + b, a + b);
                for i in 0..a {
                    for j in 0..a {
                        m[(i, j)] = x[(i, j)].clone();
                    }
                }
                for i in 0..b {
                    for j in 0..b {
                        m[(a + i, a + j)] = y[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        let labels = (0..a + b).map(|i| BasisLabel::generic(format!("v{}", i + 1))).collect();
        Representation::new(self.source.clone(), ops, labels, BasisMeta::Generic)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSplit {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
}

impl SubspaceSplit {
    pub fn new(v1: Vec<usize>, dim: usize) -> Result<Self> {
        let mut v1 = v1;
        v1.sort();
        v1.dedup();
        if v1.iter().any(|&i| i >= dim) {
            return Err(Error::Invalid("V1 index out of range".into()));
        }
        let v2 = (0..dim).filter(|i| !v1.contains(i)).collect();
        Ok(SubspaceSplit { v1, v2 })
    }

    pub fn dim(&self) -> usize {
        self.v1.len() + self.v2.len()
    }
}

/// Extends the action X·z_k = Σ_l M_{kl} z_l to degree-n monomials by the Leibniz
/// rule and realifies with the (p, i·p) convention.
pub fn derivation_action(variable_action: &CMatrix, basis: &MonomialBasis) -> RatMatrix {
    let r = basis.nvars;
    assert_eq!(variable_action.rows(), r);
    let d = basis.dim();
    let mut out = RatMatrix::zeros(d, d);
    for (col, exps) in basis.monomials.iter().enumerate() {
        for k in 0..r {
            if exps[k] == 0 {
                continue;
            }
            let mult = int(exps[k] as i64);
            for l in 0..r {
                let (a, b) = variable_action.entry(k, l);
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let mut target = exps.clone();
                target[k] -= 1;
                target[l] += 1;
                let row = basis.monomial_index(&target).expect("degree preserved");
                let (a, b) = (&a * &mult, &b * &mult);
                // p -> (a + bi) q ; i p -> (-b + ai) q
                out[(2 * row, 2 * col)] += a.clone();
                out[(2 * row + 1, 2 * col)] += b.clone();
                out[(2 * row, 2 * col + 1)] -= b;
                out[(2 * row + 1, 2 * col + 1)] += a;
            }
        }
    }
    out
}

/// The variable action of a matrix A acting on coordinates: X·z = −A z, after
/// the change of variables z = T x when `t` is given (then A' = T A T⁻¹).
pub fn variable_action(a: &CMatrix, t: Option<&CMatrix>) -> CMatrix {
    let minus = -int(1);
    match t {
        None => a.scale(&minus),
        Some(t) => t.mul(a).mul(&t.inverse().expect("invertible change of variables")).scale(&minus),
    }
}

#[derive(Clone, Debug)]
pub struct PolyRep {
    pub rep: Representation,
    pub split: SubspaceSplit,
    pub realization: MatrixRealization,
}

/// Real representation of su/so/sp/sl(m) on degree-n complex polynomials, with
/// V₁ spanned by s·z_k^n (k over all variables, or k ≤ 2l for so(2l+1)).
pub fn build_poly_rep(family: Family, m: usize, n: u32) -> Result<PolyRep> {
    if n == 0 {
        return Err(Error::Invalid("polynomial degree must be positive".into()));
    }
    let (algebra, realization) = match family {
        Family::Sl => build_noncompact_sl(m, false)?,
        _ => {
            let b = build_compact(family, m)?;
            (b.algebra, b.realization)
        }
    };
    let nvars = realization.ambient;
    let change = if family == Family::So { Some(so_variables(m)?) } else { None };
    let basis = MonomialBasis::new(nvars, n);
    let ops: Vec<RatMatrix> = realization
        .matrices
        .iter()
        .map(|a| derivation_action(&variable_action(a, change.as_ref()), &basis))
        .collect();
    let v1_vars = if family == Family::So { 2 * (m / 2) } else { nvars };
    let split = SubspaceSplit::new(basis.pure_power_indices(0..v1_vars), basis.dim())?;
    let labels = basis.labels();
    let mut rep = Representation::new(algebra, ops, labels, BasisMeta::Monomial(basis))?;
    if n == 1 {
        rep.notes.push("degree 1: V1 = V, the degeneration argument does not apply".into());
    }
    Ok(PolyRep { rep, split, realization })
}

/// The defining representation on ℂ^N, realified on (e_1, i e_1, e_2, ...),
/// with labels p[...] of degree one.
pub fn standard_rep(source: &LieAlgebra, realization: &MatrixRealization) -> Result<Representation> {
    let n = realization.ambient;
    let basis = MonomialBasis::new(n, 1);
    let ops = realization.matrices.iter().map(|a| a.realify_interleaved()).collect();
    // MonomialBasis of degree one lists e_1 first, matching the interleaved order
    Representation::new(source.clone(), ops, basis.labels(), BasisMeta::Monomial(basis))
}

#[derive(Clone, Debug)]
pub struct CasimirBlock {
    pub eigenvalue: f64,
    /// k with eigenvalue −k(k+2) (scaled so the defining rep on ℂ² has k = 1).
    pub highest_weight: f64,
    /// Columns: an orthonormal basis of the block (coordinates in V).
    pub basis: DMatrix<f64>,
    pub isotypic: bool,
    pub invariance_residual: f64,
}

fn is_su2(alg: &LieAlgebra) -> bool {
    alg.dim() == 3 && alg.root_meta().is_some_and(|r| r.family == RootFamily::A && r.rank == 1)
}

/// Eigenspaces of π(H)² + π(X)² + π(Y)² for a representation of su(2).
pub fn casimir_decompose_su2(rep: &Representation) -> Result<Vec<CasimirBlock>> {
    if !is_su2(rep.source()) {
        return Err(Error::Invalid("Casimir decomposition needs the su(2) root basis as source".into()));
    }
    let d = rep.dim_v();
    if d == 0 {
        return Ok(vec![]);
    }
    let ops: Vec<DMatrix<f64>> = rep.operators().iter().map(|o| o.to_f64()).collect();
    let c = ops.iter().fold(DMatrix::<f64>::zeros(d, d), |acc, o| acc + o * o);
    let scale = c.amax().max(1.0);
    let eig = c.clone().complex_eigenvalues();
    let mut vals: Vec<f64> = Vec::with_capacity(d);
    for z in eig.iter() {
        if z.im.abs() > TAU_EIG * scale {
            return Err(Error::Unresolved("Casimir has non-real eigenvalues".into()));
        }
        vals.push(z.re);
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let merge = TAU_EIG * scale;
    let mut clusters: Vec<Vec<f64>> = vec![vec![vals[0]]];
    for w in vals.windows(2) {
        let gap = w[1] - w[0];
        if gap <= merge {
            clusters.last_mut().unwrap().push(w[1]);
        } else if gap < 1e3 * merge {
            return Err(Error::Unresolved(format!("eigenvalues {} and {} are too close to separate", w[0], w[1])));
        } else {
            clusters.push(vec![w[1]]);
        }
    }
    let mut blocks = Vec::new();
    let mut total = 0;
    for cl in clusters {
        let lambda = cl.iter().sum::<f64>() / cl.len() as f64;
        let shifted = &c - DMatrix::<f64>::identity(d, d) * lambda;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("v_t requested");
        let tol = 1e-7 * scale;
        let null_rows: Vec<usize> = (0..d).filter(|&i| svd.singular_values[i] <= tol).collect();
        let mut q = DMatrix::<f64>::zeros(d, null_rows.len());
        for (col, &r) in null_rows.iter().enumerate() {
            for i in 0..d {
                q[(i, col)] = vt[(r, i)];
            }
        }
        let dim = q.ncols();
        total += dim;
        let mut residual: f64 = 0.0;
        for o in &ops {
            let img = o * &q;
            let proj = &q * (q.transpose() * &img);
            residual = residual.max((img - proj).amax());
        }
        if residual > 1e-6 * scale {
            return Err(Error::Unresolved(format!("block for eigenvalue {lambda} is not invariant")));
        }
        let k = -1.0 + (1.0 - lambda).max(0.0).sqrt();
        blocks.push(CasimirBlock {
            eigenvalue: lambda,
            highest_weight: k,
            isotypic: dim as f64 > 2.0 * (k + 1.0) + 1e-9,
            basis: q,
            invariance_residual: residual,
        });
    }
    if total != d {
        return Err(Error::Unresolved("Casimir is not diagonalizable".into()));
    }
    blocks.sort_by(|a, b| b.eigenvalue.partial_cmp(&a.eigenvalue).unwrap());
    Ok(blocks)
}

/// Trivial representation of dimension d.
pub fn trivial_rep(source: &LieAlgebra, d: usize) -> Result<Representation> {
    let ops = vec![RatMatrix::zeros(d, d); source.dim()];
    let labels = (0..d).map(|i| BasisLabel::generic(format!("v{}", i + 1))).collect();
    Representation::new(source.clone(), ops, labels, BasisMeta::Generic)
}
