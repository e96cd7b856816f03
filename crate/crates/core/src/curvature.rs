//! Ricci operators of left-invariant metrics: Ric = M − ½B − S(ad H).

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rational::{to_f64, Rat, RatMatrix};

pub const TAU_DEF: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Gram {
    Exact(RatMatrix),
    Real(DMatrix<f64>),
}

impl Gram {
    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            Gram::Exact(g) => g.to_f64(),
            Gram::Real(g) => g.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Gram::Exact(g) => g.rows(),
            Gram::Real(g) => g.nrows(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MetricLieAlgebra {
    pub algebra: LieAlgebra,
    pub gram: Gram,
}

impl MetricLieAlgebra {
    pub fn new(algebra: LieAlgebra, gram: Gram) -> Result<Self> {
        let n = algebra.dim();
        if gram.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: gram.dim() });
        }
        match &gram {
            Gram::Exact(g) => {
                if !g.is_square() || !g.is_positive_definite() {
                    return Err(Error::NotPositiveDefinite);
                }
            }
            Gram::Real(g) => {
                if g.ncols() != n || (g - g.transpose()).amax() > 1e-12 * g.amax().max(1.0) {
                    return Err(Error::NotPositiveDefinite);
                }
                if g.clone().cholesky().is_none() {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        Ok(MetricLieAlgebra { algebra, gram })
    }

    pub fn identity(algebra: LieAlgebra) -> Self {
        let n = algebra.dim();
        MetricLieAlgebra { algebra, gram: Gram::Exact(RatMatrix::identity(n)) }
    }

    pub fn diagonal(algebra: LieAlgebra, d: &[Rat]) -> Result<Self> {
        Self::new(algebra, Gram::Exact(RatMatrix::from_diag(d)))
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Zero,
    NegativeDefinite,
    NegativeSemidefinite,
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Verdict from sorted eigenvalues; tolerance is τ relative to max |λ|.
pub fn classify(eigs: &[f64], tau: f64) -> Verdict {
    let scale = eigs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Verdict::Zero;
    }
    let tol = tau * scale;
    let max = eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if max < -tol {
        Verdict::NegativeDefinite
    } else if min > tol {
        Verdict::PositiveDefinite
    } else if max <= tol {
        Verdict::NegativeSemidefinite
    } else if min >= -tol {
        Verdict::PositiveSemidefinite
    } else {
        Verdict::Indefinite
    }
}

/// Eigenvalues (ascending) and verdict of a symmetric matrix.
pub fn definiteness(sym: &DMatrix<f64>, tau: f64) -> Result<(Verdict, Vec<f64>)> {
    let scale = sym.amax().max(f64::MIN_POSITIVE);
    if (sym - sym.transpose()).amax() > 1e-12 * scale.max(1.0) {
        return Err(Error::Invalid("matrix is not symmetric".into()));
    }
    let eigs = sorted_eigenvalues(&((sym + sym.transpose()) * 0.5));
    Ok((classify(&eigs, tau), eigs))
}

fn sorted_eigenvalues(sym: &DMatrix<f64>) -> Vec<f64> {
    if sym.nrows() == 0 {
        return vec![];
    }
    let mut v: Vec<f64> = SymmetricEigen::new(sym.clone()).eigenvalues.iter().cloned().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Eigenvalues of an operator self-adjoint for `gram`, via Cᵀ A C⁻ᵀ with G = CCᵀ.
pub fn self_adjoint_eigenvalues(op: &DMatrix<f64>, gram: &DMatrix<f64>) -> Result<Vec<f64>> {
    let c = gram.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.l();
    let c_inv_t = c.clone().try_inverse().ok_or(Error::Singular)?.transpose();
    let s = c.transpose() * op * c_inv_t;
    let scale = s.amax().max(1.0);
    if (&s - s.transpose()).amax() > 1e-9 * scale {
        return Err(Error::Invalid("operator is not self-adjoint for the gram matrix".into()));
    }
    Ok(sorted_eigenvalues(&((&s + s.transpose()) * 0.5)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactTerms {
    pub moment: RatMatrix,
    pub killing_op: RatMatrix,
    pub mean_curvature: Vec<Rat>,
    pub ricci: RatMatrix,
}

#[derive(Clone, Debug)]
pub struct RicciReport {
    pub moment: DMatrix<f64>,
    pub killing_op: DMatrix<f64>,
    pub mean_curvature: DVector<f64>,
    pub ricci: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    pub verdict: Verdict,
    pub exact: Option<ExactTerms>,
}

/// Moment-map bilinear form m(e_k, e_l) for a diagonal gram g.
fn moment_form_diag(alg: &LieAlgebra, g: &[Rat]) -> RatMatrix {
    let n = alg.dim();
    let half = Rat::new(1.into(), 2.into());
    let mut m = RatMatrix::zeros(n, n);
    // first term: −½ Σ_{i,j} c_{ki}^j c_{li}^j g_j / g_i
    let mut by_pair: HashMap<(usize, usize), Vec<(usize, Rat)>> = HashMap::new();
    for (a, b, j, c) in alg.bracket().iter() {
        by_pair.entry((b, j)).or_default().push((a, c.clone()));
        by_pair.entry((a, j)).or_default().push((b, -c.clone()));
    }
    for ((i, j), list) in &by_pair {
        let w = -&half * &g[*j] / &g[*i];
        for (k, a) in list {
            let wa = &w * a;
            for (l, b) in list {
                m[(*k, *l)] += &wa * b;
            }
        }
    }
    // second term: ¼ Σ_{ordered i,j} c_{ij}^k c_{ij}^l g_k g_l / (g_i g_j)
    for ((i, j), out) in alg.bracket().pairs() {
        let w = &half / (&g[i] * &g[j]);
        let scaled: Vec<(usize, Rat)> = out.iter().map(|(k, c)| (*k, c * &g[*k])).collect();
        for (k, a) in &scaled {
            let wa = &w * a;
            for (l, b) in &scaled {
                m[(*k, *l)] += &wa * b;
            }
        }
    }
    m
}

/// Bilinear form (symmetric in the e-basis) to operator: R_{kl} = m(e_k, e_l)/g_k.
fn form_to_operator_diag(m: &RatMatrix, g: &[Rat]) -> RatMatrix {
    let n = m.rows();
    let mut r = m.clone();
    for k in 0..n {
        if !g[k].is_one() {
            for l in 0..n {
                if !r[(k, l)].is_zero() {
                    r[(k, l)] = &r[(k, l)] / &g[k];
                }
            }
        }
    }
    r
}

fn exact_terms_diag(alg: &LieAlgebra, g: &[Rat]) -> ExactTerms {
    let n = alg.dim();
    let moment = form_to_operator_diag(&moment_form_diag(alg, g), g);
    let killing_op = form_to_operator_diag(&alg.killing_form(), g);
    let tr = alg.trace_form();
    let h: Vec<Rat> = (0..n).map(|k| &tr[k] / &g[k]).collect();
    let ad_h = alg.ad_matrix(&h).expect("dimension checked");
    let half = Rat::new(1.into(), 2.into());
    let mut ricci = moment.sub(&killing_op.scale(&half));
    for k in 0..n {
        for l in 0..n {
            let a = &ad_h[(k, l)];
            let b = &ad_h[(l, k)];
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let s = (a + b * &g[l] / &g[k]) * &half;
            ricci[(k, l)] -= s;
        }
    }
    ExactTerms { moment, killing_op, mean_curvature: h, ricci }
}

/// M, B, H and Ric exactly for a rational gram.
pub fn ricci_exact(alg: &LieAlgebra, gram: &RatMatrix) -> Result<ExactTerms> {
    let n = alg.dim();
    if gram.rows() != n || !gram.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: gram.rows() });
    }
    if gram.is_diagonal() {
        let g = gram.diagonal();
        if g.iter().any(|x| *x <= Rat::zero()) {
            return Err(Error::NotPositiveDefinite);
        }
        return Ok(exact_terms_diag(alg, &g));
    }
    // G = L D Lᵀ; the frame f = e·L⁻ᵀ is D-orthogonal
    let (l, d) = gram.ldlt().ok_or(Error::NotPositiveDefinite)?;
    if d.iter().any(|x| *x <= Rat::zero()) {
        return Err(Error::NotPositiveDefinite);
    }
    let lt = l.transpose();
    let p = lt.inverse().ok_or(Error::Singular)?;
    let alg_f = alg.gl_action(&lt)?;
    let f = exact_terms_diag(&alg_f, &d);
    let back = |m: &RatMatrix| p.mul(m).mul(&lt);
    Ok(ExactTerms {
        moment: back(&f.moment),
        killing_op: back(&f.killing_op),
        mean_curvature: p.mul_vec(&f.mean_curvature),
        ricci: back(&f.ricci),
    })
}

pub fn mean_curvature_exact(alg: &LieAlgebra, gram: &RatMatrix) -> Result<Vec<Rat>> {
    crate::rational::solve(gram, &alg.trace_form()).ok_or(Error::Singular)
}

pub fn moment_map_exact(alg: &LieAlgebra, gram: &RatMatrix) -> Result<RatMatrix> {
    if gram.is_diagonal() {
        let g = gram.diagonal();
        return Ok(form_to_operator_diag(&moment_form_diag(alg, &g), &g));
    }
    Ok(ricci_exact(alg, gram)?.moment)
}

fn dense_ads(alg: &LieAlgebra) -> Vec<DMatrix<f64>> {
    (0..alg.dim()).map(|i| alg.ad_basis(i).to_f64()).collect()
}

/// Orthonormal frame P = C⁻ᵀ (G = CCᵀ) and the ad matrices in that frame.
fn orthonormal_frame(alg: &LieAlgebra, gram: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>, Vec<DMatrix<f64>>)> {
    let c = gram.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.l();
    let p = c.clone().try_inverse().ok_or(Error::Singular)?.transpose();
    let p_inv = c.transpose();
    let ads = dense_ads(alg);
    let n = alg.dim();
    let f_ads = (0..n)
        .map(|j| {
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                if p[(i, j)] != 0.0 {
                    a += &ads[i] * p[(i, j)];
                }
            }
            &p_inv * a * &p
        })
        .collect();
    Ok((p, p_inv, f_ads))
}

struct OrthoTerms {
    moment: DMatrix<f64>,
    killing: DMatrix<f64>,
    h: DVector<f64>,
    ricci: DMatrix<f64>,
}

fn sym(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// General formula in an orthonormal frame given by its ad matrices.
fn ortho_terms(ads: &[DMatrix<f64>]) -> OrthoTerms {
    let n = ads.len();
    let mut moment = DMatrix::<f64>::zeros(n, n);
    for a in ads {
        moment -= a.transpose() * a * 0.5;
        moment += a * a.transpose() * 0.25;
    }
    let mut killing = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let v = (&ads[k] * &ads[l]).trace();
            killing[(k, l)] = v;
            killing[(l, k)] = v;
        }
    }
    let h = DVector::from_iterator(n, ads.iter().map(|a| a.trace()));
    let mut ad_h = DMatrix::<f64>::zeros(n, n);
    for (k, a) in ads.iter().enumerate() {
        if h[k] != 0.0 {
            ad_h += a * h[k];
        }
    }
    let ricci = &moment - &killing * 0.5 - sym(&ad_h);
    OrthoTerms { moment, killing, h, ricci }
}

pub fn ricci_f64(alg: &LieAlgebra, gram: &DMatrix<f64>) -> Result<RicciReport> {
    let (p, p_inv, f_ads) = orthonormal_frame(alg, gram)?;
    let t = ortho_terms(&f_ads);
    let eigs = sorted_eigenvalues(&sym(&t.ricci));
    let back = |m: &DMatrix<f64>| &p * m * &p_inv;
    Ok(report(back(&t.moment), back(&t.killing), &p * &t.h, back(&t.ricci), eigs, None))
}

fn report(
    moment: DMatrix<f64>,
    killing_op: DMatrix<f64>,
    mean_curvature: DVector<f64>,
    ricci: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    exact: Option<ExactTerms>,
) -> RicciReport {
    let lambda_max = eigenvalues.last().cloned().unwrap_or(0.0);
    let verdict = classify(&eigenvalues, TAU_DEF);
    RicciReport { moment, killing_op, mean_curvature, ricci, eigenvalues, lambda_max, verdict, exact }
}

pub fn ricci(ml: &MetricLieAlgebra) -> Result<RicciReport> {
    match &ml.gram {
        Gram::Real(g) => ricci_f64(&ml.algebra, g),
        Gram::Exact(g) => {
            let ex = ricci_exact(&ml.algebra, g)?;
            let ric = ex.ricci.to_f64();
            let eigs = self_adjoint_eigenvalues(&ric, &g.to_f64())?;
            let h = DVector::from_iterator(ex.mean_curvature.len(), ex.mean_curvature.iter().map(to_f64));
            Ok(report(ex.moment.to_f64(), ex.killing_op.to_f64(), h, ric, eigs, Some(ex)))
        }
    }
}

pub fn mean_curvature(ml: &MetricLieAlgebra) -> Result<DVector<f64>> {
    match &ml.gram {
        Gram::Exact(g) => {
            let h = mean_curvature_exact(&ml.algebra, g)?;
            Ok(DVector::from_iterator(h.len(), h.iter().map(to_f64)))
        }
        Gram::Real(g) => {
            let tr: Vec<f64> = ml.algebra.trace_form().iter().map(to_f64).collect();
            g.clone().lu().solve(&DVector::from_vec(tr)).ok_or(Error::Singular)
        }
    }
}

pub fn moment_map(ml: &MetricLieAlgebra) -> Result<DMatrix<f64>> {
    match &ml.gram {
        Gram::Exact(g) => Ok(moment_map_exact(&ml.algebra, g)?.to_f64()),
        Gram::Real(g) => Ok(ricci_f64(&ml.algebra, g)?.moment),
    }
}

fn check_partition(n: usize, parts: &[&[usize]]) -> Result<()> {
    let mut seen = vec![false; n];
    for part in parts {
        for &i in *part {
            if i >= n || seen[i] {
                return Err(Error::Invalid("index sets must partition the basis".into()));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Invalid("index sets must partition the basis".into()));
    }
    Ok(())
}

fn check_orthogonal(g: &DMatrix<f64>, parts: &[&[usize]]) -> Result<()> {
    let tol = 1e-12 * g.amax().max(1.0);
    for (x, p) in parts.iter().enumerate() {
        for q in &parts[x + 1..] {
            for &i in *p {
                for &j in *q {
                    if g[(i, j)].abs() > tol {
                        return Err(Error::Invalid(format!("split not orthogonal: gram({i},{j}) != 0")));
                    }
                }
            }
        }
    }
    Ok(())
}

fn brackets_vanish(alg: &LieAlgebra, p: &[usize], q: &[usize]) -> bool {
    p.iter().all(|&i| q.iter().all(|&j| i == j || alg.bracket().bracket_basis(i, j).is_empty()))
}

fn sub(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Ricci operator of g = (a ⊕ r) ⋉ n assembled from the block formulas
/// (a abelian, [a,r] = 0, r a subalgebra, n a nilpotent ideal, a ⊥ r ⊥ n).
pub fn ricci_triple(ml: &MetricLieAlgebra, a: &[usize], r: &[usize], n: &[usize]) -> Result<DMatrix<f64>> {
    let alg = &ml.algebra;
    let dim = alg.dim();
    check_partition(dim, &[a, r, n])?;
    let g = ml.gram.to_f64();
    check_orthogonal(&g, &[a, r, n])?;
    if !brackets_vanish(alg, a, a) {
        return Err(Error::Invalid("a is not abelian".into()));
    }
    if !brackets_vanish(alg, a, r) {
        return Err(Error::Invalid("[a,r] != 0".into()));
    }
    if !r.is_empty() && alg.subalgebra(r).is_err() {
        return Err(Error::Invalid("r is not a subalgebra".into()));
    }
    if !alg.is_ideal(n) || !alg.subalgebra(n)?.is_nilpotent() {
        return Err(Error::Invalid("n is not a nilpotent ideal".into()));
    }
    let (p, p_inv, ads) = orthonormal_frame(alg, &g)?;
    // P is block diagonal for the partition, so positions keep their roles
    let restrict = |i: usize| sub(&ads[i], n, n);
    let sym_n: Vec<Option<DMatrix<f64>>> = (0..dim).map(|i| if n.contains(&i) { None } else { Some(sym(&restrict(i))) }).collect();
    let h = DVector::from_iterator(dim, ads.iter().map(|x| x.trace()));
    let mut rf = DMatrix::<f64>::zeros(dim, dim);
    // r block
    if !r.is_empty() {
        let r_ads: Vec<DMatrix<f64>> = r.iter().map(|&i| sub(&ads[i], r, r)).collect();
        let ric_r = ortho_terms(&r_ads).ricci;
        for (x, &i) in r.iter().enumerate() {
            for (y, &j) in r.iter().enumerate() {
                rf[(i, j)] = ric_r[(x, y)];
            }
        }
    }
    let left: Vec<usize> = a.iter().chain(r).copied().collect();
    for &i in &left {
        for &j in &left {
            let si = sym_n[i].as_ref().unwrap();
            let sj = sym_n[j].as_ref().unwrap();
            rf[(i, j)] -= (si * sj).trace();
        }
    }
    // n block
    let n_ads: Vec<DMatrix<f64>> = n.iter().map(|&i| restrict(i)).collect();
    let mut ric_n = ortho_terms(&n_ads).moment;
    let mut ad_h = DMatrix::<f64>::zeros(n.len(), n.len());
    for &i in &left {
        if h[i] != 0.0 {
            ad_h += restrict(i) * h[i];
        }
        let t = restrict(i);
        ric_n += (&t * t.transpose() - t.transpose() * &t) * 0.5;
    }
    ric_n -= sym(&ad_h);
    for (x, &i) in n.iter().enumerate() {
        for (y, &j) in n.iter().enumerate() {
            rf[(i, j)] = ric_n[(x, y)];
        }
    }
    // cross terms −½ tr((ad W|_n)ᵗ ad_n X)
    for &w in &left {
        let t = restrict(w);
        for (x, &i) in n.iter().enumerate() {
            let v = -0.5 * (t.transpose() * &n_ads[x]).trace();
            rf[(w, i)] = v;
            rf[(i, w)] = v;
        }
    }
    Ok(&p * rf * &p_inv)
}

/// Ricci operator of a ⋉ n (a abelian, n the nilradical, a ⊥ n).
pub fn ricci_solvable(ml: &MetricLieAlgebra, a: &[usize], n: &[usize]) -> Result<DMatrix<f64>> {
    let alg = &ml.algebra;
    let all: Vec<Vec<Rat>> = alg.full_basis();
    let derived = alg.bracket_span(&all, &all);
    if !derived.iter().all(|v| crate::lie::supported_in(v, n)) {
        return Err(Error::Invalid("n does not contain [g,g]; not the nilradical".into()));
    }
    ricci_triple(ml, a, &[], n)
}

/// Whether every ad A|_n (A in the listed a-basis) is normal for the gram restricted to n.
pub fn ad_normal(ml: &MetricLieAlgebra, a: &[usize], n: &[usize]) -> Result<bool> {
    let g = ml.gram.to_f64();
    let gn = sub(&g, n, n);
    let (p, p_inv) = orthonormal_frame_sub(&gn)?;
    let tol = 1e-10;
    for &i in a {
        let ad = ml.algebra.ad_basis(i).to_f64();
        let t = &p_inv * sub(&ad, n, n) * &p;
        let scale = t.amax().max(1.0);
        if (&t * t.transpose() - t.transpose() * &t).amax() > tol * scale * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

fn orthonormal_frame_sub(g: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let c = g.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.l();
    let p = c.clone().try_inverse().ok_or(Error::Singular)?.transpose();
    Ok((p, c.transpose()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum NiceViolation {
    /// [e_i, e_j] has more than one nonzero coordinate.
    MultipleOutputs { i: usize, j: usize },
    /// e_k appears in both [e_i, e_j1] and [e_i, e_j2].
    MultiplePartners { i: usize, k: usize, j1: usize, j2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceReport {
    pub nice: bool,
    pub violation: Option<NiceViolation>,
    /// For nice bases: whether the moment map of the identity gram is diagonal.
    pub moment_diagonal: Option<bool>,
}

pub fn is_nice_basis(alg: &LieAlgebra) -> NiceReport {
    for ((i, j), out) in alg.bracket().pairs() {
        if out.len() > 1 {
            return NiceReport { nice: false, violation: Some(NiceViolation::MultipleOutputs { i, j }), moment_diagonal: None };
        }
    }
    for (i, row) in alg.bracket().ordered_table().iter().enumerate() {
        let mut partner: HashMap<usize, usize> = HashMap::new();
        for (j, img) in row {
            for (k, _) in img {
                if let Some(&j1) = partner.get(k) {
                    let violation = NiceViolation::MultiplePartners { i, k: *k, j1, j2: *j };
                    return NiceReport { nice: false, violation: Some(violation), moment_diagonal: None };
                }
                partner.insert(*k, *j);
            }
        }
    }
    let ones = vec![Rat::one(); alg.dim()];
    let m = moment_form_diag(alg, &ones);
    NiceReport { nice: true, violation: None, moment_diagonal: Some(m.is_diagonal()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{heisenberg, StructureTensor};
    use crate::rational::{int, rat};

    fn two_dim() -> LieAlgebra {
        let mut t = StructureTensor::new(2);
        t.add(0, 1, 1, &int(1));
        LieAlgebra::new(LieAlgebra::generic_labels(2), t).unwrap()
    }

    #[test]
    fn heisenberg_moment_map() {
        // ordered double sum: M = diag(-1/2, -1/2, 1/2)
        let ml = MetricLieAlgebra::identity(heisenberg(1));
        let rep = ricci(&ml).unwrap();
        let ex = rep.exact.unwrap();
        assert_eq!(ex.moment, RatMatrix::from_diag(&[rat(-1, 2), rat(-1, 2), rat(1, 2)]));
        assert_eq!(ex.ricci, ex.moment);
        assert_eq!(rep.verdict, Verdict::Indefinite);
    }

    #[test]
    fn two_dim_solvable() {
        let ml = MetricLieAlgebra::identity(two_dim());
        let rep = ricci(&ml).unwrap();
        let ex = rep.exact.unwrap();
        assert_eq!(ex.mean_curvature, vec![int(1), int(0)]);
        assert_eq!(ex.ricci, RatMatrix::from_diag(&[int(-1), int(-1)]));
        assert_eq!(rep.verdict, Verdict::NegativeDefinite);
    }

    #[test]
    fn abelian_is_flat() {
        let alg = LieAlgebra::abelian(LieAlgebra::generic_labels(3)).unwrap();
        let rep = ricci(&MetricLieAlgebra::identity(alg)).unwrap();
        assert_eq!(rep.verdict, Verdict::Zero);
        assert!(rep.exact.unwrap().ricci.is_zero());
    }

    #[test]
    fn exact_and_float_routes_agree_for_dense_gram() {
        let mut t = StructureTensor::new(3);
        t.add(0, 1, 1, &int(1));
        t.add(0, 2, 2, &int(2));
        t.add(0, 2, 1, &int(1));
        let alg = LieAlgebra::new(LieAlgebra::generic_labels(3), t).unwrap();
        let g = RatMatrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(3), rat(1, 2)],
            vec![int(0), rat(1, 2), int(1)],
        ]);
        let exact = ricci(&MetricLieAlgebra::new(alg.clone(), Gram::Exact(g.clone())).unwrap()).unwrap();
        let float = ricci(&MetricLieAlgebra::new(alg, Gram::Real(g.to_f64())).unwrap()).unwrap();
        assert!((exact.ricci - float.ricci).amax() < 1e-12);
        assert!((exact.mean_curvature - float.mean_curvature).amax() < 1e-12);
        for (a, b) in exact.eigenvalues.iter().zip(&float.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn definiteness_examples() {
        let d = |v: &[f64]| DMatrix::from_diagonal(&DVector::from_row_slice(v));
        assert_eq!(definiteness(&d(&[-1.0, -2.0]), TAU_DEF).unwrap().0, Verdict::NegativeDefinite);
        assert_eq!(definiteness(&d(&[-1.0, 0.0]), TAU_DEF).unwrap().0, Verdict::NegativeSemidefinite);
        assert_eq!(definiteness(&d(&[-1.0, 1.0]), TAU_DEF).unwrap().0, Verdict::Indefinite);
        let skew = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(definiteness(&skew, TAU_DEF).is_err());
    }

    #[test]
    fn nice_bases() {
        let r = is_nice_basis(&heisenberg(1));
        assert!(r.nice && r.moment_diagonal == Some(true));
        let mut t = StructureTensor::new(4);
        t.add(0, 1, 2, &int(1));
        t.add(0, 1, 3, &int(1));
        let alg = LieAlgebra::new(LieAlgebra::generic_labels(4), t).unwrap();
        let r = is_nice_basis(&alg);
        assert_eq!(r.violation, Some(NiceViolation::MultipleOutputs { i: 0, j: 1 }));
    }

    #[test]
    fn solvable_formula_on_two_dim() {
        let ml = MetricLieAlgebra::identity(two_dim());
        let r = ricci_solvable(&ml, &[0], &[1]).unwrap();
        assert!((r - DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0]))).amax() < 1e-14);
        assert!(ad_normal(&ml, &[0], &[1]).unwrap());
    }
}
