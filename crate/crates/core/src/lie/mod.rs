//! Lie algebras as exact structure-constant tensors.

mod label;
mod tensor;

pub use label::{BasisLabel, Phase, Root};
pub use tensor::{JacobiReport, StructureTensor};

use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::classical::RootDatum;
use crate::error::{Error, Result};
use crate::rational::{span_basis, span_contains, Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    labels: Vec<BasisLabel>,
    bracket: StructureTensor,
    root_meta: Option<RootDatum>,
}

pub fn check_jacobi(t: &StructureTensor) -> JacobiReport {
    t.jacobi_report()
}

impl LieAlgebra {
    /// Validates labels and the Jacobi identity (exactly).
    pub fn new(labels: Vec<BasisLabel>, bracket: StructureTensor) -> Result<Self> {
        let alg = Self::from_parts_unchecked(labels, bracket)?;
        let rep = alg.bracket.jacobi_report();
        if !rep.ok {
            return Err(Error::Jacobi {
                triple: rep.worst_triple.unwrap_or_default(),
                residual: rep.residual.to_string(),
            });
        }
        Ok(alg)
    }

    /// Validates labels only. For tensors that are Lie brackets by construction.
    pub(crate) fn from_parts_unchecked(labels: Vec<BasisLabel>, bracket: StructureTensor) -> Result<Self> {
        if labels.len() != bracket.dim() {
            return Err(Error::DimensionMismatch { expected: bracket.dim(), found: labels.len() });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Ok(LieAlgebra { labels, bracket, root_meta: None })
    }

    pub fn with_root_meta(mut self, meta: RootDatum) -> Self {
        self.root_meta = Some(meta);
        self
    }

    pub fn abelian(labels: Vec<BasisLabel>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, StructureTensor::new(n))
    }

    /// Generic labels e1..en.
    pub fn generic_labels(n: usize) -> Vec<BasisLabel> {
        (1..=n).map(|i| BasisLabel::generic(format!("e{i}"))).collect()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn bracket(&self) -> &StructureTensor {
        &self.bracket
    }

    pub fn root_meta(&self) -> Option<&RootDatum> {
        self.root_meta.as_ref()
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn relabel(&self, labels: Vec<BasisLabel>) -> Result<Self> {
        let mut out = Self::from_parts_unchecked(labels, self.bracket.clone())?;
        out.root_meta = self.root_meta.clone();
        Ok(out)
    }

    fn check_len(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    pub fn bracket_eval(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket.bracket(x, y))
    }

    pub fn check_jacobi(&self) -> JacobiReport {
        self.bracket.jacobi_report()
    }

    /// Matrix of ad x: column j is [x, e_j].
    pub fn ad_matrix(&self, x: &[Rat]) -> Result<RatMatrix> {
        self.check_len(x)?;
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for (i, j, k, c) in self.bracket.iter() {
            if !x[i].is_zero() {
                m[(k, j)] += &x[i] * c;
            }
            if !x[j].is_zero() {
                m[(k, i)] -= &x[j] * c;
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for (j, img) in (0..n).map(|j| (j, self.bracket.bracket_basis(i, j))) {
            for (k, c) in img {
                m[(k, j)] = c;
            }
        }
        m
    }

    /// (tr ad e_i)_i, computed as Σ_j c_{ij}^j.
    pub fn trace_form(&self) -> Vec<Rat> {
        let mut t = vec![Rat::zero(); self.dim()];
        for (i, j, k, c) in self.bracket.iter() {
            if k == j {
                t[i] += c;
            }
            if k == i {
                t[j] -= c;
            }
        }
        t
    }

    pub fn is_unimodular(&self) -> bool {
        self.trace_form().iter().all(|v| v.is_zero())
    }

    /// K_{kl} = tr(ad e_k ad e_l) = Σ_{i,j} c_{ki}^j c_{lj}^i.
    pub fn killing_form(&self) -> RatMatrix {
        let n = self.dim();
        let table = self.bracket.ordered_table();
        // by_pair[(i,j)] = list of (k, c_{ki}^j)
        let mut by_pair: std::collections::HashMap<(usize, usize), Vec<(usize, Rat)>> = Default::default();
        for (k, row) in table.iter().enumerate() {
            for (i, img) in row {
                for (j, c) in img {
                    by_pair.entry((*i, *j)).or_default().push((k, c.clone()));
                }
            }
        }
        let mut kf = RatMatrix::zeros(n, n);
        for ((i, j), left) in &by_pair {
            let Some(right) = by_pair.get(&(*j, *i)) else { continue };
            for (k, a) in left {
                for (l, b) in right {
                    kf[(*k, *l)] += a * b;
                }
            }
        }
        kf
    }

    /// G⁻¹ K, the Killing form as an operator self-adjoint for G.
    pub fn killing_operator(&self, gram: &RatMatrix) -> Result<RatMatrix> {
        if gram.rows() != self.dim() || !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: gram.rows() });
        }
        if !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let inv = gram.inverse().ok_or(Error::Singular)?;
        Ok(inv.mul(&self.killing_form()))
    }

    /// (g·μ)(X,Y) = g μ(g⁻¹X, g⁻¹Y).
    pub fn gl_action(&self, g: &RatMatrix) -> Result<LieAlgebra> {
        let n = self.dim();
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
        }
        if g.is_diagonal() {
            let d = g.diagonal();
            if d.iter().any(|v| v.is_zero()) {
                return Err(Error::Singular);
            }
            let mut t = StructureTensor::new(n);
            for (i, j, k, c) in self.bracket.iter() {
                t.add(i, j, k, &(c * &d[k] / (&d[i] * &d[j])));
            }
            return self.with_bracket(t);
        }
        let h = g.inverse().ok_or(Error::Singular)?;
        let cols: Vec<Vec<Rat>> = (0..n).map(|a| h.column(a)).collect();
        let mut t = StructureTensor::new(n);
        for a in 0..n {
            for b in (a + 1)..n {
                let v = self.bracket.bracket(&cols[a], &cols[b]);
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let w = g.mul_vec(&v);
                for (k, c) in w.iter().enumerate() {
                    t.add(a, b, k, c);
                }
            }
        }
        self.with_bracket(t)
    }

    /// Same labels and metadata, new bracket (assumed to be a Lie bracket).
    pub(crate) fn with_bracket(&self, bracket: StructureTensor) -> Result<LieAlgebra> {
        let mut out = Self::from_parts_unchecked(self.labels.clone(), bracket)?;
        out.root_meta = self.root_meta.clone();
        Ok(out)
    }

    fn unit(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        v[i] = Rat::one();
        v
    }

    /// Span of [A, B] for subspaces given by bases.
    pub fn bracket_span(&self, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
        let mut imgs = Vec::new();
        for x in a {
            for y in b {
                let v = self.bracket.bracket(x, y);
                if v.iter().any(|c| !c.is_zero()) {
                    imgs.push(v);
                }
            }
        }
        span_basis(&imgs)
    }

    pub fn full_basis(&self) -> Vec<Vec<Rat>> {
        (0..self.dim()).map(|i| self.unit(i)).collect()
    }

    /// g = C⁰ ⊃ C¹ = [g,g] ⊃ ... until it stabilizes; the last entry repeats the limit only if nonzero.
    pub fn lower_central_series(&self) -> Vec<Vec<Vec<Rat>>> {
        let full = self.full_basis();
        let mut series = vec![span_basis(&full)];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(&full, last);
            let done = next.len() == last.len() || next.is_empty();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    pub fn derived_series(&self) -> Vec<Vec<Vec<Rat>>> {
        let mut series = vec![span_basis(&self.full_basis())];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last);
            let done = next.len() == last.len() || next.is_empty();
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(|s| s.is_empty())
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.is_empty())
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_abelian()
    }

    /// Center: kernel of x ↦ ([x, e_j])_j.
    pub fn center(&self) -> Vec<Vec<Rat>> {
        let n = self.dim();
        // row (j,k): Σ_i x_i c_{ij}^k = 0
        let mut rows: std::collections::BTreeMap<(usize, usize), Vec<Rat>> = Default::default();
        for (i, j, k, c) in self.bracket.iter() {
            rows.entry((j, k)).or_insert_with(|| vec![Rat::zero(); n])[i] += c;
            rows.entry((i, k)).or_insert_with(|| vec![Rat::zero(); n])[j] -= c;
        }
        let rows: Vec<Vec<Rat>> = rows.into_values().collect();
        span_basis(&crate::rational::nullspace(&rows, n))
    }

    /// Restriction of the bracket to a subalgebra spanned by the given basis indices.
    pub fn subalgebra(&self, indices: &[usize]) -> Result<LieAlgebra> {
        let pos = |k: usize| indices.iter().position(|&x| x == k);
        let mut t = StructureTensor::new(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a + 1) {
                for (k, c) in self.bracket.bracket_basis(i, j) {
                    let Some(kk) = pos(k) else {
                        return Err(Error::Invalid(format!(
                            "indices do not span a subalgebra: [{}, {}] leaves it",
                            self.labels[i], self.labels[j]
                        )));
                    };
                    t.add(a, b, kk, &c);
                }
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        Self::from_parts_unchecked(labels, t)
    }

    /// Is span(indices) an ideal?
    pub fn is_ideal(&self, indices: &[usize]) -> bool {
        let sub: Vec<Vec<Rat>> = indices.iter().map(|&i| self.unit(i)).collect();
        self.bracket_span(&self.full_basis(), &sub).iter().all(|v| span_contains(&sub, v))
    }
}

/// Subspace given by a set of coordinate indices: is `v` supported inside it?
pub fn supported_in(v: &[Rat], indices: &[usize]) -> bool {
    v.iter().enumerate().all(|(i, c)| c.is_zero() || indices.contains(&i))
}

pub fn heisenberg(n: usize) -> LieAlgebra {
    // h_{2n+1}: [e_{2i-1}, e_{2i}] = e_{2n+1}
    let dim = 2 * n + 1;
    let mut t = StructureTensor::new(dim);
    for i in 0..n {
        t.add(2 * i, 2 * i + 1, dim - 1, &Rat::one());
    }
    LieAlgebra::new(LieAlgebra::generic_labels(dim), t).expect("Heisenberg bracket")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e(n: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::one();
        v
    }

    #[test]
    fn heisenberg_basics() {
        let h3 = heisenberg(1);
        assert_eq!(h3.bracket_eval(&e(3, 0), &e(3, 1)).unwrap(), e(3, 2));
        let x = vec![int(1), int(2), int(3)];
        assert!(h3.bracket_eval(&x, &x).unwrap().iter().all(|c| c.is_zero()));
        let ad = h3.ad_matrix(&e(3, 0)).unwrap();
        assert_eq!(ad[(2, 1)], int(1));
        assert_eq!(ad.nnz(), 1);
        assert!(h3.is_nilpotent());
        let series = h3.lower_central_series();
        assert_eq!(series.iter().map(|s| s.len()).collect::<Vec<_>>(), vec![3, 1, 0]);
        assert_eq!(h3.center(), vec![e(3, 2)]);
        assert!(h3.killing_form().is_zero());
        assert!(h3.bracket_eval(&e(2, 0), &e(3, 0)).is_err());
    }

    #[test]
    fn abelian_series() {
        let a = LieAlgebra::abelian(LieAlgebra::generic_labels(3)).unwrap();
        assert_eq!(a.lower_central_series().iter().map(|s| s.len()).collect::<Vec<_>>(), vec![3, 0]);
        assert!(a.ad_matrix(&e(3, 1)).unwrap().is_zero());
        assert_eq!(a.center().len(), 3);
    }

    #[test]
    fn diagonal_gl_action_on_h3() {
        // oracle: g μ(g⁻¹e1, g⁻¹e2) = g μ(e1/t, e2) = g e3 / t = e3 / t
        let t = int(5);
        let g = RatMatrix::from_diag(&[t.clone(), int(1), int(1)]);
        let moved = heisenberg(1).gl_action(&g).unwrap();
        assert_eq!(moved.bracket().get(0, 1, 2), t.recip());
        let dense = g.add(&RatMatrix::zeros(3, 3));
        assert_eq!(moved, heisenberg(1).gl_action(&dense).unwrap());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let labels = vec![BasisLabel::Z, BasisLabel::Z];
        assert!(matches!(LieAlgebra::abelian(labels), Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn solvable_two_dim() {
        let mut t = StructureTensor::new(2);
        t.add(0, 1, 1, &int(1));
        let l = LieAlgebra::new(LieAlgebra::generic_labels(2), t).unwrap();
        assert!(l.is_solvable());
        assert!(!l.is_nilpotent());
        assert_eq!(l.trace_form(), vec![int(1), int(0)]);
        assert!(l.is_ideal(&[1]));
        assert!(!l.is_ideal(&[0]));
    }
}
