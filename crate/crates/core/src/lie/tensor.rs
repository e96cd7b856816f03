use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::rational::Rat;

/// Sparse structure constants c_{ij}^k, stored only for i < j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    entries: BTreeMap<(usize, usize), BTreeMap<usize, Rat>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub ok: bool,
    pub worst_triple: Option<(usize, usize, usize)>,
    /// Largest absolute coefficient of any Jacobi residual vector.
    pub residual: Rat,
}

impl StructureTensor {
    pub fn new(dim: usize) -> Self {
        StructureTensor { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `c` to c_{ij}^k (antisymmetry applied when i > j).
    pub fn add(&mut self, i: usize, j: usize, k: usize, c: &Rat) {
        assert!(i < self.dim && j < self.dim && k < self.dim, "index out of range");
        if c.is_zero() {
            return;
        }
        assert!(i != j, "diagonal bracket [e{i},e{i}] must vanish");
        let (a, b, val) = if i < j { (i, j, c.clone()) } else { (j, i, -c.clone()) };
        let row = self.entries.entry((a, b)).or_default();
        let slot = row.entry(k).or_insert_with(Rat::zero);
        *slot += val;
        if slot.is_zero() {
            row.remove(&k);
            if row.is_empty() {
                self.entries.remove(&(a, b));
            }
        }
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Rat) {
        let current = self.get(i, j, k);
        self.add(i, j, k, &(c - current));
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Rat {
        if i == j {
            return Rat::zero();
        }
        let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.entries.get(&(a, b)).and_then(|row| row.get(&k)) {
            Some(c) if sign => -c.clone(),
            Some(c) => c.clone(),
            None => Rat::zero(),
        }
    }

    /// [e_i, e_j] as sparse (k, c) pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return vec![];
        }
        let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
        self.entries
            .get(&(a, b))
            .map(|row| row.iter().map(|(&k, c)| (k, if neg { -c.clone() } else { c.clone() })).collect())
            .unwrap_or_default()
    }

    /// Iterates stored constants (i, j, k, c) with i < j.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, &Rat)> + '_ {
        self.entries.iter().flat_map(|(&(i, j), row)| row.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &BTreeMap<usize, Rat>)> + '_ {
        self.entries.iter().map(|(&p, row)| (p, row))
    }

    pub fn nnz(&self) -> usize {
        self.entries.values().map(|r| r.len()).sum()
    }

    pub fn is_abelian(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (&(i, j), row) in &self.entries {
            let coeff = &x[i] * &y[j] - &x[j] * &y[i];
            if coeff.is_zero() {
                continue;
            }
            for (&k, c) in row {
                out[k] += &coeff * c;
            }
        }
        out
    }

    /// For every ordered pair (i, j) with [e_i, e_j] != 0, the sparse image.
    pub fn ordered_table(&self) -> Vec<Vec<(usize, Vec<(usize, Rat)>)>> {
        let mut table: Vec<Vec<(usize, Vec<(usize, Rat)>)>> = vec![Vec::new(); self.dim];
        for (&(i, j), row) in &self.entries {
            let pos: Vec<(usize, Rat)> = row.iter().map(|(&k, c)| (k, c.clone())).collect();
            let neg: Vec<(usize, Rat)> = row.iter().map(|(&k, c)| (k, -c.clone())).collect();
            table[i].push((j, pos));
            table[j].push((i, neg));
        }
        for row in &mut table {
            row.sort_by_key(|(j, _)| *j);
        }
        table
    }

    /// Exact Jacobi check over all basis triples i < j < k.
    pub fn jacobi_report(&self) -> JacobiReport {
        let table = self.ordered_table();
        let lookup = |i: usize, j: usize| -> Option<&Vec<(usize, Rat)>> {
            table[i].binary_search_by_key(&j, |(jj, _)| *jj).ok().map(|p| &table[i][p].1)
        };
        let n = self.dim;
        let worst = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut best: Option<((usize, usize, usize), Rat)> = None;
                let mut acc = vec![Rat::zero(); n];
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        let cyc = [(i, j, k), (j, k, i), (k, i, j)];
                        let mut touched = Vec::new();
                        for &(a, b, c) in &cyc {
                            let Some(ab) = lookup(a, b) else { continue };
                            for (m, coef) in ab {
                                let Some(mc) = lookup(*m, c) else { continue };
                                for (r, d) in mc {
                                    acc[*r] += coef * d;
                                    touched.push(*r);
                                }
                            }
                        }
                        if touched.is_empty() {
                            continue;
                        }
                        let mut worst_here = Rat::zero();
                        for r in touched {
                            let v = std::mem::replace(&mut acc[r], Rat::zero());
                            if v.abs() > worst_here {
                                worst_here = v.abs();
                            }
                        }
                        if !worst_here.is_zero() && best.as_ref().is_none_or(|(_, w)| worst_here > *w) {
                            best = Some(((i, j, k), worst_here));
                        }
                    }
                }
                best
            })
            .reduce(
                || None,
                |a, b| match (a, b) {
                    (Some(x), Some(y)) => Some(if y.1 > x.1 || (y.1 == x.1 && y.0 < x.0) { y } else { x }),
                    (x, None) => x,
                    (None, y) => y,
                },
            );
        match worst {
            None => JacobiReport { ok: true, worst_triple: None, residual: Rat::zero() },
            Some((t, r)) => JacobiReport { ok: false, worst_triple: Some(t), residual: r },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn antisymmetry_is_implicit() {
        let mut t = StructureTensor::new(3);
        t.add(1, 0, 2, &int(1));
        assert_eq!(t.get(0, 1, 2), int(-1));
        assert_eq!(t.get(1, 0, 2), int(1));
        t.add(0, 1, 2, &int(1));
        assert_eq!(t.nnz(), 0);
    }

    #[test]
    fn jacobi_detects_violation() {
        let mut h3 = StructureTensor::new(3);
        h3.add(0, 1, 2, &int(1));
        assert!(h3.jacobi_report().ok);
        // J(e1,e2,e3) = [[e2,e3],e1] = [e2,e1] = -e3
        let mut bad = h3.clone();
        bad.add(1, 2, 1, &int(1));
        let rep = bad.jacobi_report();
        assert!(!rep.ok);
        assert_eq!(rep.worst_triple, Some((0, 1, 2)));
    }
}
