//! Exact rational scalars, dense rational matrices and fraction-free elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // numerator or denominator beyond f64 range: shift both down first
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational value of a finite float.
pub fn from_f64_dyadic(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

pub fn abs_max(values: &[Rat]) -> Rat {
    values.iter().map(|v| v.abs()).max().unwrap_or_else(Rat::zero)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_diag(d: &[Rat]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RatMatrix { rows, cols, data: entries.iter().map(|&v| int(v)).collect() }
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn diagonal(&self) -> Vec<Rat> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        let mut out = vec![Rat::zero(); self.rows];
        for i in 0..self.rows {
            for (j, x) in v.iter().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() && !x.is_zero() {
                    out[i] += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn commutator(&self, other: &RatMatrix) -> RatMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rat {
        self.diagonal().into_iter().fold(Rat::zero(), |acc, v| acc + v)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| to_f64(&self[(i, j)]))
    }

    pub fn max_abs(&self) -> Rat {
        abs_max(&self.data)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].recip();
            for j in 0..n {
                if !a[(col, j)].is_zero() {
                    a[(col, j)] = &a[(col, j)] * &p;
                }
                if !inv[(col, j)].is_zero() {
                    inv[(col, j)] = &inv[(col, j)] * &p;
                }
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    if !a[(col, j)].is_zero() {
                        let d = &f * &a[(col, j)];
                        a[(r, j)] -= d;
                    }
                    if !inv[(col, j)].is_zero() {
                        let d = &f * &inv[(col, j)];
                        inv[(r, j)] -= d;
                    }
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.to_rows())
    }

    /// Basis of {x : self * x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        nullspace(&self.to_rows(), self.cols)
    }

    /// G = L D Lᵀ with L unit lower triangular. `None` unless symmetric positive definite.
    pub fn ldlt(&self) -> Option<(RatMatrix, Vec<Rat>)> {
        if !self.is_symmetric() {
            return None;
        }
        let n = self.rows;
        let mut l = Self::identity(n);
        let mut d: Vec<Rat> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self[(j, j)].clone();
            for k in 0..j {
                if !l[(j, k)].is_zero() {
                    dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
                }
            }
            if !dj.is_positive() {
                return None;
            }
            for i in (j + 1)..n {
                let mut s = self[(i, j)].clone();
                for k in 0..j {
                    if !l[(i, k)].is_zero() && !l[(j, k)].is_zero() {
                        s -= &l[(i, k)] * &l[(j, k)] * &d[k];
                    }
                }
                if !s.is_zero() {
                    l[(i, j)] = s / &dj;
                }
            }
            d.push(dj);
        }
        Some((l, d))
    }

    pub fn is_positive_definite(&self) -> bool {
        self.ldlt().is_some()
    }
}

/// Clears denominators of a rational row, returning a primitive integer row.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    primitive(ints)
}

fn primitive(row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return row;
    }
    row.into_iter().map(|v| v / &g).collect()
}

/// Fraction-free (Bareiss) row echelon form of integer rows. Returns the nonzero
/// echelon rows and their pivot columns.
pub fn bareiss_echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][col].clone();
        for i in (r + 1)..rows.len() {
            let f = rows[i][col].clone();
            for j in 0..ncols {
                let v = (&piv * &rows[i][j] - &f * &rows[r][j]) / &prev;
                rows[i][j] = v;
            }
        }
        prev = piv;
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn echelon_of(vectors: &[Vec<Rat>]) -> (Vec<Vec<BigInt>>, Vec<usize>, usize) {
    let ncols = vectors.first().map_or(0, |v| v.len());
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .map(|v| integer_row(v))
        .collect();
    let (rows, pivots) = bareiss_echelon(rows, ncols);
    (rows, pivots, ncols)
}

pub fn rank_of(vectors: &[Vec<Rat>]) -> usize {
    echelon_of(vectors).1.len()
}

/// Echelon basis of the span of `vectors`, each row made primitive.
pub fn span_basis(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let (rows, _, _) = echelon_of(vectors);
    rows.into_iter()
        .map(|row| primitive(row).into_iter().map(Rat::from_integer).collect())
        .collect()
}

pub fn span_contains(basis: &[Vec<Rat>], v: &[Rat]) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    rank_of(&all) == rank_of(basis)
}

/// Basis of the solution space of `rows · x = 0`, via fraction-free elimination
/// followed by exact back substitution.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let (ech, pivots, _) = if rows.is_empty() { (vec![], vec![], ncols) } else { echelon_of(rows) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Rat::zero(); ncols];
        x[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate().rev() {
            let mut s = Rat::zero();
            for j in (p + 1)..ncols {
                if !ech[r][j].is_zero() && !x[j].is_zero() {
                    s += Rat::from_integer(ech[r][j].clone()) * &x[j];
                }
            }
            x[p] = -s / Rat::from_integer(ech[r][p].clone());
        }
        out.push(x);
    }
    out
}

/// Solves `a x = b` exactly for square invertible or overdetermined consistent systems.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.cols();
    let mut aug: Vec<Vec<Rat>> = (0..a.rows())
        .map(|i| {
            let mut row = a.row(i);
            row.push(-b[i].clone());
            row
        })
        .collect();
    aug.retain(|r| r.iter().any(|v| !v.is_zero()));
    let ns = nullspace(&aug, n + 1);
    // a solution exists iff some null vector has nonzero last coordinate
    let v = ns.into_iter().find(|v| !v[n].is_zero())?;
    let scale = v[n].recip();
    let x: Vec<Rat> = v[..n].iter().map(|c| c * &scale).collect();
    (a.mul_vec(&x) == b).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = RatMatrix::from_i64(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = RatMatrix::from_i64(2, 2, &[1, 2, 2, 4]);
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn ldlt_reconstructs() {
        let g = RatMatrix::from_i64(3, 3, &[4, 2, 0, 2, 3, 1, 0, 1, 5]);
        let (l, d) = g.ldlt().unwrap();
        let back = l.mul(&RatMatrix::from_diag(&d)).mul(&l.transpose());
        assert_eq!(back, g);
        assert!(!RatMatrix::from_i64(2, 2, &[1, 2, 2, 1]).is_positive_definite());
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(1)]];
        assert!(span_contains(&basis, &[int(2), int(3), int(5)]));
        assert!(!span_contains(&basis, &[int(0), int(0), int(1)]));
        assert_eq!(span_basis(&basis).len(), 2);
    }

    #[test]
    fn solve_consistent_system() {
        let a = RatMatrix::from_i64(3, 2, &[1, 0, 0, 1, 1, 1]);
        let x = solve(&a, &[int(2), int(3), int(5)]).unwrap();
        assert_eq!(x, vec![int(2), int(3)]);
        assert!(solve(&a, &[int(2), int(3), int(6)]).is_none());
    }

    #[test]
    fn huge_rational_converts() {
        let big = Rat::new(BigInt::from(10).pow(400u32), BigInt::from(10).pow(399u32));
        assert!((to_f64(&big) - 10.0).abs() < 1e-9);
    }
}
