//! Complex matrices with exact rational real and imaginary parts.

use num_traits::Zero;

use crate::rational::{Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    pub re: RatMatrix,
    pub im: RatMatrix,
}

impl CMatrix {
    pub fn zeros(n: usize, m: usize) -> Self {
        CMatrix { re: RatMatrix::zeros(n, m), im: RatMatrix::zeros(n, m) }
    }

    pub fn real(re: RatMatrix) -> Self {
        let im = RatMatrix::zeros(re.rows(), re.cols());
        CMatrix { re, im }
    }

    pub fn identity(n: usize) -> Self {
        Self::real(RatMatrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    /// Adds (a + bi) at (i, j).
    pub fn add_entry(&mut self, i: usize, j: usize, a: Rat, b: Rat) {
        self.re[(i, j)] += a;
        self.im[(i, j)] += b;
    }

    pub fn entry(&self, i: usize, j: usize) -> (Rat, Rat) {
        (self.re[(i, j)].clone(), self.im[(i, j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        CMatrix {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        CMatrix { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        CMatrix { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn scale(&self, s: &Rat) -> CMatrix {
        CMatrix { re: self.re.scale(s), im: self.im.scale(s) }
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> CMatrix {
        CMatrix { re: self.im.scale(&-Rat::from_integer(1.into())), im: self.re.clone() }
    }

    pub fn commutator(&self, o: &CMatrix) -> CMatrix {
        self.mul(o).sub(&o.mul(self))
    }

    /// Real 2n×2n block form [[A, -B], [B, A]].
    pub fn realify_blocks(&self) -> RatMatrix {
        let (n, m) = (self.rows(), self.cols());
        let mut r = RatMatrix::zeros(2 * n, 2 * m);
        for i in 0..n {
            for j in 0..m {
                let a = &self.re[(i, j)];
                let b = &self.im[(i, j)];
                if !a.is_zero() {
                    r[(i, j)] = a.clone();
                    r[(n + i, m + j)] = a.clone();
                }
                if !b.is_zero() {
                    r[(i, m + j)] = -b.clone();
                    r[(n + i, j)] = b.clone();
                }
            }
        }
        r
    }

    pub fn inverse(&self) -> Option<CMatrix> {
        let n = self.rows();
        let inv = self.realify_blocks().inverse()?;
        let idx: Vec<usize> = (0..n).collect();
        let low: Vec<usize> = (n..2 * n).collect();
        Some(CMatrix { re: inv.submatrix(&idx, &idx), im: inv.submatrix(&low, &idx) })
    }

    /// Realification on the interleaved basis (e_1, i e_1, e_2, i e_2, ...):
    /// a coefficient a+bi sends e_j to (a, b) and i e_j to (-b, a).
    pub fn realify_interleaved(&self) -> RatMatrix {
        let (n, m) = (self.rows(), self.cols());
        let mut r = RatMatrix::zeros(2 * n, 2 * m);
        for i in 0..n {
            for j in 0..m {
                let a = &self.re[(i, j)];
                let b = &self.im[(i, j)];
                if !a.is_zero() {
                    r[(2 * i, 2 * j)] = a.clone();
                    r[(2 * i + 1, 2 * j + 1)] = a.clone();
                }
                if !b.is_zero() {
                    r[(2 * i + 1, 2 * j)] = b.clone();
                    r[(2 * i, 2 * j + 1)] = -b.clone();
                }
            }
        }
        r
    }

    /// Flattened (re..., im...) coordinates.
    pub fn flatten(&self) -> Vec<Rat> {
        let mut v = Vec::with_capacity(2 * self.rows() * self.cols());
        for i in 0..self.rows() {
            v.extend(self.re.row(i));
        }
        for i in 0..self.rows() {
            v.extend(self.im.row(i));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn inverse_and_product() {
        // T = [[1, i], [1, -i]]
        let mut t = CMatrix::zeros(2, 2);
        t.add_entry(0, 0, int(1), int(0));
        t.add_entry(0, 1, int(0), int(1));
        t.add_entry(1, 0, int(1), int(0));
        t.add_entry(1, 1, int(0), int(-1));
        let inv = t.inverse().unwrap();
        assert_eq!(t.mul(&inv), CMatrix::identity(2));
    }

    #[test]
    fn realification_is_multiplicative() {
        let mut a = CMatrix::zeros(2, 2);
        a.add_entry(0, 1, int(2), int(-1));
        a.add_entry(1, 0, int(0), int(3));
        let mut b = CMatrix::zeros(2, 2);
        b.add_entry(0, 0, int(1), int(1));
        b.add_entry(1, 1, int(-2), int(0));
        assert_eq!(a.mul(&b).realify_interleaved(), a.realify_interleaved().mul(&b.realify_interleaved()));
        assert_eq!(a.times_i().realify_interleaved(), CMatrix::identity(2).times_i().realify_interleaved().mul(&a.realify_interleaved()));
    }
}
