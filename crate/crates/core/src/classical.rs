//! Compact real forms su(m), so(m), sp(m) and the split forms sl(m,R), built from
//! explicit matrices; structure constants come from exact commutators.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::lie::{BasisLabel, LieAlgebra, Root, StructureTensor};
use crate::rational::{bareiss_echelon, int, Rat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootFamily {
    A,
    B,
    C,
    D,
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootFamily::A => "A",
            RootFamily::B => "B",
            RootFamily::C => "C",
            RootFamily::D => "D",
        };
        write!(f, "{s}")
    }
}

impl FromStr for RootFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(RootFamily::A),
            "B" => Ok(RootFamily::B),
            "C" => Ok(RootFamily::C),
            "D" => Ok(RootFamily::D),
            _ => Err(Error::Invalid(format!("unknown root family '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Su,
    So,
    Sp,
    Sl,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Su => "su",
            Family::So => "so",
            Family::Sp => "sp",
            Family::Sl => "sl",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su" => Ok(Family::Su),
            "so" => Ok(Family::So),
            "sp" => Ok(Family::Sp),
            "sl" => Ok(Family::Sl),
            _ => Err(Error::Unsupported(format!("family '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub family: RootFamily,
    pub rank: usize,
    /// Coordinates in e_1..e_k (k = m for type A, the rank otherwise).
    pub positive_roots: Vec<Vec<i32>>,
    /// Indices into `positive_roots`.
    pub simple_roots: Vec<usize>,
}

impl RootDatum {
    pub fn expected_positive_count(&self) -> usize {
        let l = self.rank;
        match self.family {
            RootFamily::A => l * (l + 1) / 2,
            RootFamily::B | RootFamily::C => l * l,
            RootFamily::D => l * (l - 1),
        }
    }

    /// Checks the root count and that each positive root is a nonnegative
    /// integer combination of the simple roots.
    pub fn validate(&self) -> Result<()> {
        if self.positive_roots.len() != self.expected_positive_count() {
            return Err(Error::Invalid(format!(
                "type {}{} needs {} positive roots, found {}",
                self.family,
                self.rank,
                self.expected_positive_count(),
                self.positive_roots.len()
            )));
        }
        if self.simple_roots.len() != self.rank {
            return Err(Error::Invalid("simple root count differs from rank".into()));
        }
        let simple: Vec<Vec<Rat>> = self
            .simple_roots
            .iter()
            .map(|&i| self.positive_roots[i].iter().map(|&c| int(c as i64)).collect())
            .collect();
        let a = RatMatrix::from_columns(&simple);
        for r in &self.positive_roots {
            let b: Vec<Rat> = r.iter().map(|&c| int(c as i64)).collect();
            let x = crate::rational::solve(&a, &b)
                .ok_or_else(|| Error::Invalid(format!("root {r:?} not in the simple-root lattice")))?;
            if x.iter().any(|c| !c.is_integer() || c < &Rat::zero()) {
                return Err(Error::Invalid(format!("root {r:?} is not a nonnegative integer combination")));
            }
        }
        Ok(())
    }

    pub fn root(&self, i: usize) -> Root {
        Root::from_dense(&self.positive_roots[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRealization {
    pub ambient: usize,
    pub labels: Vec<BasisLabel>,
    pub matrices: Vec<CMatrix>,
}

impl MatrixRealization {
    pub fn matrix(&self, label: &BasisLabel) -> Option<&CMatrix> {
        self.labels.iter().position(|l| l == label).map(|i| &self.matrices[i])
    }

    /// Expresses each commutator in the span of the basis matrices. Fails if the
    /// matrices are dependent or not closed under commutators.
    pub fn structure_tensor(&self) -> Result<StructureTensor> {
        let d = self.matrices.len();
        let flat: Vec<Vec<Rat>> = self.matrices.iter().map(|m| m.flatten()).collect();
        let len = flat.first().map_or(0, |v| v.len());
        // pick d coordinates on which the basis is independent
        let scaled = denominators_cleared(&flat);
        let (_, pivots) = bareiss_echelon(scaled, len);
        if pivots.len() != d {
            return Err(Error::Invalid("realization matrices are linearly dependent".into()));
        }
        let a_p = RatMatrix::from_rows(pivots.iter().map(|&p| flat.iter().map(|v| v[p].clone()).collect()).collect());
        let inv = a_p.inverse().ok_or(Error::Singular)?;
        let mut t = StructureTensor::new(d);
        for i in 0..d {
            for j in (i + 1)..d {
                let c = self.matrices[i].commutator(&self.matrices[j]).flatten();
                if c.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let rhs: Vec<Rat> = pivots.iter().map(|&p| c[p].clone()).collect();
                let coef = inv.mul_vec(&rhs);
                let mut back = vec![Rat::zero(); len];
                for (k, ck) in coef.iter().enumerate() {
                    if ck.is_zero() {
                        continue;
                    }
                    for (b, f) in back.iter_mut().zip(&flat[k]) {
                        if !f.is_zero() {
                            *b += ck * f;
                        }
                    }
                }
                if back != c {
                    return Err(Error::Invalid(format!(
                        "commutator [{}, {}] leaves the span of the realization",
                        self.labels[i], self.labels[j]
                    )));
                }
                for (k, ck) in coef.iter().enumerate() {
                    t.add(i, j, k, ck);
                }
            }
        }
        Ok(t)
    }
}

fn denominators_cleared(flat: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    use num_integer::Integer;
    flat.iter()
        .map(|v| {
            let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CompactBuild {
    pub algebra: LieAlgebra,
    pub realization: MatrixRealization,
    pub roots: RootDatum,
    pub notes: Vec<String>,
}

fn e_ij(n: usize, i: usize, j: usize, a: i64, b: i64) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m.add_entry(i, j, int(a), int(b));
    m
}

/// Sum of (row, col, re, im) entries, 0-based.
fn sparse(n: usize, entries: &[(usize, usize, i64, i64)]) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for &(i, j, a, b) in entries {
        m.add_entry(i, j, int(a), int(b));
    }
    m
}

struct RootedBasis {
    roots: RootDatum,
    cartan: Vec<(Root, CMatrix)>,
    x: Vec<(Root, CMatrix)>,
    y: Vec<(Root, CMatrix)>,
}

fn unit_root(k: usize, pairs: &[(usize, i32)]) -> Vec<i32> {
    let mut v = vec![0; k];
    for &(i, c) in pairs {
        v[i] += c;
    }
    v
}

fn su_basis(m: usize) -> RootedBasis {
    let mut positive = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let r = unit_root(m, &[(i, 1), (j, -1)]);
            x.push((Root::from_dense(&r), e_ij(m, i, j, 1, 0).sub(&e_ij(m, j, i, 1, 0))));
            y.push((Root::from_dense(&r), e_ij(m, i, j, 0, 1).add(&e_ij(m, j, i, 0, 1))));
            positive.push(r);
        }
    }
    let simple: Vec<usize> = (0..m - 1).map(|l| positive.iter().position(|r| *r == unit_root(m, &[(l, 1), (l + 1, -1)])).unwrap()).collect();
    let cartan = (0..m - 1)
        .map(|l| {
            let r = unit_root(m, &[(l, 1), (l + 1, -1)]);
            (Root::from_dense(&r), e_ij(m, l, l, 0, 1).sub(&e_ij(m, l + 1, l + 1, 0, 1)))
        })
        .collect();
    RootedBasis {
        roots: RootDatum { family: RootFamily::A, rank: m - 1, positive_roots: positive, simple_roots: simple },
        cartan,
        x,
        y,
    }
}

/// Block matrix helper for so(m): 2×2 blocks indexed by 0-based block numbers,
/// the odd coordinate (if any) is the last row/column.
struct SoBlocks {
    m: usize,
}

impl SoBlocks {
    fn set_block(&self, mat: &mut CMatrix, bi: usize, bj: usize, block: [[i64; 2]; 2]) {
        for (a, row) in block.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v != 0 {
                    mat.add_entry(2 * bi + a, 2 * bj + b, int(v), int(0));
                }
            }
        }
    }

    /// A_{ij} = block, A_{ji} = -blockᵀ.
    fn skew_pair(&self, bi: usize, bj: usize, block: [[i64; 2]; 2]) -> CMatrix {
        let mut mat = CMatrix::zeros(self.m, self.m);
        self.set_block(&mut mat, bi, bj, block);
        let t = [[-block[0][0], -block[1][0]], [-block[0][1], -block[1][1]]];
        self.set_block(&mut mat, bj, bi, t);
        mat
    }

    /// Column A_{r,l+1} = col, row A_{l+1,r} = -colᵀ.
    fn odd_pair(&self, br: usize, col: [i64; 2]) -> CMatrix {
        let last = self.m - 1;
        let mut mat = CMatrix::zeros(self.m, self.m);
        for (a, &v) in col.iter().enumerate() {
            if v != 0 {
                mat.add_entry(2 * br + a, last, int(v), int(0));
                mat.add_entry(last, 2 * br + a, int(-v), int(0));
            }
        }
        mat
    }
}

const J: [[i64; 2]; 2] = [[0, -1], [1, 0]];
const MINUS_J: [[i64; 2]; 2] = [[0, 1], [-1, 0]];

fn so_basis(m: usize) -> RootedBasis {
    let l = m / 2;
    let odd = m % 2 == 1;
    let blocks = SoBlocks { m };
    let mut positive = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut add = |r: Vec<i32>, xm: CMatrix, ym: CMatrix| {
        x.push((Root::from_dense(&r), xm));
        y.push((Root::from_dense(&r), ym));
        positive.push(r);
    };
    for k in 0..l {
        for j in (k + 1)..l {
            add(
                unit_root(l, &[(k, 1), (j, -1)]),
                blocks.skew_pair(k, j, [[2, 0], [0, 2]]),
                blocks.skew_pair(k, j, [[0, -2], [2, 0]]),
            );
            add(
                unit_root(l, &[(k, 1), (j, 1)]),
                blocks.skew_pair(k, j, [[2, 0], [0, -2]]),
                blocks.skew_pair(k, j, [[0, 2], [2, 0]]),
            );
        }
    }
    if odd {
        for r in 0..l {
            add(unit_root(l, &[(r, 1)]), blocks.odd_pair(r, [2, 0]), blocks.odd_pair(r, [0, 2]));
        }
    }
    let mut cartan = Vec::new();
    let mut simple = Vec::new();
    for i in 0..l.saturating_sub(1) {
        let r = unit_root(l, &[(i, 1), (i + 1, -1)]);
        let mut h = CMatrix::zeros(m, m);
        blocks.set_block(&mut h, i, i, J);
        blocks.set_block(&mut h, i + 1, i + 1, MINUS_J);
        simple.push(positive.iter().position(|p| *p == r).unwrap());
        cartan.push((Root::from_dense(&r), h));
    }
    if odd {
        let r = unit_root(l, &[(l - 1, 1)]);
        let mut h = CMatrix::zeros(m, m);
        blocks.set_block(&mut h, l - 1, l - 1, J);
        simple.push(positive.iter().position(|p| *p == r).unwrap());
        cartan.push((Root::from_dense(&r), h));
    } else {
        let r = unit_root(l, &[(l - 2, 1), (l - 1, 1)]);
        let mut h = CMatrix::zeros(m, m);
        blocks.set_block(&mut h, l - 2, l - 2, J);
        blocks.set_block(&mut h, l - 1, l - 1, J);
        simple.push(positive.iter().position(|p| *p == r).unwrap());
        cartan.push((Root::from_dense(&r), h));
    }
    let family = if odd { RootFamily::B } else { RootFamily::D };
    RootedBasis { roots: RootDatum { family, rank: l, positive_roots: positive, simple_roots: simple }, cartan, x, y }
}

fn sp_basis(m: usize) -> RootedBasis {
    let n = 2 * m;
    let mut positive = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut add = |r: Vec<i32>, xm: CMatrix, ym: CMatrix| {
        x.push((Root::from_dense(&r), xm));
        y.push((Root::from_dense(&r), ym));
        positive.push(r);
    };
    for k in 0..m {
        for j in (k + 1)..m {
            add(
                unit_root(m, &[(k, 1), (j, -1)]),
                sparse(n, &[(k, j, 1, 0), (m + j, m + k, -1, 0), (j, k, -1, 0), (m + k, m + j, 1, 0)]),
                sparse(n, &[(k, j, 0, 1), (m + j, m + k, 0, -1), (j, k, 0, 1), (m + k, m + j, 0, -1)]),
            );
            add(
                unit_root(m, &[(k, 1), (j, 1)]),
                sparse(n, &[(k, m + j, 1, 0), (j, m + k, 1, 0), (m + k, j, -1, 0), (m + j, k, -1, 0)]),
                sparse(n, &[(k, m + j, 0, 1), (j, m + k, 0, 1), (m + k, j, 0, 1), (m + j, k, 0, 1)]),
            );
        }
    }
    for r in 0..m {
        add(
            unit_root(m, &[(r, 2)]),
            sparse(n, &[(r, m + r, 1, 0), (m + r, r, -1, 0)]),
            sparse(n, &[(r, m + r, 0, 1), (m + r, r, 0, 1)]),
        );
    }
    let mut cartan = Vec::new();
    let mut simple = Vec::new();
    for i in 0..m - 1 {
        let r = unit_root(m, &[(i, 1), (i + 1, -1)]);
        let h = sparse(n, &[(i, i, 0, 1), (i + 1, i + 1, 0, -1), (m + i, m + i, 0, -1), (m + i + 1, m + i + 1, 0, 1)]);
        simple.push(positive.iter().position(|p| *p == r).unwrap());
        cartan.push((Root::from_dense(&r), h));
    }
    let r = unit_root(m, &[(m - 1, 2)]);
    simple.push(positive.iter().position(|p| *p == r).unwrap());
    cartan.push((Root::from_dense(&r), sparse(n, &[(m - 1, m - 1, 0, 1), (n - 1, n - 1, 0, -1)])));
    RootedBasis { roots: RootDatum { family: RootFamily::C, rank: m, positive_roots: positive, simple_roots: simple }, cartan, x, y }
}

pub fn family_minimum(family: Family) -> usize {
    match family {
        Family::Su | Family::Sl => 2,
        Family::So => 3,
        Family::Sp => 1,
    }
}

fn assemble(basis: RootedBasis, ambient: usize, center: Option<CMatrix>) -> Result<(LieAlgebra, MatrixRealization, RootDatum)> {
    basis.roots.validate()?;
    let mut labels = Vec::new();
    let mut matrices = Vec::new();
    if let Some(z) = center {
        labels.push(BasisLabel::Z);
        matrices.push(z);
    }
    for (r, h) in basis.cartan {
        labels.push(BasisLabel::CartanH(r));
        matrices.push(h);
    }
    for (r, xm) in basis.x {
        labels.push(BasisLabel::RootX(r));
        matrices.push(xm);
    }
    for (r, ym) in basis.y {
        labels.push(BasisLabel::RootY(r));
        matrices.push(ym);
    }
    let realization = MatrixRealization { ambient, labels: labels.clone(), matrices };
    let tensor = realization.structure_tensor()?;
    let algebra = LieAlgebra::new(labels, tensor)?.with_root_meta(basis.roots.clone());
    Ok((algebra, realization, basis.roots))
}

/// Compact real form in the explicit matrix realization, basis ordered
/// {H^α (α simple), X^β, Y^β (β positive)}.
pub fn build_compact(family: Family, m: usize) -> Result<CompactBuild> {
    let min = family_minimum(family);
    if family == Family::Sl {
        return Err(Error::Unsupported("sl(m,R) is not compact; use build_noncompact_sl".into()));
    }
    if m < min {
        return Err(Error::Invalid(format!("{family}({m}) is below the family minimum m = {min}")));
    }
    let mut notes = Vec::new();
    let (basis, ambient) = match family {
        Family::Su => (su_basis(m), m),
        Family::So => {
            if m == 3 {
                notes.push("so(3) is isomorphic to su(2)".to_string());
            }
            (so_basis(m), m)
        }
        Family::Sp => (sp_basis(m), 2 * m),
        Family::Sl => unreachable!(),
    };
    let (algebra, realization, roots) = assemble(basis, ambient, None)?;
    Ok(CompactBuild { algebra, realization, roots, notes })
}

/// sl(m,R) with H_α = E_ii − E_{i+1,i+1}, X^β = E_ij − E_ji, Y^β = E_ij + E_ji,
/// optionally preceded by Z = Id (giving gl(m,R)).
pub fn build_noncompact_sl(m: usize, with_center: bool) -> Result<(LieAlgebra, MatrixRealization)> {
    if m < 2 {
        return Err(Error::Invalid(format!("sl({m}) is below the family minimum m = 2")));
    }
    let mut b = su_basis(m);
    for (_, h) in &mut b.cartan {
        // i(E_ll − E_{l+1,l+1}) -> E_ll − E_{l+1,l+1}
        *h = CMatrix::real(h.im.clone());
    }
    for (_, y) in &mut b.y {
        *y = CMatrix::real(y.im.clone());
    }
    let center = with_center.then(|| CMatrix::identity(m));
    let (alg, real, _) = assemble(b, m, center)?;
    Ok((alg, real))
}

/// Complex linear forms z_1..z_m in x_1..x_m: z_{2k-1} = x_{2k-1} + i x_{2k},
/// z_{2k} = x_{2k-1} − i x_{2k}, and z_m = x_m when m is odd. Row r holds the
/// coefficients of z_{r+1}.
pub fn so_variables(m: usize) -> Result<CMatrix> {
    if m < 2 {
        return Err(Error::Invalid("so_variables needs m >= 2".into()));
    }
    let mut t = CMatrix::zeros(m, m);
    for k in 0..m / 2 {
        t.add_entry(2 * k, 2 * k, int(1), int(0));
        t.add_entry(2 * k, 2 * k + 1, int(0), int(1));
        t.add_entry(2 * k + 1, 2 * k, int(1), int(0));
        t.add_entry(2 * k + 1, 2 * k + 1, int(0), int(-1));
    }
    if m % 2 == 1 {
        t.add_entry(m - 1, m - 1, int(1), int(0));
    }
    Ok(t)
}

/// Indices of the Cartan, X and Y basis elements by label kind.
pub fn root_layout(labels: &[BasisLabel]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut h = Vec::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match l {
            BasisLabel::CartanH(_) => h.push(i),
            BasisLabel::RootX(_) => x.push(i),
            BasisLabel::RootY(_) => y.push(i),
            _ => {}
        }
    }
    (h, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn dims(family: Family, m: usize) -> usize {
        match family {
            Family::Su => m * m - 1,
            Family::So => m * (m - 1) / 2,
            Family::Sp => m * (2 * m + 1),
            Family::Sl => m * m - 1,
        }
    }

    #[test]
    fn dimensions_and_jacobi() {
        for (f, ms) in [(Family::Su, 2..=4), (Family::So, 3..=6), (Family::Sp, 1..=3)] {
            for m in ms {
                let b = build_compact(f, m).unwrap();
                assert_eq!(b.algebra.dim(), dims(f, m), "{f}({m})");
                assert!(b.algebra.check_jacobi().ok);
                assert_eq!(b.roots.positive_roots.len(), b.roots.expected_positive_count());
            }
        }
        assert!(build_compact(Family::So, 2).is_err());
        assert!(build_compact(Family::Su, 1).is_err());
    }

    #[test]
    fn su2_brackets() {
        let b = build_compact(Family::Su, 2).unwrap();
        let t = b.algebra.bracket();
        // basis H, X, Y; [X, Y] = 2H
        assert_eq!(t.bracket_basis(1, 2), vec![(0, int(2))]);
    }

    #[test]
    fn cartan_shape() {
        for (f, m) in [(Family::Su, 4), (Family::So, 5), (Family::So, 6), (Family::Sp, 3)] {
            let b = build_compact(f, m).unwrap();
            let (hs, xs, ys) = root_layout(b.algebra.labels());
            let t = b.algebra.bracket();
            for &h in &hs {
                for (&x, &y) in xs.iter().zip(&ys) {
                    assert!(t.bracket_basis(h, x).iter().all(|(k, _)| *k == y), "{f}({m})");
                    assert!(t.bracket_basis(h, y).iter().all(|(k, _)| *k == x), "{f}({m})");
                }
            }
        }
    }

    #[test]
    fn sl2_relations() {
        let (sl2, real) = build_noncompact_sl(2, false).unwrap();
        let t = sl2.bracket();
        assert_eq!(t.bracket_basis(1, 2), vec![(0, int(2))]);
        assert_eq!(t.bracket_basis(0, 2), vec![(1, int(2))]);
        assert_eq!(t.bracket_basis(0, 1), vec![(2, int(2))]);
        assert_eq!(real.matrices[1].re, RatMatrix::from_i64(2, 2, &[0, 1, -1, 0]));
        let k = sl2.killing_form();
        assert!(k.is_diagonal());
        assert_eq!(k.diagonal(), vec![int(8), int(-8), int(8)]);
        let (gl2, _) = build_noncompact_sl(2, true).unwrap();
        assert_eq!(gl2.labels()[0], BasisLabel::Z);
        assert_eq!(gl2.center().len(), 1);
    }

    #[test]
    fn zeta_forms() {
        let t = so_variables(4).unwrap();
        assert_eq!(t.entry(2, 2), (int(1), int(0)));
        assert_eq!(t.entry(2, 3), (int(0), int(1)));
        assert_eq!(t.entry(3, 3), (int(0), int(-1)));
        let t5 = so_variables(5).unwrap();
        assert_eq!(t5.entry(4, 4), (int(1), int(0)));
        assert_eq!((0..4).filter(|&j| t5.entry(4, j) != (int(0), int(0))).count(), 0);
        let t2 = so_variables(2).unwrap();
        assert_eq!(t2.entry(1, 1), (int(0), int(-1)));
    }
}
