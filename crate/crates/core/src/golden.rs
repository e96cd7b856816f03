//! The two worked limits with known Ricci operators, rebuilt from scratch.

use num_traits::One;

use crate::classical::{build_noncompact_sl, Family};
use crate::curvature::ricci_exact;
use crate::degeneration::{lemma0_family, scale_bracket};
use crate::error::Result;
use crate::lie::LieAlgebra;
use crate::poly::{build_poly_rep, standard_rep, SubspaceSplit};
use crate::rational::{int, Rat, RatMatrix};
use crate::semidirect::central_semidirect;

#[derive(Clone, Debug)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub algebra: LieAlgebra,
    pub gram: RatMatrix,
    pub expected: RatMatrix,
    /// Ricci operator in the basis the expected matrix is written in.
    pub computed: RatMatrix,
}

impl GoldenCheck {
    pub fn pass(&self) -> bool {
        self.expected == self.computed
    }
}

/// Lemma-0 limit of gl(2,R) x W_2 at the given ρ.
pub fn gl2_w2_limit(rho: &Rat) -> Result<LieAlgebra> {
    let p = build_poly_rep(Family::Sl, 2, 2)?;
    let l = central_semidirect(p.rep.source(), &p.rep)?;
    Ok(scale_bracket(&l.algebra, &lemma0_family(&l, &p.split, rho)?)?.take_limit()?.algebra)
}

/// (RZ + sl(2,R)) x C², basis {Z, H, X, Y, z1, iz1, z2, iz2}, degenerated with
/// z1 in V₁ and z2 in V₂.
pub fn sl2_c2_limit() -> Result<LieAlgebra> {
    let (sl2, real) = build_noncompact_sl(2, false)?;
    let rep = standard_rep(&sl2, &real)?;
    let l = central_semidirect(&sl2, &rep)?;
    let split = SubspaceSplit::new(vec![0, 1], 4)?;
    Ok(scale_bracket(&l.algebra, &lemma0_family(&l, &split, &Rat::one())?)?.take_limit()?.algebra)
}

fn diag(v: &[i64]) -> RatMatrix {
    RatMatrix::from_diag(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
}

/// Gram making the columns of `p` orthonormal, P⁻ᵀ P⁻¹.
pub fn gram_for_basis(p: &RatMatrix) -> Option<RatMatrix> {
    let inv = p.inverse()?;
    Some(inv.transpose().mul(&inv))
}

pub fn golden_checks() -> Result<Vec<GoldenCheck>> {
    let mut out = Vec::new();

    let gl2 = gl2_w2_limit(&Rat::one())?;
    // ½v₁, ½v₂, ½v₅, ½v₆ orthonormal
    let gram = diag(&[1, 1, 1, 1, 4, 4, 1, 1, 4, 4]);
    let computed = ricci_exact(&gl2, &gram)?.ricci;
    out.push(GoldenCheck {
        name: "gl2_w2_rescaled",
        algebra: gl2,
        gram,
        expected: diag(&[-6, -24, -2, -2, -7, -7, -4, -4, -7, -7]),
        computed,
    });

    let sl2 = sl2_c2_limit()?;
    let id = RatMatrix::identity(8);
    let computed = ricci_exact(&sl2, &id)?.ricci;
    let mut expected = diag(&[-4, -12, -1, -1, -5, -5, -3, -3]);
    expected[(2, 3)] = int(1);
    expected[(3, 2)] = int(1);
    out.push(GoldenCheck { name: "sl2_c2_limit", algebra: sl2.clone(), gram: id, expected, computed });

    // columns X+Y, X−Y
    let mut p = RatMatrix::identity(8);
    p[(3, 2)] = int(1);
    p[(2, 3)] = int(1);
    p[(3, 3)] = int(-1);
    let gram = gram_for_basis(&p).expect("invertible");
    let ric = ricci_exact(&sl2, &gram)?.ricci;
    let computed = p.inverse().expect("invertible").mul(&ric).mul(&p);
    out.push(GoldenCheck {
        name: "sl2_c2_rotated",
        algebra: sl2,
        gram,
        expected: diag(&[-4, -12, -8, -12, -2, -2, -6, -6]),
        computed,
    });
    Ok(out)
}
