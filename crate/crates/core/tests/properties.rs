use nalgebra::DMatrix;
use num_traits::One;
use proptest::prelude::*;

use ricciforge_core::certify::{certify_compact_pipeline, check_main_theorem};
use ricciforge_core::classical::{build_noncompact_sl, Family};
use ricciforge_core::curvature::{ricci_exact, ricci_f64, Gram};
use ricciforge_core::degeneration::{lemma0_family, rho_witness, scale_bracket, ScalingFamily};
use ricciforge_core::io;
use ricciforge_core::lie::{heisenberg, LieAlgebra};
use ricciforge_core::poly::build_poly_rep;
use ricciforge_core::rational::{int, rat, Rat, RatMatrix};
use ricciforge_core::semidirect::{central_semidirect, h5_example};

fn small_algebras() -> Vec<LieAlgebra> {
    vec![heisenberg(1), h5_example().unwrap().algebra, build_noncompact_sl(2, true).unwrap().0]
}

fn int_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| RatMatrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| int(x)).collect()).collect()))
        .prop_filter("invertible", |m| m.inverse().is_some())
}

fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..9, 1i64..9).prop_map(|(a, b)| rat(a, b))
}

fn spectrum(alg: &LieAlgebra, gram: &DMatrix<f64>) -> Vec<f64> {
    ricci_f64(alg, gram).unwrap().eigenvalues
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ricci_spectrum_is_isometry_invariant((which, g) in (0usize..3).prop_flat_map(|w| (Just(w), int_matrix([3, 9, 4][w])))) {
        let alg = &small_algebras()[which];
        let n = alg.dim();
        let gi = g.inverse().unwrap();
        // (g·μ, ⟨g⁻¹·, g⁻¹·⟩) is isometric to (μ, ⟨·,·⟩)
        let moved = alg.gl_action(&g).unwrap();
        let a = spectrum(alg, &DMatrix::identity(n, n));
        let b = spectrum(&moved, &gi.transpose().mul(&gi).to_f64());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn gl_action_composes(g in int_matrix(3), h in int_matrix(3)) {
        let alg = heisenberg(1);
        prop_assert_eq!(alg.gl_action(&g.mul(&h)).unwrap(), alg.gl_action(&h).unwrap().gl_action(&g).unwrap());
    }

    #[test]
    fn ricci_scales_inversely_with_gram(which in 0usize..3, c in pos_rat(), d in prop::collection::vec(pos_rat(), 7)) {
        let alg = &small_algebras()[which];
        let n = alg.dim();
        let gram = RatMatrix::from_diag(&d.iter().cycle().take(n).cloned().collect::<Vec<_>>());
        let base = ricci_exact(alg, &gram).unwrap().ricci;
        let scaled = ricci_exact(alg, &gram.scale(&c)).unwrap().ricci;
        prop_assert_eq!(scaled.scale(&c), base);
    }

    #[test]
    fn exact_and_float_ricci_agree(which in 0usize..3, d in prop::collection::vec(pos_rat(), 7)) {
        let alg = &small_algebras()[which];
        let n = alg.dim();
        let gram = RatMatrix::from_diag(&d.iter().cycle().take(n).cloned().collect::<Vec<_>>());
        let exact = ricci_exact(alg, &gram).unwrap().ricci.to_f64();
        let float = ricci_f64(alg, &gram.to_f64()).unwrap().ricci;
        prop_assert!((exact - float).amax() < 1e-10);
    }

    #[test]
    fn main_theorem_verdicts_ignore_uniform_scale(c in pos_rat(), d in prop::collection::vec(pos_rat(), 6)) {
        let p = build_poly_rep(Family::Su, 2, 2).unwrap();
        let g = RatMatrix::from_diag(&d);
        let verdicts = |gram: &RatMatrix| {
            check_main_theorem(&p.rep, &p.split, gram).unwrap().conditions.iter().map(|c| c.pass).collect::<Vec<_>>()
        };
        prop_assert_eq!(verdicts(&g), verdicts(&g.scale(&c)));
    }

    #[test]
    fn scaling_family_matches_gl_action(t in pos_rat(), rho in pos_rat()) {
        let p = build_poly_rep(Family::Su, 2, 2).unwrap();
        let l = central_semidirect(p.rep.source(), &p.rep).unwrap();
        let f = lemma0_family(&l, &p.split, &rho).unwrap();
        let lb = scale_bracket(&l.algebra, &f).unwrap();
        prop_assert_eq!(lb.instantiate(&t).unwrap(), l.algebra.gl_action(&f.at(&t)).unwrap());
    }

    #[test]
    fn limits_for_different_rho_are_isomorphic(r1 in pos_rat(), r2 in pos_rat()) {
        let p = build_poly_rep(Family::Su, 2, 2).unwrap();
        let l = central_semidirect(p.rep.source(), &p.rep).unwrap();
        let lim = |r: &Rat| scale_bracket(&l.algebra, &lemma0_family(&l, &p.split, r).unwrap()).unwrap().take_limit().unwrap().algebra;
        let w = rho_witness(&l, &p.split, &r1, &r2);
        prop_assert_eq!(lim(&r1).gl_action(&w).unwrap(), lim(&r2));
    }

    #[test]
    fn algebra_json_round_trips(g in int_matrix(5)) {
        let alg = heisenberg(2).gl_action(&g).unwrap();
        let s = io::to_json_string(&io::algebra_to_json(&alg).unwrap()).unwrap();
        prop_assert_eq!(io::algebra_from_json(&io::from_json_str(&s).unwrap()).unwrap(), alg);
    }

    #[test]
    fn gram_json_round_trips(d in prop::collection::vec(pos_rat(), 4), x in prop::collection::vec(-1e6f64..1e6, 4)) {
        for g in [Gram::Exact(RatMatrix::from_diag(&d)), Gram::Real(DMatrix::from_row_slice(2, 2, &x))] {
            let s = io::to_json_string(&io::gram_to_json(&g)).unwrap();
            prop_assert_eq!(io::gram_from_json(&io::from_json_str(&s).unwrap()).unwrap(), g);
        }
    }
}

#[test]
fn polynomial_reps_are_homomorphisms() {
    for (f, m, n) in [(Family::Su, 2, 1), (Family::Su, 3, 3), (Family::So, 4, 2), (Family::So, 5, 2), (Family::Sp, 2, 3), (Family::Sl, 3, 2)] {
        build_poly_rep(f, m, n).unwrap().rep.check_homomorphism().unwrap();
    }
}

#[test]
fn scaling_constants_must_be_nonzero() {
    assert!(ScalingFamily::new(vec![(1, Rat::one()), (0, int(0))]).is_err());
}

#[test]
fn rep_and_certificate_json_round_trip() {
    let p = build_poly_rep(Family::So, 4, 2).unwrap();
    let s = io::to_json_string(&io::rep_to_json(&p.rep, Some(&p.split)).unwrap()).unwrap();
    let (rep, split) = io::rep_from_json(&io::from_json_str(&s).unwrap()).unwrap();
    assert_eq!(rep.operators(), p.rep.operators());
    assert_eq!(rep.labels(), p.rep.labels());
    assert_eq!(split.unwrap(), p.split);

    let cert = certify_compact_pipeline(Family::Su, 2, 2).unwrap();
    let s = io::to_json_string(&io::certificate_to_json(&cert)).unwrap();
    let back = io::certificate_from_json(&io::from_json_str(&s).unwrap(), cert.algebra.clone()).unwrap();
    assert_eq!(io::to_json_string(&io::certificate_to_json(&back)).unwrap(), s);
    assert_eq!(back.gram, cert.gram);
    assert_eq!(back.eigenvalues.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), cert.eigenvalues.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
}
