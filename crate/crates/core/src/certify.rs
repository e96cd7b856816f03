//! Hypothesis checks and negative-Ricci certificates.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classical::{build_compact, root_layout, Family};
use crate::curvature::{ricci, ricci_exact, ricci_f64, self_adjoint_eigenvalues, Gram, MetricLieAlgebra, Verdict, TAU_DEF};
use crate::degeneration::{lemma0_family, psi_family, scale_bracket};
use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::poly::{build_poly_rep, casimir_decompose_su2, BasisMeta, Representation, SubspaceSplit, TAU_EIG};
use crate::rational::{int, rat, to_f64, Rat, RatMatrix};
use crate::search::{search_negative_ricci_metric, SearchOptions};
use crate::semidirect::{central_semidirect, Semidirect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Lemma0,
    Main,
    Ssnc,
    Su2Nilpotent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    None,
    /// Operator of basis element `index` has a nonzero entry at (row, col).
    Entry { index: usize, label: String, row: usize, col: usize },
    Basis { index: usize, label: String },
    Eigenvalue { subject: String, value: f64 },
    /// Pairwise traces tr(π(Y)|ᵗ π(X)|) over the root vectors, as "p/q" strings.
    Traces { labels: Vec<String>, matrix: Vec<Vec<String>> },
    Note { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub pass: bool,
    /// The check is sufficient but not exhaustive (reported as such).
    pub heuristic: bool,
    pub witness: Witness,
}

impl Condition {
    fn new(name: &str, pass: bool, witness: Witness) -> Self {
        Condition { name: name.into(), pass, heuristic: false, witness }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: Theorem,
    pub conditions: Vec<Condition>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn first_nonzero(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> Option<(usize, usize)> {
    for &r in rows {
        for &c in cols {
            if !m[(r, c)].is_zero() {
                return Some((r, c));
            }
        }
    }
    None
}

fn label(rep: &Representation, i: usize) -> String {
    rep.source().labels()[i].to_string()
}

fn entry_witness(rep: &Representation, i: usize, rc: (usize, usize)) -> Witness {
    Witness::Entry { index: i, label: label(rep, i), row: rc.0, col: rc.1 }
}

fn check_split(rep: &Representation, split: &SubspaceSplit) -> Result<()> {
    if split.dim() != rep.dim_v() {
        return Err(Error::DimensionMismatch { expected: rep.dim_v(), found: split.dim() });
    }
    Ok(())
}

/// H^α-invariance of V₁, V₂ and π(X^α)V₁, π(Y^α)V₁ ⊆ V₂, exactly.
pub fn check_lemma0(rep: &Representation, split: &SubspaceSplit) -> Result<CheckReport> {
    check_split(rep, split)?;
    let (hs, xs, ys) = root_layout(rep.source().labels());
    let (v1, v2) = (&split.v1, &split.v2);
    let mut conditions = Vec::new();
    let mut h_fail = None;
    for &h in &hs {
        let op = rep.operator(h);
        if let Some(rc) = first_nonzero(op, v2, v1).or_else(|| first_nonzero(op, v1, v2)) {
            h_fail = Some(entry_witness(rep, h, rc));
            break;
        }
    }
    conditions.push(Condition::new("h_preserves_split", h_fail.is_none(), h_fail.unwrap_or(Witness::None)));
    for (name, idx) in [("x_maps_v1_into_v2", &xs), ("y_maps_v1_into_v2", &ys)] {
        let fail = idx.iter().find_map(|&i| first_nonzero(rep.operator(i), v1, v1).map(|rc| entry_witness(rep, i, rc)));
        conditions.push(Condition::new(name, fail.is_none(), fail.unwrap_or(Witness::None)));
    }
    Ok(CheckReport { theorem: Theorem::Lemma0, conditions })
}

fn restrict_cols(m: &RatMatrix, cols: &[usize]) -> RatMatrix {
    let rows: Vec<usize> = (0..m.rows()).collect();
    m.submatrix(&rows, cols)
}

fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Conditions (i)–(iii) for the representation with inner product `gram_v` on V.
pub fn check_main_theorem(rep: &Representation, split: &SubspaceSplit, gram_v: &RatMatrix) -> Result<CheckReport> {
    check_split(rep, split)?;
    let d = rep.dim_v();
    if gram_v.rows() != d || !gram_v.is_square() {
        return Err(Error::DimensionMismatch { expected: d, found: gram_v.rows() });
    }
    if first_nonzero(gram_v, &split.v1, &split.v2).is_some() {
        return Err(Error::Invalid("V1 is not orthogonal to V2".into()));
    }
    let (hs, xs, ys) = root_layout(rep.source().labels());
    let mut conditions = Vec::new();
    // (i) G π(H) + π(H)ᵀ G = 0
    let skew_fail = hs.iter().find_map(|&h| {
        let op = rep.operator(h);
        let s = gram_v.mul(op).add(&op.transpose().mul(gram_v));
        first_nonzero(&s, &(0..d).collect::<Vec<_>>(), &(0..d).collect::<Vec<_>>()).map(|rc| entry_witness(rep, h, rc))
    });
    conditions.push(Condition::new("i_h_skew", skew_fail.is_none(), skew_fail.unwrap_or(Witness::None)));
    // (ii)
    let roots: Vec<usize> = xs.iter().chain(&ys).copied().collect();
    let restricted: Vec<RatMatrix> = roots.iter().map(|&i| restrict_cols(rep.operator(i), &split.v1)).collect();
    let trivial = roots.iter().zip(&restricted).find(|(_, m)| m.is_zero()).map(|(&i, _)| Witness::Basis { index: i, label: label(rep, i) });
    conditions.push(Condition::new("ii_nontrivial_on_v1", trivial.is_none(), trivial.unwrap_or(Witness::None)));
    // (iii) tr(G₁₁⁻¹ P_Yᵀ G P_X) = 0 for X ≠ Y
    let g11 = gram_v.submatrix(&split.v1, &split.v1);
    let g11_inv = g11.inverse().ok_or(Error::NotPositiveDefinite)?;
    let gp: Vec<RatMatrix> = restricted.iter().map(|p| gram_v.mul(p)).collect();
    let k = roots.len();
    let mut traces = vec![vec![Rat::zero(); k]; k];
    let mut off_diag = None;
    for a in 0..k {
        for b in 0..k {
            let t = g11_inv.mul(&restricted[b].transpose().mul(&gp[a])).trace();
            if a != b && !t.is_zero() && off_diag.is_none() {
                off_diag = Some((a, b));
            }
            traces[a][b] = t;
        }
    }
    let witness = Witness::Traces {
        labels: roots.iter().map(|&i| label(rep, i)).collect(),
        matrix: traces.iter().map(|row| row.iter().map(rat_string).collect()).collect(),
    };
    conditions.push(Condition::new("iii_orthogonal_traces", off_diag.is_none(), witness));
    Ok(CheckReport { theorem: Theorem::Main, conditions })
}

fn lambda_max_sym(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    nalgebra::SymmetricEigen::new((m + m.transpose()) * 0.5).eigenvalues.max()
}

/// ρ = 2^{-k}, the largest with ρ² < ½·min(2m/λ_max(Σ P_Xᵀ P_X), 4m/λ_max(Σ P_X P_Xᵀ)),
/// P_X = π(X)|_{V₁}, m = dim V, in the orthonormal monomial basis.
pub fn choose_rho(rep: &Representation, split: &SubspaceSplit) -> Result<Rat> {
    check_split(rep, split)?;
    if split.v2.is_empty() {
        return Err(Error::Invalid("V2 is trivial".into()));
    }
    let (_, xs, ys) = root_layout(rep.source().labels());
    let d = rep.dim_v();
    let mut s1 = DMatrix::<f64>::zeros(split.v1.len(), split.v1.len());
    let mut s2 = DMatrix::<f64>::zeros(d, d);
    for &i in xs.iter().chain(&ys) {
        let p = restrict_cols(rep.operator(i), &split.v1).to_f64();
        s1 += p.transpose() * &p;
        s2 += &p * p.transpose();
    }
    let (l1, l2) = (lambda_max_sym(&s1), lambda_max_sym(&s2));
    if l1 <= 0.0 || l2 <= 0.0 {
        return Err(Error::Invalid("degenerate operator sums".into()));
    }
    let m = d as f64;
    let bound = (2.0 * m / l1).min(4.0 * m / l2);
    let mut rho = Rat::one();
    while to_f64(&(&rho * &rho)) >= bound / 2.0 {
        rho /= int(2);
    }
    Ok(rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbTarget {
    None,
    /// the real vectors p = z_k^n of V₁
    P,
    /// the vectors i·z_k^n of V₁
    Ip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    /// Every V₁ vector is scaled by this before the perturbation (gram entry 1/c²).
    pub v1_scale: Rat,
    pub target: PerturbTarget,
    pub factor: Rat,
    pub grid_index: usize,
}

#[derive(Clone, Debug)]
pub struct RicciCertificate {
    pub family: Family,
    pub m: usize,
    pub n: u32,
    /// The limit algebra whose metric is certified.
    pub algebra: LieAlgebra,
    pub gram: RatMatrix,
    pub ricci: RatMatrix,
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    pub rho: Rat,
    pub perturbation: Perturbation,
    pub pipeline: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Fixed ρ; `None` uses `choose_rho`.
    pub rho: Option<Rat>,
    pub v1_scale: Rat,
    pub perturb: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { rho: None, v1_scale: Rat::one(), perturb: true }
    }
}

/// Deterministic perturbation grid: unperturbed, then the i·p vectors of V₁ scaled
/// by 5/4, 3/4, 9/8, 7/8, then the p vectors by the same factors.
pub fn perturbation_grid() -> Vec<(PerturbTarget, Rat)> {
    let factors = [rat(5, 4), rat(3, 4), rat(9, 8), rat(7, 8)];
    let mut g = vec![(PerturbTarget::None, Rat::one())];
    for target in [PerturbTarget::Ip, PerturbTarget::P] {
        g.extend(factors.iter().map(|f| (target, f.clone())));
    }
    g
}

pub fn certify_compact_pipeline(family: Family, m: usize, n: u32) -> Result<RicciCertificate> {
    if family == Family::Sl {
        return Err(Error::Unsupported("the compact pipeline takes su, so or sp".into()));
    }
    certify_pipeline(family, m, n, &PipelineOptions::default())
}

/// Builds u, the polynomial representation and (ℝZ ⊕ u) ⋉ V, degenerates it with
/// the lemma-0 family, and searches the perturbation grid for Ric < 0 on the limit.
pub fn certify_pipeline(family: Family, m: usize, n: u32, opts: &PipelineOptions) -> Result<RicciCertificate> {
    if n < 2 {
        return Err(Error::Invalid("the pipeline needs n >= 2".into()));
    }
    if opts.v1_scale <= Rat::zero() {
        return Err(Error::Invalid("V1 scale must be positive".into()));
    }
    let poly = build_poly_rep(family, m, n)?;
    let (rep, split) = (&poly.rep, &poly.split);
    let mut pipeline = vec![format!("build {family}({m}) acting on degree-{n} polynomials, dim V = {}", rep.dim_v())];
    let lemma0 = check_lemma0(rep, split)?;
    if !lemma0.passed() {
        return Err(Error::Invalid("lemma-0 hypotheses fail".into()));
    }
    let main = check_main_theorem(rep, split, &RatMatrix::identity(rep.dim_v()))?;
    if family != Family::Sl && !main.passed() {
        return Err(Error::Invalid("main theorem hypotheses fail".into()));
    }
    pipeline.push("hypotheses: lemma 0 and conditions (i)-(iii) pass".into());
    let rho = match &opts.rho {
        Some(r) => r.clone(),
        None => choose_rho(rep, split)?,
    };
    pipeline.push(format!("rho = {}", rat_string(&rho)));
    let l = central_semidirect(rep.source(), rep)?;
    let family_t = lemma0_family(&l, split, &rho)?;
    let limit = scale_bracket(&l.algebra, &family_t)?.take_limit()?;
    pipeline.push(format!("degenerate with phi_t, {} brackets dropped", limit.dropped.len()));
    let alg = limit.algebra;
    let dim = alg.dim();
    let z = l.layout.a[0];
    let (_, xs, ys) = root_layout(alg.labels());
    let nil: Vec<usize> = xs.iter().chain(&ys).chain(&l.layout.n).copied().collect();
    let v1_scale_sq = &opts.v1_scale * &opts.v1_scale;
    let grid = if opts.perturb { perturbation_grid() } else { vec![(PerturbTarget::None, Rat::one())] };
    for (grid_index, (target, factor)) in grid.into_iter().enumerate() {
        let mut g = vec![Rat::one(); dim];
        for &v in &split.v1 {
            let phase_i = v % 2 == 1;
            let hit = match target {
                PerturbTarget::None => false,
                PerturbTarget::P => !phase_i,
                PerturbTarget::Ip => phase_i,
            };
            let c = if hit { &factor * &factor } else { Rat::one() };
            g[l.layout.n[v]] = (&v1_scale_sq * c).recip();
        }
        let gram = RatMatrix::from_diag(&g);
        let ex = ricci_exact(&alg, &gram)?;
        // ⟨Ric Z, X⟩ = g_X Ric_{X,Z} must vanish on the nilradical
        if let Some(&bad) = nil.iter().find(|&&k| !ex.ricci[(k, z)].is_zero()) {
            return Err(Error::Invalid(format!("<Ric a, n> != 0 at {}", alg.labels()[bad])));
        }
        let eigenvalues = self_adjoint_eigenvalues(&ex.ricci.to_f64(), &gram.to_f64())?;
        let lambda_max = *eigenvalues.last().unwrap();
        if crate::curvature::classify(&eigenvalues, TAU_DEF) == Verdict::NegativeDefinite && lambda_max < -1e-6 {
            pipeline.push(format!("perturbation grid point {grid_index}: {target:?} x {}", rat_string(&factor)));
            pipeline.push(format!("Ric negative definite, lambda_max = {lambda_max:.6e}"));
            return Ok(RicciCertificate {
                family,
                m,
                n,
                algebra: alg,
                gram,
                ricci: ex.ricci,
                eigenvalues,
                lambda_max,
                rho,
                perturbation: Perturbation { v1_scale: opts.v1_scale.clone(), target, factor, grid_index },
                pipeline,
            });
        }
    }
    Err(Error::NotFound(format!("{family}({m}), n = {n}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub verdict: Verdict,
    pub lambda_max: f64,
    pub max_deviation: f64,
}

/// Recomputes the Ricci spectrum of (alg, gram) and compares with the stored one.
pub fn verify_certificate(alg: &LieAlgebra, gram: Gram, eigenvalues: &[f64]) -> Result<VerifyReport> {
    let rep = ricci(&MetricLieAlgebra::new(alg.clone(), gram)?)?;
    if rep.eigenvalues.len() != eigenvalues.len() {
        return Err(Error::DimensionMismatch { expected: rep.eigenvalues.len(), found: eigenvalues.len() });
    }
    let max_deviation = rep.eigenvalues.iter().zip(eigenvalues).map(|(a, b)| (a - b).abs() / a.abs().max(1.0)).fold(0.0, f64::max);
    let ok = rep.verdict == Verdict::NegativeDefinite && max_deviation <= 1e-9;
    Ok(VerifyReport { ok, verdict: rep.verdict, lambda_max: rep.lambda_max, max_deviation })
}

pub fn verify(cert: &RicciCertificate) -> Result<VerifyReport> {
    verify_certificate(&cert.algebra, Gram::Exact(cert.gram.clone()), &cert.eigenvalues)
}

fn complex_eigs(m: &DMatrix<f64>) -> Vec<nalgebra::Complex<f64>> {
    if m.nrows() == 0 {
        return vec![];
    }
    m.clone().complex_eigenvalues().iter().cloned().collect()
}

#[derive(Clone, Debug)]
pub struct SsncInput {
    /// Inner product on r (indices ordered as `layout.r`).
    pub gram_r: Gram,
    /// Inner product on n (indices ordered as `layout.n`).
    pub gram_n: RatMatrix,
    /// Positions within r spanning k in r = k ⊕ p.
    pub cartan_k: Option<Vec<usize>>,
    /// Candidate A₀ (coefficients on `layout.a`) for condition (3).
    pub a0: Option<Vec<Rat>>,
}

/// Conditions (1)–(4) for g = (a ⊕ r) ⋉ n; condition (3) searches only the
/// supplied candidate, the a-basis and pairwise sums (a heuristic).
pub fn check_ssnc(l: &Semidirect, input: &SsncInput) -> Result<CheckReport> {
    let alg = &l.algebra;
    let lay = &l.layout;
    let n = &lay.n;
    if input.gram_n.rows() != n.len() || !input.gram_n.is_positive_definite() {
        return Err(Error::Invalid("gram_n must be positive definite on n".into()));
    }
    if input.gram_r.dim() != lay.r.len() {
        return Err(Error::DimensionMismatch { expected: lay.r.len(), found: input.gram_r.dim() });
    }
    let k_idx = match (&input.cartan_k, lay.r.is_empty()) {
        (Some(k), _) => k.clone(),
        (None, true) => vec![],
        (None, false) => return Err(Error::Invalid("missing Cartan decomposition metadata for r".into())),
    };
    let restrict = |coeffs: &[(usize, Rat)]| {
        let mut m = RatMatrix::zeros(n.len(), n.len());
        for (i, c) in coeffs {
            m = m.add(&alg.ad_basis(*i).submatrix(n, n).scale(c));
        }
        m
    };
    let gn = &input.gram_n;
    let gn_inv = gn.inverse().ok_or(Error::Singular)?;
    let mut conditions = Vec::new();
    // (1) T* T = T T* with T* = G⁻¹ Tᵀ G
    let normal_fail = lay.a.iter().find(|&&i| {
        let t = restrict(&[(i, Rat::one())]);
        let adj = gn_inv.mul(&t.transpose()).mul(gn);
        adj.mul(&t) != t.mul(&adj)
    });
    conditions.push(Condition::new(
        "1_ad_a_normal",
        normal_fail.is_none(),
        normal_fail.map(|&i| Witness::Basis { index: i, label: alg.labels()[i].to_string() }).unwrap_or(Witness::None),
    ));
    // (2) and (3) on the complexified ad A|_n
    let mut imag_fail = None;
    for &i in &lay.a {
        let eigs = complex_eigs(&restrict(&[(i, Rat::one())]).to_f64());
        let scale = eigs.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
        if eigs.iter().all(|z| z.re.abs() <= TAU_EIG * scale) {
            imag_fail = Some(Witness::Basis { index: i, label: alg.labels()[i].to_string() });
            break;
        }
    }
    conditions.push(Condition::new("2_not_purely_imaginary", imag_fail.is_none(), imag_fail.unwrap_or(Witness::None)));
    let mut candidates: Vec<Vec<(usize, Rat)>> = Vec::new();
    if let Some(a0) = &input.a0 {
        candidates.push(lay.a.iter().copied().zip(a0.iter().cloned()).collect());
    }
    for (x, &i) in lay.a.iter().enumerate() {
        candidates.push(vec![(i, Rat::one())]);
        for &j in &lay.a[x + 1..] {
            candidates.push(vec![(i, Rat::one()), (j, Rat::one())]);
        }
    }
    let mut found = None;
    let mut best = f64::NEG_INFINITY;
    for c in &candidates {
        let eigs = complex_eigs(&restrict(c).to_f64());
        let min_re = eigs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        best = best.max(min_re);
        if min_re > TAU_EIG {
            found = Some(c.clone());
            break;
        }
    }
    let mut c3 = Condition::new(
        "3_positive_element",
        found.is_some(),
        match &found {
            Some(c) => Witness::Note {
                text: c.iter().map(|(i, q)| format!("{}*{}", rat_string(q), alg.labels()[*i])).collect::<Vec<_>>().join(" + "),
            },
            None => Witness::Eigenvalue { subject: "best minimal real part".into(), value: best },
        },
    );
    c3.heuristic = true;
    conditions.push(c3);
    // (4) Ric(r) < 0 with k ⊥ p
    if lay.r.is_empty() {
        conditions.push(Condition::new("4_r_negative_ricci", true, Witness::Note { text: "r = 0".into() }));
    } else {
        let r_alg = alg.subalgebra(&lay.r)?;
        let g = input.gram_r.to_f64();
        let p_idx: Vec<usize> = (0..lay.r.len()).filter(|i| !k_idx.contains(i)).collect();
        let orth = k_idx.iter().all(|&a| p_idx.iter().all(|&b| g[(a, b)].abs() <= 1e-12 * g.amax().max(1.0)));
        let rep = ricci(&MetricLieAlgebra::new(r_alg, input.gram_r.clone())?)?;
        let pass = orth && rep.verdict == Verdict::NegativeDefinite;
        let witness = if !orth {
            Witness::Note { text: "Cartan factors are not orthogonal".into() }
        } else {
            Witness::Eigenvalue { subject: format!("lambda_max of Ric(r), {:?}", rep.verdict), value: rep.lambda_max }
        };
        conditions.push(Condition::new("4_r_negative_ricci", pass, witness));
    }
    Ok(CheckReport { theorem: Theorem::Ssnc, conditions })
}

/// X^α positions within r for a root basis of sl(m, ℝ) (the skew part k).
pub fn sl_cartan_k(r: &LieAlgebra) -> Vec<usize> {
    root_layout(r.labels()).1
}

#[derive(Clone, Debug)]
pub struct Su2Certificate {
    pub limit: LieAlgebra,
    pub limit_gram: DMatrix<f64>,
    pub limit_lambda_max: f64,
    pub search_evaluations: usize,
    /// ψ_t parameter at which the lifted gram certifies the original algebra.
    pub t: f64,
    pub gram: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
}

#[derive(Clone, Debug)]
pub struct Su2Outcome {
    pub report: CheckReport,
    pub certificate: Option<Su2Certificate>,
}

fn su2_source(l: &Semidirect) -> Result<LieAlgebra> {
    let su2 = build_compact(Family::Su, 2)?.algebra;
    let r = l.algebra.subalgebra(&l.layout.r)?;
    if l.layout.a.len() != 1 || r.labels() != su2.labels() || r.bracket() != su2.bracket() {
        return Err(Error::Invalid("expected (RZ + su(2)) x n with the su(2) root basis".into()));
    }
    Ok(su2)
}

/// Hypotheses of the su(2) ⋉ n theorem; then ψ_t, a metric search on the limit,
/// and a lift of the found metric back along ψ_t.
pub fn check_su2_theorem(l: &Semidirect, search: &SearchOptions) -> Result<Su2Outcome> {
    let su2 = su2_source(l)?;
    let alg = &l.algebra;
    let (z, n) = (l.layout.a[0], &l.layout.n);
    let mut conditions = Vec::new();
    let nc = l.layout.r.iter().find(|&&i| !alg.bracket().bracket_basis(z, i).is_empty());
    conditions.push(Condition::new(
        "z_commutes_with_su2",
        nc.is_none(),
        nc.map(|&i| Witness::Basis { index: i, label: alg.labels()[i].to_string() }).unwrap_or(Witness::None),
    ));
    let ops: Vec<RatMatrix> = l.layout.r.iter().map(|&i| alg.ad_basis(i).submatrix(n, n)).collect();
    let labels = n.iter().map(|&i| alg.labels()[i].clone()).collect();
    let rep = Representation::new(su2, ops, labels, BasisMeta::Generic)?;
    let nontrivial = rep.operators().iter().any(|o| !o.is_zero());
    conditions.push(Condition::new("su2_acts_nontrivially", nontrivial, Witness::None));
    let blocks = casimir_decompose_su2(&rep)?;
    let zn = alg.ad_basis(z).submatrix(n, n).to_f64();
    let scale = zn.amax().max(1.0);
    let mut block_fail = None;
    for b in &blocks {
        let q = &b.basis;
        let c = (q.transpose() * &zn * q).trace() / q.ncols() as f64;
        let residual = (&zn * q - q * c).amax();
        if residual > 1e-8 * scale || c <= TAU_EIG {
            block_fail = Some(Witness::Eigenvalue { subject: format!("Z on Casimir block {:.6}", b.eigenvalue), value: c });
            break;
        }
    }
    conditions.push(Condition::new("z_positive_multiple_on_blocks", block_fail.is_none(), block_fail.unwrap_or(Witness::None)));
    if !conditions.iter().all(|c| c.pass) {
        return Ok(Su2Outcome { report: CheckReport { theorem: Theorem::Su2Nilpotent, conditions }, certificate: None });
    }
    let limit = scale_bracket(alg, &psi_family(alg.dim(), &l.layout))?.take_limit()?.algebra;
    let found = search_negative_ricci_metric(&limit, search);
    let mut certificate = None;
    match &found {
        None => conditions.push(Condition::new(
            "limit_certified",
            false,
            Witness::Note { text: format!("no metric found within {} evaluations", search.budget) },
        )),
        Some(res) => {
            conditions.push(Condition::new(
                "limit_certified",
                true,
                Witness::Eigenvalue { subject: "lambda_max on the psi limit".into(), value: res.lambda_max },
            ));
            // (ψ_t·μ, G) ≅ (μ, ⟨ψ_t·, ψ_t·⟩)
            let mut t = 1.0f64;
            for _ in 0..60 {
                let s = DVector::from_iterator(alg.dim(), (0..alg.dim()).map(|i| if n.contains(&i) { t } else { 1.0 }));
                let gram = DMatrix::from_fn(alg.dim(), alg.dim(), |i, j| res.gram[(i, j)] * s[i] * s[j]);
                let rep = ricci_f64(alg, &gram)?;
                if rep.verdict == Verdict::NegativeDefinite {
                    certificate = Some(Su2Certificate {
                        limit: limit.clone(),
                        limit_gram: res.gram.clone(),
                        limit_lambda_max: res.lambda_max,
                        search_evaluations: res.evaluations,
                        t,
                        gram,
                        eigenvalues: rep.eigenvalues,
                        lambda_max: rep.lambda_max,
                    });
                    break;
                }
                t *= 2.0;
            }
            conditions.push(Condition::new(
                "lifted_metric_certified",
                certificate.is_some(),
                match &certificate {
                    Some(c) => Witness::Eigenvalue { subject: format!("lambda_max at t = {}", c.t), value: c.lambda_max },
                    None => Witness::Note { text: "no t <= 2^59 gave Ric < 0".into() },
                },
            ));
        }
    }
    Ok(Su2Outcome { report: CheckReport { theorem: Theorem::Su2Nilpotent, conditions }, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::build_noncompact_sl;
    use crate::poly::trivial_rep;
    use crate::semidirect::{general_semidirect, h5_example, with_central_z, SemidirectSpec};

    #[test]
    fn lemma0_passes_and_fails() {
        let p = build_poly_rep(Family::Su, 3, 2).unwrap();
        assert!(check_lemma0(&p.rep, &p.split).unwrap().passed());
        let p1 = build_poly_rep(Family::Su, 2, 1).unwrap();
        let r = check_lemma0(&p1.rep, &p1.split).unwrap();
        assert!(!r.condition("x_maps_v1_into_v2").unwrap().pass);
    }

    #[test]
    fn main_theorem_conditions() {
        let p = build_poly_rep(Family::Sp, 2, 2).unwrap();
        let r = check_main_theorem(&p.rep, &p.split, &RatMatrix::identity(p.rep.dim_v())).unwrap();
        assert!(r.passed(), "{r:?}");
        let triv = trivial_rep(p.rep.source(), 4).unwrap();
        let split = SubspaceSplit::new(vec![0, 1], 4).unwrap();
        let r = check_main_theorem(&triv, &split, &RatMatrix::identity(4)).unwrap();
        assert!(!r.condition("ii_nontrivial_on_v1").unwrap().pass);
    }

    #[test]
    fn su2_w2_rho_and_certificate() {
        let p = build_poly_rep(Family::Su, 2, 2).unwrap();
        let rho = choose_rho(&p.rep, &p.split).unwrap();
        assert!(rho > Rat::zero() && rho <= Rat::one());
        let cert = certify_compact_pipeline(Family::Su, 2, 2).unwrap();
        assert!(cert.lambda_max < -1e-6);
        assert!(verify(&cert).unwrap().ok);
    }

    #[test]
    fn ssnc_on_sl2_factor() {
        // a = RZ acting as Id on n = R², r = sl(2,R) acting by its defining rep
        let (sl2, real) = build_noncompact_sl(2, false).unwrap();
        let left = with_central_z(&sl2).unwrap();
        let right = LieAlgebra::abelian(LieAlgebra::generic_labels(2)).unwrap();
        let mut action = vec![RatMatrix::identity(2)];
        action.extend(real.matrices.iter().map(|m| m.re.clone()));
        let l = general_semidirect(&SemidirectSpec { left, right, action, central: vec![0] }).unwrap();
        let k = sl_cartan_k(&sl2);
        for g in [vec![int(1), int(1), int(1)], vec![int(1), int(3), rat(1, 2)], vec![rat(1, 10), int(5), int(1)]] {
            let input = SsncInput { gram_r: Gram::Exact(RatMatrix::from_diag(&g)), gram_n: RatMatrix::identity(2), cartan_k: Some(k.clone()), a0: None };
            let r = check_ssnc(&l, &input).unwrap();
            assert!(r.condition("1_ad_a_normal").unwrap().pass);
            assert!(r.condition("3_positive_element").unwrap().pass);
            assert!(!r.condition("4_r_negative_ricci").unwrap().pass);
        }
    }

    #[test]
    fn su2_theorem_on_h5() {
        let s = h5_example().unwrap();
        let out = check_su2_theorem(&s, &SearchOptions { budget: 20_000, ..Default::default() }).unwrap();
        for c in &out.report.conditions[..3] {
            assert!(c.pass, "{c:?}");
        }
    }
}
