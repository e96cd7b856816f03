//! Randomized direct search for a gram matrix with negative definite Ricci operator.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::lie::LieAlgebra;
use crate::rational::to_f64;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: usize,
    pub seed: u64,
    /// Required λ_max after rescaling the gram so that max |λ| = 1.
    pub threshold: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 100_000, seed: 0, threshold: 1e-6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchPhase {
    Diagonal,
    Full,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub gram: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    pub evaluations: usize,
    pub restart: usize,
    pub phase: SearchPhase,
}

struct Evaluator {
    n: usize,
    ads: Vec<DMatrix<f64>>,
    killing: DMatrix<f64>,
    traces: Vec<f64>,
}

impl Evaluator {
    fn new(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let ads: Vec<DMatrix<f64>> = (0..n).map(|i| alg.ad_basis(i).to_f64()).collect();
        let killing = alg.killing_form().to_f64();
        let traces = alg.trace_form().iter().map(to_f64).collect();
        Evaluator { n, ads, killing, traces }
    }

    /// Ricci eigenvalues (ascending) for gram = L Lᵀ.
    fn eigenvalues(&self, l: &DMatrix<f64>) -> Option<Vec<f64>> {
        let n = self.n;
        let l_inv = l.clone().solve_lower_triangular(&DMatrix::identity(n, n))?;
        // orthonormal frame f_j = Σ_i P_ij e_i with P = L⁻ᵀ
        let p = l_inv.transpose();
        let lt = l.transpose();
        let mut f_ads = Vec::with_capacity(n);
        for j in 0..n {
            let mut a = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                let c = p[(i, j)];
                if c != 0.0 {
                    a += &self.ads[i] * c;
                }
            }
            f_ads.push(&lt * a * &p);
        }
        let mut ric = p.transpose() * &self.killing * &p * -0.5;
        let mut ad_h = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let a = &f_ads[j];
            ric -= a.transpose() * a * 0.5;
            ric += a * a.transpose() * 0.25;
            let h: f64 = (0..n).map(|i| p[(i, j)] * self.traces[i]).sum();
            if h != 0.0 {
                ad_h += a * h;
            }
        }
        ric -= (&ad_h + ad_h.transpose()) * 0.5;
        let sym = (&ric + ric.transpose()) * 0.5;
        let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().cloned().collect();
        if ev.iter().any(|x| !x.is_finite()) {
            return None;
        }
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(ev)
    }
}

/// λ_max / max |λ|; +∞ for a flat or broken evaluation.
fn normalized(ev: &[f64]) -> f64 {
    let scale = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return f64::INFINITY;
    }
    ev.last().unwrap() / scale
}

fn l_from_diag(s: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(s.len(), s.iter().map(|x| (x / 2.0).exp())))
}

/// Lower-triangular L with exp on the diagonal, packed row by row.
fn l_from_packed(n: usize, x: &[f64]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..=i {
            l[(i, j)] = if i == j { (x[k] / 2.0).exp() } else { x[k] };
            k += 1;
        }
    }
    l
}

fn unit_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let d: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return d.into_iter().map(|x| x / norm).collect();
        }
    }
}

struct Run<'a> {
    eval: &'a Evaluator,
    opts: &'a SearchOptions,
    used: usize,
}

enum Outcome {
    Found(DMatrix<f64>, Vec<f64>),
    Stalled(Vec<f64>),
    Exhausted,
}

impl Run<'_> {
    fn evaluate(&mut self, l: &DMatrix<f64>) -> Option<Vec<f64>> {
        self.used += 1;
        self.eval.eigenvalues(l)
    }

    fn accept(&self, ev: &[f64]) -> bool {
        normalized(ev) < -self.opts.threshold
    }

    /// Step-adaptive random direction search from x; `to_l` maps parameters to L.
    fn descend(&mut self, mut x: Vec<f64>, rng: &mut ChaCha8Rng, to_l: &dyn Fn(&[f64]) -> DMatrix<f64>) -> Outcome {
        if self.used >= self.opts.budget {
            return Outcome::Exhausted;
        }
        let l = to_l(&x);
        let Some(ev) = self.evaluate(&l) else { return Outcome::Stalled(x) };
        if self.accept(&ev) {
            return Outcome::Found(l, ev);
        }
        let mut f = normalized(&ev);
        let mut step = 1.0;
        while step > 1e-3 {
            if self.used >= self.opts.budget {
                return Outcome::Exhausted;
            }
            let d = unit_direction(rng, x.len());
            let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let l = to_l(&y);
            match self.evaluate(&l) {
                Some(ev) if self.accept(&ev) => return Outcome::Found(l, ev),
                Some(ev) if normalized(&ev) < f => {
                    f = normalized(&ev);
                    x = y;
                    step *= 1.3;
                }
                _ => step *= 0.9,
            }
        }
        Outcome::Stalled(x)
    }
}

/// Multi-start search: each restart descends over diagonal grams (log-scale), then
/// over full Cholesky factors from the diagonal optimum. Restart 0 starts at the
/// identity, later ones at N(0, 1.5²) log-diagonals. Deterministic for a seed.
pub fn search_negative_ricci_metric(alg: &LieAlgebra, opts: &SearchOptions) -> Option<SearchResult> {
    let n = alg.dim();
    if n == 0 {
        return None;
    }
    let eval = Evaluator::new(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut run = Run { eval: &eval, opts, used: 0 };
    let diag = |x: &[f64]| l_from_diag(x);
    let full = |x: &[f64]| l_from_packed(n, x);
    let finish = |l: DMatrix<f64>, ev: Vec<f64>, used: usize, restart: usize, phase: SearchPhase| {
        let scale = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // Ric(cG) = Ric(G)/c: rescale so that max |λ| = 1
        let gram = &l * l.transpose() * scale;
        let eigenvalues: Vec<f64> = ev.iter().map(|x| x / scale).collect();
        let lambda_max = *eigenvalues.last().unwrap();
        SearchResult { gram, eigenvalues, lambda_max, evaluations: used, restart, phase }
    };
    for restart in 0.. {
        let start: Vec<f64> =
            if restart == 0 { vec![0.0; n] } else { (0..n).map(|_| 1.5 * rng.sample::<f64, _>(StandardNormal)).collect() };
        let x = match run.descend(start, &mut rng, &diag) {
            Outcome::Found(l, ev) => return Some(finish(l, ev, run.used, restart, SearchPhase::Diagonal)),
            Outcome::Exhausted => return None,
            Outcome::Stalled(x) => x,
        };
        let mut packed = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                packed.push(if i == j { x[i] } else { 0.0 });
            }
        }
        match run.descend(packed, &mut rng, &full) {
            Outcome::Found(l, ev) => return Some(finish(l, ev, run.used, restart, SearchPhase::Full)),
            Outcome::Exhausted => return None,
            Outcome::Stalled(..) => {}
        }
    }
    unreachable!()
}
