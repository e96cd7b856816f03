use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ricciforge_core::certify::{
    certify_pipeline, check_lemma0, check_main_theorem, check_ssnc, check_su2_theorem, sl_cartan_k, verify_certificate,
    CheckReport, PipelineOptions, SsncInput,
};
use ricciforge_core::classical::{build_compact, build_noncompact_sl, Family};
use ricciforge_core::curvature::{ricci, Gram, MetricLieAlgebra};
use ricciforge_core::degeneration::{lemma0_family, scale_bracket, ScalingFamily};
use ricciforge_core::golden::golden_checks;
use ricciforge_core::io::{self, AlgebraJson, CertificateJson, GramJson, RepJson};
use ricciforge_core::lie::LieAlgebra;
use ricciforge_core::poly::{build_poly_rep, PolyRep};
use ricciforge_core::rational::{int, Rat, RatMatrix};
use ricciforge_core::search::{search_negative_ricci_metric, SearchOptions};
use ricciforge_core::semidirect::{central_semidirect, h5_example, Semidirect};
use ricciforge_core::Error;
use serde::Serialize;
use sha2::{Digest, Sha256};

mod manifest;

use manifest::{FileHash, RunManifest};

#[derive(Parser)]
#[command(name = "ricciforge", version, about = "Lie algebras, Ricci operators and negative-Ricci certificates")]
struct Cli {
    /// Write a run manifest (parameters, input/output hashes, wall time) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Su,
    So,
    Sp,
    Sl,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Su => Family::Su,
            FamilyArg::So => Family::So,
            FamilyArg::Sp => Family::Sp,
            FamilyArg::Sl => Family::Sl,
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Clone)]
struct PolyArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Polynomial degree.
    #[arg(long)]
    n: u32,
}

/// The same flags, optional, for commands with an alternative input.
#[derive(Args, Clone)]
struct MaybePoly {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<u32>,
}

impl MaybePoly {
    fn given(&self) -> bool {
        self.family.is_some() || self.m.is_some() || self.n.is_some()
    }

    fn get(&self) -> Run<PolyArgs> {
        match (self.family, self.m, self.n) {
            (Some(family), Some(m), Some(n)) => Ok(PolyArgs { fam: FamilyArgs { family, m }, n }),
            _ => Err(Failure::Input("need all of --family, --m, --n".into())),
        }
    }

    fn family(&self) -> Run<FamilyArgs> {
        match (self.family, self.m) {
            (Some(family), Some(m)) => Ok(FamilyArgs { family, m }),
            _ => Err(Failure::Input("need --family and --m".into())),
        }
    }
}

#[derive(Args, Clone)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Lemma0,
    Main,
    Ssnc,
    Su2H5,
    Jacobi,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReproduceTarget {
    PaperExamples,
}

#[derive(Subcommand)]
enum Command {
    /// Structure constants of su/so/sp(m) or sl(m,R) in a root basis.
    Build {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Add the center (gl(m,R) for sl).
        #[arg(long)]
        center: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The representation on degree-n complex polynomials, realified.
    Rep {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// (RZ + u) x W_n, from a family or a representation file.
    Assemble {
        #[command(flatten)]
        poly: MaybePoly,
        #[arg(long)]
        rep: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Ricci operator, eigenvalues and verdict.
    Ricci {
        #[arg(long)]
        algebra: PathBuf,
        /// Identity when omitted.
        #[arg(long)]
        gram: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Limit of a diagonal scaling family.
    Degenerate {
        #[command(flatten)]
        poly: MaybePoly,
        /// ρ for the lemma-0 family, as NUM/DEN.
        #[arg(long, default_value = "1")]
        rho: String,
        #[arg(long, requires = "exponents")]
        algebra: Option<PathBuf>,
        /// Comma-separated exponents k_i of e_i -> t^{k_i} e_i.
        #[arg(long, requires = "algebra")]
        exponents: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hypotheses of a theorem; exit 1 if any condition fails.
    Check {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[command(flatten)]
        poly: MaybePoly,
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Inner product on V for the main theorem (identity when omitted).
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the certification pipeline; writes the certificate and a sibling algebra file.
    Certify {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute a certificate's Ricci spectrum independently.
    Verify {
        certificate: PathBuf,
        algebra: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild the worked examples and compare with the stored values.
    Reproduce {
        #[arg(value_enum)]
        target: ReproduceTarget,
        #[arg(long)]
        json: bool,
    },
    /// Randomized search for a Ric < 0 inner product.
    Search {
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[command(flatten)]
        fam: MaybePoly,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Build { .. } => "build",
            Command::Rep { .. } => "rep",
            Command::Assemble { .. } => "assemble",
            Command::Ricci { .. } => "ricci",
            Command::Degenerate { .. } => "degenerate",
            Command::Check { .. } => "check",
            Command::Certify { .. } => "certify",
            Command::Verify { .. } => "verify",
            Command::Reproduce { .. } => "reproduce",
            Command::Search { .. } => "search",
        }
    }
}

/// Exit 2 for bad input, 1 for a failed check or verification.
enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFound(_) | Error::Unresolved(_) => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Ctx {
    inputs: Vec<FileHash>,
    outputs: Vec<FileHash>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Run<String> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(FileHash { path: path.display().to_string(), sha256: sha256(&bytes) });
        String::from_utf8(bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn read_json<T: for<'de> serde::Deserialize<'de>>(&mut self, path: &Path) -> Run<T> {
        let s = self.read(path)?;
        io::from_json_str(&s).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn write(&mut self, path: &Path, text: &str) -> Run<()> {
        std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.outputs.push(FileHash { path: path.display().to_string(), sha256: sha256(text.as_bytes()) });
        Ok(())
    }

    /// To `--out` if given, else stdout.
    fn emit<T: Serialize>(&mut self, out: &OutArgs, v: &T) -> Run<()> {
        let text = io::to_json_string(v)?;
        match &out.out {
            Some(p) => self.write(p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn parse_rat(s: &str) -> Run<Rat> {
    let bad = || Failure::Input(format!("malformed rational '{s}'"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rat::new(n.into(), d.into()))
}

fn build_algebra(fam: &FamilyArgs, center: bool) -> Run<LieAlgebra> {
    let family: Family = fam.family.into();
    Ok(match family {
        Family::Sl => build_noncompact_sl(fam.m, center)?.0,
        _ if center => return Err(Failure::Input("--center applies to sl only".into())),
        _ => build_compact(family, fam.m)?.algebra,
    })
}

fn poly_rep(p: &PolyArgs) -> Run<PolyRep> {
    Ok(build_poly_rep(p.fam.family.into(), p.fam.m, p.n)?)
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> Run<&'a T> {
    v.as_ref().ok_or_else(|| Failure::Input(format!("missing {what}")))
}

fn print_report(r: &CheckReport, json: bool) -> Run<bool> {
    if json {
        print!("{}", io::to_json_string(r)?);
    } else {
        for c in &r.conditions {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let h = if c.heuristic { " (heuristic)" } else { "" };
            println!("{tag} {}{h}", c.name);
        }
    }
    Ok(r.passed())
}

#[derive(Serialize)]
struct DegenerateOut {
    algebra: AlgebraJson,
    dropped: Vec<io::DroppedJson>,
}

#[derive(Serialize)]
struct SearchOut {
    gram: Vec<Vec<io::F17>>,
    eigenvalues: Vec<io::F17>,
    lambda_max: io::F17,
    evaluations: usize,
    seed: u64,
}

#[derive(Serialize)]
struct GoldenOut {
    name: String,
    pass: bool,
    expected: Vec<Vec<io::JRat>>,
    computed: Vec<Vec<io::JRat>>,
}

/// Diag(...) followed by any nonzero off-diagonal entries as (i,j)=v, 0-based.
fn show_sparse(m: &RatMatrix) -> String {
    let d = m.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let mut off = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j && m[(i, j)] != int(0) {
                off.push(format!("({i},{j})={}", m[(i, j)]));
            }
        }
    }
    if off.is_empty() { format!("Diag({d})") } else { format!("Diag({d}) + [{}]", off.join(", ")) }
}

fn semidirect_for(p: &PolyArgs) -> Run<(Semidirect, PolyRep)> {
    let pr = poly_rep(p)?;
    let l = central_semidirect(pr.rep.source(), &pr.rep)?;
    Ok((l, pr))
}

fn run(cli: &Cli, ctx: &mut Ctx) -> Run<bool> {
    match &cli.command {
        Command::Build { fam, center, out } => {
            let alg = build_algebra(fam, *center)?;
            ctx.emit(out, &io::algebra_to_json(&alg)?)?;
        }
        Command::Rep { poly, out } => {
            let pr = poly_rep(poly)?;
            ctx.emit(out, &io::rep_to_json(&pr.rep, Some(&pr.split))?)?;
        }
        Command::Assemble { poly, rep, out } => {
            let l = match rep {
                Some(_) if poly.given() => return Err(Failure::Input("--rep excludes --family/--m/--n".into())),
                Some(path) => {
                    let j: RepJson = ctx.read_json(path)?;
                    let (rep, _) = io::rep_from_json(&j)?;
                    central_semidirect(rep.source(), &rep)?
                }
                None => semidirect_for(&poly.get()?)?.0,
            };
            ctx.emit(out, &io::algebra_to_json(&l.algebra)?)?;
        }
        Command::Ricci { algebra, gram, out } => {
            let alg = io::algebra_from_json(&ctx.read_json(algebra)?)?;
            let g = match gram {
                Some(p) => io::gram_from_json(&ctx.read_json::<GramJson>(p)?)?,
                None => Gram::Exact(RatMatrix::identity(alg.dim())),
            };
            let rep = ricci(&MetricLieAlgebra::new(alg, g)?)?;
            ctx.emit(out, &io::ricci_to_json(&rep))?;
        }
        Command::Degenerate { poly, rho, algebra, exponents, out } => {
            let (alg, family) = match (algebra, exponents) {
                (Some(a), Some(e)) => {
                    let alg = io::algebra_from_json(&ctx.read_json(a)?)?;
                    let ks = e
                        .split(',')
                        .map(|x| x.trim().parse::<i32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Failure::Input(format!("malformed exponents '{e}'")))?;
                    let f = ScalingFamily::new(ks.into_iter().map(|k| (k, Rat::from_integer(1.into()))).collect())?;
                    (alg, f)
                }
                _ => {
                    let (l, pr) = semidirect_for(&poly.get()?)?;
                    let f = lemma0_family(&l, &pr.split, &parse_rat(rho)?)?;
                    (l.algebra, f)
                }
            };
            let lim = scale_bracket(&alg, &family)?.take_limit()?;
            ctx.emit(out, &DegenerateOut { algebra: io::algebra_to_json(&lim.algebra)?, dropped: io::dropped_to_json(&lim.dropped) })?;
        }
        Command::Check { theorem, poly, algebra, gram, seed, budget, json } => {
            let report = match theorem {
                TheoremArg::Jacobi => {
                    let alg: AlgebraJson = ctx.read_json(need(algebra, "--algebra")?)?;
                    // a Jacobi failure is the check result here, not malformed input
                    let pass = match io::algebra_from_json(&alg) {
                        Ok(_) => true,
                        Err(Error::Jacobi { .. }) => false,
                        Err(e) => return Err(e.into()),
                    };
                    println!("{} jacobi", if pass { "PASS" } else { "FAIL" });
                    return Ok(pass);
                }
                TheoremArg::Lemma0 => {
                    let pr = poly_rep(&poly.get()?)?;
                    check_lemma0(&pr.rep, &pr.split)?
                }
                TheoremArg::Main => {
                    let pr = poly_rep(&poly.get()?)?;
                    let g = match gram {
                        Some(p) => io::rat_matrix_from_json(&ctx.read_json::<Vec<Vec<io::JRat>>>(p)?)?,
                        None => RatMatrix::identity(pr.rep.dim_v()),
                    };
                    check_main_theorem(&pr.rep, &pr.split, &g)?
                }
                TheoremArg::Ssnc => {
                    let p = &poly.get()?;
                    if !matches!(p.fam.family, FamilyArg::Sl) {
                        return Err(Failure::Input("ssnc check takes --family sl".into()));
                    }
                    let (l, _) = semidirect_for(p)?;
                    let r = l.algebra.subalgebra(&l.layout.r)?;
                    let opts = SearchOptions { budget: *budget, seed: *seed, ..Default::default() };
                    let gram_r = match search_negative_ricci_metric(&r, &opts) {
                        Some(found) => Gram::Real(found.gram),
                        None => Gram::Exact(RatMatrix::identity(r.dim())),
                    };
                    let input =
                        SsncInput { gram_r, gram_n: RatMatrix::identity(l.layout.n.len()), cartan_k: Some(sl_cartan_k(&r)), a0: None };
                    check_ssnc(&l, &input)?
                }
                TheoremArg::Su2H5 => {
                    let opts = SearchOptions { budget: *budget, seed: *seed, ..Default::default() };
                    check_su2_theorem(&h5_example()?, &opts)?.report
                }
            };
            return print_report(&report, *json);
        }
        Command::Certify { poly, rho, out } => {
            let opts = PipelineOptions { rho: rho.as_deref().map(parse_rat).transpose()?, ..Default::default() };
            let cert = certify_pipeline(poly.fam.family.into(), poly.fam.m, poly.n, &opts)?;
            ctx.write(out, &io::to_json_string(&io::certificate_to_json(&cert))?)?;
            let sibling = algebra_sibling(out);
            ctx.write(&sibling, &io::to_json_string(&io::algebra_to_json(&cert.algebra)?)?)?;
            eprintln!("lambda_max = {:.6e}; algebra written to {}", cert.lambda_max, sibling.display());
        }
        Command::Verify { certificate, algebra, json } => {
            let c: CertificateJson = ctx.read_json(certificate)?;
            let alg = io::algebra_from_json(&ctx.read_json(algebra)?)?;
            let cert = io::certificate_from_json(&c, alg)?;
            let rep = verify_certificate(&cert.algebra, Gram::Exact(cert.gram.clone()), &cert.eigenvalues)?;
            if *json {
                print!("{}", io::to_json_string(&rep)?);
            } else {
                println!("{} verdict {:?}, lambda_max {:.16e}, deviation {:.3e}", if rep.ok { "PASS" } else { "FAIL" }, rep.verdict, rep.lambda_max, rep.max_deviation);
            }
            return Ok(rep.ok);
        }
        Command::Reproduce { target: ReproduceTarget::PaperExamples, json } => {
            let checks = golden_checks()?;
            let mut all = true;
            let mut outs = Vec::new();
            for c in &checks {
                all &= c.pass();
                if *json {
                    outs.push(GoldenOut {
                        name: c.name.into(),
                        pass: c.pass(),
                        expected: io::rat_matrix_json(&c.expected),
                        computed: io::rat_matrix_json(&c.computed),
                    });
                } else {
                    let tag = if c.pass() { "PASS" } else { "FAIL" };
                    println!("{tag} {}: expected {}, computed {}", c.name, show_sparse(&c.expected), show_sparse(&c.computed));
                }
            }
            if *json {
                print!("{}", io::to_json_string(&outs)?);
            }
            return Ok(all);
        }
        Command::Search { algebra, fam, seed, budget, out } => {
            let alg = match algebra {
                Some(p) => io::algebra_from_json(&ctx.read_json(p)?)?,
                None => build_algebra(&fam.family()?, false)?,
            };
            let opts = SearchOptions { budget: *budget, seed: *seed, ..Default::default() };
            let Some(found) = search_negative_ricci_metric(&alg, &opts) else {
                eprintln!("no metric with Ric < 0 found within {budget} evaluations");
                return Ok(false);
            };
            ctx.emit(
                out,
                &SearchOut {
                    gram: io::f64_matrix_json(&found.gram),
                    eigenvalues: found.eigenvalues.iter().map(|&x| io::F17(x)).collect(),
                    lambda_max: io::F17(found.lambda_max),
                    evaluations: found.evaluations,
                    seed: *seed,
                },
            )?;
        }
    }
    Ok(true)
}

/// cert.json -> cert.algebra.json
fn algebra_sibling(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "certificate".into());
    out.with_file_name(format!("{stem}.algebra.json"))
}

fn configure_threads() {
    if let Some(n) = std::env::var("RICCIFORGE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    let mut ctx = Ctx { inputs: Vec::new(), outputs: Vec::new() };
    let result = run(&cli, &mut ctx);
    let code = match &result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    if let Some(path) = &cli.manifest {
        let m = RunManifest::new(cli.command.name(), std::env::args().skip(1).collect(), ctx.inputs, ctx.outputs, start.elapsed(), code);
        if let Err(e) = m.write(path) {
            eprintln!("error: manifest: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
