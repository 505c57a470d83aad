//! Command-line front end.

use crate::construct::{catalog, embed, glue, rif_from_transfer};
use crate::contact::{
    branch_bijection_check, contact_order_at, default_probes, has_vertical_component, lp_threshold, ContactReport,
    LocalGrid, LocalKind,
};
use crate::error::{Result, RifError};
use crate::intersect::{bezout_tally, co_vs_im_bound, contact_sum_identity, intersection_multiplicity, MultiplicityReport};
use crate::levelcurves::{blaschke_identity_check, portrait, portrait_levels, trace_level};
use crate::poly2::BiPoly;
use crate::rif::{singularities, Rif, SingularPoint, DEFAULT_SAMPLES};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_PROBES: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5EED;

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rifscope", version, about = "Analyze rational inner functions on the bidisk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singularities, contact orders, multiplicities and identity checks.
    Analyze {
        #[command(flatten)]
        rif: RifArg,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_PROBES)]
        probes: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Level-curve portrait as CSV, or JSON when the output ends in `.json`.
    Portrait {
        #[command(flatten)]
        rif: RifArg,
        #[arg(long)]
        levels: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a RIF from a symmetric polynomial, a RIF, or a transfer pair.
    Construct {
        #[command(subcommand)]
        how: ConstructCommand,
    },
    /// Run invariant suites; exits 3 on a violation.
    Verify {
        #[command(flatten)]
        rif: RifArg,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// RIF whose value curve is the zero set of a symmetric `r`.
    Embed {
        r: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// RIF whose value curve is the union of two level curves of `rif`.
    Glue {
        #[command(flatten)]
        rif: RifArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// RIF from a self-adjoint `A` and a diagonal projection `Y`.
    Transfer {
        a: PathBuf,
        y: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RifArg {
    /// RIF JSON file.
    #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
    path: Option<PathBuf>,
    /// Catalog fixture name.
    #[arg(long)]
    fixture: Option<String>,
}

impl RifArg {
    fn load(&self) -> Result<(String, Rif)> {
        match (&self.fixture, &self.path) {
            (Some(name), _) => Ok((name.clone(), catalog(name)?)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                Ok((id, Rif::from_json(&text, DEFAULT_SAMPLES)?))
            }
            (None, None) => Err(RifError::InvalidInput("a RIF file or --fixture is required".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Eco,
    Bezout,
    SumIdentity,
    Bijection,
    All,
}

/// Parameters recorded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub grid: usize,
    pub probes: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl IdentityCheck {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        IdentityCheck {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub rif_id: String,
    pub settings: Settings,
    pub singular_points: Vec<SingularPoint>,
    pub contact: Vec<ContactReport>,
    pub global_k: Option<u32>,
    /// `None` stands for infinity.
    pub p_star: Option<f64>,
    pub bezout: MultiplicityReport,
    pub identity_checks: Vec<IdentityCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rif_id: String,
    pub seed: u64,
    pub checks: Vec<IdentityCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Exit code for an error.
pub fn exit_code(e: &RifError) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else if matches!(e, RifError::IdentityViolation(_) | RifError::EcoViolation { .. }) {
        EXIT_INVARIANT
    } else {
        EXIT_NUMERICAL
    }
}

/// Full analysis of `f`.
pub fn analyze(rif_id: &str, f: &Rif, settings: &Settings) -> Result<AnalysisReport> {
    let grid = LocalGrid::default();
    let mut sing = singularities(f)?;
    let mut contact = Vec::with_capacity(sing.len());
    for sp in &mut sing {
        let probes = default_probes(settings.probes, &[sp.lambda0]);
        let report = contact_order_at(f, sp, &probes, &grid)?;
        sp.contact_order = Some(report.k_tau);
        sp.branch_orders = Some(report.per_branch.clone());
        sp.multiplicity = Some(intersection_multiplicity(f.p(), f.ptilde(), sp.tau(), settings.seed)? as u32);
        contact.push(report);
    }
    let global_k = sing.iter().filter_map(|s| s.contact_order).max();
    let p_star = lp_threshold(global_k).p_star;
    let bezout = bezout_tally(f, settings.seed)?;

    let mut checks = Vec::new();
    checks.push(IdentityCheck::new(
        "bezout",
        bezout.total == bezout.bezout_expected,
        format!("total {} expected {}", bezout.total, bezout.bezout_expected),
    ));
    checks.push(IdentityCheck::new(
        "eco",
        contact.iter().all(|c| c.k1 == c.k2),
        contact
            .iter()
            .map(|c| format!("K1 {} K2 {}", c.k1, c.k2))
            .collect::<Vec<_>>()
            .join("; "),
    ));
    checks.push(IdentityCheck::new(
        "contact-vs-order-of-contact",
        contact.iter().all(|c| c.cross_check && c.implicated <= 1),
        contact
            .iter()
            .map(|c| format!("K {} majority {:?} implicated {}", c.k_tau, c.majority, c.implicated))
            .collect::<Vec<_>>()
            .join("; "),
    ));
    let mut bound_ok = true;
    let mut bound_detail = Vec::new();
    for sp in &sing {
        let b = co_vs_im_bound(f, sp.tau(), &grid, settings.seed)?;
        bound_ok &= b.holds;
        bound_detail.push(format!("N {} bound {}", b.n, b.bound));
    }
    checks.push(IdentityCheck::new("multiplicity-bound", bound_ok, bound_detail.join("; ")));

    let mut worst_blaschke: f64 = 0.0;
    for k in 0..settings.probes.max(1) {
        let z2 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / settings.probes.max(1) as f64);
        worst_blaschke = worst_blaschke.max(blaschke_identity_check(f, z2, 100)?);
    }
    checks.push(IdentityCheck::new(
        "blaschke-derivative",
        worst_blaschke <= 1e-9,
        format!("max deviation {worst_blaschke:.3e}"),
    ));

    let mut worst_modulus: f64 = 0.0;
    let mut worst_backward: f64 = 0.0;
    for &lambda in &default_probes(settings.probes, &[]) {
        let c = trace_level(f, lambda, settings.grid, &sing)?;
        worst_modulus = worst_modulus.max(c.max_modulus_defect());
        worst_backward = worst_backward.max(c.max_backward_error(f));
    }
    checks.push(IdentityCheck::new(
        "level-roots-unimodular",
        worst_modulus <= 1e-8,
        format!("max ||z1|-1| {worst_modulus:.3e}"),
    ));
    checks.push(IdentityCheck::new(
        "level-residual",
        worst_backward <= 1e-12,
        format!("max backward error {worst_backward:.3e}"),
    ));

    Ok(AnalysisReport {
        rif_id: rif_id.to_string(),
        settings: settings.clone(),
        singular_points: sing,
        contact,
        global_k,
        p_star,
        bezout,
        identity_checks: checks,
    })
}

/// Pairs of generic level values used by the pairwise suites.
fn probe_pairs(f: &Rif, sp: &SingularPoint, count: usize) -> Vec<(Complex64, Complex64)> {
    let probes: Vec<Complex64> = default_probes(8, &[sp.lambda0])
        .into_iter()
        .filter(|&l| !has_vertical_component(f, LocalKind::Level { lambda: l }, sp.tau[1]))
        .collect();
    probes
        .chunks(2)
        .filter(|c| c.len() == 2)
        .map(|c| (c[0], c[1]))
        .take(count)
        .collect()
}

fn eco_checks(f: &Rif, sing: &[SingularPoint], grid: &LocalGrid) -> Vec<IdentityCheck> {
    sing.iter()
        .map(|sp| {
            let name = "eco";
            let probes = default_probes(DEFAULT_PROBES, &[sp.lambda0]);
            match contact_order_at(f, sp, &probes, grid) {
                Ok(r) => IdentityCheck::new(
                    name,
                    r.k1 == r.k2,
                    format!("tau {} K1 {} K2 {}", fmt_tau(sp), r.k1, r.k2),
                ),
                Err(e) => IdentityCheck::new(name, false, format!("tau {}: {e}", fmt_tau(sp))),
            }
        })
        .collect()
}

fn bezout_checks(f: &Rif, seed: u64) -> Vec<IdentityCheck> {
    vec![match bezout_tally(f, seed) {
        Ok(r) => IdentityCheck::new(
            "bezout",
            r.total == r.bezout_expected,
            format!(
                "torus {} off-torus {} infinity {} total {} expected {}",
                r.torus_total(),
                r.off_torus_total(),
                r.at_infinity,
                r.total,
                r.bezout_expected
            ),
        ),
        Err(e) => IdentityCheck::new("bezout", false, e.to_string()),
    }]
}

fn sum_identity_checks(f: &Rif, sing: &[SingularPoint], grid: &LocalGrid, seed: u64) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for sp in sing {
        for (mu, nu) in probe_pairs(f, sp, 2) {
            out.push(match contact_sum_identity(f, sp.tau(), mu, nu, grid, seed) {
                Ok(r) => IdentityCheck::new(
                    "sum-identity",
                    r.holds,
                    format!(
                        "tau {} mu {} nu {} N {} sum kappa {}",
                        fmt_tau(sp),
                        fmt_c(mu),
                        fmt_c(nu),
                        r.n,
                        r.sum_kappa
                    ),
                ),
                Err(e) => IdentityCheck::new("sum-identity", false, format!("tau {}: {e}", fmt_tau(sp))),
            });
        }
    }
    out
}

fn bijection_checks(f: &Rif, sing: &[SingularPoint], grid: &LocalGrid) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for sp in sing {
        for (mu, nu) in probe_pairs(f, sp, 1) {
            out.push(match branch_bijection_check(f, sp.tau(), mu, nu, grid) {
                Ok(r) => IdentityCheck::new(
                    "bijection",
                    r.holds,
                    format!(
                        "tau {} L0 {} L_lambda {} L_mu {}",
                        fmt_tau(sp),
                        r.zero_orders.len(),
                        r.lambda_branches,
                        r.mu_branches
                    ),
                ),
                Err(e) => IdentityCheck::new("bijection", false, format!("tau {}: {e}", fmt_tau(sp))),
            });
        }
    }
    out
}

/// The level among `candidates` whose contact with the others disagrees
/// with the contact order, if one is singled out.
pub fn exceptional_level(f: &Rif, sing: &[SingularPoint], candidates: &[Complex64]) -> Result<Option<Complex64>> {
    let grid = LocalGrid::default();
    for sp in sing {
        let probes: Vec<Complex64> = candidates
            .iter()
            .copied()
            .filter(|l| sing.iter().all(|s| (l - s.lambda0).norm() > 1e-9))
            .collect();
        if probes.len() < 3 {
            continue;
        }
        if let Some(l) = contact_order_at(f, sp, &probes, &grid)?.exceptional_candidate {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

fn fmt_c(z: Complex64) -> String {
    let r = |x: f64| (x * 1e6).round() / 1e6 + 0.0;
    format!("{:.6}{:+.6}i", r(z.re), r(z.im))
}

fn fmt_tau(sp: &SingularPoint) -> String {
    format!("({}, {})", fmt_c(sp.tau[0]), fmt_c(sp.tau[1]))
}

fn verify(rif_id: &str, f: &Rif, suite: Suite, seed: u64) -> Result<VerifyReport> {
    let grid = LocalGrid::default();
    let sing = singularities(f)?;
    let mut checks = Vec::new();
    if matches!(suite, Suite::Eco | Suite::All) {
        checks.extend(eco_checks(f, &sing, &grid));
    }
    if matches!(suite, Suite::Bezout | Suite::All) {
        checks.extend(bezout_checks(f, seed));
    }
    if matches!(suite, Suite::SumIdentity | Suite::All) {
        checks.extend(sum_identity_checks(f, &sing, &grid, seed));
    }
    if matches!(suite, Suite::Bijection | Suite::All) {
        checks.extend(bijection_checks(f, &sing, &grid));
    }
    Ok(VerifyReport {
        rif_id: rif_id.to_string(),
        seed,
        checks,
    })
}

/// A matrix entry given either as a real number or as `[re, im]`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

fn read_matrix(path: &Path) -> Result<Vec<Vec<Complex64>>> {
    let rows: Vec<Vec<Entry>> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    Ok(rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    Entry::Real(x) => Complex64::new(x, 0.0),
                    Entry::Complex([re, im]) => Complex64::new(re, im),
                })
                .collect()
        })
        .collect())
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            let written = out
                .write_all(text.trim_end().as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .and_then(|_| out.flush());
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn configure_threads() {
    if let Some(n) = std::env::var("RIFSCOPE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze {
            rif,
            grid,
            probes,
            seed,
            output,
        } => {
            let (id, f) = rif.load()?;
            if grid < 64 {
                return Err(RifError::InvalidInput("grid must be at least 64".into()));
            }
            let report = analyze(&id, &f, &Settings { grid, probes, seed })?;
            emit(&to_json(&report)?, output.as_deref())?;
            Ok(0)
        }
        Command::Portrait {
            rif,
            levels,
            grid,
            output,
        } => {
            let (id, f) = rif.load()?;
            let sing = singularities(&f)?;
            let lambdas = portrait_levels(levels, &sing);
            let exceptional = exceptional_level(&f, &sing, &lambdas)?;
            let p = portrait(&id, &f, &sing, &lambdas, grid, exceptional)?;
            let json = output
                .as_deref()
                .and_then(Path::extension)
                .is_some_and(|e| e.eq_ignore_ascii_case("json"));
            let text = if json { to_json(&p)? } else { p.to_csv() };
            emit(&text, output.as_deref())?;
            Ok(0)
        }
        Command::Construct { how } => {
            let (f, output) = match how {
                ConstructCommand::Embed { r, output } => {
                    let poly: BiPoly = serde_json::from_str(&std::fs::read_to_string(&r)?)?;
                    (embed(&poly)?, output)
                }
                ConstructCommand::Glue { rif, output } => (glue(&rif.load()?.1)?, output),
                ConstructCommand::Transfer { a, y, output } => {
                    (rif_from_transfer(&read_matrix(&a)?, &read_matrix(&y)?)?, output)
                }
            };
            emit(&serde_json::to_string(&f)?, output.as_deref())?;
            Ok(0)
        }
        Command::Verify {
            rif,
            suite,
            seed,
            output,
        } => {
            let (id, f) = rif.load()?;
            let report = verify(&id, &f, suite, seed)?;
            emit(&to_json(&report)?, output.as_deref())?;
            Ok(if report.passed() { 0 } else { EXIT_INVARIANT })
        }
    }
}

/// Parse `argv` and run the command. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    configure_threads();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rifscope: {e}");
            exit_code(&e)
        }
    }
}
