use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ks_cli::acceptance::AcceptanceConfig;
use ks_cli::doc::{
    int_matrix, matrix_strings, read_json, strings, CliffordDoc, LatticeDoc, PeriodDoc, SetupDoc, TorusDoc,
};
use ks_cli::pipeline::{BoundDoc, PicardDoc, PipelineConfig, PipelineInput};
use ks_cli::selftest::{selftest, Fixtures};
use ks_cli::StageError;
use ks_core::clifford::{guard_rank_from_env, CliffordContext};
use ks_core::correspondence::{picard_from_period, picard_full};
use ks_core::effective::{fujino_separation_check, neat_congruence_level, Separation};
use ks_core::galois::{bad_prime_bound, good_prime_sieve, h1, DEFAULT_CLOSURE_BOUND};
use ks_core::kuga_satake::{kuga_satake_torus, torus_metadata};
use ks_core::lattice::k3_period_lattice;
use ks_core::scalar::{format_rational, parse_rational};
use ks_core::{Error, ErrorKind, SubLattice};
use num_bigint::BigInt;
use serde_json::{json, Value};

/// Kuga-Satake tori, Picard lattices from periods, and Brauer group
/// bookkeeping for finite Galois modules. Numbers in every JSON document
/// are strings ("p" or "p/q") or plain integers.
///
/// Exit status: 0 ok, 1 invalid input, 2 size guard exceeded, 3 invariant
/// violation (or a failed selftest).
#[derive(Parser)]
#[command(name = "ks", version)]
struct Cli {
    /// Worker threads for per-prime fan-out (default: all cores).
    #[arg(long, global = true, env = "KS_THREADS")]
    threads: Option<usize>,

    /// Largest rank for which dense 2^(n-1) matrices are built.
    #[arg(long, global = true, env = "KS_GUARD_RANK")]
    guard: Option<usize>,

    /// Maximum size of a Galois group closure.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_BOUND)]
    closure_bound: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, signature and parity of a lattice; optionally the
    /// orthogonal complement of a sublattice.
    Lattice {
        /// {"rank": n, "gram": [[...]]}
        #[arg(long)]
        lattice: PathBuf,
        /// JSON array of basis rows of a sublattice.
        #[arg(long)]
        sub: Option<PathBuf>,
    },
    /// Product of two even Clifford elements.
    Clifford {
        #[command(subcommand)]
        op: CliffordOp,
    },
    /// Kuga-Satake torus of a period.
    Ks {
        #[command(subcommand)]
        op: KsOp,
    },
    /// Picard lattice recovered from a period.
    Picard {
        #[arg(long)]
        period: PathBuf,
        /// Report the lattice inside the rank-22 K3 lattice, with the
        /// period given on an orthogonal basis of h-perp.
        #[arg(long, requires = "degree")]
        full: bool,
        /// Polarization h = e + d f with Q(h) = -2d.
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Galois-module side: sieve, bad-prime bound, first cohomology.
    Brauer {
        #[command(subcommand)]
        op: BrauerOp,
    },
    /// Certified neat congruence level for GL_n(Z).
    Neat {
        #[arg(long)]
        n: u32,
    },
    /// Separation criterion sum_k 2^(1/k) k / c(k) <= 1.
    Fujino {
        #[arg(long)]
        dim: usize,
        /// Comma-separated positive rationals c(1), ..., c(dim).
        #[arg(long, value_delimiter = ',')]
        c: Vec<String>,
    },
    /// Period, torus, Picard lattice, sieve and bounds in one report.
    Pipeline {
        /// {"period": {...}, "setup": {...}}
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        galois: GaloisFlags,
        /// Largest exponent n in the bound tables.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        /// Tolerance for float periods, overriding the document.
        #[arg(long)]
        tolerance: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixture checks and the acceptance criteria.
    Selftest {
        /// Skip the acceptance criteria.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum CliffordOp {
    Multiply {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum KsOp {
    Build {
        #[arg(long)]
        period: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GaloisFlags {
    /// Annihilation constant; its prime divisors are excluded.
    #[arg(long, default_value = "1")]
    mw: String,
    /// Extra primes to exclude, comma-separated.
    #[arg(long, value_delimiter = ',')]
    exclude: Vec<String>,
    /// Check good primes up to this value.
    #[arg(long, default_value_t = 30)]
    check_limit: u64,
}

#[derive(Subcommand)]
enum BrauerOp {
    Sieve {
        #[arg(long)]
        setup: PathBuf,
        #[command(flatten)]
        galois: GaloisFlags,
    },
    Bound {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    H1 {
        #[arg(long)]
        setup: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Stage(StageError),
    Selftest(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        let kind = match self {
            Failure::Core(e) => e.kind(),
            Failure::Stage(e) => e.kind(),
            Failure::Selftest(_) => ErrorKind::Invariant,
        };
        match kind {
            ErrorKind::Validation => 1,
            ErrorKind::Guard => 2,
            ErrorKind::Invariant => 3,
        }
    }
}

fn emit(v: &impl serde::Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(e.to_string()))?;
    s.push('\n');
    match out {
        Some(p) => std::fs::write(p, s).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?,
        None => print!("{s}"),
    }
    Ok(())
}

fn integers(v: &[String]) -> Result<Vec<BigInt>, Failure> {
    v.iter()
        .map(|s| s.trim().parse::<BigInt>().map_err(|e| Failure::Core(Error::Invalid(format!("{s:?}: {e}")))))
        .collect()
}

fn setup_of(path: &Path, closure_bound: usize) -> Result<ks_core::galois::BrauerSetup, Failure> {
    Ok(read_json::<SetupDoc>(path)?.setup(closure_bound)?)
}

fn lattice_cmd(lattice: &Path, sub: Option<&Path>) -> Result<Value, Failure> {
    let l = Arc::new(read_json::<LatticeDoc>(lattice)?.lattice()?);
    let (pos, neg) = l.signature()?;
    let even = (0..l.rank()).all(|i| l.gram()[(i, i)].clone() % 2 == BigInt::from(0));
    let mut v = json!({
        "rank": l.rank(),
        "discriminant": l.discriminant()?.to_string(),
        "signature": [pos, neg],
        "unimodular": l.is_unimodular(),
        "even": even,
    });
    if let Some(p) = sub {
        let rows: Vec<Vec<ks_cli::doc::Num>> = read_json(p)?;
        let s = SubLattice::new(l.clone(), int_matrix(&rows, l.rank())?)?;
        let c = s.orthogonal_complement()?;
        v["complement"] = json!({ "basis": matrix_strings(c.basis()), "gram": matrix_strings(&c.gram()) });
    }
    Ok(v)
}

fn picard_cmd(period: &Path, full: bool, degree: Option<u64>, guard: usize) -> Result<Value, Failure> {
    let doc: PeriodDoc = read_json(period)?;
    if !full {
        let p = doc.period(guard)?;
        let q = doc.q.iter().map(|n| n.integer()).collect::<ks_core::Result<Vec<_>>>()?;
        return Ok(serde_json::to_value(PicardDoc::new(&picard_from_period(&p)?, &q)?).expect("serializable"));
    }
    let d = degree.ok_or_else(|| Error::Invalid("--full needs --degree".into()))?;
    let k3 = k3_period_lattice(d)?;
    let ctx = CliffordContext::from_lattice(Arc::new(k3.p.as_lattice()?))?.with_guard(guard);
    let p = doc.period_in(&ctx)?;
    let full = picard_full(&k3.h_lattice, &k3.h, &k3.p, &p)?;
    let l = &full.lattice;
    Ok(json!({
        "rank": l.rank(),
        "generators": matrix_strings(l.basis()),
        "gram": matrix_strings(&l.gram()),
        "discriminant": l.discriminant()?.to_string(),
        "verified": full.verified,
    }))
}

fn brauer_cmd(op: &BrauerOp, closure_bound: usize) -> Result<Value, Failure> {
    match op {
        BrauerOp::Sieve { setup, galois } => {
            let s = setup_of(setup, closure_bound)?;
            let mw = galois.mw.trim().parse::<BigInt>().map_err(|e| Error::Invalid(format!("--mw: {e}")))?;
            let r = good_prime_sieve(&s, &integers(&galois.exclude)?, &mw, galois.check_limit)?;
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "prime": c.prime,
                        "t_invariant_order": c.t_invariant_order.to_string(),
                        "brauer_invariant_order": c.brauer_invariant_order.to_string(),
                        "vanishes": c.vanishes,
                    })
                })
                .collect();
            Ok(
                json!({ "delta": s.delta().to_string(), "excluded": strings(&r.excluded), "l0": r.l0.to_string(), "checks": checks }),
            )
        }
        BrauerOp::Bound { setup, prime, n_max } => {
            let s = setup_of(setup, closure_bound)?;
            Ok(serde_json::to_value(BoundDoc::from(&bad_prime_bound(&s, *prime, *n_max)?)).expect("serializable"))
        }
        BrauerOp::H1 { setup } => {
            let m = read_json::<SetupDoc>(setup)?.module(closure_bound)?;
            let g = h1(&m)?;
            Ok(
                json!({ "group_order": m.group_order(), "invariant_factors": strings(g.invariant_factors()), "order": g.order().to_string() }),
            )
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let guard = cli.guard.unwrap_or_else(guard_rank_from_env);
    match cli.command {
        Command::Lattice { lattice, sub } => emit(&lattice_cmd(&lattice, sub.as_deref())?, None),
        Command::Clifford { op: CliffordOp::Multiply { a, b, out } } => {
            let da: CliffordDoc = read_json(&a)?;
            let db: CliffordDoc = read_json(&b)?;
            let ctx = da.context(guard)?;
            if db.context(guard)?.q() != ctx.q() {
                return Err(Error::ContextMismatch.into());
            }
            let prod = da.element(&ctx)?.multiply(&db.element(&ctx)?)?;
            emit(&CliffordDoc::from_element(&prod), out.as_deref())
        }
        Command::Ks { op: KsOp::Build { period, out } } => {
            let p = read_json::<PeriodDoc>(&period)?.period(guard)?;
            if p.context().check_dense().is_err() {
                let m = torus_metadata(&p)?;
                let v = json!({ "rank": m.rank, "real_dim": m.real_dim.to_string(), "complex_dim": m.complex_dim.to_string(), "dense": false });
                return emit(&v, out.as_deref());
            }
            emit(&TorusDoc::new(&kuga_satake_torus(&p)?)?, out.as_deref())
        }
        Command::Picard { period, full, degree } => emit(&picard_cmd(&period, full, degree, guard)?, None),
        Command::Brauer { op } => emit(&brauer_cmd(&op, cli.closure_bound)?, None),
        Command::Neat { n } => {
            let c = neat_congruence_level(n)?;
            let v = json!({
                "n": c.n,
                "prime": c.prime.to_string(),
                "factorial": c.factorial.to_string(),
                "primality": format!("{:?}", c.primality).to_lowercase(),
            });
            emit(&v, None)
        }
        Command::Fujino { dim, c } => {
            let cs = c.iter().map(|s| parse_rational(s.trim())).collect::<ks_core::Result<Vec<_>>>()?;
            let r = fujino_separation_check(dim, &cs)?;
            let outcome = match r.outcome {
                Separation::Holds => "holds",
                Separation::Fails => "fails",
                Separation::Indeterminate => "indeterminate",
            };
            let v = json!({
                "outcome": outcome,
                "lower": format_rational(&r.lower),
                "upper": format_rational(&r.upper),
                "precision": r.precision,
            });
            emit(&v, None)
        }
        Command::Pipeline { input, galois, n_max, tolerance, out } => {
            let doc: PipelineInput = read_json(&input)?;
            let cfg = PipelineConfig {
                guard,
                closure_bound: cli.closure_bound,
                tolerance: tolerance.as_deref().map(parse_rational).transpose()?,
                mw: galois.mw.trim().parse::<BigInt>().map_err(|e| Error::Invalid(format!("--mw: {e}")))?,
                exclusions: integers(&galois.exclude)?,
                check_limit: galois.check_limit,
                n_max,
            };
            let report = ks_cli::run_pipeline(&cfg, &doc).map_err(Failure::Stage)?;
            let text = report.render();
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Selftest { quick } => {
            let acc = AcceptanceConfig::from_env();
            let s = selftest(&Fixtures::default(), if quick { None } else { Some(&acc) });
            for c in &s.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("unverified warnings: {}", s.unverified_warnings);
            let failed = s.failures().count();
            if failed > 0 {
                return Err(Failure::Selftest(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Stage(e) => eprintln!("error: {e}"),
                Failure::Selftest(n) => eprintln!("error: {n} selftest checks failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
