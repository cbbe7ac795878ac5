//! Period to torus to Picard lattice, then the Galois side: sieve and
//! per-prime bounds. Each step is a named stage so errors say where they
//! came from.

use std::fmt;

use ks_core::clifford::guard_rank_from_env;
use ks_core::correspondence::{picard_from_period, PicardLattice};
use ks_core::galois::DEFAULT_CLOSURE_BOUND;
use ks_core::galois::{bad_prime_bound, good_prime_sieve, small_prime, BadPrimeBound, BrauerSetup, TorsionSup};
use ks_core::intlin;
use ks_core::kuga_satake::{kuga_satake_torus, polarization_type, torus_metadata, K3Period};
use ks_core::{Error, ErrorKind, IntMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::doc::{matrix_strings, strings, Mode, PeriodDoc, SetupDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Config,
    Period,
    Torus,
    Picard,
    Setup,
    Sieve,
    Bounds,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Period => "period",
            Stage::Torus => "torus",
            Stage::Picard => "picard",
            Stage::Setup => "setup",
            Stage::Sieve => "sieve",
            Stage::Bounds => "bounds",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("stage {stage}: {source}")]
pub struct StageError {
    pub stage: Stage,
    pub source: Error,
}

impl StageError {
    pub fn kind(&self) -> ErrorKind {
        self.source.kind()
    }
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T> AtStage<T> for ks_core::Result<T> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|source| StageError { stage, source })
    }
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Largest rank for which dense `2^(n-1)` matrices are built.
    pub guard: usize,
    pub closure_bound: usize,
    /// Overrides the period document's tolerance in float mode.
    pub tolerance: Option<BigRational>,
    /// Annihilation constant; its prime divisors are excluded.
    pub mw: BigInt,
    pub exclusions: Vec<BigInt>,
    /// Good primes up to this value are checked individually.
    pub check_limit: u64,
    /// Largest exponent in the per-prime bound tables.
    pub n_max: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            guard: guard_rank_from_env(),
            closure_bound: DEFAULT_CLOSURE_BOUND,
            tolerance: None,
            mw: BigInt::one(),
            exclusions: Vec::new(),
            check_limit: 30,
            n_max: 6,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> ks_core::Result<()> {
        if self.guard < 2 {
            return Err(Error::Invalid("guard must be at least 2".into()));
        }
        if self.tolerance.as_ref().is_some_and(|t| !t.is_positive()) {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
        if self.n_max == 0 {
            return Err(Error::Invalid("n_max must be at least 1".into()));
        }
        Ok(())
    }
}

/// `{"period": {...}, "setup": {...}}`; the setup is optional.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct PipelineInput {
    pub period: PeriodDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup: Option<SetupDoc>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Warning {
    pub stage: Stage,
    pub unverified: bool,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PeriodSummary {
    pub rank: usize,
    pub mode: String,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TorusSummary {
    Dense {
        lattice_rank: usize,
        complex_dim: usize,
        alpha_sign: i8,
        verified: bool,
        polarization_type: Vec<String>,
    },
    /// Above the dense guard only dimensions are reported.
    Metadata {
        rank: usize,
        real_dim: String,
        complex_dim: String,
    },
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PicardDoc {
    pub rank: usize,
    pub generators: Vec<Vec<String>>,
    pub gram: Vec<Vec<String>>,
    pub discriminant: String,
    pub verified: bool,
    pub cross_checked: bool,
}

impl PicardDoc {
    /// Gram matrix taken with the diagonal form of the period.
    pub fn new(pic: &PicardLattice, q: &[BigInt]) -> ks_core::Result<Self> {
        let b = &pic.basis;
        let gram = IntMatrix::from_fn(b.nrows(), b.nrows(), |i, j| {
            (0..q.len()).map(|k| &q[k] * &b[(i, k)] * &b[(j, k)]).sum()
        });
        let disc = if b.nrows() == 0 { BigInt::one() } else { intlin::determinant(&gram)?.abs() };
        Ok(PicardDoc {
            rank: b.nrows(),
            generators: matrix_strings(b),
            gram: matrix_strings(&gram),
            discriminant: disc.to_string(),
            verified: pic.verified,
            cross_checked: pic.cross_checked,
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PrimeDoc {
    pub prime: u64,
    pub t_invariant_order: String,
    pub brauer_invariant_order: String,
    pub vanishes: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BoundRowDoc {
    pub n: u32,
    pub h2_invariant_order: String,
    pub pic_quotient_order: String,
    pub t_invariant_order: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BoundDoc {
    pub prime: u64,
    /// `None` when the invariants of `T` have positive rank.
    pub bound: Option<String>,
    pub exponent: Option<u32>,
    pub k_exponent: u32,
    pub rows: Vec<BoundRowDoc>,
    pub all_hold: bool,
}

impl From<&BadPrimeBound> for BoundDoc {
    fn from(b: &BadPrimeBound) -> Self {
        let (bound, exponent) = match &b.sup {
            TorsionSup::Bounded { bound, exponent } => (Some(bound.to_string()), Some(*exponent)),
            TorsionSup::Unbounded => (None, None),
        };
        let rows = b
            .rows
            .iter()
            .map(|r| BoundRowDoc {
                n: r.n,
                h2_invariant_order: r.h2_invariant_order.to_string(),
                pic_quotient_order: r.pic_quotient_order.to_string(),
                t_invariant_order: r.t_invariant_order.to_string(),
                holds: r.holds,
            })
            .collect();
        BoundDoc { prime: b.prime, bound, exponent, k_exponent: b.k_exponent, rows, all_hold: b.all_hold() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GaloisDoc {
    pub rank: usize,
    pub group_order: usize,
    pub delta: String,
    pub k_invariant_factors: Vec<String>,
    pub excluded: Vec<String>,
    pub l0: String,
    pub good_primes: Vec<PrimeDoc>,
    pub bounds: Vec<BoundDoc>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub period: PeriodSummary,
    pub torus: TorusSummary,
    pub picard: PicardDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub galois: Option<GaloisDoc>,
    pub warnings: Vec<Warning>,
    pub unverified: usize,
}

impl Report {
    /// Canonical text; identical reports give identical bytes.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn load_period(cfg: &PipelineConfig, doc: &PeriodDoc) -> ks_core::Result<K3Period> {
    match (&cfg.tolerance, doc.mode()) {
        (Some(t), Mode::Float) => {
            let mut doc = doc.clone();
            doc.tolerance = Some(ks_core::scalar::format_rational(t));
            doc.period(cfg.guard)
        }
        _ => doc.period(cfg.guard),
    }
}

fn torus_stage(p: &K3Period, warnings: &mut Vec<Warning>) -> ks_core::Result<TorusSummary> {
    if p.context().check_dense().is_err() {
        let m = torus_metadata(p)?;
        warnings.push(Warning {
            stage: Stage::Torus,
            unverified: false,
            message: format!("rank {} is above the dense guard; only dimensions are reported", m.rank),
        });
        return Ok(TorusSummary::Metadata {
            rank: m.rank,
            real_dim: m.real_dim.to_string(),
            complex_dim: m.complex_dim.to_string(),
        });
    }
    let t = kuga_satake_torus(p)?;
    if !t.verified {
        warnings.push(Warning {
            stage: Stage::Torus,
            unverified: true,
            message: "positivity of E(x, cy) was checked in floating point".into(),
        });
    }
    Ok(TorusSummary::Dense {
        lattice_rank: t.lattice_rank,
        complex_dim: t.complex_dim(),
        alpha_sign: t.alpha_sign,
        verified: t.verified,
        polarization_type: strings(&polarization_type(&t.polarization)?),
    })
}

fn galois_stage(cfg: &PipelineConfig, setup: &BrauerSetup) -> Result<GaloisDoc, StageError> {
    let sieve = good_prime_sieve(setup, &cfg.exclusions, &cfg.mw, cfg.check_limit).at(Stage::Sieve)?;
    let primes = sieve.excluded.iter().map(small_prime).collect::<ks_core::Result<Vec<_>>>().at(Stage::Bounds)?;
    let bounds = primes
        .par_iter()
        .map(|&l| bad_prime_bound(setup, l, cfg.n_max).map(|b| BoundDoc::from(&b)))
        .collect::<ks_core::Result<Vec<_>>>()
        .at(Stage::Bounds)?;
    let k = setup.k_group().at(Stage::Setup)?;
    Ok(GaloisDoc {
        rank: setup.h.rank(),
        group_order: setup.h.group_order(),
        delta: setup.delta().to_string(),
        k_invariant_factors: strings(k.invariant_factors()),
        excluded: strings(&sieve.excluded),
        l0: sieve.l0.to_string(),
        good_primes: sieve
            .checks
            .iter()
            .map(|c| PrimeDoc {
                prime: c.prime,
                t_invariant_order: c.t_invariant_order.to_string(),
                brauer_invariant_order: c.brauer_invariant_order.to_string(),
                vanishes: c.vanishes,
            })
            .collect(),
        bounds,
    })
}

pub fn run_pipeline(cfg: &PipelineConfig, input: &PipelineInput) -> Result<Report, StageError> {
    cfg.validate().at(Stage::Config)?;
    let mut warnings = Vec::new();

    let p = load_period(cfg, &input.period).at(Stage::Period)?;
    if !p.is_exact() {
        warnings.push(Warning {
            stage: Stage::Period,
            unverified: true,
            message: "period relations hold only up to the tolerance".into(),
        });
    }
    let period = PeriodSummary { rank: p.context().rank(), mode: p.mode().to_string(), exact: p.is_exact() };

    let torus = torus_stage(&p, &mut warnings).at(Stage::Torus)?;

    let pic = picard_from_period(&p).at(Stage::Picard)?;
    if !pic.verified {
        warnings.push(Warning {
            stage: Stage::Picard,
            unverified: true,
            message: "generators come from an integer relation search and are not certified".into(),
        });
    } else if !pic.cross_checked {
        warnings.push(Warning {
            stage: Stage::Picard,
            unverified: false,
            message: "commutant cross-check skipped above the dense guard".into(),
        });
    }
    let q = input.period.q.iter().map(|n| n.integer()).collect::<ks_core::Result<Vec<_>>>().at(Stage::Period)?;
    let picard = PicardDoc::new(&pic, &q).at(Stage::Picard)?;

    let galois = match &input.setup {
        None => None,
        Some(doc) => {
            let setup = doc.setup(cfg.closure_bound).at(Stage::Setup)?;
            Some(galois_stage(cfg, &setup)?)
        }
    };

    let unverified = warnings.iter().filter(|w| w.unverified).count();
    Ok(Report { period, torus, picard, galois, warnings, unverified })
}

/// Rank-3 standard period with the U(-1) swap setup.
pub fn demo_input() -> PipelineInput {
    PipelineInput { period: PeriodDoc::standard(&[-1, -1, 1]), setup: Some(SetupDoc::u_swap()) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_report() {
        let r = run_pipeline(&PipelineConfig::default(), &demo_input()).unwrap();
        assert_eq!(r.picard.generators, vec![vec!["0", "0", "1"]]);
        let g = r.galois.unwrap();
        assert_eq!(g.excluded, vec!["2"]);
        assert!(g.good_primes.iter().all(|c| c.prime >= 3 && c.vanishes));
        assert_eq!(g.bounds[0].bound.as_deref(), Some("2"));
        assert_eq!(r.unverified, 0);
    }

    #[test]
    fn guard_below_two_is_a_config_error() {
        let cfg = PipelineConfig { guard: 1, ..PipelineConfig::default() };
        let e = run_pipeline(&cfg, &demo_input()).unwrap_err();
        assert_eq!(e.stage, Stage::Config);
        assert_eq!(e.kind(), ErrorKind::Validation);
    }
}
