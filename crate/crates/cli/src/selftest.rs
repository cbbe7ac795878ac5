//! Bundled fixture checks plus, optionally, the acceptance criteria. The
//! fixtures are injectable so a corrupted one can be shown to fail.

use ks_core::{IntMatrix, QuadLattice};
use num_bigint::BigInt;
use serde::Serialize;

use crate::acceptance::{self, AcceptanceConfig};
use crate::doc::{Entry, Mode, Num, PeriodDoc};
use crate::pipeline::{demo_input, run_pipeline, PipelineConfig, PipelineInput};

#[derive(Clone, Debug)]
pub struct Fixtures {
    pub e8_gram: IntMatrix,
    pub k3: QuadLattice,
    pub float_period: PeriodDoc,
}

/// `f1 = (1.25, 0, 0.75)`, `f2 = e2` on `diag(-1, -1, 1)` written as
/// decimals, so every claim downstream is uncertified.
pub fn float_period() -> PeriodDoc {
    let dec = |s: &str| Entry::Plain(Num::Str(s.into()));
    PeriodDoc {
        q: vec![Num::Int(-1), Num::Int(-1), Num::Int(1)],
        f1: vec![dec("1.25"), dec("0"), dec("0.75")],
        f2: vec![dec("0"), dec("1"), dec("0")],
        mode: Some(Mode::Float),
        d: None,
        precision: Some(128),
        tolerance: Some("1/1000000000000".into()),
    }
}

impl Default for Fixtures {
    fn default() -> Self {
        Fixtures { e8_gram: QuadLattice::e8().gram().clone(), k3: QuadLattice::k3(), float_period: float_period() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub checks: Vec<Check>,
    pub unverified_warnings: usize,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &str, r: Result<(), String>) -> Check {
    match r {
        Ok(()) => Check { name: name.into(), passed: true, detail: "ok".into() },
        Err(detail) => Check { name: name.into(), passed: false, detail },
    }
}

fn e8_invariants(gram: &IntMatrix) -> Result<(), String> {
    let l = QuadLattice::new(gram.clone()).map_err(|e| format!("invariant violated: E8 gram rejected ({e})"))?;
    let disc = l.discriminant().map_err(|e| e.to_string())?;
    if disc != BigInt::from(1) {
        return Err(format!("invariant violated: E8 is not unimodular (discriminant {disc})"));
    }
    if (0..l.rank()).any(|i| &gram[(i, i)] % 2 != BigInt::from(0)) {
        return Err("invariant violated: E8 is not even".into());
    }
    match l.signature().map_err(|e| e.to_string())? {
        (8, 0) => Ok(()),
        s => Err(format!("invariant violated: E8 signature is {s:?}, expected (8, 0)")),
    }
}

fn k3_invariants(k3: &QuadLattice) -> Result<(), String> {
    if k3.rank() != 22 || !k3.is_unimodular() {
        return Err("invariant violated: K3 lattice is not unimodular of rank 22".into());
    }
    match k3.signature().map_err(|e| e.to_string())? {
        (19, 3) => Ok(()),
        s => Err(format!("invariant violated: K3 signature is {s:?}, expected (19, 3)")),
    }
}

fn demo_pipeline() -> Result<(), String> {
    let r = run_pipeline(&PipelineConfig::default(), &demo_input()).map_err(|e| e.to_string())?;
    let g = r.galois.ok_or("no galois section")?;
    if r.picard.generators != [["0", "0", "1"]] {
        return Err(format!("invariant violated: Picard generators {:?}, expected [[0, 0, 1]]", r.picard.generators));
    }
    if g.bounds.first().and_then(|b| b.bound.as_deref()) != Some("2") {
        return Err("invariant violated: bound at 2 is not 2".into());
    }
    Ok(())
}

pub fn selftest(fx: &Fixtures, acceptance: Option<&AcceptanceConfig>) -> Summary {
    let mut checks = vec![
        check("e8 gram is even, unimodular, positive definite", e8_invariants(&fx.e8_gram)),
        check("k3 lattice is unimodular of signature (19, 3)", k3_invariants(&fx.k3)),
        check("demo pipeline reproduces Pic and the bound at 2", demo_pipeline()),
    ];
    let input = PipelineInput { period: fx.float_period.clone(), setup: None };
    let unverified_warnings = match run_pipeline(&PipelineConfig::default(), &input) {
        Ok(r) => {
            checks.push(check("float-mode pipeline", Ok(())));
            r.unverified
        }
        Err(e) => {
            checks.push(check("float-mode pipeline", Err(e.to_string())));
            0
        }
    };
    if let Some(cfg) = acceptance {
        for o in acceptance::run_all(cfg) {
            let name = format!("criterion {} {}", o.id, o.name);
            checks.push(Check { name, passed: o.passed, detail: o.detail });
        }
    }
    Summary { checks, unverified_warnings }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_fixtures_pass_with_counted_warnings() {
        let s = selftest(&Fixtures::default(), None);
        assert!(s.passed(), "{:?}", s.failures().collect::<Vec<_>>());
        assert!(s.unverified_warnings > 0);
    }

    #[test]
    fn corrupted_e8_fails_by_name() {
        let mut fx = Fixtures::default();
        fx.e8_gram[(0, 1)] += 1;
        fx.e8_gram[(1, 0)] += 1;
        let s = selftest(&fx, None);
        let bad: Vec<_> = s.failures().collect();
        assert_eq!(bad.len(), 1);
        assert!(bad[0].name.starts_with("e8"));
        assert!(bad[0].detail.starts_with("invariant violated"));
    }
}
