use ks_cli::doc::{Entry, Num, PeriodDoc, SetupDoc};
use ks_cli::pipeline::{demo_input, run_pipeline, PipelineConfig, PipelineInput, Stage, TorusSummary};
use ks_cli::selftest::float_period;
use ks_core::fixtures::{random_period, rng};
use ks_core::ErrorKind;
use proptest::prelude::*;

fn cfg() -> PipelineConfig {
    PipelineConfig { guard: 13, ..PipelineConfig::default() }
}

fn doc_of(p: &ks_core::kuga_satake::K3Period) -> PeriodDoc {
    let entries = |v: &[ks_core::Scalar]| v.iter().map(|s| ks_cli::doc::scalar_entry(s, 40)).collect();
    let d = match p.mode() {
        ks_core::ScalarMode::ExactQuadratic(d) => Some(d),
        _ => None,
    };
    PeriodDoc {
        q: p.context().q().iter().map(|s| Num::Str(s.to_string())).collect(),
        f1: entries(p.f1()),
        f2: entries(p.f2()),
        mode: None,
        d,
        precision: None,
        tolerance: None,
    }
}

#[test]
fn demo_example() {
    let r = run_pipeline(&cfg(), &demo_input()).unwrap();
    assert_eq!(r.picard.rank, 1);
    assert_eq!(r.picard.gram, vec![vec!["1"]]);
    let g = r.galois.unwrap();
    assert_eq!(g.delta, "2");
    assert!(g.good_primes.iter().all(|c| c.prime >= 3));
    assert_eq!(g.bounds.len(), 1);
    assert_eq!((g.bounds[0].prime, g.bounds[0].bound.as_deref()), (2, Some("2")));
}

#[test]
fn rank_two_elliptic_curve() {
    let input = PipelineInput { period: PeriodDoc::standard(&[-1, -1]), setup: None };
    let r = run_pipeline(&cfg(), &input).unwrap();
    match r.torus {
        TorusSummary::Dense { lattice_rank, complex_dim, polarization_type, .. } => {
            assert_eq!((lattice_rank, complex_dim), (2, 1));
            assert_eq!(polarization_type, vec!["2"]);
        }
        other => panic!("expected a dense torus, got {other:?}"),
    }
}

#[test]
fn asymmetric_gram_names_the_setup_stage() {
    let mut setup = SetupDoc::u_swap();
    setup.gram[0][1] = Num::Int(1);
    let input = PipelineInput { period: PeriodDoc::standard(&[-1, -1, 1]), setup: Some(setup) };
    let e = run_pipeline(&cfg(), &input).unwrap_err();
    assert_eq!(e.stage, Stage::Setup);
    assert_eq!(e.kind(), ErrorKind::Validation);
}

#[test]
fn invalid_period_names_the_period_stage() {
    let mut period = PeriodDoc::standard(&[-1, -1, 1]);
    period.f1[2] = Entry::Plain(Num::Int(1));
    let e = run_pipeline(&cfg(), &PipelineInput { period, setup: None }).unwrap_err();
    assert_eq!(e.stage, Stage::Period);
}

#[test]
fn float_claims_carry_the_unverified_flag() {
    let r = run_pipeline(&cfg(), &PipelineInput { period: float_period(), setup: None }).unwrap();
    assert!(!r.period.exact);
    assert!(!r.picard.verified);
    assert!(matches!(r.torus, TorusSummary::Dense { verified: false, .. }));
    assert_eq!(r.unverified, r.warnings.iter().filter(|w| w.unverified).count());
    assert!(r.unverified >= 3);
    // the relation search still finds 3e1 + 5e3
    assert_eq!(r.picard.generators, vec![vec!["3", "0", "5"]]);
}

#[test]
fn metadata_above_the_guard() {
    let q: Vec<i64> = (0..15).map(|i| if i < 2 { -1 } else { 1 }).collect();
    let r = run_pipeline(&cfg(), &PipelineInput { period: PeriodDoc::standard(&q), setup: None }).unwrap();
    assert_eq!(r.torus, TorusSummary::Metadata { rank: 15, real_dim: "16384".into(), complex_dim: "8192".into() });
    assert_eq!(r.picard.rank, 13);
    assert!(!r.picard.cross_checked);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reports_are_reproducible(seed in any::<u64>(), n in 3usize..=5, quad in any::<bool>(), threads in 1usize..=3) {
        let p = random_period(&mut rng(seed), n, quad).unwrap();
        let input = PipelineInput { period: doc_of(&p), setup: Some(SetupDoc::u_swap()) };
        let a = run_pipeline(&cfg(), &input).unwrap().render();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let b = pool.install(|| run_pipeline(&cfg(), &input).unwrap().render());
        prop_assert_eq!(a, b);
    }
}
