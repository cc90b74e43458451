//! Determinism contract: equal (scenario, config, seed, stub) must give
//! bit-identical traces, regardless of worker count.

use chrono::NaiveDate;
use groupsim_core::hierarchy::KnowledgeGraph;
use groupsim_core::model::{CountryCode, Domain, EventRecord, GroundTruth, Platform};
use groupsim_core::oracle::StubOracle;
use groupsim_core::reasoning::{HeatModel, HeatSchedule};
use groupsim_core::runtime::{run_simulation, EngineConfig, Scenario};

fn event() -> EventRecord {
    EventRecord {
        id: "det-01".into(),
        title: "Professor dismissed over academic dishonesty".into(),
        content: "An academic dishonesty case led to a dismissal, drawing broad attention.".into(),
        domain: Domain::Education,
        country: CountryCode::new("CN").unwrap(),
        platform: Platform::Weibo,
        start_date: NaiveDate::from_ymd_opt(2024, 5, 2).unwrap(),
        ground_truth: GroundTruth {
            views: vec![
                800_000, 2_000_000, 5_200_000, 2_400_000, 1_100_000, 500_000, 250_000,
            ],
            likes: vec![60_000, 150_000, 400_000, 180_000, 80_000, 38_000, 19_000],
            comments: vec![25_000, 66_000, 170_000, 80_000, 35_000, 16_000, 8_000],
            shares: vec![20_000, 52_000, 132_000, 62_000, 28_000, 13_000, 6_000],
        },
    }
}

fn scenario() -> Scenario {
    let mut s = Scenario::new(event(), 3);
    s.heat = HeatModel::Schedule {
        schedule: HeatSchedule::SingleImpulse { peak_day: 3 },
    };
    s
}

#[test]
fn worker_count_does_not_change_the_trace() {
    let stub = StubOracle::default();
    let cfg = EngineConfig::default();
    let mut graph = KnowledgeGraph::with_bundled_education();
    let baseline = run_simulation(&scenario(), &cfg, &stub, &mut graph, 99, 1).unwrap();
    for workers in [2usize, 3, 8, 32] {
        let t = run_simulation(&scenario(), &cfg, &stub, &mut graph, 99, workers).unwrap();
        assert_eq!(t, baseline, "trace diverged at {workers} workers");
    }
}

#[test]
fn serialized_traces_are_byte_identical() {
    let stub = StubOracle::default();
    let cfg = EngineConfig::default();
    let mut graph = KnowledgeGraph::with_bundled_education();
    let a = run_simulation(&scenario(), &cfg, &stub, &mut graph, 7, 1).unwrap();
    let b = run_simulation(&scenario(), &cfg, &stub, &mut graph, 7, 8).unwrap();
    let ja = serde_json::to_string_pretty(&a).unwrap();
    let jb = serde_json::to_string_pretty(&b).unwrap();
    assert_eq!(ja, jb);
}

#[test]
fn different_seeds_give_different_traces() {
    let stub = StubOracle::default();
    let cfg = EngineConfig::default();
    let mut graph = KnowledgeGraph::with_bundled_education();
    let a = run_simulation(&scenario(), &cfg, &stub, &mut graph, 1, 1).unwrap();
    let b = run_simulation(&scenario(), &cfg, &stub, &mut graph, 2, 1).unwrap();
    assert_ne!(a.total_views(), b.total_views());
}

#[test]
fn trace_round_trips_through_json() {
    let stub = StubOracle::default();
    let cfg = EngineConfig::default();
    let mut graph = KnowledgeGraph::with_bundled_education();
    let trace = run_simulation(&scenario(), &cfg, &stub, &mut graph, 4, 1).unwrap();
    let json = serde_json::to_string(&trace).unwrap();
    let back: groupsim_core::runtime::SimulationTrace = serde_json::from_str(&json).unwrap();
    assert_eq!(back, trace);
}
