//! Day-tick orchestration: scenario setup, the per-day agent loop, multi-seed
//! replications, and trace assembly.
//!
//! Per-agent work inside a day is a pure function of the previous day's event
//! state, the agent's own state, and a random stream keyed by
//! (run seed, agent id, day). Agents therefore execute in any order — or on
//! any number of worker threads — and merge in stable agent-id order with
//! bit-identical results.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{Days, NaiveDate};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::action::{
    self, aggregate_event_state, generate_engagement, DailyEngagement, EventState,
    PredictionOutcome,
};
use crate::hashing::stream_key;
use crate::hierarchy::{
    instantiate_agents, merge_into_graph, parse_group_tree, retrieve_layer, HierarchyError,
    KnowledgeGraph,
};
use crate::metrics::{self, MetricsError, ZScores};
use crate::model::{
    compute_population_weights, ActionDecision, ActionKind, AgentState, EventRecord, FadingConfig,
    GroupAgent, ModelError,
};
use crate::oracle::{self, Oracle, OracleError, OracleRequest, TemplateKind};
use crate::reasoning::{
    apply_fading, decide_action, perceive, transition_state, update_emotion, update_memory,
    HeatModel, MemoryItem, Perception,
};

pub const TRACE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RuntimeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Action(#[from] action::ActionError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("duplicate seed {0}")]
    DuplicateSeed(u64),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

/// One simulation setup: the event, the hierarchy layer to instantiate, the
/// horizon, and stub-mode heat configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub event: EventRecord,
    pub layer: u32,
    pub horizon_days: u32,
    /// Option set for the predict action; empty disables prediction.
    #[serde(default)]
    pub options: Vec<String>,
    /// Heated-discussion events let comments/shares exceed likes.
    #[serde(default)]
    pub heated: bool,
    #[serde(default)]
    pub heat: HeatModel,
}

impl Scenario {
    pub fn new(event: EventRecord, layer: u32) -> Scenario {
        Scenario {
            event,
            layer,
            horizon_days: 7,
            options: Vec::new(),
            heated: false,
            heat: HeatModel::default(),
        }
    }

    pub fn id(&self) -> String {
        alloc::format!("{}-L{}", self.event.id, self.layer)
    }

    fn validate(&self) -> Result<(), RuntimeError> {
        if self.horizon_days < 1 {
            return Err(RuntimeError::InvalidScenario(
                "horizon_days must be >= 1".to_owned(),
            ));
        }
        if self.layer < 1 {
            return Err(RuntimeError::InvalidScenario(
                "layer must be >= 1".to_owned(),
            ));
        }
        Ok(())
    }
}

/// Engine-wide knobs shared by every agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub fading: FadingConfig,
    pub world_description: String,
}

impl Default for EngineConfig {
    fn default() -> EngineConfig {
        EngineConfig {
            fading: FadingConfig::default(),
            world_description:
                "a simulated online social network where population groups react to one live event"
                    .to_owned(),
        }
    }
}

/// Identity card of an agent as it entered the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSummary {
    pub id: String,
    pub population: u64,
    pub characteristic: crate::model::Characteristic,
    pub weight: f64,
}

/// Everything recorded for one agent on one day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentDayRow {
    pub agent_id: String,
    pub state: AgentState,
    pub memory: Vec<MemoryItem>,
    pub decision: ActionDecision,
    pub engagement: DailyEngagement,
}

/// One simulated day: the shared perception, per-agent rows, and the totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayRecord {
    pub day: u32,
    pub date: NaiveDate,
    pub perception: Perception,
    pub rows: Vec<AgentDayRow>,
    pub totals: DailyEngagement,
}

/// Full record of one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub schema_version: u32,
    pub scenario_id: String,
    pub event_id: String,
    pub seed: u64,
    pub layer: u32,
    pub horizon_days: u32,
    pub complete: bool,
    pub agents: Vec<AgentSummary>,
    pub days: Vec<DayRecord>,
    pub final_event_state: EventState,
    pub prediction: Option<PredictionOutcome>,
}

impl SimulationTrace {
    /// Daily totals for one action across the horizon.
    pub fn daily_totals(&self, action: ActionKind) -> Vec<u64> {
        self.days
            .iter()
            .map(|d| match action {
                ActionKind::View => d.totals.views,
                ActionKind::Like => d.totals.likes,
                ActionKind::Comment => d.totals.comments,
                ActionKind::Share => d.totals.shares,
                ActionKind::Predict => 0,
            })
            .collect()
    }

    pub fn total_views(&self) -> u64 {
        self.days.iter().map(|d| d.totals.views).sum()
    }

    /// Engagement row count; `horizon_days * agents` for complete runs.
    pub fn row_count(&self) -> usize {
        self.days.iter().map(|d| d.rows.len()).sum()
    }
}

/// A set of runs of the same scenario under distinct seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSet {
    pub scenario_id: String,
    pub traces: Vec<SimulationTrace>,
    pub summary: ReplicationSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationSummary {
    /// (seed, total simulated views) per replicate, in input order.
    pub seed_totals: Vec<(u64, u64)>,
    /// Ground-truth total views used as the Z reference.
    pub reference_views: f64,
    pub z: Option<ZScores>,
    pub z_max_abs: Option<f64>,
    pub z_label: Option<String>,
    /// True when any replicate aborted early.
    pub partial: bool,
}

struct AgentStep {
    agent: GroupAgent,
    row: AgentDayRow,
}

fn available_actions(scenario: &Scenario) -> Vec<ActionKind> {
    let mut actions = alloc::vec![
        ActionKind::View,
        ActionKind::Like,
        ActionKind::Comment,
        ActionKind::Share,
    ];
    if !scenario.options.is_empty() {
        actions.push(ActionKind::Predict);
    }
    actions
}

fn day_date(event: &EventRecord, day: u32) -> NaiveDate {
    event
        .start_date
        .checked_add_days(Days::new(u64::from(day.saturating_sub(1))))
        .unwrap_or(event.start_date)
}

/// Population weights, degrading to all-zero weights for an all-zero
/// population so idle days still tick.
fn zero_safe_weights(agents: &[GroupAgent]) -> Result<BTreeMap<String, f64>, RuntimeError> {
    match compute_population_weights(agents) {
        Ok(w) => Ok(w),
        Err(ModelError::EmptyPopulation) => {
            Ok(agents.iter().map(|a| (a.id.clone(), 0.0)).collect())
        }
        Err(e) => Err(e.into()),
    }
}

/// Advance one agent through a day. Pure given the oracle.
fn step_agent(
    agent: &GroupAgent,
    perception: &Perception,
    scenario: &Scenario,
    weight: f64,
    date: NaiveDate,
    cfg: &EngineConfig,
    oracle: &dyn Oracle,
    seed: u64,
    available: &[ActionKind],
) -> Result<AgentStep, RuntimeError> {
    let world = &cfg.world_description;
    let fresh = update_emotion(agent, perception, &cfg.fading, oracle, world, seed)?;
    let mixed = transition_state(&agent.state, &fresh, &agent.memory, &cfg.fading);
    let mut state_now = AgentState {
        emotions: apply_fading(&mixed.emotions, agent.characteristic, &cfg.fading),
        ..mixed
    };
    let decision = decide_action(
        agent, &state_now, perception, oracle, available, world, seed,
    )?;
    state_now.last_action = Some(decision.action);
    let engagement = generate_engagement(
        agent,
        &state_now,
        perception,
        weight,
        oracle,
        scenario.heated,
        date,
        &cfg.fading,
        world,
        seed,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_key(
        seed,
        "memory",
        &agent.id,
        u64::from(perception.day),
    ));
    let memory = update_memory(
        &agent.memory,
        &decision,
        perception,
        &state_now.emotions,
        &cfg.fading,
        &mut rng,
    );
    let mut next = agent.clone();
    next.state = state_now.clone();
    next.memory = memory.clone();
    Ok(AgentStep {
        row: AgentDayRow {
            agent_id: agent.id.clone(),
            state: state_now,
            memory: memory.iter().cloned().collect(),
            decision,
            engagement,
        },
        agent: next,
    })
}

#[cfg(feature = "std")]
fn run_agents(
    agents: &[GroupAgent],
    perception: &Perception,
    scenario: &Scenario,
    weights: &BTreeMap<String, f64>,
    date: NaiveDate,
    cfg: &EngineConfig,
    oracle: &(dyn Oracle + Sync),
    seed: u64,
    available: &[ActionKind],
    workers: usize,
) -> Vec<Result<AgentStep, RuntimeError>> {
    let workers = workers.max(1).min(agents.len().max(1));
    if workers == 1 {
        return agents
            .iter()
            .map(|agent| {
                let weight = weights.get(&agent.id).copied().unwrap_or(0.0);
                step_agent(
                    agent, perception, scenario, weight, date, cfg, oracle, seed, available,
                )
            })
            .collect();
    }
    let mut slots: Vec<Option<Result<AgentStep, RuntimeError>>> =
        (0..agents.len()).map(|_| None).collect();
    let per = agents.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        for (chunk_idx, chunk) in slots.chunks_mut(per).enumerate() {
            let start = chunk_idx * per;
            let agent_chunk = &agents[start..start + chunk.len()];
            scope.spawn(move || {
                for (slot, agent) in chunk.iter_mut().zip(agent_chunk) {
                    let weight = weights.get(&agent.id).copied().unwrap_or(0.0);
                    *slot = Some(step_agent(
                        agent, perception, scenario, weight, date, cfg, oracle, seed, available,
                    ));
                }
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every agent slot filled"))
        .collect()
}

#[cfg(not(feature = "std"))]
fn run_agents(
    agents: &[GroupAgent],
    perception: &Perception,
    scenario: &Scenario,
    weights: &BTreeMap<String, f64>,
    date: NaiveDate,
    cfg: &EngineConfig,
    oracle: &(dyn Oracle + Sync),
    seed: u64,
    available: &[ActionKind],
    _workers: usize,
) -> Vec<Result<AgentStep, RuntimeError>> {
    agents
        .iter()
        .map(|agent| {
            let weight = weights.get(&agent.id).copied().unwrap_or(0.0);
            step_agent(
                agent, perception, scenario, weight, date, cfg, oracle, seed, available,
            )
        })
        .collect()
}

/// Run one simulated day for every agent, then fold the engagements into the
/// event state.
#[allow(clippy::too_many_arguments)]
pub fn step_day(
    agents: &[GroupAgent],
    event_state: &EventState,
    scenario: &Scenario,
    day: u32,
    cfg: &EngineConfig,
    oracle: &(dyn Oracle + Sync),
    seed: u64,
    workers: usize,
) -> Result<(Vec<GroupAgent>, EventState, DayRecord), RuntimeError> {
    let weights = zero_safe_weights(agents)?;
    let perception = perceive(event_state, &scenario.event, day, &scenario.heat);
    let date = day_date(&scenario.event, day);
    let available = available_actions(scenario);

    let results = run_agents(
        agents,
        &perception,
        scenario,
        &weights,
        date,
        cfg,
        oracle,
        seed,
        &available,
        workers,
    );
    let mut next_agents = Vec::with_capacity(agents.len());
    let mut rows = Vec::with_capacity(agents.len());
    for result in results {
        let step = result?;
        next_agents.push(step.agent);
        rows.push(step.row);
    }

    let engagements: Vec<DailyEngagement> = rows.iter().map(|r| r.engagement).collect();
    let next_state = aggregate_event_state(event_state, &engagements, date)?;
    let totals = *next_state.history.last().expect("day just appended");
    Ok((
        next_agents,
        next_state,
        DayRecord {
            day,
            date,
            perception,
            rows,
            totals,
        },
    ))
}

/// Make sure the graph holds a tree for (country, domain), asking the oracle
/// for a document if allowed.
fn ensure_entry(
    graph: &mut KnowledgeGraph,
    country: &crate::model::CountryCode,
    domain: crate::model::Domain,
    oracle: &dyn Oracle,
    seed: u64,
) -> Result<(), RuntimeError> {
    if graph.get(country, domain).is_some() {
        return Ok(());
    }
    let request = OracleRequest::new(TemplateKind::GroupFind)
        .text("domain", domain.as_str())
        .text("country", country.as_str())
        .int("seed", seed as i64);
    let document = match oracle.complete(&request) {
        Ok(doc) => doc,
        Err(OracleError::Unavailable(_)) => {
            return Err(HierarchyError::MissingEntry {
                country: country.as_str().to_owned(),
                domain,
            }
            .into())
        }
        Err(e) => return Err(e.into()),
    };
    let tree = parse_group_tree(&document, country.clone(), domain)?;
    merge_into_graph(graph, tree, &document);
    Ok(())
}

/// Run a full scenario: instantiate agents at the scenario layer, tick the
/// horizon, and assemble the trace.
///
/// Oracle failures inside the day loop abort the run and mark the trace
/// incomplete; setup failures are hard errors.
pub fn run_simulation(
    scenario: &Scenario,
    cfg: &EngineConfig,
    oracle: &(dyn Oracle + Sync),
    graph: &mut KnowledgeGraph,
    seed: u64,
    workers: usize,
) -> Result<SimulationTrace, RuntimeError> {
    scenario.validate()?;
    let classified = oracle::classify_event(&scenario.event, oracle, seed)?;
    let (domain, country) = classified.parsed;
    ensure_entry(graph, &country, domain, oracle, seed)?;
    let specs = retrieve_layer(graph, &country, domain, scenario.layer)?;
    let mut agents =
        instantiate_agents(&specs, &country, oracle, cfg.fading.memory_capacity, seed)?;
    agents.sort_by(|a, b| a.id.cmp(&b.id));
    let weights = zero_safe_weights(&agents)?;
    let summaries: Vec<AgentSummary> = agents
        .iter()
        .map(|a| AgentSummary {
            id: a.id.clone(),
            population: a.population,
            characteristic: a.characteristic,
            weight: weights.get(&a.id).copied().unwrap_or(0.0),
        })
        .collect();

    let mut event_state = EventState::start();
    let mut days = Vec::with_capacity(scenario.horizon_days as usize);
    let mut complete = true;
    for day in 1..=scenario.horizon_days {
        match step_day(
            &agents,
            &event_state,
            scenario,
            day,
            cfg,
            oracle,
            seed,
            workers,
        ) {
            Ok((next_agents, next_state, record)) => {
                agents = next_agents;
                event_state = next_state;
                days.push(record);
            }
            Err(RuntimeError::Oracle(e)) => {
                log::error!("day {day} aborted: {e}");
                complete = false;
                break;
            }
            Err(RuntimeError::Action(action::ActionError::Oracle(e))) => {
                log::error!("day {day} aborted: {e}");
                complete = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let prediction = if complete && !scenario.options.is_empty() {
        let perception = perceive(
            &event_state,
            &scenario.event,
            scenario.horizon_days,
            &scenario.heat,
        );
        let states: Vec<AgentState> = agents.iter().map(|a| a.state.clone()).collect();
        let votes = action::resolve_predictions(
            &agents,
            &states,
            &scenario.options,
            &perception,
            oracle,
            &cfg.world_description,
            seed,
        )?;
        Some(action::predict_outcome(
            &votes,
            &weights,
            &scenario.options,
        )?)
    } else {
        None
    };

    Ok(SimulationTrace {
        schema_version: TRACE_SCHEMA_VERSION,
        scenario_id: scenario.id(),
        event_id: scenario.event.id.clone(),
        seed,
        layer: scenario.layer,
        horizon_days: scenario.horizon_days,
        complete,
        agents: summaries,
        days,
        final_event_state: event_state,
        prediction,
    })
}

/// Run the scenario once per seed and summarize reproducibility.
pub fn run_replications(
    scenario: &Scenario,
    cfg: &EngineConfig,
    oracle: &(dyn Oracle + Sync),
    graph: &mut KnowledgeGraph,
    seeds: &[u64],
    workers: usize,
) -> Result<ReplicationSet, RuntimeError> {
    if seeds.len() < 2 {
        return Err(MetricsError::TooFewReplicates.into());
    }
    for (i, &seed) in seeds.iter().enumerate() {
        if seeds[..i].contains(&seed) {
            return Err(RuntimeError::DuplicateSeed(seed));
        }
    }
    let mut traces = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        traces.push(run_simulation(scenario, cfg, oracle, graph, seed, workers)?);
    }
    let summary = summarize_replications(scenario, &traces)?;
    Ok(ReplicationSet {
        scenario_id: scenario.id(),
        traces,
        summary,
    })
}

/// Reproducibility summary: per-seed view totals and their Z-scores against
/// the event's ground-truth total.
pub fn summarize_replications(
    scenario: &Scenario,
    traces: &[SimulationTrace],
) -> Result<ReplicationSummary, RuntimeError> {
    let seed_totals: Vec<(u64, u64)> = traces.iter().map(|t| (t.seed, t.total_views())).collect();
    let partial = traces.iter().any(|t| !t.complete);
    let reference_views = scenario.event.ground_truth.total_views() as f64;
    let complete_totals: Vec<f64> = traces
        .iter()
        .filter(|t| t.complete)
        .map(|t| t.total_views() as f64)
        .collect();
    let z = if complete_totals.len() >= 2 {
        Some(metrics::reproducibility_z(
            &complete_totals,
            reference_views,
        )?)
    } else {
        None
    };
    let z_max_abs = z.as_ref().map(ZScores::max_abs);
    Ok(ReplicationSummary {
        seed_totals,
        reference_views,
        z,
        z_max_abs,
        z_label: z_max_abs.map(|m| metrics::z_label(m).to_owned()),
        partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::KnowledgeGraph;
    use crate::model::{CountryCode, Domain, GroundTruth, Platform};
    use crate::oracle::StubOracle;
    use crate::reasoning::HeatSchedule;

    pub(crate) fn education_event(id: &str) -> EventRecord {
        EventRecord {
            id: id.to_owned(),
            title: "School cafeteria reported spoiled pork".to_owned(),
            content: "A school cafeteria was reported to have served spoiled pork, sparking outrage among parents and students.".to_owned(),
            domain: Domain::Education,
            country: CountryCode::new("CN").unwrap(),
            platform: Platform::Weibo,
            start_date: NaiveDate::from_ymd_opt(2024, 3, 12).unwrap(),
            ground_truth: GroundTruth {
                views: alloc::vec![5_000_000, 30_000_000, 8_000_000, 20_000_000, 5_500_000, 3_000_000, 1_500_000],
                likes: alloc::vec![400_000, 2_400_000, 640_000, 1_600_000, 440_000, 240_000, 120_000],
                comments: alloc::vec![180_000, 1_000_000, 280_000, 700_000, 190_000, 100_000, 50_000],
                shares: alloc::vec![140_000, 800_000, 220_000, 560_000, 150_000, 80_000, 40_000],
            },
        }
    }

    fn scenario(layer: u32) -> Scenario {
        let mut s = Scenario::new(education_event("event-02"), layer);
        s.heat = HeatModel::Schedule {
            schedule: HeatSchedule::DoubleImpulse,
        };
        s
    }

    #[test]
    fn two_agents_one_day_produces_two_rows() {
        let stub = StubOracle::default();
        let graph = KnowledgeGraph::with_bundled_education();
        let s = scenario(1);
        let cfg = EngineConfig::default();
        let specs = retrieve_layer(
            &graph,
            &CountryCode::new("CN").unwrap(),
            Domain::Education,
            1,
        )
        .unwrap();
        let agents =
            instantiate_agents(&specs, &CountryCode::new("CN").unwrap(), &stub, 16, 1).unwrap();
        let (next_agents, state, record) =
            step_day(&agents, &EventState::start(), &s, 1, &cfg, &stub, 1, 1).unwrap();
        assert_eq!(record.rows.len(), 2);
        assert_eq!(state.day, 2);
        assert_eq!(next_agents.len(), 2);
        assert_eq!(graph.len(), 1);
    }

    #[test]
    fn sixteen_agents_seven_days_gives_112_rows() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let trace = run_simulation(
            &scenario(3),
            &EngineConfig::default(),
            &stub,
            &mut graph,
            42,
            1,
        )
        .unwrap();
        assert!(trace.complete);
        assert_eq!(trace.agents.len(), 16);
        assert_eq!(trace.row_count(), 112);
        assert_eq!(trace.days.len(), 7);
    }

    #[test]
    fn horizon_one_totals_equal_the_single_day() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let mut s = scenario(1);
        s.horizon_days = 1;
        let trace = run_simulation(&s, &EngineConfig::default(), &stub, &mut graph, 5, 1).unwrap();
        assert_eq!(trace.days.len(), 1);
        assert_eq!(trace.total_views(), trace.days[0].totals.views);
        assert_eq!(
            trace.final_event_state.cumulative.views,
            trace.days[0].totals.views
        );
    }

    #[test]
    fn same_seed_reruns_are_identical() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let s = scenario(3);
        let cfg = EngineConfig::default();
        let a = run_simulation(&s, &cfg, &stub, &mut graph, 7, 1).unwrap();
        let b = run_simulation(&s, &cfg, &stub, &mut graph, 7, 1).unwrap();
        assert_eq!(a, b);
        let c = run_simulation(&s, &cfg, &stub, &mut graph, 8, 1).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn missing_entry_surfaces_from_hierarchy() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::new();
        let err = run_simulation(
            &scenario(1),
            &EngineConfig::default(),
            &stub,
            &mut graph,
            1,
            1,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            RuntimeError::Hierarchy(HierarchyError::MissingEntry { .. })
        ));
    }

    #[test]
    fn double_impulse_yields_two_view_peaks() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let trace = run_simulation(
            &scenario(3),
            &EngineConfig::default(),
            &stub,
            &mut graph,
            3,
            1,
        )
        .unwrap();
        let views = trace.daily_totals(ActionKind::View);
        let mut maxima = Vec::new();
        for i in 0..views.len() {
            let left_ok = i == 0 || views[i] > views[i - 1];
            let right_ok = i + 1 == views.len() || views[i] > views[i + 1];
            if left_ok && right_ok {
                maxima.push(i);
            }
        }
        assert_eq!(maxima, alloc::vec![1, 3], "daily views: {views:?}");
        assert!(views[3] < views[1], "second peak must stay below the first");
    }

    /// Delegates to the stub but can also serve group documents, the way a
    /// remote oracle with search capability would.
    struct DocServingOracle {
        stub: StubOracle,
        document: &'static str,
    }

    impl Oracle for DocServingOracle {
        fn complete(&self, request: &OracleRequest) -> Result<String, OracleError> {
            match request.template {
                TemplateKind::GroupFind => Ok(self.document.to_owned()),
                _ => self.stub.complete(request),
            }
        }
    }

    #[test]
    fn missing_entries_can_be_filled_by_the_oracle() {
        let oracle = DocServingOracle {
            stub: StubOracle::default(),
            document: "## Students: 100,000\n## Teachers: 10,000\n",
        };
        let mut graph = KnowledgeGraph::new();
        let trace = run_simulation(
            &scenario(1),
            &EngineConfig::default(),
            &oracle,
            &mut graph,
            1,
            1,
        )
        .unwrap();
        assert!(trace.complete);
        assert_eq!(trace.agents.len(), 2);
        // The fetched document is now cached for future runs.
        assert_eq!(graph.len(), 1);
        assert!(graph
            .source_documents
            .values()
            .next()
            .unwrap()
            .contains("## Students: 100,000"));
    }

    #[test]
    fn all_zero_populations_leave_counters_unchanged() {
        let stub = StubOracle::default();
        let doc = "## Ghosts: 0\n## Echoes: 0\n";
        let mut graph = KnowledgeGraph::new();
        let tree = crate::hierarchy::parse_group_tree(
            doc,
            CountryCode::new("CN").unwrap(),
            Domain::Education,
        )
        .unwrap();
        crate::hierarchy::merge_into_graph(&mut graph, tree, doc);
        let trace = run_simulation(
            &scenario(1),
            &EngineConfig::default(),
            &stub,
            &mut graph,
            1,
            1,
        )
        .unwrap();
        assert!(trace.complete);
        assert_eq!(trace.final_event_state.cumulative, Default::default());
        assert_eq!(trace.row_count(), 14);
    }

    #[test]
    fn replications_require_distinct_seeds() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let err = run_replications(
            &scenario(1),
            &EngineConfig::default(),
            &stub,
            &mut graph,
            &[4, 4],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, RuntimeError::DuplicateSeed(4)));
    }

    #[test]
    fn five_replicates_summarize_with_z_scores() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let set = run_replications(
            &scenario(3),
            &EngineConfig::default(),
            &stub,
            &mut graph,
            &[1, 2, 3, 4, 5],
            1,
        )
        .unwrap();
        assert_eq!(set.traces.len(), 5);
        assert!(!set.summary.partial);
        let z = set.summary.z.as_ref().unwrap();
        assert_eq!(z.per_replicate.len(), 5);
        assert!(set.summary.z_max_abs.unwrap() < 1.0);
        assert_eq!(set.summary.z_label.as_deref(), Some("excellent"));
    }

    /// Works until a given day, then reports itself unavailable.
    struct FlakyOracle {
        stub: StubOracle,
        fail_from_day: u32,
    }

    impl Oracle for FlakyOracle {
        fn complete(&self, request: &OracleRequest) -> Result<String, OracleError> {
            if request.day.unwrap_or(0) >= self.fail_from_day {
                return Err(OracleError::Unavailable("endpoint went away".into()));
            }
            self.stub.complete(request)
        }
    }

    #[test]
    fn mid_run_oracle_failure_marks_the_trace_incomplete() {
        let oracle = FlakyOracle {
            stub: StubOracle::default(),
            fail_from_day: 3,
        };
        let mut graph = KnowledgeGraph::with_bundled_education();
        let trace = run_simulation(
            &scenario(1),
            &EngineConfig::default(),
            &oracle,
            &mut graph,
            1,
            1,
        )
        .unwrap();
        assert!(!trace.complete);
        assert_eq!(trace.days.len(), 2);

        let mut graph = KnowledgeGraph::with_bundled_education();
        let set = run_replications(
            &scenario(1),
            &EngineConfig::default(),
            &oracle,
            &mut graph,
            &[1, 2],
            1,
        )
        .unwrap();
        assert!(set.summary.partial);
        assert!(set.summary.z.is_none());
    }

    #[test]
    fn prediction_runs_after_the_horizon() {
        let stub = StubOracle::default();
        let mut graph = KnowledgeGraph::with_bundled_education();
        let mut s = scenario(1);
        s.options = alloc::vec!["approve".to_owned(), "reject".to_owned()];
        let trace = run_simulation(&s, &EngineConfig::default(), &stub, &mut graph, 11, 1).unwrap();
        let p = trace.prediction.unwrap();
        let total: f64 = p.support.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(s.options.contains(&p.winner));
    }
}
