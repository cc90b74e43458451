//! Decision-reasoning core: perception, oracle-driven emotion updates with
//! characteristic clamping, the state-transition mix, the action policy, and
//! the bounded memory queue with forgetting.
//!
//! Per-day evolution for one agent runs
//! perceive -> update_emotion -> transition_state -> apply_fading ->
//! decide_action -> (engagement) -> update_memory,
//! all pure given the oracle handle and a seeded random stream.

use alloc::borrow::ToOwned;
use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::action::EventState;
use crate::float::clamp01;
use crate::model::{
    ActionDecision, ActionKind, AgentState, Characteristic, CountryCode, Domain, EmotionState,
    EventRecord, FadingConfig, GroupAgent,
};
use crate::oracle::{self, Oracle, OracleError, OracleRequest, TemplateKind, HEAT_SCALE};

/// Cumulative action counters shared through the event state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngagementCounts {
    pub views: u64,
    pub likes: u64,
    pub comments: u64,
    pub shares: u64,
}

/// What an agent perceives at the start of a day: the event summary, its
/// classification, the previous day's cumulative counters, and a heat value.
///
/// Perception is agent-independent; every agent sees the same object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perception {
    pub day: u32,
    pub event_summary: String,
    pub domain: Domain,
    pub country: CountryCode,
    pub event_counters: EngagementCounts,
    pub heat: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemoryKind {
    Perception,
    Decision,
    Action,
}

/// One memory entry, carrying the agent's emotion snapshot at storage time so
/// the memory term of the state transition is computable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryItem {
    pub kind: MemoryKind,
    pub day: u32,
    pub payload: String,
    pub salience: f64,
    pub emotions: EmotionState,
}

/// Bounded FIFO queue of memory items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Memory {
    items: VecDeque<MemoryItem>,
    capacity: usize,
}

impl Memory {
    pub fn new(capacity: usize) -> Memory {
        Memory {
            items: VecDeque::new(),
            capacity: capacity.max(1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MemoryItem> {
        self.items.iter()
    }

    /// Append, evicting the oldest items beyond capacity.
    pub fn push(&mut self, item: MemoryItem) {
        self.items.push_back(item);
        while self.items.len() > self.capacity {
            self.items.pop_front();
        }
    }
}

/// Heat source for stub-mode perception.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HeatModel {
    /// A fixed per-day schedule emulating an event archetype.
    Schedule { schedule: HeatSchedule },
    /// Heat derived from counter growth in the shared event state.
    Growth { initial_heat: f64 },
}

impl Default for HeatModel {
    fn default() -> HeatModel {
        HeatModel::Schedule {
            schedule: HeatSchedule::SingleImpulse { peak_day: 2 },
        }
    }
}

/// Event heat archetypes. Values are daily salience levels on a 0..=3 scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "shape", content = "args")]
pub enum HeatSchedule {
    SingleImpulse { peak_day: u32 },
    DoubleImpulse,
    Plateau,
    Custom(Vec<f64>),
}

const SINGLE_PEAK_DAY2: [f64; 7] = [0.6, 3.0, 1.2, 0.7, 0.45, 0.3, 0.2];
const SINGLE_PEAK_DAY3: [f64; 7] = [0.5, 1.5, 3.0, 1.2, 0.6, 0.35, 0.2];
const DOUBLE_IMPULSE: [f64; 7] = [0.5, 3.0, 0.8, 2.0, 0.55, 0.3, 0.15];
const PLATEAU: [f64; 7] = [0.8, 1.8, 1.9, 1.8, 1.2, 0.7, 0.4];

impl HeatSchedule {
    pub fn values(&self) -> Vec<f64> {
        match self {
            HeatSchedule::SingleImpulse { peak_day } if *peak_day >= 3 => SINGLE_PEAK_DAY3.to_vec(),
            HeatSchedule::SingleImpulse { .. } => SINGLE_PEAK_DAY2.to_vec(),
            HeatSchedule::DoubleImpulse => DOUBLE_IMPULSE.to_vec(),
            HeatSchedule::Plateau => PLATEAU.to_vec(),
            HeatSchedule::Custom(values) => values.clone(),
        }
    }

    fn heat_on(&self, day: u32) -> f64 {
        let values = self.values();
        if values.is_empty() {
            return 0.0;
        }
        let idx = (day.max(1) as usize - 1).min(values.len() - 1);
        let mut heat = values[idx];
        // Past the schedule, keep decaying.
        let overshoot = (day.max(1) as usize).saturating_sub(values.len());
        for _ in 0..overshoot {
            heat *= 0.6;
        }
        heat
    }
}

impl HeatModel {
    pub fn heat_on(&self, day: u32, prev_state: &EventState) -> f64 {
        match self {
            HeatModel::Schedule { schedule } => schedule.heat_on(day),
            HeatModel::Growth { initial_heat } => {
                if day <= 1 {
                    *initial_heat
                } else {
                    let newest = prev_state
                        .history
                        .last()
                        .map(|e| e.views as f64)
                        .unwrap_or(0.0);
                    let before = prev_state.cumulative.views as f64 - newest;
                    let growth = newest / before.max(1.0);
                    (initial_heat * growth).min(HEAT_SCALE)
                }
            }
        }
    }
}

/// Build the perception object for `day` from the previous day's event state.
pub fn perceive(
    event_state: &EventState,
    event: &EventRecord,
    day: u32,
    heat: &HeatModel,
) -> Perception {
    let mut summary = event.title.clone();
    let content = event.content.trim();
    if !content.is_empty() {
        summary.push_str(" - ");
        let clipped: String = content.chars().take(160).collect();
        summary.push_str(&clipped);
    }
    Perception {
        day,
        event_summary: summary,
        domain: event.domain,
        country: event.country.clone(),
        event_counters: event_state.cumulative,
        heat: heat.heat_on(day, event_state),
    }
}

const NEGATIVE_WORDS: [&str; 18] = [
    "spoiled",
    "dismiss",
    "dishonest",
    "scandal",
    "fraud",
    "fail",
    "forfeit",
    "crisis",
    "outrage",
    "death",
    "panic",
    "leak",
    "abuse",
    "strike",
    "collapse",
    "pollut",
    "corrupt",
    "anger",
];
const POSITIVE_WORDS: [&str; 12] = [
    "win",
    "celebrat",
    "success",
    "breakthrough",
    "champion",
    "record high",
    "award",
    "achiev",
    "victor",
    "growth",
    "recover",
    "praise",
];

/// Sentiment direction of event text: +1 positive, -1 negative.
///
/// Ties default to negative, matching the skew of viral news.
pub fn text_sentiment(text: &str) -> f64 {
    let lower = text.to_lowercase();
    let count = |words: &[&str]| -> usize { words.iter().map(|w| lower.matches(w).count()).sum() };
    if count(&POSITIVE_WORDS) > count(&NEGATIVE_WORDS) {
        1.0
    } else {
        -1.0
    }
}

fn emotions_dict(e: &EmotionState) -> String {
    alloc::format!(
        "{{ 'happiness': {}, 'sadness': {}, 'anger': {} }}",
        e.happiness,
        e.sadness,
        e.anger
    )
}

fn attitudes_dict(e: &EmotionState) -> String {
    alloc::format!(
        "{{ 'optimism': {}, 'pessimism': {} }}",
        e.optimism,
        e.pessimism
    )
}

fn counters_text(c: &EngagementCounts) -> String {
    alloc::format!(
        "views={}, likes={}, comments={}, shares={}",
        c.views,
        c.likes,
        c.comments,
        c.shares
    )
}

fn memory_text(memory: &Memory) -> String {
    if memory.is_empty() {
        return "(empty)".to_owned();
    }
    let rendered: Vec<String> = memory
        .iter()
        .map(|item| alloc::format!("[day {} {:?}] {}", item.day, item.kind, item.payload))
        .collect();
    rendered.join(" | ")
}

fn state_text(state: &AgentState) -> String {
    alloc::format!(
        "day={}, emotions={}, attitudes={}, last_action={}",
        state.day,
        emotions_dict(&state.emotions),
        attitudes_dict(&state.emotions),
        state.last_action.map(|a| a.as_str()).unwrap_or("none")
    )
}

/// Shared context slots for agent-facing templates.
pub(crate) fn base_request(
    template: TemplateKind,
    agent: &GroupAgent,
    perception: &Perception,
    world: &str,
    seed: u64,
) -> OracleRequest {
    let prev = agent.state.emotions;
    OracleRequest::new(template)
        .agent(&agent.id)
        .day(perception.day)
        .text("agent_name", agent.id.clone())
        .text("agent_description", agent.description.clone())
        .text("world_description", world)
        .int("day_n", i64::from(perception.day))
        .text("event_state", counters_text(&perception.event_counters))
        .text("memory", memory_text(&agent.memory))
        .text("previous_state", state_text(&agent.state))
        .num("heat", perception.heat)
        .num("sentiment", text_sentiment(&perception.event_summary))
        .num("prev_happiness", prev.happiness)
        .num("prev_sadness", prev.sadness)
        .num("prev_anger", prev.anger)
        .num("prev_optimism", prev.optimism)
        .num("prev_pessimism", prev.pessimism)
        .int("seed", seed as i64)
}

fn with_current_emotions(request: OracleRequest, current: &EmotionState) -> OracleRequest {
    request
        .text("emotions", emotions_dict(current))
        .text("attitudes", attitudes_dict(current))
        .num("cur_happiness", current.happiness)
        .num("cur_sadness", current.sadness)
        .num("cur_anger", current.anger)
        .num("cur_optimism", current.optimism)
        .num("cur_pessimism", current.pessimism)
}

/// Query the oracle for an emotional response, then clamp the change by the
/// agent's characteristic amplitude.
pub fn update_emotion(
    agent: &GroupAgent,
    perception: &Perception,
    cfg: &FadingConfig,
    oracle: &dyn Oracle,
    world: &str,
    seed: u64,
) -> Result<EmotionState, OracleError> {
    let request = base_request(TemplateKind::EmotionUpdate, agent, perception, world, seed)
        .num("emotion_fading", cfg.fading_rate.get(agent.characteristic))
        .num("amplitude", cfg.amplitude.get(agent.characteristic));
    let reply = oracle::query_emotion_update(&request, oracle)?;
    Ok(clamp_emotion_change(
        &agent.state.emotions,
        &reply.parsed,
        agent.characteristic,
        cfg,
    ))
}

/// Scale each channel's change from `prev` by the characteristic amplitude
/// and clamp into `[0, 1]`.
pub fn clamp_emotion_change(
    prev: &EmotionState,
    raw: &EmotionState,
    characteristic: Characteristic,
    cfg: &FadingConfig,
) -> EmotionState {
    let amp = cfg.amplitude.get(characteristic);
    let p = prev.channels();
    let r = raw.channels();
    let mut out = [0.0f64; 5];
    for i in 0..5 {
        out[i] = clamp01(p[i] + amp * (r[i] - p[i]));
    }
    EmotionState::from_channels(out)
}

/// Per-day multiplicative decay toward zero.
pub fn apply_fading(
    emotions: &EmotionState,
    characteristic: Characteristic,
    cfg: &FadingConfig,
) -> EmotionState {
    let rate = cfg.fading_rate.get(characteristic);
    EmotionState::from_channels(emotions.channels().map(|e| clamp01(e * (1.0 - rate))))
}

/// Salience-weighted mean of the emotion snapshots held in memory; the zero
/// vector when memory is empty or all saliences are zero.
pub fn memory_influence(memory: &Memory) -> [f64; 5] {
    let mut acc = [0.0f64; 5];
    let mut total = 0.0f64;
    for item in memory.iter() {
        let w = clamp01(item.salience);
        let c = item.emotions.channels();
        for i in 0..5 {
            acc[i] += w * c[i];
        }
        total += w;
    }
    if total <= 0.0 {
        return [0.0; 5];
    }
    acc.map(|v| v / total)
}

/// Channel-wise convex mix of previous state, fresh emotion, and memory.
///
/// With `alpha` normalized and all inputs in `[0, 1]` the result is a convex
/// combination, so the final clamp never binds.
pub fn transition_state(
    prev: &AgentState,
    fresh: &EmotionState,
    memory: &Memory,
    cfg: &FadingConfig,
) -> AgentState {
    let [a1, a2, a3] = cfg.alpha;
    let p = prev.emotions.channels();
    let f = fresh.channels();
    let m = memory_influence(memory);
    let mut out = [0.0f64; 5];
    for i in 0..5 {
        out[i] = clamp01(a1 * p[i] + a2 * f[i] + a3 * m[i]);
    }
    AgentState {
        emotions: EmotionState::from_channels(out),
        day: prev.day + 1,
        last_action: prev.last_action,
    }
}

/// Ask the oracle for the day's action; the decision is validated against the
/// available set.
pub fn decide_action(
    agent: &GroupAgent,
    state_now: &AgentState,
    perception: &Perception,
    oracle: &dyn Oracle,
    available: &[ActionKind],
    world: &str,
    seed: u64,
) -> Result<ActionDecision, OracleError> {
    let request = with_current_emotions(
        base_request(TemplateKind::Decision, agent, perception, world, seed),
        &state_now.emotions,
    )
    .text("available_actions", oracle::actions_slot(available));
    let reply = oracle::query_decision(&request, oracle, available)?;
    Ok(reply.parsed)
}

fn rng_unit(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Drop each existing item independently with probability `forgetting_p`,
/// then enqueue the day's perception and decision.
pub fn update_memory(
    memory: &Memory,
    decision: &ActionDecision,
    perception: &Perception,
    emotions_now: &EmotionState,
    cfg: &FadingConfig,
    rng: &mut dyn RngCore,
) -> Memory {
    let mut next = Memory::new(memory.capacity());
    for item in memory.iter() {
        let drop = rng_unit(rng) < cfg.forgetting_p;
        if !drop {
            next.push(item.clone());
        }
    }
    next.push(MemoryItem {
        kind: MemoryKind::Perception,
        day: perception.day,
        payload: alloc::format!(
            "{} ({})",
            perception.event_summary,
            counters_text(&perception.event_counters)
        ),
        salience: clamp01(perception.heat / HEAT_SCALE),
        emotions: *emotions_now,
    });
    next.push(MemoryItem {
        kind: MemoryKind::Decision,
        day: perception.day,
        payload: alloc::format!("action={}; reason={}", decision.action, decision.reason),
        salience: emotions_now.intensity(),
        emotions: *emotions_now,
    });
    next
}

/// Oracle request for the engagement forecast; used by the action engine.
pub(crate) fn engagement_request(
    agent: &GroupAgent,
    state_now: &AgentState,
    perception: &Perception,
    weight: f64,
    heated: bool,
    date: chrono::NaiveDate,
    cfg: &FadingConfig,
    world: &str,
    seed: u64,
) -> OracleRequest {
    with_current_emotions(
        base_request(
            TemplateKind::EngagementPredict,
            agent,
            perception,
            world,
            seed,
        ),
        &state_now.emotions,
    )
    .int("population", agent.population as i64)
    .num("weight", weight)
    .int("heated", i64::from(heated))
    .text("date", alloc::format!("{date}"))
    .num("forgetting_probability", cfg.forgetting_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AgentState;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn item(day: u32, salience: f64, anger: f64) -> MemoryItem {
        MemoryItem {
            kind: MemoryKind::Perception,
            day,
            payload: "p".into(),
            salience,
            emotions: EmotionState::clamped([0.0, 0.0, anger, 0.0, 0.0]),
        }
    }

    fn decision() -> ActionDecision {
        ActionDecision {
            action: ActionKind::View,
            reason: "r".into(),
            plan: alloc::vec![],
        }
    }

    fn perception(day: u32, heat: f64) -> Perception {
        Perception {
            day,
            event_summary: "School cafeteria reported spoiled pork".into(),
            domain: Domain::Education,
            country: CountryCode::new("CN").unwrap(),
            event_counters: EngagementCounts::default(),
            heat,
        }
    }

    #[test]
    fn amplitude_scales_raw_deltas() {
        let cfg = FadingConfig::default().normalized().unwrap();
        let prev = EmotionState::zero();
        let raw = EmotionState::clamped([0.0, 0.0, 0.5, 0.0, 0.0]);
        let out = clamp_emotion_change(&prev, &raw, Characteristic::Calm, &cfg);
        assert!((out.anger - 0.15).abs() < 1e-12);
    }

    #[test]
    fn fading_is_multiplicative_decay() {
        let mut cfg = FadingConfig::default();
        cfg.fading_rate.ordinary = 0.25;
        let cfg = cfg.normalized().unwrap();
        let e = EmotionState::clamped([0.8; 5]);
        let faded = apply_fading(&e, Characteristic::Ordinary, &cfg);
        assert!((faded.happiness - 0.6).abs() < 1e-12);
    }

    #[test]
    fn zero_fading_rate_is_identity() {
        let mut cfg = FadingConfig::default();
        cfg.fading_rate.calm = 0.0;
        let cfg = cfg.normalized().unwrap();
        let e = EmotionState::clamped([0.4; 5]);
        assert_eq!(apply_fading(&e, Characteristic::Calm, &cfg), e);
    }

    #[test]
    fn repeated_fading_converges_to_zero() {
        let cfg = FadingConfig::default().normalized().unwrap();
        let mut e = EmotionState::clamped([1.0; 5]);
        let mut prev = e.anger;
        for _ in 0..200 {
            e = apply_fading(&e, Characteristic::Susceptible, &cfg);
            assert!(e.anger <= prev);
            prev = e.anger;
        }
        assert!(e.anger < 1e-6);
    }

    #[test]
    fn degenerate_alpha_weights_select_inputs() {
        let memory = Memory::new(4);
        let prev = AgentState {
            emotions: EmotionState::clamped([0.4; 5]),
            day: 1,
            last_action: None,
        };
        let fresh = EmotionState::clamped([0.8; 5]);

        let keep_prev = FadingConfig {
            alpha: [1.0, 0.0, 0.0],
            ..FadingConfig::default()
        }
        .normalized()
        .unwrap();
        let s = transition_state(&prev, &fresh, &memory, &keep_prev);
        assert_eq!(s.emotions, prev.emotions);
        assert_eq!(s.day, 2);

        let keep_fresh = FadingConfig {
            alpha: [0.0, 1.0, 0.0],
            ..FadingConfig::default()
        }
        .normalized()
        .unwrap();
        let s = transition_state(&prev, &fresh, &memory, &keep_fresh);
        assert_eq!(s.emotions, fresh);
    }

    #[test]
    fn hand_computed_transition_mix() {
        // 0.5*0.4 + 0.35*0.8 + 0.15*0.2 = 0.51 on the anger channel.
        let mut memory = Memory::new(4);
        memory.push(item(1, 1.0, 0.2));
        let prev = AgentState {
            emotions: EmotionState::clamped([0.0, 0.0, 0.4, 0.0, 0.0]),
            day: 1,
            last_action: None,
        };
        let fresh = EmotionState::clamped([0.0, 0.0, 0.8, 0.0, 0.0]);
        let cfg = FadingConfig::default().normalized().unwrap();
        let s = transition_state(&prev, &fresh, &memory, &cfg);
        assert!((s.emotions.anger - 0.51).abs() < 1e-12);
    }

    #[test]
    fn memory_influence_weights_by_salience() {
        let mut memory = Memory::new(4);
        memory.push(item(1, 1.0, 0.9));
        memory.push(item(2, 3.0, 0.1)); // salience clamps to 1.0
        let m = memory_influence(&memory);
        assert!((m[2] - 0.5).abs() < 1e-12);

        let empty = Memory::new(4);
        assert_eq!(memory_influence(&empty), [0.0; 5]);
    }

    #[test]
    fn no_forgetting_keeps_everything_and_appends_two() {
        let cfg = FadingConfig {
            forgetting_p: 0.0,
            memory_capacity: 100,
            ..FadingConfig::default()
        }
        .normalized()
        .unwrap();
        let mut memory = Memory::new(100);
        for d in 1..=5 {
            memory.push(item(d, 0.5, 0.2));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let next = update_memory(
            &memory,
            &decision(),
            &perception(6, 1.0),
            &EmotionState::zero(),
            &cfg,
            &mut rng,
        );
        assert_eq!(next.len(), 7);
    }

    #[test]
    fn total_forgetting_leaves_only_the_new_items() {
        let cfg = FadingConfig {
            forgetting_p: 1.0,
            ..FadingConfig::default()
        }
        .normalized()
        .unwrap();
        let mut memory = Memory::new(16);
        for d in 1..=5 {
            memory.push(item(d, 0.5, 0.2));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let next = update_memory(
            &memory,
            &decision(),
            &perception(6, 1.0),
            &EmotionState::zero(),
            &cfg,
            &mut rng,
        );
        assert_eq!(next.len(), 2);
        let kinds: Vec<MemoryKind> = next.iter().map(|i| i.kind).collect();
        assert_eq!(
            kinds,
            alloc::vec![MemoryKind::Perception, MemoryKind::Decision]
        );
    }

    #[test]
    fn capacity_evicts_oldest_first() {
        let cfg = FadingConfig {
            forgetting_p: 0.0,
            memory_capacity: 3,
            ..FadingConfig::default()
        }
        .normalized()
        .unwrap();
        let mut memory = Memory::new(3);
        memory.push(item(1, 0.5, 0.1));
        memory.push(item(2, 0.5, 0.2));
        memory.push(item(3, 0.5, 0.3));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let next = update_memory(
            &memory,
            &decision(),
            &perception(4, 1.0),
            &EmotionState::zero(),
            &cfg,
            &mut rng,
        );
        assert_eq!(next.len(), 3);
        // Days 1 and 2 evicted; day 3 plus the two new items survive.
        assert_eq!(next.iter().next().unwrap().day, 3);
    }

    #[test]
    fn perception_is_agent_independent_and_carries_prior_counters() {
        let event = crate::model::EventRecord {
            id: "e".into(),
            title: "title".into(),
            content: "content".into(),
            domain: Domain::Education,
            country: CountryCode::new("CN").unwrap(),
            platform: crate::model::Platform::Weibo,
            start_date: chrono::NaiveDate::from_ymd_opt(2024, 1, 1).unwrap(),
            ground_truth: crate::model::GroundTruth {
                views: alloc::vec![0; 7],
                likes: alloc::vec![0; 7],
                comments: alloc::vec![0; 7],
                shares: alloc::vec![0; 7],
            },
        };
        let heat = HeatModel::Growth { initial_heat: 0.8 };
        let day1_state = EventState::start();
        let p1 = perceive(&day1_state, &event, 1, &heat);
        assert_eq!(p1.event_counters, EngagementCounts::default());
        assert_eq!(p1.heat, 0.8);

        let mut later = EventState::start();
        later.cumulative = EngagementCounts {
            views: 100,
            likes: 10,
            comments: 3,
            shares: 2,
        };
        let pa = perceive(&later, &event, 3, &heat);
        let pb = perceive(&later, &event, 3, &heat);
        assert_eq!(pa, pb);
        assert_eq!(pa.event_counters.views, 100);
    }

    #[test]
    fn sentiment_direction_from_keywords() {
        assert_eq!(
            text_sentiment("school cafeteria spoiled pork scandal"),
            -1.0
        );
        assert_eq!(
            text_sentiment("team celebrates championship victory win"),
            1.0
        );
        assert_eq!(text_sentiment("neutral bulletin"), -1.0);
    }
}
