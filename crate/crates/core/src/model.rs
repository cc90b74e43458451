//! Shared domain types: events, agents, emotion state, and tuning knobs.
//!
//! Everything here is an immutable value object; operations return new values
//! and are safe to share across threads.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::float::clamp01;
use crate::reasoning::Memory;

/// Errors raised by validation and weight computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("malformed event: field `{field}`: {reason}")]
    MalformedEvent { field: String, reason: String },
    #[error("total population is zero; cannot derive weights")]
    EmptyPopulation,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

/// Event domain, following the common newsroom taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Education,
    Politics,
    Business,
    Technology,
    Culture,
    Sports,
    Health,
    Entertainment,
    Environment,
    Economy,
}

impl Domain {
    pub const ALL: [Domain; 10] = [
        Domain::Education,
        Domain::Politics,
        Domain::Business,
        Domain::Technology,
        Domain::Culture,
        Domain::Sports,
        Domain::Health,
        Domain::Entertainment,
        Domain::Environment,
        Domain::Economy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Education => "education",
            Domain::Politics => "politics",
            Domain::Business => "business",
            Domain::Technology => "technology",
            Domain::Culture => "culture",
            Domain::Sports => "sports",
            Domain::Health => "health",
            Domain::Entertainment => "entertainment",
            Domain::Environment => "environment",
            Domain::Economy => "economy",
        }
    }

    pub fn parse(s: &str) -> Option<Domain> {
        Domain::ALL.iter().copied().find(|d| d.as_str() == s.trim())
    }
}

impl core::fmt::Display for Domain {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Source platform of an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platform {
    Twitter,
    Reddit,
    Weibo,
}

/// ISO-3166 alpha-2 country code, validated on construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CountryCode(String);

impl CountryCode {
    pub fn new(code: &str) -> Result<CountryCode, ModelError> {
        let code = code.trim();
        let ok = code.len() == 2 && code.bytes().all(|b| b.is_ascii_uppercase());
        if ok {
            Ok(CountryCode(code.to_owned()))
        } else {
            Err(ModelError::MalformedEvent {
                field: "country".to_string(),
                reason: alloc::format!("`{code}` is not an ISO-3166 alpha-2 code"),
            })
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for CountryCode {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        CountryCode::new(&value)
    }
}

impl From<CountryCode> for String {
    fn from(c: CountryCode) -> String {
        c.0
    }
}

impl core::fmt::Display for CountryCode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Number of days in every ground-truth series.
pub const GROUND_TRUTH_DAYS: usize = 7;

/// Per-action daily count series observed for a real event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub views: Vec<i64>,
    pub likes: Vec<i64>,
    pub comments: Vec<i64>,
    pub shares: Vec<i64>,
}

impl GroundTruth {
    pub fn series(&self, action: ActionKind) -> &[i64] {
        match action {
            ActionKind::View => &self.views,
            ActionKind::Like => &self.likes,
            ActionKind::Comment => &self.comments,
            ActionKind::Share => &self.shares,
            ActionKind::Predict => &[],
        }
    }

    pub fn total_views(&self) -> i64 {
        self.views.iter().sum()
    }
}

/// An online event with metadata and its 7-day engagement ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub id: String,
    pub title: String,
    pub content: String,
    pub domain: Domain,
    pub country: CountryCode,
    pub platform: Platform,
    pub start_date: NaiveDate,
    pub ground_truth: GroundTruth,
}

/// Validate an event record against its invariants and hand it back.
///
/// Idempotent: a record that validates once validates unchanged forever.
pub fn validate_event(record: EventRecord) -> Result<EventRecord, ModelError> {
    if record.id.trim().is_empty() {
        return Err(ModelError::MalformedEvent {
            field: "id".to_string(),
            reason: "empty".to_string(),
        });
    }
    let series = [
        ("views", &record.ground_truth.views),
        ("likes", &record.ground_truth.likes),
        ("comments", &record.ground_truth.comments),
        ("shares", &record.ground_truth.shares),
    ];
    for (name, values) in series {
        if values.len() != GROUND_TRUTH_DAYS {
            return Err(ModelError::MalformedEvent {
                field: name.to_string(),
                reason: alloc::format!("length {} != {}", values.len(), GROUND_TRUTH_DAYS),
            });
        }
        if values.iter().any(|&v| v < 0) {
            return Err(ModelError::MalformedEvent {
                field: name.to_string(),
                reason: "negative".to_string(),
            });
        }
    }
    Ok(record)
}

/// Emotional responsiveness class of a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Characteristic {
    Susceptible,
    Ordinary,
    Calm,
}

impl Characteristic {
    pub fn as_str(self) -> &'static str {
        match self {
            Characteristic::Susceptible => "susceptible",
            Characteristic::Ordinary => "ordinary",
            Characteristic::Calm => "calm",
        }
    }

    pub fn parse(s: &str) -> Option<Characteristic> {
        match s.trim() {
            "susceptible" => Some(Characteristic::Susceptible),
            "ordinary" => Some(Characteristic::Ordinary),
            "calm" => Some(Characteristic::Calm),
            _ => None,
        }
    }
}

impl core::fmt::Display for Characteristic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Actions an agent can take on an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    View,
    Like,
    Comment,
    Share,
    Predict,
}

impl ActionKind {
    pub const ALL: [ActionKind; 5] = [
        ActionKind::View,
        ActionKind::Like,
        ActionKind::Comment,
        ActionKind::Share,
        ActionKind::Predict,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::View => "view",
            ActionKind::Like => "like",
            ActionKind::Comment => "comment",
            ActionKind::Share => "share",
            ActionKind::Predict => "predict",
        }
    }

    pub fn parse(s: &str) -> Option<ActionKind> {
        ActionKind::ALL
            .iter()
            .copied()
            .find(|a| a.as_str() == s.trim())
    }
}

impl core::fmt::Display for ActionKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A decided action together with the agent's stated reason and updated plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDecision {
    pub action: ActionKind,
    pub reason: String,
    pub plan: Vec<ActionKind>,
}

/// Five emotion/attitude channels, each held in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionState {
    pub happiness: f64,
    pub sadness: f64,
    pub anger: f64,
    pub optimism: f64,
    pub pessimism: f64,
}

pub const EMOTION_CHANNELS: [&str; 5] = ["happiness", "sadness", "anger", "optimism", "pessimism"];

impl EmotionState {
    pub fn zero() -> EmotionState {
        EmotionState {
            happiness: 0.0,
            sadness: 0.0,
            anger: 0.0,
            optimism: 0.0,
            pessimism: 0.0,
        }
    }

    /// Construct with every channel clamped into `[0, 1]`.
    pub fn clamped(channels: [f64; 5]) -> EmotionState {
        EmotionState::from_channels(channels.map(clamp01))
    }

    pub fn from_channels(c: [f64; 5]) -> EmotionState {
        EmotionState {
            happiness: c[0],
            sadness: c[1],
            anger: c[2],
            optimism: c[3],
            pessimism: c[4],
        }
    }

    pub fn channels(&self) -> [f64; 5] {
        [
            self.happiness,
            self.sadness,
            self.anger,
            self.optimism,
            self.pessimism,
        ]
    }

    pub fn in_bounds(&self) -> bool {
        self.channels().iter().all(|&v| (0.0..=1.0).contains(&v))
    }

    /// Mean channel level; a rough activation measure used by the stub oracle.
    pub fn intensity(&self) -> f64 {
        self.channels().iter().sum::<f64>() / 5.0
    }
}

/// One node of a population hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub population: u64,
    /// Absent when the source document does not state one; later resolved
    /// through the oracle gateway.
    pub characteristic: Option<Characteristic>,
    pub layer: u32,
    pub parent: Option<String>,
}

/// Evolving per-agent state `S`: emotions/attitudes plus bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub emotions: EmotionState,
    pub day: u32,
    pub last_action: Option<ActionKind>,
}

impl AgentState {
    pub fn initial() -> AgentState {
        AgentState {
            emotions: EmotionState::zero(),
            day: 0,
            last_action: None,
        }
    }
}

/// A group agent: a population segment acting as one simulated entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAgent {
    pub id: String,
    pub description: String,
    pub country: CountryCode,
    pub population: u64,
    pub characteristic: Characteristic,
    pub state: AgentState,
    pub memory: Memory,
}

/// One value per characteristic class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerCharacteristic {
    pub susceptible: f64,
    pub ordinary: f64,
    pub calm: f64,
}

impl PerCharacteristic {
    pub fn get(&self, c: Characteristic) -> f64 {
        match c {
            Characteristic::Susceptible => self.susceptible,
            Characteristic::Ordinary => self.ordinary,
            Characteristic::Calm => self.calm,
        }
    }
}

/// Decay/forgetting parameters driving the reasoning engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FadingConfig {
    /// State-transition mix weights (previous state, fresh emotion, memory);
    /// normalized to sum 1 at load.
    pub alpha: [f64; 3],
    /// Per-day multiplicative emotion decay, by characteristic.
    pub fading_rate: PerCharacteristic,
    /// Per-day, per-item probability that a memory entry is dropped.
    pub forgetting_p: f64,
    /// Bounded memory queue size.
    pub memory_capacity: usize,
    /// Emotion fluctuation amplitude, by characteristic.
    pub amplitude: PerCharacteristic,
}

impl Default for FadingConfig {
    fn default() -> FadingConfig {
        FadingConfig {
            alpha: [0.5, 0.35, 0.15],
            fading_rate: PerCharacteristic {
                susceptible: 0.35,
                ordinary: 0.25,
                calm: 0.15,
            },
            forgetting_p: 0.2,
            memory_capacity: 16,
            amplitude: PerCharacteristic {
                susceptible: 1.0,
                ordinary: 0.6,
                calm: 0.3,
            },
        }
    }
}

impl FadingConfig {
    /// Validate ranges and normalize `alpha` so the transition mix is convex.
    pub fn normalized(mut self) -> Result<FadingConfig, ModelError> {
        if self.alpha.iter().any(|&a| a < 0.0 || !a.is_finite()) {
            return Err(ModelError::InvalidConfig(
                "alpha components must be non-negative and finite".to_string(),
            ));
        }
        let sum: f64 = self.alpha.iter().sum();
        if sum <= 0.0 {
            return Err(ModelError::InvalidConfig(
                "alpha components must not all be zero".to_string(),
            ));
        }
        for a in &mut self.alpha {
            *a /= sum;
        }
        for (name, v) in [
            ("fading_rate.susceptible", self.fading_rate.susceptible),
            ("fading_rate.ordinary", self.fading_rate.ordinary),
            ("fading_rate.calm", self.fading_rate.calm),
            ("forgetting_p", self.forgetting_p),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ModelError::InvalidConfig(alloc::format!(
                    "{name} = {v} outside [0, 1]"
                )));
            }
        }
        let amp = self.amplitude;
        for (name, v) in [
            ("amplitude.susceptible", amp.susceptible),
            ("amplitude.ordinary", amp.ordinary),
            ("amplitude.calm", amp.calm),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ModelError::InvalidConfig(alloc::format!(
                    "{name} = {v} outside (0, 1]"
                )));
            }
        }
        if !(amp.susceptible >= amp.ordinary && amp.ordinary >= amp.calm) {
            return Err(ModelError::InvalidConfig(
                "amplitude must order susceptible >= ordinary >= calm".to_string(),
            ));
        }
        if self.memory_capacity < 1 {
            return Err(ModelError::InvalidConfig(
                "memory_capacity must be >= 1".to_string(),
            ));
        }
        Ok(self)
    }
}

/// Population weight of each agent: its share of the total population.
///
/// Weights sum to 1 within 1e-12.
pub fn compute_population_weights(
    agents: &[GroupAgent],
) -> Result<BTreeMap<String, f64>, ModelError> {
    let total: u64 = agents.iter().map(|a| a.population).sum();
    if total == 0 {
        return Err(ModelError::EmptyPopulation);
    }
    let total = total as f64;
    Ok(agents
        .iter()
        .map(|a| (a.id.clone(), a.population as f64 / total))
        .collect())
}
