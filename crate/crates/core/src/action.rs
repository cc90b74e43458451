//! Actions: turning decisions into daily engagement numbers, folding them
//! into the shared event state, and the categorical predict action.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::float::clamp01;
use crate::model::{AgentState, FadingConfig, GroupAgent};
use crate::oracle::{self, Oracle, OracleError};
use crate::reasoning::{EngagementCounts, Perception};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("engagements span multiple dates: {0} and {1}")]
    MixedDates(NaiveDate, NaiveDate),
    #[error("prediction requires a non-empty option set")]
    NoOptions,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One agent's action counts for one day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyEngagement {
    pub date: NaiveDate,
    pub views: u64,
    pub likes: u64,
    pub comments: u64,
    pub shares: u64,
}

impl DailyEngagement {
    pub fn counts(&self) -> EngagementCounts {
        EngagementCounts {
            views: self.views,
            likes: self.likes,
            comments: self.comments,
            shares: self.shares,
        }
    }
}

/// The shared event object: cumulative counters plus per-day totals.
///
/// Cumulative counters always equal the element-wise sum of the history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventState {
    pub cumulative: EngagementCounts,
    pub history: Vec<DailyEngagement>,
    /// The next day to be simulated (1-based).
    pub day: u32,
}

impl EventState {
    pub fn start() -> EventState {
        EventState {
            cumulative: EngagementCounts::default(),
            history: Vec::new(),
            day: 1,
        }
    }
}

/// An agent's categorical prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub option: String,
    pub confidence: f64,
}

/// Aggregated prediction support and the winning option.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionOutcome {
    pub support: BTreeMap<String, f64>,
    pub winner: String,
}

/// Clamp an oracle engagement forecast to the ordering laws.
///
/// Views never exceed the group population and stay at least an order of
/// magnitude above likes; outside heated discussions, likes bound comments
/// and shares. Violations are repaired downward and logged rather than
/// re-queried.
pub fn enforce_engagement_laws(
    raw: [i64; 4],
    population: u64,
    heated: bool,
    date: NaiveDate,
) -> DailyEngagement {
    let [views_raw, likes_raw, comments_raw, shares_raw] = raw.map(|v| v.max(0) as u64);
    let views = if views_raw > population {
        log::warn!("oracle forecast {views_raw} views exceeds population {population}; clamping");
        population
    } else {
        views_raw
    };
    let likes = likes_raw.min(views / 10);
    if likes < likes_raw {
        log::debug!("likes clamped to views/10 ({likes_raw} -> {likes})");
    }
    let (comments, shares) = if heated {
        (comments_raw, shares_raw)
    } else {
        (comments_raw.min(likes), shares_raw.min(likes))
    };
    DailyEngagement {
        date,
        views,
        likes,
        comments,
        shares,
    }
}

/// Query the oracle for the day's engagement and normalize it to the laws.
#[allow(clippy::too_many_arguments)]
pub fn generate_engagement(
    agent: &GroupAgent,
    state_now: &AgentState,
    perception: &Perception,
    weight: f64,
    oracle: &dyn Oracle,
    heated: bool,
    date: NaiveDate,
    cfg: &FadingConfig,
    world: &str,
    seed: u64,
) -> Result<DailyEngagement, ActionError> {
    let request = crate::reasoning::engagement_request(
        agent, state_now, perception, weight, heated, date, cfg, world, seed,
    );
    let reply = oracle::query_engagement(&request, oracle)?;
    let (_reply_date, counts) = reply.parsed;
    Ok(enforce_engagement_laws(
        counts,
        agent.population,
        heated,
        date,
    ))
}

/// Fold one day of engagements into the event state.
///
/// All engagements must carry the same date. The day total is appended to the
/// history (as a zero row for an empty day) and the day counter advances.
pub fn aggregate_event_state(
    prev: &EventState,
    engagements: &[DailyEngagement],
    date: NaiveDate,
) -> Result<EventState, ActionError> {
    for pair in engagements.windows(2) {
        if pair[0].date != pair[1].date {
            return Err(ActionError::MixedDates(pair[0].date, pair[1].date));
        }
    }
    if let Some(first) = engagements.first() {
        if first.date != date {
            return Err(ActionError::MixedDates(first.date, date));
        }
    }
    let mut total = DailyEngagement {
        date,
        views: 0,
        likes: 0,
        comments: 0,
        shares: 0,
    };
    for e in engagements {
        total.views += e.views;
        total.likes += e.likes;
        total.comments += e.comments;
        total.shares += e.shares;
    }
    let mut next = prev.clone();
    next.cumulative.views += total.views;
    next.cumulative.likes += total.likes;
    next.cumulative.comments += total.comments;
    next.cumulative.shares += total.shares;
    next.history.push(total);
    next.day += 1;
    Ok(next)
}

/// Resolve each agent's predict action into an (option, confidence) vote.
pub fn resolve_predictions(
    agents: &[GroupAgent],
    states: &[AgentState],
    options: &[String],
    perception: &Perception,
    oracle: &dyn Oracle,
    world: &str,
    seed: u64,
) -> Result<Vec<(String, Prediction)>, ActionError> {
    if options.is_empty() {
        return Err(ActionError::NoOptions);
    }
    let options_slot = options.join(" | ");
    agents
        .iter()
        .zip(states)
        .map(|(agent, state)| {
            let request = crate::reasoning::base_request(
                crate::oracle::TemplateKind::Classify,
                agent,
                perception,
                world,
                seed,
            )
            .text("options", options_slot.clone())
            .num("cur_optimism", state.emotions.optimism)
            .num("cur_pessimism", state.emotions.pessimism);
            let reply = oracle::query_prediction(&request, oracle, options)?;
            Ok((agent.id.clone(), reply.parsed))
        })
        .collect()
}

/// Aggregate votes into normalized support shares and a winner.
///
/// `support(option)` is the weight-times-confidence mass of the agents that
/// chose it, normalized over all options. Ties break to the lexicographically
/// smaller option, and the winner is invariant under positive rescaling of
/// all weights.
pub fn predict_outcome(
    votes: &[(String, Prediction)],
    weights: &BTreeMap<String, f64>,
    options: &[String],
) -> Result<PredictionOutcome, ActionError> {
    if options.is_empty() {
        return Err(ActionError::NoOptions);
    }
    let mut support: BTreeMap<String, f64> = options.iter().map(|o| (o.clone(), 0.0)).collect();
    let mut total = 0.0f64;
    for (agent_id, vote) in votes {
        let weight = weights.get(agent_id).copied().unwrap_or(0.0);
        let mass = weight * clamp01(vote.confidence);
        if let Some(slot) = support.get_mut(&vote.option) {
            *slot += mass;
            total += mass;
        }
    }
    if total > 0.0 {
        for v in support.values_mut() {
            *v /= total;
        }
    }
    // BTreeMap iterates in lexicographic order, so strict `>` keeps the
    // smaller option on ties.
    let winner = support
        .iter()
        .fold(None::<(&String, f64)>, |best, (option, &s)| match best {
            Some((_, bs)) if s <= bs => best,
            _ => Some((option, s)),
        })
        .map(|(option, _)| option.clone())
        .unwrap_or_else(|| options[0].clone());
    Ok(PredictionOutcome { support, winner })
}
