//! Oracle gateway: prompt templates, reply grammars, and the pluggable reply
//! source behind every emotion/decision/engagement query.
//!
//! An [`Oracle`] turns a structured [`OracleRequest`] into raw reply text.
//! Two implementations exist: the deterministic [`StubOracle`] in this crate
//! and a remote chat-completions client in the CLI crate. Replies from either
//! pass through the same strict parsers, so the stub exercises exactly the
//! code paths a live model would.

mod parse;
mod stub;
mod templates;

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub(crate) use stub::HEAT_SCALE;
pub use stub::{keyword_characteristic, StubOracle};
pub use templates::render_prompt;

use crate::model::{
    ActionDecision, ActionKind, Characteristic, CountryCode, Domain, EmotionState, EventRecord,
    GroupSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("missing template slot `{0}`")]
    MissingSlot(String),
    #[error("oracle unavailable: {0}")]
    Unavailable(String),
    #[error("unparseable reply: {0}")]
    UnparseableReply(String),
    #[error("illegal action `{0}`")]
    IllegalAction(String),
    #[error("negative count in reply: {0}")]
    NegativeCount(String),
}

/// The prompt template a request targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    GroupFind,
    GroupGenerate,
    Decision,
    EmotionUpdate,
    EngagementPredict,
    Classify,
}

/// A named slot value: text for prompt rendering, numbers for the stub.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlotValue {
    Text(String),
    Int(i64),
    Num(f64),
}

impl SlotValue {
    pub fn render(&self) -> String {
        match self {
            SlotValue::Text(s) => s.clone(),
            SlotValue::Int(i) => alloc::format!("{i}"),
            SlotValue::Num(n) => alloc::format!("{n}"),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            SlotValue::Num(n) => Some(*n),
            SlotValue::Int(i) => Some(*i as f64),
            SlotValue::Text(_) => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            SlotValue::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            SlotValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

/// A structured oracle query: template plus named context slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRequest {
    pub template: TemplateKind,
    pub context: BTreeMap<String, SlotValue>,
    pub agent_id: Option<String>,
    pub day: Option<u32>,
}

impl OracleRequest {
    pub fn new(template: TemplateKind) -> OracleRequest {
        OracleRequest {
            template,
            context: BTreeMap::new(),
            agent_id: None,
            day: None,
        }
    }

    pub fn agent(mut self, id: &str) -> Self {
        self.agent_id = Some(id.to_owned());
        self
    }

    pub fn day(mut self, day: u32) -> Self {
        self.day = Some(day);
        self
    }

    pub fn text(mut self, name: &str, value: impl Into<String>) -> Self {
        self.context
            .insert(name.to_owned(), SlotValue::Text(value.into()));
        self
    }

    pub fn int(mut self, name: &str, value: i64) -> Self {
        self.context.insert(name.to_owned(), SlotValue::Int(value));
        self
    }

    pub fn num(mut self, name: &str, value: f64) -> Self {
        self.context.insert(name.to_owned(), SlotValue::Num(value));
        self
    }

    pub fn slot_f64(&self, name: &str) -> Result<f64, OracleError> {
        self.context
            .get(name)
            .and_then(SlotValue::as_f64)
            .ok_or_else(|| OracleError::MissingSlot(name.to_owned()))
    }

    pub fn slot_i64(&self, name: &str) -> Result<i64, OracleError> {
        self.context
            .get(name)
            .and_then(SlotValue::as_i64)
            .ok_or_else(|| OracleError::MissingSlot(name.to_owned()))
    }

    pub fn slot_text(&self, name: &str) -> Result<&str, OracleError> {
        self.context
            .get(name)
            .and_then(SlotValue::as_text)
            .ok_or_else(|| OracleError::MissingSlot(name.to_owned()))
    }
}

/// Raw reply text plus the payload its grammar parsed into.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReply<T> {
    pub raw_text: String,
    pub parsed: T,
}

/// A reply source. Implementations must be deterministic for equal requests
/// (the stub) or externally sourced (the remote gateway); both return the raw
/// reply text, which the query functions parse under strict grammars.
pub trait Oracle {
    fn complete(&self, request: &OracleRequest) -> Result<String, OracleError>;
}

/// Classify an event into (domain, country).
///
/// The stub echoes the metadata hint slots; a remote oracle reads the title
/// and content.
pub fn classify_event(
    event: &EventRecord,
    oracle: &dyn Oracle,
    seed: u64,
) -> Result<OracleReply<(Domain, CountryCode)>, OracleError> {
    let request = OracleRequest::new(TemplateKind::Classify)
        .text("title", event.title.clone())
        .text("content", event.content.clone())
        .text("domain_hint", event.domain.as_str())
        .text("country_hint", event.country.as_str())
        .int("seed", seed as i64);
    let raw_text = oracle.complete(&request)?;
    let parsed = parse::classify_reply(&raw_text)?;
    Ok(OracleReply { raw_text, parsed })
}

/// Ask for updated emotions/attitudes given a perception and prior state.
pub fn query_emotion_update(
    request: &OracleRequest,
    oracle: &dyn Oracle,
) -> Result<OracleReply<EmotionState>, OracleError> {
    let raw_text = oracle.complete(request)?;
    let parsed = parse::emotion_reply(&raw_text)?;
    Ok(OracleReply { raw_text, parsed })
}

/// Ask for the next action; the reply's action must be in `available`.
pub fn query_decision(
    request: &OracleRequest,
    oracle: &dyn Oracle,
    available: &[ActionKind],
) -> Result<OracleReply<ActionDecision>, OracleError> {
    let raw_text = oracle.complete(request)?;
    let parsed = parse::decision_reply(&raw_text, available)?;
    Ok(OracleReply { raw_text, parsed })
}

/// Ask for daily engagement counts (views/likes/comments/shares).
pub fn query_engagement(
    request: &OracleRequest,
    oracle: &dyn Oracle,
) -> Result<OracleReply<(Option<NaiveDate>, [i64; 4])>, OracleError> {
    let raw_text = oracle.complete(request)?;
    let parsed = parse::engagement_reply(&raw_text)?;
    Ok(OracleReply { raw_text, parsed })
}

/// Ask for a categorical prediction over `options`.
pub fn query_prediction(
    request: &OracleRequest,
    oracle: &dyn Oracle,
    options: &[String],
) -> Result<OracleReply<crate::action::Prediction>, OracleError> {
    let raw_text = oracle.complete(request)?;
    let parsed = parse::prediction_reply(&raw_text, options)?;
    Ok(OracleReply { raw_text, parsed })
}

/// Resolve characteristics for specs that lack one, in a single query.
pub fn query_characteristics(
    specs: &[&GroupSpec],
    country: &CountryCode,
    oracle: &dyn Oracle,
    seed: u64,
) -> Result<BTreeMap<String, Characteristic>, OracleError> {
    let mut document = String::new();
    for spec in specs {
        document.push_str(&alloc::format!("- {}: {}\n", spec.name, spec.population));
    }
    let request = OracleRequest::new(TemplateKind::GroupGenerate)
        .text("document", document)
        .text("country", country.as_str())
        .int("seed", seed as i64);
    let raw_text = oracle.complete(&request)?;
    let assigned = parse::agent_blocks(&raw_text)?;
    for spec in specs {
        if !assigned.contains_key(&spec.name) {
            return Err(OracleError::UnparseableReply(alloc::format!(
                "reply omitted group `{}`",
                spec.name
            )));
        }
    }
    Ok(assigned)
}

/// Available-actions slot text, e.g. `view, like, comment, share, predict`.
pub fn actions_slot(actions: &[ActionKind]) -> String {
    let names: Vec<&str> = actions.iter().map(|a| a.as_str()).collect();
    names.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stub_classify_echoes_metadata() {
        let event = crate::model::EventRecord {
            id: "e".into(),
            title: "t".into(),
            content: "c".into(),
            domain: Domain::Education,
            country: CountryCode::new("CN").unwrap(),
            platform: crate::model::Platform::Weibo,
            start_date: NaiveDate::from_ymd_opt(2024, 1, 1).unwrap(),
            ground_truth: crate::model::GroundTruth {
                views: alloc::vec![0; 7],
                likes: alloc::vec![0; 7],
                comments: alloc::vec![0; 7],
                shares: alloc::vec![0; 7],
            },
        };
        let stub = StubOracle::default();
        let reply = classify_event(&event, &stub, 1).unwrap();
        assert_eq!(
            reply.parsed,
            (Domain::Education, CountryCode::new("CN").unwrap())
        );
    }

    #[test]
    fn stub_is_a_pure_function_of_request_and_seed() {
        let stub = StubOracle::default();
        let req = OracleRequest::new(TemplateKind::EmotionUpdate)
            .agent("Students-agents")
            .day(2)
            .num("heat", 2.0)
            .num("sentiment", -1.0)
            .num("amplitude", 1.0)
            .num("prev_happiness", 0.1)
            .num("prev_sadness", 0.2)
            .num("prev_anger", 0.3)
            .num("prev_optimism", 0.1)
            .num("prev_pessimism", 0.2)
            .int("seed", 7);
        assert_eq!(stub.complete(&req).unwrap(), stub.complete(&req).unwrap());

        let other_seed = {
            let mut r = req.clone();
            r.context.insert("seed".into(), SlotValue::Int(8));
            r
        };
        assert_ne!(
            stub.complete(&req).unwrap(),
            stub.complete(&other_seed).unwrap()
        );
    }
}
