//! Deterministic rule-based oracle.
//!
//! Replies are a pure function of (template, context, seed): the run seed
//! travels in the request context, and all jitter comes from hashed keys, so
//! identical requests always produce identical reply text. Replies are
//! emitted in the same grammars a remote model uses and go through the same
//! parsers.

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::{Oracle, OracleError, OracleRequest, TemplateKind};
use crate::float::clamp01;
use crate::hashing::{jitter, stream_key, unit_f64};
use crate::model::{ActionKind, Characteristic};

/// Nominal peak of the heat scale; heats are normalized against it.
pub(crate) const HEAT_SCALE: f64 = 3.0;

/// Fraction of a group that views the event at unit heat.
pub(crate) const VIEW_RATE: f64 = 0.15;
const LIKE_PER_VIEW: f64 = 0.07;
const COMMENT_PER_LIKE: f64 = 0.45;
const SHARE_PER_LIKE: f64 = 0.35;
const HEATED_COMMENT_PER_LIKE: f64 = 1.5;
const HEATED_SHARE_PER_LIKE: f64 = 1.1;

/// First-match keyword table assigning a characteristic to a group name.
///
/// Calibrated against the education-domain hierarchy; anything unmatched
/// falls back to `ordinary`.
const KEYWORD_TABLE: &[(&str, Characteristic)] = &[
    ("affiliated", Characteristic::Ordinary),
    ("staff", Characteristic::Ordinary),
    ("worker", Characteristic::Ordinary),
    ("agency", Characteristic::Ordinary),
    ("master", Characteristic::Ordinary),
    ("postgraduate", Characteristic::Calm),
    ("undergraduate", Characteristic::Susceptible),
    ("student", Characteristic::Susceptible),
    ("bachelor", Characteristic::Susceptible),
    ("vocation", Characteristic::Susceptible),
    ("normal", Characteristic::Susceptible),
    ("short-cycle", Characteristic::Susceptible),
    ("youth", Characteristic::Susceptible),
    ("fan", Characteristic::Susceptible),
    ("teacher", Characteristic::Calm),
    ("doctor", Characteristic::Calm),
    ("researcher", Characteristic::Calm),
    ("retiree", Characteristic::Calm),
    ("mentor", Characteristic::Calm),
    ("personnel", Characteristic::Calm),
    ("expert", Characteristic::Calm),
    ("official", Characteristic::Calm),
];

/// Deterministic characteristic for a group name.
pub fn keyword_characteristic(name: &str) -> Characteristic {
    let lower = name.to_lowercase();
    for (keyword, characteristic) in KEYWORD_TABLE {
        if lower.contains(keyword) {
            return *characteristic;
        }
    }
    Characteristic::Ordinary
}

/// Rule-based oracle with a bounded multiplicative jitter.
#[derive(Debug, Clone)]
pub struct StubOracle {
    /// Relative jitter bound applied to stub magnitudes, e.g. 0.05 for ±5 %.
    pub jitter: f64,
}

impl Default for StubOracle {
    fn default() -> StubOracle {
        StubOracle { jitter: 0.05 }
    }
}

impl StubOracle {
    pub fn new(jitter: f64) -> StubOracle {
        StubOracle { jitter }
    }

    fn key(&self, request: &OracleRequest, tag: &str) -> u64 {
        let seed = request
            .context
            .get("seed")
            .and_then(super::SlotValue::as_i64)
            .unwrap_or(0) as u64;
        let agent = request.agent_id.as_deref().unwrap_or("");
        let day = u64::from(request.day.unwrap_or(0));
        stream_key(seed, tag, agent, day)
    }

    fn emotion_reply(&self, request: &OracleRequest) -> Result<String, OracleError> {
        let heat = request.slot_f64("heat")?;
        let sentiment = request.slot_f64("sentiment")?;
        let amplitude = request.slot_f64("amplitude")?;
        let day = f64::from(request.day.unwrap_or(1).max(1));
        let prev = [
            request.slot_f64("prev_happiness")?,
            request.slot_f64("prev_sadness")?,
            request.slot_f64("prev_anger")?,
            request.slot_f64("prev_optimism")?,
            request.slot_f64("prev_pessimism")?,
        ];

        // Rising channels depend on the event's sentiment direction; the
        // remaining channels ease toward zero.
        let rising: [bool; 5] = if sentiment >= 0.0 {
            [true, false, false, true, false]
        } else {
            [false, true, true, false, true]
        };
        let heat_norm = (heat / HEAT_SCALE).min(1.0).max(0.0);
        let day_decay = 1.0 / (1.0 + 0.3 * (day - 1.0));

        let names = ["happiness", "sadness", "anger", "optimism", "pessimism"];
        let mut next = [0.0f64; 5];
        for i in 0..5 {
            let jit = 1.0 + jitter(self.key(request, names[i]), self.jitter);
            let k = clamp01(amplitude * heat_norm * day_decay * jit);
            next[i] = if rising[i] {
                clamp01(prev[i] + k * (1.0 - prev[i]))
            } else {
                clamp01(prev[i] - 0.5 * k * prev[i])
            };
        }

        Ok(alloc::format!(
            "emotions: {{ 'happiness': {}, 'sadness': {}, 'anger': {} }}\nattitudes: {{ 'optimism': {}, 'pessimism': {} }}",
            next[0], next[1], next[2], next[3], next[4]
        ))
    }

    fn decision_reply(&self, request: &OracleRequest) -> Result<String, OracleError> {
        let available: Vec<ActionKind> = request
            .slot_text("available_actions")?
            .split(',')
            .filter_map(ActionKind::parse)
            .collect();
        if available.is_empty() {
            return Err(OracleError::Unavailable(
                "no available actions supplied".to_owned(),
            ));
        }
        let day = request.day.unwrap_or(1);
        let heat = request.slot_f64("heat").unwrap_or(0.0);
        let happiness = request.slot_f64("cur_happiness").unwrap_or(0.0);
        let sadness = request.slot_f64("cur_sadness").unwrap_or(0.0);
        let anger = request.slot_f64("cur_anger").unwrap_or(0.0);
        let optimism = request.slot_f64("cur_optimism").unwrap_or(0.0);
        let pessimism = request.slot_f64("cur_pessimism").unwrap_or(0.0);

        // Viewing is the primary action whenever it is on the table.
        let action = if available.contains(&ActionKind::View) {
            ActionKind::View
        } else if available.contains(&ActionKind::Predict) {
            ActionKind::Predict
        } else {
            available[0]
        };

        let mut plan: Vec<ActionKind> = Vec::new();
        if happiness >= 0.5 || optimism >= 0.5 {
            plan.push(ActionKind::Like);
        }
        if anger >= 0.6 || sadness >= 0.6 {
            plan.push(ActionKind::Comment);
        }
        let intensity = (happiness + sadness + anger + optimism + pessimism) / 5.0;
        if heat >= 1.5 && intensity >= 0.3 {
            plan.push(ActionKind::Share);
        }
        plan.retain(|a| available.contains(a) && *a != action);

        let reason = if day == 1 {
            "first exposure to the event"
        } else if anger >= 0.6 {
            "strong anger keeps the group engaged with the discussion"
        } else if heat >= 1.5 {
            "the event is still drawing heavy attention"
        } else {
            "interest is fading but the group keeps following the event"
        };

        let mut text = alloc::format!("Action: {action}\nReason: {reason}\nUpdated plan:");
        for (i, a) in plan.iter().enumerate() {
            let _ = write!(text, " {}. {}", i + 1, a);
        }
        Ok(text)
    }

    fn engagement_reply(&self, request: &OracleRequest) -> Result<String, OracleError> {
        let population = request.slot_i64("population")?.max(0) as f64;
        let heat = request.slot_f64("heat")?;
        let heated = request.slot_i64("heated").unwrap_or(0) != 0;
        let date = request.slot_text("date")?;
        let intensity = [
            request.slot_f64("cur_happiness")?,
            request.slot_f64("cur_sadness")?,
            request.slot_f64("cur_anger")?,
            request.slot_f64("cur_optimism")?,
            request.slot_f64("cur_pessimism")?,
        ]
        .iter()
        .sum::<f64>()
            / 5.0;

        let jit = |tag: &str| 1.0 + jitter(self.key(request, tag), self.jitter);
        let views_f = population * VIEW_RATE * heat * (1.0 + 0.1 * intensity) * jit("views");
        let views_f = views_f.min(population).max(0.0);
        let likes_f = views_f * LIKE_PER_VIEW * jit("likes");
        let (comment_rate, share_rate) = if heated {
            (HEATED_COMMENT_PER_LIKE, HEATED_SHARE_PER_LIKE)
        } else {
            (COMMENT_PER_LIKE, SHARE_PER_LIKE)
        };
        let comments_f = likes_f * comment_rate * jit("comments");
        let shares_f = likes_f * share_rate * jit("shares");

        let floor = |x: f64| crate::float::floor(x.max(0.0)) as i64;
        Ok(alloc::format!(
            "Date: {date}\nViews: {}\nLikes: {}\nComments: {}\nShares: {}",
            floor(views_f),
            floor(likes_f),
            floor(comments_f),
            floor(shares_f)
        ))
    }

    fn classify_reply(&self, request: &OracleRequest) -> Result<String, OracleError> {
        if request.context.contains_key("options") {
            return self.prediction_reply(request);
        }
        let domain = request.slot_text("domain_hint")?;
        let country = request.slot_text("country_hint")?;
        Ok(alloc::format!("Domain: {domain}\nCountry: {country}"))
    }

    fn prediction_reply(&self, request: &OracleRequest) -> Result<String, OracleError> {
        let options = request.slot_text("options")?;
        let optimism = request.slot_f64("cur_optimism").unwrap_or(0.0);
        let pessimism = request.slot_f64("cur_pessimism").unwrap_or(0.0);
        let mut best: Option<(f64, &str)> = None;
        for option in options.split('|').map(str::trim).filter(|s| !s.is_empty()) {
            let seed = request
                .context
                .get("seed")
                .and_then(super::SlotValue::as_i64)
                .unwrap_or(0) as u64;
            let agent = request.agent_id.as_deref().unwrap_or("");
            let score = unit_f64(stream_key(
                seed,
                "predict-option",
                &alloc::format!("{agent}|{option}"),
                u64::from(request.day.unwrap_or(0)),
            ));
            // Strict greater-than keeps the earliest (document-order) option
            // on exact ties.
            if best.map(|(s, _)| score > s).unwrap_or(true) {
                best = Some((score, option));
            }
        }
        let (_, choice) =
            best.ok_or_else(|| OracleError::Unavailable("empty option set".to_owned()))?;
        let confidence = clamp01(
            0.5 + 0.3 * crate::float::abs(optimism - pessimism)
                + 0.2 * unit_f64(self.key(request, "predict-confidence")),
        );
        Ok(alloc::format!("Option: {choice}\nConfidence: {confidence}"))
    }

    fn group_generate_reply(&self, request: &OracleRequest) -> Result<String, OracleError> {
        let document = request.slot_text("document")?;
        let mut out = String::new();
        let mut n = 0usize;
        for line in document.lines() {
            let line = line.trim().trim_start_matches('-').trim();
            let Some((name, _population)) = line.rsplit_once(':') else {
                continue;
            };
            let name = name.trim();
            if name.is_empty() {
                continue;
            }
            n += 1;
            let _ = writeln!(out, "agent {n}:");
            let _ = writeln!(out, "id: {name}-agents");
            let _ = writeln!(out, "characteristic: {}", keyword_characteristic(name));
        }
        if n == 0 {
            return Err(OracleError::UnparseableReply(
                "document contained no groups".to_owned(),
            ));
        }
        Ok(out)
    }
}

impl Oracle for StubOracle {
    fn complete(&self, request: &OracleRequest) -> Result<String, OracleError> {
        match request.template {
            TemplateKind::EmotionUpdate => self.emotion_reply(request),
            TemplateKind::Decision => self.decision_reply(request),
            TemplateKind::EngagementPredict => self.engagement_reply(request),
            TemplateKind::Classify => self.classify_reply(request),
            TemplateKind::GroupGenerate => self.group_generate_reply(request),
            TemplateKind::GroupFind => Err(OracleError::Unavailable(
                "the stub oracle does not retrieve group documents; supply one as a file or use remote mode".to_owned(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::parse;

    #[test]
    fn keyword_table_matches_the_education_hierarchy() {
        let cases = [
            ("Students", Characteristic::Susceptible),
            ("Postgraduates", Characteristic::Calm),
            ("Doctor", Characteristic::Calm),
            ("Master", Characteristic::Ordinary),
            ("Undergraduates", Characteristic::Susceptible),
            ("Bachelor", Characteristic::Susceptible),
            ("Vocational Undergraduate", Characteristic::Susceptible),
            ("Normal", Characteristic::Susceptible),
            ("Short-cycle", Characteristic::Susceptible),
            ("Teachers", Characteristic::Calm),
            ("Educational Personnel", Characteristic::Calm),
            ("Full-time-Teachers", Characteristic::Calm),
            ("Administrative-Personnel", Characteristic::Calm),
            ("Supporting-Staff", Characteristic::Ordinary),
            ("Workers", Characteristic::Ordinary),
            ("Full-time-Researchers", Characteristic::Calm),
            ("Other-Agency", Characteristic::Ordinary),
            ("Others Teachers", Characteristic::Calm),
            ("Part-time-Teachers", Characteristic::Calm),
            ("Industry-Mentor", Characteristic::Calm),
            ("Foreign-Teachers", Characteristic::Calm),
            ("Retirees", Characteristic::Calm),
            ("Affiliated-Teachers", Characteristic::Ordinary),
        ];
        for (name, expected) in cases {
            assert_eq!(keyword_characteristic(name), expected, "group `{name}`");
        }
    }

    fn emotion_request(heat: f64, amplitude: f64, prev: [f64; 5]) -> OracleRequest {
        OracleRequest::new(TemplateKind::EmotionUpdate)
            .agent("Students-agents")
            .day(1)
            .num("heat", heat)
            .num("sentiment", -1.0)
            .num("amplitude", amplitude)
            .num("prev_happiness", prev[0])
            .num("prev_sadness", prev[1])
            .num("prev_anger", prev[2])
            .num("prev_optimism", prev[3])
            .num("prev_pessimism", prev[4])
            .int("seed", 11)
    }

    #[test]
    fn zero_heat_leaves_emotions_unchanged() {
        let stub = StubOracle::default();
        let prev = [0.3, 0.4, 0.5, 0.2, 0.1];
        let text = stub.complete(&emotion_request(0.0, 1.0, prev)).unwrap();
        let e = parse::emotion_reply(&text).unwrap();
        assert_eq!(e.channels(), prev);
    }

    #[test]
    fn stub_emotions_stay_in_bounds_and_scale_with_amplitude() {
        let stub = StubOracle::default();
        let prev = [0.0; 5];
        let high = parse::emotion_reply(&stub.complete(&emotion_request(3.0, 1.0, prev)).unwrap())
            .unwrap();
        let low = parse::emotion_reply(&stub.complete(&emotion_request(3.0, 0.3, prev)).unwrap())
            .unwrap();
        assert!(high.in_bounds() && low.in_bounds());
        assert!(high.anger > low.anger);
        assert!(high.sadness > low.sadness);
    }

    #[test]
    fn day_one_neutral_decision_is_view() {
        let stub = StubOracle::default();
        let req = OracleRequest::new(TemplateKind::Decision)
            .agent("a")
            .day(1)
            .text("available_actions", "view, like, comment, share, predict")
            .num("heat", 1.0)
            .int("seed", 1);
        let text = stub.complete(&req).unwrap();
        let d = parse::decision_reply(&text, &ActionKind::ALL).unwrap();
        assert_eq!(d.action, ActionKind::View);
    }

    #[test]
    fn high_anger_puts_comment_in_the_plan() {
        let stub = StubOracle::default();
        let req = OracleRequest::new(TemplateKind::Decision)
            .agent("a")
            .day(2)
            .text("available_actions", "view, like, comment, share, predict")
            .num("heat", 1.0)
            .num("cur_anger", 0.7)
            .int("seed", 1);
        let text = stub.complete(&req).unwrap();
        let d = parse::decision_reply(&text, &ActionKind::ALL).unwrap();
        assert!(d.plan.contains(&ActionKind::Comment), "plan: {:?}", d.plan);
    }

    #[test]
    fn singleton_predict_set_yields_predict() {
        let stub = StubOracle::default();
        let req = OracleRequest::new(TemplateKind::Decision)
            .agent("a")
            .day(1)
            .text("available_actions", "predict")
            .int("seed", 1);
        let text = stub.complete(&req).unwrap();
        let d = parse::decision_reply(&text, &[ActionKind::Predict]).unwrap();
        assert_eq!(d.action, ActionKind::Predict);
    }

    fn engagement_request(population: i64, heat: f64) -> OracleRequest {
        OracleRequest::new(TemplateKind::EngagementPredict)
            .agent("Students-agents")
            .day(2)
            .int("population", population)
            .num("heat", heat)
            .int("heated", 0)
            .text("date", "2024-03-13")
            .num("forgetting_probability", 0.2)
            .num("cur_happiness", 0.1)
            .num("cur_sadness", 0.5)
            .num("cur_anger", 0.4)
            .num("cur_optimism", 0.1)
            .num("cur_pessimism", 0.4)
            .int("seed", 3)
    }

    #[test]
    fn zero_population_means_zero_engagement() {
        let stub = StubOracle::default();
        let text = stub.complete(&engagement_request(0, 3.0)).unwrap();
        let (_, counts) = parse::engagement_reply(&text).unwrap();
        assert_eq!(counts, [0, 0, 0, 0]);
    }

    #[test]
    fn stub_engagement_respects_the_ordering_laws() {
        let stub = StubOracle::default();
        for pop in [100i64, 10_000, 58_030_769] {
            for heat in [0.2, 1.0, 3.0] {
                let text = stub.complete(&engagement_request(pop, heat)).unwrap();
                let (_, [views, likes, comments, shares]) = parse::engagement_reply(&text).unwrap();
                assert!(views <= pop);
                assert!(views >= 10 * likes, "views {views} likes {likes}");
                assert!(likes >= comments);
                assert!(likes >= shares);
            }
        }
    }
}
