//! Strict line-oriented reply grammars.
//!
//! Prose before and after a reply block is tolerated; the block itself is
//! not. Missing numeric fields are never silently defaulted.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDate;

use super::OracleError;
use crate::action::Prediction;
use crate::model::{ActionDecision, ActionKind, Characteristic, CountryCode, Domain, EmotionState};

fn unparseable(msg: impl Into<String>) -> OracleError {
    OracleError::UnparseableReply(msg.into())
}

/// Value of the first line whose label (after stripping `*` emphasis) matches.
fn labeled_line<'a>(text: &'a str, label: &str) -> Option<&'a str> {
    text.lines().find_map(|line| {
        let line = line
            .trim()
            .trim_start_matches('*')
            .trim_end_matches('*')
            .trim();
        line.strip_prefix(label).map(|rest| rest.trim())
    })
}

fn parse_count(raw: &str, field: &str) -> Result<i64, OracleError> {
    let cleaned: String = raw.chars().filter(|&c| c != ',' && c != '_').collect();
    let value: i64 = cleaned
        .trim()
        .parse()
        .map_err(|_| unparseable(alloc::format!("{field}: `{raw}` is not an integer")))?;
    if value < 0 {
        return Err(OracleError::NegativeCount(alloc::format!(
            "{field} = {value}"
        )));
    }
    Ok(value)
}

/// Parse `key': value` pairs out of a `{ ... }` dictionary line.
fn dict_values(line: &str, expected: &[&str], what: &str) -> Result<Vec<f64>, OracleError> {
    let open = line
        .find('{')
        .ok_or_else(|| unparseable(alloc::format!("{what}: missing `{{`")))?;
    let close = line[open..]
        .find('}')
        .map(|i| open + i)
        .ok_or_else(|| unparseable(alloc::format!("{what}: missing `}}`")))?;
    let mut found: BTreeMap<String, f64> = BTreeMap::new();
    for pair in line[open + 1..close].split(',') {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let (key, value) = pair
            .split_once(':')
            .ok_or_else(|| unparseable(alloc::format!("{what}: bad pair `{pair}`")))?;
        let key = key
            .trim()
            .trim_matches(|c| c == '\'' || c == '"')
            .to_owned();
        let value: f64 = value.trim().parse().map_err(|_| {
            unparseable(alloc::format!(
                "{what}.{key}: `{}` is not a number",
                value.trim()
            ))
        })?;
        if !(0.0..=1.0).contains(&value) {
            return Err(unparseable(alloc::format!(
                "{what}.{key} = {value} out of range [0, 1]"
            )));
        }
        found.insert(key, value);
    }
    expected
        .iter()
        .map(|&key| {
            found
                .get(key)
                .copied()
                .ok_or_else(|| unparseable(alloc::format!("{what}: missing `{key}`")))
        })
        .collect()
}

/// Table-X grammar: an `emotions:` dict line plus an `attitudes:` dict line.
pub fn emotion_reply(text: &str) -> Result<EmotionState, OracleError> {
    let emotions =
        labeled_line(text, "emotions:").ok_or_else(|| unparseable("missing `emotions:` line"))?;
    let attitudes =
        labeled_line(text, "attitudes:").ok_or_else(|| unparseable("missing `attitudes:` line"))?;
    let e = dict_values(emotions, &["happiness", "sadness", "anger"], "emotions")?;
    let a = dict_values(attitudes, &["optimism", "pessimism"], "attitudes")?;
    Ok(EmotionState {
        happiness: e[0],
        sadness: e[1],
        anger: e[2],
        optimism: a[0],
        pessimism: a[1],
    })
}

fn parse_action_name(raw: &str) -> Result<ActionKind, OracleError> {
    let name = raw.trim().trim_end_matches(['.', ',']);
    ActionKind::parse(&name.to_lowercase())
        .ok_or_else(|| OracleError::IllegalAction(name.to_owned()))
}

/// Table-IX grammar: `Action:` / `Reason:` / `Updated plan:` lines.
pub fn decision_reply(text: &str, available: &[ActionKind]) -> Result<ActionDecision, OracleError> {
    let action_raw =
        labeled_line(text, "Action:").ok_or_else(|| unparseable("missing `Action:` line"))?;
    let action = parse_action_name(action_raw)?;
    if !available.contains(&action) {
        return Err(OracleError::IllegalAction(action.as_str().to_owned()));
    }
    let reason = labeled_line(text, "Reason:")
        .ok_or_else(|| unparseable("missing `Reason:` line"))?
        .to_owned();

    // The plan may sit on the `Updated plan:` line itself or continue on
    // numbered lines below it.
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    let plan_idx = lines
        .iter()
        .position(|l| {
            l.trim_start_matches('*')
                .trim()
                .starts_with("Updated plan:")
        })
        .ok_or_else(|| unparseable("missing `Updated plan:` line"))?;
    let mut plan_text = lines[plan_idx]
        .trim_start_matches('*')
        .trim()
        .trim_start_matches("Updated plan:")
        .to_owned();
    for line in &lines[plan_idx + 1..] {
        let starts_numbered = line.chars().next().is_some_and(|c| c.is_ascii_digit());
        if starts_numbered {
            plan_text.push(' ');
            plan_text.push_str(line);
        } else {
            break;
        }
    }
    let mut plan = Vec::new();
    let mut expect_name = false;
    for token in plan_text.split_whitespace() {
        let bare = token.trim_end_matches(['.', ')']);
        let is_ordinal = !bare.is_empty() && bare.chars().all(|c| c.is_ascii_digit());
        if is_ordinal {
            expect_name = true;
        } else if expect_name {
            plan.push(parse_action_name(token)?);
            expect_name = false;
        }
    }
    Ok(ActionDecision {
        action,
        reason,
        plan,
    })
}

/// Table-XI grammar: optional `Date:` plus required count lines.
pub fn engagement_reply(text: &str) -> Result<(Option<NaiveDate>, [i64; 4]), OracleError> {
    let date = match labeled_line(text, "Date:") {
        Some(raw) => Some(
            NaiveDate::parse_from_str(raw, "%Y-%m-%d")
                .map_err(|_| unparseable(alloc::format!("Date: `{raw}` is not YYYY-MM-DD")))?,
        ),
        None => None,
    };
    let mut counts = [0i64; 4];
    for (slot, label) in ["Views:", "Likes:", "Comments:", "Shares:"]
        .iter()
        .enumerate()
    {
        let raw = labeled_line(text, label)
            .ok_or_else(|| unparseable(alloc::format!("missing `{label}` line")))?;
        counts[slot] = parse_count(raw, label.trim_end_matches(':'))?;
    }
    Ok((date, counts))
}

/// `Domain:` / `Country:` classification lines.
pub fn classify_reply(text: &str) -> Result<(Domain, CountryCode), OracleError> {
    let domain_raw =
        labeled_line(text, "Domain:").ok_or_else(|| unparseable("missing `Domain:` line"))?;
    let domain = Domain::parse(&domain_raw.to_lowercase())
        .ok_or_else(|| unparseable(alloc::format!("unknown domain `{domain_raw}`")))?;
    let country_raw =
        labeled_line(text, "Country:").ok_or_else(|| unparseable("missing `Country:` line"))?;
    let country = CountryCode::new(country_raw).map_err(|e| unparseable(e.to_string()))?;
    Ok((domain, country))
}

/// `Option:` / `Confidence:` categorical-prediction lines.
pub fn prediction_reply(text: &str, options: &[String]) -> Result<Prediction, OracleError> {
    let option = labeled_line(text, "Option:")
        .ok_or_else(|| unparseable("missing `Option:` line"))?
        .to_owned();
    if !options.iter().any(|o| o == &option) {
        return Err(unparseable(alloc::format!(
            "option `{option}` not in the option set"
        )));
    }
    let confidence_raw = labeled_line(text, "Confidence:")
        .ok_or_else(|| unparseable("missing `Confidence:` line"))?;
    let confidence: f64 = confidence_raw.parse().map_err(|_| {
        unparseable(alloc::format!(
            "Confidence: `{confidence_raw}` is not a number"
        ))
    })?;
    if !(0.0..=1.0).contains(&confidence) {
        return Err(unparseable(alloc::format!(
            "confidence {confidence} out of range [0, 1]"
        )));
    }
    Ok(Prediction { option, confidence })
}

/// Table-VIII answer format: `id:`/`characteristic:` pairs per agent block.
pub fn agent_blocks(text: &str) -> Result<BTreeMap<String, Characteristic>, OracleError> {
    let mut out = BTreeMap::new();
    let mut current: Option<String> = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(id) = line.strip_prefix("id:") {
            let id = id.trim();
            let group = id.strip_suffix("-agents").unwrap_or(id);
            current = Some(group.to_owned());
        } else if let Some(raw) = line.strip_prefix("characteristic:") {
            let group = current
                .take()
                .ok_or_else(|| unparseable("characteristic line before any id"))?;
            let word = raw
                .split_whitespace()
                .next()
                .ok_or_else(|| unparseable("empty characteristic"))?;
            let characteristic = Characteristic::parse(word)
                .ok_or_else(|| unparseable(alloc::format!("unknown characteristic `{word}`")))?;
            out.insert(group, characteristic);
        }
    }
    if out.is_empty() {
        return Err(unparseable("no agent blocks found"));
    }
    Ok(out)
}
