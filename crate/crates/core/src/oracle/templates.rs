//! Prompt template bodies and the slot renderer.
//!
//! Placeholders are written `{slot_name}`. Rendering substitutes only the
//! slots a template declares; any other braced text (for example the literal
//! answer-format lines such as `Action: {Action name}`) is left untouched for
//! the model to fill in.

use alloc::borrow::ToOwned;
use alloc::string::String;

use super::{OracleError, OracleRequest, TemplateKind};

const GROUP_FIND: &str = "Instructions:
You are an AI assistant specializing in generating hierarchical population group structures based on the provided country and domain. Use the given context to create a detailed tree-structured hierarchy that includes group names and corresponding numbers at each level.
Domain: {domain}      Country: {country}
Your task is to generate a multi-level hierarchy for population groups, adjusting the structure based on the country and domain. Use the following format:
  - First Layer (Domain-level Groups, denoted by ##): Broad categories representing the major population groups of the domain in the given field.
  - Second Layer (Subgroups, denoted by 1. ** **): Specific subdivisions of each first-layer group.
  - Third Layer (Detailed Breakdown, denoted by -): Granular breakdowns within each subgroup.
Example:
For Country: CN (China) and Field: Education, a branch of the tree structure should be like this:
## Students: 58,030,769
  1. **Postgraduates: 3,653,613**
    - Doctor: 556,065
    - Master: 3,097,548
  2. **Undergraduates: 19,656,436**
    - Bachelor: 19,656,436
  3. **Vocational Undergraduate: 34,720,720**
    - Normal: 8,926,980
    - Short-cycle: 25,794,740
";

const GROUP_GENERATE: &str = "Instructions:
You are an AI assistant tasked with generating group agents and your process is as follows:
1. Identify and list all groups mentioned in the document.
2. Based on the identified groups and their associated templates, generate an agent for each group, ensuring no duplicates and that all groups are generative.
Answer Format:
  agent {n}: (nth agent)
  id: {group}-agents
  description: Representing {number} {country_name} {group}, reflecting their emotions, attitudes, and possible actions in response to the news.
  characteristic: {susceptible/ordinary/calm} population
3. Follow the template below strictly, filling in the {group}, {number}, and {country_name} fields based on the contextual input.
Country: {country}
Document:
{document}
";

const DECISION: &str = "System:
You are {agent_name}, {agent_description}.
You are in the social network world: {world_description}.
perception:
  - Time: {day_n}
  - Event State: {event_state}
Your State:
  - Previous Memory: {memory}
  - Previous State: {previous_state}
  - Current Emotion: {emotions}
  - Current Attitude: {attitudes}
Action Options:
You can choose from the following available actions: {available_actions}

Instructions:
1. Use decision-making reasoning to choose your actions based on factors such as perception and your status. This action must be one of the available actions based on the previous context. Also, explain why.
2. Answers must follow the following format:
  Action: {Action name}
  Reason: {reason}
  Updated plan: {List available actions with serial numbers}
";

const EMOTION_UPDATE: &str = "System:
You are {agent_name}, {agent_description}.
You are in the social network world: {world_description}.
perception:
  - Time: {day_n}
  - Event State: {event_state}
Your State:
  - Previous Memory: {memory}
  - Previous State: {previous_state}
  - Emotion Fading: {emotion_fading}

Instructions:
1. Update your emotions and attitudes: Update your emotions and attitudes based on your perception and status, taking into account the current time and emotion fading.
2. Event cycle pattern: In a typical event cycle, emotions will initially surge, then quickly decline, and eventually stabilize. Some explosive events may have a second emotional peak. Attitudes tend to follow a similar pattern.
3. Response Template:
  emotions: { 'happiness': (), 'sadness': (), 'anger': () }
  attitudes: { 'optimism': (), 'pessimism': () }
";

const ENGAGEMENT_PREDICT: &str = "System:
You are {agent_name}, {agent_description}.
You are in the social network world: {world_description}.
perception:
  - Time: {day_n}
  - Date: {date}
  - Event State: {event_state}
Your State:
  - Previous Memory: {memory}
  - Previous State: {previous_state}
  - Forgetting Probability: {forgetting_probability}
  - Current Emotion: {emotions}
  - Current Attitude: {attitudes}

Instructions:
Task: Predict daily engagement metrics
1. Daily reading forecast:
  - Based on your perception and status, consider the popularity of the event, the current date, and the forgetting probability, and estimate how many people in your group have viewed the event.
2. General engagement pattern:
  - Views:
    - Must be at least one order of magnitude higher than likes.
    - Due to the forgetfulness effect, views gradually diminish over time, and explosive events may have a second peak of views, but less than the first peak of views.
  - Likes, comments, and shares:
    - Likes usually exceed comments and shares.
    - For news that sparks heated discussions, comments or shares may exceed likes.
3. Forecast format:
  Date: YYYY-MM-DD
  Views: {predicted_views}
  Likes: {predicted_likes}
  Comments: {predicted_comments}
  Shares: {predicted_shares}
";

const CLASSIFY: &str = "Instructions:
You are an AI assistant classifying an online event. Identify the domain
(one of: education, politics, business, technology, culture, sports, health,
entertainment, environment, economy) and the ISO-3166 alpha-2 country code of
the population most affected.
Title: {title}
Content: {content}
Answers must follow the following format:
  Domain: {domain_name}
  Country: {country_code}
";

impl TemplateKind {
    pub fn body(self) -> &'static str {
        match self {
            TemplateKind::GroupFind => GROUP_FIND,
            TemplateKind::GroupGenerate => GROUP_GENERATE,
            TemplateKind::Decision => DECISION,
            TemplateKind::EmotionUpdate => EMOTION_UPDATE,
            TemplateKind::EngagementPredict => ENGAGEMENT_PREDICT,
            TemplateKind::Classify => CLASSIFY,
        }
    }

    /// Slots that must be present in the request context.
    pub fn required_slots(self) -> &'static [&'static str] {
        match self {
            TemplateKind::GroupFind => &["domain", "country"],
            TemplateKind::GroupGenerate => &["country", "document"],
            TemplateKind::Decision => &[
                "agent_name",
                "agent_description",
                "world_description",
                "day_n",
                "event_state",
                "memory",
                "previous_state",
                "emotions",
                "attitudes",
                "available_actions",
            ],
            TemplateKind::EmotionUpdate => &[
                "agent_name",
                "agent_description",
                "world_description",
                "day_n",
                "event_state",
                "memory",
                "previous_state",
                "emotion_fading",
            ],
            TemplateKind::EngagementPredict => &[
                "agent_name",
                "agent_description",
                "world_description",
                "day_n",
                "date",
                "event_state",
                "memory",
                "previous_state",
                "forgetting_probability",
                "emotions",
                "attitudes",
            ],
            TemplateKind::Classify => &["title", "content"],
        }
    }
}

/// Render a request's template with every context slot substituted.
///
/// Deterministic and byte-stable: equal requests render to equal text.
pub fn render_prompt(request: &OracleRequest) -> Result<String, OracleError> {
    for slot in request.template.required_slots() {
        if !request.context.contains_key(*slot) {
            return Err(OracleError::MissingSlot((*slot).to_owned()));
        }
    }
    let template = request.template.body();
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) => {
                let name = &after[..close];
                match request.context.get(name) {
                    Some(value) => out.push_str(&value.render()),
                    None => {
                        // Not a context slot: literal text for the model.
                        out.push('{');
                        out.push_str(name);
                        out.push('}');
                    }
                }
                rest = &after[close + 1..];
            }
            None => {
                out.push('{');
                rest = after;
            }
        }
    }
    out.push_str(rest);
    Ok(out)
}
