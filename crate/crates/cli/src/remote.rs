//! Remote oracle: a chat-completions-style HTTP endpoint behind the same
//! `Oracle` trait the stub implements.
//!
//! Requests run synchronously with three retries and exponential backoff;
//! concurrent in-flight requests are capped by a semaphore so the parallel
//! day executor cannot stampede the endpoint.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use groupsim_core::oracle::{render_prompt, Oracle, OracleError, OracleRequest};
use serde::Deserialize;
use serde_json::json;

use crate::CliError;

const MAX_ATTEMPTS: u32 = 3;
const BASE_BACKOFF_MS: u64 = 500;
const REQUEST_TIMEOUT_SECS: u64 = 60;

struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Semaphore {
        Semaphore {
            permits: Mutex::new(permits),
            available: Condvar::new(),
        }
    }

    fn acquire(&self) {
        let mut permits = self.permits.lock().expect("semaphore poisoned");
        while *permits == 0 {
            permits = self.available.wait(permits).expect("semaphore poisoned");
        }
        *permits -= 1;
    }

    fn release(&self) {
        *self.permits.lock().expect("semaphore poisoned") += 1;
        self.available.notify_one();
    }
}

#[derive(Debug, Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Debug, Deserialize)]
struct Choice {
    message: ChatMessage,
}

#[derive(Debug, Deserialize)]
struct ChatMessage {
    content: String,
}

pub struct RemoteOracle {
    client: reqwest::blocking::Client,
    endpoint: String,
    api_key: Option<String>,
    model: Option<String>,
    temperature: f64,
    inflight: Semaphore,
    correlation: AtomicU64,
}

impl RemoteOracle {
    pub fn new(
        endpoint: String,
        api_key: Option<String>,
        model: Option<String>,
        temperature: f64,
        max_inflight: usize,
    ) -> Result<RemoteOracle, CliError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(REQUEST_TIMEOUT_SECS))
            .build()
            .map_err(|e| CliError::Oracle(format!("building http client: {e}")))?;
        Ok(RemoteOracle {
            client,
            endpoint,
            api_key,
            model,
            temperature,
            inflight: Semaphore::new(max_inflight.max(1)),
            correlation: AtomicU64::new(0),
        })
    }

    fn post_once(&self, prompt: &str, correlation_id: u64) -> Result<String, OracleError> {
        let body = json!({
            "model": self.model.as_deref().unwrap_or("default"),
            "temperature": self.temperature,
            "messages": [
                {"role": "user", "content": prompt}
            ],
        });
        let mut request = self.client.post(&self.endpoint).json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .map_err(|e| OracleError::Unavailable(format!("request {correlation_id}: {e}")))?;
        let status = response.status();
        let text = response.text().map_err(|e| {
            OracleError::Unavailable(format!("request {correlation_id}: reading body: {e}"))
        })?;
        if !status.is_success() {
            return Err(OracleError::Unavailable(format!(
                "request {correlation_id}: status {status}"
            )));
        }
        let parsed: ChatResponse = serde_json::from_str(&text)
            .map_err(|e| OracleError::UnparseableReply(format!("request {correlation_id}: {e}")))?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| {
                OracleError::UnparseableReply(format!("request {correlation_id}: no choices"))
            })
    }
}

impl Oracle for RemoteOracle {
    fn complete(&self, request: &OracleRequest) -> Result<String, OracleError> {
        let prompt = render_prompt(request)?;
        let correlation_id = self.correlation.fetch_add(1, Ordering::Relaxed);
        log::debug!(
            "oracle request {correlation_id} ({:?}): {} bytes",
            request.template,
            prompt.len()
        );
        log::trace!("oracle request {correlation_id} body: {prompt}");

        self.inflight.acquire();
        let result = (|| {
            let mut last = OracleError::Unavailable("no attempts made".into());
            for attempt in 0..MAX_ATTEMPTS {
                if attempt > 0 {
                    let backoff = BASE_BACKOFF_MS << (attempt - 1);
                    std::thread::sleep(Duration::from_millis(backoff));
                }
                match self.post_once(&prompt, correlation_id) {
                    Ok(reply) => {
                        log::trace!("oracle reply {correlation_id}: {reply}");
                        return Ok(reply);
                    }
                    Err(OracleError::Unavailable(msg)) => {
                        log::warn!("attempt {} failed: {msg}", attempt + 1);
                        last = OracleError::Unavailable(msg);
                    }
                    Err(other) => return Err(other),
                }
            }
            Err(last)
        })();
        self.inflight.release();
        result
    }
}
