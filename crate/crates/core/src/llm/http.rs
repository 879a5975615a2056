use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{ChatProvider, ChatRequest, LlmError};

const ATTEMPTS: u32 = 3;

/// Chat-completions client. The API key is read from `api_key_env` on every
/// request and is never stored.
pub struct HttpProvider {
    endpoint: String,
    api_key_env: String,
    backoff: Duration,
    client: reqwest::blocking::Client,
}

#[derive(Deserialize)]
struct Completion {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    content: String,
}

impl HttpProvider {
    pub fn new(endpoint: impl Into<String>, api_key_env: impl Into<String>) -> Result<Self, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| LlmError::ProviderUnavailable(e.to_string()))?;
        Ok(HttpProvider { endpoint: endpoint.into(), api_key_env: api_key_env.into(), backoff: Duration::from_millis(500), client })
    }

    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    fn attempt(&self, req: &ChatRequest<'_>) -> Result<String, (bool, String)> {
        let body = json!({
            "model": req.params.model,
            "temperature": req.params.temperature,
            "max_tokens": req.params.max_tokens,
            "messages": req.messages,
        });
        let mut builder = self.client.post(&self.endpoint).json(&body);
        if let Ok(key) = std::env::var(&self.api_key_env) {
            builder = builder.bearer_auth(key);
        }
        let resp = builder.send().map_err(|e| (true, format!("request failed: {}", e.without_url())))?;
        let status = resp.status();
        if !status.is_success() {
            let transient = status.is_server_error() || status.as_u16() == 429 || status.as_u16() == 408;
            return Err((transient, format!("HTTP {status}")));
        }
        let parsed: Completion = resp.json().map_err(|e| (false, format!("bad response body: {}", e.without_url())))?;
        parsed.choices.into_iter().next().map(|c| c.message.content).ok_or((false, "response has no choices".into()))
    }
}

impl ChatProvider for HttpProvider {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError> {
        let mut last = String::new();
        for i in 0..ATTEMPTS {
            match self.attempt(req) {
                Ok(reply) => return Ok(reply),
                Err((transient, msg)) => {
                    tracing::warn!(attempt = i + 1, "chat request failed: {msg}");
                    last = msg;
                    if !transient {
                        break;
                    }
                    if i + 1 < ATTEMPTS {
                        std::thread::sleep(self.backoff * 2u32.pow(i));
                    }
                }
            }
        }
        Err(LlmError::ProviderUnavailable(last))
    }
}
