//! Chat transport: sessions, a replay provider for offline runs, a recorder,
//! and (with the `http` feature) a chat-completions client.

#[cfg(feature = "http")]
pub mod http;
pub mod replay;
pub mod session;

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use replay::{read_fixtures, FixtureHit, FixtureRecord, RecordProvider, ReplayProvider};
pub use session::{ChatSession, Message, ModelParams, Role};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LlmError {
    #[error("PROVIDER_UNAVAILABLE: {0}")]
    ProviderUnavailable(String),
    #[error("FIXTURE_MISS: no recorded reply for digest {0}")]
    FixtureMiss(String),
    #[error("fixture error: {0}")]
    Fixture(String),
}

impl LlmError {
    pub fn code(&self) -> &'static str {
        match self {
            LlmError::ProviderUnavailable(_) => "PROVIDER_UNAVAILABLE",
            LlmError::FixtureMiss(_) => "FIXTURE_MISS",
            LlmError::Fixture(_) => "FIXTURE_ERROR",
        }
    }
}

pub struct ChatRequest<'a> {
    pub params: &'a ModelParams,
    pub messages: &'a [Message],
}

pub trait ChatProvider: Send + Sync {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError>;
}

impl<P: ChatProvider + ?Sized> ChatProvider for Arc<P> {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError> {
        (**self).complete(req)
    }
}

impl<P: ChatProvider + ?Sized> ChatProvider for &P {
    fn complete(&self, req: &ChatRequest<'_>) -> Result<String, LlmError> {
        (**self).complete(req)
    }
}

/// Hex SHA-256 of the canonical JSON of (model, temperature, messages).
pub fn request_digest(req: &ChatRequest<'_>) -> String {
    #[derive(Serialize)]
    struct Canonical<'a> {
        model: &'a str,
        temperature: f64,
        messages: &'a [Message],
    }
    let canonical = serde_json::to_vec(&Canonical {
        model: &req.params.model,
        temperature: req.params.temperature,
        messages: req.messages,
    })
    .expect("canonical form serializes");
    let digest = Sha256::digest(&canonical);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderKind {
    HttpChat,
    Replay,
    Record,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    #[serde(default = "default_endpoint")]
    pub endpoint: String,
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
    #[serde(default)]
    pub fixtures: Option<PathBuf>,
}

fn default_endpoint() -> String {
    "https://api.openai.com/v1/chat/completions".into()
}
fn default_model() -> String {
    ModelParams::default().model
}
fn default_temperature() -> f64 {
    0.2
}
fn default_max_tokens() -> u32 {
    2048
}
fn default_key_env() -> String {
    "MTCFORGE_API_KEY".into()
}

impl ProviderConfig {
    /// Defaults for every field; `fixtures` unset.
    pub fn new(kind: ProviderKind) -> Self {
        ProviderConfig {
            kind,
            endpoint: default_endpoint(),
            model: default_model(),
            temperature: default_temperature(),
            max_tokens: default_max_tokens(),
            api_key_env: default_key_env(),
            fixtures: None,
        }
    }

    pub fn replay(fixtures: impl Into<PathBuf>) -> Self {
        ProviderConfig { fixtures: Some(fixtures.into()), ..ProviderConfig::new(ProviderKind::Replay) }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(format!("temperature {} outside [0, 2]", self.temperature));
        }
        if matches!(self.kind, ProviderKind::Replay | ProviderKind::Record) && self.fixtures.is_none() {
            return Err("replay and record providers need a fixtures path".into());
        }
        Ok(())
    }

    pub fn params(&self) -> ModelParams {
        ModelParams { model: self.model.clone(), temperature: self.temperature, max_tokens: self.max_tokens }
    }

    /// Builds the provider this config describes.
    pub fn build(&self) -> Result<Arc<dyn ChatProvider>, LlmError> {
        self.validate().map_err(LlmError::Fixture)?;
        match self.kind {
            ProviderKind::Replay => Ok(Arc::new(ReplayProvider::from_file(self.fixtures.as_ref().unwrap())?)),
            ProviderKind::HttpChat => self.http(),
            ProviderKind::Record => {
                let inner = self.http()?;
                Ok(Arc::new(RecordProvider::new(inner, self.fixtures.clone().unwrap())?))
            }
        }
    }

    #[cfg(feature = "http")]
    fn http(&self) -> Result<Arc<dyn ChatProvider>, LlmError> {
        Ok(Arc::new(http::HttpProvider::new(self.endpoint.clone(), self.api_key_env.clone())?))
    }

    #[cfg(not(feature = "http"))]
    fn http(&self) -> Result<Arc<dyn ChatProvider>, LlmError> {
        Err(LlmError::ProviderUnavailable("built without the `http` feature".into()))
    }
}
