use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::{ChatProvider, ChatRequest, LlmError};

static NEXT_SESSION: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn new(role: Role, content: impl Into<String>) -> Self {
        Message { role, content: content.into() }
    }
}

/// Model parameters carried by a session. Everything here feeds the
/// request digest, so it must not contain secrets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { model: "fixture-model".into(), temperature: 0.2, max_tokens: 2048 }
    }
}

/// An append-only conversation. The first message is always the system
/// message; a failed send leaves the session untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatSession {
    messages: Vec<Message>,
    pub params: ModelParams,
    session_id: u64,
}

impl ChatSession {
    pub fn new(system: impl Into<String>, params: ModelParams) -> Self {
        ChatSession {
            messages: vec![Message::new(Role::System, system)],
            params,
            session_id: NEXT_SESSION.fetch_add(1, Ordering::Relaxed),
        }
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn session_id(&self) -> u64 {
        self.session_id
    }

    /// Deep copy under a fresh session id.
    pub fn fork(&self) -> ChatSession {
        ChatSession {
            messages: self.messages.clone(),
            params: self.params.clone(),
            session_id: NEXT_SESSION.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// Sends `user` with the whole history; on success appends the user
    /// message and the reply.
    pub fn send(&mut self, provider: &dyn ChatProvider, user: &str) -> Result<String, LlmError> {
        let mut messages = self.messages.clone();
        messages.push(Message::new(Role::User, user));
        let reply = provider.complete(&ChatRequest { params: &self.params, messages: &messages })?;
        messages.push(Message::new(Role::Assistant, reply.clone()));
        self.messages = messages;
        Ok(reply)
    }
}
