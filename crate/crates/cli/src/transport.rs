//! HTTP transport for chat-completion style endpoints.

use std::time::Duration;
use tabforge_core::synth::client::{ChatRequest, Transport};
use tabforge_core::synth::ClientError;

pub struct HttpTransport {
    endpoint: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(endpoint: String, api_key: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(300)))
            .build()
            .into();
        HttpTransport { endpoint, api_key, agent }
    }
}

/// Pulls `choices[0].message.content` out of a completion response.
pub fn reply_text(body: &str) -> Result<String, ClientError> {
    let v: serde_json::Value =
        serde_json::from_str(body).map_err(|e| ClientError::Protocol(format!("response is not JSON: {e}")))?;
    v.pointer("/choices/0/message/content")
        .and_then(|c| c.as_str())
        .map(str::to_string)
        .ok_or_else(|| ClientError::Protocol("response lacks choices[0].message.content".into()))
}

impl Transport for HttpTransport {
    fn complete(&self, req: &ChatRequest) -> Result<String, ClientError> {
        let body = serde_json::to_string(req).map_err(|e| ClientError::Protocol(e.to_string()))?;
        let mut call = self.agent.post(&self.endpoint).header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            call = call.header("Authorization", format!("Bearer {key}"));
        }
        let mut resp = call.send(body).map_err(|e| ClientError::Transport(e.to_string()))?;
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        reply_text(&text)
    }
}
