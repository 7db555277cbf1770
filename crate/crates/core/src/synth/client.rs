//! Clients for an external chat-completion service that populates and judges
//! tables. The wire transport is supplied by the caller.

use super::content::{ClientError, ContentGenerator, GenerationRequest, TableValidator, Verdict};
use serde::{Deserialize, Serialize};

pub const GENERATOR_PROMPT: &str = "Populate the empty table based on the HTML provided. Return a complete table! Ensure the table structure exactly match the empty table provided!";

pub const VALIDATOR_PROMPT: &str = "You are a table evaluating expert, you will receive an HTML-formatted table to verify both its structural compliance and the contextual coherence of its content.";

/// Appended to the judge request so its answer can be read mechanically.
pub const VALIDATOR_REPLY_FORMAT: &str = "Answer with ACCEPT or REJECT on the first line, followed by a short reason.";

pub const ENV_ENDPOINT: &str = "TABFORGE_LLM_ENDPOINT";
pub const ENV_MODEL: &str = "TABFORGE_LLM_MODEL";
pub const ENV_API_KEY: &str = "TABFORGE_LLM_API_KEY";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientConfig {
    pub endpoint: String,
    pub model: String,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
}

impl ClientConfig {
    /// Reads the endpoint, model and key variables. `None` when no endpoint
    /// is set.
    pub fn from_env() -> Result<Option<Self>, ClientError> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Option<Self>, ClientError> {
        let Some(endpoint) = get(ENV_ENDPOINT).filter(|v| !v.trim().is_empty()) else {
            return Ok(None);
        };
        let model = get(ENV_MODEL)
            .filter(|v| !v.trim().is_empty())
            .ok_or_else(|| ClientError::Config(format!("{ENV_ENDPOINT} is set but {ENV_MODEL} is not")))?;
        Ok(Some(ClientConfig {
            endpoint,
            model,
            api_key: get(ENV_API_KEY).filter(|v| !v.is_empty()),
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
}

impl ChatRequest {
    fn new(model: &str, system: Option<&str>, user: String) -> Self {
        let mut messages = Vec::new();
        if let Some(s) = system {
            messages.push(ChatMessage {
                role: "system".into(),
                content: s.into(),
            });
        }
        messages.push(ChatMessage {
            role: "user".into(),
            content: user,
        });
        ChatRequest {
            model: model.into(),
            messages,
        }
    }
}

/// Request/response text channel to the service.
pub trait Transport: Send + Sync {
    /// Returns the assistant's reply text.
    fn complete(&self, req: &ChatRequest) -> Result<String, ClientError>;

    fn concurrent(&self) -> bool {
        true
    }
}

/// First `<table>...</table>` in a reply, ignoring code fences and prose.
pub fn extract_table(reply: &str) -> Option<&str> {
    let lower = reply.to_ascii_lowercase();
    let start = lower.find("<table")?;
    let end = lower.rfind("</table>")? + "</table>".len();
    (end > start).then(|| &reply[start..end])
}

pub fn parse_verdict(reply: &str) -> Result<Verdict, ClientError> {
    let text = reply.trim().trim_start_matches(['*', '#', '`', ' ']);
    let upper = text.to_ascii_uppercase();
    let reason = |word: &str| {
        text[word.len()..]
            .trim_start_matches([':', '-', ' ', '.', '*'])
            .trim()
            .to_string()
    };
    if upper.starts_with("ACCEPT") {
        Ok(Verdict {
            accept: true,
            reason: Some(reason("ACCEPT")).filter(|r| !r.is_empty()).unwrap_or_else(|| "ok".into()),
        })
    } else if upper.starts_with("REJECT") {
        Ok(Verdict {
            accept: false,
            reason: reason("REJECT"),
        })
    } else {
        Err(ClientError::Protocol(format!(
            "judge reply does not start with ACCEPT or REJECT: {:?}",
            text.chars().take(80).collect::<String>()
        )))
    }
}

pub struct LlmContentGenerator<T> {
    pub transport: T,
    pub model: String,
}

impl<T: Transport> LlmContentGenerator<T> {
    pub fn request(&self, structural_html: &str) -> ChatRequest {
        ChatRequest::new(&self.model, None, format!("{GENERATOR_PROMPT}\n\n{structural_html}"))
    }
}

impl<T: Transport> ContentGenerator for LlmContentGenerator<T> {
    fn populate(&self, req: &GenerationRequest) -> Result<String, ClientError> {
        let reply = self.transport.complete(&self.request(&req.structural_html))?;
        extract_table(&reply)
            .map(str::to_string)
            .ok_or_else(|| ClientError::Protocol("reply holds no <table> element".into()))
    }

    fn concurrent(&self) -> bool {
        self.transport.concurrent()
    }
}

pub struct LlmTableValidator<T> {
    pub transport: T,
    pub model: String,
}

impl<T: Transport> LlmTableValidator<T> {
    pub fn request(&self, filled_html: &str) -> ChatRequest {
        ChatRequest::new(
            &self.model,
            Some(VALIDATOR_PROMPT),
            format!("{VALIDATOR_REPLY_FORMAT}\n\n{filled_html}"),
        )
    }
}

impl<T: Transport> TableValidator for LlmTableValidator<T> {
    fn judge(&self, _structural_html: &str, filled_html: &str) -> Result<Verdict, ClientError> {
        parse_verdict(&self.transport.complete(&self.request(filled_html))?)
    }

    fn concurrent(&self) -> bool {
        self.transport.concurrent()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;
    use std::sync::Mutex;

    struct Canned {
        reply: String,
        seen: Mutex<Vec<ChatRequest>>,
    }

    impl Transport for Canned {
        fn complete(&self, req: &ChatRequest) -> Result<String, ClientError> {
            self.seen.lock().unwrap().push(req.clone());
            Ok(self.reply.clone())
        }
    }

    fn canned(reply: &str) -> Canned {
        Canned {
            reply: reply.into(),
            seen: Mutex::new(Vec::new()),
        }
    }

    #[test]
    fn generator_sends_prompt_and_extracts_table() {
        let g = LlmContentGenerator {
            transport: canned("Sure!\n```html\n<table><tr><td>x</td></tr></table>\n```"),
            model: "m".into(),
        };
        let req = GenerationRequest {
            record_id: "r".into(),
            attempt: 1,
            seed: 0,
            structural_html: "<table><tr><td></td></tr></table>".into(),
        };
        assert_eq!(g.populate(&req).unwrap(), "<table><tr><td>x</td></tr></table>");
        let sent = &g.transport.seen.lock().unwrap()[0];
        assert!(sent.messages[0].content.starts_with(GENERATOR_PROMPT));
        assert!(sent.messages[0].content.ends_with(&req.structural_html));
        let bad = LlmContentGenerator {
            transport: canned("no table here"),
            model: "m".into(),
        };
        assert!(matches!(bad.populate(&req), Err(ClientError::Protocol(_))));
    }

    #[test]
    fn verdict_parsing() {
        assert!(parse_verdict("ACCEPT").unwrap().accept);
        assert_eq!(parse_verdict("**REJECT**: header row is incoherent").unwrap().reason, "header row is incoherent");
        assert!(parse_verdict("maybe").is_err());
        let v = LlmTableValidator {
            transport: canned("accept - fine"),
            model: "m".into(),
        };
        assert_eq!(v.judge("", "<table></table>").unwrap(), Verdict { accept: true, reason: "fine".into() });
        assert_eq!(v.transport.seen.lock().unwrap()[0].messages[0].content, VALIDATOR_PROMPT);
    }

    #[test]
    fn config_from_lookup() {
        let env: HashMap<&str, &str> = [(ENV_ENDPOINT, "http://x"), (ENV_MODEL, "m")].into();
        let cfg = ClientConfig::from_lookup(|k| env.get(k).map(|v| v.to_string())).unwrap().unwrap();
        assert_eq!((cfg.endpoint.as_str(), cfg.model.as_str(), cfg.api_key), ("http://x", "m", None));
        assert_eq!(ClientConfig::from_lookup(|_| None).unwrap(), None);
        assert!(ClientConfig::from_lookup(|k| (k == ENV_ENDPOINT).then(|| "http://x".to_string())).is_err());
    }
}
