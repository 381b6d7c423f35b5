//! Answer backends: the HTTP inference client, a retry wrapper and the
//! scripted stub used for tests and fixtures.

use std::path::Path;
use std::time::Duration;

use serde::Deserialize;

use super::prompt::{AnswerRequest, AnswerResponse};
use crate::error::{read_to_string, BackendError, LlmError};
use crate::taxonomy::FineCategory;

/// Something that answers one prompt request with a raw answer string.
pub trait AnswerBackend: Send + Sync {
    fn answer(&self, category: FineCategory, request: &AnswerRequest) -> Result<String, BackendError>;
}

impl<B: AnswerBackend + ?Sized> AnswerBackend for &B {
    fn answer(&self, category: FineCategory, request: &AnswerRequest) -> Result<String, BackendError> {
        (**self).answer(category, request)
    }
}

impl<B: AnswerBackend + ?Sized> AnswerBackend for Box<B> {
    fn answer(&self, category: FineCategory, request: &AnswerRequest) -> Result<String, BackendError> {
        (**self).answer(category, request)
    }
}

/// Exponential backoff: retry `n` waits `base_delay * 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 3,
            base_delay: Duration::from_millis(250),
        }
    }
}

impl RetryPolicy {
    pub fn delay(&self, retry: u32) -> Duration {
        self.base_delay.saturating_mul(1u32 << retry.min(16))
    }
}

/// Retries retryable failures of the wrapped backend.
#[derive(Debug, Clone)]
pub struct Retrying<B> {
    pub inner: B,
    pub policy: RetryPolicy,
}

impl<B: AnswerBackend> AnswerBackend for Retrying<B> {
    fn answer(&self, category: FineCategory, request: &AnswerRequest) -> Result<String, BackendError> {
        let mut retry = 0;
        loop {
            match self.inner.answer(category, request) {
                Err(e) if e.is_retryable() && retry < self.policy.max_retries => {
                    log::debug!("retrying {category} after {e}");
                    std::thread::sleep(self.policy.delay(retry));
                    retry += 1;
                }
                other => return other,
            }
        }
    }
}

/// Connection settings for an inference service.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceEndpoint {
    /// Base URL; `{category}` is replaced with the category name so each
    /// category can have its own model.
    pub base_url: String,
    pub timeout: Duration,
    pub max_retries: u32,
    pub max_concurrency: usize,
}

impl InferenceEndpoint {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            timeout: Duration::from_secs(60),
            max_retries: 3,
            max_concurrency: 4,
        }
    }

    pub fn url_for(&self, category: FineCategory) -> String {
        let base = self.base_url.replace("{category}", category.name());
        format!("{}/v1/answer", base.trim_end_matches('/'))
    }

    pub fn client(&self) -> Retrying<HttpBackend> {
        Retrying {
            inner: HttpBackend::new(self.clone()),
            policy: RetryPolicy {
                max_retries: self.max_retries,
                ..RetryPolicy::default()
            },
        }
    }
}

/// `POST {base}/v1/answer` client. 4xx responses are permanent failures;
/// 5xx, timeouts and transport errors are retryable.
#[derive(Debug, Clone)]
pub struct HttpBackend {
    endpoint: InferenceEndpoint,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(endpoint: InferenceEndpoint) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(endpoint.timeout).build();
        Self { endpoint, agent }
    }
}

impl AnswerBackend for HttpBackend {
    fn answer(&self, category: FineCategory, request: &AnswerRequest) -> Result<String, BackendError> {
        let url = self.endpoint.url_for(category);
        match self.agent.post(&url).send_json(request) {
            Ok(resp) if resp.status() == 200 => resp
                .into_json::<AnswerResponse>()
                .map(|r| r.answer)
                .map_err(|e| BackendError::Permanent(format!("{url}: malformed response body: {e}"))),
            Ok(resp) => Err(BackendError::Permanent(format!("{url}: unexpected status {}", resp.status()))),
            Err(ureq::Error::Status(code, resp)) => {
                let body = resp.into_string().unwrap_or_default();
                let msg = format!("{url}: HTTP {code} {body}");
                if (500..600).contains(&code) {
                    Err(BackendError::Retryable(msg))
                } else {
                    Err(BackendError::Permanent(msg))
                }
            }
            Err(ureq::Error::Transport(t)) => Err(BackendError::Retryable(format!("{url}: {t}"))),
        }
    }
}

/// One scripted answer: applies when the request question contains
/// `question` and the request context contains `context`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, serde::Serialize)]
pub struct ScriptRule {
    pub question: String,
    pub context: String,
    pub answer: String,
}

/// Deterministic stub answering from a script; first matching rule wins.
/// Unscripted requests get `not relevant`, or fail in strict mode.
#[derive(Debug, Clone, Default)]
pub struct ScriptedBackend {
    pub rules: Vec<ScriptRule>,
    pub strict: bool,
}

pub const STUB_DEFAULT_ANSWER: &str = "not relevant";

impl ScriptedBackend {
    pub fn new(rules: Vec<ScriptRule>) -> Self {
        Self { rules, strict: false }
    }

    /// One JSON object per line: `{"question": ..., "context": ..., "answer": ...}`.
    pub fn parse(content: &str) -> Result<Self, LlmError> {
        let rules = content
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str::<ScriptRule>(l).map_err(|e| LlmError::Script {
                    line: i + 1,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self::new(rules))
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        Self::parse(&read_to_string(path)?)
    }

    pub fn lookup(&self, request: &AnswerRequest) -> Option<&str> {
        self.rules
            .iter()
            .find(|r| request.question.contains(&r.question) && request.context.contains(&r.context))
            .map(|r| r.answer.as_str())
    }
}

impl AnswerBackend for ScriptedBackend {
    fn answer(&self, _category: FineCategory, request: &AnswerRequest) -> Result<String, BackendError> {
        match self.lookup(request) {
            Some(a) => Ok(a.to_string()),
            None if self.strict => Err(BackendError::Permanent("422 unscripted request".into())),
            None => Ok(STUB_DEFAULT_ANSWER.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::prompt::build_prompt;
    use std::sync::atomic::{AtomicU32, Ordering};

    struct Flaky {
        failures: u32,
        calls: AtomicU32,
        permanent: bool,
    }

    impl AnswerBackend for Flaky {
        fn answer(&self, _: FineCategory, _: &AnswerRequest) -> Result<String, BackendError> {
            let n = self.calls.fetch_add(1, Ordering::SeqCst);
            if n < self.failures {
                if self.permanent {
                    Err(BackendError::Permanent("400".into()))
                } else {
                    Err(BackendError::Retryable("503".into()))
                }
            } else {
                Ok("yes".into())
            }
        }
    }

    fn req() -> AnswerRequest {
        build_prompt(FineCategory::Loneliness, "Pt continues to express feelings of loneliness.").unwrap().request()
    }

    fn retrying(failures: u32, permanent: bool, max_retries: u32) -> Retrying<Flaky> {
        Retrying {
            inner: Flaky { failures, calls: AtomicU32::new(0), permanent },
            policy: RetryPolicy { max_retries, base_delay: Duration::from_millis(1) },
        }
    }

    #[test]
    fn retries_transient_failures() {
        let b = retrying(2, false, 3);
        assert_eq!(b.answer(FineCategory::Loneliness, &req()).unwrap(), "yes");
        assert_eq!(b.inner.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn gives_up_after_max_retries() {
        let b = retrying(10, false, 2);
        assert!(b.answer(FineCategory::Loneliness, &req()).unwrap_err().is_retryable());
        assert_eq!(b.inner.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn permanent_failures_are_not_retried() {
        let b = retrying(1, true, 5);
        assert!(b.answer(FineCategory::Loneliness, &req()).is_err());
        assert_eq!(b.inner.calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn backoff_doubles() {
        let p = RetryPolicy { max_retries: 3, base_delay: Duration::from_millis(100) };
        assert_eq!(p.delay(0), Duration::from_millis(100));
        assert_eq!(p.delay(2), Duration::from_millis(400));
    }

    #[test]
    fn url_templating() {
        let ep = InferenceEndpoint::new("http://models/{category}/");
        assert_eq!(ep.url_for(FineCategory::Loneliness), "http://models/loneliness/v1/answer");
        let shared = InferenceEndpoint::new("http://localhost:8000");
        assert_eq!(shared.url_for(FineCategory::SsGeneral), "http://localhost:8000/v1/answer");
    }

    #[test]
    fn scripted_answers() {
        let stub = ScriptedBackend::parse(
            r#"{"question": "feelings of loneliness", "context": "feelings of loneliness", "answer": "yes"}"#,
        )
        .unwrap();
        assert_eq!(stub.answer(FineCategory::Loneliness, &req()).unwrap(), "yes");
        let other = build_prompt(FineCategory::Loneliness, "Pt is currently homeless.").unwrap().request();
        assert_eq!(stub.answer(FineCategory::Loneliness, &other).unwrap(), "not relevant");
        let strict = ScriptedBackend { strict: true, ..stub };
        assert!(matches!(strict.answer(FineCategory::Loneliness, &other), Err(BackendError::Permanent(_))));
        assert!(ScriptedBackend::parse("{not json").is_err());
    }
}
