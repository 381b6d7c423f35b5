//! The `/v1/answer` wire contract, checked against recorded request/response
//! pairs, a replaying HTTP server and the scripted stub.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use serde::Deserialize;
use serde_json::Value;
use sociolex::error::BackendError;
use sociolex::llm::{
    build_prompt, AnswerBackend, AnswerRequest, AnswerResponse, HttpBackend, InferenceEndpoint, Retrying, RetryPolicy,
    ScriptedBackend,
};
use sociolex::FineCategory;

#[derive(Debug, Deserialize)]
struct Case {
    name: String,
    category: FineCategory,
    chunk: String,
    request: Value,
    status: u16,
    response: Value,
}

fn cases() -> Vec<Case> {
    include_str!("data/contract/cases.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn stub() -> ScriptedBackend {
    ScriptedBackend::parse(include_str!("data/contract/stub_script.jsonl")).unwrap()
}

/// Serves `handler(path, body) -> (status, body)` on a free port.
fn serve<F>(handler: F) -> (String, Arc<AtomicUsize>)
where
    F: Fn(&str, &str) -> (u16, String) + Send + 'static,
{
    let server = tiny_http::Server::http("127.0.0.1:0").unwrap();
    let port = server.server_addr().to_ip().unwrap().port();
    let hits = Arc::new(AtomicUsize::new(0));
    let counter = hits.clone();
    std::thread::spawn(move || {
        for mut req in server.incoming_requests() {
            counter.fetch_add(1, Ordering::SeqCst);
            let mut body = String::new();
            let _ = req.as_reader().read_to_string(&mut body);
            let (status, out) = handler(req.url(), &body);
            let header = tiny_http::Header::from_bytes("Content-Type", "application/json").unwrap();
            let _ = req.respond(tiny_http::Response::from_string(out).with_status_code(status).with_header(header));
        }
    });
    (format!("http://127.0.0.1:{port}"), hits)
}

fn fast(endpoint: InferenceEndpoint, retries: u32) -> Retrying<HttpBackend> {
    Retrying {
        inner: HttpBackend::new(endpoint),
        policy: RetryPolicy {
            max_retries: retries,
            base_delay: Duration::from_millis(1),
        },
    }
}

#[test]
fn requests_match_recorded_fixtures() {
    for case in cases() {
        let req = build_prompt(case.category, &case.chunk).unwrap().request();
        assert_eq!(serde_json::to_value(&req).unwrap(), case.request, "{}", case.name);
        let obj = case.request.as_object().unwrap();
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 4);
        for k in ["instruction", "context", "question", "choices"] {
            assert!(keys.contains(&k));
        }
    }
}

#[test]
fn scripted_stub_reproduces_recorded_responses() {
    let stub = stub();
    for case in cases() {
        let req: AnswerRequest = serde_json::from_value(case.request.clone()).unwrap();
        let answer = stub.answer(case.category, &req).unwrap();
        let want: AnswerResponse = serde_json::from_value(case.response.clone()).unwrap();
        assert_eq!(answer, want.answer, "{}", case.name);
    }
}

#[test]
fn http_client_replays_recorded_exchanges() {
    let recorded = cases();
    let table: Vec<(String, Value, u16, String)> = recorded
        .iter()
        .map(|c| (format!("/{}/v1/answer", c.category), c.request.clone(), c.status, c.response.to_string()))
        .collect();
    let (base, hits) = serve(move |path, body| {
        let Ok(body) = serde_json::from_str::<Value>(body) else {
            return (400, r#"{"error":"malformed request"}"#.into());
        };
        table
            .iter()
            .find(|(p, req, _, _)| p == path && *req == body)
            .map(|(_, _, status, resp)| (*status, resp.clone()))
            .unwrap_or((404, r#"{"error":"no recording"}"#.into()))
    });
    let client = fast(InferenceEndpoint::new(format!("{base}/{{category}}")), 0);
    for case in &recorded {
        let req = build_prompt(case.category, &case.chunk).unwrap().request();
        let answer = client.answer(case.category, &req).unwrap();
        assert_eq!(Value::String(answer), case.response["answer"], "{}", case.name);
    }
    assert_eq!(hits.load(Ordering::SeqCst), recorded.len());
}

#[test]
fn client_error_is_not_retried() {
    let (base, hits) = serve(|_, _| (422, r#"{"error":"unscripted request"}"#.into()));
    let client = fast(InferenceEndpoint::new(base), 3);
    let req = build_prompt(FineCategory::Loneliness, "x").unwrap().request();
    match client.answer(FineCategory::Loneliness, &req) {
        Err(BackendError::Permanent(msg)) => assert!(msg.contains("422"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert_eq!(hits.load(Ordering::SeqCst), 1);
}

#[test]
fn server_error_is_retried_until_success() {
    let calls = Arc::new(AtomicUsize::new(0));
    let seen = calls.clone();
    let (base, hits) = serve(move |_, _| {
        if seen.fetch_add(1, Ordering::SeqCst) < 2 {
            (503, "busy".into())
        } else {
            (200, r#"{"answer":"yes"}"#.into())
        }
    });
    let client = fast(InferenceEndpoint::new(base), 3);
    let req = build_prompt(FineCategory::SocialNetwork, "x").unwrap().request();
    assert_eq!(client.answer(FineCategory::SocialNetwork, &req).unwrap(), "yes");
    assert_eq!(hits.load(Ordering::SeqCst), 3);
}

#[test]
fn retries_are_bounded() {
    let (base, hits) = serve(|_, _| (500, "down".into()));
    let client = fast(InferenceEndpoint::new(base), 2);
    let req = build_prompt(FineCategory::SsGeneral, "x").unwrap().request();
    assert!(matches!(client.answer(FineCategory::SsGeneral, &req), Err(BackendError::Retryable(_))));
    assert_eq!(hits.load(Ordering::SeqCst), 3);
}

#[test]
fn malformed_success_body_is_permanent() {
    let (base, _) = serve(|_, _| (200, r#"{"label":"yes"}"#.into()));
    let client = fast(InferenceEndpoint::new(base), 3);
    let req = build_prompt(FineCategory::Loneliness, "x").unwrap().request();
    assert!(matches!(client.answer(FineCategory::Loneliness, &req), Err(BackendError::Permanent(_))));
}

#[test]
fn unreachable_service_is_retryable() {
    // bind then drop to get a closed port
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let client = fast(InferenceEndpoint::new(format!("http://127.0.0.1:{port}")), 1);
    let req = build_prompt(FineCategory::Loneliness, "x").unwrap().request();
    assert!(matches!(client.answer(FineCategory::Loneliness, &req), Err(BackendError::Retryable(_))));
}

#[test]
fn strict_stub_rejects_unscripted() {
    let mut stub = stub();
    stub.strict = true;
    let req = build_prompt(FineCategory::Loneliness, "Pt is currently homeless.").unwrap().request();
    assert!(matches!(stub.answer(FineCategory::Loneliness, &req), Err(BackendError::Permanent(m)) if m.contains("422")));
}
