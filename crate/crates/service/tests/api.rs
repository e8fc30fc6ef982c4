use std::time::Duration;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use rqc_core::design::{evaluate_design, EvaluateOptions};
use rqc_core::fidelity::NoiseModel;
use rqc_core::pattern::PatternCode;
use rqc_core::search::{search, SearchConfig};
use rqc_core::{build_lattice, LatticeSpec};
use rqc_service::{router, AppState};

fn app() -> Router {
    router(AppState::default())
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header(header::CONTENT_TYPE, "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, Method::GET, uri, None).await
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, Method::POST, uri, Some(body)).await
}

/// Polls a job until it leaves the queue, checking that progress never drops.
async fn wait_for(app: &Router, id: u64) -> Value {
    let mut last = 0.0;
    for _ in 0..2000 {
        let (status, record) = get(app, &format!("/api/search/{id}")).await;
        assert_eq!(status, StatusCode::OK);
        let progress = record["progress"].as_f64().unwrap();
        assert!(progress >= last, "progress fell from {last} to {progress}");
        assert!((0.0..=1.0).contains(&progress));
        last = progress;
        if matches!(record["state"].as_str(), Some("done" | "failed")) {
            return record;
        }
        tokio::time::sleep(Duration::from_millis(10)).await;
    }
    panic!("job {id} did not finish");
}

fn without_run(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("run");
    v
}

#[tokio::test]
async fn lattice_descriptions() {
    let app = app();
    let (status, doc) = get(&app, "/api/lattice?mode=grid&width=5&height=5").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        (doc["m"].as_u64(), doc["n"].as_u64(), doc["qubits"].as_u64()),
        (Some(5), Some(5), Some(25))
    );
    assert_eq!(doc["qubit_list"].as_array().unwrap().len(), 25);
    assert_eq!(doc["bond_list"].as_array().unwrap().len(), 40);

    let (status, doc) = get(&app, "/api/lattice?mode=window&xsize=12&ysize=12").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc["qubits"], 72);

    let (status, doc) = get(&app, "/api/lattice?width=5&height=5&defects=(2,2)").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc["qubits"], 24);
    assert_eq!(doc["defect_list"], json!([{"u": 2, "v": 2, "x": 4, "y": 4}]));
}

#[tokio::test]
async fn lattice_validation() {
    let app = app();
    for uri in [
        "/api/lattice?width=5&height=5&defects=(9,9)",
        "/api/lattice?width=5&height=5&defects=(2,a)",
        "/api/lattice?width=5",
        "/api/lattice?mode=hex&width=5&height=5",
        "/api/lattice?width=five&height=5",
    ] {
        let (status, body) = get(&app, uri).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri}");
        assert!(body["error"].is_string(), "{uri}");
    }
}

#[tokio::test]
async fn evaluation_matches_the_core() {
    let app = app();
    let (status, got) = post(
        &app,
        "/api/evaluate",
        json!({
            "lattice": {"mode": "grid", "width": 5, "height": 5},
            "pattern": "A=11111 C=00000 swap=0",
            "depth": 20,
            "noise": {"e1": 0.0, "e2": 0.0, "er": 0.0}
        }),
    )
    .await;
    assert_eq!(status, StatusCode::OK);

    let lattice = build_lattice(&LatticeSpec::grid(5, 5)).unwrap();
    let opts = EvaluateOptions {
        noise: Some(NoiseModel::uniform(0.0, 0.0, 0.0)),
        ..Default::default()
    };
    let want = serde_json::to_value(evaluate_design(&lattice, &PatternCode::baseline(&lattice), &opts).unwrap()).unwrap();
    assert_eq!(got, want);
    assert_eq!(got["fidelity"]["F"], 1.0);
    assert_eq!(got["fidelity"]["Ns"], 3.0);
    for key in ["n_c", "n_wedge", "n_DCD", "n_st", "n_end", "n1", "n2", "log2_cost"] {
        assert!(got["breakdown"][key].is_number(), "{key}");
    }
    // a straight cut of E edges crosses E * d / 4 gates
    let edges = got["cut"]["edges"].as_u64().unwrap();
    let crossed = got["cut"]["crossed_bonds"].as_array().unwrap().len() as u64;
    assert_eq!(crossed, edges);
    assert_eq!(got["breakdown"]["n_c"].as_u64().unwrap(), edges * 20 / 4);
}

#[tokio::test]
async fn evaluation_with_a_tail() {
    let app = app();
    let (status, got) = post(
        &app,
        "/api/evaluate",
        json!({
            "lattice": {"mode": "grid", "width": 5, "height": 5},
            "pattern": {"a": "11111", "c": "00000", "swap": false},
            "depth": 18
        }),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(got["depth"], 18);
    assert!(got["tail"].is_string());
    assert!(got["tails"].as_array().unwrap().len() > 1);
    assert!(got.get("fidelity").is_none());
}

#[tokio::test]
async fn evaluation_errors() {
    let app = app();
    let (status, body) = post(
        &app,
        "/api/evaluate",
        json!({"lattice": {"mode": "grid", "width": 5, "height": 5}, "pattern": "A=111 C=00000 swap=0"}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["kind"], "validation");

    let (status, _) = post(&app, "/api/evaluate", json!({"lattice": "nope"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, body) = post(
        &app,
        "/api/evaluate",
        json!({
            "lattice": {"mode": "window", "xsize": 12, "ysize": 12},
            "pattern": "A=11111111111 C=0000000000 swap=0"
        }),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    assert_eq!(body["kind"], "infeasible");

    let (status, _) = post(
        &app,
        "/api/evaluate",
        json!({
            "lattice": {"mode": "grid", "width": 5, "height": 5},
            "pattern": "A=11111 C=00000 swap=0",
            "noise": {"e1": 1.5, "e2": 0.0, "er": 0.0}
        }),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn search_job_lifecycle() {
    let app = app();
    let request = json!({"lattice": {"mode": "grid", "width": 5, "height": 5}, "depth": 20, "top_k": 5});
    let (status, first) = post(&app, "/api/search", request.clone()).await;
    assert_eq!(status, StatusCode::ACCEPTED);
    let (status, second) = post(&app, "/api/search", request).await;
    assert_eq!(status, StatusCode::ACCEPTED);
    let (a, b) = (first["id"].as_u64().unwrap(), second["id"].as_u64().unwrap());
    assert_ne!(a, b);

    for id in [a, b] {
        let record = wait_for(&app, id).await;
        assert_eq!(record["state"], "done");
        assert_eq!(record["progress"], 1.0);
        assert_eq!(record["result"], format!("/api/search/{id}/result"));
    }
    let (status, report_a) = get(&app, &format!("/api/search/{a}/result")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report_a["candidates"], 2048);
    assert_eq!(report_a["top"].as_array().unwrap().len(), 5);
    assert!(report_a["baseline"]["code_rank"].as_u64().unwrap() >= 1);

    // each job's report equals a solo run
    let (_, report_b) = get(&app, &format!("/api/search/{b}/result")).await;
    let lattice = build_lattice(&LatticeSpec::grid(5, 5)).unwrap();
    let solo = search(
        &lattice,
        &SearchConfig {
            top_k: 5,
            ..Default::default()
        },
    )
    .unwrap();
    let solo = without_run(serde_json::to_value(solo).unwrap());
    assert_eq!(without_run(report_a), solo);
    assert_eq!(without_run(report_b), solo);

    let (_, listed) = get(&app, "/api/search").await;
    assert_eq!(listed.as_array().unwrap().len(), 2);

    let (status, _) = call(&app, Method::DELETE, &format!("/api/search/{a}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = get(&app, &format!("/api/search/{a}")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, Method::DELETE, &format!("/api/search/{a}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn pending_unknown_and_cancelled_jobs() {
    let app = app();
    // a 2^19-code search keeps the worker busy while the next job waits
    let (status, slow) = post(
        &app,
        "/api/search",
        json!({"lattice": {"mode": "window", "xsize": 12, "ysize": 9}}),
    )
    .await;
    assert_eq!(status, StatusCode::ACCEPTED);
    let (_, quick) = post(
        &app,
        "/api/search",
        json!({"lattice": {"mode": "grid", "width": 4, "height": 4}}),
    )
    .await;
    let (slow, quick) = (slow["id"].as_u64().unwrap(), quick["id"].as_u64().unwrap());

    let (status, body) = get(&app, &format!("/api/search/{quick}/result")).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["kind"], "conflict");
    let (_, record) = get(&app, &format!("/api/search/{quick}")).await;
    assert_eq!(record["state"], "queued");
    assert_eq!(record["progress"], 0.0);
    assert_eq!(record["submitted"]["lattice"]["width"], 4);

    for uri in ["/api/search/999/result", "/api/search/999", "/api/search/abc"] {
        let (status, _) = get(&app, uri).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
    }

    let (status, _) = call(&app, Method::DELETE, &format!("/api/search/{slow}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let record = wait_for(&app, quick).await;
    assert_eq!(record["state"], "done");
    let (_, report) = get(&app, &format!("/api/search/{quick}/result")).await;
    assert_eq!(report["candidates"], 512);
}

#[tokio::test]
async fn search_submission_errors() {
    let app = app();
    let (status, _) = post(
        &app,
        "/api/search",
        json!({"lattice": {"mode": "grid", "width": 5, "height": 5}, "depth": 2}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, body) = post(
        &app,
        "/api/search",
        json!({"lattice": {"mode": "grid", "width": 5, "height": 5}, "enumeration_cap": 8}),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["kind"], "resource");

    // infeasible lattices are accepted and fail inside the job
    let (status, job) = post(
        &app,
        "/api/search",
        json!({"lattice": {"mode": "window", "xsize": 12, "ysize": 12}}),
    )
    .await;
    assert_eq!(status, StatusCode::ACCEPTED);
    let record = wait_for(&app, job["id"].as_u64().unwrap()).await;
    assert_eq!(record["state"], "failed");
    assert_eq!(record["failure"]["kind"], "infeasible");
    let (status, _) = get(&app, &format!("/api/search/{}/result", job["id"])).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn cross_origin_requests_are_allowed() {
    let req = Request::builder()
        .uri("/api/lattice?width=3&height=3")
        .header(header::ORIGIN, "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = app().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}
