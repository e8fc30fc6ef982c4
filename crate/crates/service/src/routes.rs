use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use tower_http::cors::CorsLayer;

use rqc_core::design::{evaluate_design, DesignEvaluation, EvaluateOptions};
use rqc_core::document::LatticeDocument;
use rqc_core::dual::build_dual;
use rqc_core::pattern::{CodeSpace, PatternCode};
use rqc_core::{build_lattice, LatticeParams, LatticeSpec};

use crate::error::ApiError;
use crate::jobs::{JobId, JobRecord, JobStore, Lookup, SearchRequest};

#[derive(Clone, Default)]
pub struct AppState {
    pub jobs: JobStore,
}

#[derive(Clone, Debug, Deserialize)]
pub struct EvaluateRequest {
    pub lattice: LatticeSpec,
    pub pattern: PatternCode,
    #[serde(flatten)]
    pub options: EvaluateOptions,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/lattice", get(lattice))
        .route("/api/evaluate", post(evaluate))
        .route("/api/search", post(submit_search).get(list_searches))
        .route("/api/search/{id}", get(search_status).delete(delete_search))
        .route("/api/search/{id}/result", get(search_result))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    payload.map(|Json(v)| v).map_err(|e| ApiError::bad_request(e.body_text()))
}

fn job_id(raw: &str) -> Result<JobId, ApiError> {
    raw.parse()
        .map_err(|_| ApiError::not_found(format!("no search job \"{raw}\"")))
}

/// Runs CPU-bound core work off the async executor.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))?
}

async fn lattice(params: Result<Query<LatticeParams>, QueryRejection>) -> Result<Json<LatticeDocument>, ApiError> {
    let Query(params) = params.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let lattice = build_lattice(&params.to_spec()?)?;
    let dual = build_dual(&lattice);
    Ok(Json(LatticeDocument::of(&lattice, &dual)))
}

async fn evaluate(payload: Result<Json<EvaluateRequest>, JsonRejection>) -> Result<Json<DesignEvaluation>, ApiError> {
    let req = body(payload)?;
    blocking(move || {
        let lattice = build_lattice(&req.lattice)?;
        Ok(Json(evaluate_design(&lattice, &req.pattern, &req.options)?))
    })
    .await
}

async fn submit_search(
    State(state): State<AppState>,
    payload: Result<Json<SearchRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let req = body(payload)?;
    req.config.validate()?;
    let lattice = build_lattice(&req.lattice)?;
    CodeSpace::new(&lattice, req.config.enumeration_cap)?;
    let record = state.jobs.submit(req);
    Ok((StatusCode::ACCEPTED, Json(record)).into_response())
}

async fn list_searches(State(state): State<AppState>) -> Json<Vec<JobRecord>> {
    Json(state.jobs.ids().into_iter().filter_map(|id| state.jobs.record(id)).collect())
}

async fn search_status(State(state): State<AppState>, Path(raw): Path<String>) -> Result<Json<JobRecord>, ApiError> {
    let id = job_id(&raw)?;
    state
        .jobs
        .record(id)
        .map(Json)
        .ok_or_else(|| ApiError::not_found(format!("no search job {id}")))
}

async fn search_result(State(state): State<AppState>, Path(raw): Path<String>) -> Result<Response, ApiError> {
    let id = job_id(&raw)?;
    match state.jobs.report(id) {
        Lookup::Missing => Err(ApiError::not_found(format!("no search job {id}"))),
        Lookup::Pending(job_state) => Err(ApiError::conflict(format!(
            "search job {id} is {}, not done",
            job_state.as_str()
        ))),
        Lookup::Ready(report) => Ok(Json(report.as_ref()).into_response()),
    }
}

async fn delete_search(State(state): State<AppState>, Path(raw): Path<String>) -> Result<StatusCode, ApiError> {
    let id = job_id(&raw)?;
    if state.jobs.remove(id) {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::not_found(format!("no search job {id}")))
    }
}
