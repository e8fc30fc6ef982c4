//! HTTP API over the design core.
//!
//! | Method | Path | Purpose |
//! |---|---|---|
//! | `GET` | `/api/lattice?mode=&width=&height=&xsize=&ysize=&defects=` | lattice and dual summary |
//! | `POST` | `/api/evaluate` | cost breakdown, best cut and fidelity of one design |
//! | `POST` | `/api/search` | queue an exhaustive search, `202` with the job record |
//! | `GET` | `/api/search` | all job records |
//! | `GET` | `/api/search/{id}` | job record with progress |
//! | `GET` | `/api/search/{id}/result` | search report, `409` until done |
//! | `DELETE` | `/api/search/{id}` | cancel and forget a job |
//!
//! Validation failures answer `400`; well-formed requests with no feasible
//! cut or beyond a size cap answer `422`.

mod error;
mod jobs;
mod routes;

use std::net::SocketAddr;

pub use error::ApiError;
pub use jobs::{JobFailure, JobId, JobRecord, JobState, JobStore, SearchRequest};
pub use routes::{router, AppState, EvaluateRequest};

/// Serves the API on `addr` until the process receives Ctrl-C.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
