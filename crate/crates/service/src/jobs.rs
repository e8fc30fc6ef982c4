//! Search jobs: a synchronized store plus one worker thread that runs queued
//! jobs in submission order.

use std::collections::BTreeMap;
use std::sync::mpsc::{channel, Sender};
use std::sync::{Arc, Mutex, MutexGuard};
use std::thread;

use serde::{Deserialize, Serialize};

use rqc_core::search::{search_with_progress, SearchConfig, SearchProgress, SearchReport};
use rqc_core::{build_lattice, LatticeSpec};

use crate::error::kind_name;

pub type JobId = u64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRequest {
    pub lattice: LatticeSpec,
    #[serde(flatten)]
    pub config: SearchConfig,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
}

impl JobState {
    pub fn as_str(self) -> &'static str {
        match self {
            JobState::Queued => "queued",
            JobState::Running => "running",
            JobState::Done => "done",
            JobState::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JobFailure {
    pub error: String,
    pub kind: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JobRecord {
    pub id: JobId,
    pub state: JobState,
    pub progress: f64,
    /// Location of the report once the job is done.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<JobFailure>,
    pub submitted: SearchRequest,
}

struct Job {
    request: SearchRequest,
    state: JobState,
    progress: Arc<SearchProgress>,
    /// Highest fraction reported so far.
    seen: f64,
    report: Option<Arc<SearchReport>>,
    failure: Option<JobFailure>,
}

#[derive(Default)]
struct Inner {
    next: JobId,
    jobs: BTreeMap<JobId, Job>,
}

/// Outcome of asking for a job's report.
pub enum Lookup {
    Missing,
    Pending(JobState),
    Ready(Arc<SearchReport>),
}

#[derive(Clone)]
pub struct JobStore {
    inner: Arc<Mutex<Inner>>,
    queue: Sender<JobId>,
}

impl Default for JobStore {
    fn default() -> Self {
        Self::new()
    }
}

impl JobStore {
    pub fn new() -> Self {
        let inner = Arc::new(Mutex::new(Inner::default()));
        let (queue, rx) = channel::<JobId>();
        let worker = Arc::clone(&inner);
        thread::Builder::new()
            .name("rqc-search".into())
            .spawn(move || {
                for id in rx {
                    run(&worker, id);
                }
            })
            .expect("spawning the search worker");
        JobStore { inner, queue }
    }

    fn lock(&self) -> MutexGuard<'_, Inner> {
        lock(&self.inner)
    }

    pub fn submit(&self, request: SearchRequest) -> JobRecord {
        let record = {
            let mut inner = self.lock();
            inner.next += 1;
            let id = inner.next;
            inner.jobs.insert(
                id,
                Job {
                    request,
                    state: JobState::Queued,
                    progress: Arc::new(SearchProgress::new()),
                    seen: 0.0,
                    report: None,
                    failure: None,
                },
            );
            record(id, inner.jobs.get_mut(&id).expect("just inserted"))
        };
        // the receiver lives as long as the worker thread, which never exits
        // while a sender is alive
        let _ = self.queue.send(record.id);
        record
    }

    pub fn record(&self, id: JobId) -> Option<JobRecord> {
        let mut inner = self.lock();
        inner.jobs.get_mut(&id).map(|job| record(id, job))
    }

    pub fn report(&self, id: JobId) -> Lookup {
        match self.lock().jobs.get(&id) {
            None => Lookup::Missing,
            Some(job) => match &job.report {
                Some(report) => Lookup::Ready(Arc::clone(report)),
                None => Lookup::Pending(job.state),
            },
        }
    }

    /// Drops a job, cancelling it if it is running. Returns whether it existed.
    pub fn remove(&self, id: JobId) -> bool {
        match self.lock().jobs.remove(&id) {
            Some(job) => {
                job.progress.cancel();
                true
            }
            None => false,
        }
    }

    pub fn ids(&self) -> Vec<JobId> {
        self.lock().jobs.keys().copied().collect()
    }
}

fn lock(inner: &Mutex<Inner>) -> MutexGuard<'_, Inner> {
    inner.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn record(id: JobId, job: &mut Job) -> JobRecord {
    let live = match job.state {
        JobState::Queued => 0.0,
        JobState::Running => job.progress.fraction(),
        JobState::Done => 1.0,
        JobState::Failed => job.seen,
    };
    job.seen = job.seen.max(live);
    JobRecord {
        id,
        state: job.state,
        progress: job.seen,
        result: (job.state == JobState::Done).then(|| format!("/api/search/{id}/result")),
        failure: job.failure.clone(),
        submitted: job.request.clone(),
    }
}

fn run(inner: &Mutex<Inner>, id: JobId) {
    let (request, progress) = {
        let mut guard = lock(inner);
        let Some(job) = guard.jobs.get_mut(&id) else { return };
        job.state = JobState::Running;
        (job.request.clone(), Arc::clone(&job.progress))
    };
    let outcome =
        build_lattice(&request.lattice).and_then(|lattice| search_with_progress(&lattice, &request.config, Some(&progress)));
    let mut guard = lock(inner);
    let Some(job) = guard.jobs.get_mut(&id) else { return };
    match outcome {
        Ok(report) => {
            job.report = Some(Arc::new(report));
            job.state = JobState::Done;
            job.seen = 1.0;
        }
        Err(e) => {
            job.seen = job.seen.max(progress.fraction());
            job.failure = Some(JobFailure {
                error: e.to_string(),
                kind: kind_name(e.kind()),
            });
            job.state = JobState::Failed;
        }
    }
}
