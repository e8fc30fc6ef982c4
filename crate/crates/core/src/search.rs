//! Exhaustive ranking of pattern codes by SFA cost.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::document::LatticeSummary;
use crate::error::{Error, Result};
use crate::lattice::{bounding_box, BondId, Coord, Family, Lattice};
use crate::pattern::{
    bond_letters, cycle_sequence, tail_sequences, CodeSpace, CycleSequence, Letter, PatternCode, DEFAULT_ENUMERATION_CAP,
};
use crate::sfa::{CatalogSummary, CostScratch, CutCatalog, PathSearchConfig, SfaBreakdown};

/// Number of progress steps the code space is divided into.
pub const PROGRESS_STEPS: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub depth: usize,
    pub paths: PathSearchConfig,
    pub top_k: usize,
    /// Worker threads; 0 picks the number of available cores.
    #[serde(skip_serializing)]
    pub threads: usize,
    pub include_baseline: bool,
    pub enumeration_cap: u32,
    pub allow_junction_repeat: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: 20,
            paths: PathSearchConfig::default(),
            top_k: 10,
            threads: 0,
            include_baseline: true,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            allow_junction_repeat: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.top_k == 0 {
            return Err(Error::InvalidParameter("top_k must be at least 1".into()));
        }
        if self.depth < 4 {
            return Err(Error::InvalidDepth {
                depth: self.depth,
                reason: "a search needs at least 4 cycles",
            });
        }
        self.paths.validate()
    }
}

/// Shared progress counters, readable while a search runs.
#[derive(Debug, Default)]
pub struct SearchProgress {
    done: AtomicU64,
    total: AtomicU64,
    cancelled: AtomicBool,
}

impl SearchProgress {
    pub fn new() -> Self {
        Self::default()
    }

    /// Completed fraction in `[0, 1]`.
    pub fn fraction(&self) -> f64 {
        let total = self.total.load(AtomicOrdering::Acquire);
        if total == 0 {
            return 0.0;
        }
        (self.done.load(AtomicOrdering::Acquire) as f64 / total as f64).min(1.0)
    }

    pub fn cancel(&self) {
        self.cancelled.store(true, AtomicOrdering::Release);
    }

    pub fn is_cancelled(&self) -> bool {
        self.cancelled.load(AtomicOrdering::Acquire)
    }

    fn start(&self, total: u64) {
        self.done.store(0, AtomicOrdering::Release);
        self.total.store(total, AtomicOrdering::Release);
    }

    fn step(&self) {
        self.done.fetch_add(1, AtomicOrdering::AcqRel);
    }
}

/// Ranking key. Smaller is better: higher cost, then higher symmetry, then
/// lower code index, then earlier tail word.
#[derive(Copy, Clone, Debug, PartialEq)]
struct Score {
    cost: f64,
    symmetry: u8,
    index: u64,
    tail: usize,
}

impl Score {
    fn rank_cmp(&self, other: &Score) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.symmetry.cmp(&self.symmetry))
            .then(self.index.cmp(&other.index))
            .then(self.tail.cmp(&other.tail))
    }
}

#[derive(Clone, Debug)]
struct Scored {
    score: Score,
    class: usize,
    breakdown: SfaBreakdown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub rank: u64,
    pub index: u64,
    pub code: PatternCode,
    pub sequence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<String>,
    pub symmetry: u8,
    pub breakdown: SfaBreakdown,
    /// Dual-site coordinates of the cheapest cut.
    pub cut: Vec<Coord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineReport {
    #[serde(flatten)]
    pub candidate: Candidate,
    /// Codes ranked strictly ahead of the baseline, plus one. For depths not
    /// divisible by 4 this is the rank at the prefix depth.
    pub code_rank: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunInfo {
    pub threads: usize,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub lattice: LatticeSummary,
    pub depth: usize,
    /// Depth the code space was ranked at: `4 * (depth / 4)`.
    pub prefix_depth: usize,
    pub candidates: u64,
    pub tail_candidates: usize,
    pub cuts: CatalogSummary,
    /// Codes sharing the optimal cost at the prefix depth.
    pub optimum_ties: u64,
    /// Best designs at the full depth. With a tail these are the tail words
    /// of the best prefix code.
    pub top: Vec<Candidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefix_top: Option<Vec<Candidate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineReport>,
    pub config: SearchConfig,
    pub run: RunInfo,
}

impl SearchReport {
    pub fn optimum(&self) -> &Candidate {
        &self.top[0]
    }
}

/// Images of every bond under the mirror and rotation symmetries of the
/// lattice's bounding box that preserve both region and defects.
#[derive(Clone, Debug)]
pub struct LatticeSymmetries {
    bond_maps: Vec<Vec<BondId>>,
    family_bonds: [Vec<BondId>; 2],
}

impl LatticeSymmetries {
    pub fn new(lattice: &Lattice) -> Self {
        let (lo, hi) = bounding_box(lattice.region().iter().copied());
        let transforms: [(bool, bool); 3] = [(true, false), (false, true), (true, true)];
        let mut bond_maps = Vec::new();
        for (flip_u, flip_v) in transforms {
            let map = |c: Coord| {
                Coord::new(
                    if flip_u { lo.u + hi.u - c.u } else { c.u },
                    if flip_v { lo.v + hi.v - c.v } else { c.v },
                )
            };
            let region_ok = lattice.region().iter().all(|&c| lattice.in_region(map(c)));
            let defects_ok = lattice.defects().iter().all(|&c| lattice.qubit_at(map(c)).is_none());
            if !(region_ok && defects_ok) {
                continue;
            }
            let images = lattice
                .bonds()
                .iter()
                .map(|b| {
                    let (p, q) = (map(lattice.coord(b.lower)), map(lattice.coord(b.upper)));
                    lattice
                        .bond_at(b.family, p.min(q))
                        .expect("symmetric lattices map bonds to bonds")
                })
                .collect();
            bond_maps.push(images);
        }
        let family_bonds = Family::ALL.map(|f| lattice.bonds().iter().filter(|b| b.family == f).map(|b| b.id).collect());
        LatticeSymmetries { bond_maps, family_bonds }
    }

    /// Number of valid symmetries that map each family's pattern layer onto
    /// itself or onto its complement.
    pub fn score(&self, letters: &[Letter]) -> u8 {
        let fits = |map: &Vec<BondId>| {
            self.family_bonds.iter().all(|bonds| {
                let same = bonds.iter().all(|&b| letters[map[b]] == letters[b]);
                same || bonds.iter().all(|&b| letters[map[b]] != letters[b])
            })
        };
        self.bond_maps.iter().filter(|m| fits(m)).count() as u8
    }
}

pub fn symmetry_score(lattice: &Lattice, code: &PatternCode) -> Result<u8> {
    Ok(LatticeSymmetries::new(lattice).score(&bond_letters(lattice, code)?))
}

struct Context<'a> {
    lattice: &'a Lattice,
    catalog: &'a CutCatalog,
    symmetries: LatticeSymmetries,
    space: CodeSpace,
}

impl Context<'_> {
    fn score(&self, index: u64, code: &PatternCode, seq: &[Letter], tail: usize, scratch: &mut CostScratch) -> Scored {
        let letters = bond_letters(self.lattice, code).expect("codes from the space fit the lattice");
        let (class, breakdown) = self.catalog.min_cost(self.lattice, seq, &letters, scratch);
        Scored {
            score: Score {
                cost: breakdown.log2_cost,
                symmetry: self.symmetries.score(&letters),
                index,
                tail,
            },
            class,
            breakdown,
        }
    }

    fn candidate(&self, s: &Scored, rank: u64, code: PatternCode, seq: &CycleSequence) -> Candidate {
        let seq_letters: String = seq.letters().iter().map(Letter::to_string).collect();
        Candidate {
            rank,
            index: s.score.index,
            code,
            sequence: seq_letters,
            tail: seq.tail_word(),
            symmetry: s.score.symmetry,
            breakdown: s.breakdown.clone(),
            cut: self.catalog.classes()[s.class].path.sites().to_vec(),
        }
    }
}

/// Partial result for one contiguous range of code indices.
#[derive(Default)]
struct ChunkResult {
    top: Vec<Scored>,
    best_cost: Option<f64>,
    ties: u64,
    ahead_of_baseline: u64,
}

fn push_top(top: &mut Vec<Scored>, s: Scored, k: usize) {
    if top.len() == k && top.last().is_some_and(|w| s.score.rank_cmp(&w.score) != Ordering::Less) {
        return;
    }
    let at = top.partition_point(|t| t.score.rank_cmp(&s.score) == Ordering::Less);
    top.insert(at, s);
    top.truncate(k);
}

fn merge(mut a: ChunkResult, b: ChunkResult, k: usize) -> ChunkResult {
    for s in b.top {
        push_top(&mut a.top, s, k);
    }
    match (a.best_cost, b.best_cost) {
        (_, None) => {}
        (None, Some(_)) => {
            a.best_cost = b.best_cost;
            a.ties = b.ties;
        }
        (Some(x), Some(y)) if y > x => {
            a.best_cost = Some(y);
            a.ties = b.ties;
        }
        (Some(x), Some(y)) if y == x => a.ties += b.ties,
        _ => {}
    }
    a.ahead_of_baseline += b.ahead_of_baseline;
    a
}

fn run_chunk(
    ctx: &Context,
    range: std::ops::Range<u64>,
    seq: &[Letter],
    k: usize,
    baseline: Option<&Score>,
    progress: Option<&SearchProgress>,
) -> Result<ChunkResult> {
    if progress.is_some_and(SearchProgress::is_cancelled) {
        return Err(Error::Cancelled);
    }
    let mut scratch = CostScratch::default();
    let mut out = ChunkResult::default();
    for index in range {
        let code = ctx.space.code(index);
        let s = ctx.score(index, &code, seq, 0, &mut scratch);
        if baseline.is_some_and(|b| s.score.rank_cmp(b) == Ordering::Less) {
            out.ahead_of_baseline += 1;
        }
        match out.best_cost {
            Some(c) if s.score.cost < c => {}
            Some(c) if s.score.cost == c => out.ties += 1,
            _ => {
                out.best_cost = Some(s.score.cost);
                out.ties = 1;
            }
        }
        push_top(&mut out.top, s, k);
    }
    if let Some(p) = progress {
        p.step();
    }
    Ok(out)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {threads} worker threads: {e}")))
}

pub fn search(lattice: &Lattice, cfg: &SearchConfig) -> Result<SearchReport> {
    search_with_progress(lattice, cfg, None)
}

/// Scores every pattern code at depth `4 * (d / 4)`; for other depths the best
/// code is then fixed and every tail word is scored at the full depth.
pub fn search_with_progress(lattice: &Lattice, cfg: &SearchConfig, progress: Option<&SearchProgress>) -> Result<SearchReport> {
    cfg.validate()?;
    let started = Instant::now();
    let space = CodeSpace::new(lattice, cfg.enumeration_cap)?;
    let catalog = CutCatalog::build(lattice, &cfg.paths)?;
    let ctx = Context {
        lattice,
        catalog: &catalog,
        symmetries: LatticeSymmetries::new(lattice),
        space,
    };
    let tail_len = cfg.depth % 4;
    let prefix_depth = cfg.depth - tail_len;
    let prefix_seq = cycle_sequence(prefix_depth)?;
    let prefix_letters = prefix_seq.letters().to_vec();
    let tails = if tail_len > 0 {
        tail_sequences(cfg.depth, cfg.allow_junction_repeat)?
    } else {
        Vec::new()
    };

    let total = space.len();
    let chunk = total.div_ceil(PROGRESS_STEPS);
    let chunks: Vec<std::ops::Range<u64>> = (0..total.div_ceil(chunk))
        .map(|c| c * chunk..((c + 1) * chunk).min(total))
        .collect();
    if let Some(p) = progress {
        p.start(chunks.len() as u64 + tails.len() as u64);
    }

    let threads = if cfg.threads == 0 {
        rayon::current_num_threads()
    } else {
        cfg.threads
    };
    let pool = thread_pool(threads)?;

    let baseline_code = PatternCode::baseline(lattice);
    let baseline_index = baseline_code.index();
    let baseline = cfg.include_baseline.then(|| {
        ctx.score(
            baseline_index,
            &baseline_code,
            &prefix_letters,
            0,
            &mut CostScratch::default(),
        )
    });
    let baseline_score = baseline.as_ref().map(|b| b.score);

    let k = cfg.top_k;
    let results: Vec<ChunkResult> = pool.install(|| {
        chunks
            .par_iter()
            .map(|r| run_chunk(&ctx, r.clone(), &prefix_letters, k, baseline_score.as_ref(), progress))
            .collect::<Result<Vec<_>>>()
    })?;
    let merged = results.into_iter().fold(ChunkResult::default(), |a, b| merge(a, b, k));

    let ranked = |top: &[Scored], seq_for: &dyn Fn(&Scored) -> CycleSequence| -> Vec<Candidate> {
        top.iter()
            .enumerate()
            .map(|(i, s)| ctx.candidate(s, i as u64 + 1, space.code(s.score.index), &seq_for(s)))
            .collect()
    };
    let code_top = ranked(&merged.top, &|_| prefix_seq.clone());

    let (top, prefix_top, baseline_report) = if tails.is_empty() {
        let baseline_report = baseline.map(|b| BaselineReport {
            candidate: ctx.candidate(&b, merged.ahead_of_baseline + 1, baseline_code.clone(), &prefix_seq),
            code_rank: merged.ahead_of_baseline + 1,
        });
        (code_top, None, baseline_report)
    } else {
        let best = &merged.top[0];
        let best_code = space.code(best.score.index);
        let mut scratch = CostScratch::default();
        let mut scored_tails = Vec::with_capacity(tails.len());
        for (ti, seq) in tails.iter().enumerate() {
            if progress.is_some_and(SearchProgress::is_cancelled) {
                return Err(Error::Cancelled);
            }
            scored_tails.push(ctx.score(best.score.index, &best_code, seq.letters(), ti, &mut scratch));
            if let Some(p) = progress {
                p.step();
            }
        }
        let mut order: Vec<usize> = (0..tails.len()).collect();
        order.sort_by(|&a, &b| scored_tails[a].score.rank_cmp(&scored_tails[b].score));
        let top = order
            .iter()
            .take(k)
            .enumerate()
            .map(|(r, &ti)| ctx.candidate(&scored_tails[ti], r as u64 + 1, best_code.clone(), &tails[ti]))
            .collect();
        let baseline_report = baseline.map(|_| {
            let (ti, s) = tails
                .iter()
                .enumerate()
                .map(|(ti, seq)| (ti, ctx.score(baseline_index, &baseline_code, seq.letters(), ti, &mut scratch)))
                .min_by(|a, b| a.1.score.rank_cmp(&b.1.score))
                .expect("tail set is never empty");
            BaselineReport {
                candidate: ctx.candidate(&s, merged.ahead_of_baseline + 1, baseline_code.clone(), &tails[ti]),
                code_rank: merged.ahead_of_baseline + 1,
            }
        });
        (top, Some(code_top), baseline_report)
    };

    Ok(SearchReport {
        lattice: LatticeSummary::of(lattice),
        depth: cfg.depth,
        prefix_depth,
        candidates: total,
        tail_candidates: tails.len(),
        cuts: catalog.summary(),
        optimum_ties: merged.ties,
        top,
        prefix_top,
        baseline: baseline_report,
        config: SearchConfig {
            paths: catalog.config().clone(),
            ..cfg.clone()
        },
        run: RunInfo {
            threads,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    })
}
