//! Evaluation of a single design, shared by the command line and the service.

use serde::{Deserialize, Serialize};

use crate::document::LatticeSummary;
use crate::error::{Error, Result};
use crate::fidelity::{gate_counts, predict_circuit_fidelity, FidelityEstimate, GateCounts, NoiseModel};
use crate::lattice::{BondId, Coord, Lattice};
use crate::pattern::{assemble_circuit, sequences_for_depth, PatternCode};
use crate::sfa::{sfa_cost, CatalogSummary, CutCatalog, PathSearchConfig, SfaBreakdown, SfaResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluateOptions {
    pub depth: usize,
    pub paths: PathSearchConfig,
    pub allow_junction_repeat: bool,
    pub noise: Option<NoiseModel>,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        EvaluateOptions {
            depth: 20,
            paths: PathSearchConfig::default(),
            allow_junction_repeat: false,
            noise: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutReport {
    pub sites: Vec<Coord>,
    pub edges: usize,
    pub effective_edges: usize,
    pub crossed_bonds: Vec<BondId>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailScore {
    pub tail: String,
    pub log2_cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignEvaluation {
    pub lattice: LatticeSummary,
    pub pattern: PatternCode,
    pub depth: usize,
    pub sequence: String,
    /// Chosen tail word when the depth is not a multiple of 4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tails: Vec<TailScore>,
    pub breakdown: SfaBreakdown,
    pub cut: CutReport,
    pub cuts: CatalogSummary,
    pub gates: GateCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityEstimate>,
}

pub fn evaluate_design(lattice: &Lattice, code: &PatternCode, opts: &EvaluateOptions) -> Result<DesignEvaluation> {
    code.check(lattice)?;
    if let Some(noise) = &opts.noise {
        noise.validate()?;
    }
    let catalog = CutCatalog::build(lattice, &opts.paths)?;
    evaluate_with_catalog(lattice, &catalog, code, opts)
}

/// Scores `code` at `opts.depth`. When the depth is not a multiple of 4 every
/// tail word is scored and the costliest (first on ties) is reported.
pub fn evaluate_with_catalog(
    lattice: &Lattice,
    catalog: &CutCatalog,
    code: &PatternCode,
    opts: &EvaluateOptions,
) -> Result<DesignEvaluation> {
    if opts.depth == 0 {
        return Err(Error::InvalidDepth {
            depth: 0,
            reason: "a circuit needs at least one cycle",
        });
    }
    let sequences = sequences_for_depth(opts.depth, opts.allow_junction_repeat)?;
    let mut best: Option<(_, SfaResult)> = None;
    let mut tails = Vec::new();
    for seq in &sequences {
        let circuit = assemble_circuit(lattice, code, seq)?;
        let result = sfa_cost(&circuit, catalog)?;
        if let Some(word) = seq.tail_word() {
            tails.push(TailScore {
                tail: word,
                log2_cost: result.breakdown.log2_cost,
            });
        }
        if best
            .as_ref()
            .is_none_or(|(_, r)| result.breakdown.log2_cost > r.breakdown.log2_cost)
        {
            best = Some((circuit, result));
        }
    }
    let (circuit, result) = best.expect("at least one sequence");
    let fidelity = opts
        .noise
        .as_ref()
        .map(|n| predict_circuit_fidelity(&circuit, n))
        .transpose()?;
    Ok(DesignEvaluation {
        lattice: LatticeSummary::of(lattice),
        pattern: code.clone(),
        depth: opts.depth,
        sequence: circuit.sequence().to_string(),
        tail: circuit.sequence().tail_word(),
        tails,
        cut: CutReport {
            sites: result.path.sites().to_vec(),
            edges: result.path.edges(),
            effective_edges: result.path.effective_edges(),
            crossed_bonds: result.path.crossed_bonds().to_vec(),
        },
        breakdown: result.breakdown,
        cuts: catalog.summary(),
        gates: gate_counts(&circuit),
        fidelity,
    })
}
