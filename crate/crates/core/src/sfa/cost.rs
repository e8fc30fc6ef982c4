//! Schrödinger-Feynman cost of a circuit across a bipartition.
//!
//! `C = 4^(n_c - n_wedge - n_DCD - (n_st + n_end)/2) * (2^n1 + 2^n2)`, carried
//! as `log2 C` with the exponent of 4 floored at zero.

use serde::Serialize;

use crate::dual::{Bipartition, CutPath};
use crate::error::{Error, Result};
use crate::lattice::{BondId, Lattice};
use crate::pattern::{CircuitLayout, Letter};

use super::gates::{cross_gates, detect_dcd, detect_wedges_excluding, CrossGate};
use super::paths::CutCatalog;

/// Schmidt rank of an fsim gate across its two qubits.
pub const CHI_FSIM: u32 = 4;
/// Schmidt rank of the cphase a first- or final-cycle fsim reduces to.
pub const CHI_CPHASE: u32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SfaBreakdown {
    pub n_c: usize,
    pub n_wedge: usize,
    #[serde(rename = "n_DCD")]
    pub n_dcd: usize,
    pub n_st: usize,
    pub n_end: usize,
    pub n1: usize,
    pub n2: usize,
    pub chi: u32,
    pub chi_boundary: u32,
    pub log2_cost: f64,
}

/// `log2(2^a + 2^b)` computed so that equal inputs give bit-identical output.
pub fn log2_sum_pow2(a: usize, b: usize) -> f64 {
    let (hi, gap) = (a.max(b), a.abs_diff(b));
    hi as f64 + (-(gap as f64)).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Twice the exponent of 4, floored at zero.
pub fn half_exponent(n_c: usize, n_wedge: usize, n_dcd: usize, n_st: usize, n_end: usize) -> u64 {
    let full = 2 * n_c as i64 - 2 * (n_wedge + n_dcd) as i64 - (n_st + n_end) as i64;
    full.max(0) as u64
}

pub fn log2_cost(n_c: usize, n_wedge: usize, n_dcd: usize, n_st: usize, n_end: usize, n1: usize, n2: usize) -> f64 {
    // 4^(x/2) = 2^x, so the half exponent is already the log2 contribution
    half_exponent(n_c, n_wedge, n_dcd, n_st, n_end) as f64 + log2_sum_pow2(n1, n2)
}

/// Applies the discounts to a chronological cross-gate list: DCD triples
/// first, wedges among the remaining gates, then first/final-cycle halving
/// for gates still undiscounted.
pub fn evaluate_gates(gates: &[CrossGate], n1: usize, n2: usize) -> SfaBreakdown {
    let dcd = detect_dcd(gates);
    let mut discounted = vec![false; gates.len()];
    for &i in dcd.triples.iter().flatten() {
        discounted[i] = true;
    }
    let wedges = detect_wedges_excluding(gates, &discounted);
    for &i in wedges.pairs.iter().flatten() {
        discounted[i] = true;
    }
    let undiscounted = || gates.iter().zip(&discounted).filter(|(_, d)| !**d).map(|(g, _)| g);
    let n_st = undiscounted().filter(|g| g.first_cycle).count();
    let n_end = undiscounted().filter(|g| g.final_cycle && !g.first_cycle).count();
    SfaBreakdown {
        n_c: gates.len(),
        n_wedge: wedges.count,
        n_dcd: dcd.count,
        n_st,
        n_end,
        n1,
        n2,
        chi: CHI_FSIM,
        chi_boundary: CHI_CPHASE,
        log2_cost: log2_cost(gates.len(), wedges.count, dcd.count, n_st, n_end, n1, n2),
    }
}

pub fn evaluate_path(circuit: &CircuitLayout, bip: &Bipartition) -> Result<SfaBreakdown> {
    if bip.n1() == 0 || bip.n2() == 0 {
        return Err(Error::DegenerateBipartition);
    }
    Ok(evaluate_gates(&cross_gates(circuit, bip), bip.n1(), bip.n2()))
}

/// Minimum-cost cut of a circuit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SfaResult {
    pub breakdown: SfaBreakdown,
    pub path: CutPath,
    #[serde(skip)]
    pub class: usize,
}

/// Reusable buffers for scoring many circuits against one catalog.
#[derive(Default)]
pub struct CostScratch {
    gates: Vec<CrossGate>,
}

impl CutCatalog {
    /// Minimum over all bipartitions, returning `(class index, breakdown)`.
    /// Ties go to the earliest class, whose representative path has the
    /// fewest edges and is lexicographically smallest.
    pub fn min_cost(
        &self,
        lattice: &Lattice,
        letters: &[Letter],
        bond_letters: &[Letter],
        scratch: &mut CostScratch,
    ) -> (usize, SfaBreakdown) {
        let depth = letters.len();
        let mut best: Option<(usize, SfaBreakdown)> = None;
        for (ci, class) in self.classes().iter().enumerate() {
            fill_cross_gates(
                lattice,
                &class.cut_bonds,
                &class.bipartition,
                letters,
                bond_letters,
                &mut scratch.gates,
                depth,
            );
            let b = evaluate_gates(&scratch.gates, class.bipartition.n1(), class.bipartition.n2());
            if best.as_ref().is_none_or(|(_, cur)| b.log2_cost < cur.log2_cost) {
                best = Some((ci, b));
            }
        }
        best.expect("catalog is never empty")
    }
}

fn fill_cross_gates(
    lattice: &Lattice,
    cut_bonds: &[BondId],
    bip: &Bipartition,
    letters: &[Letter],
    bond_letters: &[Letter],
    out: &mut Vec<CrossGate>,
    depth: usize,
) {
    out.clear();
    for (t, &letter) in letters.iter().enumerate() {
        for &id in cut_bonds {
            if bond_letters[id] == letter {
                let b = lattice.bond(id);
                out.push(CrossGate {
                    cycle: t,
                    bond: id,
                    qubits: [b.lower, b.upper],
                    sides: [bip.side(b.lower), bip.side(b.upper)],
                    first_cycle: t == 0,
                    final_cycle: t + 1 == depth,
                });
            }
        }
    }
}

/// The cheapest admissible cut for `circuit`.
pub fn sfa_cost(circuit: &CircuitLayout, catalog: &CutCatalog) -> Result<SfaResult> {
    let lattice = circuit.lattice();
    let bond_letters = crate::pattern::bond_letters(lattice, circuit.code())?;
    let (class, breakdown) = catalog.min_cost(
        lattice,
        circuit.physical_letters(),
        &bond_letters,
        &mut CostScratch::default(),
    );
    Ok(SfaResult {
        breakdown,
        path: catalog.classes()[class].path.clone(),
        class,
    })
}
