//! Cross gates of a circuit and the wedge and DCD formations among them.

use serde::Serialize;

use crate::dual::{Bipartition, Side};
use crate::lattice::{BondId, QubitId};
use crate::pattern::CircuitLayout;

/// A two-qubit gate whose qubits sit on opposite sides of a cut.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossGate {
    pub cycle: usize,
    pub bond: BondId,
    pub qubits: [QubitId; 2],
    pub sides: [Side; 2],
    pub first_cycle: bool,
    pub final_cycle: bool,
}

impl CrossGate {
    /// Number of qubits this gate shares with `other`.
    pub fn shared(&self, other: &CrossGate) -> usize {
        self.qubits.iter().filter(|q| other.qubits.contains(q)).count()
    }
}

/// Cross gates in chronological order (cycle, then bond id).
pub fn cross_gates(circuit: &CircuitLayout, bip: &Bipartition) -> Vec<CrossGate> {
    let lattice = circuit.lattice();
    let depth = circuit.depth();
    let mut out = Vec::new();
    for (t, cycle) in circuit.cycles().iter().enumerate() {
        for &id in cycle {
            let b = lattice.bond(id);
            let sides = [bip.side(b.lower), bip.side(b.upper)];
            if sides[0] != sides[1] {
                out.push(CrossGate {
                    cycle: t,
                    bond: id,
                    qubits: [b.lower, b.upper],
                    sides,
                    first_cycle: t == 0,
                    final_cycle: t + 1 == depth,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DcdMatch {
    pub count: usize,
    /// Indices into the gate list.
    pub triples: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WedgeMatch {
    pub count: usize,
    pub pairs: Vec<[usize; 2]>,
}

/// Range of gate indices in `cycle`, given gates sorted by cycle.
fn cycle_range(gates: &[CrossGate], from: usize, cycle: usize) -> std::ops::Range<usize> {
    let start = from + gates[from..].partition_point(|g| g.cycle < cycle);
    let end = start + gates[start..].partition_point(|g| g.cycle == cycle);
    start..end
}

/// Greedy chronological matching of `(a,b), (b,c), (a,b)` triples in three
/// consecutive cycles. Each gate joins at most one triple; when candidates
/// overlap the earliest first gate wins.
pub fn detect_dcd(gates: &[CrossGate]) -> DcdMatch {
    let mut used = vec![false; gates.len()];
    let mut found = DcdMatch::default();
    for i in 0..gates.len() {
        if used[i] {
            continue;
        }
        let g = gates[i];
        let middle = cycle_range(gates, i, g.cycle + 1);
        let closing = cycle_range(gates, middle.end, g.cycle + 2);
        let Some(k) = closing.clone().find(|&k| !used[k] && gates[k].bond == g.bond) else {
            continue;
        };
        if let Some(j) = middle.clone().find(|&j| !used[j] && gates[j].shared(&g) == 1) {
            used[i] = true;
            used[j] = true;
            used[k] = true;
            found.triples.push([i, j, k]);
        }
    }
    found.count = found.triples.len();
    found
}

/// Greedy pairing of cross gates in adjacent cycles that share exactly one
/// qubit, skipping gates flagged in `excluded`. Chains are not extended: in
/// `t:(p,q), t+1:(q,r), t+2:(r,s)` only the first pair forms a wedge.
pub fn detect_wedges_excluding(gates: &[CrossGate], excluded: &[bool]) -> WedgeMatch {
    let mut used = excluded.to_vec();
    used.resize(gates.len(), false);
    let mut found = WedgeMatch::default();
    for i in 0..gates.len() {
        if used[i] {
            continue;
        }
        let next = cycle_range(gates, i, gates[i].cycle + 1);
        if let Some(j) = next.clone().find(|&j| !used[j] && gates[j].shared(&gates[i]) == 1) {
            used[i] = true;
            used[j] = true;
            found.pairs.push([i, j]);
        }
    }
    found.count = found.pairs.len();
    found
}

pub fn detect_wedges(gates: &[CrossGate]) -> WedgeMatch {
    detect_wedges_excluding(gates, &[])
}
