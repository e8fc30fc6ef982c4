//! Serializable descriptions of lattices and circuits.

use serde::Serialize;

use crate::dual::DualGraph;
use crate::lattice::{Coord, Family, Lattice, LatticeSpec};
use crate::pattern::CircuitLayout;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeSummary {
    pub spec: LatticeSpec,
    pub qubits: usize,
    pub bonds: usize,
    pub m: usize,
    pub n: usize,
    pub defects: usize,
    /// Size of the pattern-code space, `m + n + 1` bits.
    pub code_bits: usize,
}

impl LatticeSummary {
    pub fn of(lattice: &Lattice) -> Self {
        LatticeSummary {
            spec: lattice.spec().clone(),
            qubits: lattice.num_qubits(),
            bonds: lattice.bonds().len(),
            m: lattice.m(),
            n: lattice.n(),
            defects: lattice.defects().len(),
            code_bits: lattice.m() + lattice.n() + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSummary {
    pub sites: usize,
    pub boundary: usize,
    pub interior: usize,
}

impl DualSummary {
    pub fn of(dual: &DualGraph) -> Self {
        DualSummary {
            sites: dual.len(),
            boundary: dual.len() - dual.interior_count(),
            interior: dual.interior_count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QubitEntry {
    pub id: usize,
    pub u: i32,
    pub v: i32,
    /// Position in the diamond drawing.
    pub x: i32,
    pub y: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BondEntry {
    pub id: usize,
    pub qubits: [usize; 2],
    pub family: Family,
    pub row: usize,
    pub parity: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectEntry {
    pub u: i32,
    pub v: i32,
    pub x: i32,
    pub y: i32,
}

/// Full lattice export: summary, dual summary, qubits and bonds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeDocument {
    #[serde(flatten)]
    pub summary: LatticeSummary,
    pub dual: DualSummary,
    pub qubit_list: Vec<QubitEntry>,
    pub bond_list: Vec<BondEntry>,
    pub defect_list: Vec<DefectEntry>,
    /// Bit order of pattern codes: `F1` rows keyed by `v`, `F2` rows by `u`,
    /// both ascending.
    pub row_keys: RowKeys,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowKeys {
    pub f1: Vec<i32>,
    pub f2: Vec<i32>,
}

impl LatticeDocument {
    pub fn of(lattice: &Lattice, dual: &DualGraph) -> Self {
        let entry = |id: usize, c: Coord| {
            let (x, y) = lattice.drawing(c);
            QubitEntry {
                id,
                u: c.u,
                v: c.v,
                x,
                y,
            }
        };
        LatticeDocument {
            summary: LatticeSummary::of(lattice),
            dual: DualSummary::of(dual),
            qubit_list: lattice.qubits().iter().enumerate().map(|(i, &c)| entry(i, c)).collect(),
            bond_list: lattice
                .bonds()
                .iter()
                .map(|b| BondEntry {
                    id: b.id,
                    qubits: [b.lower, b.upper],
                    family: b.family,
                    row: b.row,
                    parity: b.parity,
                })
                .collect(),
            defect_list: lattice
                .defects()
                .iter()
                .map(|&c| {
                    let (x, y) = lattice.drawing(c);
                    DefectEntry { u: c.u, v: c.v, x, y }
                })
                .collect(),
            row_keys: RowKeys {
                f1: lattice.rows(Family::F1).iter().map(|r| r.key).collect(),
                f2: lattice.rows(Family::F2).iter().map(|r| r.key).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateEntry {
    pub bond: usize,
    pub qubits: [usize; 2],
    pub coords: [Coord; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleEntry {
    pub cycle: usize,
    pub letter: String,
    pub gates: Vec<GateEntry>,
}

/// Circuit export: pattern text, cycle letters and per-cycle gates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitDocument {
    pub pattern: String,
    pub depth: usize,
    /// Role letters before the order swap.
    pub sequence: String,
    /// Letters of the layers actually applied.
    pub physical: String,
    pub qubits: Vec<Coord>,
    pub cycles: Vec<CycleEntry>,
}

impl CircuitDocument {
    pub fn of(circuit: &CircuitLayout) -> Self {
        let lattice = circuit.lattice();
        CircuitDocument {
            pattern: circuit.code().to_string(),
            depth: circuit.depth(),
            sequence: circuit.sequence().to_string(),
            physical: circuit.physical_letters().iter().map(|l| l.to_string()).collect(),
            qubits: lattice.qubits().to_vec(),
            cycles: circuit
                .cycles()
                .iter()
                .zip(circuit.physical_letters())
                .enumerate()
                .map(|(t, (bonds, letter))| CycleEntry {
                    cycle: t,
                    letter: letter.to_string(),
                    gates: bonds
                        .iter()
                        .map(|&id| {
                            let b = lattice.bond(id);
                            GateEntry {
                                bond: id,
                                qubits: [b.lower, b.upper],
                                coords: [lattice.coord(b.lower), lattice.coord(b.upper)],
                            }
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
