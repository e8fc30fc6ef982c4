//! Bipartite entanglement entropy of simulated states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::dual::{Bipartition, Side};
use crate::error::Result;
use crate::pattern::CircuitLayout;

use super::statevector::{simulate_with, GateModel, StateVector};

/// Eigenvalues at or below this contribute nothing to the entropy.
pub const EIGENVALUE_FLOOR: f64 = 1e-15;

/// Von Neumann entropy in bits of the reduced state on either side.
pub fn entanglement_entropy(state: &StateVector, bip: &Bipartition) -> f64 {
    let left = bip.members(Side::Left);
    let right = bip.members(Side::Right);
    let (rows, cols) = if left.len() <= right.len() {
        (left, right)
    } else {
        (right, left)
    };

    // amplitude index -> (row, col) by gathering each side's bits
    let gather = |x: usize, qubits: &[usize]| {
        qubits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &q)| acc | (((x >> q) & 1) << k))
    };
    // row-major coefficient matrix, one contiguous row per `rows` basis state
    let width = 1usize << cols.len();
    let mut m = vec![Complex64::new(0.0, 0.0); (1 << rows.len()) * width];
    for (x, &a) in state.amplitudes().iter().enumerate() {
        m[gather(x, &rows) * width + gather(x, &cols)] = a;
    }
    let height = 1usize << rows.len();
    let row = |i: usize| &m[i * width..(i + 1) * width];
    let mut rho = DMatrix::<Complex64>::zeros(height, height);
    for i in 0..height {
        for j in i..height {
            let dot: Complex64 = row(i).iter().zip(row(j)).map(|(a, b)| a * b.conj()).sum();
            rho[(i, j)] = dot;
            rho[(j, i)] = dot.conj();
        }
    }
    rho.symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > EIGENVALUE_FLOOR)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub seed: u64,
    pub n1: usize,
    pub n2: usize,
    /// Entropy after `t` cycles, `t = 0..=depth`.
    pub entropy: Vec<f64>,
    /// Cross gates applied in the first `t` cycles.
    pub cross_gates: Vec<usize>,
}

impl EntropyProfile {
    /// `(cycle, S)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entropy.iter().copied().enumerate()
    }
}

pub fn entropy_profile(
    circuit: &CircuitLayout,
    bip: &Bipartition,
    seed: u64,
    model: &GateModel,
    cap: usize,
) -> Result<EntropyProfile> {
    let lattice = circuit.lattice();
    let mut entropy = Vec::with_capacity(circuit.depth() + 1);
    simulate_with(circuit, seed, model, cap, |_, s| entropy.push(entanglement_entropy(s, bip)))?;
    let mut cross_gates = vec![0];
    for cycle in circuit.cycles() {
        let crossing = cycle
            .iter()
            .filter(|&&b| bip.side(lattice.bond(b).lower) != bip.side(lattice.bond(b).upper))
            .count();
        cross_gates.push(cross_gates.last().copied().unwrap_or(0) + crossing);
    }
    Ok(EntropyProfile {
        seed,
        n1: bip.n1(),
        n2: bip.n2(),
        entropy,
        cross_gates,
    })
}
