//! XEB fidelity prediction from per-component error rates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BondId, QubitId};
use crate::pattern::CircuitLayout;

/// Pauli error rates. Overrides replace the uniform rate for one qubit (its
/// single-qubit gates and readout) or one bond.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub e1: f64,
    pub e2: f64,
    pub er: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub qubit_e1: BTreeMap<QubitId, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub qubit_er: BTreeMap<QubitId, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bond_e2: BTreeMap<BondId, f64>,
}

impl NoiseModel {
    pub fn uniform(e1: f64, e2: f64, er: f64) -> Self {
        NoiseModel {
            e1,
            e2,
            er,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [self.e1, self.e2, self.er]
            .into_iter()
            .chain(self.qubit_e1.values().copied())
            .chain(self.qubit_er.values().copied())
            .chain(self.bond_e2.values().copied());
        for r in rates {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::InvalidParameter(format!("error rate {r} is outside [0, 1)")));
            }
        }
        Ok(())
    }
}

/// Parses the `"e1 e2 er"` triple, separated by spaces or commas.
impl std::str::FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rates = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("\"{t}\" is not a rate")))
            })
            .collect::<Result<Vec<_>>>()?;
        let [e1, e2, er] = rates[..] else {
            return Err(Error::InvalidParameter(format!(
                "expected three rates \"e1 e2 er\", got {}",
                rates.len()
            )));
        };
        let model = NoiseModel::uniform(e1, e2, er);
        model.validate()?;
        Ok(model)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    /// Single-qubit gates: one layer before, between and after the cycles.
    pub g1: usize,
    pub g2: usize,
    pub q: usize,
}

pub fn gate_counts(circuit: &CircuitLayout) -> GateCounts {
    let n = circuit.lattice().num_qubits();
    GateCounts {
        g1: n * (circuit.depth() + 1),
        g2: circuit.gate_count(),
        q: n,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityEstimate {
    #[serde(rename = "F")]
    pub f: f64,
    /// Natural log of `F`, finite even when `F` underflows.
    pub ln_f: f64,
    /// Samples needed for a 3-sigma XEB estimate, `ceil(sqrt(9 / F))`.
    #[serde(rename = "Ns")]
    pub ns: f64,
    #[serde(flatten)]
    pub counts: GateCounts,
}

fn estimate(ln_f: f64, counts: GateCounts) -> FidelityEstimate {
    FidelityEstimate {
        f: ln_f.exp(),
        ln_f,
        ns: sample_count(ln_f),
        counts,
    }
}

/// `ceil(sqrt(9 / F))` from `ln F`.
pub fn sample_count(ln_f: f64) -> f64 {
    (3.0 * (-0.5 * ln_f).exp()).ceil()
}

/// Uniform-rate fidelity `(1-e1)^|G1| (1-e2)^|G2| (1-er)^|Q|`.
pub fn predict_fidelity(counts: GateCounts, noise: &NoiseModel) -> Result<FidelityEstimate> {
    noise.validate()?;
    let ln_f =
        counts.g1 as f64 * (-noise.e1).ln_1p() + counts.g2 as f64 * (-noise.e2).ln_1p() + counts.q as f64 * (-noise.er).ln_1p();
    Ok(estimate(ln_f, counts))
}

/// Fidelity with per-qubit and per-bond overrides applied gate by gate.
pub fn predict_circuit_fidelity(circuit: &CircuitLayout, noise: &NoiseModel) -> Result<FidelityEstimate> {
    noise.validate()?;
    let lattice = circuit.lattice();
    let layers = circuit.depth() + 1;
    let mut ln_f = 0.0;
    for q in 0..lattice.num_qubits() {
        let e1 = noise.qubit_e1.get(&q).copied().unwrap_or(noise.e1);
        let er = noise.qubit_er.get(&q).copied().unwrap_or(noise.er);
        ln_f += layers as f64 * (-e1).ln_1p() + (-er).ln_1p();
    }
    for &b in circuit.cycles().iter().flatten() {
        ln_f += (-noise.bond_e2.get(&b).copied().unwrap_or(noise.e2)).ln_1p();
    }
    Ok(estimate(ln_f, gate_counts(circuit)))
}
