//! Dense statevector simulation of circuit layouts with random
//! single-qubit gates and fsim two-qubit gates.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::QubitId;
use crate::pattern::CircuitLayout;

pub const DEFAULT_QUBIT_CAP: usize = 20;
pub const HARD_QUBIT_CAP: usize = 24;

pub type Gate1 = [[Complex64; 2]; 2];
pub type Gate2 = [[Complex64; 4]; 4];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingleQubitSet {
    /// Haar-random SU(2).
    #[default]
    Haar,
    /// Uniform over `sqrt(X)`, `sqrt(Y)`, `sqrt(W)`, never repeating the
    /// previous choice on the same qubit.
    Discrete,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GateModel {
    pub theta: f64,
    pub phi: f64,
    pub single: SingleQubitSet,
}

impl Default for GateModel {
    fn default() -> Self {
        GateModel {
            theta: FRAC_PI_2,
            phi: std::f64::consts::PI / 6.0,
            single: SingleQubitSet::Haar,
        }
    }
}

impl GateModel {
    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() || !self.phi.is_finite() {
            return Err(Error::InvalidParameter("fsim angles must be finite".into()));
        }
        Ok(())
    }
}

/// `fsim(theta, phi)` in the basis `|00>, |01>, |10>, |11>`.
pub fn fsim(theta: f64, phi: f64) -> Gate2 {
    let z = c(0.0, 0.0);
    let (s, co) = theta.sin_cos();
    [
        [c(1.0, 0.0), z, z, z],
        [z, c(co, 0.0), c(0.0, -s), z],
        [z, c(0.0, -s), c(co, 0.0), z],
        [z, z, z, Complex64::from_polar(1.0, -phi)],
    ]
}

pub fn cphase(phi: f64) -> Gate2 {
    fsim(0.0, phi)
}

pub fn haar_su2(rng: &mut impl Rng) -> Gate1 {
    let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = c(g[0], g[1]) / norm;
    let b = c(g[2], g[3]) / norm;
    [[a, -b.conj()], [b, a.conj()]]
}

/// `sqrt(X)`, `sqrt(Y)` and `sqrt(W)` with `W = (X + Y) / sqrt(2)`.
pub fn discrete_gates() -> [Gate1; 3] {
    let h = FRAC_1_SQRT_2;
    let sqrt_x = [[c(h, 0.0), c(0.0, -h)], [c(0.0, -h), c(h, 0.0)]];
    let sqrt_y = [[c(h, 0.0), c(-h, 0.0)], [c(h, 0.0), c(h, 0.0)]];
    let w_up = Complex64::from_polar(h, -FRAC_PI_4) * c(0.0, -1.0);
    let w_dn = Complex64::from_polar(h, FRAC_PI_4) * c(0.0, -1.0);
    let sqrt_w = [[c(h, 0.0), w_up], [w_dn, c(h, 0.0)]];
    [sqrt_x, sqrt_y, sqrt_w]
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `qubits` qubits; qubit `q` is bit `q` of the index.
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1 << qubits];
        amps[0] = c(1.0, 0.0);
        StateVector { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn apply_1q(&mut self, q: QubitId, g: &Gate1) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = g[0][0] * a0 + g[0][1] * a1;
                self.amps[i | bit] = g[1][0] * a0 + g[1][1] * a1;
            }
        }
    }

    /// Applies `g` with `a` as the high bit of its two-qubit basis index.
    pub fn apply_2q(&mut self, a: QubitId, b: QubitId, g: &Gate2) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & (ba | bb) == 0 {
                let idx = [i, i | bb, i | ba, i | ba | bb];
                let v = idx.map(|k| self.amps[k]);
                for (row, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|col| g[row][col] * v[col]).sum();
                }
            }
        }
    }
}

fn check_size(qubits: usize, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_QUBIT_CAP);
    if qubits > cap {
        return Err(Error::ScaleCap {
            what: "statevector qubit count",
            size: qubits,
            cap,
        });
    }
    Ok(())
}

/// Runs `circuit` from `|0...0>`: a single-qubit layer, then each cycle's
/// two-qubit gates followed by another single-qubit layer. `observe` sees the
/// state after the first layer (cycle 0) and after every cycle.
pub fn simulate_with<F>(circuit: &CircuitLayout, seed: u64, model: &GateModel, cap: usize, mut observe: F) -> Result<StateVector>
where
    F: FnMut(usize, &StateVector),
{
    model.validate()?;
    let lattice = circuit.lattice();
    let n = lattice.num_qubits();
    check_size(n, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = fsim(model.theta, model.phi);
    let discrete = discrete_gates();
    let mut last_choice = vec![usize::MAX; n];
    let mut state = StateVector::zero(n);

    let mut layer = |state: &mut StateVector, rng: &mut ChaCha8Rng| {
        for (q, last) in last_choice.iter_mut().enumerate() {
            let g = match model.single {
                SingleQubitSet::Haar => haar_su2(rng),
                SingleQubitSet::Discrete => {
                    let k = match *last {
                        usize::MAX => rng.random_range(0..3),
                        prev => {
                            let k = rng.random_range(0..2);
                            if k >= prev {
                                k + 1
                            } else {
                                k
                            }
                        }
                    };
                    *last = k;
                    discrete[k]
                }
            };
            state.apply_1q(q, &g);
        }
    };

    layer(&mut state, &mut rng);
    observe(0, &state);
    for (t, cycle) in circuit.cycles().iter().enumerate() {
        for &id in cycle {
            let b = lattice.bond(id);
            state.apply_2q(b.lower, b.upper, &two);
        }
        layer(&mut state, &mut rng);
        observe(t + 1, &state);
    }
    Ok(state)
}

pub fn simulate_statevector(circuit: &CircuitLayout, seed: u64, model: &GateModel, cap: usize) -> Result<StateVector> {
    simulate_with(circuit, seed, model, cap, |_, _| {})
}
