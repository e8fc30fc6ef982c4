//! Operator Schmidt rank of small multi-qubit unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::statevector::Gate2;

/// Largest operator (in qubits) the rank computation accepts.
pub const MAX_OPERATOR_QUBITS: usize = 6;
pub const RELATIVE_THRESHOLD: f64 = 1e-10;

pub fn identity(qubits: usize) -> DMatrix<Complex64> {
    DMatrix::identity(1 << qubits, 1 << qubits)
}

/// Lifts a two-qubit gate onto `qubits` qubits, acting on `a` (high bit of
/// the gate's basis) and `b`. Qubit `q` is bit `q` of the operator's index.
pub fn embed(gate: &Gate2, a: usize, b: usize, qubits: usize) -> DMatrix<Complex64> {
    let dim = 1 << qubits;
    let local = |x: usize| ((x >> a) & 1) << 1 | ((x >> b) & 1);
    let rest = !((1 << a) | (1 << b));
    DMatrix::from_fn(dim, dim, |i, j| {
        if i & rest == j & rest {
            gate[local(i)][local(j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Singular values of the operator reshuffled across `left` versus the
/// remaining qubits, descending.
pub fn operator_schmidt_values(op: &DMatrix<Complex64>, qubits: usize, left: &[usize]) -> Result<Vec<f64>> {
    if qubits > MAX_OPERATOR_QUBITS {
        return Err(Error::ScaleCap {
            what: "operator qubit count",
            size: qubits,
            cap: MAX_OPERATOR_QUBITS,
        });
    }
    let dim = 1 << qubits;
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::InvalidParameter(format!(
            "operator is {}x{}, expected {dim}x{dim}",
            op.nrows(),
            op.ncols()
        )));
    }
    if left.iter().any(|&q| q >= qubits) {
        return Err(Error::InvalidParameter("split names a qubit outside the operator".into()));
    }
    let right: Vec<usize> = (0..qubits).filter(|q| !left.contains(q)).collect();
    let gather = |x: usize, qs: &[usize]| qs.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((x >> q) & 1) << k));
    let (l, r) = (left.len(), right.len());
    let mut reshuffled = DMatrix::<Complex64>::zeros(1 << (2 * l), 1 << (2 * r));
    for i in 0..dim {
        for j in 0..dim {
            let row = gather(i, left) << l | gather(j, left);
            let col = gather(i, &right) << r | gather(j, &right);
            reshuffled[(row, col)] = op[(i, j)];
        }
    }
    let mut values: Vec<f64> = reshuffled.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Number of Schmidt terms above [`RELATIVE_THRESHOLD`] times the largest.
pub fn operator_schmidt_rank(op: &DMatrix<Complex64>, qubits: usize, left: &[usize]) -> Result<usize> {
    let values = operator_schmidt_values(op, qubits, left)?;
    let top = values.first().copied().unwrap_or(0.0);
    Ok(values.iter().filter(|&&s| s > RELATIVE_THRESHOLD * top).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::statevector::{cphase, fsim};

    #[test]
    fn embedding_on_two_qubits_is_the_gate() {
        let g = fsim(0.4, 0.9);
        let m = embed(&g, 1, 0, 2);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m[(i, j)], g[i][j]);
            }
        }
    }

    #[test]
    fn two_qubit_ranks() {
        let pi = std::f64::consts::PI;
        assert_eq!(
            operator_schmidt_rank(&embed(&fsim(pi / 2.0, pi / 6.0), 0, 1, 2), 2, &[0]).unwrap(),
            4
        );
        assert_eq!(operator_schmidt_rank(&embed(&cphase(pi / 6.0), 0, 1, 2), 2, &[0]).unwrap(), 2);
        assert_eq!(operator_schmidt_rank(&identity(2), 2, &[0]).unwrap(), 1);
    }

    #[test]
    fn caps() {
        assert!(operator_schmidt_rank(&identity(7), 7, &[0]).is_err());
        assert!(operator_schmidt_rank(&identity(2), 3, &[0]).is_err());
    }
}
