//! Slow, obviously-correct reference implementations used by the tests.

use crate::dual::{CutPath, DualGraph};
use crate::error::{Error, Result};
use crate::lattice::{BondId, Coord, Lattice};

/// Largest dual graph the brute-force path enumeration accepts.
pub const ORACLE_DUAL_CAP: usize = 40;

/// Every simple path of at most `e_star` edges between two boundary sites
/// whose inner sites are all interior, found by walking all simple paths of
/// the dual graph and filtering afterwards.
pub fn brute_force_paths(dual: &DualGraph, e_star: usize) -> Result<Vec<CutPath>> {
    if dual.len() > ORACLE_DUAL_CAP {
        return Err(Error::ScaleCap {
            what: "dual graph for the brute-force oracle",
            size: dual.len(),
            cap: ORACLE_DUAL_CAP,
        });
    }
    let mut walks = Vec::new();
    for start in 0..dual.len() {
        let mut path = vec![start];
        walk(dual, e_star, &mut path, &mut walks);
    }
    let mut out: Vec<CutPath> = walks
        .into_iter()
        .filter(|p| {
            let (first, last) = (p[0], p[p.len() - 1]);
            p.len() >= 2
                && dual.is_boundary(first)
                && dual.is_boundary(last)
                && p[1..p.len() - 1].iter().all(|&i| !dual.is_boundary(i))
                && dual.site(first) < dual.site(last)
        })
        .map(|p| {
            let sites: Vec<Coord> = p.iter().map(|&i| dual.site(i)).collect();
            CutPath::new(dual, sites).expect("filtered walks are valid cut paths")
        })
        .collect();
    out.sort();
    Ok(out)
}

fn walk(dual: &DualGraph, e_star: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    if path.len() > e_star {
        return;
    }
    let here = *path.last().expect("walks are never empty");
    for e in dual.neighbours(here) {
        if !path.contains(&e.to) {
            path.push(e.to);
            walk(dual, e_star, path, out);
            path.pop();
        }
    }
}

/// Connected-component label of every qubit once `removed` bonds are cut.
pub fn components(lattice: &Lattice, removed: &[BondId]) -> Vec<usize> {
    let n = lattice.num_qubits();
    let mut adjacency = vec![Vec::new(); n];
    for b in lattice.bonds() {
        if !removed.contains(&b.id) {
            adjacency[b.lower].push(b.upper);
            adjacency[b.upper].push(b.lower);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for seed in 0..n {
        if label[seed] != usize::MAX {
            continue;
        }
        let mut stack = vec![seed];
        label[seed] = next;
        while let Some(q) = stack.pop() {
            for &r in &adjacency[q] {
                if label[r] == usize::MAX {
                    label[r] = next;
                    stack.push(r);
                }
            }
        }
        next += 1;
    }
    label
}

/// Side membership from flood fill when the cut leaves exactly two
/// components; `true` marks the component of qubit 0.
pub fn flood_fill_sides(lattice: &Lattice, path: &CutPath) -> Option<Vec<bool>> {
    let label = components(lattice, path.crossed_bonds());
    if label.iter().any(|&l| l > 1) || !label.contains(&1) {
        return None;
    }
    Some(label.iter().map(|&l| l == 0).collect())
}
