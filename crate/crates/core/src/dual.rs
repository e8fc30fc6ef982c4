//! Dual lattice, cut paths and the bipartitions they induce.
//!
//! Dual site `(u, v)` is the plaquette whose corners are `(u, v)`,
//! `(u + 1, v)`, `(u, v + 1)` and `(u + 1, v + 1)`. A horizontal dual step
//! from `(u, v)` to `(u + 1, v)` crosses the `F2` segment
//! `(u + 1, v)–(u + 1, v + 1)`; a vertical step from `(u, v)` to `(u, v + 1)`
//! crosses the `F1` segment `(u, v + 1)–(u + 1, v + 1)`.
//!
//! Boundary flags and adjacency depend on the region only, so a defect never
//! changes which paths are valid; it only removes bonds that a path would
//! otherwise cut.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{BondId, Coord, Family, Lattice, QubitId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualEdge {
    pub to: usize,
    pub family: Family,
    /// Lower endpoint of the crossed segment.
    pub segment: Coord,
    /// Present bond under the segment, if any.
    pub bond: Option<BondId>,
}

#[derive(Clone, Debug)]
pub struct DualGraph {
    sites: Vec<Coord>,
    index: HashMap<Coord, usize>,
    boundary: Vec<bool>,
    adjacency: Vec<Vec<DualEdge>>,
}

/// Segment crossed when stepping from dual site `a` to the axis-adjacent `b`.
pub(crate) fn crossed_segment(a: Coord, b: Coord) -> (Family, Coord) {
    match (b.u - a.u, b.v - a.v) {
        (1, 0) => (Family::F2, Coord::new(b.u, b.v)),
        (-1, 0) => (Family::F2, Coord::new(a.u, a.v)),
        (0, 1) => (Family::F1, Coord::new(b.u, b.v)),
        (0, -1) => (Family::F1, Coord::new(a.u, a.v)),
        _ => unreachable!("dual sites {a} and {b} are not adjacent"),
    }
}

fn corners(p: Coord) -> [Coord; 4] {
    [
        p,
        Coord::new(p.u + 1, p.v),
        Coord::new(p.u, p.v + 1),
        Coord::new(p.u + 1, p.v + 1),
    ]
}

impl DualGraph {
    pub fn build(lattice: &Lattice) -> DualGraph {
        build_dual(lattice)
    }

    pub fn sites(&self) -> &[Coord] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, i: usize) -> Coord {
        self.sites[i]
    }

    pub fn index_of(&self, c: Coord) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn neighbours(&self, i: usize) -> &[DualEdge] {
        &self.adjacency[i]
    }

    pub fn boundary_sites(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.sites.len()).filter(|&i| self.boundary[i])
    }

    pub fn interior_count(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    pub(crate) fn edge(&self, from: usize, to: usize) -> Option<&DualEdge> {
        self.adjacency[from].iter().find(|e| e.to == to)
    }
}

pub fn build_dual(lattice: &Lattice) -> DualGraph {
    let mut sites: Vec<Coord> = lattice
        .region()
        .iter()
        .flat_map(|c| {
            [
                Coord::new(c.u - 1, c.v - 1),
                Coord::new(c.u, c.v - 1),
                Coord::new(c.u - 1, c.v),
                *c,
            ]
        })
        .collect();
    sites.sort();
    sites.dedup();

    let index: HashMap<Coord, usize> = sites.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let boundary = sites
        .iter()
        .map(|&p| corners(p).iter().any(|c| !lattice.in_region(*c)))
        .collect();

    let adjacency = sites
        .iter()
        .map(|&p| {
            [(-1, 0), (1, 0), (0, -1), (0, 1)]
                .into_iter()
                .filter_map(|(du, dv)| {
                    let q = Coord::new(p.u + du, p.v + dv);
                    let to = *index.get(&q)?;
                    let (family, segment) = crossed_segment(p, q);
                    Some(DualEdge {
                        to,
                        family,
                        segment,
                        bond: lattice.bond_at(family, segment),
                    })
                })
                .collect()
        })
        .collect();

    DualGraph {
        sites,
        index,
        boundary,
        adjacency,
    }
}

/// An open path on the dual lattice from one boundary site to another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CutPath {
    sites: Vec<Coord>,
    crossed: Vec<BondId>,
    effective_edges: usize,
}

impl CutPath {
    /// Validates `sites` against `dual` and records the bonds it crosses.
    pub fn new(dual: &DualGraph, sites: Vec<Coord>) -> Result<CutPath> {
        if sites.len() < 2 {
            return Err(Error::InvalidPath("a cut needs at least one edge".into()));
        }
        let idx = sites
            .iter()
            .map(|&c| {
                dual.index_of(c)
                    .ok_or_else(|| Error::InvalidPath(format!("{c} is not a dual site")))
            })
            .collect::<Result<Vec<_>>>()?;
        let last = idx.len() - 1;
        for (k, &i) in idx.iter().enumerate() {
            let on_end = k == 0 || k == last;
            if dual.is_boundary(i) != on_end {
                return Err(Error::InvalidPath(if on_end {
                    format!("endpoint {} is not a boundary site", sites[k])
                } else {
                    format!("interior site {} lies on the boundary", sites[k])
                }));
            }
            if idx[..k].contains(&i) {
                return Err(Error::InvalidPath(format!("site {} repeats", sites[k])));
            }
        }
        let mut crossed = Vec::new();
        for w in idx.windows(2) {
            let e = dual
                .edge(w[0], w[1])
                .ok_or_else(|| Error::InvalidPath(format!("{} and {} are not adjacent", dual.site(w[0]), dual.site(w[1]))))?;
            crossed.extend(e.bond);
        }
        Ok(CutPath::from_parts(sites, crossed))
    }

    pub(crate) fn from_parts(sites: Vec<Coord>, crossed: Vec<BondId>) -> CutPath {
        let effective_edges = crossed.len();
        CutPath {
            sites,
            crossed,
            effective_edges,
        }
    }

    pub fn sites(&self) -> &[Coord] {
        &self.sites
    }

    /// Number of dual edges, `E`.
    pub fn edges(&self) -> usize {
        self.sites.len() - 1
    }

    /// Number of dual edges that cross a present bond.
    pub fn effective_edges(&self) -> usize {
        self.effective_edges
    }

    pub fn crossed_bonds(&self) -> &[BondId] {
        &self.crossed
    }

    /// The same path oriented so that its first site is the smaller endpoint.
    pub fn canonical(mut self) -> CutPath {
        if self.sites.first() > self.sites.last() {
            self.sites.reverse();
            self.crossed.reverse();
        }
        self
    }

    /// Ordering used for tie-breaking: fewer edges first, then lexicographic.
    pub fn tie_key(&self) -> (usize, &[Coord]) {
        (self.edges(), &self.sites)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The side holding the lowest-numbered present qubit.
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    sides: Vec<Side>,
    n1: usize,
    n2: usize,
}

impl Bipartition {
    /// Builds a bipartition from a per-qubit membership flag, relabelling so
    /// that qubit 0 is on the left.
    pub fn from_membership(member: &[bool]) -> Result<Bipartition> {
        let flip = member.first().copied().unwrap_or(true);
        let sides: Vec<Side> = member
            .iter()
            .map(|&m| if m == flip { Side::Left } else { Side::Right })
            .collect();
        let n1 = sides.iter().filter(|s| **s == Side::Left).count();
        let n2 = sides.len() - n1;
        if n1 == 0 || n2 == 0 {
            return Err(Error::DegenerateBipartition);
        }
        Ok(Bipartition { sides, n1, n2 })
    }

    pub fn side(&self, q: QubitId) -> Side {
        self.sides[q]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn imbalance(&self) -> usize {
        self.n1.abs_diff(self.n2)
    }

    /// Qubit ids on the given side, ascending.
    pub fn members(&self, side: Side) -> Vec<QubitId> {
        (0..self.sides.len()).filter(|&q| self.sides[q] == side).collect()
    }

    /// Present bonds whose endpoints lie on opposite sides, ascending by id.
    pub fn cut_bonds(&self, lattice: &Lattice) -> Vec<BondId> {
        lattice
            .bonds()
            .iter()
            .filter(|b| self.sides[b.lower] != self.sides[b.upper])
            .map(|b| b.id)
            .collect()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Extension {
    /// Vertical ray from the endpoint towards decreasing `v`.
    Down,
    Up,
    /// Horizontal ray towards decreasing `u`.
    Left,
}

/// Picks a ray from a boundary endpoint to infinity that crosses no segment
/// joining two region sites. Rays towards `+u` are never used: qubit rays run
/// in that direction and a parallel extension could slip between them.
fn extension(lattice: &Lattice, end: Coord) -> Option<Extension> {
    let (lo, hi) = lattice.bounds();
    let region_segment = |family: Family, lower: Coord| lattice.in_region(lower) && lattice.in_region(family.step(lower));
    let down = (lo.v..=end.v).all(|w| !region_segment(Family::F1, Coord::new(end.u, w)));
    if down {
        return Some(Extension::Down);
    }
    let up = (end.v + 1..=hi.v).all(|w| !region_segment(Family::F1, Coord::new(end.u, w)));
    if up {
        return Some(Extension::Up);
    }
    let left = (lo.u..=end.u).all(|w| !region_segment(Family::F2, Coord::new(w, end.v)));
    left.then_some(Extension::Left)
}

/// Side assignment by ray-crossing parity.
///
/// Each region site casts a ray towards `+u`; the closed curve is the path
/// polyline through plaquette centres plus one extension ray per endpoint.
/// In doubled coordinates sites are even and plaquette centres odd, so no
/// vertex ever lies on a qubit ray.
pub(crate) fn ray_cast_membership(lattice: &Lattice, sites: &[Coord]) -> Result<Vec<bool>> {
    // (u of the dual column, first row v0 covered, last row covered)
    let mut verticals: Vec<(i32, i32, i32)> = Vec::with_capacity(sites.len() + 1);
    for w in sites.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.u == b.u {
            let row = a.v.max(b.v);
            verticals.push((a.u, row, row));
        }
    }
    for end in [sites[0], sites[sites.len() - 1]] {
        match extension(lattice, end) {
            Some(Extension::Down) => verticals.push((end.u, i32::MIN, end.v)),
            Some(Extension::Up) => verticals.push((end.u, end.v + 1, i32::MAX)),
            Some(Extension::Left) => {}
            None => {
                return Err(Error::InvalidPath(format!(
                    "endpoint {end} cannot be extended off the lattice"
                )))
            }
        }
    }
    Ok(lattice
        .qubits()
        .iter()
        .map(|q| {
            verticals
                .iter()
                .filter(|&&(u, r0, r1)| u >= q.u && r0 <= q.v && q.v <= r1)
                .count()
                % 2
                == 1
        })
        .collect())
}

/// Splits the present qubits along `path`.
pub fn bipartition_from_path(lattice: &Lattice, path: &CutPath) -> Result<Bipartition> {
    let member = ray_cast_membership(lattice, path.sites())?;
    Bipartition::from_membership(&member)
}
