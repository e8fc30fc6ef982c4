//! Depth-first enumeration of cut paths on the dual lattice and their
//! grouping by the bipartition they induce.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dual::{bipartition_from_path, build_dual, Bipartition, CutPath, DualGraph, Side};
use crate::error::{Error, Result};
use crate::lattice::{BondId, Coord, Lattice};

/// Thresholds that decide which cut paths are explored and kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PathSearchConfig {
    /// Maximum number of dual edges `E*`; `None` resolves to the shortest
    /// admissible straight crossing.
    pub e_star: Option<usize>,
    /// Maximum side imbalance `|n1 - n2|`.
    pub n_star: usize,
    /// Maximum size of the larger side.
    pub max_side: usize,
    /// Hard cap on the number of raw paths the search may visit.
    pub max_paths: usize,
}

impl Default for PathSearchConfig {
    fn default() -> Self {
        PathSearchConfig {
            e_star: None,
            n_star: 8,
            max_side: 33,
            max_paths: 5_000_000,
        }
    }
}

impl PathSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.e_star == Some(0) {
            return Err(Error::InvalidParameter("e_star must be at least 1".into()));
        }
        if self.max_side == 0 {
            return Err(Error::InvalidParameter("max_side must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether a bipartition passes the balance and side-size filters.
    pub fn admits(&self, bip: &Bipartition) -> bool {
        bip.imbalance() <= self.n_star && bip.n1().max(bip.n2()) <= self.max_side
    }
}

/// Bipartition of `path` if it is non-degenerate and passes the filters.
pub fn admissible(lattice: &Lattice, path: &CutPath, cfg: &PathSearchConfig) -> Option<Bipartition> {
    bipartition_from_path(lattice, path).ok().filter(|b| cfg.admits(b))
}

/// Straight runs of dual sites along `u` and `v` that enter the interior at
/// one boundary site and leave at the next.
fn straight_crossings(dual: &DualGraph) -> Vec<CutPath> {
    let mut out = Vec::new();
    for start in dual.boundary_sites() {
        let s = dual.site(start);
        for (du, dv) in [(1, 0), (0, 1)] {
            let mut sites = vec![s];
            let mut crossed = Vec::new();
            let mut here = start;
            loop {
                let c = dual.site(here);
                let next = Coord::new(c.u + du, c.v + dv);
                let Some(to) = dual.index_of(next) else { break };
                let edge = dual.edge(here, to).expect("axis neighbours are adjacent");
                crossed.extend(edge.bond);
                sites.push(next);
                here = to;
                if dual.is_boundary(to) {
                    break;
                }
            }
            if sites.len() > 2 && dual.is_boundary(here) {
                out.push(CutPath::from_parts(sites, crossed));
            }
        }
    }
    out
}

/// Default `E*`: the fewest edges among straight crossings that pass the
/// filters, else among all non-degenerate straight crossings, else 1.
pub fn default_e_star(lattice: &Lattice, dual: &DualGraph, cfg: &PathSearchConfig) -> usize {
    let straight = straight_crossings(dual);
    let shortest = |keep: &dyn Fn(&Bipartition) -> bool| {
        straight
            .iter()
            .filter(|p| bipartition_from_path(lattice, p).is_ok_and(|b| keep(&b)))
            .map(CutPath::edges)
            .min()
    };
    shortest(&|b| cfg.admits(b)).or_else(|| shortest(&|_| true)).unwrap_or(1)
}

pub fn resolve_e_star(lattice: &Lattice, dual: &DualGraph, cfg: &PathSearchConfig) -> Result<usize> {
    cfg.validate()?;
    Ok(cfg.e_star.unwrap_or_else(|| default_e_star(lattice, dual, cfg)))
}

struct Dfs<'a> {
    dual: &'a DualGraph,
    e_star: usize,
    cap: usize,
    on_path: Vec<bool>,
    sites: Vec<usize>,
    bonds: Vec<Option<BondId>>,
    out: Vec<CutPath>,
}

impl Dfs<'_> {
    fn emit(&mut self, last: usize, bond: Option<BondId>) -> Result<()> {
        if self.out.len() >= self.cap {
            return Err(Error::ScaleCap {
                what: "cut path set",
                size: self.out.len() + 1,
                cap: self.cap,
            });
        }
        let mut sites: Vec<Coord> = self.sites.iter().map(|&i| self.dual.site(i)).collect();
        sites.push(self.dual.site(last));
        let crossed = self.bonds.iter().chain([&bond]).flatten().copied().collect();
        self.out.push(CutPath::from_parts(sites, crossed));
        Ok(())
    }

    fn visit(&mut self, here: usize) -> Result<()> {
        let dual = self.dual;
        let first = dual.site(self.sites[0]);
        for e in dual.neighbours(here) {
            if self.on_path[e.to] {
                continue;
            }
            if dual.is_boundary(e.to) {
                // each undirected path is recorded from its smaller end
                if first < dual.site(e.to) {
                    self.emit(e.to, e.bond)?;
                }
            } else if self.sites.len() < self.e_star {
                self.on_path[e.to] = true;
                self.sites.push(e.to);
                self.bonds.push(e.bond);
                self.visit(e.to)?;
                self.sites.pop();
                self.bonds.pop();
                self.on_path[e.to] = false;
            }
        }
        Ok(())
    }
}

/// Every simple boundary-to-boundary path with at most `e_star` edges whose
/// inner sites are all interior, each listed once from its smaller endpoint.
pub fn dfs_paths(dual: &DualGraph, e_star: usize, cap: usize) -> Result<Vec<CutPath>> {
    let mut dfs = Dfs {
        dual,
        e_star,
        cap,
        on_path: vec![false; dual.len()],
        sites: Vec::new(),
        bonds: Vec::new(),
        out: Vec::new(),
    };
    for start in dual.boundary_sites().collect::<Vec<_>>() {
        dfs.on_path[start] = true;
        dfs.sites.push(start);
        dfs.visit(start)?;
        dfs.sites.pop();
        dfs.on_path[start] = false;
    }
    let mut out = dfs.out;
    out.sort_by(|a, b| a.tie_key().cmp(&b.tie_key()));
    Ok(out)
}

/// Admissible cut paths of the lattice, sorted by `(E, sites)`.
pub fn enumerate_cut_paths(lattice: &Lattice, dual: &DualGraph, cfg: &PathSearchConfig) -> Result<Vec<CutPath>> {
    let e_star = resolve_e_star(lattice, dual, cfg)?;
    let paths: Vec<CutPath> = dfs_paths(dual, e_star, cfg.max_paths)?
        .into_iter()
        .filter(|p| admissible(lattice, p, cfg).is_some())
        .collect();
    if paths.is_empty() {
        return Err(Error::NoFeasibleCut);
    }
    Ok(paths)
}

/// All admissible paths inducing one bipartition.
#[derive(Clone, Debug)]
pub struct CutClass {
    pub bipartition: Bipartition,
    /// Representative: fewest edges, then lexicographically smallest.
    pub path: CutPath,
    pub path_count: usize,
    /// Present bonds joining the two sides, ascending.
    pub cut_bonds: Vec<BondId>,
}

/// Admissible cuts of a lattice grouped by bipartition. The SFA cost of a
/// circuit depends on a path only through its bipartition, so scoring one
/// representative per class is exact.
#[derive(Clone, Debug)]
pub struct CutCatalog {
    config: PathSearchConfig,
    e_star: usize,
    dual_sites: usize,
    raw_paths: usize,
    admissible_paths: usize,
    classes: Vec<CutClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogSummary {
    pub e_star: usize,
    pub n_star: usize,
    pub max_side: usize,
    pub dual_sites: usize,
    pub raw_paths: usize,
    pub admissible_paths: usize,
    pub bipartitions: usize,
}

impl CutCatalog {
    pub fn build(lattice: &Lattice, cfg: &PathSearchConfig) -> Result<CutCatalog> {
        let dual = build_dual(lattice);
        CutCatalog::from_dual(lattice, &dual, cfg)
    }

    pub fn from_dual(lattice: &Lattice, dual: &DualGraph, cfg: &PathSearchConfig) -> Result<CutCatalog> {
        let e_star = resolve_e_star(lattice, dual, cfg)?;
        let raw = dfs_paths(dual, e_star, cfg.max_paths)?;
        let raw_paths = raw.len();
        let mut admissible_paths = 0;
        let mut classes: Vec<CutClass> = Vec::new();
        let mut by_sides: HashMap<Vec<Side>, usize> = HashMap::new();
        for path in raw {
            let Some(bip) = admissible(lattice, &path, cfg) else {
                continue;
            };
            admissible_paths += 1;
            match by_sides.get(bip.sides()) {
                Some(&i) => classes[i].path_count += 1,
                None => {
                    by_sides.insert(bip.sides().to_vec(), classes.len());
                    let cut_bonds = bip.cut_bonds(lattice);
                    classes.push(CutClass {
                        bipartition: bip,
                        path,
                        path_count: 1,
                        cut_bonds,
                    });
                }
            }
        }
        if classes.is_empty() {
            return Err(Error::NoFeasibleCut);
        }
        Ok(CutCatalog {
            config: PathSearchConfig {
                e_star: Some(e_star),
                ..cfg.clone()
            },
            e_star,
            dual_sites: dual.len(),
            raw_paths,
            admissible_paths,
            classes,
        })
    }

    pub fn e_star(&self) -> usize {
        self.e_star
    }

    /// Configuration with `e_star` resolved.
    pub fn config(&self) -> &PathSearchConfig {
        &self.config
    }

    pub fn classes(&self) -> &[CutClass] {
        &self.classes
    }

    pub fn admissible_paths(&self) -> usize {
        self.admissible_paths
    }

    pub fn summary(&self) -> CatalogSummary {
        CatalogSummary {
            e_star: self.e_star,
            n_star: self.config.n_star,
            max_side: self.config.max_side,
            dual_sites: self.dual_sites,
            raw_paths: self.raw_paths,
            admissible_paths: self.admissible_paths,
            bipartitions: self.classes.len(),
        }
    }
}
