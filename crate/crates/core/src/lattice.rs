//! Sycamore-like planar qubit lattices.
//!
//! The diamond drawing of the processor is stored rotated by 45 degrees, so
//! every qubit sits on an integer site `(u, v)` of a square grid. Bonds then
//! come in two families:
//!
//! * `F1` (the "↗" bonds of the drawing) join `(u, v)` and `(u + 1, v)`; rows
//!   are grouped by `v` and the parity index of a bond is `u`.
//! * `F2` (the "↘" bonds) join `(u, v)` and `(u, v + 1)`; rows are grouped by
//!   `u` and the parity index is `v`.
//!
//! Rows are numbered in ascending order of their key (`v` for `F1`, `u` for
//! `F2`), and only rows holding at least one bond are counted.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type QubitId = usize;
pub type BondId = usize;

/// Integer site in canonical (rotated) coordinates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub u: i32,
    pub v: i32,
}

impl Coord {
    pub const fn new(u: i32, v: i32) -> Self {
        Coord { u, v }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    F1,
    F2,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::F1, Family::F2];

    pub fn index(self) -> usize {
        match self {
            Family::F1 => 0,
            Family::F2 => 1,
        }
    }

    /// Upper endpoint of the bond of this family whose lower endpoint is `c`.
    pub fn step(self, c: Coord) -> Coord {
        match self {
            Family::F1 => Coord::new(c.u + 1, c.v),
            Family::F2 => Coord::new(c.u, c.v + 1),
        }
    }

    fn row_key(self, lower: Coord) -> i32 {
        match self {
            Family::F1 => lower.v,
            Family::F2 => lower.u,
        }
    }

    fn parity_index(self, lower: Coord) -> i32 {
        match self {
            Family::F1 => lower.u,
            Family::F2 => lower.v,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::F1 => f.write_str("F1"),
            Family::F2 => f.write_str("F2"),
        }
    }
}

/// Shape of the qubit region before defects are removed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Region {
    /// `width` columns by `height` rows in canonical coordinates.
    Grid { width: u32, height: u32 },
    /// The `xsize` by `ysize` rectangle of the diamond drawing, with qubits on
    /// the sites where `x + y` is even.
    Window { xsize: u32, ysize: u32 },
    /// Explicit list of canonical sites.
    Mask { sites: Vec<(i32, i32)> },
}

/// Declarative description of a lattice.
///
/// Defect coordinates use the native coordinates of the region mode:
/// canonical `(u, v)` for `grid` and `mask`, drawing `(x, y)` for `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    #[serde(flatten)]
    pub region: Region,
    #[serde(default)]
    pub defects: Vec<(i32, i32)>,
}

impl LatticeSpec {
    pub fn grid(width: u32, height: u32) -> Self {
        LatticeSpec {
            region: Region::Grid { width, height },
            defects: Vec::new(),
        }
    }

    pub fn window(xsize: u32, ysize: u32) -> Self {
        LatticeSpec {
            region: Region::Window { xsize, ysize },
            defects: Vec::new(),
        }
    }

    pub fn mask(sites: Vec<(i32, i32)>) -> Self {
        LatticeSpec {
            region: Region::Mask { sites },
            defects: Vec::new(),
        }
    }

    pub fn with_defects(mut self, defects: Vec<(i32, i32)>) -> Self {
        self.defects = defects;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub id: BondId,
    /// Endpoint with the smaller coordinate.
    pub lower: QubitId,
    pub upper: QubitId,
    pub family: Family,
    /// Index of the bond's row within its family (0-based, ascending key).
    pub row: usize,
    /// Absolute coordinate of the lower endpoint along the row.
    pub parity: i32,
}

impl Bond {
    pub fn touches(&self, q: QubitId) -> bool {
        self.lower == q || self.upper == q
    }

    pub fn endpoints(&self) -> [QubitId; 2] {
        [self.lower, self.upper]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    /// `v` for `F1` rows, `u` for `F2` rows.
    pub key: i32,
    pub bonds: Vec<BondId>,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    spec: LatticeSpec,
    region: BTreeSet<Coord>,
    qubits: Vec<Coord>,
    qubit_index: HashMap<Coord, QubitId>,
    defects: Vec<Coord>,
    bonds: Vec<Bond>,
    bond_index: HashMap<(Family, Coord), BondId>,
    rows: [Vec<Row>; 2],
    drawing_offset: (i32, i32),
}

impl Lattice {
    pub fn build(spec: &LatticeSpec) -> Result<Lattice> {
        build_lattice(spec)
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    /// All sites of the region, defective ones included.
    pub fn region(&self) -> &BTreeSet<Coord> {
        &self.region
    }

    pub fn in_region(&self, c: Coord) -> bool {
        self.region.contains(&c)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[Coord] {
        &self.qubits
    }

    pub fn coord(&self, q: QubitId) -> Coord {
        self.qubits[q]
    }

    pub fn qubit_at(&self, c: Coord) -> Option<QubitId> {
        self.qubit_index.get(&c).copied()
    }

    pub fn defects(&self) -> &[Coord] {
        &self.defects
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, id: BondId) -> &Bond {
        &self.bonds[id]
    }

    /// The present bond of `family` whose lower endpoint is `lower`.
    pub fn bond_at(&self, family: Family, lower: Coord) -> Option<BondId> {
        self.bond_index.get(&(family, lower)).copied()
    }

    pub fn rows(&self, family: Family) -> &[Row] {
        &self.rows[family.index()]
    }

    /// Number of `F1` rows holding at least one bond.
    pub fn m(&self) -> usize {
        self.rows[0].len()
    }

    /// Number of `F2` rows holding at least one bond.
    pub fn n(&self) -> usize {
        self.rows[1].len()
    }

    /// Position of a canonical site in the diamond drawing.
    pub fn drawing(&self, c: Coord) -> (i32, i32) {
        let (ox, oy) = self.drawing_offset;
        (c.u + c.v + ox, c.u - c.v + oy)
    }

    /// Inclusive bounding box of the region: `(min, max)`.
    pub fn bounds(&self) -> (Coord, Coord) {
        bounding_box(self.region.iter().copied())
    }
}

pub(crate) fn bounding_box(sites: impl Iterator<Item = Coord>) -> (Coord, Coord) {
    let mut lo = Coord::new(i32::MAX, i32::MAX);
    let mut hi = Coord::new(i32::MIN, i32::MIN);
    for c in sites {
        lo.u = lo.u.min(c.u);
        lo.v = lo.v.min(c.v);
        hi.u = hi.u.max(c.u);
        hi.v = hi.v.max(c.v);
    }
    (lo, hi)
}

/// Region sites in canonical coordinates, the defect list mapped into the same
/// coordinates, and the drawing offset.
type ResolvedRegion = (BTreeSet<Coord>, Vec<Coord>, (i32, i32));

fn resolve_region(spec: &LatticeSpec) -> Result<ResolvedRegion> {
    match &spec.region {
        Region::Grid { width, height } => {
            let (w, h) = (*width as i32, *height as i32);
            if w <= 0 || h <= 0 {
                return Err(Error::EmptyLattice);
            }
            let region = (0..w).flat_map(|u| (0..h).map(move |v| Coord::new(u, v))).collect();
            let defects = spec.defects.iter().map(|&(u, v)| Coord::new(u, v)).collect();
            Ok((region, defects, (0, h - 1)))
        }
        Region::Window { xsize, ysize } => {
            let (xs, ys) = (*xsize as i32, *ysize as i32);
            if xs <= 0 || ys <= 0 {
                return Err(Error::EmptyLattice);
            }
            // v is shifted so that the smallest canonical v is zero.
            let v_min = -((ys - 1) / 2);
            let to_canonical = |x: i32, y: i32| Coord::new((x + y) / 2, (x - y) / 2 - v_min);
            let mut region = BTreeSet::new();
            for x in 0..xs {
                for y in 0..ys {
                    if (x + y) % 2 == 0 {
                        region.insert(to_canonical(x, y));
                    }
                }
            }
            let mut defects = Vec::with_capacity(spec.defects.len());
            for &(x, y) in &spec.defects {
                if (x + y).rem_euclid(2) != 0 || x < 0 || y < 0 || x >= xs || y >= ys {
                    return Err(Error::InvalidSpec(format!("window defect ({x},{y}) is not a qubit site")));
                }
                defects.push(to_canonical(x, y));
            }
            Ok((region, defects, (v_min, -v_min)))
        }
        Region::Mask { sites } => {
            let mut region = BTreeSet::new();
            for &(u, v) in sites {
                if !region.insert(Coord::new(u, v)) {
                    return Err(Error::InvalidSpec(format!("mask site ({u},{v}) listed twice")));
                }
            }
            if region.is_empty() {
                return Err(Error::EmptyLattice);
            }
            let v_max = region.iter().map(|c| c.v).max().unwrap_or(0);
            let defects = spec.defects.iter().map(|&(u, v)| Coord::new(u, v)).collect();
            Ok((region, defects, (0, v_max)))
        }
    }
}

/// Flat form of a [`LatticeSpec`], as taken from command-line flags or a
/// query string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatticeParams {
    /// `grid` or `window`.
    pub mode: Option<String>,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub xsize: Option<u32>,
    pub ysize: Option<u32>,
    /// Defects in the form accepted by [`parse_coords`].
    pub defects: Option<String>,
}

impl LatticeParams {
    pub fn to_spec(&self) -> Result<LatticeSpec> {
        let need = |value: Option<u32>, name: &str, mode: &str| {
            value.ok_or_else(|| Error::InvalidSpec(format!("{mode} mode needs --{name}")))
        };
        let mode = self.mode.as_deref().unwrap_or("grid");
        let spec = match mode {
            "grid" => LatticeSpec::grid(need(self.width, "width", mode)?, need(self.height, "height", mode)?),
            "window" => LatticeSpec::window(need(self.xsize, "xsize", mode)?, need(self.ysize, "ysize", mode)?),
            other => {
                return Err(Error::InvalidSpec(format!(
                    "unknown mode \"{other}\", expected grid or window"
                )))
            }
        };
        let defects = self.defects.as_deref().map(parse_coords).transpose()?.unwrap_or_default();
        Ok(spec.with_defects(defects))
    }
}

/// Parses a coordinate list such as `"(2,2) (3,1)"`, `"(2,2),(3,1)"` or
/// `"2,2;3,1"`.
pub fn parse_coords(text: &str) -> Result<Vec<(i32, i32)>> {
    let bad = |item: &str| Error::InvalidSpec(format!("malformed coordinate \"{}\"", item.trim()));
    let pair = |item: &str| -> Result<(i32, i32)> {
        let mut parts = item.split(',').map(str::trim);
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(item));
        };
        Ok((a.parse().map_err(|_| bad(item))?, b.parse().map_err(|_| bad(item))?))
    };
    let text = text.trim();
    if !text.contains('(') {
        return text
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|item| !item.is_empty())
            .map(pair)
            .collect();
    }
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('(') {
        if !rest[..open].chars().all(|c| c == ',' || c == ';' || c.is_whitespace()) {
            return Err(bad(rest));
        }
        let close = rest[open..].find(')').ok_or_else(|| bad(rest))? + open;
        out.push(pair(&rest[open + 1..close])?);
        rest = &rest[close + 1..];
    }
    if !rest.chars().all(|c| c == ',' || c == ';' || c.is_whitespace()) {
        return Err(bad(rest));
    }
    Ok(out)
}

pub fn build_lattice(spec: &LatticeSpec) -> Result<Lattice> {
    let (region, defect_list, drawing_offset) = resolve_region(spec)?;

    let mut seen = HashSet::new();
    for &d in &defect_list {
        if !region.contains(&d) {
            return Err(Error::DefectOutsideRegion(d));
        }
        if !seen.insert(d) {
            return Err(Error::DuplicateDefect(d));
        }
    }
    let mut defects = defect_list;
    defects.sort();

    let qubits: Vec<Coord> = region.iter().copied().filter(|c| !seen.contains(c)).collect();
    if qubits.is_empty() {
        return Err(Error::EmptyLattice);
    }
    let qubit_index: HashMap<Coord, QubitId> = qubits.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    // (family, row key, parity) orders bonds row by row.
    let mut raw = Vec::new();
    for family in Family::ALL {
        for &c in &qubits {
            let other = family.step(c);
            if let Some(&upper) = qubit_index.get(&other) {
                raw.push((family, family.row_key(c), family.parity_index(c), qubit_index[&c], upper, c));
            }
        }
    }
    raw.sort();

    let mut bonds = Vec::with_capacity(raw.len());
    let mut bond_index = HashMap::with_capacity(raw.len());
    let mut rows: [Vec<Row>; 2] = [Vec::new(), Vec::new()];
    for (id, (family, key, parity, lower, upper, c)) in raw.into_iter().enumerate() {
        let family_rows = &mut rows[family.index()];
        if family_rows.last().map(|r| r.key) != Some(key) {
            family_rows.push(Row { key, bonds: Vec::new() });
        }
        let row = family_rows.len() - 1;
        family_rows[row].bonds.push(id);
        bond_index.insert((family, c), id);
        bonds.push(Bond {
            id,
            lower,
            upper,
            family,
            row,
            parity,
        });
    }

    Ok(Lattice {
        spec: spec.clone(),
        region,
        qubits,
        qubit_index,
        defects,
        bonds,
        bond_index,
        rows,
        drawing_offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_lists_parse() {
        assert_eq!(parse_coords("(2,2)").unwrap(), vec![(2, 2)]);
        assert_eq!(parse_coords(" (2, 2) ,(-1,3) ").unwrap(), vec![(2, 2), (-1, 3)]);
        assert_eq!(parse_coords("2,2;3,1").unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(parse_coords("").unwrap(), vec![]);
        for bad in ["(2,2", "(2)", "(a,1)", "x(1,1)", "(1,1)x", "1,2,3"] {
            assert!(matches!(parse_coords(bad), Err(Error::InvalidSpec(_))), "{bad}");
        }
    }

    #[test]
    fn params_build_specs() {
        let params = LatticeParams {
            width: Some(5),
            height: Some(5),
            defects: Some("(2,2)".into()),
            ..Default::default()
        };
        let lattice = build_lattice(&params.to_spec().unwrap()).unwrap();
        assert_eq!(lattice.num_qubits(), 24);
        let window = LatticeParams {
            mode: Some("window".into()),
            xsize: Some(12),
            ysize: Some(12),
            ..Default::default()
        };
        assert_eq!(build_lattice(&window.to_spec().unwrap()).unwrap().num_qubits(), 72);
        assert!(LatticeParams {
            mode: Some("hex".into()),
            ..Default::default()
        }
        .to_spec()
        .is_err());
        assert!(LatticeParams::default().to_spec().is_err());
    }

    fn grid(w: u32, h: u32) -> Lattice {
        build_lattice(&LatticeSpec::grid(w, h)).unwrap()
    }

    #[test]
    fn grid_5x5_counts() {
        let l = grid(5, 5);
        assert_eq!(l.num_qubits(), 25);
        assert_eq!(l.bonds().len(), 40);
        assert_eq!(l.bonds().iter().filter(|b| b.family == Family::F1).count(), 20);
        assert_eq!((l.m(), l.n()), (5, 5));
    }

    #[test]
    fn single_site_grid() {
        let l = grid(1, 1);
        assert_eq!(l.num_qubits(), 1);
        assert!(l.bonds().is_empty());
        assert_eq!((l.m(), l.n()), (0, 0));
    }

    #[test]
    fn window_12x12_has_72_qubits() {
        let l = build_lattice(&LatticeSpec::window(12, 12)).unwrap();
        assert_eq!(l.num_qubits(), 72);
    }

    #[test]
    fn window_drawing_round_trips() {
        let l = build_lattice(&LatticeSpec::window(7, 5)).unwrap();
        let mut drawn: Vec<_> = l.qubits().iter().map(|&c| l.drawing(c)).collect();
        drawn.sort();
        let mut expected = Vec::new();
        for x in 0..7 {
            for y in 0..5 {
                if (x + y) % 2 == 0 {
                    expected.push((x, y));
                }
            }
        }
        assert_eq!(drawn, expected);
        // every bond joins diagonal neighbours of the drawing
        for b in l.bonds() {
            let (x0, y0) = l.drawing(l.coord(b.lower));
            let (x1, y1) = l.drawing(l.coord(b.upper));
            assert_eq!(((x1 - x0).abs(), (y1 - y0).abs()), (1, 1));
        }
    }

    #[test]
    fn interior_defect_removes_four_bonds() {
        let l = build_lattice(&LatticeSpec::grid(5, 5).with_defects(vec![(2, 2)])).unwrap();
        assert_eq!(l.num_qubits(), 24);
        assert_eq!(l.bonds().len(), 36);
        assert_eq!((l.m(), l.n()), (5, 5));
        let d = l.qubit_at(Coord::new(2, 2));
        assert!(d.is_none());
        assert!(l.in_region(Coord::new(2, 2)));
    }

    #[test]
    fn window_defects_use_drawing_coordinates() {
        let spec = LatticeSpec::window(12, 12).with_defects(vec![(2, 4), (5, 7), (9, 1)]);
        let l = build_lattice(&spec).unwrap();
        assert_eq!(l.num_qubits(), 69);
        let drawn: BTreeSet<_> = l.defects().iter().map(|&c| l.drawing(c)).collect();
        assert_eq!(drawn, [(2, 4), (5, 7), (9, 1)].into_iter().collect());

        let odd = LatticeSpec::window(12, 12).with_defects(vec![(2, 3)]);
        assert!(matches!(build_lattice(&odd), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(build_lattice(&LatticeSpec::grid(0, 0)).unwrap_err(), Error::EmptyLattice);
        assert_eq!(build_lattice(&LatticeSpec::grid(3, 0)).unwrap_err(), Error::EmptyLattice);
        assert_eq!(
            build_lattice(&LatticeSpec::grid(3, 3).with_defects(vec![(3, 0)])).unwrap_err(),
            Error::DefectOutsideRegion(Coord::new(3, 0))
        );
        assert_eq!(
            build_lattice(&LatticeSpec::grid(3, 3).with_defects(vec![(1, 1), (1, 1)])).unwrap_err(),
            Error::DuplicateDefect(Coord::new(1, 1))
        );
        assert_eq!(
            build_lattice(&LatticeSpec::grid(1, 1).with_defects(vec![(0, 0)])).unwrap_err(),
            Error::EmptyLattice
        );
        assert!(build_lattice(&LatticeSpec::mask(vec![])).is_err());
    }

    #[test]
    fn bonds_are_unit_distance_and_rowed() {
        let l = build_lattice(&LatticeSpec::window(9, 6).with_defects(vec![(4, 2)])).unwrap();
        for b in l.bonds() {
            let (a, c) = (l.coord(b.lower), l.coord(b.upper));
            assert_eq!((c.u - a.u).abs() + (c.v - a.v).abs(), 1);
            assert_eq!(b.family.step(a), c);
            let row = &l.rows(b.family)[b.row];
            assert!(row.bonds.contains(&b.id));
            match b.family {
                Family::F1 => assert_eq!((row.key, b.parity), (a.v, a.u)),
                Family::F2 => assert_eq!((row.key, b.parity), (a.u, a.v)),
            }
        }
    }

    #[test]
    fn spec_json_shape() {
        let spec: LatticeSpec = serde_json::from_str(r#"{"mode":"grid","width":5,"height":5,"defects":[[2,2]]}"#).unwrap();
        assert_eq!(spec, LatticeSpec::grid(5, 5).with_defects(vec![(2, 2)]));
        let spec: LatticeSpec = serde_json::from_str(r#"{"mode":"window","xsize":12,"ysize":12}"#).unwrap();
        assert_eq!(spec, LatticeSpec::window(12, 12));
    }
}
