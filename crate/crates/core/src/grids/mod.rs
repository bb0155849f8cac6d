//! Grids of tripotents: constructors, JSON exchange and axiom verification.

mod axioms;
mod build;
mod hkn;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BlockElement, BlockElementJson, BlockShape};

pub use axioms::{verify_grid, AxiomReport, Violation};
pub use build::{
    build_hermitian_grid, build_rank_one_grid, build_rectangular_grid, build_spin_grid, build_standard_spin_system,
    build_symplectic_grid, hkn_grid, pauli, spin_grid_to_spin_system, SpinSystem,
};
pub use hkn::{binomial, build_hkn_basis, subsets};

/// The five grid families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    /// `pairs` couples `(u_j, ũ_j)`, plus `u_0` when the factor has odd dimension.
    Spin { pairs: usize, has_odd_center: bool },
    Hermitian(usize),
    Symplectic(usize),
    Rectangular(usize, usize),
    RankOne(usize),
}

impl GridKind {
    pub fn name(&self) -> &'static str {
        match self {
            GridKind::Spin { .. } => "spin",
            GridKind::Hermitian(_) => "hermitian",
            GridKind::Symplectic(_) => "symplectic",
            GridKind::Rectangular(..) => "rectangular",
            GridKind::RankOne(_) => "rank-one",
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            GridKind::Spin { pairs, .. } => pairs >= 1,
            GridKind::Hermitian(n) | GridKind::RankOne(n) => n >= 1,
            GridKind::Symplectic(n) => n >= 2,
            GridKind::Rectangular(n, m) => n >= 1 && m >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!("{self:?} has no admissible indices")))
        }
    }

    /// Labels of the grid in canonical orientation, in sorted order.
    pub fn canonical_indices(&self) -> Vec<GridIndex> {
        match *self {
            GridKind::Spin { pairs, has_odd_center } => {
                let mut v = Vec::new();
                if has_odd_center {
                    v.push(GridIndex::U0);
                }
                v.extend((1..=pairs).map(GridIndex::U));
                v.extend((1..=pairs).map(GridIndex::T));
                v
            }
            GridKind::Hermitian(n) => {
                (1..=n).flat_map(|i| (i..=n).map(move |j| GridIndex::Pair(i, j))).collect()
            }
            GridKind::Symplectic(n) => {
                (1..=n).flat_map(|i| (i + 1..=n).map(move |j| GridIndex::Pair(i, j))).collect()
            }
            GridKind::Rectangular(n, m) => {
                (1..=n).flat_map(|i| (1..=m).map(move |j| GridIndex::Pair(i, j))).collect()
            }
            GridKind::RankOne(n) => (1..=n).map(GridIndex::Single).collect(),
        }
    }

    /// Canonical label and sign for `idx`: hermitian pairs are symmetric,
    /// symplectic pairs antisymmetric.
    pub fn canonical(&self, idx: GridIndex) -> (GridIndex, f64) {
        match (self, idx) {
            (GridKind::Hermitian(_), GridIndex::Pair(i, j)) if i > j => (GridIndex::Pair(j, i), 1.0),
            (GridKind::Symplectic(_), GridIndex::Pair(i, j)) if i > j => (GridIndex::Pair(j, i), -1.0),
            _ => (idx, 1.0),
        }
    }

    fn admits(&self, idx: GridIndex) -> bool {
        match (*self, idx) {
            (GridKind::Spin { pairs, .. }, GridIndex::U(j) | GridIndex::T(j)) => (1..=pairs).contains(&j),
            (GridKind::Spin { has_odd_center, .. }, GridIndex::U0) => has_odd_center,
            (GridKind::Hermitian(n), GridIndex::Pair(i, j)) => (1..=n).contains(&i) && (1..=n).contains(&j),
            (GridKind::Symplectic(n), GridIndex::Pair(i, j)) => {
                i != j && (1..=n).contains(&i) && (1..=n).contains(&j)
            }
            (GridKind::Rectangular(n, m), GridIndex::Pair(i, j)) => (1..=n).contains(&i) && (1..=m).contains(&j),
            (GridKind::RankOne(n), GridIndex::Single(i)) => (1..=n).contains(&i),
            _ => false,
        }
    }

    fn parse_index(&self, s: &str) -> Result<GridIndex> {
        let bad = || Error::Parse(format!("label {s:?} is not valid for a {} grid", self.name()));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let idx = match self {
            GridKind::Spin { .. } => {
                if s == "u0" {
                    GridIndex::U0
                } else if let Some(r) = s.strip_prefix('u') {
                    GridIndex::U(num(r)?)
                } else if let Some(r) = s.strip_prefix('t') {
                    GridIndex::T(num(r)?)
                } else {
                    return Err(bad());
                }
            }
            GridKind::RankOne(_) => GridIndex::Single(num(s)?),
            _ => {
                let (a, b) = s.split_once(',').ok_or_else(bad)?;
                GridIndex::Pair(num(a)?, num(b)?)
            }
        };
        if self.admits(idx) {
            Ok(idx)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridKind::Spin { pairs, has_odd_center } => {
                write!(f, "spin({pairs}{})", if *has_odd_center { ", u0" } else { "" })
            }
            GridKind::Hermitian(n) => write!(f, "hermitian({n})"),
            GridKind::Symplectic(n) => write!(f, "symplectic({n})"),
            GridKind::Rectangular(n, m) => write!(f, "rectangular({n},{m})"),
            GridKind::RankOne(n) => write!(f, "rank-one({n})"),
        }
    }
}

/// Label of a grid element. Spin grids use `u_j`, `ũ_j` (written `t_j`) and
/// `u_0`; matrix-type grids use 1-based index pairs; rank-one grids a single index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GridIndex {
    U0,
    U(usize),
    T(usize),
    Pair(usize, usize),
    Single(usize),
}

impl fmt::Display for GridIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridIndex::U0 => write!(f, "u0"),
            GridIndex::U(j) => write!(f, "u{j}"),
            GridIndex::T(j) => write!(f, "t{j}"),
            GridIndex::Pair(i, j) => write!(f, "{i},{j}"),
            GridIndex::Single(i) => write!(f, "{i}"),
        }
    }
}

/// A labeled family of block elements sharing one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    kind: GridKind,
    elements: BTreeMap<GridIndex, BlockElement>,
}

impl Grid {
    /// Validates labels and shapes. Every canonical label must be present,
    /// either directly or through its transposed pair.
    pub fn new(kind: GridKind, elements: BTreeMap<GridIndex, BlockElement>) -> Result<Self> {
        kind.check()?;
        let mut shape: Option<BlockShape> = None;
        for (idx, x) in &elements {
            if !kind.admits(*idx) {
                return Err(Error::InvalidGrid(format!("label {idx} is not valid for {kind}")));
            }
            match &shape {
                None => shape = Some(x.shape()),
                Some(s) if !x.has_shape(s) => {
                    return Err(Error::InvalidGrid(format!("element {idx} has a different block shape")));
                }
                _ => {}
            }
        }
        let grid = Self { kind, elements };
        for idx in kind.canonical_indices() {
            if grid.element(idx).is_none() {
                return Err(Error::InvalidGrid(format!("element {idx} is missing")));
            }
        }
        Ok(grid)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn elements(&self) -> &BTreeMap<GridIndex, BlockElement> {
        &self.elements
    }

    pub fn shape(&self) -> BlockShape {
        self.elements.values().next().expect("grid is nonempty").shape()
    }

    /// The element with label `idx`, using `u_ji = ±u_ij` when only one orientation is stored.
    pub fn element(&self, idx: GridIndex) -> Option<BlockElement> {
        if let Some(x) = self.elements.get(&idx) {
            return Some(x.clone());
        }
        if let GridIndex::Pair(i, j) = idx {
            let sign = match self.kind {
                GridKind::Hermitian(_) => 1.0,
                GridKind::Symplectic(_) => -1.0,
                _ => return None,
            };
            return self.elements.get(&GridIndex::Pair(j, i)).map(|x| x.scale_real(sign));
        }
        None
    }

    /// Elements in canonical orientation, in label order.
    pub fn canonical_elements(&self) -> Vec<(GridIndex, BlockElement)> {
        self.kind
            .canonical_indices()
            .into_iter()
            .map(|i| (i, self.element(i).expect("validated at construction")))
            .collect()
    }

    /// Replaces one element; the label must already be admissible.
    pub fn with_element(mut self, idx: GridIndex, x: BlockElement) -> Result<Self> {
        self.elements.insert(idx, x);
        Self::new(self.kind, self.elements)
    }

    /// Adds the transposed label of every pair, so both orientations are stored.
    pub fn with_both_orientations(mut self) -> Self {
        if matches!(self.kind, GridKind::Hermitian(_) | GridKind::Symplectic(_)) {
            let labels: Vec<_> = self.elements.keys().copied().collect();
            for idx in labels {
                if let GridIndex::Pair(i, j) = idx {
                    let t = GridIndex::Pair(j, i);
                    if !self.elements.contains_key(&t) {
                        let x = self.element(t).expect("transpose derivable");
                        self.elements.insert(t, x);
                    }
                }
            }
        }
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GridParams {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_center: Option<bool>,
}

/// Wire format `{"kind": ..., "params": ..., "elements": {label: blockElement}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub kind: String,
    pub params: GridParams,
    pub elements: BTreeMap<String, BlockElementJson>,
}

impl GridKind {
    pub fn from_json(kind: &str, p: &GridParams) -> Result<Self> {
        let k = match kind {
            "spin" => GridKind::Spin { pairs: p.n, has_odd_center: p.odd_center.unwrap_or(false) },
            "hermitian" => GridKind::Hermitian(p.n),
            "symplectic" => GridKind::Symplectic(p.n),
            "rectangular" => {
                GridKind::Rectangular(p.n, p.m.ok_or_else(|| Error::Parse("rectangular grid needs params.m".into()))?)
            }
            "rank-one" => GridKind::RankOne(p.n),
            other => return Err(Error::Parse(format!("unknown grid kind {other:?}"))),
        };
        k.check()?;
        Ok(k)
    }

    pub fn params(&self) -> GridParams {
        match *self {
            GridKind::Spin { pairs, has_odd_center } => {
                GridParams { n: pairs, m: None, odd_center: Some(has_odd_center) }
            }
            GridKind::Hermitian(n) | GridKind::Symplectic(n) | GridKind::RankOne(n) => {
                GridParams { n, ..Default::default() }
            }
            GridKind::Rectangular(n, m) => GridParams { n, m: Some(m), odd_center: None },
        }
    }
}

impl TryFrom<GridJson> for Grid {
    type Error = Error;

    fn try_from(j: GridJson) -> Result<Self> {
        let kind = GridKind::from_json(&j.kind, &j.params)?;
        if j.elements.is_empty() {
            return Err(Error::Parse("grid has no elements".into()));
        }
        let mut elements = BTreeMap::new();
        for (label, x) in j.elements {
            elements.insert(kind.parse_index(&label)?, BlockElement::try_from(x)?);
        }
        Grid::new(kind, elements)
    }
}

impl From<&Grid> for GridJson {
    fn from(g: &Grid) -> Self {
        Self {
            kind: g.kind.name().to_string(),
            params: g.kind.params(),
            elements: g.elements.iter().map(|(k, v)| (k.to_string(), BlockElementJson::from(v))).collect(),
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let j: GridJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Grid::try_from(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    #[test]
    fn label_round_trip() {
        let kinds = [
            GridKind::Spin { pairs: 2, has_odd_center: true },
            GridKind::Hermitian(3),
            GridKind::Symplectic(4),
            GridKind::Rectangular(2, 3),
            GridKind::RankOne(3),
        ];
        for k in kinds {
            for idx in k.canonical_indices() {
                assert_eq!(k.parse_index(&idx.to_string()).unwrap(), idx);
            }
        }
        assert!(GridKind::Symplectic(4).parse_index("2,2").is_err());
        assert!(GridKind::Rectangular(2, 3).parse_index("3,1").is_err());
        assert!(GridKind::Spin { pairs: 2, has_odd_center: false }.parse_index("u0").is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = build_symplectic_grid(4).unwrap().with_both_orientations();
        let s = serde_json::to_string(&GridJson::from(&g)).unwrap();
        let back: Grid = s.parse().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn missing_and_empty_rejected() {
        let empty = r#"{"kind":"symplectic","params":{"n":5},"elements":{}}"#;
        assert!(matches!(empty.parse::<Grid>(), Err(Error::Parse(_))));
        let mut el = BTreeMap::new();
        el.insert(GridIndex::Single(1), BlockElement::single(ComplexMatrix::unit(1, 2, 0, 0)));
        assert!(matches!(Grid::new(GridKind::RankOne(2), el), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn transposed_labels_are_derived() {
        let g = build_symplectic_grid(4).unwrap();
        let u12 = g.element(GridIndex::Pair(1, 2)).unwrap();
        let u21 = g.element(GridIndex::Pair(2, 1)).unwrap();
        assert!((&u12 + &u21).is_zero());
    }
}
