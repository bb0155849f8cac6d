//! Rectangular matrix units: verification and extraction from grids.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grids::{verify_grid, Grid, GridIndex, GridKind};
use crate::matrix::{span_basis, ternary, BlockElement};
use crate::random::rng;
use crate::tolerance::ToleranceConfig;

/// Larger systems are checked on `SAMPLES` random triples instead of all of them.
const EXHAUSTIVE_LIMIT: usize = 200_000;
const SAMPLES: usize = 20_000;

/// Matrix units `e^{(α)}_{ij}`, keyed by 0-based `(α, i, j)`.
#[derive(Debug, Clone)]
pub struct MatrixUnitSystem {
    pub units: BTreeMap<(usize, usize, usize), BlockElement>,
    pub block_dims: Vec<(usize, usize)>,
}

impl MatrixUnitSystem {
    pub fn get(&self, alpha: usize, i: usize, j: usize) -> &BlockElement {
        &self.units[&(alpha, i, j)]
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().map(|&(n, m)| n * m).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitViolation {
    /// `"(i)"`, `"(ii)"` or `"(iii)"`.
    pub relation: String,
    /// Flattened unit keys of the offending triple.
    pub indices: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitReport {
    pub violations: Vec<UnitViolation>,
    pub passed: bool,
    pub checked: usize,
    pub max_residual: f64,
    pub span_dim: usize,
}

/// Checks `e_ij e_lj^* e_lk = e_ik` within a block, vanishing of every other
/// triple product of units, and linear independence of the units.
///
/// Systems with more than `EXHAUSTIVE_LIMIT` unit triples are checked on
/// `SAMPLES` random triples drawn with a fixed seed.
pub fn verify_matrix_units(m: &MatrixUnitSystem, tol: &ToleranceConfig) -> Result<UnitReport> {
    let keys: Vec<(usize, usize, usize)> = m.units.keys().copied().collect();
    let g = keys.len();
    let triples: Vec<(usize, usize, usize)> = if g * g * g <= EXHAUSTIVE_LIMIT {
        (0..g).flat_map(|a| (0..g).flat_map(move |b| (0..g).map(move |c| (a, b, c)))).collect()
    } else {
        let mut r = rng(0x5eed);
        (0..SAMPLES).map(|_| (r.random_range(0..g), r.random_range(0..g), r.random_range(0..g))).collect()
    };
    let results = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let (al, i, j) = keys[a];
            let (be, l, j2) = keys[b];
            let (ga, l2, k) = keys[c];
            let x = ternary(&m.units[&keys[a]], &m.units[&keys[b]], &m.units[&keys[c]])?;
            let nonzero = al == be && be == ga && j == j2 && l == l2;
            let residual = if nonzero {
                (&x - &m.units[&(al, i, k)]).norm()
            } else {
                x.norm()
            };
            Ok((a, b, c, residual, nonzero))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (a, b, c, residual, nonzero) in results {
        max_residual = max_residual.max(residual);
        if residual > tol.eq_tol {
            let flat = [keys[a], keys[b], keys[c]].iter().flat_map(|&(x, y, z)| [x, y, z]).collect();
            violations.push(UnitViolation {
                relation: if nonzero { "(i)" } else { "(ii)" }.to_string(),
                indices: flat,
                residual,
            });
        }
    }
    let elems: Vec<BlockElement> = m.units.values().cloned().collect();
    let span_dim = span_basis(&elems, tol)?.dim();
    if span_dim != m.total_dim() || g != m.total_dim() {
        violations.push(UnitViolation {
            relation: "(iii)".to_string(),
            indices: vec![span_dim, m.total_dim()],
            residual: (m.total_dim() as f64 - span_dim as f64).abs(),
        });
    }
    violations.sort_by(|x, y| x.relation.cmp(&y.relation).then_with(|| x.indices.cmp(&y.indices)));
    Ok(UnitReport { passed: violations.is_empty(), violations, checked: triples.len(), max_residual, span_dim })
}

fn require_valid(g: &Grid, tol: &ToleranceConfig) -> Result<()> {
    let rep = verify_grid(g, tol)?;
    if rep.passed {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "{} violations, first: {}",
            rep.violations.len(),
            rep.violations[0].describe()
        )))
    }
}

/// `e_ij = u_ii (Σ_k u_kk)^* u_ji`, a single block `(n, n)`.
pub fn extract_matrix_units_hermitian(g: &Grid, tol: &ToleranceConfig) -> Result<MatrixUnitSystem> {
    let GridKind::Hermitian(n) = g.kind() else {
        return Err(Error::InvalidGrid(format!("{} is not a hermitian grid", g.kind())));
    };
    require_valid(g, tol)?;
    let u = |i, j| g.element(GridIndex::Pair(i, j)).expect("validated grid");
    let diag = (2..=n).fold(u(1, 1), |acc, k| &acc + &u(k, k));
    let mut units = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            units.insert((0, i - 1, j - 1), ternary(&u(i, i), &diag, &u(j, i))?);
        }
    }
    Ok(MatrixUnitSystem { units, block_dims: vec![(n, n)] })
}

/// Matrix units from a symplectic grid together with the consistency data of the extraction.
#[derive(Debug, Clone)]
pub struct SymplecticUnits {
    pub system: MatrixUnitSystem,
    /// `v = Σ_k e_kk`.
    pub v: BlockElement,
    /// Largest disagreement between `e_ii` computed from two disjoint choices of `(k, l)`.
    pub well_defined_residual: f64,
    /// Largest defect of `v e_ij^* v = e_ji`.
    pub v_transpose_residual: f64,
    /// Largest defect of `e_ij v^* e_kl = δ_jk e_il`.
    pub v_product_residual: f64,
}

/// `e_ii = u_ik u_kl^* u_il` and `e_ij = e_ii e_ii^* u_ij e_jj^* e_jj`.
///
/// `e_ii` is computed from the two smallest indices other than `i` and again
/// from the two largest; for `n >= 5` these choices are disjoint.
pub fn extract_matrix_units_symplectic(g: &Grid, tol: &ToleranceConfig) -> Result<SymplecticUnits> {
    let GridKind::Symplectic(n) = g.kind() else {
        return Err(Error::InvalidGrid(format!("{} is not a symplectic grid", g.kind())));
    };
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "symplectic extraction needs n >= 5 (factor dimension >= 10), got n = {n}"
        )));
    }
    require_valid(g, tol)?;
    let u = |i, j| g.element(GridIndex::Pair(i, j)).expect("validated grid");
    let mut diag = Vec::with_capacity(n);
    let mut well_defined: f64 = 0.0;
    for i in 1..=n {
        let others: Vec<usize> = (1..=n).filter(|&x| x != i).collect();
        let (k1, l1) = (others[0], others[1]);
        let (k2, l2) = (others[others.len() - 2], others[others.len() - 1]);
        let a = ternary(&u(i, k1), &u(k1, l1), &u(i, l1))?;
        let b = ternary(&u(i, k2), &u(k2, l2), &u(i, l2))?;
        let r = (&a - &b).norm();
        if r > tol.eq_tol {
            return Err(Error::WellDefinedness { index: i, residual: r });
        }
        well_defined = well_defined.max(r);
        diag.push(a);
    }
    let mut units = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let e = if i == j {
                diag[i - 1].clone()
            } else {
                let left = diag[i - 1].mul_adjoint(&diag[i - 1])?;
                let right = diag[j - 1].adjoint_mul(&diag[j - 1])?;
                left.mul(&u(i, j))?.mul(&right)?
            };
            units.insert((0, i - 1, j - 1), e);
        }
    }
    let v = diag[1..].iter().fold(diag[0].clone(), |acc, x| &acc + x);
    let mut vt: f64 = 0.0;
    let mut vp: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            vt = vt.max((&ternary(&v, &units[&(0, i, j)], &v)? - &units[&(0, j, i)]).norm());
            for k in 0..n {
                for l in 0..n {
                    let x = ternary(&units[&(0, i, j)], &v, &units[&(0, k, l)])?;
                    let d = if j == k { (&x - &units[&(0, i, l)]).norm() } else { x.norm() };
                    vp = vp.max(d);
                }
            }
        }
    }
    Ok(SymplecticUnits {
        system: MatrixUnitSystem { units, block_dims: vec![(n, n)] },
        v,
        well_defined_residual: well_defined,
        v_transpose_residual: vt,
        v_product_residual: vp,
    })
}
