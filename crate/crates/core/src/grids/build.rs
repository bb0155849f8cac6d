//! Concrete grids and spin systems.

use std::collections::BTreeMap;

use super::hkn::{binomial, build_hkn_basis};
use super::{verify_grid, Grid, GridIndex, GridKind};
use crate::error::{Error, Result};
use crate::matrix::{kron, BlockElement, ComplexMatrix, C64, I};
use crate::tolerance::ToleranceConfig;
use crate::triple::{peirce2_membership, peirce2_product};

/// `σ1 = diag(1,-1)`, `σ2 = [[0,1],[1,0]]`, `σ3 = [[0,i],[-i,0]]`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let z = C64::new(0.0, 0.0);
    [
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2"),
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2"),
        ComplexMatrix::new(2, 2, vec![z, I, -I, z]).expect("2x2"),
    ]
}

fn tensor(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors[1..].iter().fold(factors[0].clone(), |acc, f| kron(&acc, f))
}

/// `{id, s_1, ..., s_k}` in `M_{2^n}`, `n = ceil(k/2)`, with
/// `s_{2l+1} = σ3^{⊗l} ⊗ σ1 ⊗ id` and `s_{2l+2} = σ3^{⊗l} ⊗ σ2 ⊗ id`.
pub fn build_standard_spin_system(k: usize) -> Result<Vec<ComplexMatrix>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("spin system needs k >= 2, got {k}")));
    }
    let n = k.div_ceil(2);
    let [s1, s2, s3] = pauli();
    let id2 = ComplexMatrix::identity(2);
    let mut out = vec![ComplexMatrix::identity(1 << n)];
    for j in 1..=k {
        let l = (j - 1) / 2;
        let mid = if j % 2 == 1 { s1.clone() } else { s2.clone() };
        let mut f = vec![s3.clone(); l];
        f.push(mid);
        f.extend(std::iter::repeat_n(id2.clone(), n - l - 1));
        out.push(tensor(&f));
    }
    Ok(out)
}

/// Spin grid spanning the same factor as the standard spin system of size `k`.
///
/// With `S_0 = id`: `t_1 = S_1`, `(s_j, t_j) = (S_{2j-2}, S_{2j-1})` for
/// `j >= 2`, and `u_0 = S_k` when `k` is even. Then `u_j = (s_j - i t_j)/2`,
/// `ũ_j = (s_j + i t_j)/2`, `u_1 = -(i/2)(id + t_1)`, `ũ_1 = -(i/2)(id - t_1)`.
pub fn build_spin_grid(k: usize) -> Result<Grid> {
    let sys: Vec<BlockElement> = build_standard_spin_system(k)?.into_iter().map(BlockElement::single).collect();
    let pairs = k.div_ceil(2);
    let has_odd_center = k.is_multiple_of(2);
    let mut el = BTreeMap::new();
    let half = C64::new(0.5, 0.0);
    let minus_half_i = C64::new(0.0, -0.5);
    el.insert(GridIndex::U(1), (&sys[0] + &sys[1]).scale(minus_half_i));
    el.insert(GridIndex::T(1), (&sys[0] - &sys[1]).scale(minus_half_i));
    for j in 2..=pairs {
        let s = &sys[2 * j - 2];
        let t = sys[2 * j - 1].scale(I);
        el.insert(GridIndex::U(j), (s - &t).scale(half));
        el.insert(GridIndex::T(j), (s + &t).scale(half));
    }
    if has_odd_center {
        el.insert(GridIndex::U0, sys[k].clone());
    }
    Grid::new(GridKind::Spin { pairs, has_odd_center }, el)
}

/// Spin system recovered from a spin grid inside the Peirce-2 algebra of `v`.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    /// `v = i(u_1 + ũ_1)`, the unit of the Peirce-2 algebra.
    pub v: BlockElement,
    /// `v`, then `s_j` (j >= 2), `t_j`, and `u_0` if present, with labels.
    pub elements: Vec<(String, BlockElement)>,
}

impl SpinSystem {
    /// Largest defect of `x•x = v` over the system and of `x•y + y•x = 0` over
    /// distinct non-unit members, where `a•b = a v^* b`.
    pub fn defects(&self, tol: &ToleranceConfig) -> Result<(f64, f64)> {
        let mut unit: f64 = 0.0;
        let mut anti: f64 = 0.0;
        let members: Vec<&BlockElement> = self.elements.iter().filter(|(l, _)| l != "v").map(|(_, x)| x).collect();
        for (_, x) in &self.elements {
            unit = unit.max((&peirce2_product(x, x, &self.v, tol)? - &self.v).norm());
        }
        for (a, x) in members.iter().enumerate() {
            for y in &members[a + 1..] {
                let s = &peirce2_product(x, y, &self.v, tol)? + &peirce2_product(y, x, &self.v, tol)?;
                anti = anti.max(s.norm());
            }
        }
        Ok((unit, anti))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn spin_grid_to_spin_system(g: &Grid, tol: &ToleranceConfig) -> Result<SpinSystem> {
    let GridKind::Spin { pairs, has_odd_center } = g.kind() else {
        return Err(Error::InvalidGrid(format!("{} is not a spin grid", g.kind())));
    };
    let report = verify_grid(g, tol)?;
    if !report.passed {
        return Err(Error::InvalidGrid(format!(
            "{} violations, first: {}",
            report.violations.len(),
            report.violations[0].describe()
        )));
    }
    let get = |i| g.element(i).expect("validated grid");
    let v = (&get(GridIndex::U(1)) + &get(GridIndex::T(1))).scale(I);
    let mut elements = vec![("v".to_string(), v.clone())];
    for j in 2..=pairs {
        elements.push((format!("s{j}"), &get(GridIndex::U(j)) + &get(GridIndex::T(j))));
    }
    for j in 1..=pairs {
        elements.push((format!("t{j}"), (&get(GridIndex::U(j)) - &get(GridIndex::T(j))).scale(I)));
    }
    if has_odd_center {
        elements.push(("u0".to_string(), get(GridIndex::U0)));
    }
    for (label, x) in &elements {
        if !peirce2_membership(&v, x, tol) {
            return Err(Error::InvalidGrid(format!("{label} is outside the Peirce-2 space of v")));
        }
    }
    Ok(SpinSystem { v, elements })
}

/// `u_ii = E_ii`, `u_ij = E_ij + E_ji` in `M_n`.
pub fn build_hermitian_grid(n: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidParameter("hermitian grid needs n >= 1".into()));
    }
    let mut el = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let mut m = ComplexMatrix::unit(n, n, i, j);
            if i != j {
                m = &m + &ComplexMatrix::unit(n, n, j, i);
            }
            el.insert(GridIndex::Pair(i + 1, j + 1), BlockElement::single(m));
        }
    }
    Grid::new(GridKind::Hermitian(n), el)
}

/// `u_ij = E_ij - E_ji` for `i < j` in `M_n`.
pub fn build_symplectic_grid(n: usize) -> Result<Grid> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("symplectic grid needs n >= 4, got {n}")));
    }
    let mut el = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = &ComplexMatrix::unit(n, n, i, j) - &ComplexMatrix::unit(n, n, j, i);
            el.insert(GridIndex::Pair(i + 1, j + 1), BlockElement::single(m));
        }
    }
    Grid::new(GridKind::Symplectic(n), el)
}

/// Matrix units `u_ij = E_ij` of `M_{n,m}`.
pub fn build_rectangular_grid(n: usize, m: usize) -> Result<Grid> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("rectangular grid needs n, m >= 1".into()));
    }
    let mut el = BTreeMap::new();
    for i in 0..n {
        for j in 0..m {
            el.insert(GridIndex::Pair(i + 1, j + 1), BlockElement::single(ComplexMatrix::unit(n, m, i, j)));
        }
    }
    Grid::new(GridKind::Rectangular(n, m), el)
}

/// Rank-one grid `{b^{n,k}_i}` for a single `k`.
pub fn hkn_grid(n: usize, k: usize) -> Result<Grid> {
    let el = build_hkn_basis(n, k)?
        .into_iter()
        .enumerate()
        .map(|(i, b)| (GridIndex::Single(i + 1), BlockElement::single(b)))
        .collect();
    Grid::new(GridKind::RankOne(n), el)
}

/// Rank-one grid `u_i = ⊕_k b^{n,k}_i` in block shape `[(C(n,k), C(n,k-1))]_k`.
pub fn build_rank_one_grid(n: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidParameter("rank-one grid needs n >= 1".into()));
    }
    let per_k: Vec<Vec<ComplexMatrix>> = (1..=n).map(|k| build_hkn_basis(n, k)).collect::<Result<_>>()?;
    debug_assert_eq!(per_k.iter().map(|b| b[0].rows() * b[0].cols()).sum::<usize>(), binomial(2 * n, n - 1));
    let mut el = BTreeMap::new();
    for i in 0..n {
        let parts = per_k.iter().map(|b| b[i].clone()).collect();
        el.insert(GridIndex::Single(i + 1), BlockElement::new(parts)?);
    }
    Grid::new(GridKind::RankOne(n), el)
}
