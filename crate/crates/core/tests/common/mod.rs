#![allow(dead_code)]

use troforge::grids::{
    build_hermitian_grid, build_rank_one_grid, build_rectangular_grid, build_spin_grid, build_symplectic_grid, Grid,
};
use troforge::matrix::{span_basis, BlockElement, Subspace};
use troforge::ToleranceConfig;

pub fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn grid_elements(g: &Grid) -> Vec<BlockElement> {
    g.canonical_elements().into_iter().map(|(_, x)| x).collect()
}

pub fn grid_span(g: &Grid) -> Subspace {
    span_basis(&grid_elements(g), &tol()).unwrap()
}

/// Built-in grids at desk scale, labeled.
pub fn builtin_grids() -> Vec<(String, Grid)> {
    let mut out = Vec::new();
    for k in 2..=10 {
        out.push((format!("spin k={k}"), build_spin_grid(k).unwrap()));
    }
    for n in 1..=7 {
        out.push((format!("hermitian n={n}"), build_hermitian_grid(n).unwrap()));
    }
    for n in 4..=7 {
        out.push((format!("symplectic n={n}"), build_symplectic_grid(n).unwrap()));
    }
    for (n, m) in [(1, 1), (2, 2), (2, 3), (3, 3), (2, 4), (3, 4)] {
        out.push((format!("rectangular {n}x{m}"), build_rectangular_grid(n, m).unwrap()));
    }
    for n in 1..=6 {
        out.push((format!("rank-one n={n}"), build_rank_one_grid(n).unwrap()));
    }
    out
}

/// `x` relative to `scale`, guarded against zero.
pub fn rel(x: f64, scale: f64) -> f64 {
    x / scale.max(f64::MIN_POSITIVE)
}
