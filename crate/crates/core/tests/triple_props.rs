mod common;

use proptest::prelude::*;
use troforge::grids::{build_hermitian_grid, build_rectangular_grid, build_spin_grid, build_symplectic_grid, Grid};
use troforge::matrix::{span_basis, BlockElement};
use troforge::random::{random_element, rng};
use troforge::triple::{
    is_minimal_tripotent, is_tripotent, jordan_triple, peirce2_membership, peirce_decompose, peirce_spectrum,
    subtriple_defect,
};

use common::{grid_elements, grid_span, rel, tol};

fn small_grids() -> Vec<Grid> {
    vec![
        build_spin_grid(3).unwrap(),
        build_spin_grid(4).unwrap(),
        build_hermitian_grid(3).unwrap(),
        build_symplectic_grid(5).unwrap(),
        build_rectangular_grid(2, 3).unwrap(),
    ]
}

fn jordan_defect(a: &BlockElement, b: &BlockElement, x: &BlockElement, y: &BlockElement, z: &BlockElement) -> f64 {
    let lhs = jordan_triple(a, b, &jordan_triple(x, y, z).unwrap()).unwrap();
    let t1 = jordan_triple(&jordan_triple(a, b, x).unwrap(), y, z).unwrap();
    let t2 = jordan_triple(x, &jordan_triple(b, a, y).unwrap(), z).unwrap();
    let t3 = jordan_triple(x, y, &jordan_triple(a, b, z).unwrap()).unwrap();
    let rhs = &(&t1 - &t2) + &t3;
    let scale = a.norm() * b.norm() * x.norm() * y.norm() * z.norm();
    rel((&lhs - &rhs).norm(), scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jordan_identity_on_factors(which in 0usize..5, seed in any::<u64>()) {
        let s = grid_span(&small_grids()[which]);
        let mut r = rng(seed);
        let v: Vec<BlockElement> = (0..5).map(|_| random_element(&s, &mut r)).collect();
        prop_assert!(jordan_defect(&v[0], &v[1], &v[2], &v[3], &v[4]) < 1e-10);
    }

    #[test]
    fn cstar_norm_identity(which in 0usize..5, seed in any::<u64>()) {
        let s = grid_span(&small_grids()[which]);
        let x = random_element(&s, &mut rng(seed));
        let cube = jordan_triple(&x, &x, &x).unwrap().op_norm();
        let n = x.op_norm();
        prop_assert!(rel((cube - n.powi(3)).abs(), n.powi(3)) < 1e-6);
    }
}

#[test]
fn grid_tripotents_have_peirce_spectra() {
    for g in small_grids() {
        let s = grid_span(&g);
        for (idx, e) in g.canonical_elements() {
            assert!(is_tripotent(&e, &tol()), "{} {idx}", g.kind());
            for lambda in peirce_spectrum(&e, &s, &tol()).unwrap() {
                let snapped = (2.0 * lambda).round() / 2.0;
                assert!((0.0..=1.0).contains(&snapped), "{} {idx}: {lambda}", g.kind());
                assert!((lambda - snapped).abs() < 1e-9, "{} {idx}: {lambda}", g.kind());
            }
        }
    }
}

#[test]
fn peirce2_membership_matches_eigenspace() {
    for g in small_grids() {
        let s = grid_span(&g);
        let mut probes = s.basis();
        probes.extend(grid_elements(&g));
        for (idx, e) in g.canonical_elements() {
            let pd = peirce_decompose(&e, &s, &tol()).unwrap();
            assert_eq!(pd.p0.dim() + pd.p1.dim() + pd.p2.dim(), s.dim());
            for z in &probes {
                assert_eq!(
                    peirce2_membership(&e, z, &tol()),
                    pd.p2.contains(z, &tol()).unwrap(),
                    "{} {idx}",
                    g.kind()
                );
            }
        }
    }
}

#[test]
fn peirce2_space_is_closed() {
    for g in small_grids() {
        let s = grid_span(&g);
        for (idx, e) in g.canonical_elements() {
            let p2 = peirce_decompose(&e, &s, &tol()).unwrap().p2;
            assert!(subtriple_defect(&p2).unwrap() < 1e-9, "{} {idx}", g.kind());
        }
    }
}

#[test]
fn matrix_grid_units_are_minimal() {
    for g in [build_symplectic_grid(5).unwrap(), build_rectangular_grid(3, 2).unwrap(), build_spin_grid(5).unwrap()] {
        let s = grid_span(&g);
        for (idx, e) in g.canonical_elements() {
            assert!(is_minimal_tripotent(&e, &s, &tol()).unwrap(), "{} {idx}", g.kind());
        }
    }
}

#[test]
fn sum_of_tripotents_is_not_minimal() {
    let g = build_rectangular_grid(2, 2).unwrap();
    let s = grid_span(&g);
    assert_eq!(span_basis(&grid_elements(&g), &tol()).unwrap().dim(), 4);
    let diag = g.elements().values().next().unwrap() + g.elements().values().last().unwrap();
    assert!(is_tripotent(&diag, &tol()));
    assert!(!is_minimal_tripotent(&diag, &s, &tol()).unwrap());
}
