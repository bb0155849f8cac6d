mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use troforge::closure::{
    decompose_blocks, extract_matrix_units_hermitian, extract_matrix_units_symplectic, tro_closure, verify_matrix_units,
    word_antiautomorphism,
};
use troforge::envelope::{transpose_pair, tro_from_pattern};
use troforge::grids::{
    build_hermitian_grid, build_rank_one_grid, build_rectangular_grid, build_standard_spin_system,
    build_symplectic_grid,
};
use troforge::matrix::{subspace_equal, BlockElement, ComplexMatrix};
use troforge::random::{gaussian_coeffs, random_element, rng};
use troforge::Error;

use common::{grid_elements, tol};

/// Name, generators, closure dimension and blocks.
type Family = (&'static str, Vec<BlockElement>, usize, Vec<(usize, usize)>);

fn families() -> Vec<Family> {
    let spin: Vec<BlockElement> =
        build_standard_spin_system(4).unwrap().into_iter().map(BlockElement::single).collect();
    let type1: Vec<BlockElement> = build_rectangular_grid(2, 3)
        .unwrap()
        .elements()
        .values()
        .map(|x| transpose_pair(&x.parts()[0]))
        .collect();
    vec![
        ("spin k=4", spin, 16, vec![(4, 4)]),
        ("hermitian n=3", grid_elements(&build_hermitian_grid(3).unwrap()), 9, vec![(3, 3)]),
        ("symplectic n=5", grid_elements(&build_symplectic_grid(5).unwrap()), 25, vec![(5, 5)]),
        ("type I 2x3", type1, 12, vec![(2, 3), (3, 2)]),
        ("rank-one n=3", grid_elements(&build_rank_one_grid(3).unwrap()), 15, vec![(1, 3), (3, 1), (3, 3)]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn closure_dim_invariant_under_recombination(which in 0usize..5, seed in any::<u64>()) {
        let (name, gens, dim, _) = families().swap_remove(which);
        let mut r = rng(seed);
        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut r);
        let shape = gens[0].shape();
        // A Gaussian square matrix is invertible with probability one.
        let mixed: Vec<BlockElement> = (0..gens.len())
            .map(|_| BlockElement::combination(&shape, &gaussian_coeffs(&mut r, gens.len()), &shuffled))
            .collect();
        let a = tro_closure(&gens, &tol()).unwrap();
        let b = tro_closure(&mixed, &tol()).unwrap();
        prop_assert_eq!(a.dim(), dim, "{}", name);
        prop_assert_eq!(b.dim(), dim, "{}", name);
        prop_assert!(subspace_equal(&a.space, &b.space, &tol()).unwrap());
    }

    #[test]
    fn block_multiset_is_seed_and_order_invariant(which in 0usize..5, seed in any::<u64>()) {
        let (name, mut gens, dim, blocks) = families().swap_remove(which);
        gens.shuffle(&mut rng(seed));
        let c = tro_closure(&gens, &tol()).unwrap();
        let d = decompose_blocks(&c, &tol(), seed).unwrap();
        prop_assert_eq!(&d.blocks, &blocks, "{}", name);
        prop_assert_eq!(d.blocks.iter().map(|(n, m)| n * m).sum::<usize>(), dim);
        prop_assert!(verify_matrix_units(&d.units, &tol()).unwrap().passed);
    }

    #[test]
    fn theta_is_an_involutive_antiautomorphism(which in 0usize..5, seed in any::<u64>()) {
        let (name, gens, _, _) = families().swap_remove(which);
        let c = tro_closure(&gens, &tol()).unwrap();
        let th = word_antiautomorphism(&c, &tol(), seed).unwrap();
        prop_assert!(th.residual < 1e-7, "{}: {}", name, th.residual);
        prop_assert!(th.generator_defect < 1e-12, "{}", name);
        prop_assert!(th.involution_defect < 1e-9, "{}", name);
        prop_assert!(th.anti_multiplicative_defect < 1e-7, "{}", name);
        let mut r = rng(seed);
        let x = random_element(&c.space, &mut r);
        let back = th.apply(&th.apply(&x).unwrap()).unwrap();
        prop_assert!((&back - &x).norm() < 1e-8 * x.norm().max(1.0));
    }
}

#[test]
fn closure_is_idempotent() {
    for (name, gens, dim, _) in families() {
        let c = tro_closure(&gens, &tol()).unwrap();
        let again = tro_closure(&c.space.basis(), &tol()).unwrap();
        assert_eq!(again.dim(), dim, "{name}");
        assert!(subspace_equal(&c.space, &again.space, &tol()).unwrap(), "{name}");
        assert!(c.closure_defect(2000, 7).unwrap() < 1e-9, "{name}");
    }
}

#[test]
fn extracted_units_satisfy_relations() {
    for n in 2..=6 {
        let u = extract_matrix_units_hermitian(&build_hermitian_grid(n).unwrap(), &tol()).unwrap();
        assert_eq!(u.len(), n * n);
        let rep = verify_matrix_units(&u, &tol()).unwrap();
        assert!(rep.passed && rep.max_residual < 1e-9, "hermitian n={n}");
        assert_eq!(rep.span_dim, n * n);
    }
    for n in 5..=7 {
        let s = extract_matrix_units_symplectic(&build_symplectic_grid(n).unwrap(), &tol()).unwrap();
        assert!(s.well_defined_residual < 1e-12, "symplectic n={n}");
        assert!(s.v_transpose_residual < 1e-9 && s.v_product_residual < 1e-9, "symplectic n={n}");
        let rep = verify_matrix_units(&s.system, &tol()).unwrap();
        assert!(rep.passed && rep.max_residual < 1e-9, "symplectic n={n}");
    }
}

#[test]
fn symplectic_extraction_needs_five_indices() {
    let g = build_symplectic_grid(4).unwrap();
    assert!(matches!(extract_matrix_units_symplectic(&g, &tol()), Err(Error::InvalidParameter(_))));
}

#[test]
fn pattern_tro_has_requested_blocks() {
    for pattern in [vec![(2, 2), (1, 1), (1, 1)], vec![(3, 1), (2, 4)], vec![(1, 1), (1, 1), (1, 1)]] {
        let t = tro_from_pattern(&pattern, &tol()).unwrap();
        let mut want = pattern.clone();
        want.sort();
        assert_eq!(t.dim(), pattern.iter().map(|(n, m)| n * m).sum::<usize>());
        assert_eq!(decompose_blocks(&t, &tol(), 3).unwrap().blocks, want);
    }
}

#[test]
fn non_universal_generators_are_reported() {
    let e11 = ComplexMatrix::unit(2, 2, 0, 0);
    let e12 = ComplexMatrix::unit(2, 2, 0, 1);
    let c = tro_closure(&[BlockElement::single(e11), BlockElement::single(e12)], &tol()).unwrap();
    assert_eq!(c.dim(), 2);
    assert!(matches!(word_antiautomorphism(&c, &tol(), 1), Err(Error::NotUniversal { .. })));
}

#[test]
fn empty_generators_are_rejected() {
    assert!(matches!(tro_closure(&[], &tol()), Err(Error::EmptyGenerators)));
}
