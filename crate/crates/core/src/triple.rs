//! Jordan triple product, tripotents and Peirce decompositions.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{span_in, ternary, BlockElement, ComplexMatrix, Subspace, C64};
use crate::tolerance::ToleranceConfig;

/// `{x,y,z} = (x y^* z + z y^* x) / 2`, blockwise.
pub fn jordan_triple(x: &BlockElement, y: &BlockElement, z: &BlockElement) -> Result<BlockElement> {
    let a = ternary(x, y, z)?;
    let b = ternary(z, y, x)?;
    Ok((&a + &b).scale_real(0.5))
}

/// True iff `{e,e,e}` is within `eq_tol * |e|` of `e`.
pub fn is_tripotent(e: &BlockElement, tol: &ToleranceConfig) -> bool {
    match jordan_triple(e, e, e) {
        Ok(c) => (&c - e).norm() < tol.eq_tol * e.norm(),
        Err(_) => false,
    }
}

/// The operator `z -> {x,y,z}` restricted to an invariant subspace.
#[derive(Debug, Clone)]
pub struct BoxOperator {
    pub domain: Subspace,
    /// Column `j` holds the coordinates of `{x, y, q_j}`.
    pub matrix: ComplexMatrix,
}

pub fn box_operator(x: &BlockElement, y: &BlockElement, s: &Subspace, tol: &ToleranceConfig) -> Result<BoxOperator> {
    let d = s.dim();
    if d == 0 {
        return Err(Error::InvalidParameter("box operator on the zero subspace".into()));
    }
    let mut m = ComplexMatrix::zeros(d, d);
    let mut worst: f64 = 0.0;
    for j in 0..d {
        let img = jordan_triple(x, y, &s.basis_element(j))?;
        let r = s.residual_norm(&img)?;
        worst = worst.max(r / img.norm().max(1.0));
        for (i, c) in s.coordinates(&img)?.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    if worst >= tol.eq_tol {
        return Err(Error::NotInvariant { residual: worst });
    }
    Ok(BoxOperator { domain: s.clone(), matrix: m })
}

/// Eigenspaces of `e□e` for the eigenvalues 0, 1/2 and 1.
#[derive(Debug, Clone)]
pub struct PeirceDecomposition {
    pub tripotent: BlockElement,
    pub p0: Subspace,
    pub p1: Subspace,
    pub p2: Subspace,
    /// Largest distance of a computed eigenvalue from its snapped value.
    pub spectral_defect: f64,
}

impl PeirceDecomposition {
    /// The space for eigenvalue `k/2`.
    pub fn space(&self, k: usize) -> &Subspace {
        match k {
            0 => &self.p0,
            1 => &self.p1,
            _ => &self.p2,
        }
    }
}

/// Eigenvalues and eigenvectors (as columns) of the self-adjoint part of `e□e` on `s`.
fn box_spectrum(e: &BlockElement, s: &Subspace, tol: &ToleranceConfig) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let op = box_operator(e, e, s, tol)?.matrix.to_nalgebra();
    let herm = (&op + op.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Eigenvalues of `e□e` restricted to `s`, sorted ascending.
pub fn peirce_spectrum(e: &BlockElement, s: &Subspace, tol: &ToleranceConfig) -> Result<Vec<f64>> {
    let mut ev = box_spectrum(e, s, tol)?.0;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn peirce_decompose(e: &BlockElement, s: &Subspace, tol: &ToleranceConfig) -> Result<PeirceDecomposition> {
    if !is_tripotent(e, tol) {
        return Err(Error::NotTripotent);
    }
    if !s.contains(e, tol)? {
        return Err(Error::InvalidParameter("tripotent does not lie in the subspace".into()));
    }
    let (values, vectors) = box_spectrum(e, s, tol)?;
    let basis = s.basis();
    let mut groups: [Vec<BlockElement>; 3] = Default::default();
    let mut defect: f64 = 0.0;
    for (col, &lambda) in values.iter().enumerate() {
        let k = (2.0 * lambda).round();
        let dev = (lambda - k / 2.0).abs();
        if !(0.0..=2.0).contains(&k) || dev > tol.eq_tol {
            return Err(Error::NonPeirceEigenvalue { value: lambda });
        }
        defect = defect.max(dev);
        let coeffs: Vec<C64> = vectors.column(col).iter().copied().collect();
        groups[k as usize].push(BlockElement::combination(s.shape(), &coeffs, &basis));
    }
    let [g0, g1, g2] = groups;
    Ok(PeirceDecomposition {
        tripotent: e.clone(),
        p0: span_in(s.shape(), &g0, tol)?,
        p1: span_in(s.shape(), &g1, tol)?,
        p2: span_in(s.shape(), &g2, tol)?,
        spectral_defect: defect,
    })
}

/// True iff `{e, S, e}` is one-dimensional.
pub fn is_minimal_tripotent(e: &BlockElement, s: &Subspace, tol: &ToleranceConfig) -> Result<bool> {
    let mut images = Vec::with_capacity(s.dim());
    for b in s.basis() {
        images.push(jordan_triple(e, &b, e)?);
    }
    Ok(span_in(s.shape(), &images, tol)?.dim() == 1)
}

/// Membership in the Peirce-2 space of `v` via `v (v z^* v)^* v = z`.
pub fn peirce2_membership(v: &BlockElement, z: &BlockElement, tol: &ToleranceConfig) -> bool {
    let Ok(inner) = ternary(v, z, v) else { return false };
    let Ok(outer) = ternary(v, &inner, v) else { return false };
    (&outer - z).norm() < tol.eq_tol * z.norm().max(1.0)
}

/// The product `a e^* b`, which makes the Peirce-2 space of `e` a C*-algebra with unit `e`.
pub fn peirce2_product(a: &BlockElement, b: &BlockElement, e: &BlockElement, tol: &ToleranceConfig) -> Result<BlockElement> {
    if !peirce2_membership(e, a, tol) || !peirce2_membership(e, b, tol) {
        return Err(Error::NotInPeirce2);
    }
    ternary(a, e, b)
}

/// Largest relative residual of `{b_i, b_j, b_k}` against `s` over basis triples.
pub fn subtriple_defect(s: &Subspace) -> Result<f64> {
    let basis = s.basis();
    let mut worst: f64 = 0.0;
    for a in &basis {
        for b in &basis {
            for c in &basis {
                let p = jordan_triple(a, b, c)?;
                worst = worst.max(s.residual_norm(&p)? / p.norm().max(1.0));
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{span_basis, I, ONE};

    fn e(i: usize, j: usize) -> BlockElement {
        BlockElement::single(ComplexMatrix::unit(2, 2, i, j))
    }

    fn m2() -> Subspace {
        span_basis(&[e(0, 0), e(0, 1), e(1, 0), e(1, 1)], &ToleranceConfig::default()).unwrap()
    }

    fn id2() -> BlockElement {
        BlockElement::single(ComplexMatrix::identity(2))
    }

    #[test]
    fn triple_product_examples() {
        assert_eq!(jordan_triple(&e(0, 0), &e(0, 0), &e(0, 0)).unwrap(), e(0, 0));
        assert!(jordan_triple(&e(0, 0), &e(1, 1), &e(0, 0)).unwrap().is_zero());
        let half = jordan_triple(&e(0, 1), &e(0, 1), &e(0, 0)).unwrap();
        assert!(half.max_abs_diff(&e(0, 0).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn tripotent_predicate() {
        let tol = ToleranceConfig::default();
        assert!(is_tripotent(&e(0, 0), &tol));
        assert!(!is_tripotent(&e(0, 0).scale_real(2.0), &tol));
        let s1 = BlockElement::single(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap());
        assert!(is_tripotent(&s1, &tol));
    }

    #[test]
    fn box_operator_eigenvalues() {
        let tol = ToleranceConfig::default();
        let one = |x: BlockElement| box_operator(&e(0, 0), &e(0, 0), &span_basis(&[x], &tol).unwrap(), &tol).unwrap();
        assert!((one(e(0, 0)).matrix.get(0, 0) - ONE).norm() < 1e-15);
        assert!((one(e(0, 1)).matrix.get(0, 0) - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(one(e(1, 1)).matrix.get(0, 0).norm() < 1e-15);
        let s = span_basis(&[e(0, 0)], &tol).unwrap();
        assert!(matches!(box_operator(&e(0, 1), &e(0, 0), &s, &tol), Err(Error::NotInvariant { .. })));
    }

    #[test]
    fn peirce_decomposition_of_matrix_unit() {
        let tol = ToleranceConfig::default();
        let d = peirce_decompose(&e(0, 0), &m2(), &tol).unwrap();
        assert_eq!((d.p0.dim(), d.p1.dim(), d.p2.dim()), (1, 2, 1));
        assert!(d.p2.contains(&e(0, 0), &tol).unwrap());
        assert!(d.p1.contains(&e(0, 1), &tol).unwrap());
        assert!(d.p1.contains(&e(1, 0), &tol).unwrap());
        assert!(d.p0.contains(&e(1, 1), &tol).unwrap());
    }

    #[test]
    fn unitary_tripotent_has_full_peirce2() {
        let tol = ToleranceConfig::default();
        let d = peirce_decompose(&id2(), &m2(), &tol).unwrap();
        assert_eq!((d.p0.dim(), d.p1.dim(), d.p2.dim()), (0, 0, 4));
    }

    #[test]
    fn non_tripotent_rejected() {
        let tol = ToleranceConfig::default();
        assert_eq!(peirce_decompose(&e(0, 0).scale_real(2.0), &m2(), &tol).unwrap_err(), Error::NotTripotent);
    }

    #[test]
    fn minimality() {
        let tol = ToleranceConfig::default();
        assert!(is_minimal_tripotent(&e(0, 0), &m2(), &tol).unwrap());
        assert!(!is_minimal_tripotent(&id2(), &m2(), &tol).unwrap());
    }

    #[test]
    fn peirce2_examples() {
        let tol = ToleranceConfig::default();
        assert!(peirce2_membership(&e(0, 0), &e(0, 0), &tol));
        assert!(!peirce2_membership(&e(0, 0), &e(0, 1), &tol));
        assert!(peirce2_membership(&id2(), &e(0, 1), &tol));
        assert_eq!(peirce2_product(&e(0, 0), &e(0, 0), &e(0, 0), &tol).unwrap(), e(0, 0));
        let s1 = BlockElement::single(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap());
        let s2 = BlockElement::single(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
        let s3 = BlockElement::single(ComplexMatrix::new(2, 2, vec![C64::new(0.0, 0.0), I, -I, C64::new(0.0, 0.0)]).unwrap());
        let p = peirce2_product(&s1, &s2, &id2(), &tol).unwrap();
        assert!(p.max_abs_diff(&s3.scale(-I)) < 1e-15);
        assert_eq!(peirce2_product(&e(0, 1), &e(0, 0), &e(0, 0), &tol).unwrap_err(), Error::NotInPeirce2);
    }
}
