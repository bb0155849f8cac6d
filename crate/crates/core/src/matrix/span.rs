//! Rank-revealing span engine.
//!
//! A [`Subspace`] stores an orthonormal basis (trace pairing) of a linear span
//! of block elements. Basis vectors are kept sparse together with a
//! coordinate index, so projecting a sparse candidate only touches the basis
//! vectors that share its support. For the structured realizations in this
//! crate (matrix units, Pauli words) this keeps closure computations close to
//! linear in the final dimension.

use super::block::{BlockElement, BlockShape};
use super::dense::{C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

/// Entries below this magnitude are dropped from stored unit vectors.
const CHOP: f64 = 1e-15;

#[derive(Debug, Clone)]
struct SparseVec {
    idx: Vec<u32>,
    val: Vec<C64>,
}

impl SparseVec {
    fn from_dense(v: &[C64]) -> Self {
        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (i, z) in v.iter().enumerate() {
            if z.norm_sqr() > CHOP * CHOP {
                idx.push(i as u32);
                val.push(*z);
            }
        }
        Self { idx, val }
    }
}

/// Orthonormal basis of a linear span inside a fixed ambient block shape.
#[derive(Debug, Clone)]
pub struct Subspace {
    shape: BlockShape,
    len: usize,
    vectors: Vec<SparseVec>,
    /// For each ambient coordinate, the basis vectors that are nonzero there.
    by_coord: Vec<Vec<(u32, C64)>>,
}

impl Subspace {
    /// The zero subspace of the given ambient shape.
    pub fn zero(shape: &BlockShape) -> Self {
        let len = shape.total_dim();
        Self { shape: shape.clone(), len, vectors: Vec::new(), by_coord: vec![Vec::new(); len] }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn basis_flat(&self, j: usize) -> Vec<C64> {
        let mut out = vec![ZERO; self.len];
        let v = &self.vectors[j];
        for (&i, &z) in v.idx.iter().zip(&v.val) {
            out[i as usize] = z;
        }
        out
    }

    pub fn basis_element(&self, j: usize) -> BlockElement {
        BlockElement::from_flat(&self.shape, &self.basis_flat(j)).expect("basis vector matches shape")
    }

    pub fn basis(&self) -> Vec<BlockElement> {
        (0..self.dim()).map(|j| self.basis_element(j)).collect()
    }

    fn check_shape(&self, x: &BlockElement) -> Result<()> {
        if x.has_shape(&self.shape) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "element of shape {:?} in subspace of shape {:?}",
                x.shape().blocks(),
                self.shape.blocks()
            )))
        }
    }

    /// Coefficients `<c, q_j>` for all basis vectors.
    fn project(&self, c: &[C64]) -> Vec<C64> {
        let mut coef = vec![ZERO; self.vectors.len()];
        for (i, &ci) in c.iter().enumerate() {
            if ci.re == 0.0 && ci.im == 0.0 {
                continue;
            }
            for &(j, q) in &self.by_coord[i] {
                coef[j as usize] += ci * q.conj();
            }
        }
        coef
    }

    fn subtract(&self, r: &mut [C64], coef: &[C64]) {
        for (j, &a) in coef.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let v = &self.vectors[j];
            for (&i, &q) in v.idx.iter().zip(&v.val) {
                r[i as usize] -= a * q;
            }
        }
    }

    /// Residual after two projection passes, and the accumulated coefficients.
    fn residual(&self, c: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let mut r = c.to_vec();
        let mut coef = self.project(&r);
        self.subtract(&mut r, &coef);
        let second = self.project(&r);
        self.subtract(&mut r, &second);
        for (a, b) in coef.iter_mut().zip(second) {
            *a += b;
        }
        (r, coef)
    }

    /// Tries to extend the basis by the flat vector `c`; returns whether the
    /// dimension grew. A residual below `rank_tol * max(1, |c|)` is discarded.
    pub(crate) fn push_flat(&mut self, c: &[C64], rank_tol: f64) -> bool {
        debug_assert_eq!(c.len(), self.len);
        let cn = norm(c);
        if cn == 0.0 {
            return false;
        }
        let threshold = rank_tol * cn.max(1.0);
        // A single pass overestimates the residual, so it is a safe early reject.
        let mut r = c.to_vec();
        let coef = self.project(&r);
        self.subtract(&mut r, &coef);
        if norm(&r) < threshold {
            return false;
        }
        let second = self.project(&r);
        self.subtract(&mut r, &second);
        let rn = norm(&r);
        if rn < threshold {
            return false;
        }
        for z in r.iter_mut() {
            *z /= rn;
        }
        let v = SparseVec::from_dense(&r);
        let j = self.vectors.len() as u32;
        for (&i, &z) in v.idx.iter().zip(&v.val) {
            self.by_coord[i as usize].push((j, z));
        }
        self.vectors.push(v);
        true
    }

    pub(crate) fn push(&mut self, x: &BlockElement, rank_tol: f64) -> Result<bool> {
        self.check_shape(x)?;
        Ok(self.push_flat(&x.to_flat(), rank_tol))
    }

    /// Norm of the component of `x` orthogonal to the subspace.
    pub fn residual_norm(&self, x: &BlockElement) -> Result<f64> {
        self.check_shape(x)?;
        Ok(norm(&self.residual(&x.to_flat()).0))
    }

    /// Coordinates of the orthogonal projection of `x` in the stored basis.
    pub fn coordinates(&self, x: &BlockElement) -> Result<Vec<C64>> {
        self.check_shape(x)?;
        Ok(self.residual(&x.to_flat()).1)
    }

    /// Orthogonal projection onto the subspace.
    pub fn project_element(&self, x: &BlockElement) -> Result<BlockElement> {
        let coef = self.coordinates(x)?;
        Ok(self.combination(&coef))
    }

    /// `sum_j coeffs[j] * q_j`.
    pub fn combination(&self, coeffs: &[C64]) -> BlockElement {
        let mut out = vec![ZERO; self.len];
        for (&a, v) in coeffs.iter().zip(&self.vectors) {
            for (&i, &q) in v.idx.iter().zip(&v.val) {
                out[i as usize] += a * q;
            }
        }
        BlockElement::from_flat(&self.shape, &out).expect("flat vector matches shape")
    }

    /// Membership test: the residual of `x` is below `rank_tol * max(1, |x|)`.
    pub fn contains(&self, x: &BlockElement, tol: &ToleranceConfig) -> Result<bool> {
        self.check_shape(x)?;
        let flat = x.to_flat();
        let r = norm(&self.residual(&flat).0);
        Ok(r < tol.rank_tol * norm(&flat).max(1.0))
    }

    /// Largest deviation of the stored basis from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, va) in self.vectors.iter().enumerate() {
            let coef = {
                let mut dense = vec![ZERO; self.len];
                for (&i, &z) in va.idx.iter().zip(&va.val) {
                    dense[i as usize] = z;
                }
                self.project(&dense)
            };
            for (b, c) in coef.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((c - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the complex span of `gens`.
pub fn span_basis(gens: &[BlockElement], tol: &ToleranceConfig) -> Result<Subspace> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let mut s = Subspace::zero(&first.shape());
    for g in gens {
        s.push(g, tol.rank_tol)?;
    }
    Ok(s)
}

/// Like [`span_basis`] but allows an empty list by taking the shape explicitly.
pub fn span_in(shape: &BlockShape, gens: &[BlockElement], tol: &ToleranceConfig) -> Result<Subspace> {
    let mut s = Subspace::zero(shape);
    for g in gens {
        s.push(g, tol.rank_tol)?;
    }
    Ok(s)
}

/// True iff both subspaces have the same dimension and each basis lies in the other span.
pub fn subspace_equal(a: &Subspace, b: &Subspace, tol: &ToleranceConfig) -> Result<bool> {
    if a.shape != b.shape {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            a.shape.blocks(),
            b.shape.blocks()
        )));
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    for j in 0..a.dim() {
        if !b.contains(&a.basis_element(j), tol)? {
            return Ok(false);
        }
    }
    for j in 0..b.dim() {
        if !a.contains(&b.basis_element(j), tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::dense::{ComplexMatrix, I, ONE};

    fn e(i: usize, j: usize) -> BlockElement {
        BlockElement::single(ComplexMatrix::unit(2, 2, i, j))
    }

    fn pauli() -> (BlockElement, BlockElement) {
        (
            BlockElement::single(ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()),
            BlockElement::single(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()),
        )
    }

    #[test]
    fn scalar_multiple_adds_nothing() {
        let tol = ToleranceConfig::default();
        let s = span_basis(&[e(0, 0), e(0, 0).scale_real(2.0), e(0, 1)], &tol).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn linear_dependence_detected() {
        let tol = ToleranceConfig::default();
        let (s1, s2) = pauli();
        let s = span_basis(&[s1.clone(), s2.clone(), &s1 + &s2], &tol).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn full_matrix_space() {
        let tol = ToleranceConfig::default();
        let units: Vec<_> = (0..3)
            .flat_map(|i| (0..3).map(move |j| BlockElement::single(ComplexMatrix::unit(3, 3, i, j))))
            .collect();
        assert_eq!(span_basis(&units, &tol).unwrap().dim(), 9);
    }

    #[test]
    fn empty_generators_rejected() {
        assert_eq!(span_basis(&[], &ToleranceConfig::default()).unwrap_err(), Error::EmptyGenerators);
    }

    #[test]
    fn containment() {
        let tol = ToleranceConfig::default();
        let s = span_basis(&[e(0, 0)], &tol).unwrap();
        assert!(s.contains(&e(0, 0), &tol).unwrap());
        assert!(!s.contains(&e(0, 1), &tol).unwrap());
        let (s1, s2) = pauli();
        let sp = span_basis(&[s1.clone(), s2.clone()], &tol).unwrap();
        let combo = &s1 + &s2.scale(I);
        assert!(sp.contains(&combo, &tol).unwrap());
        let wrong = BlockElement::single(ComplexMatrix::unit(3, 3, 0, 0));
        assert!(sp.contains(&wrong, &tol).is_err());
    }

    #[test]
    fn equality() {
        let tol = ToleranceConfig::default();
        let a = span_basis(&[e(0, 0), e(0, 1)], &tol).unwrap();
        let b = span_basis(&[e(0, 1), e(0, 0)], &tol).unwrap();
        assert!(subspace_equal(&a, &b, &tol).unwrap());
        let c = span_basis(&[e(0, 0)], &tol).unwrap();
        let d = span_basis(&[e(0, 0), e(1, 1)], &tol).unwrap();
        assert!(!subspace_equal(&c, &d, &tol).unwrap());
        let (s1, _) = pauli();
        let x = span_basis(std::slice::from_ref(&s1), &tol).unwrap();
        let y = span_basis(&[s1.scale_real(2.0)], &tol).unwrap();
        assert!(subspace_equal(&x, &y, &tol).unwrap());
    }

    #[test]
    fn coordinates_reconstruct_members() {
        let tol = ToleranceConfig::default();
        let (s1, s2) = pauli();
        let sp = span_basis(&[s1.clone(), s2.clone()], &tol).unwrap();
        let x = &s1.scale(C64::new(2.0, -1.0)) + &s2.scale(ONE);
        let back = sp.combination(&sp.coordinates(&x).unwrap());
        assert!(back.max_abs_diff(&x) < 1e-14);
    }
}
