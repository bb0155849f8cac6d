use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use super::dense::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Ordered list of `(rows, cols)` pairs describing a direct sum of
/// rectangular matrix spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct BlockShape(Vec<(usize, usize)>);

impl BlockShape {
    pub fn new(blocks: Vec<(usize, usize)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidParameter("block shape must have at least one block".into()));
        }
        if blocks.iter().any(|&(r, c)| r == 0 || c == 0) {
            return Err(Error::InvalidParameter(format!("block dimensions must be positive: {blocks:?}")));
        }
        Ok(Self(blocks))
    }

    pub fn single(rows: usize, cols: usize) -> Self {
        Self::new(vec![(rows, cols)]).expect("positive dimensions")
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total complex dimension `sum rows_i * cols_i`.
    pub fn total_dim(&self) -> usize {
        self.0.iter().map(|&(r, c)| r * c).sum()
    }

    pub fn total_rows(&self) -> usize {
        self.0.iter().map(|b| b.0).sum()
    }

    pub fn total_cols(&self) -> usize {
        self.0.iter().map(|b| b.1).sum()
    }

    /// Shape of the adjoint elements.
    pub fn transposed(&self) -> Self {
        Self(self.0.iter().map(|&(r, c)| (c, r)).collect())
    }

    /// Shape of `x * y^*` for `x, y` of this shape.
    pub fn left_shape(&self) -> Self {
        Self(self.0.iter().map(|&(r, _)| (r, r)).collect())
    }

    /// Shape of `x^* * y` for `x, y` of this shape.
    pub fn right_shape(&self) -> Self {
        Self(self.0.iter().map(|&(_, c)| (c, c)).collect())
    }

    /// Concatenation of two shapes.
    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(other.0.iter()).copied().collect())
    }
}

impl TryFrom<Vec<(usize, usize)>> for BlockShape {
    type Error = Error;

    fn try_from(v: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BlockShape> for Vec<(usize, usize)> {
    fn from(s: BlockShape) -> Self {
        s.0
    }
}

/// Element of a direct sum of rectangular matrix spaces: one matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockElement {
    parts: Vec<ComplexMatrix>,
}

impl BlockElement {
    pub fn new(parts: Vec<ComplexMatrix>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("block element needs at least one block".into()));
        }
        Ok(Self { parts })
    }

    /// Wraps a single matrix as a one-block element.
    pub fn single(m: ComplexMatrix) -> Self {
        Self { parts: vec![m] }
    }

    pub fn zeros(shape: &BlockShape) -> Self {
        Self { parts: shape.blocks().iter().map(|&(r, c)| ComplexMatrix::zeros(r, c)).collect() }
    }

    /// The element whose `block`-th component is the matrix unit `E_{ij}`
    /// (0-based) and whose other components vanish.
    pub fn unit(shape: &BlockShape, block: usize, i: usize, j: usize) -> Self {
        let mut z = Self::zeros(shape);
        let (r, c) = shape.blocks()[block];
        z.parts[block] = ComplexMatrix::unit(r, c, i, j);
        z
    }

    /// Block-diagonal identity of a square shape.
    pub fn identity(shape: &BlockShape) -> Result<Self> {
        let mut parts = Vec::with_capacity(shape.len());
        for &(r, c) in shape.blocks() {
            if r != c {
                return Err(Error::ShapeMismatch(format!("identity needs square blocks, got {r}x{c}")));
            }
            parts.push(ComplexMatrix::identity(r));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[ComplexMatrix] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<ComplexMatrix> {
        self.parts
    }

    pub fn shape(&self) -> BlockShape {
        BlockShape(self.parts.iter().map(|m| m.dims()).collect())
    }

    pub fn has_shape(&self, shape: &BlockShape) -> bool {
        self.parts.len() == shape.len() && self.parts.iter().zip(shape.blocks()).all(|(m, &d)| m.dims() == d)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.parts.len() == other.parts.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a.dims() == b.dims())
    }

    pub(crate) fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{:?} vs {:?}", self.shape().blocks(), other.shape().blocks())))
        }
    }

    pub fn adjoint(&self) -> Self {
        Self { parts: self.parts.iter().map(|m| m.adjoint()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self { parts: self.parts.iter().map(|m| m.transpose()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { parts: self.parts.iter().map(|m| m.scale(s)).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Blockwise product.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.parts.len() != rhs.parts.len() {
            return Err(Error::ShapeMismatch(format!(
                "block counts differ: {} vs {}",
                self.parts.len(),
                rhs.parts.len()
            )));
        }
        let parts = self.parts.iter().zip(&rhs.parts).map(|(a, b)| a.checked_mul(b)).collect::<Result<_>>()?;
        Ok(Self { parts })
    }

    /// Blockwise `self * rhs^*`.
    pub fn mul_adjoint(&self, rhs: &Self) -> Result<Self> {
        self.ensure_same_shape(rhs)?;
        Ok(Self { parts: self.parts.iter().zip(&rhs.parts).map(|(a, b)| a.mul_adjoint(b)).collect() })
    }

    /// Blockwise `self^* * rhs`.
    pub fn adjoint_mul(&self, rhs: &Self) -> Result<Self> {
        self.adjoint().mul(rhs)
    }

    /// Trace pairing `<self, other> = sum_i trace(other_i^* self_i)`.
    pub fn inner(&self, other: &Self) -> C64 {
        let mut acc = ZERO;
        for (a, b) in self.parts.iter().zip(&other.parts) {
            for (x, y) in a.data().iter().zip(b.data()) {
                acc += x * y.conj();
            }
        }
        acc
    }

    /// Norm induced by the trace pairing.
    pub fn norm(&self) -> f64 {
        self.parts.iter().map(|m| m.data().iter().map(|z| z.norm_sqr()).sum::<f64>()).sum::<f64>().sqrt()
    }

    /// C*-norm of the direct sum: largest singular value over all blocks.
    pub fn op_norm(&self) -> f64 {
        self.parts.iter().map(|m| m.op_norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.parts.iter().zip(&other.parts).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|m| m.is_zero())
    }

    /// Row-major concatenation of all blocks.
    pub fn to_flat(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.parts.iter().map(|m| m.data().len()).sum());
        for m in &self.parts {
            out.extend_from_slice(m.data());
        }
        out
    }

    pub fn from_flat(shape: &BlockShape, flat: &[C64]) -> Result<Self> {
        if flat.len() != shape.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "flat vector of length {} does not fit shape of dimension {}",
                flat.len(),
                shape.total_dim()
            )));
        }
        let mut parts = Vec::with_capacity(shape.len());
        let mut offset = 0;
        for &(r, c) in shape.blocks() {
            parts.push(ComplexMatrix::from_raw(r, c, flat[offset..offset + r * c].to_vec()));
            offset += r * c;
        }
        Ok(Self { parts })
    }

    /// Linear combination `sum_k coeffs[k] * elems[k]`; all elements share `shape`.
    pub fn combination(shape: &BlockShape, coeffs: &[C64], elems: &[BlockElement]) -> Self {
        let mut acc = Self::zeros(shape);
        for (c, e) in coeffs.iter().zip(elems) {
            if *c == ZERO {
                continue;
            }
            for (a, b) in acc.parts.iter_mut().zip(&e.parts) {
                for (x, y) in a.data_mut().iter_mut().zip(b.data()) {
                    *x += c * y;
                }
            }
        }
        acc
    }

    /// Direct sum of two elements (concatenates their blocks).
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { parts: self.parts.iter().chain(&other.parts).cloned().collect() }
    }
}

impl Add for &BlockElement {
    type Output = BlockElement;

    fn add(self, rhs: &BlockElement) -> BlockElement {
        BlockElement { parts: self.parts.iter().zip(&rhs.parts).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &BlockElement {
    type Output = BlockElement;

    fn sub(self, rhs: &BlockElement) -> BlockElement {
        BlockElement { parts: self.parts.iter().zip(&rhs.parts).map(|(a, b)| a - b).collect() }
    }
}

/// TRO product `x y^* z`, blockwise.
pub fn ternary(x: &BlockElement, y: &BlockElement, z: &BlockElement) -> Result<BlockElement> {
    x.ensure_same_shape(y)?;
    x.ensure_same_shape(z)?;
    x.mul(&y.adjoint())?.mul(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> BlockElement {
        BlockElement::single(ComplexMatrix::unit(2, 2, i, j))
    }

    #[test]
    fn shape_validation() {
        assert!(BlockShape::new(vec![]).is_err());
        assert!(BlockShape::new(vec![(2, 0)]).is_err());
        let s = BlockShape::new(vec![(2, 2), (1, 3)]).unwrap();
        assert_eq!(s.total_dim(), 7);
        assert_eq!(s.transposed().blocks(), &[(2, 2), (3, 1)]);
    }

    #[test]
    fn ternary_on_matrix_units() {
        assert_eq!(ternary(&e(0, 0), &e(0, 0), &e(0, 0)).unwrap(), e(0, 0));
        assert_eq!(ternary(&e(0, 1), &e(0, 1), &e(0, 1)).unwrap(), e(0, 1));
        assert!(ternary(&e(0, 0), &e(0, 1), &e(1, 1)).unwrap().is_zero());
    }

    #[test]
    fn ternary_rejects_mismatched_shapes() {
        let other = BlockElement::single(ComplexMatrix::unit(2, 3, 0, 0));
        assert!(matches!(ternary(&e(0, 0), &other, &e(0, 0)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn flat_round_trip_and_inner_product() {
        let shape = BlockShape::new(vec![(2, 2), (1, 3)]).unwrap();
        let x = &BlockElement::unit(&shape, 0, 1, 0) + &BlockElement::unit(&shape, 1, 0, 2).scale(C64::new(0.0, 2.0));
        let flat = x.to_flat();
        assert_eq!(BlockElement::from_flat(&shape, &flat).unwrap(), x);
        assert!((x.inner(&x).re - 5.0).abs() < 1e-15);
        assert!((x.norm() - 5f64.sqrt()).abs() < 1e-15);
        assert!((x.op_norm() - 2.0).abs() < 1e-12);
    }
}
