//! JSON wire formats.
//!
//! A matrix is `{"rows": r, "cols": c, "data": [[re, im], ...]}` in row-major
//! order; a block element is `{"blocks": [matrix, ...]}`.

use serde::{Deserialize, Serialize};

use super::block::BlockElement;
use super::dense::{ComplexMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockElementJson {
    pub blocks: Vec<MatrixJson>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self { rows: m.rows(), cols: m.cols(), data: m.data().iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let data = j.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(j.rows, j.cols, data).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl From<&BlockElement> for BlockElementJson {
    fn from(x: &BlockElement) -> Self {
        Self { blocks: x.parts().iter().map(MatrixJson::from).collect() }
    }
}

impl TryFrom<BlockElementJson> for BlockElement {
    type Error = Error;

    fn try_from(j: BlockElementJson) -> Result<Self> {
        let parts = j.blocks.into_iter().map(ComplexMatrix::try_from).collect::<Result<Vec<_>>>()?;
        BlockElement::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ComplexMatrix::try_from(MatrixJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for BlockElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BlockElementJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BlockElement::try_from(BlockElementJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
