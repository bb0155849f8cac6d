//! Decomposition of a finite-dimensional TRO into rectangular matrix blocks.
//!
//! A generic positive element `h = Σ a_k a_k^*` of the left linking algebra
//! acts on each block `M_{n,m}` (realized with multiplicity `k`) as a generic
//! positive `n×n` matrix tensored with the identity. Its eigenspaces with
//! nonzero eigenvalue are therefore the ranges of `n` minimal projections of
//! multiplicity `k`, and two eigenspaces belong to the same block exactly when
//! `T^*` maps them onto the same right subspace.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use serde::Serialize;

use super::units::MatrixUnitSystem;
use super::ClosureResult;
use crate::error::{Error, Result};
use crate::matrix::{span_in, subspace_equal, BlockElement, BlockShape, ComplexMatrix, Subspace, C64};
use crate::random::{random_element, rng};
use crate::tolerance::ToleranceConfig;

const RETRIES: usize = 5;
/// Relative eigenvalue gaps at or below this are one eigenvalue.
const MERGE_GAP: f64 = 1e-9;
/// Relative eigenvalue gaps up to this are too close to call.
const AMBIGUOUS_GAP: f64 = 1e-6;
const OVERLAP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    /// `(n_α, m_α)` in ascending order.
    pub blocks: Vec<(usize, usize)>,
    /// Left-support projection of each block.
    pub central_projections: Vec<BlockElement>,
    /// Matrix units realizing the isomorphism onto `⊕ M_{n_α, m_α}`.
    pub units: MatrixUnitSystem,
    pub seed: u64,
    /// Number of generic elements tried.
    pub attempts: usize,
}

impl BlockDecomposition {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|&(n, m)| n * m).sum()
    }

    pub fn summary(&self) -> BlockSummary {
        BlockSummary { blocks: self.blocks.clone(), dim: self.dim(), seed: self.seed, attempts: self.attempts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSummary {
    pub blocks: Vec<(usize, usize)>,
    pub dim: usize,
    pub seed: u64,
    pub attempts: usize,
}

/// Splits the closure into blocks `M_{n,m}` and builds matrix units for each.
///
/// Attempt `a` draws its generic element from seed `seed + a`; after the
/// initial attempt and `RETRIES` more, a persisting eigenvalue collision is an error.
pub fn decompose_blocks(t: &ClosureResult, tol: &ToleranceConfig, seed: u64) -> Result<BlockDecomposition> {
    let space = &t.space;
    if space.dim() == 0 {
        return Ok(BlockDecomposition {
            blocks: Vec::new(),
            central_projections: Vec::new(),
            units: MatrixUnitSystem { units: BTreeMap::new(), block_dims: Vec::new() },
            seed,
            attempts: 0,
        });
    }
    for attempt in 0..=RETRIES {
        if let Some(mut d) = attempt_decomposition(space, tol, seed.wrapping_add(attempt as u64))? {
            d.seed = seed;
            d.attempts = attempt + 1;
            return Ok(d);
        }
    }
    Err(Error::EigenvalueCollision { attempts: RETRIES + 1 })
}

struct Cluster {
    /// Orthonormal eigenvectors, as single-column block elements.
    vectors: Vec<BlockElement>,
    right: Subspace,
}

fn column_shape(shape: &BlockShape) -> BlockShape {
    BlockShape::new(shape.blocks().iter().map(|&(r, _)| (r, 1)).collect()).expect("nonempty shape")
}

fn attempt_decomposition(space: &Subspace, tol: &ToleranceConfig, seed: u64) -> Result<Option<BlockDecomposition>> {
    let shape = space.shape().clone();
    let mut r = rng(seed);
    let mut h = BlockElement::zeros(&shape.left_shape());
    for _ in 0..=shape.total_rows() {
        let a = random_element(space, &mut r);
        h = &h + &a.mul_adjoint(&a)?;
    }

    let cols = column_shape(&shape);
    let mut spectrum: Vec<(f64, BlockElement)> = Vec::new();
    for (b, part) in h.parts().iter().enumerate() {
        if part.rows() == 0 {
            continue;
        }
        let m = part.to_nalgebra();
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
            let mut parts: Vec<ComplexMatrix> =
                cols.blocks().iter().map(|&(rows, c)| ComplexMatrix::zeros(rows, c)).collect();
            let col: Vec<C64> = eig.eigenvectors.column(idx).iter().copied().collect();
            parts[b] = ComplexMatrix::new(part.rows(), 1, col)?;
            spectrum.push((lambda, BlockElement::new(parts)?));
        }
    }
    spectrum.sort_by(|x, y| x.0.total_cmp(&y.0));
    let scale = spectrum.iter().map(|s| s.0.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::Decomposition("generic element of the left algebra vanished".into()));
    }

    let mut clusters: Vec<Vec<BlockElement>> = Vec::new();
    let mut last: Option<f64> = None;
    for (lambda, v) in spectrum {
        if lambda <= MERGE_GAP * scale {
            continue;
        }
        match last {
            Some(prev) if lambda - prev <= MERGE_GAP * scale => clusters.last_mut().expect("open cluster").push(v),
            Some(prev) if lambda - prev <= AMBIGUOUS_GAP * scale => return Ok(None),
            _ => clusters.push(vec![v]),
        }
        last = Some(lambda);
    }

    let basis = space.basis();
    let right_cols = column_shape(&shape.transposed());
    let clusters: Vec<Cluster> = clusters
        .into_iter()
        .map(|vectors| {
            let images = vectors
                .iter()
                .flat_map(|e| basis.iter().map(move |t| t.adjoint_mul(e)))
                .collect::<Result<Vec<_>>>()?;
            let right = span_in(&right_cols, &images, tol)?;
            Ok(Cluster { vectors, right })
        })
        .collect::<Result<_>>()?;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (ci, c) in clusters.iter().enumerate() {
        if c.right.dim() == 0 {
            return Err(Error::Decomposition("eigenspace of the left algebra is annihilated by T*".into()));
        }
        let mut home = None;
        for (gi, g) in groups.iter().enumerate() {
            let rep = &clusters[g[0]].right;
            let overlap = (0..c.right.dim())
                .map(|j| {
                    let coords = rep.coordinates(&c.right.basis_element(j))?;
                    Ok(coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            if overlap > OVERLAP {
                if !subspace_equal(rep, &c.right, tol)? || clusters[g[0]].vectors.len() != c.vectors.len() {
                    return Err(Error::Decomposition("eigenspaces of one block disagree".into()));
                }
                home = Some(gi);
                break;
            }
        }
        match home {
            Some(gi) => groups[gi].push(ci),
            None => groups.push(vec![ci]),
        }
    }

    let mut blocks: Vec<((usize, usize), Vec<usize>)> = Vec::new();
    for g in groups {
        let k = clusters[g[0]].vectors.len();
        let rdim = clusters[g[0]].right.dim();
        if !rdim.is_multiple_of(k) {
            return Err(Error::Decomposition(format!("right support of dimension {rdim} with multiplicity {k}")));
        }
        blocks.push(((g.len(), rdim / k), g));
    }
    let total: usize = blocks.iter().map(|((n, m), _)| n * m).sum();
    if total != space.dim() {
        return Err(Error::Decomposition(format!("blocks account for {total} of {} dimensions", space.dim())));
    }
    blocks.sort_by_key(|b| b.0);

    let mut units = BTreeMap::new();
    let mut central = Vec::new();
    for (alpha, ((n, m), members)) in blocks.iter().enumerate() {
        let proj: Vec<BlockElement> = members
            .iter()
            .map(|&ci| {
                let vs = &clusters[ci].vectors;
                vs[1..].iter().try_fold(vs[0].mul_adjoint(&vs[0])?, |acc, v| Ok(&acc + &v.mul_adjoint(v)?))
            })
            .collect::<Result<_>>()?;
        let row_images = basis.iter().map(|t| proj[0].mul(t)).collect::<Result<Vec<_>>>()?;
        let row = span_in(&shape, &row_images, tol)?;
        if row.dim() != *m {
            return Err(Error::Decomposition(format!("first row has dimension {}, expected {m}", row.dim())));
        }
        let first_row: Vec<BlockElement> = row.basis().iter().map(|x| x.scale_real(1.0 / x.op_norm())).collect();
        for i in 0..*n {
            let f = if i == 0 {
                proj[0].clone()
            } else {
                let a = random_element(space, &mut r);
                let b = random_element(space, &mut r);
                let x = proj[i].mul(&a.mul_adjoint(&b)?)?.mul(&proj[0])?;
                let s = x.op_norm();
                if s <= tol.rank_tol {
                    return Err(Error::Decomposition("vanishing partial isometry between block rows".into()));
                }
                x.scale_real(1.0 / s)
            };
            for (j, e) in first_row.iter().enumerate() {
                units.insert((alpha, i, j), f.mul(e)?);
            }
        }
        central.push(proj[1..].iter().fold(proj[0].clone(), |acc, p| &acc + p));
    }

    Ok(Some(BlockDecomposition {
        blocks: blocks.iter().map(|b| b.0).collect(),
        central_projections: central,
        units: MatrixUnitSystem { units, block_dims: blocks.iter().map(|b| b.0).collect() },
        seed,
        attempts: 1,
    }))
}
