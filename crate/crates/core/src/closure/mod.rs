//! Ternary closure of generating sets and the structure of the resulting TROs.
//!
//! The TRO generated by `g_1..g_r` is the span of the odd words
//! `g_{a0} g_{a1}^* g_{b1} g_{a2}^* g_{b2} ...`. The closure grows that span
//! level by level: every word accepted at one level is multiplied on the
//! right by each element of an independent subset of `{g_a^* g_b}`. Only
//! accepted words are extended, since a dependent word's extensions are
//! combinations of extensions already tried. The letter sequence of every
//! accepted word is kept, which is what the word-reversal map needs.

mod blocks;
mod theta;
mod units;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ternary, BlockElement, Subspace};
use crate::random::{rng, Rng};
use crate::tolerance::ToleranceConfig;
use rand::Rng as _;

pub use blocks::{decompose_blocks, BlockDecomposition};
pub use theta::{word_antiautomorphism, AntiAutomorphism};
pub use units::{
    extract_matrix_units_hermitian, extract_matrix_units_symplectic, verify_matrix_units, MatrixUnitSystem,
    SymplecticUnits, UnitReport, UnitViolation,
};

/// Number of dependent words retained as witnesses for the word-reversal check.
const DEPENDENT_SAMPLE: usize = 256;
const CHUNK: usize = 2048;

#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub space: Subspace,
    /// Number of word-length levels processed.
    pub iterations: usize,
    pub generator_count: usize,
    generators: Vec<BlockElement>,
    /// Letters of the word behind each basis vector, in basis order.
    words: Vec<Vec<u32>>,
    /// Sample of words that turned out to be dependent.
    dependent: Vec<Vec<u32>>,
}

impl ClosureResult {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn generators(&self) -> &[BlockElement] {
        &self.generators
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn dependent_words(&self) -> &[Vec<u32>] {
        &self.dependent
    }

    /// Longest accepted word, in letters.
    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Evaluates a word `g_{w0} g_{w1}^* g_{w2} ...`.
    pub fn eval_word(&self, letters: &[u32]) -> Result<BlockElement> {
        eval_word(&self.generators, letters)
    }

    /// Largest relative residual of `b_i b_j^* b_k` against the space over `samples`
    /// random basis triples (all triples when there are at most `samples` of them).
    pub fn closure_defect(&self, samples: usize, seed: u64) -> Result<f64> {
        let d = self.dim();
        let triples: Vec<(usize, usize, usize)> = if d * d * d <= samples {
            (0..d).flat_map(|a| (0..d).flat_map(move |b| (0..d).map(move |c| (a, b, c)))).collect()
        } else {
            let mut r: Rng = rng(seed);
            (0..samples).map(|_| (r.random_range(0..d), r.random_range(0..d), r.random_range(0..d))).collect()
        };
        let defects: Vec<Result<f64>> = triples
            .par_iter()
            .map(|&(a, b, c)| {
                let p = ternary(&self.space.basis_element(a), &self.space.basis_element(b), &self.space.basis_element(c))?;
                Ok(self.space.residual_norm(&p)? / p.norm().max(1.0))
            })
            .collect();
        defects.into_iter().try_fold(0.0_f64, |m, r| Ok(m.max(r?)))
    }
}

pub(crate) fn eval_word(gens: &[BlockElement], letters: &[u32]) -> Result<BlockElement> {
    let (first, rest) = letters.split_first().ok_or_else(|| Error::InvalidParameter("empty word".into()))?;
    let mut acc = gens[*first as usize].clone();
    for pair in rest.chunks(2) {
        let [a, b] = pair else {
            return Err(Error::InvalidParameter("words have odd length".into()));
        };
        acc = ternary(&acc, &gens[*a as usize], &gens[*b as usize])?;
    }
    Ok(acc)
}

/// `x / |x|`, or `None` when `|x|` is negligible against `scale`.
fn unit_flat(x: &BlockElement, scale: f64, rank_tol: f64) -> Option<Vec<crate::matrix::C64>> {
    let n = x.norm();
    if !n.is_finite() || n <= rank_tol * scale {
        return None;
    }
    Some(x.to_flat().into_iter().map(|z| z / n).collect())
}

/// Bound on the norm of a word: `|g_{w0}|` times the operator norms of the other letters.
pub(crate) fn word_scale(norms: &[f64], op_norms: &[f64], letters: &[u32]) -> f64 {
    letters.split_first().map_or(0.0, |(first, rest)| {
        rest.iter().fold(norms[*first as usize], |acc, &l| acc * op_norms[l as usize])
    })
}

/// Ternary closure of `gens`.
pub fn tro_closure(gens: &[BlockElement], tol: &ToleranceConfig) -> Result<ClosureResult> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let shape = first.shape();
    for g in gens {
        first.ensure_same_shape(g)?;
    }
    let mut space = Subspace::zero(&shape);
    let mut words: Vec<Vec<u32>> = Vec::new();
    let mut elements: Vec<BlockElement> = Vec::new();
    let mut dependent: Vec<Vec<u32>> = Vec::new();
    let mut seen_dependent = 0usize;
    let mut note_dependent = |w: Vec<u32>, dependent: &mut Vec<Vec<u32>>| {
        seen_dependent += 1;
        if dependent.len() < DEPENDENT_SAMPLE / 2 || (dependent.len() < DEPENDENT_SAMPLE && seen_dependent.is_multiple_of(97)) {
            dependent.push(w);
        }
    };

    let norms: Vec<f64> = gens.iter().map(BlockElement::norm).collect();
    let op_norms: Vec<f64> = gens.iter().map(BlockElement::op_norm).collect();
    let largest = norms.iter().copied().fold(0.0, f64::max);
    for (a, g) in gens.iter().enumerate() {
        let accepted = unit_flat(g, largest, tol.rank_tol).is_some_and(|f| space.push_flat(&f, tol.rank_tol));
        if accepted {
            words.push(vec![a as u32]);
            elements.push(g.clone());
        } else {
            note_dependent(vec![a as u32], &mut dependent);
        }
    }

    // Independent subset of the products g_a^* g_b.
    let right = shape.right_shape();
    let mut rspace = Subspace::zero(&right);
    let mut multipliers: Vec<((u32, u32), BlockElement)> = Vec::new();
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            let r = ga.adjoint_mul(gb)?;
            let scale = op_norms[a] * norms[b];
            if unit_flat(&r, scale, tol.rank_tol).is_some_and(|f| rspace.push_flat(&f, tol.rank_tol)) {
                multipliers.push(((a as u32, b as u32), r));
            }
        }
    }

    let ambient = shape.total_dim();
    let mut frontier: Vec<usize> = (0..words.len()).collect();
    let mut iterations = 0;
    while !frontier.is_empty() && space.dim() < ambient {
        iterations += 1;
        let candidates: Vec<(usize, usize)> =
            frontier.iter().flat_map(|&w| (0..multipliers.len()).map(move |r| (w, r))).collect();
        let mut next = Vec::new();
        for chunk in candidates.chunks(CHUNK) {
            let products: Vec<Result<BlockElement>> =
                chunk.par_iter().map(|&(w, r)| elements[w].mul(&multipliers[r].1)).collect();
            for (&(w, r), p) in chunk.iter().zip(products) {
                let p = p?;
                let mut letters = words[w].clone();
                let (a, b) = multipliers[r].0;
                letters.extend([a, b]);
                let scale = elements[w].norm() * op_norms[a as usize] * op_norms[b as usize];
                if space.dim() < ambient
                    && unit_flat(&p, scale, tol.rank_tol).is_some_and(|f| space.push_flat(&f, tol.rank_tol))
                {
                    next.push(words.len());
                    words.push(letters);
                    elements.push(p);
                } else {
                    note_dependent(letters, &mut dependent);
                }
            }
        }
        frontier = next;
    }

    Ok(ClosureResult {
        space,
        iterations,
        generator_count: gens.len(),
        generators: gens.to_vec(),
        words,
        dependent,
    })
}

/// JSON summary of a closure.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureSummary {
    pub dim: usize,
    pub iterations: usize,
    pub generator_count: usize,
    pub max_word_len: usize,
}

impl From<&ClosureResult> for ClosureSummary {
    fn from(c: &ClosureResult) -> Self {
        Self { dim: c.dim(), iterations: c.iterations, generator_count: c.generator_count, max_word_len: c.max_word_len() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{build_standard_spin_system, build_symplectic_grid};
    use crate::matrix::{subspace_equal, ComplexMatrix};

    fn single(m: ComplexMatrix) -> BlockElement {
        BlockElement::single(m)
    }

    #[test]
    fn single_partial_isometry() {
        let c = tro_closure(&[single(ComplexMatrix::unit(2, 2, 0, 0))], &ToleranceConfig::default()).unwrap();
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn spin_k4_fills_m4() {
        let gens: Vec<_> = build_standard_spin_system(4).unwrap().into_iter().map(single).collect();
        let c = tro_closure(&gens, &ToleranceConfig::default()).unwrap();
        assert_eq!(c.dim(), 16);
        assert!(c.closure_defect(10_000, 1).unwrap() < 1e-12);
    }

    #[test]
    fn skew_grid_m5() {
        let g = build_symplectic_grid(5).unwrap();
        let gens: Vec<_> = g.elements().values().cloned().collect();
        let c = tro_closure(&gens, &ToleranceConfig::default()).unwrap();
        assert_eq!(c.dim(), 25);
    }

    #[test]
    fn words_reproduce_basis_span() {
        let gens: Vec<_> = build_standard_spin_system(3).unwrap().into_iter().map(single).collect();
        let tol = ToleranceConfig::default();
        let c = tro_closure(&gens, &tol).unwrap();
        let evaluated: Vec<_> = c.words().iter().map(|w| c.eval_word(w).unwrap()).collect();
        let s = crate::matrix::span_basis(&evaluated, &tol).unwrap();
        assert!(subspace_equal(&s, &c.space, &tol).unwrap());
    }

    #[test]
    fn idempotent() {
        let gens: Vec<_> = build_standard_spin_system(3).unwrap().into_iter().map(single).collect();
        let tol = ToleranceConfig::default();
        let c = tro_closure(&gens, &tol).unwrap();
        let again = tro_closure(&c.space.basis(), &tol).unwrap();
        assert!(subspace_equal(&c.space, &again.space, &tol).unwrap());
    }

    #[test]
    fn errors() {
        let tol = ToleranceConfig::default();
        assert_eq!(tro_closure(&[], &tol).unwrap_err(), Error::EmptyGenerators);
        let a = single(ComplexMatrix::identity(2));
        let b = single(ComplexMatrix::identity(3));
        assert!(matches!(tro_closure(&[a, b], &tol), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn roundoff_products_are_dependent() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rot = ComplexMatrix::from_real(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let gens: Vec<_> = (0..3)
            .map(|i| single(rot.checked_mul(&ComplexMatrix::unit(3, 3, i, i)).unwrap().checked_mul(&rot.transpose()).unwrap()))
            .collect();
        let closure = tro_closure(&gens, &ToleranceConfig::default()).unwrap();
        assert_eq!(closure.dim(), 3);
        assert!(word_antiautomorphism(&closure, &ToleranceConfig::default(), 1).is_ok());
    }
}
