//! The antiautomorphism of a closure induced by reversing ternary words.

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::{eval_word, word_scale, ClosureResult};
use crate::error::{Error, Result};
use crate::matrix::{span::norm, ternary, BlockElement, ComplexMatrix, Subspace, C64, ONE, ZERO};
use crate::random::rng;
use crate::tolerance::ToleranceConfig;

const ANTI_SAMPLES: usize = 100;
/// Triangular entries this small relative to the diagonal are skipped.
const SKIP: f64 = 1e-15;

/// `θ(g_{a0} g_{a1}^* g_{b1} ...) = ... g_{b1} g_{a1}^* g_{a0}`, extended linearly.
#[derive(Debug, Clone)]
pub struct AntiAutomorphism {
    pub domain: Subspace,
    /// Column `j` holds the coordinates of `θ(q_j)` in the domain basis.
    pub matrix: ComplexMatrix,
    /// Largest relative inconsistency of the linear extension on dependent words.
    pub residual: f64,
    /// `‖θ² − id‖_max`.
    pub involution_defect: f64,
    /// Largest `‖θ(g) − g‖` over the generators.
    pub generator_defect: f64,
    /// Largest relative defect of `θ(xy^*z) = θ(z)θ(y)^*θ(x)` over sampled basis triples.
    pub anti_multiplicative_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSummary {
    pub residual: f64,
    pub involution_defect: f64,
    pub generator_defect: f64,
    pub anti_multiplicative_defect: f64,
}

impl AntiAutomorphism {
    pub fn apply(&self, x: &BlockElement) -> Result<BlockElement> {
        let c = self.domain.coordinates(x)?;
        Ok(self.domain.combination(&self.apply_coords(&c)))
    }

    fn apply_coords(&self, c: &[C64]) -> Vec<C64> {
        let d = c.len();
        let mut out = vec![ZERO; d];
        for (j, &cj) in c.iter().enumerate() {
            if cj == ZERO {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.matrix.get(i, j) * cj;
            }
        }
        out
    }

    pub fn summary(&self) -> ThetaSummary {
        ThetaSummary {
            residual: self.residual,
            involution_defect: self.involution_defect,
            generator_defect: self.generator_defect,
            anti_multiplicative_defect: self.anti_multiplicative_defect,
        }
    }

    /// Worst of all recorded defects.
    pub fn max_defect(&self) -> f64 {
        self.residual.max(self.involution_defect).max(self.generator_defect).max(self.anti_multiplicative_defect)
    }
}

fn reversed(w: &[u32]) -> Vec<u32> {
    w.iter().rev().copied().collect()
}

/// Dense columns `X` with `X W = V`, `W` upper triangular.
fn solve_upper(w: &[Vec<C64>], v: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let d = w.len();
    let mut x: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let diag = w[j][j];
        let mut col = v[j].clone();
        for i in 0..j {
            let wij = w[j][i];
            if wij.norm() <= SKIP * diag.norm() {
                continue;
            }
            for (c, xi) in col.iter_mut().zip(&x[i]) {
                *c -= xi * wij;
            }
        }
        let inv = ONE / diag;
        col.iter_mut().for_each(|c| *c *= inv);
        x.push(col);
    }
    x
}

/// Builds θ on the closure from the accepted words, then checks it.
///
/// Fails with [`Error::NotUniversal`] when reversal is not well defined on the
/// realization, i.e. some linear relation between words is not respected by
/// their reversals or a reversed word leaves the closure.
pub fn word_antiautomorphism(t: &ClosureResult, tol: &ToleranceConfig, seed: u64) -> Result<AntiAutomorphism> {
    let space = &t.space;
    let gens = t.generators();
    let d = space.dim();

    // Per word: its coordinates (column of W), and those of its reversal (column of V), both over ‖w‖.
    let cols: Vec<(Vec<C64>, Vec<C64>, f64)> = t
        .words()
        .par_iter()
        .map(|w| {
            let x = eval_word(gens, w)?;
            let y = eval_word(gens, &reversed(w))?;
            let s = 1.0 / x.norm();
            let outside = space.residual_norm(&y)? * s;
            let cw = space.coordinates(&x)?.into_iter().map(|z| z * s).collect();
            let cv = space.coordinates(&y)?.into_iter().map(|z| z * s).collect();
            Ok((cw, cv, outside))
        })
        .collect::<Result<_>>()?;
    let mut residual = cols.iter().map(|c| c.2).fold(0.0, f64::max);
    let (w, v): (Vec<_>, Vec<_>) = cols.into_iter().map(|(a, b, _)| (a, b)).unzip();
    let x = solve_upper(&w, &v);
    let mut matrix = ComplexMatrix::zeros(d, d);
    for (j, col) in x.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            matrix.set(i, j, z);
        }
    }
    let mut theta = AntiAutomorphism {
        domain: space.clone(),
        matrix,
        residual: 0.0,
        involution_defect: 0.0,
        generator_defect: 0.0,
        anti_multiplicative_defect: 0.0,
    };

    let norms: Vec<f64> = gens.iter().map(BlockElement::norm).collect();
    let op_norms: Vec<f64> = gens.iter().map(BlockElement::op_norm).collect();
    let dependent = t
        .dependent_words()
        .par_iter()
        .map(|w| {
            let a = eval_word(gens, w)?;
            let b = eval_word(gens, &reversed(w))?;
            let s = a.norm().max(b.norm());
            let floor = tol.rank_tol * word_scale(&norms, &op_norms, w).max(word_scale(&norms, &op_norms, &reversed(w)));
            if s <= floor {
                return Ok(0.0);
            }
            let predicted = theta.apply_coords(&space.coordinates(&a)?);
            let actual = space.coordinates(&b)?;
            let diff: Vec<C64> = predicted.iter().zip(&actual).map(|(p, q)| p - q).collect();
            Ok((norm(&diff) + space.residual_norm(&b)? + space.residual_norm(&a)?) / s)
        })
        .collect::<Result<Vec<f64>>>()?;
    residual = dependent.into_iter().fold(residual, f64::max);
    theta.residual = residual;
    if residual > tol.eq_tol {
        return Err(Error::NotUniversal { residual });
    }

    // θ² column by column, skipping zero entries of θ.
    theta.involution_defect = (0..d)
        .into_par_iter()
        .map(|j| {
            let mut col = vec![ZERO; d];
            for (i, &xij) in x[j].iter().enumerate() {
                if xij == ZERO {
                    continue;
                }
                for (c, xi) in col.iter_mut().zip(&x[i]) {
                    *c += xi * xij;
                }
            }
            col[j] -= ONE;
            col.iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);

    theta.generator_defect = gens
        .iter()
        .map(|g| Ok((&theta.apply(g)? - g).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let mut r = rng(seed);
    let triples: Vec<[usize; 3]> = if d == 0 {
        Vec::new()
    } else {
        (0..ANTI_SAMPLES).map(|_| [r.random_range(0..d), r.random_range(0..d), r.random_range(0..d)]).collect()
    };
    let images: Vec<Option<BlockElement>> = {
        let mut needed = vec![false; d];
        triples.iter().flatten().for_each(|&i| needed[i] = true);
        (0..d)
            .into_par_iter()
            .map(|i| needed[i].then(|| space.combination(&x[i])))
            .collect()
    };
    theta.anti_multiplicative_defect = triples
        .par_iter()
        .map(|&[a, b, c]| {
            let p = ternary(&space.basis_element(a), &space.basis_element(b), &space.basis_element(c))?;
            let lhs = theta.apply(&p)?;
            let img = |i: usize| images[i].as_ref().expect("image computed");
            let rhs = ternary(img(c), img(b), img(a))?;
            Ok((&lhs - &rhs).norm() / p.norm().max(1.0))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::tro_closure;
    use crate::grids::{build_hermitian_grid, build_standard_spin_system};

    fn check(theta: &AntiAutomorphism) {
        assert!(theta.residual < 1e-7, "residual {}", theta.residual);
        assert!(theta.involution_defect < 1e-9);
        assert!(theta.generator_defect < 1e-12);
        assert!(theta.anti_multiplicative_defect < 1e-7);
    }

    #[test]
    fn hermitian_grid_gives_transpose() {
        let tol = ToleranceConfig::default();
        let g = build_hermitian_grid(3).unwrap();
        let gens: Vec<_> = g.elements().values().cloned().collect();
        let c = tro_closure(&gens, &tol).unwrap();
        let theta = word_antiautomorphism(&c, &tol, 1).unwrap();
        check(&theta);
        let x = BlockElement::single(ComplexMatrix::unit(3, 3, 0, 2).scale(C64::new(1.0, 2.0)));
        assert!((&theta.apply(&x).unwrap() - &x.transpose()).norm() < 1e-9);
    }

    #[test]
    fn spin_closure() {
        let tol = ToleranceConfig::default();
        let gens: Vec<_> = build_standard_spin_system(5).unwrap().into_iter().map(BlockElement::single).collect();
        let c = tro_closure(&gens, &tol).unwrap();
        check(&word_antiautomorphism(&c, &tol, 1).unwrap());
    }

    #[test]
    fn quotient_realization_is_rejected() {
        // E11 E11^* E12 = E12 while its reversal E12 E11^* E11 vanishes.
        let tol = ToleranceConfig::default();
        let e = |i, j| BlockElement::single(ComplexMatrix::unit(2, 2, i, j));
        let c = tro_closure(&[e(0, 0), e(0, 1)], &tol).unwrap();
        assert!(matches!(word_antiautomorphism(&c, &tol, 1), Err(Error::NotUniversal { .. })));
    }
}
