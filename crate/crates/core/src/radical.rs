//! Abelian triples, their characters, and the radical of a finite-dimensional TRO.
//!
//! A character is a nonzero triple homomorphism into `ℂ`. Characters come in
//! circle orbits `λφ`, `|λ| = 1`; each orbit is represented here by one base
//! character, so the circle factor is never enumerated.

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{decompose_blocks, tro_closure, ClosureResult};
use crate::envelope::envelope_of_tro;
use crate::error::{Error, Result};
use crate::matrix::{span_in, subspace_equal, BlockElement, ComplexMatrix, Subspace, C64};
use crate::random::{random_element, rng};
use crate::tolerance::ToleranceConfig;
use crate::triple::{box_operator, is_tripotent, jordan_triple, subtriple_defect};

/// Subspaces up to this dimension are checked on every basis 5-tuple.
const EXHAUSTIVE_DIM: usize = 8;
const TUPLE_SAMPLES: usize = 1000;
const TRIPLE_SAMPLES: usize = 1000;
const RETRIES: usize = 5;
const MERGE_GAP: f64 = 1e-9;
const AMBIGUOUS_GAP: f64 = 1e-6;
/// Exact sequences are cross-checked by a closure when `2 dim T` is at most this.
const CROSS_CHECK_DIM: usize = 200;

fn check_subtriple(s: &Subspace, tol: &ToleranceConfig) -> Result<()> {
    let residual = subtriple_defect(s)?;
    if residual > tol.eq_tol {
        return Err(Error::NotSubtriple { residual });
    }
    Ok(())
}

fn index_tuples<const N: usize>(d: usize, exhaustive: bool, samples: usize, seed: u64) -> Vec<[usize; N]> {
    if d == 0 {
        return Vec::new();
    }
    if exhaustive {
        let total = d.pow(N as u32);
        (0..total)
            .map(|mut t| {
                let mut idx = [0; N];
                for slot in idx.iter_mut() {
                    *slot = t % d;
                    t /= d;
                }
                idx
            })
            .collect()
    } else {
        let mut r = rng(seed);
        (0..samples).map(|_| std::array::from_fn(|_| r.random_range(0..d))).collect()
    }
}

/// Whether `{{a,b,c},d,e} = {a,{b,c,d},e} = {a,b,{c,d,e}}` holds on `s`.
///
/// Checks every basis 5-tuple up to dimension `EXHAUSTIVE_DIM`, otherwise
/// `TUPLE_SAMPLES` random ones.
pub fn is_abelian(s: &Subspace, tol: &ToleranceConfig) -> Result<bool> {
    check_subtriple(s, tol)?;
    let basis = s.basis();
    let d = basis.len();
    let tuples = index_tuples::<5>(d, d <= EXHAUSTIVE_DIM, TUPLE_SAMPLES, 0xab);
    let worst = tuples
        .par_iter()
        .map(|&[a, b, c, dd, e]| {
            let (a, b, c, dd, e) = (&basis[a], &basis[b], &basis[c], &basis[dd], &basis[e]);
            let x = jordan_triple(&jordan_triple(a, b, c)?, dd, e)?;
            let y = jordan_triple(a, &jordan_triple(b, c, dd)?, e)?;
            let z = jordan_triple(a, b, &jordan_triple(c, dd, e)?)?;
            Ok((&x - &y).norm().max((&y - &z).norm()))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst <= tol.eq_tol)
}

/// Pairwise orthogonal tripotents spanning the abelian subtriple `s`.
///
/// A generic element `x = Σ λ_i e_i` has distinct moduli `|λ_i|`, so grouping
/// its singular vectors by singular value recovers the `e_i` up to phases.
pub fn orthogonal_tripotent_basis(s: &Subspace, tol: &ToleranceConfig, seed: u64) -> Result<Vec<BlockElement>> {
    check_subtriple(s, tol)?;
    if s.dim() == 0 {
        return Ok(Vec::new());
    }
    for attempt in 0..=RETRIES {
        if let Some(t) = attempt_tripotents(s, tol, seed.wrapping_add(attempt as u64))? {
            return Ok(t);
        }
    }
    Err(Error::Diagonalization { attempts: RETRIES + 1 })
}

fn attempt_tripotents(s: &Subspace, tol: &ToleranceConfig, seed: u64) -> Result<Option<Vec<BlockElement>>> {
    let x = random_element(s, &mut rng(seed));
    let shape = s.shape();
    // (singular value, block, u v^*)
    let mut parts: Vec<(f64, usize, ComplexMatrix)> = Vec::new();
    for (b, m) in x.parts().iter().enumerate() {
        if m.rows() == 0 || m.cols() == 0 {
            continue;
        }
        let svd = m.to_nalgebra().svd(true, true);
        let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
        for (k, &sv) in svd.singular_values.iter().enumerate() {
            let piece = u.column(k) * vt.row(k);
            parts.push((sv, b, ComplexMatrix::from_nalgebra(&piece)));
        }
    }
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = parts.last().map_or(0.0, |p| p.0);
    if scale == 0.0 {
        return Ok(None);
    }
    let mut groups: Vec<BlockElement> = Vec::new();
    let mut last: Option<f64> = None;
    for (sv, b, piece) in parts {
        if sv <= MERGE_GAP * scale {
            continue;
        }
        let mut single = BlockElement::zeros(shape);
        let mut ps = single.clone().into_parts();
        ps[b] = piece;
        single = BlockElement::new(ps)?;
        match last {
            Some(prev) if sv - prev <= MERGE_GAP * scale => {
                let g = groups.last_mut().expect("open group");
                *g = &*g + &single;
            }
            Some(prev) if sv - prev <= AMBIGUOUS_GAP * scale => return Ok(None),
            _ => groups.push(single),
        }
        last = Some(sv);
    }
    if groups.len() != s.dim() {
        return Ok(None);
    }
    for e in &groups {
        if !s.contains(e, tol)? || !is_tripotent(e, tol) {
            return Ok(None);
        }
    }
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i + 1..] {
            if box_operator(a, b, s, tol)?.matrix.op_norm() > tol.eq_tol {
                return Ok(None);
            }
        }
    }
    Ok(Some(groups))
}

/// Base characters of an abelian subtriple: the coordinate functionals of an
/// orthogonal tripotent basis. Every character is a unimodular multiple of one of them.
#[derive(Debug, Clone)]
pub struct CharacterFamily {
    pub tripotents: Vec<BlockElement>,
    /// Largest `|φ({a,b,c}) − φ(a) conj(φ(b)) φ(c)|` over the checked basis triples.
    pub defect: f64,
}

impl CharacterFamily {
    pub fn len(&self) -> usize {
        self.tripotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tripotents.is_empty()
    }

    /// `φ_i(z)`, the coefficient of `e_i` in `z`.
    pub fn eval(&self, i: usize, z: &BlockElement) -> C64 {
        let e = &self.tripotents[i];
        z.inner(e) / e.inner(e)
    }
}

fn character_defect(
    basis: &[BlockElement],
    phis: &(dyn Fn(&BlockElement) -> Vec<C64> + Sync),
    seed: u64,
) -> Result<f64> {
    let d = basis.len();
    let triples = index_tuples::<3>(d, d * d * d <= TRIPLE_SAMPLES, TRIPLE_SAMPLES, seed);
    Ok(triples
        .par_iter()
        .map(|&[a, b, c]| {
            let p = phis(&jordan_triple(&basis[a], &basis[b], &basis[c])?);
            let (fa, fb, fc) = (phis(&basis[a]), phis(&basis[b]), phis(&basis[c]));
            Ok((0..p.len()).map(|i| (p[i] - fa[i] * fb[i].conj() * fc[i]).norm()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max))
}

pub fn characters(s: &Subspace, tol: &ToleranceConfig, seed: u64) -> Result<CharacterFamily> {
    let tripotents = orthogonal_tripotent_basis(s, tol, seed)?;
    let mut fam = CharacterFamily { tripotents, defect: 0.0 };
    let eval_all = |z: &BlockElement| (0..fam.len()).map(|i| fam.eval(i, z)).collect::<Vec<_>>();
    let defect = character_defect(&s.basis(), &eval_all, seed)?;
    fam.defect = defect;
    Ok(fam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceDims {
    /// `dim R(T) ⊕ θ(R(T))`.
    pub left: usize,
    /// `dim T*(T)`.
    pub middle: usize,
    /// Dimension of the abelian quotient.
    pub right: usize,
    pub exact: bool,
    /// `dim T*(T)` from an explicit closure, when computed.
    pub middle_closure: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RadicalReport {
    pub tro_blocks: Vec<(usize, usize)>,
    pub radical_blocks: Vec<(usize, usize)>,
    pub abelian_quotient_dim: usize,
    /// Span of the matrix units of the blocks with `n·m > 1`.
    pub radical: Subspace,
    /// Largest failure of multiplicativity of the characters on `T`.
    pub character_defect: f64,
    /// Largest value of a character on the radical.
    pub vanishing_defect: f64,
    /// Whether the common kernel of the characters equals the radical.
    pub kernel_matches: bool,
    pub sequence: Option<SequenceDims>,
}

impl RadicalReport {
    pub fn summary(&self) -> RadicalSummary {
        RadicalSummary {
            blocks: self.tro_blocks.clone(),
            radical_blocks: self.radical_blocks.clone(),
            abelian_dim: self.abelian_quotient_dim,
            radical_dim: self.radical.dim(),
            character_defect: self.character_defect,
            kernel_matches: self.kernel_matches,
            sequence: self.sequence,
        }
    }
}

/// JSON form of a [`RadicalReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadicalSummary {
    pub blocks: Vec<(usize, usize)>,
    pub radical_blocks: Vec<(usize, usize)>,
    pub abelian_dim: usize,
    pub radical_dim: usize,
    pub character_defect: f64,
    pub kernel_matches: bool,
    pub sequence: Option<SequenceDims>,
}

/// Intersection of the kernels of all characters of `t`.
///
/// The characters are the coordinate functionals of the `1×1` blocks; the
/// radical is spanned by all other blocks and is all of `t` when there are none.
pub fn radical(t: &ClosureResult, tol: &ToleranceConfig, seed: u64) -> Result<RadicalReport> {
    let d = decompose_blocks(t, tol, seed)?;
    let shape = t.space.shape();
    let mut radical_units = Vec::new();
    let mut abelian_units = Vec::new();
    for (&(alpha, _, _), u) in &d.units.units {
        let (n, m) = d.blocks[alpha];
        if n * m > 1 {
            radical_units.push(u.clone());
        } else {
            abelian_units.push(u.clone());
        }
    }
    let radical = span_in(shape, &radical_units, tol)?;

    let phis = |z: &BlockElement| abelian_units.iter().map(|u| z.inner(u) / u.inner(u)).collect::<Vec<C64>>();
    let basis = t.space.basis();
    let character_defect = character_defect(&basis, &phis, seed)?;
    let vanishing_defect =
        radical.basis().iter().flat_map(phis).map(|z| z.norm()).fold(0.0, f64::max);

    // Common kernel: the part of T orthogonal to every character's representing vector.
    let units_span = span_in(shape, &abelian_units, tol)?;
    let kernel_gens: Vec<BlockElement> =
        basis.iter().map(|q| Ok(q - &units_span.project_element(q)?)).collect::<Result<_>>()?;
    let kernel = span_in(shape, &kernel_gens, tol)?;
    let kernel_matches = subspace_equal(&kernel, &radical, tol)?;

    Ok(RadicalReport {
        radical_blocks: d.blocks.iter().copied().filter(|&(n, m)| n * m > 1).collect(),
        abelian_quotient_dim: abelian_units.len(),
        tro_blocks: d.blocks,
        radical,
        character_defect,
        vanishing_defect,
        kernel_matches,
        sequence: None,
    })
}

/// Dimensions of `0 → R(T) ⊕ θ(R(T)) → T*(T) → C → 0`.
///
/// Refuses TROs with a Hilbert-space block `M_{1,m}` or `M_{m,1}`, `m ≥ 2`.
/// When `2 dim T ≤ CROSS_CHECK_DIM` the middle term is recomputed as the
/// closure of `{(u, u^t)}` over the canonical matrix units `u` of `T`.
pub fn exact_sequence_report(t: &ClosureResult, tol: &ToleranceConfig, seed: u64) -> Result<RadicalReport> {
    let mut rep = radical(t, tol, seed)?;
    if let Some(&(n, m)) = rep.tro_blocks.iter().find(|&&(n, m)| n.min(m) == 1 && n.max(m) > 1) {
        return Err(Error::HilbertBlock { n, m });
    }
    let left = envelope_of_tro(&rep.radical_blocks).1;
    let right = rep.abelian_quotient_dim;
    let middle = envelope_of_tro(&rep.tro_blocks).1;
    let middle_closure = if 2 * t.dim() <= CROSS_CHECK_DIM && !rep.tro_blocks.is_empty() {
        let blocks = &rep.tro_blocks;
        let mut gens = Vec::new();
        for (b, &(n, m)) in blocks.iter().enumerate() {
            for i in 0..n {
                for j in 0..m {
                    let mut parts: Vec<ComplexMatrix> = blocks
                        .iter()
                        .enumerate()
                        .map(|(c, &(p, q))| if c == b { ComplexMatrix::unit(p, q, i, j) } else { ComplexMatrix::zeros(p, q) })
                        .collect();
                    parts.extend(blocks.iter().enumerate().map(|(c, &(p, q))| {
                        if c == b { ComplexMatrix::unit(q, p, j, i) } else { ComplexMatrix::zeros(q, p) }
                    }));
                    gens.push(BlockElement::new(parts)?);
                }
            }
        }
        Some(tro_closure(&gens, tol)?.dim())
    } else {
        None
    };
    let exact = left + right == middle && middle_closure.is_none_or(|c| c == middle);
    rep.sequence = Some(SequenceDims { left, middle, right, exact, middle_closure });
    Ok(rep)
}
