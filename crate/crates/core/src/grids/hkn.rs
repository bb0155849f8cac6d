//! The rank-one grids `b^{n,k}_i` acting between exterior powers.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `r`-subsets of `{1..n}` as sorted tuples, in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < r - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, r, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Signature of the permutation that sorts `seq` (entries distinct).
fn signature(seq: &[usize]) -> f64 {
    let inversions: usize =
        (0..seq.len()).map(|a| seq[a + 1..].iter().filter(|&&b| b < seq[a]).count()).sum();
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `b^{n,k}_1, ..., b^{n,k}_n` as `C(n,k) x C(n,k-1)` matrices.
///
/// Rows are indexed by the `(n-k)`-subsets `J`, columns by the `(k-1)`-subsets
/// `I`, both lexicographic. Entry `(J, I)` of `b_i` is the signature of
/// `(I, i, J)` when `I`, `{i}`, `J` partition `{1..n}`, and zero otherwise.
pub fn build_hkn_basis(n: usize, k: usize) -> Result<Vec<ComplexMatrix>> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let rows = subsets(n, n - k);
    let cols = subsets(n, k - 1);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut b = ComplexMatrix::zeros(rows.len(), cols.len());
        for (r, jset) in rows.iter().enumerate() {
            if jset.contains(&i) {
                continue;
            }
            for (c, iset) in cols.iter().enumerate() {
                if iset.contains(&i) || iset.iter().any(|x| jset.contains(x)) {
                    continue;
                }
                let seq: Vec<usize> = iset.iter().copied().chain([i]).chain(jset.iter().copied()).collect();
                b.set(r, c, C64::new(signature(&seq), 0.0));
            }
        }
        out.push(b);
    }
    Ok(out)
}
