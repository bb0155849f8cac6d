//! Exhaustive axiom verification.
//!
//! Every axiom is expanded into instances `{a,b,c} = λ·d` over concrete
//! labels. Instances are keyed by the canonical label triple, so both outer
//! orders `(a,b,c)` and `(c,b,a)` and both orientations of hermitian and
//! symplectic pairs resolve to one expectation. The first axiom to claim a
//! triple wins. Triples that no axiom claims fall under the family's
//! "all other products vanish" clause.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Grid, GridIndex, GridKind};
use crate::error::Result;
use crate::matrix::BlockElement;
use crate::tolerance::ToleranceConfig;
use crate::triple::jordan_triple;

use GridIndex::{Pair, Single, T, U, U0};

/// Id used for the rule `{a,a,a} = a`.
pub const TRIPOTENT: &str = "TRIPOTENT";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: String,
    #[serde(serialize_with = "labels")]
    pub indices: Vec<GridIndex>,
    pub residual: f64,
}

fn labels<S: serde::Serializer>(v: &[GridIndex], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i.to_string()))
}

impl Violation {
    /// `"SYG1 at (1,2)"`-style description.
    pub fn describe(&self) -> String {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!("{} at ({})", self.axiom, idx.join(")("))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    #[serde(serialize_with = "kind_name")]
    pub kind: GridKind,
    pub violations: Vec<Violation>,
    pub passed: bool,
    /// Number of axiom instances evaluated.
    pub checked: usize,
    /// Largest residual over all evaluated instances, passing or not.
    pub max_residual: f64,
}

fn kind_name<S: serde::Serializer>(k: &GridKind, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&k.to_string())
}

impl AxiomReport {
    pub fn violated(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

#[derive(Debug, Clone, Copy)]
struct Expect {
    axiom: &'static str,
    coef: f64,
    target: Option<GridIndex>,
}

type Key = (GridIndex, GridIndex, GridIndex);

struct Rules {
    kind: GridKind,
    table: HashMap<Key, Expect>,
}

impl Rules {
    fn new(kind: GridKind) -> Self {
        Self { kind, table: HashMap::new() }
    }

    /// Records `{a,b,c} = coef·target` (and its outer mirror), converting to canonical labels.
    fn add(&mut self, axiom: &'static str, a: GridIndex, b: GridIndex, c: GridIndex, coef: f64, target: Option<GridIndex>) {
        let (a, sa) = self.kind.canonical(a);
        let (b, sb) = self.kind.canonical(b);
        let (c, sc) = self.kind.canonical(c);
        let (target, st) = match target {
            Some(t) => {
                let (t, s) = self.kind.canonical(t);
                (Some(t), s)
            }
            None => (None, 1.0),
        };
        // The triple product is real-linear in the sign of each argument.
        let coef = coef * st * sa * sb * sc;
        let e = Expect { axiom, coef, target };
        self.table.entry((a, b, c)).or_insert(e);
        self.table.entry((c, b, a)).or_insert(e);
    }
}

fn fallback(kind: GridKind) -> &'static str {
    match kind {
        GridKind::Spin { .. } => "SPG6",
        GridKind::Hermitian(_) => "HG7",
        GridKind::Symplectic(_) => "SYG5",
        GridKind::Rectangular(..) => "RG4",
        GridKind::RankOne(_) => "RG'3",
    }
}

fn rules(kind: GridKind) -> Rules {
    let mut r = Rules::new(kind);
    for x in kind.canonical_indices() {
        r.add(TRIPOTENT, x, x, x, 1.0, Some(x));
    }
    match kind {
        GridKind::Spin { pairs, has_odd_center } => spin_rules(&mut r, pairs, has_odd_center),
        GridKind::Hermitian(n) => hermitian_rules(&mut r, n),
        GridKind::Symplectic(n) => symplectic_rules(&mut r, n),
        GridKind::Rectangular(n, m) => rectangular_rules(&mut r, n, m),
        GridKind::RankOne(n) => rank_one_rules(&mut r, n),
    }
    r
}

fn spin_rules(r: &mut Rules, n: usize, u0: bool) {
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            r.add("SPG1", U(i), U(i), T(j), 0.5, Some(T(j)));
            r.add("SPG1", T(j), T(j), U(i), 0.5, Some(U(i)));
            r.add("SPG2", U(i), U(i), U(j), 0.5, Some(U(j)));
            r.add("SPG3", T(i), T(i), T(j), 0.5, Some(T(j)));
            r.add("SPG4", U(i), U(j), T(i), -0.5, Some(T(j)));
            r.add("SPG5", U(j), T(i), T(j), -0.5, Some(U(i)));
        }
    }
    if u0 {
        for i in 1..=n {
            r.add("SPG7", U0, U0, U(i), 1.0, Some(U(i)));
            r.add("SPG7", U(i), U(i), U0, 0.5, Some(U0));
            r.add("SPG8", U0, U0, T(i), 1.0, Some(T(i)));
            r.add("SPG8", T(i), T(i), U0, 0.5, Some(U0));
            r.add("SPG9", U0, U(i), U0, -1.0, Some(T(i)));
            r.add("SPG9", U0, T(i), U0, -1.0, Some(U(i)));
            // SPG4 with j = 0, reading ũ_0 as u_0; forced by SPG9.
            r.add("SPG4", U(i), U0, T(i), -0.5, Some(U0));
        }
    }
}

fn disjoint(a: [usize; 2], b: [usize; 2]) -> bool {
    !a.iter().any(|x| b.contains(x))
}

fn hermitian_rules(r: &mut Rules, n: usize) {
    let idx = 1..=n;
    for i in idx.clone() {
        for j in idx.clone() {
            for k in idx.clone() {
                for l in idx.clone() {
                    if disjoint([i, j], [k, l]) {
                        r.add("HG2", Pair(k, l), Pair(k, l), Pair(i, j), 0.0, None);
                    }
                }
            }
        }
    }
    for i in idx.clone() {
        for j in idx.clone().filter(|&j| j != i) {
            r.add("HG3", Pair(i, i), Pair(i, i), Pair(i, j), 0.5, Some(Pair(i, j)));
            r.add("HG3", Pair(i, j), Pair(i, j), Pair(i, i), 1.0, Some(Pair(i, i)));
        }
    }
    for i in idx.clone() {
        for j in idx.clone() {
            for k in idx.clone() {
                if i != j && j != k && i != k {
                    r.add("HG4", Pair(i, j), Pair(i, j), Pair(j, k), 0.5, Some(Pair(j, k)));
                    r.add("HG4", Pair(j, k), Pair(j, k), Pair(i, j), 0.5, Some(Pair(i, j)));
                }
            }
        }
    }
    for i in idx.clone() {
        for j in idx.clone() {
            for k in idx.clone() {
                let labels = [Pair(i, j), Pair(j, k), Pair(k, i)].map(|x| r.kind.canonical(x).0);
                if !(labels[0] == labels[1] && labels[1] == labels[2]) {
                    r.add("HG6", Pair(i, j), Pair(j, k), Pair(k, i), 1.0, Some(Pair(i, i)));
                }
            }
        }
    }
    for i in idx.clone() {
        for j in idx.clone() {
            for k in idx.clone() {
                for l in idx.clone().filter(|&l| l != i) {
                    r.add("HG5", Pair(i, j), Pair(j, k), Pair(k, l), 0.5, Some(Pair(i, l)));
                }
            }
        }
    }
}

fn symplectic_rules(r: &mut Rules, n: usize) {
    let pairs: Vec<(usize, usize)> =
        (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            if disjoint([i, j], [k, l]) {
                r.add("SYG3", Pair(k, l), Pair(k, l), Pair(i, j), 0.0, None);
            } else {
                r.add("SYG2", Pair(i, j), Pair(i, j), Pair(k, l), 0.5, Some(Pair(k, l)));
                r.add("SYG2", Pair(k, l), Pair(k, l), Pair(i, j), 0.5, Some(Pair(i, j)));
            }
        }
    }
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            if [i, j, k, l].iter().enumerate().all(|(p, x)| [i, j, k, l][p + 1..].iter().all(|y| y != x)) {
                r.add("SYG4", Pair(i, j), Pair(i, l), Pair(k, l), 0.5, Some(Pair(k, j)));
            }
        }
    }
}

fn rectangular_rules(r: &mut Rules, n: usize, m: usize) {
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=m {
                for l in 1..=m {
                    if i != j && k != l {
                        r.add("RG1", Pair(i, l), Pair(i, l), Pair(j, k), 0.0, None);
                    }
                    if (j == i && k != l) || (j != i && k == l) {
                        r.add("RG2", Pair(i, l), Pair(i, l), Pair(j, k), 0.5, Some(Pair(j, k)));
                        r.add("RG2", Pair(j, k), Pair(j, k), Pair(i, l), 0.5, Some(Pair(i, l)));
                    }
                    if j != i && k != l {
                        r.add("RG3", Pair(j, k), Pair(j, l), Pair(i, l), 0.5, Some(Pair(i, k)));
                    }
                }
            }
        }
    }
}

fn rank_one_rules(r: &mut Rules, n: usize) {
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            r.add("RG'1", Single(i), Single(j), Single(i), 0.0, None);
            r.add("RG'2", Single(i), Single(i), Single(j), 0.5, Some(Single(j)));
        }
    }
}

/// Evaluates every axiom instance of the grid's family.
pub fn verify_grid(g: &Grid, tol: &ToleranceConfig) -> Result<AxiomReport> {
    let kind = g.kind();
    let elems = g.canonical_elements();
    let lookup: HashMap<GridIndex, &BlockElement> = elems.iter().map(|(i, x)| (*i, x)).collect();
    let table = rules(kind).table;
    let other = fallback(kind);

    let mut violations = Vec::new();
    let mut checked = 0;
    let mut max_residual: f64 = 0.0;
    let mut record = |axiom: &str, indices: Vec<GridIndex>, residual: f64, scale: f64| {
        checked += 1;
        max_residual = max_residual.max(residual);
        if residual > tol.eq_tol * scale.max(1.0) {
            violations.push(Violation { axiom: axiom.to_string(), indices, residual });
        }
    };

    // Symmetry relations between stored orientations.
    let relation = match kind {
        GridKind::Hermitian(_) => Some(("HG1", 1.0)),
        GridKind::Symplectic(_) => Some(("SYG1", -1.0)),
        _ => None,
    };
    if let Some((axiom, sign)) = relation {
        for (&idx, x) in g.elements() {
            if let Pair(i, j) = idx {
                if i < j {
                    if let Some(y) = g.elements().get(&Pair(j, i)) {
                        let d = (y - &x.scale_real(sign)).norm();
                        record(axiom, vec![idx], d, x.norm());
                    }
                }
            }
        }
    }

    let g_len = elems.len();
    let triples: Vec<(usize, usize, usize)> = (0..g_len)
        .flat_map(|a| (0..g_len).flat_map(move |b| (0..g_len).map(move |c| (a, b, c))))
        .collect();
    let results: Vec<Result<(&'static str, Key, f64, f64)>> = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let (ia, xa) = &elems[a];
            let (ib, xb) = &elems[b];
            let (ic, xc) = &elems[c];
            let got = jordan_triple(xa, xb, xc)?;
            let key = (*ia, *ib, *ic);
            let (axiom, expected) = match table.get(&key) {
                Some(e) => {
                    let want = match e.target {
                        Some(t) if e.coef != 0.0 => lookup[&t].scale_real(e.coef),
                        _ => BlockElement::zeros(&got.shape()),
                    };
                    (e.axiom, want)
                }
                None => (other, BlockElement::zeros(&got.shape())),
            };
            Ok((axiom, key, (&got - &expected).norm(), expected.norm()))
        })
        .collect();
    for res in results {
        let (axiom, (a, b, c), residual, scale) = res?;
        record(axiom, vec![a, b, c], residual, scale);
    }

    violations.sort_by(|x, y| x.axiom.cmp(&y.axiom).then_with(|| x.indices.cmp(&y.indices)));
    Ok(AxiomReport { kind, passed: violations.is_empty(), violations, checked, max_residual })
}
