use std::collections::HashSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::ExprError;
use crate::group::FiniteGroup;
use crate::word::{evaluate, parse_equation, print_equation, ElementaryEquation};

/// Equations whose solution sets should cover exactly `G ∖ {e}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub equations: Vec<ElementaryEquation<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverFailure {
    /// The identity solves this equation.
    IdentityCovered { equation: usize },
    /// No equation is solved by this element.
    Uncovered(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverVerdict {
    pub valid: bool,
    pub failure: Option<CoverFailure>,
}

impl CoverCertificate {
    /// `{x = g : g ≠ e}`.
    pub fn singletons(g: &FiniteGroup) -> Self {
        let e = g.identity_index();
        CoverCertificate {
            equations: (0..g.order())
                .filter(|&x| x != e)
                .map(ElementaryEquation::singleton)
                .collect(),
        }
    }

    pub fn from_json(v: &Value, g: &FiniteGroup) -> Result<Self, ExprError> {
        let list = v
            .get("equations")
            .and_then(Value::as_array)
            .ok_or_else(|| ExprError::Malformed("certificate needs an \"equations\" array".into()))?;
        let equations = list
            .iter()
            .map(|e| {
                let text = e
                    .as_str()
                    .ok_or_else(|| ExprError::Malformed("equations must be strings".into()))?;
                parse_equation(text, g).map_err(|error| ExprError::Atom {
                    text: text.to_string(),
                    error,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CoverCertificate { equations })
    }

    pub fn to_json(&self, g: &FiniteGroup, optimal: Option<bool>) -> Value {
        let mut v = json!({
            "equations": self.equations.iter().map(|e| print_equation(e, g)).collect::<Vec<_>>(),
            "size": self.equations.len(),
        });
        if let Some(o) = optimal {
            v["optimal"] = json!(o);
        }
        v
    }
}

/// Checks that the union of the solution sets is exactly `G ∖ {e}`.
///
/// Reports the first equation solved by `e`, else the first uncovered
/// element in index order.
pub fn verify_discreteness_cover(g: &FiniteGroup, cert: &CoverCertificate) -> CoverVerdict {
    let e = g.identity_index();
    if let Some(i) = cert.equations.iter().position(|eq| evaluate(g, eq, &e)) {
        return CoverVerdict {
            valid: false,
            failure: Some(CoverFailure::IdentityCovered { equation: i }),
        };
    }
    let uncovered = (0..g.order())
        .filter(|&x| x != e)
        .find(|x| !cert.equations.iter().any(|eq| evaluate(g, eq, x)));
    CoverVerdict {
        valid: uncovered.is_none(),
        failure: uncovered.map(CoverFailure::Uncovered),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("search space too large: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone)]
pub struct CoverSearch {
    pub certificate: CoverCertificate,
    /// The branch and bound finished within budget.
    pub optimal: bool,
    pub candidates: u64,
    pub distinct_sets: usize,
    pub nodes: u64,
}

/// Upper bound on enumerated candidate equations.
pub const MAX_CANDIDATES: u64 = 5_000_000;

fn signs_for(len: usize, code: u32) -> Vec<i8> {
    (0..len)
        .map(|i| if code >> (len - 1 - i) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// Value of the word `x^{s0} a0 x^{s1} … x^{sn}` at every `x`.
fn word_values(g: &FiniteGroup, signs: &[i8], prefix: &[usize]) -> Vec<usize> {
    let inv = g.inverse_table();
    (0..g.order())
        .map(|x| {
            let mut acc = g.identity_index();
            for (i, &s) in signs.iter().enumerate() {
                acc = g.mul(acc, if s == 1 { x } else { inv[x] });
                if i < prefix.len() {
                    acc = g.mul(acc, prefix[i]);
                }
            }
            acc
        })
        .collect()
}

/// Candidate sets of one job, in enumeration order, first occurrence only.
fn job_sets(g: &FiniteGroup, signs: &[i8], first: Option<usize>, e: usize) -> Vec<(u64, ElementaryEquation<usize>)> {
    let order = g.order();
    let n = signs.len() - 1;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    // The prefix is first coefficient (fixed by the job) then an odometer.
    let free = n.saturating_sub(1);
    let mut rest = vec![0usize; free];
    loop {
        let prefix: Vec<usize> = first.into_iter().chain(rest.iter().copied()).collect();
        let values = word_values(g, signs, &prefix);
        let mut masks = vec![0u64; order];
        for (x, &v) in values.iter().enumerate() {
            masks[v] |= 1 << x;
        }
        for (rhs, &m) in masks.iter().enumerate() {
            if m == 0 || m >> e & 1 == 1 || !seen.insert(m) {
                continue;
            }
            let mut coeffs = prefix.clone();
            coeffs.push(rhs);
            out.push((m, ElementaryEquation::new(coeffs, signs.to_vec()).expect("well-formed")));
        }
        let mut i = free;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            rest[i] += 1;
            if rest[i] < order {
                break;
            }
            rest[i] = 0;
        }
    }
}

/// Minimum cover of `G ∖ {e}` by elementary sets with `n ≤ max_n`.
///
/// Candidates are enumerated by `n`, then signs (`+1` before `-1`), then
/// coefficients lexicographically; identical solution sets keep the first
/// equation. `budget` bounds the branch and bound nodes; `0` means no search
/// and yields `None`. When the budget runs out the best cover found so far
/// (at worst the greedy one) is returned with `optimal = false`.
pub fn search_min_cover(g: &FiniteGroup, max_n: usize, budget: u64) -> Result<Option<CoverSearch>, CoverError> {
    let order = g.order();
    if order > 64 {
        return Err(CoverError::TooLarge(format!("group order {order} exceeds 64")));
    }
    let mut total: u64 = 0;
    for n in 0..=max_n {
        let c = (2 * order as u64).checked_pow(n as u32 + 1).unwrap_or(u64::MAX);
        total = total.saturating_add(c);
    }
    if total > MAX_CANDIDATES {
        return Err(CoverError::TooLarge(format!("{total} candidate equations")));
    }
    if budget == 0 {
        return Ok(None);
    }
    let e = g.identity_index();
    let mut jobs: Vec<(Vec<i8>, Option<usize>)> = Vec::new();
    for n in 0..=max_n {
        for code in 0..1u32 << (n + 1) {
            let signs = signs_for(n + 1, code);
            if n == 0 {
                jobs.push((signs, None));
            } else {
                jobs.extend((0..order).map(|a| (signs.clone(), Some(a))));
            }
        }
    }
    let per_job: Vec<_> = jobs
        .par_iter()
        .map(|(s, a)| job_sets(g, s, *a, e))
        .collect();
    let mut seen = HashSet::new();
    let mut sets: Vec<(u64, ElementaryEquation<usize>)> = Vec::new();
    for (m, eq) in per_job.into_iter().flatten() {
        if seen.insert(m) {
            sets.push((m, eq));
        }
    }
    let distinct_sets = sets.len();
    if sets.len() <= 5000 {
        let masks: Vec<u64> = sets.iter().map(|s| s.0).collect();
        let keep: Vec<bool> = masks
            .par_iter()
            .map(|&m| !masks.iter().any(|&t| t != m && t & m == m))
            .collect();
        sets = sets.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect();
    }

    let universe: u64 = (0..order).filter(|&x| x != e).fold(0, |acc, x| acc | 1 << x);
    let masks: Vec<u64> = sets.iter().map(|s| s.0).collect();
    let mut bb = BranchAndBound::new(&masks, universe, budget);
    bb.run();
    let mut chosen = bb.best.clone();
    chosen.sort_unstable();
    Ok(Some(CoverSearch {
        certificate: CoverCertificate {
            equations: chosen.into_iter().map(|i| sets[i].1.clone()).collect(),
        },
        optimal: !bb.exhausted,
        candidates: total,
        distinct_sets,
        nodes: bb.nodes,
    }))
}

struct BranchAndBound<'a> {
    masks: &'a [u64],
    covers_of: Vec<Vec<usize>>,
    max_size: u32,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<usize>,
    universe_root: u64,
}

impl<'a> BranchAndBound<'a> {
    fn new(masks: &'a [u64], universe: u64, budget: u64) -> Self {
        let covers_of = (0..64)
            .map(|b| (0..masks.len()).filter(|&i| masks[i] >> b & 1 == 1).collect())
            .collect();
        let mut bb = BranchAndBound {
            masks,
            covers_of,
            max_size: masks.iter().map(|m| m.count_ones()).max().unwrap_or(1).max(1),
            budget,
            nodes: 0,
            exhausted: false,
            best: Vec::new(),
            universe_root: 0,
        };
        bb.best = bb.greedy(universe);
        bb.universe_root = universe;
        bb
    }

    fn greedy(&self, universe: u64) -> Vec<usize> {
        let mut left = universe;
        let mut out = Vec::new();
        while left != 0 {
            let (i, _) = self
                .masks
                .iter()
                .enumerate()
                .map(|(i, m)| (i, (m & left).count_ones()))
                .fold((usize::MAX, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
            assert!(i != usize::MAX, "singleton equations always cover");
            out.push(i);
            left &= !self.masks[i];
        }
        out
    }

    fn run(&mut self) {
        let mut chosen = Vec::new();
        self.dfs(self.universe_root, &mut chosen);
    }

    fn dfs(&mut self, uncovered: u64, chosen: &mut Vec<usize>) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let need = uncovered.count_ones().div_ceil(self.max_size) as usize;
        if chosen.len() + need >= self.best.len() {
            return;
        }
        let bit = (0..64)
            .filter(|&b| uncovered >> b & 1 == 1)
            .min_by_key(|&b| self.covers_of[b].len())
            .expect("nonzero");
        for k in 0..self.covers_of[bit].len() {
            let s = self.covers_of[bit][k];
            chosen.push(s);
            self.dfs(uncovered & !self.masks[s], chosen);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}
