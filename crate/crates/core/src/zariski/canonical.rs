use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;
use serde_json::{json, Value};

use super::ClosedSetExpr;
use crate::group::{AbelianElement, Coset, ElementSyntax, FgAbelianGroup, GroupError, TorsionKernel};
use crate::word::{abelian_reduce, solve_linear, ElementaryEquation, SolutionSet};

/// Normal form of a Zariski-closed subset of a finitely generated abelian
/// group: the list of all maximal cosets of torsion kernels it contains.
///
/// Since every coset inside the set lies in a maximal one, the list is an
/// antichain and determines the set; with reduced representatives and a
/// sorted list it is unique, so set equality is list equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalClosed {
    cosets: Vec<Coset>,
}

/// `closure_finite_set` output: the closed set and one atom `x = a` per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteClosure {
    pub closed: CanonicalClosed,
    pub atoms: Vec<ElementaryEquation<AbelianElement>>,
}

fn kernel_size(g: &FgAbelianGroup, k: TorsionKernel) -> u128 {
    g.kernel_order(k).unwrap_or(u128::MAX)
}

impl CanonicalClosed {
    pub fn empty() -> Self {
        CanonicalClosed { cosets: vec![] }
    }

    pub fn full(g: &FgAbelianGroup) -> Self {
        CanonicalClosed {
            cosets: vec![g.coset(g.zero(), g.full_kernel())],
        }
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn is_full(&self, g: &FgAbelianGroup) -> bool {
        self.cosets.len() == 1 && self.cosets[0].kernel == g.full_kernel()
    }

    pub fn member(&self, g: &FgAbelianGroup, x: &AbelianElement) -> bool {
        self.cosets.iter().any(|c| g.coset_contains(c, x))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, g: &FgAbelianGroup, other: &CanonicalClosed) -> bool {
        other
            .cosets
            .iter()
            .all(|c| first_uncovered(g, c, &self.cosets).is_none())
    }

    pub fn union(&self, g: &FgAbelianGroup, other: &CanonicalClosed) -> CanonicalClosed {
        canonicalize(g, self.cosets.iter().chain(&other.cosets).cloned().collect())
    }

    pub fn intersection(&self, g: &FgAbelianGroup, other: &CanonicalClosed) -> CanonicalClosed {
        let mut out = Vec::new();
        for a in &self.cosets {
            for b in &other.cosets {
                if let Some(c) = g.coset_intersection(a, b) {
                    out.push(c);
                }
            }
        }
        canonicalize(g, out)
    }

    /// Every element, sorted. Fails when the set is infinite or too large.
    pub fn materialize(&self, g: &FgAbelianGroup) -> Result<Vec<AbelianElement>, GroupError> {
        const CAP: u128 = 1 << 22;
        let mut out = BTreeSet::new();
        for c in &self.cosets {
            match g.kernel_order(c.kernel) {
                Some(n) if n <= CAP => {}
                _ => return Err(GroupError::TooLarge("closed set is not small and finite".into())),
            }
            for t in g.transversal(c.kernel, g.trivial_kernel()) {
                out.insert(g.add(&c.representative, &t));
            }
            if out.len() as u128 > CAP {
                return Err(GroupError::TooLarge("closed set is not small and finite".into()));
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `{"empty", "full", "cosets": [{"kernel", "representative"}]}`.
    /// `kernel` is the `k` of `G[k]`.
    pub fn to_json(&self, g: &FgAbelianGroup) -> Value {
        json!({
            "empty": self.is_empty(),
            "full": self.is_full(g),
            "cosets": self.cosets.iter().map(|c| json!({
                "kernel": c.kernel.k(),
                "representative": g.element_json(&c.representative),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The canonical form of a finite union of cosets.
pub fn canonicalize(g: &FgAbelianGroup, cosets: Vec<Coset>) -> CanonicalClosed {
    let full = g.full_kernel();
    if cosets.iter().any(|c| c.kernel == full) {
        return CanonicalClosed::full(g);
    }
    let mut listed: Vec<Coset> = cosets;
    listed.sort();
    listed.dedup();
    if listed.is_empty() {
        return CanonicalClosed::empty();
    }
    let listed_set: HashSet<&Coset> = listed.iter().collect();

    let mut accepted: Vec<Coset> = Vec::new();
    let mut accepted_by_kernel: Vec<(TorsionKernel, HashSet<Coset>)> = Vec::new();
    for kp in g.all_kernels() {
        let mut seen: HashSet<Coset> = HashSet::new();
        let mut here: HashSet<Coset> = HashSet::new();
        for l in &listed {
            if l.kernel != kp && g.kernel_le(kp, l.kernel) {
                // Any coset of `kp` inside `l` is strictly smaller than `l`.
                continue;
            }
            let inner = g.kernel_meet(l.kernel, kp);
            for t in g.transversal(l.kernel, inner) {
                let cand = g.coset(g.add(&l.representative, &t), kp);
                if !seen.insert(cand.clone()) {
                    continue;
                }
                let inside_accepted = accepted_by_kernel.iter().any(|(k, set)| {
                    g.kernel_le(kp, *k) && set.contains(&g.coset(cand.representative.clone(), *k))
                });
                if inside_accepted {
                    continue;
                }
                if listed_set.contains(&cand) || first_uncovered(g, &cand, &listed).is_none() {
                    here.insert(cand);
                }
            }
        }
        if !here.is_empty() {
            accepted.extend(here.iter().cloned());
            accepted_by_kernel.push((kp, here));
        }
    }
    accepted.sort();
    CanonicalClosed { cosets: accepted }
}

/// The first element of `target` not covered by `cover`, or `None` when
/// `target ⊆ ⋃ cover`. Decided exactly by splitting `target` along the
/// kernels of its intersections with the cover.
pub fn first_uncovered(g: &FgAbelianGroup, target: &Coset, cover: &[Coset]) -> Option<AbelianElement> {
    let relevant: Vec<Coset> = cover
        .iter()
        .filter_map(|c| g.coset_intersection(target, c))
        .collect();
    uncovered_in(g, target, relevant)
}

fn uncovered_in(g: &FgAbelianGroup, target: &Coset, relevant: Vec<Coset>) -> Option<AbelianElement> {
    if relevant.is_empty() {
        return Some(target.representative.clone());
    }
    if relevant.iter().any(|c| c.kernel == target.kernel) {
        return None;
    }
    let split = relevant
        .iter()
        .map(|c| c.kernel)
        .max_by(|a, b| kernel_size(g, *a).cmp(&kernel_size(g, *b)).then(b.cmp(a)))
        .expect("nonempty");
    if g.kernel_order(target.kernel).is_none() && g.kernel_order(split).is_some() {
        // The target is the whole group of positive rank and every piece is
        // finite, so moving far enough along the first free coordinate
        // escapes all of them.
        let far = relevant
            .iter()
            .map(|c| c.representative.coords[0].unsigned_abs())
            .max()
            .unwrap_or(0) as i64
            + 1;
        let mut coords = vec![0; g.dim()];
        coords[0] = far;
        return Some(g.reduce(coords));
    }
    let mut buckets: HashMap<Coset, Vec<Coset>> = HashMap::new();
    let mut straddling = Vec::new();
    for c in relevant {
        if g.kernel_le(c.kernel, split) {
            buckets
                .entry(g.coset(c.representative.clone(), split))
                .or_default()
                .push(c);
        } else {
            straddling.push(c);
        }
    }
    for t in g.transversal(target.kernel, split) {
        let piece = g.coset(g.add(&target.representative, &t), split);
        let mut inside: Vec<Coset> = buckets.remove(&piece).unwrap_or_default();
        inside.extend(straddling.iter().filter_map(|c| g.coset_intersection(&piece, c)));
        if let Some(x) = uncovered_in(g, &piece, inside) {
            return Some(x);
        }
    }
    None
}

/// The closed set of an atom.
pub fn atom_set(g: &FgAbelianGroup, eq: &ElementaryEquation<AbelianElement>) -> CanonicalClosed {
    solution_to_closed(g, solve_linear(g, &abelian_reduce(g, eq)))
}

pub(crate) fn solution_to_closed(g: &FgAbelianGroup, s: SolutionSet<AbelianElement>) -> CanonicalClosed {
    match s {
        SolutionSet::Empty => CanonicalClosed::empty(),
        SolutionSet::All => CanonicalClosed::full(g),
        SolutionSet::Coset(c) => canonicalize(g, vec![c]),
        SolutionSet::Explicit(v) => {
            canonicalize(g, v.into_iter().map(|x| g.coset(x, g.trivial_kernel())).collect())
        }
    }
}

/// Canonical form of the set denoted by `expr`.
pub fn normalize(g: &FgAbelianGroup, expr: &ClosedSetExpr<AbelianElement>) -> CanonicalClosed {
    match expr {
        ClosedSetExpr::Empty => CanonicalClosed::empty(),
        ClosedSetExpr::Full => CanonicalClosed::full(g),
        ClosedSetExpr::Atom(a) => atom_set(g, a),
        ClosedSetExpr::Union(c) => {
            let all = c.iter().flat_map(|e| normalize(g, e).cosets).collect();
            canonicalize(g, all)
        }
        ClosedSetExpr::Intersection(c) => {
            let mut acc = CanonicalClosed::full(g);
            for e in c {
                if acc.is_empty() {
                    break;
                }
                acc = acc.intersection(g, &normalize(g, e));
            }
            acc
        }
    }
}

/// A finite set is closed: it is the union of its singleton atoms.
pub fn closure_finite_set(g: &FgAbelianGroup, points: &[AbelianElement]) -> FiniteClosure {
    let mut pts: Vec<AbelianElement> = points.iter().map(|p| g.reduce(p.coords.clone())).collect();
    pts.sort();
    pts.dedup();
    let closed = canonicalize(
        g,
        pts.iter().map(|p| g.coset(p.clone(), g.trivial_kernel())).collect(),
    );
    let atoms = pts.into_iter().map(ElementaryEquation::singleton).collect();
    FiniteClosure { closed, atoms }
}
