use std::collections::{BTreeMap, BTreeSet};

use super::{FiniteGroup, Group, GroupError};

/// A subgroup given by generators, with an optional enumerated closure.
///
/// The closure is produced by staged multiplication; `stabilized` is true
/// only when a stage added nothing within the fuel budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupHandle<E> {
    generators: Vec<E>,
    closure_cache: Option<Vec<E>>,
    stabilized: bool,
    stages: usize,
}

impl<E: Clone + Ord> SubgroupHandle<E> {
    pub(crate) fn from_parts(
        generators: Vec<E>,
        elements: Option<Vec<E>>,
        stabilized: bool,
        stages: usize,
    ) -> Self {
        let closure_cache = elements.map(|mut v| {
            v.sort();
            v.dedup();
            v
        });
        SubgroupHandle {
            generators,
            closure_cache,
            stabilized,
            stages,
        }
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// Enumerated elements in sorted order (empty slice if not enumerated).
    pub fn elements(&self) -> &[E] {
        self.closure_cache.as_deref().unwrap_or(&[])
    }

    pub fn is_enumerated(&self) -> bool {
        self.closure_cache.is_some()
    }

    pub fn order(&self) -> usize {
        self.elements().len()
    }

    pub fn contains(&self, x: &E) -> bool {
        self.elements().binary_search(x).is_ok()
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    /// Checks the cache invariant: contains the identity, closed under the
    /// product and inverse.
    pub fn validate_in<G: Group<Elem = E>>(&self, g: &G) -> Result<(), GroupError> {
        let els = self.elements();
        if !self.contains(&g.identity()) {
            return Err(GroupError::NotSubgroup("identity missing".into()));
        }
        for a in els {
            if !self.contains(&g.inv(a)) {
                return Err(GroupError::NotSubgroup("not closed under inverse".into()));
            }
            for b in els {
                if !self.contains(&g.op(a, b)) {
                    return Err(GroupError::NotSubgroup("not closed under product".into()));
                }
            }
        }
        Ok(())
    }
}

/// Staged closure of `gens`: stage `n+1` multiplies the stage-`n` frontier
/// by every generator and generator inverse.
pub fn subgroup_generated<G: Group>(g: &G, gens: &[G::Elem], fuel: usize) -> SubgroupHandle<G::Elem> {
    let mut steps: Vec<G::Elem> = Vec::new();
    for s in gens {
        steps.push(s.clone());
        steps.push(g.inv(s));
    }
    steps.sort();
    steps.dedup();
    let mut seen: BTreeSet<G::Elem> = BTreeSet::new();
    seen.insert(g.identity());
    let mut frontier: Vec<G::Elem> = vec![g.identity()];
    let mut stages = 0;
    let mut stabilized = false;
    while stages < fuel {
        let mut next = Vec::new();
        for a in &frontier {
            for s in &steps {
                let p = g.op(a, s);
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        stages += 1;
        if next.is_empty() {
            stabilized = true;
            break;
        }
        frontier = next;
    }
    if fuel == 0 && steps.is_empty() {
        stabilized = true;
    }
    SubgroupHandle::from_parts(gens.to_vec(), Some(seen.into_iter().collect()), stabilized, stages)
}

/// Full closure in a finite group (always stabilizes).
pub fn subgroup_generated_finite(g: &FiniteGroup, gens: &[usize]) -> SubgroupHandle<usize> {
    subgroup_generated(g, gens, g.order() + 1)
}

fn from_set(g: &FiniteGroup, elements: Vec<usize>) -> SubgroupHandle<usize> {
    let _ = g;
    SubgroupHandle::from_parts(elements.clone(), Some(elements), true, 0)
}

fn require_subgroup(g: &FiniteGroup, h: &SubgroupHandle<usize>) -> Result<(), GroupError> {
    if !h.is_enumerated() {
        return Err(GroupError::NotSubgroup("closure not enumerated".into()));
    }
    if h.elements().iter().any(|x| !g.is_element(x)) {
        return Err(GroupError::NotSubgroup("element outside the group".into()));
    }
    h.validate_in(g)
}

/// `c_G(H) = {x : xh = hx for all h ∈ H}`.
pub fn centralizer(g: &FiniteGroup, h: &SubgroupHandle<usize>) -> Result<SubgroupHandle<usize>, GroupError> {
    require_subgroup(g, h)?;
    let els = (0..g.order())
        .filter(|&x| h.elements().iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    Ok(from_set(g, els))
}

pub fn center(g: &FiniteGroup) -> SubgroupHandle<usize> {
    let all = from_set(g, (0..g.order()).collect());
    centralizer(g, &all).expect("whole group is a subgroup")
}

/// Subgroup generated by all commutators `a⁻¹b⁻¹ab`.
pub fn derived_subgroup(g: &FiniteGroup) -> SubgroupHandle<usize> {
    let mut comms = BTreeSet::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            let c = g.mul(g.mul(g.inv(&a), g.inv(&b)), g.mul(a, b));
            comms.insert(c);
        }
    }
    let gens: Vec<usize> = comms.into_iter().collect();
    subgroup_generated_finite(g, &gens)
}

/// True iff `x⁻¹Hx = H` for every `x`.
pub fn is_normal(g: &FiniteGroup, h: &SubgroupHandle<usize>) -> bool {
    (0..g.order()).all(|x| {
        let xi = g.inv(&x);
        h.elements().iter().all(|&y| h.contains(&g.mul(g.mul(xi, y), x)))
    })
}

/// `[G:H]`, with Lagrange's theorem asserted.
pub fn index(g: &FiniteGroup, h: &SubgroupHandle<usize>) -> Result<usize, GroupError> {
    require_subgroup(g, h)?;
    let (n, m) = (g.order(), h.order());
    if n % m != 0 {
        return Err(GroupError::NotSubgroup(format!("|H|={m} does not divide |G|={n}")));
    }
    Ok(n / m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperNormalMethod {
    /// `∀x∈G ∃y∈H ∀h∈H: x⁻¹hx = y⁻¹hy`.
    Definitional,
    /// `G = c_G(H)·H`.
    CentralizerProduct,
}

/// Outcome of a super-normality check. When it holds, `witness` maps every
/// `x` to a `y ∈ H` inducing the same conjugation on `H`; otherwise
/// `failing` is the first `x` in index order without such a `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperNormalVerdict {
    pub holds: bool,
    pub witness: BTreeMap<usize, usize>,
    pub failing: Option<usize>,
}

pub fn is_super_normal(
    g: &FiniteGroup,
    h: &SubgroupHandle<usize>,
    method: SuperNormalMethod,
) -> Result<SuperNormalVerdict, GroupError> {
    require_subgroup(g, h)?;
    if !is_normal(g, h) {
        return Err(GroupError::NotNormal);
    }
    Ok(match method {
        SuperNormalMethod::Definitional => definitional(g, h),
        SuperNormalMethod::CentralizerProduct => centralizer_product(g, h)?,
    })
}

fn definitional(g: &FiniteGroup, h: &SubgroupHandle<usize>) -> SuperNormalVerdict {
    let conj = |x: usize, y: usize| g.mul(g.mul(g.inv(&x), y), x);
    let mut witness = BTreeMap::new();
    for x in 0..g.order() {
        let found = h
            .elements()
            .iter()
            .copied()
            .find(|&y| h.elements().iter().all(|&k| conj(x, k) == conj(y, k)));
        match found {
            Some(y) => {
                witness.insert(x, y);
            }
            None => {
                return SuperNormalVerdict {
                    holds: false,
                    witness: BTreeMap::new(),
                    failing: Some(x),
                }
            }
        }
    }
    SuperNormalVerdict {
        holds: true,
        witness,
        failing: None,
    }
}

fn centralizer_product(
    g: &FiniteGroup,
    h: &SubgroupHandle<usize>,
) -> Result<SuperNormalVerdict, GroupError> {
    let c = centralizer(g, h)?;
    // x = c·y with c central in H means x and y conjugate H identically.
    let mut witness = BTreeMap::new();
    for &ce in c.elements() {
        for &y in h.elements() {
            witness.entry(g.mul(ce, y)).or_insert(y);
        }
    }
    let failing = (0..g.order()).find(|x| !witness.contains_key(x));
    Ok(match failing {
        None => SuperNormalVerdict {
            holds: true,
            witness,
            failing: None,
        },
        Some(x) => SuperNormalVerdict {
            holds: false,
            witness: BTreeMap::new(),
            failing: Some(x),
        },
    })
}

/// Every subgroup of a finite group, as the join-closure of the cyclic
/// subgroups. Sorted by order, then by element list.
pub fn all_subgroups(g: &FiniteGroup) -> Result<Vec<SubgroupHandle<usize>>, GroupError> {
    if g.order() > 64 {
        return Err(GroupError::TooLarge(format!("order {}", g.order())));
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in 0..g.order() {
        found.insert(subgroup_generated_finite(g, &[x]).elements().to_vec());
    }
    let cyclic: Vec<Vec<usize>> = found.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyclic {
                if c.iter().all(|x| s.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = s.clone();
                gens.extend_from_slice(c);
                let j = subgroup_generated_finite(g, &gens).elements().to_vec();
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(out.into_iter().map(|e| from_set(g, e)).collect())
}
