//! Finite stages of the reflection construction over a finitely generated
//! abelian group.
//!
//! A round applies, in order: closure under the group operations, `ψ` (for
//! each `z` outside `Cl(A)`, adjoin the support of a separating `F_z`) and
//! `φ_k` for `k ≤ max_word_n` (for each finite `F` of equations over the
//! current set, adjoin a point `x_F` of `A ∩ U(F)`). The run stabilizes when
//! a round adds nothing.
//!
//! In an abelian group an equation over `Y` only matters through its
//! solution set `{x : jx = b}`, so `φ_k` ranges over such classes with
//! `1 ≤ j ≤ k+1` and `b ∈ Y`.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde_json::{json, Value};

use crate::group::{AbelianElement, Coset, ElementSyntax, FgAbelianGroup};
use crate::word::{evaluate, print_equation, solve_linear, ElementaryEquation, LinearCongruence, SolutionSet};
use crate::zariski::{
    atom_set, canonicalize, first_uncovered, linear_atom, normalize, reflection_check, CanonicalClosed,
    ClosedSetExpr, ReflectionReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflectionConfig {
    pub max_word_n: usize,
    /// Maximum number of rounds.
    pub fuel: usize,
    /// `F` ranges over sets of at most `arity_cap - 1` equations.
    pub arity_cap: usize,
    /// Give up once the set grows past this size.
    pub max_elements: usize,
}

impl Default for ReflectionConfig {
    fn default() -> Self {
        ReflectionConfig {
            max_word_n: 2,
            fuel: 64,
            arity_cap: 3,
            max_elements: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    Group,
    Psi,
    Phi(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    pub trigger: Trigger,
    pub added: Vec<AbelianElement>,
}

/// `x_F` for an `F` whose witness was not already in the current set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XfWitness {
    pub equations: Vec<ElementaryEquation<AbelianElement>>,
    pub x: AbelianElement,
}

/// A separating family for `z ∉ Cl(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FzWitness {
    pub z: AbelianElement,
    pub equations: Vec<ElementaryEquation<AbelianElement>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WitnessMaps {
    pub x_f: Vec<XfWitness>,
    pub f_z: Vec<FzWitness>,
    /// Sets `F` whose `A ∩ U(F)` already met the current set.
    pub satisfied_locally: u64,
    /// Sets `F` with `A ∩ U(F) = ∅`; their `x_F` is the identity.
    pub empty: u64,
}

#[derive(Debug, Clone)]
pub struct ReflectionTrace {
    pub seed: Vec<AbelianElement>,
    pub stages: Vec<StageRecord>,
    pub stabilized: bool,
    pub rounds: usize,
    /// Seed followed by every element adjoined by `ψ` or `φ_k`.
    pub generators: Vec<AbelianElement>,
    /// The final set, sorted.
    pub elements: Vec<AbelianElement>,
    pub witnesses: WitnessMaps,
    pub report: ReflectionReport,
}

impl ReflectionTrace {
    /// One JSON record per stage, then a summary record. `fmt` renders
    /// elements of the ambient group.
    pub fn to_json_lines(&self, fmt: &dyn Fn(&AbelianElement) -> Value) -> Vec<Value> {
        let mut out: Vec<Value> = self
            .stages
            .iter()
            .map(|s| {
                let mut v = json!({
                    "stage": s.stage,
                    "added": s.added.iter().map(fmt).collect::<Vec<_>>(),
                    "trigger": match s.trigger {
                        Trigger::Group => "group",
                        Trigger::Psi => "psi",
                        Trigger::Phi(_) => "phi_k",
                    },
                });
                if let Trigger::Phi(k) = s.trigger {
                    v["k"] = json!(k);
                }
                v
            })
            .collect();
        let p = &self.report.presentation;
        out.push(json!({
            "stabilized": self.stabilized,
            "subgroup_size": self.elements.len(),
            "rounds": self.rounds,
            "equality": {
                "equal": self.report.equal,
                "lhs": self.report.lhs.to_json(p),
                "rhs": self.report.rhs.to_json(p),
                "informational": !self.stabilized,
            },
            "witnesses": {
                "x_f": self.witnesses.x_f.len(),
                "f_z": self.witnesses.f_z.len(),
                "satisfied_locally": self.witnesses.satisfied_locally,
                "empty": self.witnesses.empty,
            },
        }));
        out
    }
}

/// `⟨H, s⟩ = ⋃_i (H + i·s)` for a finite subgroup `H`.
fn join_cyclic(g: &FgAbelianGroup, h: &mut HashSet<AbelianElement>, s: &AbelianElement) {
    let base: Vec<AbelianElement> = h.iter().cloned().collect();
    let mut m = s.clone();
    while !h.contains(&m) {
        for x in &base {
            h.insert(g.add(x, &m));
        }
        m = g.add(&m, s);
    }
}

struct Engine<'a> {
    g: &'a FgAbelianGroup,
    cfg: ReflectionConfig,
    a: CanonicalClosed,
    set: HashSet<AbelianElement>,
    generators: Vec<AbelianElement>,
    psi_done: HashSet<AbelianElement>,
    /// Solution cosets already used as equation classes, with their `j`.
    classes: Vec<(Coset, usize, AbelianElement)>,
    class_index: HashSet<Coset>,
    b_done: HashSet<AbelianElement>,
    witnesses: WitnessMaps,
    stages: Vec<StageRecord>,
    xf_memo: HashMap<Vec<Coset>, Option<AbelianElement>>,
}

impl<'a> Engine<'a> {
    fn add(&mut self, x: AbelianElement, added: &mut Vec<AbelianElement>) {
        if self.set.insert(x.clone()) {
            self.generators.push(x.clone());
            added.push(x);
        }
    }

    fn record(&mut self, stage: usize, trigger: Trigger, mut added: Vec<AbelianElement>) -> bool {
        if added.is_empty() {
            return false;
        }
        added.sort();
        self.stages.push(StageRecord { stage, trigger, added });
        true
    }

    fn group_step(&mut self) -> Vec<AbelianElement> {
        let g = self.g;
        if g.is_finite() {
            // Closing a set that is a subgroup plus a few new elements:
            // start from the subgroup generated by the recorded generators.
            let mut h: HashSet<AbelianElement> = HashSet::from([g.zero()]);
            let mut gens = self.generators.clone();
            gens.sort();
            for s in &gens {
                join_cyclic(g, &mut h, s);
            }
            let mut added: Vec<AbelianElement> = h.difference(&self.set).cloned().collect();
            added.sort();
            self.set = h;
            added
        } else {
            let items: Vec<AbelianElement> = {
                let mut v: Vec<_> = self.set.iter().cloned().collect();
                v.sort();
                v
            };
            let mut new = BTreeSet::new();
            for a in &items {
                let n = g.neg(a);
                if !self.set.contains(&n) {
                    new.insert(n);
                }
                for b in &items {
                    let s = g.add(a, b);
                    if !self.set.contains(&s) {
                        new.insert(s);
                    }
                }
            }
            if !self.set.contains(&g.zero()) {
                new.insert(g.zero());
            }
            self.set.extend(new.iter().cloned());
            new.into_iter().collect()
        }
    }

    fn psi_step(&mut self) -> Vec<AbelianElement> {
        let g = self.g;
        let mut todo: Vec<AbelianElement> = self
            .set
            .iter()
            .filter(|z| !self.psi_done.contains(*z))
            .cloned()
            .collect();
        todo.sort();
        let mut added = Vec::new();
        for z in todo {
            self.psi_done.insert(z.clone());
            if self.a.member(g, &z) {
                continue;
            }
            let equations: Vec<ElementaryEquation<AbelianElement>> = self
                .a
                .cosets()
                .iter()
                .map(|c| {
                    let k = c.kernel.k() as i64;
                    linear_atom(g, k, g.scale(k, &c.representative))
                })
                .collect();
            for eq in &equations {
                for s in eq.support() {
                    self.add(s, &mut added);
                }
            }
            self.witnesses.f_z.push(FzWitness { z, equations });
        }
        added
    }

    /// Registers classes for every `b` not seen yet; returns the index of the
    /// first new class.
    fn refresh_classes(&mut self) -> usize {
        let g = self.g;
        let first_new = self.classes.len();
        let mut bs: Vec<AbelianElement> = self
            .set
            .iter()
            .filter(|b| !self.b_done.contains(*b))
            .cloned()
            .collect();
        bs.sort();
        let top = self.cfg.max_word_n + 1;
        let mut fresh: Vec<(Coset, usize, AbelianElement)> = Vec::new();
        for j in 1..=top {
            for b in &bs {
                if let SolutionSet::Coset(c) = solve_linear(g, &LinearCongruence { k: j as i64, b: b.clone() }) {
                    if self.class_index.insert(c.clone()) {
                        fresh.push((c, j, b.clone()));
                    }
                }
            }
        }
        self.b_done.extend(bs);
        self.classes.extend(fresh);
        first_new
    }

    /// `x_F`: the first point of `A ∩ U(F)` in the current set if any, else
    /// the first uncovered point of `A`'s cosets in canonical order.
    fn witness_for(&mut self, f: &[usize], a_here: &[AbelianElement], pending: &[AbelianElement]) -> Option<AbelianElement> {
        let g = self.g;
        let cosets: Vec<Coset> = f.iter().map(|&i| self.classes[i].0.clone()).collect();
        let outside = |x: &AbelianElement| cosets.iter().all(|c| !g.coset_contains(c, x));
        if a_here.iter().chain(pending).any(outside) {
            self.witnesses.satisfied_locally += 1;
            return None;
        }
        let mut key = cosets.clone();
        key.sort();
        if let Some(x) = self.xf_memo.get(&key) {
            return x.clone();
        }
        let x = self
            .a
            .cosets()
            .iter()
            .find_map(|c| first_uncovered(g, c, &cosets));
        match &x {
            None => self.witnesses.empty += 1,
            Some(x) => self.witnesses.x_f.push(XfWitness {
                equations: f
                    .iter()
                    .map(|&i| {
                        let (_, j, b) = &self.classes[i];
                        linear_atom(g, *j as i64, b.clone())
                    })
                    .collect(),
                x: x.clone(),
            }),
        }
        self.xf_memo.insert(key, x.clone());
        x
    }

    /// `φ_k` for all `k ≤ max_word_n`. Only sets `F` containing a class
    /// registered in this round are examined; older ones were settled in
    /// earlier rounds and stay settled as the set grows.
    fn phi_steps(&mut self, round: usize) -> bool {
        let g = self.g;
        let first_new = self.refresh_classes();
        let mut a_here: Vec<AbelianElement> = self.set.iter().filter(|x| self.a.member(g, x)).cloned().collect();
        a_here.sort();
        let max_f = self.cfg.arity_cap.saturating_sub(1);
        let n = self.classes.len();
        let mut any = false;
        for k in 0..=self.cfg.max_word_n {
            let mut added = Vec::new();
            let mut pending: Vec<AbelianElement> = Vec::new();
            let level = |i: usize, classes: &[(Coset, usize, AbelianElement)]| classes[i].1;
            // |F| = 0 only once, as φ_0 of the first round.
            if k == 0 && first_new == 0 && round == 0 {
                if let Some(x) = self.witness_for(&[], &a_here, &pending) {
                    pending.push(x.clone());
                    self.add(x, &mut added);
                }
            }
            if max_f >= 1 {
                for i in first_new..n {
                    if level(i, &self.classes) != k + 1 {
                        continue;
                    }
                    if let Some(x) = self.witness_for(&[i], &a_here, &pending) {
                        pending.push(x.clone());
                        self.add(x, &mut added);
                    }
                }
            }
            if max_f >= 2 {
                for i2 in 0..n {
                    for i1 in 0..i2 {
                        if i2 < first_new {
                            continue;
                        }
                        let top = level(i1, &self.classes).max(level(i2, &self.classes));
                        if top != k + 1 {
                            continue;
                        }
                        if let Some(x) = self.witness_for(&[i1, i2], &a_here, &pending) {
                            pending.push(x.clone());
                            self.add(x, &mut added);
                        }
                    }
                }
            }
            any |= self.record(round, Trigger::Phi(k), added);
        }
        any
    }
}

/// Runs the construction from `seed` and checks the reflection equality on
/// the resulting subgroup.
pub fn reflection_construct(
    g: &FgAbelianGroup,
    a: &ClosedSetExpr<AbelianElement>,
    seed: &[AbelianElement],
    cfg: ReflectionConfig,
) -> ReflectionTrace {
    let canon = normalize(g, a);
    let mut seed_sorted: Vec<AbelianElement> = seed.iter().map(|x| g.reduce(x.coords.clone())).collect();
    seed_sorted.dedup();
    let mut engine = Engine {
        g,
        cfg,
        a: canon,
        set: seed_sorted.iter().cloned().collect(),
        generators: Vec::new(),
        psi_done: HashSet::new(),
        classes: Vec::new(),
        class_index: HashSet::new(),
        b_done: HashSet::new(),
        witnesses: WitnessMaps::default(),
        stages: Vec::new(),
        xf_memo: HashMap::new(),
    };
    let mut seen = HashSet::new();
    for x in &seed_sorted {
        if seen.insert(x.clone()) {
            engine.generators.push(x.clone());
        }
    }
    let full = engine.a.is_full(g);
    let mut stabilized = false;
    let mut rounds = 0;
    for round in 0..cfg.fuel {
        rounds = round + 1;
        let mut any = false;
        let added = engine.group_step();
        any |= engine.record(round, Trigger::Group, added);
        let added = engine.psi_step();
        any |= engine.record(round, Trigger::Psi, added);
        // For A = G both sides of the equality are H for every H, so the
        // run stops at the subgroup generated by the seed.
        if !full {
            any |= engine.phi_steps(round);
        }
        if !any {
            stabilized = true;
            break;
        }
        if engine.set.len() > cfg.max_elements {
            break;
        }
    }
    let mut elements: Vec<AbelianElement> = engine.set.iter().cloned().collect();
    elements.sort();
    let report = reflection_check(g, &engine.generators, a);
    ReflectionTrace {
        seed: seed_sorted,
        stages: engine.stages,
        stabilized,
        rounds,
        generators: engine.generators,
        elements,
        witnesses: engine.witnesses,
        report,
    }
}

/// Re-checks every stored witness with the closed-set decision procedures.
/// Returns a description of the first failure.
pub fn verify_witnesses(g: &FgAbelianGroup, a: &ClosedSetExpr<AbelianElement>, trace: &ReflectionTrace) -> Result<(), String> {
    let canon = normalize(g, a);
    let union_of = |eqs: &[ElementaryEquation<AbelianElement>]| {
        canonicalize(
            g,
            eqs.iter().flat_map(|e| atom_set(g, e).cosets().to_vec()).collect(),
        )
    };
    for w in &trace.witnesses.x_f {
        if !canon.member(g, &w.x) {
            return Err(format!("x_F = {} is not in A", g.format_element(&w.x)));
        }
        if let Some(e) = w.equations.iter().find(|e| evaluate(g, e, &w.x)) {
            return Err(format!(
                "x_F = {} solves {}",
                g.format_element(&w.x),
                print_equation(e, g)
            ));
        }
    }
    for w in &trace.witnesses.f_z {
        if let Some(e) = w.equations.iter().find(|e| evaluate(g, e, &w.z)) {
            return Err(format!("z = {} solves {}", g.format_element(&w.z), print_equation(e, g)));
        }
        if !union_of(&w.equations).contains(g, &canon) {
            return Err(format!("A meets U(F_z) for z = {}", g.format_element(&w.z)));
        }
        if !trace.elements.contains(&w.z) {
            return Err(format!("z = {} is not in the trace", g.format_element(&w.z)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_equation;

    fn unit(n: usize, i: usize) -> AbelianElement {
        let mut v = vec![0; n];
        v[i] = 1;
        AbelianElement::new(v)
    }

    #[test]
    fn full_set_never_triggers_psi() {
        let g = FgAbelianGroup::new(0, vec![4; 4]).unwrap();
        let t = reflection_construct(&g, &ClosedSetExpr::Full, &[unit(4, 0)], ReflectionConfig::default());
        assert!(t.stabilized);
        assert!(t.witnesses.f_z.is_empty());
        assert_eq!(t.elements.len(), 4);
        assert!(t.report.equal);
    }

    #[test]
    fn empty_set_separates_everything() {
        let g = FgAbelianGroup::new(0, vec![2; 6]).unwrap();
        let t = reflection_construct(&g, &ClosedSetExpr::Empty, &[unit(6, 2)], ReflectionConfig::default());
        assert!(t.stabilized);
        assert_eq!(t.witnesses.f_z.len(), t.elements.len());
        assert!(t.report.equal && t.report.lhs.is_empty());
        verify_witnesses(&g, &ClosedSetExpr::Empty, &t).unwrap();
    }

    #[test]
    fn torsion_kernel_in_z4_power_sixteen() {
        let g = FgAbelianGroup::new(0, vec![4; 16]).unwrap();
        let a = ClosedSetExpr::Atom(parse_equation("x e x = e", &g).unwrap());
        let t = reflection_construct(&g, &a, &[unit(16, 0)], ReflectionConfig::default());
        assert!(t.stabilized);
        assert!(t.report.equal);
        assert_eq!(t.report.enumeration_agrees, Some(true));
        verify_witnesses(&g, &a, &t).unwrap();
        let again = reflection_construct(&g, &a, &[unit(16, 0)], ReflectionConfig::default());
        assert_eq!(again.stages, t.stages);
    }

    #[test]
    fn coset_away_from_the_seed() {
        let g = FgAbelianGroup::new(0, vec![4; 6]).unwrap();
        let c = AbelianElement::new(vec![1, 2, 0, 3, 0, 1]);
        let a = ClosedSetExpr::Atom(parse_equation(&format!("x e x = {}", g.format_element(&g.scale(2, &c))), &g).unwrap());
        let t = reflection_construct(&g, &a, &[unit(6, 5)], ReflectionConfig::default());
        assert!(t.stabilized);
        assert!(t.report.equal);
        assert!(!t.witnesses.x_f.is_empty());
        verify_witnesses(&g, &a, &t).unwrap();
    }

    #[test]
    fn fuel_one_is_partial() {
        let g = FgAbelianGroup::new(0, vec![2; 8]).unwrap();
        let seed: Vec<_> = (0..8).map(|i| unit(8, i)).collect();
        let cfg = ReflectionConfig { fuel: 1, ..ReflectionConfig::default() };
        let t = reflection_construct(&g, &ClosedSetExpr::Empty, &seed, cfg);
        assert!(!t.stabilized);
        let lines = t.to_json_lines(&|x| g.element_json(x));
        assert_eq!(lines.last().unwrap()["equality"]["informational"], true);
    }
}
