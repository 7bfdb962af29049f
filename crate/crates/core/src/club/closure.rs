use std::collections::BTreeSet;

/// A finite set together with the stage at which it was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitarySet<E: Ord> {
    pub elements: BTreeSet<E>,
    pub stage: usize,
}

impl<E: Ord + Clone> FinitarySet<E> {
    pub fn new(elements: impl IntoIterator<Item = E>) -> Self {
        FinitarySet {
            elements: elements.into_iter().collect(),
            stage: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureRun<E: Ord> {
    pub set: FinitarySet<E>,
    pub stabilized: bool,
    /// Elements first added at each stage.
    pub added: Vec<Vec<E>>,
}

/// Calls `f` on every subset of `items` of size at most `cap`, smallest
/// first, lexicographically within a size, restricted to subsets meeting
/// `items[fresh_from..]`. Stops early when `f` returns `false`.
fn for_each_subset<E: Clone>(items: &[E], cap: usize, fresh_from: usize, mut f: impl FnMut(&[E]) -> bool) {
    let n = items.len();
    let mut buf: Vec<E> = Vec::with_capacity(cap);
    if fresh_from == 0 && !f(&buf) {
        return;
    }
    fn rec<E: Clone>(
        items: &[E],
        start: usize,
        size: usize,
        fresh: bool,
        fresh_from: usize,
        buf: &mut Vec<E>,
        f: &mut dyn FnMut(&[E]) -> bool,
    ) -> bool {
        if buf.len() == size {
            return fresh || f(buf);
        }
        for i in start..items.len() {
            buf.push(items[i].clone());
            let ok = rec(items, i + 1, size, fresh && i < fresh_from, fresh_from, buf, f);
            buf.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    // `fresh` tracks "no element from the fresh range chosen yet".
    for size in 1..=cap.min(n) {
        if !rec(items, 0, size, true, fresh_from, &mut buf, &mut |z| f(z)) {
            return;
        }
    }
}

/// Least φ-invariant superset of `seed`, by the staged recursion
/// `Y_{n+1} = Y_n ∪ ⋃{φ(Z) : Z ⊆ Y_n, |Z| ≤ arity_cap}`.
///
/// Each stage only feeds `φ` the subsets that contain an element added in
/// the previous stage; the others were already seen. `fuel` bounds the
/// number of stages.
pub fn phi_closure<E, F>(seed: &FinitarySet<E>, mut phi: F, arity_cap: usize, fuel: usize) -> ClosureRun<E>
where
    E: Ord + Clone,
    F: FnMut(&[E]) -> Vec<E>,
{
    let mut set = seed.elements.clone();
    // Old elements first, fresh ones after: sorted within each part.
    let mut order: Vec<E> = Vec::new();
    let mut fresh: Vec<E> = set.iter().cloned().collect();
    let mut added = Vec::new();
    let mut stage = seed.stage;
    for _ in 0..fuel {
        stage += 1;
        let fresh_from = order.len();
        let first_stage = fresh_from == 0;
        order.append(&mut fresh);
        let mut new = BTreeSet::new();
        let start = if first_stage { 0 } else { fresh_from };
        for_each_subset(&order, arity_cap, start, |z| {
            for y in phi(z) {
                if !set.contains(&y) {
                    new.insert(y);
                }
            }
            true
        });
        if new.is_empty() {
            return ClosureRun {
                set: FinitarySet { elements: set, stage },
                stabilized: true,
                added,
            };
        }
        set.extend(new.iter().cloned());
        fresh = new.iter().cloned().collect();
        added.push(fresh.clone());
    }
    ClosureRun {
        set: FinitarySet { elements: set, stage },
        stabilized: false,
        added,
    }
}

/// Checks `φ(Z) ⊆ Y` for every `Z ⊆ Y` with `|Z| ≤ arity_cap`. Returns the
/// first failing `Z` in size-then-lexicographic order.
pub fn is_phi_invariant<E, F>(y: &FinitarySet<E>, mut phi: F, arity_cap: usize) -> Result<(), Vec<E>>
where
    E: Ord + Clone,
    F: FnMut(&[E]) -> Vec<E>,
{
    let items: Vec<E> = y.elements.iter().cloned().collect();
    let mut bad = None;
    for_each_subset(&items, arity_cap, 0, |z| {
        if phi(z).iter().all(|x| y.elements.contains(x)) {
            true
        } else {
            bad = Some(z.to_vec());
            false
        }
    });
    match bad {
        Some(z) => Err(z),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalRun<E: Ord> {
    pub set: FinitarySet<E>,
    /// Every witness fixed the final set.
    pub stabilized: bool,
    /// Per witness: `f_k(Y) = Y` for the final `Y`.
    pub membership: Vec<bool>,
    /// The witness index used at each step.
    pub schedule: Vec<usize>,
}

/// The `n`-th pair of the Cantor enumeration of `ℕ × ℕ`.
pub fn cantor_pair(n: u64) -> (u64, u64) {
    let w = ((((8 * n + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
    // Correct for rounding at large `n`.
    let w = (w.saturating_sub(1)..=w + 1)
        .rev()
        .find(|&w| w * (w + 1) / 2 <= n)
        .expect("some diagonal");
    let m = n - w * (w + 1) / 2;
    (w - m, m)
}

/// Interleaves witnesses along the Cantor enumeration `(k_n, m_n)` of
/// `ℕ × ℕ`: `Y_{n+1} = Y_n ∪ f_{k_n}(Y_n)`, skipping pairs with `k_n` out of
/// range. Stops once every witness fixes the set, or after `fuel` steps.
pub fn diagonal_intersection<E, F>(seed: &FinitarySet<E>, witnesses: &[F], fuel: usize) -> DiagonalRun<E>
where
    E: Ord + Clone,
    F: Fn(&BTreeSet<E>) -> BTreeSet<E>,
{
    let w = witnesses.len() as u64;
    let mut y = seed.elements.clone();
    let mut stage = seed.stage;
    let mut schedule = Vec::new();
    // Witnesses applied without effect since the last change.
    let mut quiet = vec![false; witnesses.len()];
    let mut n = 0u64;
    while schedule.len() < fuel && !quiet.iter().all(|&q| q) {
        let (k, _) = cantor_pair(n);
        n += 1;
        if k >= w {
            continue;
        }
        schedule.push(k as usize);
        stage += 1;
        let before = y.len();
        let image = witnesses[k as usize](&y);
        y.extend(image);
        if y.len() == before {
            quiet[k as usize] = true;
        } else {
            quiet.iter_mut().for_each(|q| *q = false);
        }
    }
    let membership: Vec<bool> = witnesses.iter().map(|f| f(&y) == y).collect();
    DiagonalRun {
        stabilized: membership.iter().all(|&m| m),
        membership,
        set: FinitarySet { elements: y, stage },
        schedule,
    }
}
