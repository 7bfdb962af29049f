use std::collections::BTreeSet;

use proptest::prelude::*;
use zariski::club::{is_phi_invariant, phi_closure, reflection_construct, FinitarySet, ReflectionConfig};
use zariski::group::FgAbelianGroup;
use zariski::zariski::{linear_atom, ClosedSetExpr};

/// `φ(F) = {(a·Σ F + b) mod u}` for nonempty `F`, `{c}` for the empty set.
fn affine(u: usize, a: usize, b: usize, c: usize) -> impl Fn(&[usize]) -> Vec<usize> + Copy {
    move |f: &[usize]| {
        if f.is_empty() {
            vec![c % u]
        } else {
            vec![(a * f.iter().sum::<usize>() + b) % u]
        }
    }
}

/// Least superset of `seed` closed under `phi` on sets of size ≤ `cap`.
fn naive(seed: &BTreeSet<usize>, phi: impl Fn(&[usize]) -> Vec<usize>, cap: usize) -> BTreeSet<usize> {
    let mut y = seed.clone();
    loop {
        let items: Vec<usize> = y.iter().copied().collect();
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..cap {
            let grown: Vec<Vec<usize>> = subsets
                .iter()
                .flat_map(|s| {
                    let last = s.last().copied();
                    items.iter().filter(move |&&x| last.is_none_or(|l| x > l)).map(move |&x| {
                        let mut t = s.clone();
                        t.push(x);
                        t
                    })
                })
                .collect();
            subsets.extend(grown);
            subsets.sort();
            subsets.dedup();
        }
        let next: BTreeSet<usize> = y.iter().copied().chain(subsets.iter().flat_map(|s| phi(s))).collect();
        if next == y {
            return y;
        }
        y = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closure_is_the_least_invariant_superset(u in 1usize..40, a in 0usize..40, b in 0usize..40, c in 0usize..40, cap in 1usize..=2, seed in prop::collection::btree_set(0usize..40, 0..4)) {
        let seed: BTreeSet<usize> = seed.into_iter().map(|x| x % u).collect();
        let phi = affine(u, a, b, c);
        let run = phi_closure(&FinitarySet::new(seed.iter().copied()), phi, cap, 1000);
        prop_assert!(run.stabilized);
        prop_assert_eq!(&run.set.elements, &naive(&seed, phi, cap));
        prop_assert!(is_phi_invariant(&run.set, phi, cap).is_ok());
        prop_assert!(seed.is_subset(&run.set.elements));
    }

    #[test]
    fn reflection_is_deterministic_and_monotone(k in prop::sample::select(vec![1i64, 2, 4]), c in prop::collection::vec(0i64..4, 8), s in prop::collection::vec(0i64..4, 8)) {
        let g = FgAbelianGroup::new(0, vec![4; 8]).unwrap();
        let c = g.reduce(c);
        let a = ClosedSetExpr::Atom(linear_atom(&g, k, g.scale(k, &c)));
        let seed = vec![g.reduce(s)];
        let t1 = reflection_construct(&g, &a, &seed, ReflectionConfig::default());
        let t2 = reflection_construct(&g, &a, &seed, ReflectionConfig::default());
        prop_assert_eq!(&t1.elements, &t2.elements);
        prop_assert_eq!(&t1.generators, &t2.generators);
        prop_assert_eq!(t1.stages.len(), t2.stages.len());
        // Stage records only add elements, never repeat them.
        let mut seen = BTreeSet::new();
        for st in &t1.stages {
            for x in &st.added {
                prop_assert!(seen.insert(x.clone()));
            }
        }
        prop_assert!(t1.stabilized && t1.report.equal);
    }
}
