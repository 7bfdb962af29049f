//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, seq::SliceRandom, Rng, SeedableRng};
use serde_json::Value;
use zariski::club::{
    diagonal_intersection, phi_closure, reflection_construct, verify_witnesses, FinitarySet, ReflectionConfig,
};
use zariski::group::catalog::{abelian_catalog, small_abelian, small_groups, small_products};
use zariski::group::{
    all_subgroups, center, involutive_automorphisms, is_normal, is_super_normal, product_lemma_construct,
    subgroup_generated_finite, AbelianElement, DirectSumGroup, ElementSyntax, Enumerable, Factor,
    FgAbelianGroup, FiniteGroup, Group, IndexKind, SuperNormalMethod,
};
use zariski::word::{
    evaluate, parse_equation, print_equation, solve_abelian, solve_bruteforce, ElementaryEquation, ParseErrorKind,
    SubgroupCoordinates,
};
use zariski::zariski::{
    closure_finite_set, linear_atom, normalize, search_min_cover, verify_discreteness_cover, CanonicalClosed,
    ClosedSetExpr, CoverCertificate, CoverFailure,
};

type Outcome = Result<String, String>;

fn random_abelian(g: &FgAbelianGroup, rng: &mut StdRng, window: i64) -> AbelianElement {
    g.reduce(
        (0..g.dim())
            .map(|i| match g.modulus(i) {
                0 => rng.gen_range(-window..=window),
                m => rng.gen_range(0..m as i64),
            })
            .collect(),
    )
}

fn random_equation<E: Clone>(
    rng: &mut StdRng,
    max_n: usize,
    mut elem: impl FnMut(&mut StdRng) -> E,
) -> ElementaryEquation<E> {
    let n = rng.gen_range(0..=max_n);
    let coeffs = (0..=n).map(|_| elem(rng)).collect();
    let signs = (0..=n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    ElementaryEquation::new(coeffs, signs).expect("well-formed")
}

fn c1_solver(rng: &mut StdRng) -> Outcome {
    let catalog = abelian_catalog(200).map_err(|e| e.to_string())?;
    let z = FgAbelianGroup::integers(1);
    const WINDOW: i64 = 60;
    let (mut finite, mut infinite, mut bad) = (0, 0, Vec::new());
    for i in 0..3000 {
        if i % 6 == 5 {
            let eq = random_equation(rng, 4, |r| random_abelian(&z, r, 12));
            let sol = solve_abelian(&z, &eq);
            for x in -WINDOW..=WINDOW {
                let x = z.reduce(vec![x]);
                if evaluate(&z, &eq, &x) != sol.contains(&z, &x) {
                    bad.push(format!("Z: {}", print_equation(&eq, &z)));
                    break;
                }
            }
            infinite += 1;
        } else {
            let g = catalog.choose(rng).expect("nonempty catalog");
            let eq = random_equation(rng, 4, |r| random_abelian(g, r, 0));
            let fast: BTreeSet<_> = solve_abelian(g, &eq).materialize(g).into_iter().collect();
            let slow: BTreeSet<_> = solve_bruteforce(g, &eq).into_iter().collect();
            if fast != slow {
                bad.push(format!("{:?}: {}", g.invariants(), print_equation(&eq, g)));
            }
            finite += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("{finite} finite + {infinite} integer-window equations, 0 mismatches"))
    } else {
        Err(format!("{} mismatches, first {}", bad.len(), bad[0]))
    }
}

fn c2_super_normal(_: &mut StdRng) -> Outcome {
    let (mut checked, mut disagreements) = (0, Vec::new());
    for (name, g) in small_groups(24) {
        for h in all_subgroups(&g).map_err(|e| e.to_string())? {
            if !is_normal(&g, &h) {
                continue;
            }
            let d = is_super_normal(&g, &h, SuperNormalMethod::Definitional).map_err(|e| e.to_string())?;
            let c = is_super_normal(&g, &h, SuperNormalMethod::CentralizerProduct).map_err(|e| e.to_string())?;
            checked += 1;
            if d.holds != c.holds {
                disagreements.push(format!("{name} {:?}", h.elements()));
            }
        }
    }
    let mut instances = 0;
    let mut failures = Vec::new();
    for (name, g) in small_groups(24) {
        let z = center(&g);
        instances += 1;
        if !is_super_normal(&g, &z, SuperNormalMethod::Definitional).is_ok_and(|v| v.holds) {
            failures.push(format!("center of {name}"));
        }
    }
    for (name, a, b) in small_products(24) {
        let g = FiniteGroup::direct_product(&a, &b).map_err(|e| e.to_string())?;
        let nb = b.order();
        let left: Vec<usize> = (0..a.order()).map(|x| x * nb + b.identity_index()).collect();
        let right: Vec<usize> = (0..nb).map(|y| a.identity_index() * nb + y).collect();
        for factor in [left, right] {
            let h = subgroup_generated_finite(&g, &factor);
            instances += 1;
            if !is_super_normal(&g, &h, SuperNormalMethod::CentralizerProduct).is_ok_and(|v| v.holds) {
                failures.push(format!("factor of {name}"));
            }
        }
    }
    if disagreements.is_empty() && failures.is_empty() {
        Ok(format!("{checked} normal subgroups agree; {instances} centers and direct factors pass"))
    } else {
        Err(format!("disagreements {disagreements:?}; failing instances {failures:?}"))
    }
}

fn random_tree(g: &FgAbelianGroup, rng: &mut StdRng, depth: usize) -> ClosedSetExpr<AbelianElement> {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => ClosedSetExpr::Empty,
            1 => ClosedSetExpr::Full,
            // `points` is a union node, so it only appears above the bottom level.
            2 if depth > 0 => {
                let pts: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| random_abelian(g, rng, 0)).collect();
                ClosedSetExpr::points(&pts)
            }
            _ => ClosedSetExpr::Atom(random_equation(rng, 3, |r| random_abelian(g, r, 0))),
        };
    }
    let children = (0..rng.gen_range(1..=3)).map(|_| random_tree(g, rng, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        ClosedSetExpr::Union(children)
    } else {
        ClosedSetExpr::Intersection(children)
    }
}

/// The canonical form written back as an expression.
fn as_expr(g: &FgAbelianGroup, c: &CanonicalClosed) -> ClosedSetExpr<AbelianElement> {
    if c.is_empty() {
        return ClosedSetExpr::Empty;
    }
    if c.is_full(g) {
        return ClosedSetExpr::Full;
    }
    ClosedSetExpr::Union(
        c.cosets()
            .iter()
            .map(|co| {
                let k = co.kernel.k() as i64;
                ClosedSetExpr::Atom(linear_atom(g, k, g.scale(k, &co.representative)))
            })
            .collect(),
    )
}

fn c3_closed_sets(rng: &mut StdRng) -> Outcome {
    let catalog = abelian_catalog(200).map_err(|e| e.to_string())?;
    let (mut trees, mut pairs, mut included) = (0, 0, 0);
    let mut bad = Vec::new();
    while trees < 1000 || pairs < 600 {
        let g = catalog.choose(rng).expect("nonempty");
        let a = random_tree(g, rng, 4);
        let b = random_tree(g, rng, 4);
        if a.depth() > 4 || b.depth() > 4 {
            return Err("generator exceeded depth 4".into());
        }
        let (na, nb) = (normalize(g, &a), normalize(g, &b));
        for (e, n) in [(&a, &na), (&b, &nb)] {
            trees += 1;
            let direct: BTreeSet<_> = e.denote(g).into_iter().collect();
            let canon: BTreeSet<_> = n.materialize(g).map_err(|e| e.to_string())?.into_iter().collect();
            if direct != canon {
                bad.push(format!("denotation {:?}", e.to_json(g)));
            }
            if normalize(g, &as_expr(g, n)) != *n {
                bad.push(format!("idempotence {:?}", e.to_json(g)));
            }
        }
        // Unions and intersections make inclusions common.
        let u = ClosedSetExpr::Union(vec![a.clone(), b.clone()]);
        let i = ClosedSetExpr::Intersection(vec![a.clone(), b.clone()]);
        let sa: BTreeSet<_> = a.denote(g).into_iter().collect();
        for (x, sx, nx) in [
            (&b, b.denote(g).into_iter().collect::<BTreeSet<_>>(), &nb),
            (&u, u.denote(g).into_iter().collect(), &normalize(g, &u)),
            (&i, i.denote(g).into_iter().collect(), &normalize(g, &i)),
        ] {
            for (outer, inner, so, si) in [(&na, nx, &sa, &sx), (nx, &na, &sx, &sa)] {
                pairs += 1;
                let expected = si.is_subset(so);
                included += expected as usize;
                if outer.contains(g, inner) != expected {
                    bad.push(format!("contains {:?} {:?}", a.to_json(g), x.to_json(g)));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{trees} trees, {pairs} inclusion pairs ({included} true), 0 mismatches"))
    } else {
        Err(format!("{} mismatches, first {}", bad.len(), bad[0]))
    }
}

fn c4_finite_sets(rng: &mut StdRng) -> Outcome {
    let catalog = abelian_catalog(200).map_err(|e| e.to_string())?;
    let mut bad = 0;
    for _ in 0..250 {
        let g = catalog.choose(rng).expect("nonempty");
        let all = g.elements();
        let size = rng.gen_range(0..=all.len().min(12));
        let a: BTreeSet<_> = all.choose_multiple(rng, size).cloned().collect();
        let pts: Vec<_> = a.iter().cloned().collect();
        let c = closure_finite_set(g, &pts);
        let closed: BTreeSet<_> = c.closed.materialize(g).map_err(|e| e.to_string())?.into_iter().collect();
        let atoms: BTreeSet<_> = ClosedSetExpr::Union(c.atoms.iter().cloned().map(ClosedSetExpr::Atom).collect())
            .denote(g)
            .into_iter()
            .collect();
        if closed != a || atoms != a {
            bad += 1;
        }
    }
    if bad == 0 {
        Ok("250 random finite sets denote themselves".into())
    } else {
        Err(format!("{bad} of 250 sets changed"))
    }
}

fn coset_atom(g: &FgAbelianGroup, m: u64, rng: &mut StdRng) -> ClosedSetExpr<AbelianElement> {
    let divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let k = *divisors.choose(rng).expect("divisor") as i64;
    let c = random_abelian(g, rng, 0);
    ClosedSetExpr::Atom(linear_atom(g, k, g.scale(k, &c)))
}

fn c5_reflection(rng: &mut StdRng) -> Outcome {
    let mut runs = 0;
    let mut bad = Vec::new();
    for (n, m) in [(8usize, 2u64), (16, 4), (32, 2)] {
        let g = FgAbelianGroup::new(0, vec![m; n]).map_err(|e| e.to_string())?;
        for seed in 0..50 {
            let a = match rng.gen_range(0..6) {
                0 => ClosedSetExpr::Empty,
                1 => ClosedSetExpr::Full,
                2 | 3 => coset_atom(&g, m, rng),
                _ => ClosedSetExpr::Union((0..rng.gen_range(2..=3)).map(|_| coset_atom(&g, m, rng)).collect()),
            };
            let pts: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| random_abelian(&g, rng, 0)).collect();
            let t = reflection_construct(&g, &a, &pts, ReflectionConfig::default());
            runs += 1;
            let tag = format!("({n},{m}) seed {seed}");
            if !t.stabilized {
                bad.push(format!("{tag}: not stabilized"));
                continue;
            }
            if !t.report.equal {
                bad.push(format!("{tag}: inequality"));
            }
            if let Err(e) = verify_witnesses(&g, &a, &t) {
                bad.push(format!("{tag}: {e}"));
            }
            // Enumerate H and compare the inner closure with A pointwise.
            let h = SubgroupCoordinates::new(&g, &t.generators);
            let p = h.presentation();
            let inside = t.elements.iter().filter(|y| {
                let q = h.project(y).expect("element of H");
                t.report.lhs.member(p, &q) != a.member(&g, y)
            });
            if inside.count() > 0 {
                bad.push(format!("{tag}: closure differs from H ∩ A"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{runs} traces stabilized with equality and verified witnesses"))
    } else {
        Err(format!("{} failures, first {}", bad.len(), bad[0]))
    }
}

fn saturate(universe: usize, phi: &dyn Fn(&[usize]) -> Vec<usize>, cap: usize, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut y = seed.clone();
    loop {
        let items: Vec<usize> = y.iter().copied().collect();
        let mut next = y.clone();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, vec![])];
        while let Some((start, f)) = stack.pop() {
            next.extend(phi(&f).into_iter().filter(|&v| v < universe));
            if f.len() < cap {
                for i in start..items.len() {
                    let mut g = f.clone();
                    g.push(items[i]);
                    stack.push((i + 1, g));
                }
            }
        }
        if next == y {
            return y;
        }
        y = next;
    }
}

fn c6_club(rng: &mut StdRng) -> Outcome {
    let mut bad = Vec::new();
    for trial in 0..120 {
        let universe = rng.gen_range(1..=64usize);
        let cap = if universe <= 20 { rng.gen_range(1..=3) } else { rng.gen_range(1..=2) };
        let salt: u64 = rng.gen();
        let density = rng.gen_range(0.05..0.4);
        // A pseudo-random operator: a deterministic function of the set.
        let phi = move |f: &[usize]| -> Vec<usize> {
            let mut s: BTreeSet<usize> = f.iter().copied().collect();
            let mut h = salt;
            for &x in &s {
                h = (h ^ x as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
            }
            s.clear();
            let mut r = StdRng::seed_from_u64(h);
            if r.gen_bool(density) {
                s.insert(r.gen_range(0..universe));
                if r.gen_bool(0.3) {
                    s.insert(r.gen_range(0..universe));
                }
            }
            s.into_iter().collect()
        };
        let seed: BTreeSet<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..universe)).collect();
        let run = phi_closure(&FinitarySet::new(seed.iter().copied()), phi, cap, 10_000);
        let naive = saturate(universe, &phi, cap, &seed);
        if !run.stabilized || run.set.elements != naive {
            bad.push(format!("trial {trial}: universe {universe}, cap {cap}"));
        }
    }
    let s4 = FiniteGroup::symmetric(4).map_err(|e| e.to_string())?;
    let generated = |y: &BTreeSet<usize>| -> BTreeSet<usize> {
        let gens: Vec<usize> = y.iter().copied().collect();
        subgroup_generated_finite(&s4, &gens).elements().iter().copied().collect()
    };
    let normal_closure = |y: &BTreeSet<usize>| -> BTreeSet<usize> {
        let inv = s4.inverse_table();
        let conj: Vec<usize> = (0..s4.order())
            .flat_map(|g| y.iter().map(move |&h| (g, h)))
            .map(|(g, h)| s4.mul(s4.mul(inv[g], h), g))
            .collect();
        subgroup_generated_finite(&s4, &conj).elements().iter().copied().collect()
    };
    let witnesses: Vec<Box<dyn Fn(&BTreeSet<usize>) -> BTreeSet<usize>>> =
        vec![Box::new(generated), Box::new(normal_closure)];
    let mut diag = 0;
    for x in 0..s4.order() {
        let run = diagonal_intersection(&FinitarySet::new([x]), &witnesses, 1000);
        diag += 1;
        if !run.stabilized || run.membership != [true, true] {
            bad.push(format!("diagonal from {}", s4.label(x)));
        }
    }
    if bad.is_empty() {
        Ok(format!("120 operators match naive saturation; {diag} S4 diagonal runs land in both clubs"))
    } else {
        Err(format!("{} failures, first {}", bad.len(), bad[0]))
    }
}

/// Every elementary set with `n ≤ max_n` avoiding the identity, as a bit mask.
fn elementary_masks(g: &FiniteGroup, max_n: usize) -> BTreeSet<u64> {
    let order = g.order();
    let e = g.identity_index();
    let mut out = BTreeSet::new();
    for n in 0..=max_n {
        let slots = n + 1;
        let total = (2 * order).pow(slots as u32);
        for code in 0..total {
            let (mut c, mut coeffs, mut signs) = (code, Vec::new(), Vec::new());
            for _ in 0..slots {
                signs.push(if c % 2 == 0 { 1 } else { -1 });
                c /= 2;
                coeffs.push(c % order);
                c /= order;
            }
            let eq = ElementaryEquation::new(coeffs, signs).expect("well-formed");
            let mask = (0..order).filter(|x| evaluate(g, &eq, x)).fold(0u64, |m, x| m | 1 << x);
            if mask != 0 && mask & (1 << e) == 0 {
                out.insert(mask);
            }
        }
    }
    out
}

fn has_cover(sets: &[u64], target: u64, size: usize) -> bool {
    fn go(sets: &[u64], from: usize, acc: u64, target: u64, left: usize) -> bool {
        if acc == target {
            return true;
        }
        left > 0 && (from..sets.len()).any(|i| go(sets, i + 1, acc | sets[i], target, left - 1))
    }
    go(sets, 0, 0, target, size)
}

fn c7_covers(_: &mut StdRng) -> Outcome {
    let mut bad = Vec::new();
    let (mut groups, mut deletions, mut searched) = (0, 0, 0);
    for (name, g) in small_groups(24) {
        groups += 1;
        let cert = CoverCertificate::singletons(&g);
        if !verify_discreteness_cover(&g, &cert).valid {
            bad.push(format!("{name}: singletons rejected"));
        }
        for i in 0..cert.equations.len() {
            let mut c = cert.clone();
            let removed = c.equations.remove(i);
            deletions += 1;
            let v = verify_discreteness_cover(&g, &c);
            let correct = match v.failure {
                Some(CoverFailure::Uncovered(x)) => {
                    x == *removed.rhs() && x != g.identity_index() && !c.equations.iter().any(|q| evaluate(&g, q, &x))
                }
                _ => false,
            };
            if v.valid || !correct {
                bad.push(format!("{name}: deletion {i} gave {:?}", v.failure));
            }
        }
        if g.order() >= 2 {
            match search_min_cover(&g, 1, 200_000) {
                Ok(Some(r)) if verify_discreteness_cover(&g, &r.certificate).valid => searched += 1,
                other => bad.push(format!("{name}: search gave {:?}", other.map(|o| o.map(|r| r.certificate)))),
            }
        }
    }
    let mut minima = Vec::new();
    for p in [2usize, 3, 5] {
        let g = FiniteGroup::cyclic(p).map_err(|e| e.to_string())?;
        let max_n = 2;
        let r = search_min_cover(&g, max_n, 1_000_000)
            .map_err(|e| e.to_string())?
            .ok_or("no cover found")?;
        let sets: Vec<u64> = elementary_masks(&g, max_n).into_iter().collect();
        let target = ((1u64 << p) - 1) & !(1 << g.identity_index());
        let singletons = p - 1;
        let smaller = (1..singletons).any(|s| has_cover(&sets, target, s));
        let size = r.certificate.equations.len();
        let exact = if smaller { (1..singletons).find(|&s| has_cover(&sets, target, s)).unwrap() } else { singletons };
        if !r.optimal || size != exact || !verify_discreteness_cover(&g, &r.certificate).valid {
            bad.push(format!("Z/{p}: search size {size}, exhaustive minimum {exact}"));
        }
        minima.push(format!("Z/{p}:{size}"));
    }
    if bad.is_empty() {
        Ok(format!(
            "{groups} groups, {deletions} deletions rejected, {searched} searched certificates verify, minima {}",
            minima.join(" ")
        ))
    } else {
        Err(format!("{} failures, first {}", bad.len(), bad[0]))
    }
}

fn c8_product_lemma(_: &mut StdRng) -> Outcome {
    let mut cases = 0;
    let mut bad = Vec::new();
    let factors = small_abelian(16);
    for (n1_name, n1) in &factors {
        for (n2_name, n2) in &factors {
            if n1.order() * n2.order() > 16 {
                continue;
            }
            let n = FiniteGroup::direct_product(n1, n2).map_err(|e| e.to_string())?;
            let m = n.order();
            for f in involutive_automorphisms(&n) {
                cases += 1;
                let c = product_lemma_construct(n1, n2, &f).map_err(|e| e.to_string())?;
                let h: HashSet<(usize, usize)> = c.h.elements().iter().copied().collect();
                let closed = h.iter().all(|a| h.iter().all(|b| h.contains(&c.view.op(a, b))));
                let e = c.gprime.identity_index();
                let gstar: Vec<(usize, usize)> = h.iter().copied().filter(|p| p.1 == e).collect();
                let mut image: Vec<usize> = gstar.iter().map(|p| p.0).collect();
                image.sort_unstable();
                // N sits in G' as the indices below |N|, with the same law.
                let iso = image == (0..m).collect::<Vec<_>>()
                    && gstar.iter().all(|a| gstar.iter().all(|b| c.gprime.mul(a.0, b.0) == n.mul(a.0, b.0)));
                if !(closed && h.len() == 2 * gstar.len() && iso) {
                    bad.push(format!("{n1_name} x {n2_name}, f = {f:?}"));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{cases} admissible triples: index 2 and projection isomorphism"))
    } else {
        Err(format!("{} failures, first {}", bad.len(), bad[0]))
    }
}

fn round_trip<G: ElementSyntax>(
    g: &G,
    rng: &mut StdRng,
    count: usize,
    mut elem: impl FnMut(&mut StdRng) -> G::Elem,
    texts: &mut Vec<String>,
) -> usize {
    let mut bad = 0;
    for _ in 0..count {
        let eq = random_equation(rng, 4, &mut elem);
        let text = print_equation(&eq, g);
        match parse_equation(&text, g) {
            Ok(back) if back == eq && print_equation(&back, g) == text => {}
            _ => bad += 1,
        }
        texts.push(text);
    }
    bad
}

fn c9_parser(rng: &mut StdRng) -> Outcome {
    let mut texts = Vec::new();
    let mut bad = 0;
    let s3 = FiniteGroup::symmetric(3).map_err(|e| e.to_string())?;
    bad += round_trip(&s3, rng, 250, |r| r.gen_range(0..6), &mut Vec::new());
    let z12 = FgAbelianGroup::cyclic(12).map_err(|e| e.to_string())?;
    bad += round_trip(&z12, rng, 250, |r| random_abelian(&z12, r, 0), &mut texts);
    let z24 = FgAbelianGroup::new(1, vec![2, 4]).map_err(|e| e.to_string())?;
    bad += round_trip(&z24, rng, 250, |r| random_abelian(&z24, r, 20), &mut Vec::new());
    let factor = Factor::Finite(FiniteGroup::cyclic(3).map_err(|e| e.to_string())?);
    let ds = DirectSumGroup::power(factor, IndexKind::Finite(4)).map_err(|e| e.to_string())?;
    let all = ds.elements();
    bad += round_trip(&ds, rng, 250, |r| all.choose(r).expect("nonempty").clone(), &mut Vec::new());
    if bad > 0 {
        return Err(format!("{bad} of 1000 equations fail to round-trip"));
    }

    // Malformed inputs: a fixed corpus plus mutations of generated ones.
    let mut malformed: Vec<String> = [
        "", "   ", "x 3", "x 3 x", "= 3", "3 = 9", "x x = 3", "x 3 3 = 9", "x^2 = 1", "x^ = 1", "x ( 3 = 9",
        "x 3 x = 9 9", "x = ", "x = = 3", "x 3 x^-1 =", "(x 3 = 9", "x 3] = 9",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for t in texts.iter().take(60) {
        malformed.push(match rng.gen_range(0..3) {
            0 => t.replace('=', ""),
            1 => format!("x {t}"),
            _ => t.replacen(' ', " x ", 1).replacen('x', "x x", 1),
        });
    }
    let mut problems = Vec::new();
    for m in &malformed {
        match parse_equation(m, &z12) {
            Ok(_) => problems.push(format!("{m:?} parsed")),
            Err(e) if matches!(e.kind, ParseErrorKind::UnknownCoefficient(_)) => {
                problems.push(format!("{m:?}: unknown coefficient"))
            }
            Err(e) if e.position > m.chars().count() => problems.push(format!("{m:?}: position out of range")),
            Err(_) => {}
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = dir.path().join("z12.json");
    std::fs::write(&spec, r#"{"kind": "cyclic", "n": 12}"#).map_err(|e| e.to_string())?;
    for m in &malformed {
        let out = Command::new(env!("CARGO_BIN_EXE_zariski"))
            .args(["solve", "--group"])
            .arg(&spec)
            .args(["--eq", m])
            .output()
            .map_err(|e| e.to_string())?;
        let report: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
        if out.status.code() != Some(2) || !report["position"].is_u64() {
            problems.push(format!("{m:?}: exit {:?}, report {report}", out.status.code()));
        }
    }
    if problems.is_empty() {
        Ok(format!("1000 equations round-trip; {} malformed inputs exit 2 with a position", malformed.len()))
    } else {
        Err(format!("{} problems: {}", problems.len(), problems.join("; ")))
    }
}

type Criterion = fn(&mut StdRng) -> Outcome;

fn main() {
    let criteria: [(&str, Criterion, u64); 9] = [
        ("abelian solver vs brute force", c1_solver, 60),
        ("super-normal equivalence", c2_super_normal, 60),
        ("closed-set algebra", c3_closed_sets, 120),
        ("finite sets are closed", c4_finite_sets, 60),
        ("reflection at finite stages", c5_reflection, 300),
        ("club engine fixed points", c6_club, 60),
        ("cover certificates", c7_covers, 120),
        ("product construction", c8_product_lemma, 60),
        ("parser round trip and errors", c9_parser, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let mut rng = StdRng::seed_from_u64(0x5eed + i as u64);
        let start = Instant::now();
        let result = run(&mut rng);
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{msg}; over the {budget}s budget"))
            }
            r => r,
        };
        match result {
            Ok(msg) => println!("criterion {} PASS {name} ({:.2?}): {msg}", i + 1, elapsed),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({:.2?}): {msg}", i + 1, elapsed);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
