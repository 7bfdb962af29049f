//! Named groups used by the test oracles and the CLI examples.

use super::{FgAbelianGroup, FiniteGroup, GroupError};

fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).expect("cyclic group")
}

fn prod(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    FiniteGroup::direct_product(a, b).expect("small product")
}

/// Finite groups of order at most `max_order` (capped at 24), each with a
/// name. Includes cyclic, dihedral, symmetric, alternating, quaternion and
/// assorted direct products, abelian and not.
pub fn small_groups(max_order: usize) -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    for n in 1..=24 {
        out.push((format!("Z{n}"), z(n)));
    }
    for n in 2..=12 {
        out.push((format!("D{n}"), FiniteGroup::dihedral(n).expect("dihedral")));
    }
    out.push(("S3".into(), FiniteGroup::symmetric(3).expect("S3")));
    out.push(("S4".into(), FiniteGroup::symmetric(4).expect("S4")));
    out.push(("A4".into(), FiniteGroup::alternating(4).expect("A4")));
    out.push(("Q8".into(), FiniteGroup::quaternion().expect("Q8")));
    let s3 = FiniteGroup::symmetric(3).expect("S3");
    let d4 = FiniteGroup::dihedral(4).expect("D4");
    let q8 = FiniteGroup::quaternion().expect("Q8");
    let a4 = FiniteGroup::alternating(4).expect("A4");
    out.push(("Z2xZ2".into(), prod(&z(2), &z(2))));
    out.push(("Z2xZ4".into(), prod(&z(2), &z(4))));
    out.push(("Z2xZ2xZ2".into(), prod(&prod(&z(2), &z(2)), &z(2))));
    out.push(("Z3xZ3".into(), prod(&z(3), &z(3))));
    out.push(("Z2xZ6".into(), prod(&z(2), &z(6))));
    out.push(("Z4xZ4".into(), prod(&z(4), &z(4))));
    out.push(("Z2xZ8".into(), prod(&z(2), &z(8))));
    out.push(("Z2xZ2xZ4".into(), prod(&prod(&z(2), &z(2)), &z(4))));
    out.push(("Z2xZ10".into(), prod(&z(2), &z(10))));
    out.push(("Z2xZ2xZ6".into(), prod(&prod(&z(2), &z(2)), &z(6))));
    out.push(("Z2xS3".into(), prod(&z(2), &s3)));
    out.push(("Z3xS3".into(), prod(&z(3), &s3)));
    out.push(("Z4xS3".into(), prod(&z(4), &s3)));
    out.push(("Z2xD4".into(), prod(&z(2), &d4)));
    out.push(("Z2xQ8".into(), prod(&z(2), &q8)));
    out.push(("Z3xQ8".into(), prod(&z(3), &q8)));
    out.push(("Z2xA4".into(), prod(&z(2), &a4)));
    out.push(("S3xZ3".into(), prod(&s3, &z(3))));
    out.retain(|(_, g)| g.order() <= max_order.min(24));
    out
}

/// Named direct products `G1 × G2` from [`small_groups`], with the factor
/// orders, for checking that direct factors are super-normal.
pub fn small_products(max_order: usize) -> Vec<(String, FiniteGroup, FiniteGroup)> {
    let factors: Vec<(String, FiniteGroup)> = small_groups(12)
        .into_iter()
        .filter(|(_, g)| g.order() >= 2)
        .collect();
    let mut out = Vec::new();
    for (na, a) in &factors {
        for (nb, b) in &factors {
            if a.order() * b.order() <= max_order {
                out.push((format!("{na}x{nb}"), a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Finite abelian groups of order at most `max_order` as Cayley tables,
/// used as `N1`, `N2` in the product construction.
pub fn small_abelian(max_order: usize) -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = (1..=max_order.min(16))
        .map(|n| (format!("Z{n}"), z(n)))
        .collect();
    let extra = [
        ("Z2xZ2", prod(&z(2), &z(2))),
        ("Z2xZ4", prod(&z(2), &z(4))),
        ("Z2xZ2xZ2", prod(&prod(&z(2), &z(2)), &z(2))),
        ("Z4xZ4", prod(&z(4), &z(4))),
        ("Z2xZ8", prod(&z(2), &z(8))),
        ("Z2xZ2xZ4", prod(&prod(&z(2), &z(2)), &z(4))),
        ("Z2xZ2xZ2xZ2", prod(&prod(&z(2), &z(2)), &prod(&z(2), &z(2)))),
        ("Z3xZ3", prod(&z(3), &z(3))),
        ("Z2xZ6", prod(&z(2), &z(6))),
    ];
    out.extend(
        extra
            .into_iter()
            .filter(|(_, g)| g.order() <= max_order)
            .map(|(n, g)| (n.to_string(), g)),
    );
    out
}

/// Finitely generated abelian groups in invariant-factor form: `ℤ/n` and
/// `ℤ/a ⊕ ℤ/b` with `a | b`, of order at most `max_order`.
pub fn abelian_catalog(max_order: u64) -> Result<Vec<FgAbelianGroup>, GroupError> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        out.push(FgAbelianGroup::cyclic(n)?);
    }
    for a in 2..=max_order {
        for b in (a..=max_order / a).filter(|b| b % a == 0) {
            out.push(FgAbelianGroup::new(0, vec![a, b])?);
        }
    }
    Ok(out)
}
