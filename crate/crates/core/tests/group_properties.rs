use proptest::prelude::*;
use zariski::group::catalog::{small_groups, small_products};
use zariski::group::{
    center, is_normal, is_super_normal, subgroup_generated_finite, FiniteGroup, SuperNormalMethod,
};

fn catalog() -> Vec<(String, FiniteGroup)> {
    small_groups(24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_subgroups_are_idempotent(gi in 0usize..64, picks in prop::collection::vec(0usize..24, 0..4)) {
        let groups = catalog();
        let (_, g) = &groups[gi % groups.len()];
        let gens: Vec<usize> = picks.iter().map(|p| p % g.order()).collect();
        let h = subgroup_generated_finite(g, &gens);
        let again = subgroup_generated_finite(g, h.elements());
        prop_assert_eq!(h.elements(), again.elements());
    }

    #[test]
    fn super_normal_methods_agree_and_imply_normal(gi in 0usize..64, picks in prop::collection::vec(0usize..24, 0..3)) {
        let groups = catalog();
        let (_, g) = &groups[gi % groups.len()];
        let gens: Vec<usize> = picks.iter().map(|p| p % g.order()).collect();
        let h = subgroup_generated_finite(g, &gens);
        let d = is_super_normal(g, &h, SuperNormalMethod::Definitional);
        let c = is_super_normal(g, &h, SuperNormalMethod::CentralizerProduct);
        match (d, c) {
            (Ok(d), Ok(c)) => {
                prop_assert_eq!(d.holds, c.holds);
                prop_assert!(is_normal(g, &h));
            }
            (Err(_), Err(_)) => prop_assert!(!is_normal(g, &h)),
            _ => prop_assert!(false, "methods disagree on admissibility"),
        }
    }
}

#[test]
fn centers_are_super_normal() {
    for (name, g) in catalog() {
        let z = center(&g);
        let v = is_super_normal(&g, &z, SuperNormalMethod::CentralizerProduct).unwrap();
        assert!(v.holds, "{name}");
    }
}

#[test]
fn direct_factors_are_super_normal() {
    for (name, a, b) in small_products(24) {
        let g = FiniteGroup::direct_product(&a, &b).unwrap();
        let nb = b.order();
        let left: Vec<usize> = (0..a.order()).map(|x| x * nb + b.identity_index()).collect();
        let h = subgroup_generated_finite(&g, &left);
        assert!(is_super_normal(&g, &h, SuperNormalMethod::Definitional).unwrap().holds, "{name}");
    }
}
