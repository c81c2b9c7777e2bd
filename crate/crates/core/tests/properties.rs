//! Property tests for structural invariants that hold over whole
//! families, complementing the per-example unit tests.

use std::sync::Arc;

use proptest::prelude::*;

use pbgroupoid::group::{
    check_group, group_isomorphism, semidirect_product, FiniteGroup, GroupAction,
};
use pbgroupoid::groupoid::{
    check_groupoid, fiber_product_groupoid, FiniteGroupoid, Surjection,
};
use pbgroupoid::io::{emit, entity_to_document, parse_document, Entity};

#[test]
fn pair_groupoids_valid_up_to_six_points() {
    for n in 1..=6usize {
        let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let g = FiniteGroupoid::pair_groupoid(format!("P{n}"), labels).unwrap();
        assert!(check_groupoid(&g).is_valid(), "pair groupoid on {n} points");
        assert_eq!(g.arrow_count(), n * n);
    }
}

fn surjection_strategy() -> impl Strategy<Value = Surjection> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(dom_extra, cod)| {
        let dom = cod + dom_extra.min(4);
        proptest::collection::vec(0..cod, dom).prop_filter_map(
            "must be surjective",
            move |mut map| {
                // force surjectivity by pinning the first `cod` entries
                for (m, slot) in map.iter_mut().take(cod).enumerate() {
                    *slot = m;
                }
                Surjection::new(
                    (0..dom).map(|i| format!("y{i}")).collect(),
                    (0..cod).map(|i| format!("m{i}")).collect(),
                    map,
                )
                .ok()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // fiber product arrow count is Σ_m |π⁻¹(m)|², and the result is a
    // valid groupoid
    #[test]
    fn fiber_product_counts(pi in surjection_strategy()) {
        let g = fiber_product_groupoid("Y2", &pi).unwrap();
        let expected: usize = (0..pi.cod.len())
            .map(|m| pi.fiber(m).len() * pi.fiber(m).len())
            .sum();
        prop_assert_eq!(g.arrow_count(), expected);
        prop_assert!(check_groupoid(&g).is_valid());
        // inv is an involution; units are the only idempotent loops
        for a in 0..g.arrow_count() {
            prop_assert_eq!(g.inv[g.inv[a]], a);
            let idem = g.src[a] == g.tgt[a] && g.comp.get(&(a, a)) == Some(&a);
            prop_assert_eq!(idem, g.is_unit(a));
        }
    }

    // semidirect product with the trivial action is the direct product,
    // entry by entry
    #[test]
    fn semidirect_trivial_action_is_direct_product(nh in 1usize..=4, ng in 1usize..=4) {
        let h = FiniteGroup::cyclic(nh);
        let g = FiniteGroup::cyclic(ng);
        let c = GroupAction::trivial(Arc::new(g.clone()), h.elements.clone());
        let p = semidirect_product(&h, &g, &c).unwrap();
        prop_assert!(check_group(&p).is_valid());
        for h2 in 0..nh { for g2 in 0..ng { for h1 in 0..nh { for g1 in 0..ng {
            let lhs = p.mul[h2 * ng + g2][h1 * ng + g1];
            let rhs = h.mul[h2][h1] * ng + g.mul[g2][g1];
            prop_assert_eq!(lhs, rhs);
        }}}}
    }

    // semidirect inverse formula (h,g)⁻¹ = (C_{g⁻¹}h⁻¹, g⁻¹), against the
    // inversion action of Z2 on Zn
    #[test]
    fn semidirect_inverse_formula(nh in 2usize..=5) {
        let h = FiniteGroup::cyclic(nh);
        let g = FiniteGroup::cyclic(2);
        let inversion: Vec<Vec<usize>> = vec![
            (0..nh).collect(),
            (0..nh).map(|x| (nh - x) % nh).collect(),
        ];
        let c = GroupAction::new(Arc::new(g.clone()), h.elements.clone(), inversion).unwrap();
        let p = semidirect_product(&h, &g, &c).unwrap();
        prop_assert!(check_group(&p).is_valid());
        for hi in 0..nh { for gi in 0..2 {
            let idx = hi * 2 + gi;
            let ginv = g.inv[gi];
            let expect = c.apply(ginv, h.inv[hi]) * 2 + ginv;
            prop_assert_eq!(p.inv[idx], expect);
        }}
    }

    // parse ∘ emit round trip is the identity on randomly assembled
    // cyclic-product groups (byte-stable canonical form)
    #[test]
    fn group_stanza_round_trip(n in 1usize..=6) {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let text1 = emit(&entity_to_document("G", &Entity::Group(g)));
        let doc = parse_document(&text1, "prop").unwrap();
        let Entity::Group(back) = doc.get("G").unwrap() else { panic!("group expected") };
        let text2 = emit(&entity_to_document("G", &Entity::Group(back.clone())));
        prop_assert_eq!(text1, text2);
    }

    // group isomorphism search is reflexive and respects relabelling
    #[test]
    fn isomorphism_respects_relabelling(n in 1usize..=6) {
        let g = FiniteGroup::cyclic(n);
        let mut relabelled = g.clone();
        for (i, label) in relabelled.elements.iter_mut().enumerate() {
            *label = format!("g{i}");
        }
        prop_assert!(group_isomorphism(&g, &relabelled).unwrap().is_some());
    }
}
