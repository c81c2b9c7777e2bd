//! Acceptance suite: the exit gate, one test per criterion, each printing
//! a pass/fail line and enforcing its runtime budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::sync::Arc;
use std::time::{Duration, Instant};

use pbgroupoid::action::{check_pb_groupoid, partial_quotient};
use pbgroupoid::catalog::{self, pbgauge0};
use pbgroupoid::gerbe::{
    check_base_trivial, check_bundle_gerbe, functor_phi, functor_xi, verify_bg_pq_item1,
    verify_bg_pq_item2, verify_psi_xi_roundtrip, verify_xi_psi_roundtrip,
};
use pbgroupoid::group::FiniteGroup;
use pbgroupoid::groupoid::{fiber_product_groupoid, FiniteGroupoid, Surjection};
use pbgroupoid::io::{emit, entity_to_document, parse_document, Entity};
use pbgroupoid::morita::{
    bitorsor_exists, check_bitorsor, check_morita_pullback, check_weak_equivalence,
    interpret_principal_2bundle, lemma_weakequiv_check, BitorsorExistence,
};
use pbgroupoid::nerve::{check_simplicial, nerve, nerve_pb, partial_quotient_nerve, two_group_nerve_models};
use pbgroupoid::transform::{
    aut_gerbe, aut_partial_quotient, embeddings, enumerate_aut, enumerate_aut_bruteforce,
    verify_square, TransformSetup, AUT_CAP,
};
use pbgroupoid::two_group::{
    check_crossed_module, crossed_module_from_two_group, crossed_module_isomorphism,
    two_group_from_crossed_module, GroupGroupoid,
};

struct Criterion {
    name: &'static str,
    budget: Duration,
    started: Instant,
}

impl Criterion {
    fn start(name: &'static str, budget_secs: u64) -> Self {
        Criterion {
            name,
            budget: Duration::from_secs(budget_secs),
            started: Instant::now(),
        }
    }

    fn finish(self) {
        let elapsed = self.started.elapsed();
        println!(
            "criterion {}: PASS ({} ms, budget {} ms)",
            self.name,
            elapsed.as_millis(),
            self.budget.as_millis()
        );
        assert!(
            elapsed < self.budget,
            "criterion {} exceeded its runtime budget: {:?} > {:?}",
            self.name,
            elapsed,
            self.budget
        );
    }
}

fn valid_crossed_modules() -> Vec<pbgroupoid::two_group::CrossedModule> {
    catalog::entries()
        .unwrap()
        .into_iter()
        .filter(|e| e.expect_valid)
        .filter_map(|e| match e.entity {
            Entity::CrossedModule(cm) => Some(cm),
            _ => None,
        })
        .collect()
}

fn base_trivial_catalog() -> Vec<pbgroupoid::gerbe::BaseTrivialPb> {
    catalog::entries()
        .unwrap()
        .into_iter()
        .filter_map(|e| match e.entity {
            Entity::Pb(pb) => pb.base_trivial(),
            _ => None,
        })
        .collect()
}

#[test]
fn criterion_1_crossed_module_suite() {
    let c = Criterion::start("1 (crossed modules)", 1);

    // named positives
    assert!(check_crossed_module(&catalog::a3_in_s3()).is_valid());
    assert!(check_crossed_module(&catalog::abelian_d_trivial()).is_valid());
    // named counterexample fails with a witness
    let bad = check_crossed_module(&catalog::s3_counterexample());
    assert!(!bad.is_valid());
    assert!(bad.first_witness().is_some(), "witness required");

    // round trip on every valid catalog crossed module
    for cm in valid_crossed_modules() {
        let tg = two_group_from_crossed_module(&cm).unwrap();
        let back = crossed_module_from_two_group(&GroupGroupoid::from_two_group(&tg)).unwrap();
        assert!(
            crossed_module_isomorphism(&cm, &back).unwrap().is_some(),
            "round trip failed for {}",
            cm.name
        );
    }

    c.finish();
}

#[test]
fn criterion_2_functor_suite() {
    let c = Criterion::start("2 (Φ/Ψ/Ξ)", 10);

    // Φ on the PBgauge0 family, exhaustive gerbe check
    for (go, ms) in [(2usize, 1usize), (2, 2), (3, 1), (3, 2)] {
        let entry = pbgauge0(go, ms).unwrap();
        let pi = entry.fiber_surjection.as_ref().unwrap();
        let gerbe = functor_phi(&entry.pb, pi).unwrap();
        let report = check_bundle_gerbe(&gerbe);
        assert!(report.is_valid(), "Φ(Z{go}, {ms}) gerbe check: {report}");
    }

    // Ψ∘Ξ ≅ id and Ξ∘Ψ ≅ id on every base trivial catalog instance
    for bt in base_trivial_catalog() {
        assert!(check_base_trivial(&bt).is_valid());
        let r1 = verify_psi_xi_roundtrip(&bt).unwrap();
        assert!(r1.is_valid(), "Ψ∘Ξ: {r1}");
        let gerbe = functor_xi(&bt).unwrap();
        let r2 = verify_xi_psi_roundtrip(&gerbe).unwrap();
        assert!(r2.is_valid(), "Ξ∘Ψ: {r2}");
    }

    // Prop bg.pq, items 1 and 2, by explicit isomorphism
    for (go, ms) in [(2usize, 2usize), (3, 2)] {
        let entry = pbgauge0(go, ms).unwrap();
        let pi = entry.fiber_surjection.as_ref().unwrap();
        let item1 = verify_bg_pq_item1(&entry.pb, pi).unwrap();
        assert!(item1.is_valid(), "item 1 (Z{go}, {ms}): {item1}");
        let bt = entry.base_trivial().unwrap();
        let item2 = verify_bg_pq_item2(&bt).unwrap();
        assert!(item2.is_valid(), "item 2 (Z{go}, {ms}): {item2}");
    }

    c.finish();
}

#[test]
fn criterion_3_nerve_suite() {
    let c = Criterion::start("3 (nerves)", 30);
    const K: usize = 3;

    // simplicial identities for all catalog nerves at K = 3
    let mut checked = 0;
    for entry in catalog::entries().unwrap() {
        let groupoid: Option<Arc<FiniteGroupoid>> = match &entry.entity {
            Entity::Groupoid(g) => Some(g.clone()),
            Entity::Pb(p) => Some(p.pb.action.target.clone()),
            Entity::Gerbe(g) => Some(g.carrier.clone()),
            _ => None,
        };
        if let Some(g) = groupoid {
            let (_, s) = nerve(g, K).unwrap();
            assert!(check_simplicial(&s).is_valid(), "{}", entry.name);
            checked += 1;
        }
    }
    assert!(checked >= 5, "catalog nerves exercised");

    // the three 2-group nerve models for every valid catalog crossed module
    for cm in valid_crossed_modules() {
        let tg = two_group_from_crossed_module(&cm).unwrap();
        let models = two_group_nerve_models(&tg, K).unwrap();
        assert!(models.report.is_valid(), "{}: {}", cm.name, models.report);
        assert!(check_simplicial(&models.b).is_valid());
        assert!(check_simplicial(&models.c).is_valid());
    }

    // levelwise principal bundles and the partial quotient nerve on the
    // PBgauge0 family
    for (go, ms) in [(2usize, 1usize), (2, 2), (3, 1), (3, 2)] {
        let entry = pbgauge0(go, ms).unwrap();
        let npb = nerve_pb(&entry.pb, K).unwrap();
        assert!(npb.report.is_valid(), "(Z{go},{ms}): {}", npb.report);
        for lb in &npb.levels {
            assert_eq!(
                lb.carrier.len(),
                lb.group.order() * lb.m_size,
                "|P^(k)| = |G^(k)|·|M^(k)| at k = {} (Z{go},{ms})",
                lb.k
            );
        }
        let pqn = partial_quotient_nerve(&entry.pb, K).unwrap();
        assert!(pqn.report.is_valid(), "(Z{go},{ms}): {}", pqn.report);
    }

    c.finish();
}

#[test]
fn criterion_4_transformation_suite() {
    let c = Criterion::start("4 (inner transformations)", 60);

    let entry = pbgauge0(2, 2).unwrap();
    let setup = TransformSetup::new(&entry.pb, 2).unwrap();

    // |Aut(P)| = 4, double enumerated
    let fast = enumerate_aut(&setup, 0, AUT_CAP).unwrap();
    let brute = enumerate_aut_bruteforce(&setup, 0, 1 << 20).unwrap();
    assert_eq!(fast.len(), 4);
    assert_eq!(brute.len(), 4);
    let mut a: Vec<_> = fast.iter().map(|x| x.perm.clone()).collect();
    let mut b: Vec<_> = brute.iter().map(|x| x.perm.clone()).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b, "double enumeration agreement");

    // the diagram commutes for k ≤ 2
    for k in 0..=2 {
        let square = verify_square(&setup, k).unwrap();
        assert!(square.is_valid(), "square k = {k}: {square}");
    }

    // |Aut(P^(k)/_G)| = |C_{H^k⋊G}(P^(k), H^k)| by independent enumerations
    for (k, expect) in [(0usize, 1usize), (1, 16), (2, 65536)] {
        let apq = aut_partial_quotient(&setup, k).unwrap();
        assert!(apq.report.is_valid(), "k = {k}: {}", apq.report);
        assert_eq!(apq.order, expect, "k = {k}");
        assert_eq!(apq.equivariant_count, expect, "k = {k}");
    }

    // gerbe automorphism counts match through the partial quotient
    let bt = entry.base_trivial().unwrap();
    for k in 0..=2 {
        let ag = aut_gerbe(&setup, &bt, k).unwrap();
        assert!(ag.report.is_valid(), "gerbe k = {k}: {}", ag.report);
    }

    // embedding chain injective to K = 2
    let bundle = catalog::trivial_bundle(2, 2);
    let chain = embeddings(&setup, &bundle, 2).unwrap();
    assert!(chain.is_valid(), "{chain}");

    c.finish();
}

#[test]
fn criterion_5_morita_suite() {
    let c = Criterion::start("5 (Morita)", 10);

    // three-way agreement on every catalog surjection
    for entry in catalog::entries().unwrap() {
        let Entity::Surjection(pi) = &entry.entity else {
            continue;
        };
        let y2 = Arc::new(fiber_product_groupoid("Y2", pi).unwrap());
        let m = Arc::new(FiniteGroupoid::identity_groupoid("M", pi.cod.clone()));
        // weak
        let collapse = {
            let arr_map: Vec<usize> = (0..y2.arrow_count())
                .map(|a| m.unit[pi.map[y2.src[a]]])
                .collect();
            pbgroupoid::groupoid::GroupoidFunctor::new(
                y2.clone(),
                m.clone(),
                pi.map.clone(),
                arr_map,
            )
            .unwrap()
        };
        assert!(
            check_weak_equivalence(&collapse).is_weak_equivalence(),
            "{}",
            entry.name
        );
        // Morita via pullbacks
        let rho: Vec<usize> = (0..pi.dom.len()).collect();
        let verdict = check_morita_pullback(&y2, &m, &pi.dom, &rho, &pi.map).unwrap();
        assert!(verdict.is_equivalent(), "{}", entry.name);
        // bitorsor
        match bitorsor_exists(y2, m).unwrap() {
            BitorsorExistence::Yes(bit) => {
                assert!(check_bitorsor(&bit).is_valid(), "{}", entry.name)
            }
            _ => panic!("bitorsor must exist for {}", entry.name),
        }
    }

    // the fibration lemma on one passing and one failing instance
    {
        let y = vec!["a".to_string(), "b".to_string()];
        let p = Arc::new(FiniteGroupoid::pair_groupoid("P", y).unwrap());
        let pi1 = pbgroupoid::groupoid::GroupoidFunctor::identity(p.clone());
        let m = Arc::new(FiniteGroupoid::identity_groupoid("M", vec!["*".into()]));
        let phi = pbgroupoid::groupoid::GroupoidFunctor::new(
            p.clone(),
            m,
            vec![0, 0],
            vec![0; p.arrow_count()],
        )
        .unwrap();
        let lemma = lemma_weakequiv_check(&pi1, &phi).unwrap();
        assert!(lemma.phi_is_we && lemma.inclusion_is_we);
        assert!(lemma.report.is_valid());
    }
    {
        let y = Arc::new(FiniteGroupoid::identity_groupoid(
            "Y",
            vec!["y1".into(), "y2".into()],
        ));
        let pi1 = pbgroupoid::groupoid::GroupoidFunctor::identity(y.clone());
        let m = Arc::new(FiniteGroupoid::identity_groupoid("M", vec!["*".into()]));
        let phi =
            pbgroupoid::groupoid::GroupoidFunctor::new(y, m, vec![0, 0], vec![0, 0]).unwrap();
        let lemma = lemma_weakequiv_check(&pi1, &phi).unwrap();
        assert!(!lemma.phi_is_we && !lemma.inclusion_is_we);
        assert!(lemma.report.is_valid(), "biconditional must still hold");
    }

    // interpret_principal_2bundle on PBgauge0-derived data
    {
        use pbgroupoid::action::{PrincipalBundle, TwoGroupAction};
        use pbgroupoid::group::GroupAction;
        use pbgroupoid::two_group::CrossedModule;
        use std::collections::BTreeMap;

        let g = Arc::new(FiniteGroup::cyclic(2));
        let bundle =
            PrincipalBundle::trivial(g.clone(), vec!["m0".into(), "m1".into()]);
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::adjoint(g.clone())).unwrap(),
        );
        let pi = Surjection::new(
            bundle.action.carrier.clone(),
            bundle.base.clone(),
            bundle.proj.clone(),
        )
        .unwrap();
        let target = Arc::new(fiber_product_groupoid("P×_MP", &pi).unwrap());
        let mut arrow_of = BTreeMap::new();
        for a in 0..target.arrow_count() {
            arrow_of.insert((target.tgt[a], target.src[a]), a);
        }
        let mut act_rows = Vec::new();
        for h in 0..2usize {
            for gg in 0..2usize {
                let hg = g.mul(h, gg);
                let row: Vec<usize> = (0..target.arrow_count())
                    .map(|a| {
                        let (p, q) = (target.tgt[a], target.src[a]);
                        arrow_of[&(bundle.action.apply(hg, p), bundle.action.apply(gg, q))]
                    })
                    .collect();
                act_rows.push(row);
            }
        }
        let act_arr =
            GroupAction::new(tg.arrows_group.clone(), target.arrows.clone(), act_rows).unwrap();
        let act_obj = GroupAction::new(
            tg.base_group.clone(),
            bundle.action.carrier.clone(),
            bundle.action.act.clone(),
        )
        .unwrap();
        let action = TwoGroupAction::new(tg, target, act_arr, act_obj).unwrap();
        let reading =
            interpret_principal_2bundle(&action, &bundle.proj, bundle.base.clone()).unwrap();
        assert!(reading.morita_equivalent);
        assert!(reading.report.is_valid(), "{}", reading.report);
    }

    c.finish();
}

#[test]
fn criterion_6_plumbing_round_trip() {
    let c = Criterion::start("6 (plumbing: canonical round trip)", 10);

    // parse ∘ emit ∘ parse identity with byte-stable canonical form, over
    // the whole catalog
    for entry in catalog::entries().unwrap() {
        let doc1 = entity_to_document(&entry.name, &entry.entity);
        let text1 = emit(&doc1);
        let parsed = parse_document(&text1, "emitted").unwrap();
        let back = parsed.get(&entry.name).unwrap();
        let text2 = emit(&entity_to_document(&entry.name, back));
        assert_eq!(text1, text2, "byte-stable round trip for {}", entry.name);
    }

    // functor outputs re-validate through the parser (format closure)
    let entry = pbgauge0(2, 2).unwrap();
    let pi = entry.fiber_surjection.as_ref().unwrap();
    let gerbe = functor_phi(&entry.pb, pi).unwrap();
    let text = emit(&entity_to_document("phi-out", &Entity::Gerbe(Box::new(gerbe))));
    let parsed = parse_document(&text, "phi-out").unwrap();
    match parsed.get("phi-out").unwrap() {
        Entity::Gerbe(g) => assert!(check_bundle_gerbe(g).is_valid()),
        _ => panic!("expected a gerbe stanza"),
    }

    c.finish();
}

// The gauge-groupoid reading of the partial quotient (the pair-groupoid
// specialisation behind the transformation suite) stays consistent with
// the quotient machinery.
#[test]
fn gauge_groupoid_consistency() {
    for (go, ms) in [(2usize, 2usize), (3, 2)] {
        let entry = pbgauge0(go, ms).unwrap();
        let pq = partial_quotient(&entry.pb).unwrap();
        assert!(pq.report.is_valid());
        assert!(check_pb_groupoid(&pq.pb).is_valid());
        assert_eq!(pq.pb.base.arrow_count(), ms * ms * go);
    }
}
