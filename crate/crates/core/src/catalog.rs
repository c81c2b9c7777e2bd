//! The built-in instance catalog: the groups, crossed modules, PBgauge0
//! family and trivial gerbe every suite runs against.

use std::sync::Arc;

use crate::action::{pb_groupoid_from_principal_bundle, PrincipalBundle};
use crate::error::Result;
use crate::gerbe::trivial_gerbe;
use crate::group::FiniteGroup;
use crate::groupoid::Surjection;
use crate::io::{Entity, PbEntry};
use crate::two_group::{two_group_from_crossed_module, CrossedModule};

/// A named catalog entry.
pub struct CatalogEntry {
    pub name: String,
    pub entity: Entity,
    /// False for deliberate counterexamples that must fail their checker.
    pub expect_valid: bool,
}

/// The PBgauge0 instance for the cyclic group of order `g_order` over a
/// base of `m_size` points: the trivial bundle's pair-groupoid PB
/// groupoid, with its fiber-product presentation (π: M → {*}) and the
/// canonical trivialisation.
pub fn pbgauge0(g_order: usize, m_size: usize) -> Result<PbEntry> {
    let g = Arc::new(FiniteGroup::cyclic(g_order));
    let base: Vec<String> = (0..m_size).map(|i| format!("m{i}")).collect();
    let bundle = PrincipalBundle::trivial(g, base);
    let pb = pb_groupoid_from_principal_bundle(&bundle)?;
    let fiber_surjection = Some(Surjection::new(
        pb.base.objects.clone(),
        vec!["*".into()],
        vec![0; pb.base.object_count()],
    )?);
    // P = G×M with point (g,m) at index g·|M| + m
    let np = pb.target().object_count();
    let trivialization = Some((
        (0..np).map(|i| i / m_size).collect(),
        (0..np).map(|i| i % m_size).collect(),
    ));
    Ok(PbEntry {
        pb,
        fiber_surjection,
        trivialization,
    })
}

/// The trivial `G`-bundle over `m_size` points.
pub fn trivial_bundle(g_order: usize, m_size: usize) -> PrincipalBundle {
    let g = Arc::new(FiniteGroup::cyclic(g_order));
    PrincipalBundle::trivial(g, (0..m_size).map(|i| format!("m{i}")).collect())
}

/// The A3 ◁ S3 crossed module (conjugation and inclusion).
pub fn a3_in_s3() -> CrossedModule {
    let s3 = Arc::new(FiniteGroup::symmetric_3());
    let (a3, member) = FiniteGroup::alternating_3();
    CrossedModule::normal_subgroup("A3◁S3", Arc::new(a3), s3, member).expect("A3 is normal")
}

/// The abelian crossed module with trivial boundary: H = Z3, G = Z2
/// acting by inversion, d ≡ e.
pub fn abelian_d_trivial() -> CrossedModule {
    let h = Arc::new(FiniteGroup::cyclic(3));
    let g = Arc::new(FiniteGroup::cyclic(2));
    let action = crate::group::GroupAction::new(
        g.clone(),
        h.elements.clone(),
        vec![vec![0, 1, 2], vec![0, 2, 1]],
    )
    .expect("inversion action");
    let d = crate::group::GroupHom::trivial(h.clone(), g.clone());
    CrossedModule::new("Z3↦e,Z2", h, g, action, d).expect("shapes")
}

/// The deliberate counterexample: S3 over the trivial group with trivial
/// data fails the Peiffer axiom at any non-commuting pair.
pub fn s3_counterexample() -> CrossedModule {
    let h = Arc::new(FiniteGroup::symmetric_3());
    let g = Arc::new(FiniteGroup::trivial());
    let action = crate::group::GroupAction::trivial(g.clone(), h.elements.clone());
    let d = crate::group::GroupHom::trivial(h.clone(), g.clone());
    CrossedModule::new("S3-counterexample", h, g, action, d).expect("shapes")
}

/// Every built-in instance, in deterministic order.
pub fn entries() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let mut push = |name: &str, entity: Entity, expect_valid: bool| {
        out.push(CatalogEntry {
            name: name.to_string(),
            entity,
            expect_valid,
        });
    };

    push("1", Entity::Group(Arc::new(FiniteGroup::trivial())), true);
    push("Z2", Entity::Group(Arc::new(FiniteGroup::cyclic(2))), true);
    push("Z3", Entity::Group(Arc::new(FiniteGroup::cyclic(3))), true);
    push("Z4", Entity::Group(Arc::new(FiniteGroup::cyclic(4))), true);
    push(
        "S3",
        Entity::Group(Arc::new(FiniteGroup::symmetric_3())),
        true,
    );
    let (a3, _) = FiniteGroup::alternating_3();
    push("A3", Entity::Group(Arc::new(a3)), true);

    push("cm-a3-s3", Entity::CrossedModule(a3_in_s3()), true);
    push(
        "cm-abelian-d-trivial",
        Entity::CrossedModule(abelian_d_trivial()),
        true,
    );
    push(
        "cm-s3-counterexample",
        Entity::CrossedModule(s3_counterexample()),
        false,
    );
    push(
        "cm-adjoint-z2",
        Entity::CrossedModule(CrossedModule::adjoint(Arc::new(FiniteGroup::cyclic(2)))),
        true,
    );
    push(
        "cm-adjoint-z3",
        Entity::CrossedModule(CrossedModule::adjoint(Arc::new(FiniteGroup::cyclic(3)))),
        true,
    );

    for (go, ms) in [(2usize, 1usize), (2, 2), (3, 1), (3, 2)] {
        push(
            &format!("bundle-z{go}-m{ms}"),
            Entity::Bundle(trivial_bundle(go, ms)),
            true,
        );
        push(
            &format!("pbgauge0-z{go}-m{ms}"),
            Entity::Pb(Box::new(pbgauge0(go, ms)?)),
            true,
        );
    }

    // trivial gerbe with structure 2-group Z2⋊Z2 over a 2-point pair base
    let tg = Arc::new(two_group_from_crossed_module(&CrossedModule::adjoint(
        Arc::new(FiniteGroup::cyclic(2)),
    ))?);
    push(
        "trivial-gerbe-z2",
        Entity::Gerbe(Box::new(trivial_gerbe(tg, vec!["a".into(), "b".into()])?)),
        true,
    );

    // catalog surjections for the Morita suite
    push(
        "pi-4-to-2",
        Entity::Surjection(Surjection::new(
            vec!["0a".into(), "1a".into(), "0b".into(), "1b".into()],
            vec!["a".into(), "b".into()],
            vec![0, 0, 1, 1],
        )?),
        true,
    );
    push(
        "pi-3-to-1",
        Entity::Surjection(Surjection::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec!["*".into()],
            vec![0, 0, 0],
        )?),
        true,
    );
    push(
        "pi-bijective",
        Entity::Surjection(Surjection::new(
            vec!["a".into(), "b".into()],
            vec!["a".into(), "b".into()],
            vec![0, 1],
        )?),
        true,
    );

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::check_group;
    use crate::two_group::check_crossed_module;

    #[test]
    fn catalog_groups_valid_with_unique_inverses() {
        for entry in entries().unwrap() {
            if let Entity::Group(g) = &entry.entity {
                assert!(check_group(g).is_valid(), "{}", entry.name);
                // inv is the unique inverse table
                for a in 0..g.order() {
                    let inverses: Vec<usize> = (0..g.order())
                        .filter(|&b| g.mul(a, b) == g.unit && g.mul(b, a) == g.unit)
                        .collect();
                    assert_eq!(inverses, vec![g.inv(a)], "{} elem {a}", entry.name);
                }
            }
        }
    }

    #[test]
    fn catalog_crossed_modules_match_expectations() {
        for entry in entries().unwrap() {
            if let Entity::CrossedModule(cm) = &entry.entity {
                assert_eq!(
                    check_crossed_module(cm).is_valid(),
                    entry.expect_valid,
                    "{}",
                    entry.name
                );
            }
        }
    }

    #[test]
    fn catalog_pb_groupoids_valid() {
        for entry in entries().unwrap() {
            if let Entity::Pb(pb) = &entry.entity {
                assert!(
                    crate::action::check_pb_groupoid(&pb.pb).is_valid(),
                    "{}",
                    entry.name
                );
                if let Some(bt) = pb.base_trivial() {
                    assert!(
                        crate::gerbe::check_base_trivial(&bt).is_valid(),
                        "{}",
                        entry.name
                    );
                }
            }
        }
    }
}
