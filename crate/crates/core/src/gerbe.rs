//! Bundle gerbes over groupoids and the Φ, Ψ, Ξ correspondences.
//!
//! A bundle gerbe over `Y^(1) ⇉ Y` is a groupoid `B ⇉ Y` with composition
//! `∘_μ`, a projection `Π: B → Y^(1)` over the identity of `Y` that is a
//! principal `(H⋊G ⇉ G)`-bundle for a groupoid action `⋆` with anchor
//! `ρ: B → G`, such that `∘_μ` is `(H⋊G)`-equivariant.
//!
//! Φ sends a PB groupoid over a fiber product groupoid to a gerbe on the
//! carrier `G×P^(1)`; Ψ sends a gerbe to a base trivial PB groupoid on
//! `G×B`; Ξ cuts the kernel of `s_G` out of a base trivial PB groupoid.
//! Ψ and Ξ are mutually inverse, witnessed here by explicit isomorphisms.
//!
//! One convention in Ψ is derived rather than copied: the target of
//! `(k,b)` is `(k·ρ(b)⁻¹, t(Π b))`. The variant with `k·ρ(b)` is
//! inconsistent with the inverse formula `(k·ρ(b)⁻¹, i_B(b))` and breaks
//! both round trips whenever some `ρ(b)` is not an involution; the two
//! agree on carriers where every anchor value squares to the unit, and
//! construction reports say which case applies.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::action::{
    check_pb_groupoid, check_two_group_action, partial_quotient, ActionSide, GroupoidAction,
    PbGroupoid, TwoGroupAction,
};
use crate::error::{Error, Result};
use crate::group::GroupAction;
use crate::groupoid::{
    check_functor, check_groupoid, pullback_groupoid, FiniteGroupoid, GroupoidFunctor, Surjection,
};
use crate::report::{LawReport, ValidationReport};
use crate::two_group::TwoGroup;

/// A bundle gerbe over the groupoid `base = Y^(1) ⇉ Y`.
#[derive(Debug, Clone)]
pub struct BundleGerbe {
    pub two_group: Arc<TwoGroup>,
    /// `B ⇉ Y` with the gerbe product as its composition.
    pub carrier: Arc<FiniteGroupoid>,
    /// `Y^(1) ⇉ Y`; same object set as `carrier`.
    pub base: Arc<FiniteGroupoid>,
    /// `Π: B → Y^(1)`, an identity-on-objects functor.
    pub pi: GroupoidFunctor,
    /// Anchor `ρ: B → G` (indices into the 2-group base).
    pub rho: Vec<usize>,
    /// The `(H⋊G ⇉ G)` groupoid action on the arrows of `carrier`.
    pub star: GroupoidAction,
    /// When the base is a fiber product groupoid, the surjection that
    /// presents it; enables the extra orbit-space condition.
    pub fiber_surjection: Option<Surjection>,
}

impl BundleGerbe {
    #[inline]
    pub fn rho_of(&self, b: usize) -> usize {
        self.rho[b]
    }

    /// `(h, ρ(b)) ⋆ b`.
    pub fn star_h(&self, h: usize, b: usize) -> Result<usize> {
        let gamma = self.two_group.pair(h, self.rho[b]);
        self.star.apply(gamma, b)
    }
}

/// Empty report iff all gerbe axioms hold: component validity, projection
/// over the identity, principality of `Π`, anchor multiplicativity, and
/// exhaustive `(H⋊G)`-equivariance of `∘_μ`. For fiber-product bases the
/// orbit-space condition is verified too.
pub fn check_bundle_gerbe(b: &BundleGerbe) -> ValidationReport {
    let mut report = ValidationReport::new(format!("bundle gerbe {}", b.carrier.name));
    report.absorb("carrier", check_groupoid(&b.carrier));
    report.absorb("base", check_groupoid(&b.base));
    report.absorb("Π", check_functor(&b.pi));
    report.absorb("⋆", crate::action::check_groupoid_action(&b.star));

    let over_id = report.law("Π over the identity of Y");
    if b.carrier.object_count() != b.base.object_count() {
        over_id.record(|| "carrier and base have different object sets".into());
    } else {
        for (y, &img) in b.pi.obj_map.iter().enumerate() {
            if img != y {
                over_id.record(|| b.carrier.objects[y].clone());
            }
        }
    }

    let anchors = report.law("⋆ anchored by ρ");
    if b.star.anchor != b.rho {
        anchors.record(|| "star anchor table differs from ρ".into());
    }

    let principal = report.law("Π is a principal (H⋊G)-bundle");
    // invariance
    for (&(gamma, x), &img) in &b.star.star {
        if b.pi.arr_map[img] != b.pi.arr_map[x] {
            principal.record(|| {
                format!(
                    "Π not ⋆-invariant at γ = {}, b = {}",
                    b.two_group.groupoid.arrows[gamma], b.carrier.arrows[x]
                )
            });
        }
    }
    // freeness
    if let Some((gamma, x)) = b.star.free_violation() {
        principal.record(|| {
            format!(
                "⋆ not free: {} fixes {}",
                b.two_group.groupoid.arrows[gamma], b.carrier.arrows[x]
            )
        });
    }
    // orbits ↔ fibers, bijective onto the base arrows
    let orbits = b.star.orbits();
    if orbits.len() != b.base.arrow_count() {
        principal.record(|| {
            format!(
                "{} ⋆-orbits vs {} base arrows",
                orbits.len(),
                b.base.arrow_count()
            )
        });
    } else {
        let mut seen = vec![false; b.base.arrow_count()];
        for orbit in &orbits {
            let img = b.pi.arr_map[orbit[0]];
            if orbit.iter().any(|&x| b.pi.arr_map[x] != img) || seen[img] {
                principal.record(|| {
                    format!("orbit of {} is not a Π-fiber", b.carrier.arrows[orbit[0]])
                });
            }
            seen[img] = true;
        }
    }

    let rho_mult = report.law("ρ(b2 ∘_μ b1) = ρ(b2)·ρ(b1)");
    let g_grp = &b.two_group.base_group;
    for (&(b2, b1), &c) in &b.carrier.comp {
        if b.rho[c] != g_grp.mul(b.rho[b2], b.rho[b1]) {
            rho_mult.record(|| {
                format!("b2 = {}, b1 = {}", b.carrier.arrows[b2], b.carrier.arrows[b1])
            });
        }
    }

    let mut equiv = LawReport::new("∘_μ is (H⋊G)-equivariant");
    let nh = b.two_group.cm.h.order();
    let pairs: Vec<(usize, usize, usize)> = b
        .carrier
        .comp
        .iter()
        .map(|(&(x, y), &c)| (x, y, c))
        .collect();
    for &(b2, b1, c) in &pairs {
        for h2 in 0..nh {
            for h1 in 0..nh {
                let lhs2 = match b.star_h(h2, b2) {
                    Ok(v) => v,
                    Err(_) => {
                        equiv.record(|| "⋆ undefined on anchored pair".into());
                        continue;
                    }
                };
                let lhs1 = match b.star_h(h1, b1) {
                    Ok(v) => v,
                    Err(_) => {
                        equiv.record(|| "⋆ undefined on anchored pair".into());
                        continue;
                    }
                };
                let lhs = match b.carrier.comp.get(&(lhs2, lhs1)) {
                    Some(&v) => v,
                    None => {
                        equiv.record(|| {
                            format!(
                                "images not composable: h2 = {h2}, h1 = {h1}, b2 = {}, b1 = {}",
                                b.carrier.arrows[b2], b.carrier.arrows[b1]
                            )
                        });
                        continue;
                    }
                };
                // (h2,ρ2)·(h1,ρ1) in the 2-group, then ⋆ on b2∘b1
                let u2 = b.two_group.pair(h2, b.rho[b2]);
                let u1 = b.two_group.pair(h1, b.rho[b1]);
                let prod = b.two_group.arrows_group.mul(u2, u1);
                let rhs = match b.star.apply(prod, c) {
                    Ok(v) => v,
                    Err(_) => {
                        equiv.record(|| "product ⋆ undefined on composite".into());
                        continue;
                    }
                };
                if lhs != rhs {
                    equiv.record(|| {
                        format!(
                            "h2 = {h2}, h1 = {h1}, b2 = {}, b1 = {}",
                            b.carrier.arrows[b2], b.carrier.arrows[b1]
                        )
                    });
                }
            }
        }
    }
    report.push_law(equiv);

    if let Some(fp) = &b.fiber_surjection {
        let orbit_cond = report.law("orbit space Y/B ≅ M through π");
        let ny = b.carrier.object_count();
        for y1 in 0..ny {
            for y2 in 0..ny {
                let connected = (0..b.carrier.arrow_count())
                    .any(|x| b.carrier.src[x] == y1 && b.carrier.tgt[x] == y2);
                let same_fiber = fp.map[y1] == fp.map[y2];
                if connected != same_fiber {
                    orbit_cond.record(|| {
                        format!(
                            "y1 = {}, y2 = {}: connected = {connected}, π-equal = {same_fiber}",
                            b.carrier.objects[y1], b.carrier.objects[y2]
                        )
                    });
                }
            }
        }
    }

    report
}

/// A base trivial PB groupoid: the object level is identified with `G×Y`
/// so that the object action becomes left translation on the `G` factor.
#[derive(Debug, Clone)]
pub struct BaseTrivialPb {
    pub pb: PbGroupoid,
    /// `p ↦ pr_G(p)` under the trivialisation.
    pub g_of: Vec<usize>,
    /// `p ↦ pr_Y(p)`; must agree with the projection to base objects.
    pub y_of: Vec<usize>,
}

impl BaseTrivialPb {
    /// `s_G = pr_G ∘ s` on arrows.
    #[inline]
    pub fn s_g(&self, xi: usize) -> usize {
        self.g_of[self.pb.target().src[xi]]
    }

    /// `pr_G ∘ t` on arrows.
    #[inline]
    pub fn t_g(&self, xi: usize) -> usize {
        self.g_of[self.pb.target().tgt[xi]]
    }
}

/// Empty report iff the trivialisation is a bijection onto `G×Y`
/// intertwining the object action with left translation, compatible with
/// the projection, on top of the PB groupoid laws.
pub fn check_base_trivial(bt: &BaseTrivialPb) -> ValidationReport {
    let mut report = ValidationReport::new("base trivial PB groupoid");
    report.absorb("pb", check_pb_groupoid(&bt.pb));
    let p = &bt.pb;
    let g_grp = &p.two_group().base_group;
    let np = p.target().object_count();

    let shape = report.law("trivialisation bijective onto G×Y");
    if np != g_grp.order() * p.base.object_count() {
        shape.record(|| format!("|P| = {np} ≠ |G|·|Y|"));
    } else {
        let mut seen = vec![false; np];
        for pt in 0..np {
            let code = bt.g_of[pt] * p.base.object_count() + bt.y_of[pt];
            if seen[code] {
                shape.record(|| p.target().objects[pt].clone());
            }
            seen[code] = true;
        }
    }

    let intertwine = report.law("triv intertwines G-action with left translation");
    for g in 0..g_grp.order() {
        for pt in 0..np {
            let moved = p.action.obj(g, pt);
            if bt.g_of[moved] != g_grp.mul(g, bt.g_of[pt]) || bt.y_of[moved] != bt.y_of[pt] {
                intertwine.record(|| format!("g = {}, p = {}", g_grp.label(g), p.target().objects[pt]));
            }
        }
    }

    let proj_compat = report.law("pr_Y agrees with the projection to Y");
    for pt in 0..np {
        if p.proj.obj_map[pt] != bt.y_of[pt] {
            proj_compat.record(|| p.target().objects[pt].clone());
        }
    }

    report
}

/// Φ: from a PB groupoid over the fiber product groupoid of `π: Y → M`
/// to a bundle gerbe on `G×P^(1)` over `P ×_M P`.
///
/// Structure maps, in the quoted conventions:
/// `Π(g,φ) = (g·t(φ), s(φ))`, `ρ(g,φ) = g`,
/// `(h,g)⋆(g,φ) = (d(h)g, (C_{g⁻¹}h⁻¹, e)·φ)`,
/// `(g2,φ2)∘_μ(g1,φ1) = (g2·g1, ((e,g1⁻¹)·φ2)∘φ1)`.
pub fn functor_phi(p: &PbGroupoid, pi_y: &Surjection) -> Result<BundleGerbe> {
    // the base must be the fiber product groupoid of pi_y
    let base = &p.base;
    if pi_y.dom.len() != base.object_count() {
        return Err(Error::BaseNotFiberProduct(format!(
            "π domain has {} points, base has {} objects",
            pi_y.dom.len(),
            base.object_count()
        )));
    }
    for y1 in 0..base.object_count() {
        for y2 in 0..base.object_count() {
            let homs = base.hom_set(y1, y2).len();
            let expected = usize::from(pi_y.map[y1] == pi_y.map[y2]);
            if homs != expected {
                return Err(Error::BaseNotFiberProduct(format!(
                    "hom({},{}) has {homs} arrows, fiber product needs {expected}",
                    base.objects[y1], base.objects[y2]
                )));
            }
        }
    }

    let tg = p.two_group().clone();
    let target = p.target().clone();
    let g_grp = &tg.base_group;
    let ng = g_grp.order();
    let narr = target.arrow_count();
    let act = &p.action;

    // gerbe base: fiber product groupoid of π∘Q : P → M
    let pq_map: Vec<usize> = (0..target.object_count())
        .map(|pt| pi_y.map[p.proj.obj_map[pt]])
        .collect();
    let pq = Surjection::new(target.objects.clone(), pi_y.cod.clone(), pq_map)?;
    let gerbe_base = Arc::new(fiber_product_named(
        format!("{}×_M{}", target.name, target.name),
        &pq,
    )?);
    // base arrow lookup by (tgt point, src point)
    let mut base_arrow = BTreeMap::new();
    for a in 0..gerbe_base.arrow_count() {
        base_arrow.insert((gerbe_base.tgt[a], gerbe_base.src[a]), a);
    }

    // carrier arrows (g, φ) at index g·|P^(1)| + φ
    let idx = |g: usize, phi: usize| g * narr + phi;
    let mut arrows = Vec::with_capacity(ng * narr);
    let mut src = Vec::with_capacity(ng * narr);
    let mut tgt = Vec::with_capacity(ng * narr);
    for g in 0..ng {
        for phi in 0..narr {
            arrows.push(format!("({},{})", g_grp.label(g), target.arrows[phi]));
            src.push(target.src[phi]);
            tgt.push(act.obj(g, target.tgt[phi]));
        }
    }
    let e_h = tg.cm.h.unit;
    let mut comp = BTreeMap::new();
    for g2 in 0..ng {
        for phi2 in 0..narr {
            for g1 in 0..ng {
                for phi1 in 0..narr {
                    // composable: s(φ2) = g1·t(φ1)
                    if target.src[phi2] != act.obj(g1, target.tgt[phi1]) {
                        continue;
                    }
                    let shifted = act.arr(tg.pair(e_h, g_grp.inv(g1)), phi2);
                    let inner = target.compose(shifted, phi1)?;
                    comp.insert(
                        (idx(g2, phi2), idx(g1, phi1)),
                        idx(g_grp.mul(g2, g1), inner),
                    );
                }
            }
        }
    }
    let unit: Vec<usize> = (0..target.object_count())
        .map(|pt| idx(g_grp.unit, target.unit[pt]))
        .collect();
    let mut inv = Vec::with_capacity(ng * narr);
    for g in 0..ng {
        for phi in 0..narr {
            let back = act.arr(tg.pair(e_h, g), target.inv[phi]);
            inv.push(idx(g_grp.inv(g), back));
        }
    }
    let carrier = Arc::new(FiniteGroupoid::from_parts(
        format!("Φ({})", target.name),
        target.objects.clone(),
        arrows,
        src,
        tgt,
        comp,
        unit,
        inv,
    )?);

    // Π(g,φ) = (g·t(φ), s(φ))
    let mut pi_arr = Vec::with_capacity(ng * narr);
    for g in 0..ng {
        for phi in 0..narr {
            let key = (act.obj(g, target.tgt[phi]), target.src[phi]);
            let a = *base_arrow
                .get(&key)
                .ok_or_else(|| Error::InvalidGerbe("Π lands outside P×_M P".into()))?;
            pi_arr.push(a);
        }
    }
    let pi = GroupoidFunctor::new(
        carrier.clone(),
        gerbe_base.clone(),
        (0..target.object_count()).collect(),
        pi_arr,
    )?;

    let rho: Vec<usize> = (0..ng * narr).map(|i| i / narr).collect();

    // ⋆: (h,g)⋆(g,φ) = (d(h)·g, (C_{g⁻¹}h⁻¹, e)·φ)
    let mut star = BTreeMap::new();
    for h in 0..tg.cm.h.order() {
        for g in 0..ng {
            let gamma = tg.pair(h, g);
            for phi in 0..narr {
                let b = idx(g, phi);
                let tw = tg.cm.c(g_grp.inv(g), tg.cm.h.inv(h));
                let moved = act.arr(tg.pair(tw, g_grp.unit), phi);
                star.insert((gamma, b), idx(g_grp.mul(tg.cm.d_of(h), g), moved));
            }
        }
    }
    let star = GroupoidAction::new(
        ActionSide::Left,
        tg.groupoid.clone(),
        carrier.arrows.clone(),
        rho.clone(),
        star,
    )?;

    Ok(BundleGerbe {
        two_group: tg,
        carrier,
        base: gerbe_base,
        pi,
        rho,
        star,
        fiber_surjection: Some(pq),
    })
}

fn fiber_product_named(name: String, pi: &Surjection) -> Result<FiniteGroupoid> {
    crate::groupoid::fiber_product_groupoid(name, pi)
}

/// The result of Ψ: the base trivial PB groupoid plus a construction
/// report (formula provenance notes included).
pub struct PsiResult {
    pub bt: BaseTrivialPb,
    pub report: ValidationReport,
}

/// Ψ: from a bundle gerbe over `Y^(1)` to a base trivial PB groupoid on
/// arrows `G×B` over objects `G×Y`:
/// `s(k,b) = (k, s(Π b))`, `t(k,b) = (k·ρ(b)⁻¹, t(Π b))`,
/// `(k2,b2)∘(k1,b1) = (k1, b2 ∘_μ b1)`, units `(g, 1_B(y))`, inverses
/// `(k·ρ(b)⁻¹, i_B(b))`, and 2-group action
/// `(h,g)·(k,b) = (g·k, (C_{ρ(b)·(gk)⁻¹}h⁻¹, ρ(b)) ⋆ b)`.
pub fn functor_psi(gerbe: &BundleGerbe) -> Result<PsiResult> {
    let audit = check_bundle_gerbe(gerbe);
    if !audit.is_valid() {
        return Err(Error::InvalidGerbe(
            audit.first_witness().unwrap_or("invalid gerbe").to_string(),
        ));
    }
    let tg = gerbe.two_group.clone();
    let g_grp = &tg.base_group;
    let ng = g_grp.order();
    let b_gd = &gerbe.carrier;
    let nb = b_gd.arrow_count();
    let ny = b_gd.object_count();

    let obj_idx = |k: usize, y: usize| k * ny + y;
    let arr_idx = |k: usize, b: usize| k * nb + b;

    let mut objects = Vec::with_capacity(ng * ny);
    for k in 0..ng {
        for y in 0..ny {
            objects.push(format!("({},{})", g_grp.label(k), b_gd.objects[y]));
        }
    }
    let mut arrows = Vec::with_capacity(ng * nb);
    let mut src = Vec::with_capacity(ng * nb);
    let mut tgt = Vec::with_capacity(ng * nb);
    for k in 0..ng {
        for b in 0..nb {
            arrows.push(format!("({},{})", g_grp.label(k), b_gd.arrows[b]));
            src.push(obj_idx(k, b_gd.src[b]));
            tgt.push(obj_idx(g_grp.mul(k, g_grp.inv(gerbe.rho[b])), b_gd.tgt[b]));
        }
    }
    let mut comp = BTreeMap::new();
    for (&(b2, b1), &c) in &b_gd.comp {
        for k1 in 0..ng {
            let k2 = g_grp.mul(k1, g_grp.inv(gerbe.rho[b1]));
            comp.insert((arr_idx(k2, b2), arr_idx(k1, b1)), arr_idx(k1, c));
        }
    }
    let unit: Vec<usize> = (0..ng * ny)
        .map(|o| arr_idx(o / ny, b_gd.unit[o % ny]))
        .collect();
    let mut inv = Vec::with_capacity(ng * nb);
    for k in 0..ng {
        for b in 0..nb {
            inv.push(arr_idx(
                g_grp.mul(k, g_grp.inv(gerbe.rho[b])),
                b_gd.inv[b],
            ));
        }
    }
    let total = Arc::new(FiniteGroupoid::from_parts(
        format!("Ψ({})", b_gd.name),
        objects,
        arrows,
        src,
        tgt,
        comp,
        unit,
        inv,
    )?);

    // 2-group action
    let mut act_arr_rows = Vec::with_capacity(tg.arrow_count());
    for h in 0..tg.cm.h.order() {
        for g in 0..ng {
            let mut row = Vec::with_capacity(ng * nb);
            for k in 0..ng {
                for b in 0..nb {
                    let gk = g_grp.mul(g, k);
                    let tw = tg.cm.c(
                        g_grp.mul(gerbe.rho[b], g_grp.inv(gk)),
                        tg.cm.h.inv(h),
                    );
                    let gamma = tg.pair(tw, gerbe.rho[b]);
                    let moved = gerbe.star.apply(gamma, b)?;
                    row.push(arr_idx(gk, moved));
                }
            }
            act_arr_rows.push(row);
        }
    }
    let act_arr = GroupAction::new(tg.arrows_group.clone(), total.arrows.clone(), act_arr_rows)?;
    let act_obj_rows = (0..ng)
        .map(|g| {
            (0..ng * ny)
                .map(|o| obj_idx(g_grp.mul(g, o / ny), o % ny))
                .collect()
        })
        .collect();
    let act_obj = GroupAction::new(
        tg.base_group.clone(),
        total.objects.clone(),
        act_obj_rows,
    )?;
    let action = TwoGroupAction::new(tg.clone(), total.clone(), act_arr, act_obj)?;

    // projection to the gerbe base: (k,b) ↦ Π(b), (k,y) ↦ y
    let proj = GroupoidFunctor::new(
        total.clone(),
        gerbe.base.clone(),
        (0..ng * ny).map(|o| o % ny).collect(),
        (0..ng * nb).map(|a| gerbe.pi.arr_map[a % nb]).collect(),
    )?;

    let pb = PbGroupoid {
        action,
        base: gerbe.base.clone(),
        proj,
    };
    let bt = BaseTrivialPb {
        g_of: (0..ng * ny).map(|o| o / ny).collect(),
        y_of: (0..ng * ny).map(|o| o % ny).collect(),
        pb,
    };

    let mut report = ValidationReport::new(format!("Ψ({})", b_gd.name));
    let all_involutive = (0..nb).all(|b| g_grp.mul(gerbe.rho[b], gerbe.rho[b]) == g_grp.unit);
    if all_involutive {
        report.note(
            "every anchor value is an involution, so the derived target \
             t(k,b) = (k·ρ(b)⁻¹, t(Π b)) coincides with the textbook variant k·ρ(b)",
        );
    } else {
        report.note(
            "anchor values of order > 2 present: using the derived target \
             t(k,b) = (k·ρ(b)⁻¹, t(Π b)); the textbook variant k·ρ(b) would \
             not compose and is inconsistent with the quoted inverse formula",
        );
    }
    report.absorb("base trivial", check_base_trivial(&bt));
    Ok(PsiResult { bt, report })
}

/// Ξ: from a base trivial PB groupoid to a bundle gerbe on
/// `B = Ker(s_G)` over the PB base `Y^(1)`:
/// `ρ(b) = (pr_G t(b))⁻¹`, `(h, ρ(b))⋆b = (C_{ρ(b)⁻¹}h⁻¹, e)·b`,
/// `b2 ∘_μ b1 = ((e, ρ(b1)⁻¹)·b2) ∘ b1`.
pub fn functor_xi(bt: &BaseTrivialPb) -> Result<BundleGerbe> {
    let audit = check_base_trivial(bt);
    if !audit.is_valid() {
        return Err(Error::NotBaseTrivial(
            audit.first_witness().unwrap_or("invalid input").to_string(),
        ));
    }
    let p = &bt.pb;
    let tg = p.two_group().clone();
    let g_grp = &tg.base_group;
    let target = p.target();
    let e_h = tg.cm.h.unit;

    // kernel of s_G
    let kernel: Vec<usize> = (0..target.arrow_count())
        .filter(|&xi| bt.s_g(xi) == g_grp.unit)
        .collect();
    let pos_of: BTreeMap<usize, usize> = kernel.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    // splitting φ(ξ) = (s_G ξ, s_G(ξ)⁻¹·ξ) must be bijective onto G×B
    if kernel.len() * g_grp.order() != target.arrow_count() {
        return Err(Error::NotBaseTrivial(format!(
            "|Ker(s_G)|·|G| = {} ≠ |P^(1)| = {}",
            kernel.len() * g_grp.order(),
            target.arrow_count()
        )));
    }
    {
        let mut seen = vec![false; target.arrow_count()];
        for xi in 0..target.arrow_count() {
            let s_g = bt.s_g(xi);
            let b = p.action.arr(tg.pair(e_h, g_grp.inv(s_g)), xi);
            if !pos_of.contains_key(&b) {
                return Err(Error::NotBaseTrivial(format!(
                    "splitting of {} leaves the kernel",
                    target.arrows[xi]
                )));
            }
            let code = s_g * kernel.len() + pos_of[&b];
            if seen[code] {
                return Err(Error::NotBaseTrivial(format!(
                    "splitting not injective at {}",
                    target.arrows[xi]
                )));
            }
            seen[code] = true;
        }
    }

    let nb = kernel.len();
    let arrows: Vec<String> = kernel.iter().map(|&x| target.arrows[x].clone()).collect();
    let objects = p.base.objects.clone();
    let src: Vec<usize> = kernel.iter().map(|&x| bt.y_of[target.src[x]]).collect();
    let tgt: Vec<usize> = kernel.iter().map(|&x| bt.y_of[target.tgt[x]]).collect();
    // ρ(b) = (pr_G t(b))⁻¹
    let rho: Vec<usize> = kernel.iter().map(|&x| g_grp.inv(bt.t_g(x))).collect();

    let mut comp = BTreeMap::new();
    for i2 in 0..nb {
        for i1 in 0..nb {
            // composable over the base: s(Π b2) = t(Π b1); equivalently the
            // shifted representative composes in P^(1)
            let shifted = p
                .action
                .arr(tg.pair(e_h, g_grp.inv(rho[i1])), kernel[i2]);
            if target.src[shifted] != target.tgt[kernel[i1]] {
                continue;
            }
            let inner = target.compose(shifted, kernel[i1])?;
            let c = *pos_of
                .get(&inner)
                .ok_or_else(|| Error::NotBaseTrivial("∘_μ leaves the kernel".into()))?;
            comp.insert((i2, i1), c);
        }
    }
    let carrier = Arc::new(FiniteGroupoid::from_comp(
        format!("Ξ({})", target.name),
        objects,
        arrows,
        src,
        tgt,
        comp,
    )?);

    // Π = projection restricted to the kernel
    let pi = GroupoidFunctor::new(
        carrier.clone(),
        p.base.clone(),
        (0..p.base.object_count()).collect(),
        kernel.iter().map(|&x| p.proj.arr_map[x]).collect(),
    )?;

    // ⋆: (h, ρ(b))⋆b = (C_{ρ(b)⁻¹}h⁻¹, e)·b
    let mut star = BTreeMap::new();
    for h in 0..tg.cm.h.order() {
        for (i, &x) in kernel.iter().enumerate() {
            let gamma = tg.pair(h, rho[i]);
            let tw = tg.cm.c(g_grp.inv(rho[i]), tg.cm.h.inv(h));
            let moved = p.action.arr(tg.pair(tw, g_grp.unit), x);
            let img = *pos_of
                .get(&moved)
                .ok_or_else(|| Error::NotBaseTrivial("⋆ leaves the kernel".into()))?;
            star.insert((gamma, i), img);
        }
    }
    let star = GroupoidAction::new(
        ActionSide::Left,
        tg.groupoid.clone(),
        carrier.arrows.clone(),
        rho.clone(),
        star,
    )?;

    Ok(BundleGerbe {
        two_group: tg,
        carrier,
        base: p.base.clone(),
        pi,
        rho,
        star,
        fiber_surjection: None,
    })
}

/// Verify Ψ(Ξ(p)) ≅ p through the explicit splitting
/// `φ(ξ) = (s_G ξ, s_G(ξ)⁻¹·ξ)`: a groupoid isomorphism, equivariant for
/// the 2-group actions and compatible with the projections.
pub fn verify_psi_xi_roundtrip(bt: &BaseTrivialPb) -> Result<ValidationReport> {
    let gerbe = functor_xi(bt)?;
    let psi = functor_psi(&gerbe)?;
    let p = &bt.pb;
    let q = &psi.bt.pb;
    let tg = p.two_group();
    let g_grp = &tg.base_group;
    let e_h = tg.cm.h.unit;
    let target = p.target();

    // kernel positions as used by Ξ
    let kernel: Vec<usize> = (0..target.arrow_count())
        .filter(|&xi| bt.s_g(xi) == g_grp.unit)
        .collect();
    let pos_of: BTreeMap<usize, usize> = kernel.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let nb = kernel.len();
    let ny = p.base.object_count();

    // φ on arrows and objects
    let arr_map: Vec<usize> = (0..target.arrow_count())
        .map(|xi| {
            let s_g = bt.s_g(xi);
            let b = p.action.arr(tg.pair(e_h, g_grp.inv(s_g)), xi);
            s_g * nb + pos_of[&b]
        })
        .collect();
    let obj_map: Vec<usize> = (0..target.object_count())
        .map(|pt| bt.g_of[pt] * ny + bt.y_of[pt])
        .collect();

    let mut report = ValidationReport::new("Ψ∘Ξ ≅ id");
    let functor = GroupoidFunctor::new(target.clone(), q.target().clone(), obj_map.clone(), arr_map.clone())?;
    report.absorb("φ functor laws", check_functor(&functor));

    let bij = report.law("φ bijective");
    let mut seen_a = vec![false; arr_map.len()];
    for &v in &arr_map {
        if seen_a[v] {
            bij.record(|| "arrow collision".into());
        }
        seen_a[v] = true;
    }
    let mut seen_o = vec![false; obj_map.len()];
    for &v in &obj_map {
        if seen_o[v] {
            bij.record(|| "object collision".into());
        }
        seen_o[v] = true;
    }

    let equiv = report.law("φ equivariant for the 2-group actions");
    for u in 0..tg.arrow_count() {
        for xi in 0..target.arrow_count() {
            if arr_map[p.action.arr(u, xi)] != q.action.arr(u, arr_map[xi]) {
                equiv.record(|| {
                    format!("u = {}, ξ = {}", tg.groupoid.arrows[u], target.arrows[xi])
                });
            }
        }
    }
    for g in 0..g_grp.order() {
        for pt in 0..target.object_count() {
            if obj_map[p.action.obj(g, pt)] != q.action.obj(g, obj_map[pt]) {
                equiv.record(|| format!("g = {}, p = {}", g_grp.label(g), target.objects[pt]));
            }
        }
    }

    let base_ok = report.law("φ commutes with the projections");
    for xi in 0..target.arrow_count() {
        if q.proj.arr_map[arr_map[xi]] != p.proj.arr_map[xi] {
            base_ok.record(|| target.arrows[xi].clone());
        }
    }

    report.absorb("Ψ construction", psi.report);
    Ok(report)
}

/// Verify Ξ(Ψ(B)) ≅ B through the carrier identification `b ↦ (e, b)`:
/// the bijection must commute with Π, ρ, ⋆ and ∘_μ.
pub fn verify_xi_psi_roundtrip(gerbe: &BundleGerbe) -> Result<ValidationReport> {
    let psi = functor_psi(gerbe)?;
    let back = functor_xi(&psi.bt)?;
    let tg = &gerbe.two_group;
    let g_grp = &tg.base_group;
    let nb = gerbe.carrier.arrow_count();

    let mut report = ValidationReport::new("Ξ∘Ψ ≅ id");

    // Ξ(Ψ(B)) kernel consists of the Ψ-arrows (e, b); its arrow order is
    // the kernel filtering order, so map b ↦ position of arr_idx(e,b).
    let psi_target = psi.bt.pb.target();
    let kernel: Vec<usize> = (0..psi_target.arrow_count())
        .filter(|&xi| psi.bt.s_g(xi) == g_grp.unit)
        .collect();
    let pos_of: BTreeMap<usize, usize> = kernel.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // arr_idx(e, b) = e·nb + b = b since unit index times nb ... unit may not be 0
    let e_slot = g_grp.unit * nb;
    let to_back: Vec<usize> = (0..nb)
        .map(|b| {
            *pos_of
                .get(&(e_slot + b))
                .expect("(e,b) lies in Ker(s_G) by construction")
        })
        .collect();

    let size = report.law("carrier sizes agree");
    if back.carrier.arrow_count() != nb {
        size.record(|| {
            format!(
                "{} vs {}",
                back.carrier.arrow_count(),
                nb
            )
        });
    }

    let bij = report.law("b ↦ (e,b) bijective");
    {
        let mut seen = vec![false; to_back.len()];
        for &v in &to_back {
            if seen[v] {
                bij.record(|| "collision".into());
            }
            seen[v] = true;
        }
    }

    let pi_law = report.law("commutes with Π");
    for b in 0..nb {
        if back.pi.arr_map[to_back[b]] != gerbe.pi.arr_map[b] {
            pi_law.record(|| gerbe.carrier.arrows[b].clone());
        }
    }

    let rho_law = report.law("commutes with ρ");
    for b in 0..nb {
        if back.rho[to_back[b]] != gerbe.rho[b] {
            rho_law.record(|| gerbe.carrier.arrows[b].clone());
        }
    }

    let comp_law = report.law("commutes with ∘_μ");
    for (&(b2, b1), &c) in &gerbe.carrier.comp {
        match back.carrier.comp.get(&(to_back[b2], to_back[b1])) {
            Some(&img) if img == to_back[c] => {}
            _ => comp_law.record(|| {
                format!(
                    "b2 = {}, b1 = {}",
                    gerbe.carrier.arrows[b2], gerbe.carrier.arrows[b1]
                )
            }),
        }
    }

    let star_law = report.law("commutes with ⋆");
    for (&(gamma, b), &img) in &gerbe.star.star {
        match back.star.star.get(&(gamma, to_back[b])) {
            Some(&moved) if moved == to_back[img] => {}
            _ => star_law.record(|| {
                format!(
                    "γ = {}, b = {}",
                    tg.groupoid.arrows[gamma], gerbe.carrier.arrows[b]
                )
            }),
        }
    }

    report.absorb("Ψ construction", psi.report);
    Ok(report)
}

/// The comparison of Φ and Ξ with the partial quotient.
///
/// Item 1 (fiber product base): `Φ(P^(1)) ≅ P ×_Q (P^(1)/_G) ×_Q P`
/// through `(g,γ) ↦ (g·t(γ), [γ], s(γ))`.
/// Item 2 (base trivial): `Ξ(P^(1)) ≅ P^(1)/_G` through `b ↦ [b]`.
pub fn verify_bg_pq_item1(p: &PbGroupoid, pi_y: &Surjection) -> Result<ValidationReport> {
    let gerbe = functor_phi(p, pi_y)?;
    let pq = partial_quotient(p)?;
    let target = p.target();
    let tg = p.two_group();
    let g_grp = &tg.base_group;
    let ng = g_grp.order();
    let narr = target.arrow_count();

    // pullback P ×_Q (P^(1)/_G) ×_Q P over Q: P → P/G
    let q_surj = Surjection::new(
        target.objects.clone(),
        pq.pb.base.objects.clone(),
        pq.pb.proj.obj_map.clone(),
    )?;
    let pullback = pullback_groupoid("pullback", &q_surj, &pq.pb.base)?;
    // arrow lookup (y2, class, y1)
    let mut lookup = BTreeMap::new();
    for a in 0..pullback.arrow_count() {
        // recover the class from the label is fragile; rebuild by matching
        // src/tgt and the middle class through composition with units is
        // unnecessary: reconstruct the index map directly instead.
        let _ = a;
    }
    // Rebuild the pullback index the same way pullback_groupoid does:
    // arrows sorted by (y2, class, y1).
    let mut triples = Vec::new();
    for y2 in 0..target.object_count() {
        for c in 0..pq.pb.base.arrow_count() {
            for y1 in 0..target.object_count() {
                if pq.pb.base.src[c] == q_surj.map[y1] && pq.pb.base.tgt[c] == q_surj.map[y2] {
                    triples.push((y2, c, y1));
                }
            }
        }
    }
    for (i, t) in triples.iter().enumerate() {
        lookup.insert(*t, i);
    }

    let mut report = ValidationReport::new("Φ(P^(1)) ≅ P ×_Q (P^(1)/_G) ×_Q P");
    let size = report.law("carrier sizes agree");
    if gerbe.carrier.arrow_count() != pullback.arrow_count() {
        size.record(|| {
            format!(
                "{} vs {}",
                gerbe.carrier.arrow_count(),
                pullback.arrow_count()
            )
        });
        report.absorb("pullback", check_groupoid(&pullback));
        return Ok(report);
    }

    // the quoted map (g,γ) ↦ (g·t(γ), [γ], s(γ))
    let map: Vec<usize> = (0..gerbe.carrier.arrow_count())
        .map(|i| {
            let g = i / narr;
            let gamma = i % narr;
            let y2 = p.action.obj(g, target.tgt[gamma]);
            let c = pq.pb.proj.arr_map[gamma];
            let y1 = target.src[gamma];
            lookup[&(y2, c, y1)]
        })
        .collect();
    debug_assert_eq!(ng * narr, map.len());

    let bij = report.law("map bijective");
    let mut seen = vec![false; map.len()];
    for &v in &map {
        if seen[v] {
            bij.record(|| "collision".into());
        }
        seen[v] = true;
    }

    let functor = GroupoidFunctor::new(
        gerbe.carrier.clone(),
        Arc::new(pullback),
        (0..target.object_count()).collect(),
        map,
    )?;
    report.absorb("groupoid isomorphism laws", check_functor(&functor));
    Ok(report)
}

pub fn verify_bg_pq_item2(bt: &BaseTrivialPb) -> Result<ValidationReport> {
    let gerbe = functor_xi(bt)?;
    let pq = partial_quotient(&bt.pb)?;
    let p = &bt.pb;
    let target = p.target();
    let g_grp = &p.two_group().base_group;

    let kernel: Vec<usize> = (0..target.arrow_count())
        .filter(|&xi| bt.s_g(xi) == g_grp.unit)
        .collect();

    let mut report = ValidationReport::new("Ξ(P^(1)) ≅ P^(1)/_G");
    let size = report.law("carrier sizes agree (|B|·|G| = |P^(1)|)");
    if gerbe.carrier.arrow_count() * g_grp.order() != target.arrow_count()
        || gerbe.carrier.arrow_count() != pq.pb.base.arrow_count()
    {
        size.record(|| {
            format!(
                "|B| = {}, |G| = {}, |P^(1)| = {}, |P^(1)/_G| = {}",
                gerbe.carrier.arrow_count(),
                g_grp.order(),
                target.arrow_count(),
                pq.pb.base.arrow_count()
            )
        });
        return Ok(report);
    }

    // b ↦ [b]: kernel representative to its partial-quotient class
    let arr_map: Vec<usize> = kernel.iter().map(|&x| pq.pb.proj.arr_map[x]).collect();
    let obj_map: Vec<usize> = (0..gerbe.carrier.object_count())
        .map(|y| {
            // object y of the gerbe base corresponds to the class of any
            // point p with y_of(p) = y
            let pt = (0..target.object_count())
                .find(|&pt| bt.y_of[pt] == y)
                .expect("trivialisation surjective on Y");
            pq.pb.proj.obj_map[pt]
        })
        .collect();

    let bij = report.law("b ↦ [b] bijective");
    let mut seen = vec![false; arr_map.len()];
    for &v in &arr_map {
        if seen[v] {
            bij.record(|| "two kernel arrows in one class".into());
        }
        seen[v] = true;
    }

    let functor = GroupoidFunctor::new(
        gerbe.carrier.clone(),
        Arc::new((*pq.pb.base).clone()),
        obj_map,
        arr_map,
    )?;
    report.absorb("groupoid isomorphism laws", check_functor(&functor));
    Ok(report)
}

/// Strict functoriality of Φ on a PB-groupoid morphism over the same base:
/// `Φ(f) = Id_G × f` must be equivariant and base-compatible.
pub fn verify_phi_on_morphism(
    p: &PbGroupoid,
    pi_y: &Surjection,
    f_arr: &[usize],
    f_obj: &[usize],
) -> Result<ValidationReport> {
    let gerbe = functor_phi(p, pi_y)?;
    let target = p.target();
    let narr = target.arrow_count();
    let ng = p.two_group().base_group.order();
    let mut report = ValidationReport::new("Φ(f) = Id_G × f");

    // Id_G × f on the gerbe carrier
    let lifted: Vec<usize> = (0..ng * narr)
        .map(|i| (i / narr) * narr + f_arr[i % narr])
        .collect();

    let functor = GroupoidFunctor::new(
        gerbe.carrier.clone(),
        gerbe.carrier.clone(),
        f_obj.to_vec(),
        lifted.clone(),
    )?;
    report.absorb("functor laws", check_functor(&functor));

    let equiv = report.law("(H⋊G)-equivariance of Id_G × f");
    for (&(gamma, b), &img) in &gerbe.star.star {
        match gerbe.star.star.get(&(gamma, lifted[b])) {
            Some(&moved) if moved == lifted[img] => {}
            _ => equiv.record(|| {
                format!(
                    "γ = {}, b = {}",
                    p.two_group().groupoid.arrows[gamma],
                    gerbe.carrier.arrows[b]
                )
            }),
        }
    }

    let anchor = report.law("anchor preserved");
    for b in 0..gerbe.carrier.arrow_count() {
        if gerbe.rho[lifted[b]] != gerbe.rho[b] {
            anchor.record(|| gerbe.carrier.arrows[b].clone());
        }
    }

    Ok(report)
}

/// Build the trivial gerbe with structure 2-group `tg` over the pair
/// groupoid of `y`: Ξ applied to the trivial base PB groupoid
/// `(H⋊G) × Y^(1)`.
pub fn trivial_gerbe(tg: Arc<TwoGroup>, y: Vec<String>) -> Result<BundleGerbe> {
    let bt = trivial_base_trivial_pb(tg, y)?;
    functor_xi(&bt)
}

/// The trivial base trivial PB groupoid over `pair(Y)`.
pub fn trivial_base_trivial_pb(tg: Arc<TwoGroup>, y: Vec<String>) -> Result<BaseTrivialPb> {
    let y_gd = Arc::new(FiniteGroupoid::pair_groupoid("Y", y)?);
    trivial_base_trivial_pb_over(tg, y_gd)
}

/// The trivial base trivial PB groupoid over an arbitrary groupoid
/// `Y^(1) ⇉ Y`: the cartesian product `(H⋊G-groupoid) × Y^(1)` with the
/// 2-group acting by left translation on the first factor.
pub fn trivial_base_trivial_pb_over(
    tg: Arc<TwoGroup>,
    y_gd: Arc<FiniteGroupoid>,
) -> Result<BaseTrivialPb> {
    let total = Arc::new(crate::groupoid::product_groupoid(&tg.groupoid, &y_gd));
    let n_u = tg.arrow_count();
    let n_y_arr = y_gd.arrow_count();
    let ng = tg.base_group.order();
    let n_y_obj = y_gd.object_count();

    // arrows of the product are (u, γ) at u·|Y^(1)| + γ; objects (g, y)
    let mut act_arr_rows = Vec::with_capacity(n_u);
    for v in 0..n_u {
        let mut row = Vec::with_capacity(n_u * n_y_arr);
        for u in 0..n_u {
            for gam in 0..n_y_arr {
                row.push(tg.arrows_group.mul(v, u) * n_y_arr + gam);
            }
        }
        act_arr_rows.push(row);
    }
    let act_arr = GroupAction::new(tg.arrows_group.clone(), total.arrows.clone(), act_arr_rows)?;
    let mut act_obj_rows = Vec::with_capacity(ng);
    for g in 0..ng {
        let mut row = Vec::with_capacity(ng * n_y_obj);
        for k in 0..ng {
            for yy in 0..n_y_obj {
                row.push(tg.base_group.mul(g, k) * n_y_obj + yy);
            }
        }
        act_obj_rows.push(row);
    }
    let act_obj = GroupAction::new(tg.base_group.clone(), total.objects.clone(), act_obj_rows)?;
    let action = TwoGroupAction::new(tg.clone(), total.clone(), act_arr, act_obj)?;
    // the canonical quotient must exist (freeness, well-definedness) and
    // collapse onto Y^(1); the projection is the literal second factor
    let pb = crate::action::quotient_pb(&action)?;
    if pb.base.arrow_count() != n_y_arr || pb.base.object_count() != n_y_obj {
        return Err(Error::QuotientIllDefined(
            "trivial PB base does not collapse onto Y^(1)".into(),
        ));
    }
    let g_of: Vec<usize> = (0..ng * n_y_obj).map(|o| o / n_y_obj).collect();
    let y_of: Vec<usize> = (0..ng * n_y_obj).map(|o| o % n_y_obj).collect();
    let proj = GroupoidFunctor::new(
        total.clone(),
        y_gd.clone(),
        y_of.clone(),
        (0..total.arrow_count()).map(|a| a % n_y_arr).collect(),
    )?;
    Ok(BaseTrivialPb {
        pb: PbGroupoid {
            action,
            base: y_gd,
            proj,
        },
        g_of,
        y_of,
    })
}

/// Audit the full Φ postcondition on one input: construction succeeds and
/// the output passes the gerbe checker.
pub fn phi_report(p: &PbGroupoid, pi_y: &Surjection) -> Result<ValidationReport> {
    let gerbe = functor_phi(p, pi_y)?;
    let mut report = ValidationReport::new("Φ output");
    report.absorb("gerbe", check_bundle_gerbe(&gerbe));
    report.absorb("ambient action", check_two_group_action(&p.action));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{pb_groupoid_from_principal_bundle, PrincipalBundle};
    use crate::group::FiniteGroup;
    use crate::two_group::{two_group_from_crossed_module, CrossedModule};

    fn pbgauge0(g_order: usize, m_size: usize) -> (PbGroupoid, Surjection) {
        let g = Arc::new(FiniteGroup::cyclic(g_order));
        let base: Vec<String> = (0..m_size).map(|i| format!("m{i}")).collect();
        let bundle = PrincipalBundle::trivial(g, base);
        let p = pb_groupoid_from_principal_bundle(&bundle).unwrap();
        // the base pair(M) is the fiber product of M → {*}
        let pi = Surjection::new(
            p.base.objects.clone(),
            vec!["*".into()],
            vec![0; p.base.object_count()],
        )
        .unwrap();
        (p, pi)
    }

    fn base_trivial_pbgauge0(g_order: usize, m_size: usize) -> BaseTrivialPb {
        let (p, _) = pbgauge0(g_order, m_size);
        // P = G×M with point (g,m) at index g·|M| + m
        let np = p.target().object_count();
        let g_of = (0..np).map(|i| i / m_size).collect();
        let y_of = (0..np).map(|i| i % m_size).collect();
        BaseTrivialPb { pb: p, g_of, y_of }
    }

    #[test]
    fn trivial_gerbe_is_valid() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::adjoint(z2)).unwrap(),
        );
        let gerbe = trivial_gerbe(tg, vec!["a".into(), "b".into()]).unwrap();
        assert!(check_bundle_gerbe(&gerbe).is_valid());
    }

    // Oracle: the groupoid-action checkers, cross-validating the Φ star.
    #[test]
    fn phi_star_is_a_principal_groupoid_bundle() {
        use crate::action::{check_principal_groupoid_bundle, PrincipalGroupoidBundle};
        let (p, pi) = pbgauge0(2, 2);
        let gerbe = functor_phi(&p, &pi).unwrap();
        let bundle = PrincipalGroupoidBundle {
            action: gerbe.star.clone(),
            base: gerbe.base.arrows.clone(),
            pi: gerbe.pi.arr_map.clone(),
        };
        assert!(check_principal_groupoid_bundle(&bundle).is_valid());
    }

    // Ψ of a trivial gerbe over an identity groupoid is the product PB
    // groupoid.
    #[test]
    fn psi_of_trivial_gerbe_over_identity_base_is_product() {
        use crate::gerbe::trivial_base_trivial_pb_over;
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::adjoint(z2)).unwrap(),
        );
        let y_gd = Arc::new(FiniteGroupoid::identity_groupoid(
            "Y",
            vec!["a".into(), "b".into()],
        ));
        let bt = trivial_base_trivial_pb_over(tg.clone(), y_gd.clone()).unwrap();
        assert!(check_base_trivial(&bt).is_valid());
        let gerbe = functor_xi(&bt).unwrap();
        assert!(check_bundle_gerbe(&gerbe).is_valid());
        let psi = functor_psi(&gerbe).unwrap();
        assert!(psi.report.is_valid());
        let product = crate::groupoid::product_groupoid(&tg.groupoid, &y_gd);
        assert!(
            crate::groupoid::groupoid_isomorphism(psi.bt.pb.target(), &product)
                .unwrap()
                .is_some()
        );
    }

    // Oracle: the checker itself, on the Φ output.
    #[test]
    fn phi_output_is_a_gerbe_z2() {
        let (p, pi) = pbgauge0(2, 2);
        let gerbe = functor_phi(&p, &pi).unwrap();
        // |carrier| = |G|·|P^(1)| = 2·16 = 32
        assert_eq!(gerbe.carrier.arrow_count(), 32);
        // base = P ×_M P over M = {*}: the full pair groupoid, |P|² arrows
        assert_eq!(gerbe.base.arrow_count(), 16);
        assert!(check_bundle_gerbe(&gerbe).is_valid());
    }

    #[test]
    fn phi_output_is_a_gerbe_z3() {
        let (p, pi) = pbgauge0(3, 2);
        let gerbe = functor_phi(&p, &pi).unwrap();
        assert_eq!(gerbe.carrier.arrow_count(), 3 * 36);
        assert!(check_bundle_gerbe(&gerbe).is_valid());
    }

    // Π applied to (e_G, unit arrow at p) → (p,p).
    #[test]
    fn phi_projection_unit_case() {
        let (p, pi) = pbgauge0(2, 2);
        let gerbe = functor_phi(&p, &pi).unwrap();
        let target = p.target();
        let narr = target.arrow_count();
        let e_g = p.two_group().base_group.unit;
        for pt in 0..target.object_count() {
            let b = e_g * narr + target.unit[pt];
            let img = gerbe.pi.arr_map[b];
            assert_eq!(gerbe.base.src[img], pt);
            assert_eq!(gerbe.base.tgt[img], pt);
        }
    }

    // Oracle: equivariance scan flags a corrupted star entry.
    #[test]
    fn broken_equivariance_detected() {
        let (p, pi) = pbgauge0(2, 2);
        let mut gerbe = functor_phi(&p, &pi).unwrap();
        // find a star entry on a non-unit acting arrow and corrupt it within
        // the same Π-fiber so that principality checks stay meaningful
        let key = *gerbe
            .star
            .star
            .keys()
            .find(|&&(g, _)| !gerbe.two_group.groupoid.is_unit(g))
            .unwrap();
        let old = gerbe.star.star[&key];
        let replacement = (0..gerbe.carrier.arrow_count())
            .find(|&b| b != old && gerbe.pi.arr_map[b] == gerbe.pi.arr_map[old])
            .unwrap();
        gerbe.star.star.insert(key, replacement);
        assert!(!check_bundle_gerbe(&gerbe).is_valid());
    }

    #[test]
    fn base_trivial_check_passes_on_catalog() {
        for (go, ms) in [(2, 2), (3, 1), (3, 2)] {
            let bt = base_trivial_pbgauge0(go, ms);
            assert!(check_base_trivial(&bt).is_valid(), "({go},{ms})");
        }
    }

    // Ξ carrier size: |B| = |P^(1)|/|G|.
    #[test]
    fn xi_kernel_size() {
        let bt = base_trivial_pbgauge0(3, 2);
        let gerbe = functor_xi(&bt).unwrap();
        assert_eq!(
            gerbe.carrier.arrow_count() * 3,
            bt.pb.target().arrow_count()
        );
        assert!(check_bundle_gerbe(&gerbe).is_valid());
    }

    // ρ on a unit arrow at (e_G, y) is e_G.
    #[test]
    fn xi_anchor_on_units() {
        let bt = base_trivial_pbgauge0(2, 2);
        let gerbe = functor_xi(&bt).unwrap();
        for y in 0..gerbe.carrier.object_count() {
            let u = gerbe.carrier.unit[y];
            assert_eq!(gerbe.rho[u], gerbe.two_group.base_group.unit);
        }
    }

    #[test]
    fn psi_output_is_base_trivial_pb() {
        let bt = base_trivial_pbgauge0(2, 2);
        let gerbe = functor_xi(&bt).unwrap();
        let psi = functor_psi(&gerbe).unwrap();
        assert!(psi.report.is_valid());
        assert!(check_pb_groupoid(&psi.bt.pb).is_valid());
        assert!(check_two_group_action(&psi.bt.pb.action).is_valid());
    }

    // quotient_pb of the Ψ output reproduces the gerbe base Y^(1).
    #[test]
    fn psi_quotient_reproduces_base() {
        let bt = base_trivial_pbgauge0(3, 2);
        let gerbe = functor_xi(&bt).unwrap();
        let psi = functor_psi(&gerbe).unwrap();
        let q = crate::action::quotient_pb(&psi.bt.pb.action).unwrap();
        assert!(
            crate::groupoid::groupoid_isomorphism(&q.base, &gerbe.base)
                .unwrap()
                .is_some()
        );
    }

    // Oracle: explicit isomorphism verification, both round trips.
    #[test]
    fn psi_xi_roundtrip_z2_and_z3() {
        for (go, ms) in [(2usize, 2usize), (3, 1), (3, 2)] {
            let bt = base_trivial_pbgauge0(go, ms);
            let report = verify_psi_xi_roundtrip(&bt).unwrap();
            assert!(report.is_valid(), "Ψ∘Ξ failed for ({go},{ms}): {report}");
        }
    }

    #[test]
    fn xi_psi_roundtrip_on_gerbes() {
        for (go, ms) in [(2usize, 2usize), (3, 2)] {
            let bt = base_trivial_pbgauge0(go, ms);
            let gerbe = functor_xi(&bt).unwrap();
            let report = verify_xi_psi_roundtrip(&gerbe).unwrap();
            assert!(report.is_valid(), "Ξ∘Ψ failed for ({go},{ms}): {report}");
        }
        // also on a trivial gerbe
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::adjoint(z2)).unwrap(),
        );
        let gerbe = trivial_gerbe(tg, vec!["a".into(), "b".into()]).unwrap();
        assert!(verify_xi_psi_roundtrip(&gerbe).unwrap().is_valid());
    }

    // Prop bg.pq, both items, on the catalog.
    #[test]
    fn bg_pq_item1_pbgauge0() {
        let (p, pi) = pbgauge0(2, 2);
        let report = verify_bg_pq_item1(&p, &pi).unwrap();
        assert!(report.is_valid(), "{report}");
        // 32 arrows compared
        let gerbe = functor_phi(&p, &pi).unwrap();
        assert_eq!(gerbe.carrier.arrow_count(), 32);
    }

    #[test]
    fn bg_pq_item2_base_trivial() {
        for (go, ms) in [(2usize, 2usize), (3, 2)] {
            let bt = base_trivial_pbgauge0(go, ms);
            let report = verify_bg_pq_item2(&bt).unwrap();
            assert!(report.is_valid(), "({go},{ms}): {report}");
        }
    }

    // Ξ(p) carrier size · |G| = |P^(1)|, catalog-wide.
    #[test]
    fn xi_size_identity() {
        for (go, ms) in [(2usize, 1usize), (2, 2), (3, 1), (3, 2)] {
            let bt = base_trivial_pbgauge0(go, ms);
            let gerbe = functor_xi(&bt).unwrap();
            assert_eq!(
                gerbe.carrier.arrow_count() * go,
                bt.pb.target().arrow_count()
            );
        }
    }

    // strict functoriality: Φ(f) = Id_G × f for a catalog morphism.
    #[test]
    fn phi_functorial_on_bundle_automorphism() {
        let (p, pi) = pbgauge0(2, 2);
        // f = the deck transformation by a central element: acts on P = G×M
        // by p ↦ u·p, lifted to pairs
        let target = p.target();
        let np = target.object_count();
        let u = 1usize; // nontrivial element of Z2
        let f_obj: Vec<usize> = (0..np).map(|pt| p.action.obj(u, pt)).collect();
        let f_arr: Vec<usize> = (0..target.arrow_count())
            .map(|a| {
                let (pp, qq) = (a / np, a % np);
                f_obj[pp] * np + f_obj[qq]
            })
            .collect();
        let report = verify_phi_on_morphism(&p, &pi, &f_arr, &f_obj).unwrap();
        assert!(report.is_valid(), "{report}");
    }

    // Φ of the trivial 2-group action: gerbe ≅ base with trivial action.
    #[test]
    fn phi_trivial_two_group() {
        let g = Arc::new(FiniteGroup::trivial());
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::identity(g)).unwrap(),
        );
        let target = Arc::new(
            FiniteGroupoid::pair_groupoid("P", vec!["a".into(), "b".into()]).unwrap(),
        );
        let act_arr = GroupAction::trivial(tg.arrows_group.clone(), target.arrows.clone());
        let act_obj = GroupAction::trivial(tg.base_group.clone(), target.objects.clone());
        let a = TwoGroupAction::new(tg, target, act_arr, act_obj).unwrap();
        let p = crate::action::quotient_pb(&a).unwrap();
        let pi = Surjection::new(
            p.base.objects.clone(),
            vec!["*".into()],
            vec![0; p.base.object_count()],
        )
        .unwrap();
        let gerbe = functor_phi(&p, &pi).unwrap();
        assert!(check_bundle_gerbe(&gerbe).is_valid());
        assert_eq!(gerbe.carrier.arrow_count(), p.target().arrow_count());
    }
}
