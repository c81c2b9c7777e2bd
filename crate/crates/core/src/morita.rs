//! Weak equivalence, Morita equivalence and bitorsors.
//!
//! A functor is a weak equivalence when every hom-set map
//! `P^(1)(p,q) → M^(1)(φp, φq)` is bijective (full and faithful) and every
//! codomain object receives an arrow from the image (the finite reading of
//! essential surjectivity). Morita equivalence is checked through pullback
//! groupoids over a common carrier, bitorsors through the two principal
//! actions; at desk scale the three readings are decided by explicit
//! search and must agree.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::action::{
    check_groupoid_action, quotient_pb, ActionSide, GroupoidAction, TwoGroupAction,
};
use crate::error::{Error, Result};
use crate::group::free_violation;
use crate::groupoid::{
    arrow_isomorphism_over, check_functor, pullback_groupoid, FiniteGroupoid, GroupoidFunctor,
    Surjection,
};
use crate::report::{LawReport, ValidationReport};

/// The checkable certificate of a weak equivalence.
pub struct WeakEquivalenceWitness {
    pub full_faithful: bool,
    pub essentially_surjective: bool,
    /// Per codomain object: an arrow landing there from the image, with
    /// its source point upstairs.
    pub surjectivity_witness: Vec<Option<(usize, usize)>>,
    pub report: ValidationReport,
}

impl WeakEquivalenceWitness {
    pub fn is_weak_equivalence(&self) -> bool {
        self.full_faithful && self.essentially_surjective
    }
}

/// Decide whether a functor is a weak equivalence, with witnesses.
pub fn check_weak_equivalence(f: &GroupoidFunctor) -> WeakEquivalenceWitness {
    let mut report = ValidationReport::new(format!(
        "weak equivalence {} → {}",
        f.dom.name, f.cod.name
    ));
    report.absorb("functor", check_functor(&f.clone()));

    let mut ff = LawReport::new("full and faithful (hom-set bijections)");
    for p in 0..f.dom.object_count() {
        for q in 0..f.dom.object_count() {
            let upstairs = f.dom.hom_set(p, q);
            let downstairs = f.cod.hom_set(f.obj_map[p], f.obj_map[q]);
            // injective?
            let mut images: Vec<usize> = upstairs.iter().map(|&a| f.arr_map[a]).collect();
            images.sort_unstable();
            let before = images.len();
            images.dedup();
            if images.len() != before {
                ff.record(|| format!("not faithful on hom({p},{q})"));
            }
            if images.len() != downstairs.len() {
                ff.record(|| {
                    format!(
                        "hom({},{}) has {} arrows, image hom has {}",
                        f.dom.objects[p],
                        f.dom.objects[q],
                        before,
                        downstairs.len()
                    )
                });
            }
        }
    }
    let full_faithful = ff.ok();
    report.push_law(ff);

    let mut es = LawReport::new("essentially surjective");
    let mut witness = Vec::with_capacity(f.cod.object_count());
    for m in 0..f.cod.object_count() {
        let found = (0..f.cod.arrow_count()).find_map(|alpha| {
            if f.cod.tgt[alpha] != m {
                return None;
            }
            (0..f.dom.object_count())
                .find(|&p| f.obj_map[p] == f.cod.src[alpha])
                .map(|p| (alpha, p))
        });
        if found.is_none() {
            es.record(|| f.cod.objects[m].clone());
        }
        witness.push(found);
    }
    let essentially_surjective = es.ok();
    report.push_law(es);

    WeakEquivalenceWitness {
        full_faithful,
        essentially_surjective,
        surjectivity_witness: witness,
        report,
    }
}

/// A bitorsor: a carrier with commuting left and right principal groupoid
/// actions, witnessing Morita equivalence of the two groupoids.
pub struct Bitorsor {
    pub left: Arc<FiniteGroupoid>,
    pub right: Arc<FiniteGroupoid>,
    pub carrier: Vec<String>,
    /// Left action of `left`, anchored by `ρ: X → Ob(left)`.
    pub left_action: GroupoidAction,
    /// Right action of `right`, anchored by `σ: X → Ob(right)`.
    pub right_action: GroupoidAction,
}

/// Empty report iff the three bitorsor conditions hold: both actions are
/// principal over the opposite anchor, and the actions commute.
pub fn check_bitorsor(b: &Bitorsor) -> ValidationReport {
    let mut report = ValidationReport::new("bitorsor");
    report.absorb("left action", check_groupoid_action(&b.left_action));
    report.absorb("right action", check_groupoid_action(&b.right_action));

    let principal = |name: &str,
                         action: &GroupoidAction,
                         base_anchor: &[usize],
                         base_size: usize|
     -> LawReport {
        let mut law = LawReport::new(format!("{name} principal over the opposite anchor"));
        for (&(gamma, x), &img) in &action.star {
            if base_anchor[img] != base_anchor[x] {
                law.record(|| {
                    format!(
                        "opposite anchor not invariant: γ = {}, x = {}",
                        action.acting.arrows[gamma], action.carrier[x]
                    )
                });
            }
        }
        if let Some((gamma, x)) = action.free_violation() {
            law.record(|| {
                format!(
                    "not free: {} fixes {}",
                    action.acting.arrows[gamma], action.carrier[x]
                )
            });
        }
        let orbits = action.orbits();
        if orbits.len() != base_size {
            law.record(|| format!("{} orbits vs {} base points", orbits.len(), base_size));
        } else {
            let mut seen = vec![false; base_size];
            for orbit in &orbits {
                let m = base_anchor[orbit[0]];
                if orbit.iter().any(|&x| base_anchor[x] != m) || seen[m] {
                    law.record(|| "orbit is not an anchor fiber".into());
                }
                seen[m] = true;
            }
        }
        law
    };
    let left_law = principal(
        "left",
        &b.left_action,
        &b.right_action.anchor,
        b.right.object_count(),
    );
    report.push_law(left_law);
    let right_law = principal(
        "right",
        &b.right_action,
        &b.left_action.anchor,
        b.left.object_count(),
    );
    report.push_law(right_law);

    let commute = report.law("left and right actions commute");
    for (&(gamma, x), &gx) in &b.left_action.star {
        for eta in 0..b.right.arrow_count() {
            if !b.right_action.composable(eta, gx) || !b.right_action.composable(eta, x) {
                continue;
            }
            let lhs = b.right_action.star[&(eta, gx)];
            let xe = b.right_action.star[&(eta, x)];
            match b.left_action.star.get(&(gamma, xe)) {
                Some(&rhs) if rhs == lhs => {}
                _ => commute.record(|| {
                    format!(
                        "γ = {}, η = {}, x = {}",
                        b.left_action.acting.arrows[gamma],
                        b.right.arrows[eta],
                        b.left_action.carrier[x]
                    )
                }),
            }
        }
    }

    report
}

/// Morita verdict for a pullback comparison.
#[derive(Debug)]
pub enum MoritaVerdict {
    Equivalent {
        /// arrow bijection between the two pullback groupoids over the
        /// identity of the common carrier
        arrow_map: Vec<usize>,
    },
    NotEquivalent(String),
}

impl MoritaVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, MoritaVerdict::Equivalent { .. })
    }
}

/// Morita equivalence through pullbacks: `ρ⁻¹a ≅ σ⁻¹b` as groupoids over
/// the common carrier `P` (identity on objects). Brute-force search,
/// bounded at 64 arrows.
pub fn check_morita_pullback(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    carrier: &[String],
    rho: &[usize],
    sigma: &[usize],
) -> Result<MoritaVerdict> {
    let rho_s = Surjection::new(carrier.to_vec(), a.objects.clone(), rho.to_vec())?;
    let sigma_s = Surjection::new(carrier.to_vec(), b.objects.clone(), sigma.to_vec())?;
    let pa = pullback_groupoid(format!("ρ⁻¹{}", a.name), &rho_s, a)?;
    let pb = pullback_groupoid(format!("σ⁻¹{}", b.name), &sigma_s, b)?;
    if pa.arrow_count() != pb.arrow_count() {
        return Ok(MoritaVerdict::NotEquivalent(format!(
            "pullback arrow counts differ: {} vs {}",
            pa.arrow_count(),
            pb.arrow_count()
        )));
    }
    let identity: Vec<usize> = (0..carrier.len()).collect();
    match arrow_isomorphism_over(&pa, &pb, &identity)? {
        Some(arrow_map) => Ok(MoritaVerdict::Equivalent { arrow_map }),
        None => Ok(MoritaVerdict::NotEquivalent(
            "no isomorphism over the carrier".into(),
        )),
    }
}

/// The canonical bitorsor of a weak equivalence `φ: P^(1) → M^(1)`:
/// carrier `X = {(p, α): t(α) = φ(p)}`, left `P^(1)`-action
/// `γ⋆(p,α) = (t(γ), φ(γ)∘α)`, right `M^(1)`-action `(p,α)⋆β = (p, α∘β)`.
pub fn bitorsor_from_weak_equivalence(f: &GroupoidFunctor) -> Result<Bitorsor> {
    let dom = f.dom.clone();
    let cod = f.cod.clone();
    let mut carrier = Vec::new();
    let mut points = Vec::new();
    for p in 0..dom.object_count() {
        for alpha in 0..cod.arrow_count() {
            if cod.tgt[alpha] == f.obj_map[p] {
                points.push((p, alpha));
                carrier.push(format!("({},{})", dom.objects[p], cod.arrows[alpha]));
            }
        }
    }
    let index: BTreeMap<(usize, usize), usize> =
        points.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    let rho: Vec<usize> = points.iter().map(|&(p, _)| p).collect();
    let sigma: Vec<usize> = points.iter().map(|&(_, alpha)| cod.src[alpha]).collect();

    let mut left_star = BTreeMap::new();
    for gamma in 0..dom.arrow_count() {
        for (i, &(p, alpha)) in points.iter().enumerate() {
            if dom.src[gamma] == p {
                let moved = cod.compose(f.arr_map[gamma], alpha)?;
                left_star.insert((gamma, i), index[&(dom.tgt[gamma], moved)]);
            }
        }
    }
    let left_action = GroupoidAction::new(
        ActionSide::Left,
        dom.clone(),
        carrier.clone(),
        rho,
        left_star,
    )?;

    let mut right_star = BTreeMap::new();
    for beta in 0..cod.arrow_count() {
        for (i, &(p, alpha)) in points.iter().enumerate() {
            if cod.tgt[beta] == cod.src[alpha] {
                let moved = cod.compose(alpha, beta)?;
                right_star.insert((beta, i), index[&(p, moved)]);
            }
        }
    }
    let right_action = GroupoidAction::new(
        ActionSide::Right,
        cod.clone(),
        carrier.clone(),
        sigma,
        right_star,
    )?;

    Ok(Bitorsor {
        left: dom,
        right: cod,
        carrier,
        left_action,
        right_action,
    })
}

/// Existence verdict for a bitorsor between two groupoids.
pub enum BitorsorExistence {
    Yes(Box<Bitorsor>),
    No(String),
    Exhausted,
}

/// Morita invariant at desk scale: the sorted multiset of vertex-group
/// orders, one per connected component. Object counts within a component
/// are not invariant and must not enter here.
fn component_invariant(g: &FiniteGroupoid) -> Vec<usize> {
    let mut inv: Vec<usize> = g
        .components()
        .iter()
        .map(|component| {
            let o = component[0];
            g.hom_set(o, o).len()
        })
        .collect();
    inv.sort_unstable();
    inv
}

/// Search for a bitorsor: try weak-equivalence functors in both
/// directions and build the canonical bitorsor from one; rule out the
/// existence by component invariants when they disagree.
pub fn bitorsor_exists(a: Arc<FiniteGroupoid>, b: Arc<FiniteGroupoid>) -> Result<BitorsorExistence> {
    if component_invariant(&a) != component_invariant(&b) {
        // desk-scale invariant: component count with vertex group orders;
        // a genuine bitorsor induces a bijection of orbit spaces with
        // isomorphic vertex groups
        return Ok(BitorsorExistence::No(
            "component / vertex-group-order invariants differ".into(),
        ));
    }
    // a weak equivalence in either direction yields the canonical bitorsor
    // between the two groupoids (the notion is symmetric in its sides)
    for (dom, cod) in [(a.clone(), b.clone()), (b.clone(), a.clone())] {
        if let Some(f) = find_weak_equivalence(&dom, &cod)? {
            let bitorsor = bitorsor_from_weak_equivalence(&f)?;
            if check_bitorsor(&bitorsor).is_valid() {
                return Ok(BitorsorExistence::Yes(Box::new(bitorsor)));
            }
        }
    }
    Ok(BitorsorExistence::Exhausted)
}

/// Backtracking search for a weak-equivalence functor `a → b`.
pub fn find_weak_equivalence(
    a: &Arc<FiniteGroupoid>,
    b: &Arc<FiniteGroupoid>,
) -> Result<Option<GroupoidFunctor>> {
    const OBJ_BOUND: usize = 12;
    if a.object_count() > OBJ_BOUND {
        return Err(Error::SearchExhausted(format!(
            "{} objects exceed functor search bound {OBJ_BOUND}",
            a.object_count()
        )));
    }
    // map objects first, then arrows hom-set by hom-set
    fn arrows_extendable(
        a: &FiniteGroupoid,
        b: &FiniteGroupoid,
        obj_map: &[usize],
    ) -> Option<Vec<usize>> {
        // hom-set sizes must match exactly for full faithfulness
        for p in 0..a.object_count() {
            for q in 0..a.object_count() {
                if a.hom_set(p, q).len() != b.hom_set(obj_map[p], obj_map[q]).len() {
                    return None;
                }
            }
        }
        let mut arr_map = vec![usize::MAX; a.arrow_count()];
        for o in 0..a.object_count() {
            arr_map[a.unit[o]] = b.unit[obj_map[o]];
        }
        fn extend(
            a: &FiniteGroupoid,
            b: &FiniteGroupoid,
            obj_map: &[usize],
            arr_map: &mut Vec<usize>,
        ) -> bool {
            let x = match (0..a.arrow_count()).find(|&x| arr_map[x] == usize::MAX) {
                None => return true,
                Some(x) => x,
            };
            let candidates: Vec<usize> = b
                .hom_set(obj_map[a.src[x]], obj_map[a.tgt[x]])
                .into_iter()
                .collect();
            for y in candidates {
                // faithfulness: distinct parallel arrows need distinct images
                if (0..a.arrow_count()).any(|z| {
                    arr_map[z] == y && a.src[z] == a.src[x] && a.tgt[z] == a.tgt[x]
                }) {
                    continue;
                }
                arr_map[x] = y;
                let consistent = {
                    let mut ok = true;
                    'pairs: for z in 0..a.arrow_count() {
                        if arr_map[z] == usize::MAX {
                            continue;
                        }
                        for (u, v) in [(x, z), (z, x)] {
                            if a.composable(u, v) {
                                let c = a.comp[&(u, v)];
                                if arr_map[c] != usize::MAX {
                                    match b.comp.get(&(arr_map[u], arr_map[v])) {
                                        Some(&img) if img == arr_map[c] => {}
                                        _ => {
                                            ok = false;
                                            break 'pairs;
                                        }
                                    }
                                }
                            }
                        }
                    }
                    ok
                };
                if consistent && extend(a, b, obj_map, arr_map) {
                    return true;
                }
                arr_map[x] = usize::MAX;
            }
            false
        }
        if extend(a, b, obj_map, &mut arr_map) {
            Some(arr_map)
        } else {
            None
        }
    }

    let mut obj_map = vec![0usize; a.object_count()];
    fn objects(
        a: &Arc<FiniteGroupoid>,
        b: &Arc<FiniteGroupoid>,
        obj_map: &mut Vec<usize>,
        next: usize,
    ) -> Option<GroupoidFunctor> {
        if next == a.object_count() {
            if let Some(arr_map) = arrows_extendable(a, b, obj_map) {
                let f = GroupoidFunctor::new(a.clone(), b.clone(), obj_map.clone(), arr_map)
                    .expect("shapes verified");
                let w = check_weak_equivalence(&f);
                if w.is_weak_equivalence() && w.report.is_valid() {
                    return Some(f);
                }
            }
            return None;
        }
        for cand in 0..b.object_count() {
            obj_map[next] = cand;
            if let Some(f) = objects(a, b, obj_map, next + 1) {
                return Some(f);
            }
        }
        None
    }
    Ok(objects(a, b, &mut obj_map, 0))
}

/// Build the fiber product of a functor with itself: the groupoid of
/// pairs of arrows with the same image.
fn pairs_over(
    name: &str,
    f_obj: &dyn Fn(usize) -> usize,
    f_arr: &dyn Fn(usize) -> usize,
    g: &FiniteGroupoid,
) -> Result<FiniteGroupoid> {
    let mut objects = Vec::new();
    let mut obj_index = BTreeMap::new();
    for p in 0..g.object_count() {
        for q in 0..g.object_count() {
            if f_obj(p) == f_obj(q) {
                obj_index.insert((p, q), objects.len());
                objects.push(format!("({},{})", g.objects[p], g.objects[q]));
            }
        }
    }
    let mut arrows = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut arr_index = BTreeMap::new();
    for x in 0..g.arrow_count() {
        for y in 0..g.arrow_count() {
            if f_arr(x) == f_arr(y) {
                arr_index.insert((x, y), arrows.len());
                arrows.push(format!("({},{})", g.arrows[x], g.arrows[y]));
                src.push(obj_index[&(g.src[x], g.src[y])]);
                tgt.push(obj_index[&(g.tgt[x], g.tgt[y])]);
            }
        }
    }
    let mut comp = BTreeMap::new();
    for (&(x2, y2), &i2) in &arr_index {
        for (&(x1, y1), &i1) in &arr_index {
            if g.composable(x2, x1) && g.composable(y2, y1) {
                comp.insert((i2, i1), arr_index[&(g.comp[&(x2, x1)], g.comp[&(y2, y1)])]);
            }
        }
    }
    let unit = obj_index
        .keys()
        .map(|&(p, q)| arr_index[&(g.unit[p], g.unit[q])])
        .collect();
    let inv = arr_index
        .keys()
        .map(|&(x, y)| arr_index[&(g.inv[x], g.inv[y])])
        .collect();
    FiniteGroupoid::from_parts(
        name,
        objects,
        arrows,
        src,
        tgt,
        comp,
        unit,
        inv,
    )
}

/// The fibration lemma: for a fibration `π: P^(1) → Y^(1)` and a
/// surjective functor `φ: Y^(1) → M` onto an identity groupoid, the
/// inclusion `P ×_{Y^(1)} P → P ×_M P` is a weak equivalence iff `φ` is.
/// Both sides are computed and the biconditional asserted.
pub struct LemmaWeakEquiv {
    pub inclusion_is_we: bool,
    pub phi_is_we: bool,
    pub report: ValidationReport,
}

pub fn lemma_weakequiv_check(
    pi1: &GroupoidFunctor,
    phi: &GroupoidFunctor,
) -> Result<LemmaWeakEquiv> {
    // preconditions
    if let Some((g, p)) = pi1.fibration_violation() {
        return Err(Error::NotAFibration {
            arrow: pi1.cod.arrows[g].clone(),
            point: pi1.dom.objects[p].clone(),
        });
    }
    if !(0..phi.cod.arrow_count()).all(|a| phi.cod.is_unit(a)) {
        return Err(Error::PreconditionNotMet(
            "φ must land in an identity groupoid".into(),
        ));
    }
    if !phi.is_surjective_on_objects() {
        return Err(Error::PreconditionNotMet("φ must be surjective".into()));
    }
    let p_gd = &pi1.dom;

    // P ×_{Y^(1)} P and P ×_M P
    let over_y = pairs_over(
        "P×_Y P",
        &|p| pi1.obj_map[p],
        &|a| pi1.arr_map[a],
        p_gd,
    )?;
    let comp_obj: Vec<usize> = (0..p_gd.object_count())
        .map(|p| phi.obj_map[pi1.obj_map[p]])
        .collect();
    let comp_arr: Vec<usize> = (0..p_gd.arrow_count())
        .map(|a| phi.arr_map[pi1.arr_map[a]])
        .collect();
    let over_m = Arc::new(pairs_over(
        "P×_M P",
        &|p| comp_obj[p],
        &|a| comp_arr[a],
        p_gd,
    )?);

    // inclusion functor
    let mut m_obj_index = BTreeMap::new();
    {
        let mut i = 0usize;
        for p in 0..p_gd.object_count() {
            for q in 0..p_gd.object_count() {
                if comp_obj[p] == comp_obj[q] {
                    m_obj_index.insert((p, q), i);
                    i += 1;
                }
            }
        }
    }
    let mut m_arr_index = BTreeMap::new();
    {
        let mut i = 0usize;
        for x in 0..p_gd.arrow_count() {
            for y in 0..p_gd.arrow_count() {
                if comp_arr[x] == comp_arr[y] {
                    m_arr_index.insert((x, y), i);
                    i += 1;
                }
            }
        }
    }
    let mut inc_obj = Vec::new();
    for p in 0..p_gd.object_count() {
        for q in 0..p_gd.object_count() {
            if pi1.obj_map[p] == pi1.obj_map[q] {
                inc_obj.push(m_obj_index[&(p, q)]);
            }
        }
    }
    let mut inc_arr = Vec::new();
    for x in 0..p_gd.arrow_count() {
        for y in 0..p_gd.arrow_count() {
            if pi1.arr_map[x] == pi1.arr_map[y] {
                inc_arr.push(m_arr_index[&(x, y)]);
            }
        }
    }
    let inclusion = GroupoidFunctor::new(Arc::new(over_y), over_m, inc_obj, inc_arr)?;

    let w_inc = check_weak_equivalence(&inclusion);
    let w_phi = check_weak_equivalence(phi);
    let inclusion_is_we = w_inc.is_weak_equivalence();
    let phi_is_we = w_phi.is_weak_equivalence();

    let mut report = ValidationReport::new("fibration lemma");
    let bicond = report.law("inclusion w.e. ⟺ φ w.e.");
    if inclusion_is_we != phi_is_we {
        bicond.record(|| format!("inclusion: {inclusion_is_we}, φ: {phi_is_we}"));
    }
    Ok(LemmaWeakEquiv {
        inclusion_is_we,
        phi_is_we,
        report,
    })
}

/// Interpret a principal 2-bundle (a 2-group action with an invariant
/// functor to an identity groupoid `M ⇉ M`) as a PB groupoid over the
/// quotient `Y^(1) = P^(1)/G^(1)`, and decide Morita equivalence of
/// `Y^(1)` with `M` through the fibration lemma.
pub struct Principal2BundleReading {
    pub quotient: crate::action::PbGroupoid,
    pub morita_equivalent: bool,
    pub report: ValidationReport,
}

pub fn interpret_principal_2bundle(
    action: &TwoGroupAction,
    to_m_obj: &[usize],
    m_labels: Vec<String>,
) -> Result<Principal2BundleReading> {
    // invariance preconditions
    if let Some((g, p)) = free_violation(&action.act_obj) {
        return Err(Error::NotFree(format!(
            "{} fixes {}",
            action.two_group.base_group.label(g),
            action.target.objects[p]
        )));
    }
    for g in 0..action.two_group.base_group.order() {
        for p in 0..action.target.object_count() {
            if to_m_obj[action.obj(g, p)] != to_m_obj[p] {
                return Err(Error::QuotientIllDefined(format!(
                    "functor to M not invariant at {}",
                    action.target.objects[p]
                )));
            }
        }
    }
    for a in 0..action.target.arrow_count() {
        if to_m_obj[action.target.src[a]] != to_m_obj[action.target.tgt[a]] {
            return Err(Error::QuotientIllDefined(format!(
                "arrow {} does not collapse in M",
                action.target.arrows[a]
            )));
        }
    }

    let pb = quotient_pb(action)?;
    let m_gd = Arc::new(FiniteGroupoid::identity_groupoid("M", m_labels));

    // φ: Y^(1) → M induced on classes
    let mut phi_obj = vec![usize::MAX; pb.base.object_count()];
    for p in 0..action.target.object_count() {
        let c = pb.proj.obj_map[p];
        if phi_obj[c] == usize::MAX {
            phi_obj[c] = to_m_obj[p];
        } else if phi_obj[c] != to_m_obj[p] {
            return Err(Error::QuotientIllDefined("φ not constant on classes".into()));
        }
    }
    let phi_arr: Vec<usize> = (0..pb.base.arrow_count())
        .map(|a| m_gd.unit[phi_obj[pb.base.src[a]]])
        .collect();
    let phi = GroupoidFunctor::new(pb.base.clone(), m_gd, phi_obj, phi_arr)?;

    let lemma = lemma_weakequiv_check(&pb.proj, &phi)?;
    let mut report = ValidationReport::new("principal 2-bundle reading");
    let morita_equivalent = lemma.phi_is_we;
    report.absorb("lemma", lemma.report);
    report.note(if morita_equivalent {
        "Y^(1) is weak equivalent (hence Morita equivalent) to M"
    } else {
        "Y^(1) is NOT weak equivalent to M"
    });
    Ok(Principal2BundleReading {
        quotient: pb,
        morita_equivalent,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupAction};
    use crate::groupoid::fiber_product_groupoid;

    fn two_fiber_surjection() -> Surjection {
        Surjection::new(
            vec!["0a".into(), "1a".into(), "0b".into(), "1b".into()],
            vec!["a".into(), "b".into()],
            vec![0, 0, 1, 1],
        )
        .unwrap()
    }

    fn collapse_functor(pi: &Surjection) -> GroupoidFunctor {
        let y2 = Arc::new(fiber_product_groupoid("Y2", pi).unwrap());
        let m = Arc::new(FiniteGroupoid::identity_groupoid("M", pi.cod.clone()));
        let arr_map: Vec<usize> = (0..y2.arrow_count())
            .map(|a| m.unit[pi.map[y2.src[a]]])
            .collect();
        GroupoidFunctor::new(y2, m, pi.map.clone(), arr_map).unwrap()
    }

    #[test]
    fn identity_functor_is_weak_equivalence() {
        let g = Arc::new(
            FiniteGroupoid::pair_groupoid("P", vec!["a".into(), "b".into()]).unwrap(),
        );
        let w = check_weak_equivalence(&GroupoidFunctor::identity(g));
        assert!(w.is_weak_equivalence());
    }

    // Example: the collapse Y^[2] → M is a weak equivalence.
    #[test]
    fn fiber_product_collapse_is_weak_equivalence() {
        let pi = two_fiber_surjection();
        let w = check_weak_equivalence(&collapse_functor(&pi));
        assert!(w.is_weak_equivalence(), "{}", w.report);
    }

    // Oracle: hom-set comparison — a non-full inclusion fails.
    #[test]
    fn non_full_subgroupoid_inclusion_fails_fullness() {
        let big = Arc::new(
            FiniteGroupoid::pair_groupoid("P", vec!["a".into(), "b".into()]).unwrap(),
        );
        let small = Arc::new(FiniteGroupoid::identity_groupoid("I", big.objects.clone()));
        let arr_map: Vec<usize> = (0..small.arrow_count()).map(|o| big.unit[o]).collect();
        let f = GroupoidFunctor::new(small, big, vec![0, 1], arr_map).unwrap();
        let w = check_weak_equivalence(&f);
        assert!(!w.full_faithful);
        assert!(!w.report.is_valid());
    }

    // a group bitorsor: G acting on itself on both sides.
    #[test]
    fn group_self_bitorsor() {
        let g = FiniteGroup::cyclic(3);
        let bg = Arc::new(FiniteGroupoid::from_group(&g));
        let carrier = g.elements.clone();
        let mut left_star = BTreeMap::new();
        let mut right_star = BTreeMap::new();
        for gamma in 0..3usize {
            for x in 0..3usize {
                left_star.insert((gamma, x), g.mul[gamma][x]);
                right_star.insert((gamma, x), g.mul[x][gamma]);
            }
        }
        let left_action = GroupoidAction::new(
            ActionSide::Left,
            bg.clone(),
            carrier.clone(),
            vec![0; 3],
            left_star,
        )
        .unwrap();
        let right_action = GroupoidAction::new(
            ActionSide::Right,
            bg.clone(),
            carrier.clone(),
            vec![0; 3],
            right_star,
        )
        .unwrap();
        let b = Bitorsor {
            left: bg.clone(),
            right: bg,
            carrier,
            left_action,
            right_action,
        };
        assert!(check_bitorsor(&b).is_valid());
    }

    // Example Y[1]: Y^[2] vs identity(M) with P = Y, ρ = id, σ = π.
    #[test]
    fn fiber_product_morita_equivalent_to_base() {
        let pi = two_fiber_surjection();
        let y2 = fiber_product_groupoid("Y2", &pi).unwrap();
        let m = FiniteGroupoid::identity_groupoid("M", pi.cod.clone());
        let rho: Vec<usize> = (0..4).collect();
        let verdict =
            check_morita_pullback(&y2, &m, &pi.dom, &rho, &pi.map).unwrap();
        assert!(verdict.is_equivalent());
    }

    #[test]
    fn different_order_groups_not_morita_equivalent() {
        let g2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let g3 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(3));
        let verdict = check_morita_pullback(
            &g2,
            &g3,
            &["p".into()],
            &[0],
            &[0],
        )
        .unwrap();
        assert!(!verdict.is_equivalent());
        // and no bitorsor exists
        match bitorsor_exists(Arc::new(g2), Arc::new(g3)).unwrap() {
            BitorsorExistence::No(_) => {}
            _ => panic!("expected invariant mismatch"),
        }
    }

    // three-way agreement on the catalog surjections.
    #[test]
    fn three_way_agreement_fiber_products() {
        for pi in [
            two_fiber_surjection(),
            Surjection::new(
                vec!["x".into(), "y".into(), "z".into()],
                vec!["*".into()],
                vec![0, 0, 0],
            )
            .unwrap(),
            Surjection::new(vec!["u".into()], vec!["m".into()], vec![0]).unwrap(),
        ] {
            let y2 = Arc::new(fiber_product_groupoid("Y2", &pi).unwrap());
            let m = Arc::new(FiniteGroupoid::identity_groupoid("M", pi.cod.clone()));
            // weak
            let w = check_weak_equivalence(&collapse_functor(&pi));
            assert!(w.is_weak_equivalence());
            // Morita via pullbacks
            let rho: Vec<usize> = (0..pi.dom.len()).collect();
            let verdict =
                check_morita_pullback(&y2, &m, &pi.dom, &rho, &pi.map).unwrap();
            assert!(verdict.is_equivalent());
            // bitorsor
            match bitorsor_exists(y2, m).unwrap() {
                BitorsorExistence::Yes(b) => assert!(check_bitorsor(&b).is_valid()),
                _ => panic!("bitorsor should exist"),
            }
        }
    }

    #[test]
    fn lemma_weakequiv_passing_instance() {
        // P^(1) = pair(Y), π = id, φ: pair(Y) → point
        let y = vec!["a".to_string(), "b".to_string()];
        let p = Arc::new(FiniteGroupoid::pair_groupoid("P", y).unwrap());
        let pi1 = GroupoidFunctor::identity(p.clone());
        let m = Arc::new(FiniteGroupoid::identity_groupoid("M", vec!["*".into()]));
        let arr_map = vec![0; p.arrow_count()];
        let phi = GroupoidFunctor::new(p, m, vec![0, 0], arr_map).unwrap();
        let out = lemma_weakequiv_check(&pi1, &phi).unwrap();
        assert!(out.phi_is_we);
        assert!(out.inclusion_is_we);
        assert!(out.report.is_valid(), "{}", out.report);
    }

    #[test]
    fn lemma_weakequiv_failing_instance() {
        // Y^(1) = identity on two points, φ to a single point fails fullness
        let y = Arc::new(FiniteGroupoid::identity_groupoid(
            "Y",
            vec!["y1".into(), "y2".into()],
        ));
        let pi1 = GroupoidFunctor::identity(y.clone());
        let m = Arc::new(FiniteGroupoid::identity_groupoid("M", vec!["*".into()]));
        let phi = GroupoidFunctor::new(y, m, vec![0, 0], vec![0, 0]).unwrap();
        let out = lemma_weakequiv_check(&pi1, &phi).unwrap();
        assert!(!out.phi_is_we);
        assert!(!out.inclusion_is_we);
        assert!(out.report.is_valid(), "{}", out.report);
    }

    fn nw_input(g_order: usize, m_size: usize) -> (TwoGroupAction, Vec<usize>, Vec<String>) {
        use crate::two_group::{two_group_from_crossed_module, CrossedModule};
        let g = Arc::new(FiniteGroup::cyclic(g_order));
        let bundle = crate::action::PrincipalBundle::trivial(
            g.clone(),
            (0..m_size).map(|i| format!("m{i}")).collect(),
        );
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::adjoint(g.clone())).unwrap(),
        );
        // target: the fiber product groupoid P ×_M P, closed under the
        // PBgauge0 action
        let pi = Surjection::new(
            bundle.action.carrier.clone(),
            bundle.base.clone(),
            bundle.proj.clone(),
        )
        .unwrap();
        let target = Arc::new(fiber_product_groupoid("P×_MP", &pi).unwrap());
        let np = bundle.total_size();
        // index arrows by their (p,q) labels
        let mut arrow_of = BTreeMap::new();
        for a in 0..target.arrow_count() {
            arrow_of.insert((target.tgt[a], target.src[a]), a);
        }
        let mut act_rows = Vec::with_capacity(tg.arrow_count());
        for h in 0..g_order {
            for gg in 0..g_order {
                let hg = g.mul(h, gg);
                let mut row = Vec::with_capacity(target.arrow_count());
                for a in 0..target.arrow_count() {
                    let (p, q) = (target.tgt[a], target.src[a]);
                    let tp = bundle.action.apply(hg, p);
                    let tq = bundle.action.apply(gg, q);
                    row.push(arrow_of[&(tp, tq)]);
                }
                act_rows.push(row);
            }
        }
        let act_arr = GroupAction::new(tg.arrows_group.clone(), target.arrows.clone(), act_rows)
            .unwrap();
        let act_obj = GroupAction::new(
            tg.base_group.clone(),
            bundle.action.carrier.clone(),
            bundle.action.act.clone(),
        )
        .unwrap();
        let action = TwoGroupAction::new(tg, target, act_arr, act_obj).unwrap();
        let _ = np;
        (action, bundle.proj.clone(), bundle.base.clone())
    }

    #[test]
    fn principal_2bundle_reading_pbgauge0() {
        let (action, to_m, m_labels) = nw_input(2, 2);
        let reading = interpret_principal_2bundle(&action, &to_m, m_labels).unwrap();
        assert!(reading.morita_equivalent);
        assert!(reading.report.is_valid(), "{}", reading.report);
    }

    #[test]
    fn principal_2bundle_trivial_two_group() {
        use crate::two_group::{two_group_from_crossed_module, CrossedModule};
        let g = Arc::new(FiniteGroup::trivial());
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::identity(g)).unwrap(),
        );
        let target = Arc::new(FiniteGroupoid::identity_groupoid(
            "P",
            vec!["p0".into(), "p1".into()],
        ));
        let act_arr = GroupAction::trivial(tg.arrows_group.clone(), target.arrows.clone());
        let act_obj = GroupAction::trivial(tg.base_group.clone(), target.objects.clone());
        let action = TwoGroupAction::new(tg, target, act_arr, act_obj).unwrap();
        let reading = interpret_principal_2bundle(
            &action,
            &[0, 1],
            vec!["m0".into(), "m1".into()],
        )
        .unwrap();
        assert!(reading.morita_equivalent);
        assert_eq!(reading.quotient.base.object_count(), 2);
    }

    #[test]
    fn principal_2bundle_rejects_non_free() {
        use crate::two_group::{two_group_from_crossed_module, CrossedModule};
        let g = Arc::new(FiniteGroup::cyclic(2));
        let tg = Arc::new(
            two_group_from_crossed_module(&CrossedModule::identity(g)).unwrap(),
        );
        let target = Arc::new(FiniteGroupoid::identity_groupoid("P", vec!["p".into()]));
        // trivial (hence non-free) action of Z2
        let act_arr = GroupAction::trivial(tg.arrows_group.clone(), target.arrows.clone());
        let act_obj = GroupAction::trivial(tg.base_group.clone(), target.objects.clone());
        let action = TwoGroupAction::new(tg, target, act_arr, act_obj).unwrap();
        assert!(matches!(
            interpret_principal_2bundle(&action, &[0], vec!["m".into()]),
            Err(Error::NotFree(_))
        ));
    }

    // the pullback groupoid of any catalog surjection is weak equivalent
    // to what it pulls back, identity base or not
    #[test]
    fn pullback_groupoid_weak_equivalent_to_base() {
        use crate::groupoid::pullback_groupoid;
        let pi = two_fiber_surjection();
        for m in [
            Arc::new(FiniteGroupoid::identity_groupoid("M", pi.cod.clone())),
            Arc::new(FiniteGroupoid::pair_groupoid("M", pi.cod.clone()).unwrap()),
            Arc::new(FiniteGroupoid::from_group(&FiniteGroup::cyclic(2))),
        ] {
            let m = if m.object_count() == pi.cod.len() {
                m
            } else {
                continue;
            };
            let pulled = Arc::new(pullback_groupoid("pull", &pi, &m).unwrap());
            // the projection functor (y2, γ, y1) ↦ γ
            let mut arr_map = Vec::with_capacity(pulled.arrow_count());
            for y2 in 0..pi.dom.len() {
                for g in 0..m.arrow_count() {
                    for y1 in 0..pi.dom.len() {
                        if m.src[g] == pi.map[y1] && m.tgt[g] == pi.map[y2] {
                            arr_map.push(g);
                        }
                    }
                }
            }
            let f = GroupoidFunctor::new(pulled, m.clone(), pi.map.clone(), arr_map).unwrap();
            let w = check_weak_equivalence(&f);
            assert!(w.is_weak_equivalence(), "{}: {}", m.name, w.report);
        }
    }

    // composition of weak equivalences is a weak equivalence (catalog chain)
    #[test]
    fn weak_equivalences_compose() {
        let pi = two_fiber_surjection();
        let f = collapse_functor(&pi);
        // compose with the identity on M
        let id_m = GroupoidFunctor::identity(f.cod.clone());
        let comp = GroupoidFunctor::new(
            f.dom.clone(),
            id_m.cod.clone(),
            f.obj_map.iter().map(|&o| id_m.obj_map[o]).collect(),
            f.arr_map.iter().map(|&a| id_m.arr_map[a]).collect(),
        )
        .unwrap();
        assert!(check_weak_equivalence(&comp).is_weak_equivalence());
    }
}
