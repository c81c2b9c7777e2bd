//! 2-group actions on groupoids, quotients, principal bundle groupoids,
//! partial quotients, and groupoid actions with anchor.
//!
//! A 2-group action is a pair of group actions — `H⋊G` on arrows, `G` on
//! objects — whose combined map is a groupoid functor from the cartesian
//! product groupoid. Freeness (properness is automatic on finite sets)
//! makes the orbit spaces a groupoid again; quotient representatives are
//! the lexicographically least arrow labels, so serialisation and equality
//! are deterministic.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{check_action, free_violation, FiniteGroup, GroupAction};
use crate::groupoid::{check_functor, check_groupoid, FiniteGroupoid, GroupoidFunctor};
use crate::report::ValidationReport;
use crate::two_group::{two_group_from_crossed_module, CrossedModule, TwoGroup};

/// A left action of a 2-group `H⋊G ⇉ G` on a groupoid `P^(1) ⇉ P`.
#[derive(Debug, Clone)]
pub struct TwoGroupAction {
    pub two_group: Arc<TwoGroup>,
    pub target: Arc<FiniteGroupoid>,
    /// `H⋊G` acting on the arrows of `target`.
    pub act_arr: GroupAction,
    /// `G` acting on the objects of `target`.
    pub act_obj: GroupAction,
}

impl TwoGroupAction {
    pub fn new(
        two_group: Arc<TwoGroup>,
        target: Arc<FiniteGroupoid>,
        act_arr: GroupAction,
        act_obj: GroupAction,
    ) -> Result<Self> {
        if act_arr.group.order() != two_group.arrow_count()
            || act_arr.carrier.len() != target.arrow_count()
        {
            return Err(Error::TableArity {
                context: "2-group action on arrows".into(),
                expected: target.arrow_count(),
                got: act_arr.carrier.len(),
            });
        }
        if act_obj.group.order() != two_group.base_group.order()
            || act_obj.carrier.len() != target.object_count()
        {
            return Err(Error::TableArity {
                context: "2-group action on objects".into(),
                expected: target.object_count(),
                got: act_obj.carrier.len(),
            });
        }
        Ok(TwoGroupAction {
            two_group,
            target,
            act_arr,
            act_obj,
        })
    }

    /// `u·φ` for `u` an arrow index of the 2-group.
    #[inline]
    pub fn arr(&self, u: usize, phi: usize) -> usize {
        self.act_arr.apply(u, phi)
    }

    /// `g·p` for `g` a base-group index.
    #[inline]
    pub fn obj(&self, g: usize, p: usize) -> usize {
        self.act_obj.apply(g, p)
    }

    /// The trivial action of the identity 2-group of `G` induced by a plain
    /// `G`-action on objects, with `(e,g)` acting as `g` functorially on
    /// arrows — only valid when the caller supplies the arrow action.
    pub fn restrict_to_identity_bisection(&self) -> Result<TwoGroupAction> {
        let g_arc = self.two_group.base_group.clone();
        let id_tg = Arc::new(two_group_from_crossed_module(&CrossedModule::identity(
            g_arc.clone(),
        ))?);
        // identity 2-group arrow (e_H, g) has pair index g
        let act = (0..g_arc.order())
            .map(|g| {
                let u = self.two_group.pair(self.two_group.cm.h.unit, g);
                self.act_arr.act[u].clone()
            })
            .collect();
        let act_arr = GroupAction::new(
            id_tg.arrows_group.clone(),
            self.target.arrows.clone(),
            act,
        )?;
        TwoGroupAction::new(id_tg, self.target.clone(), act_arr, self.act_obj.clone())
    }
}

/// Empty report iff the combined action map is a groupoid functor over the
/// object action: source/target equivariance, unit compatibility, and
/// multiplicativity on composable pairs, plus the plain action laws.
pub fn check_two_group_action(a: &TwoGroupAction) -> ValidationReport {
    let mut report = ValidationReport::new(format!(
        "2-group action on {}",
        a.target.name
    ));
    report.absorb("arrows action", check_action(&a.act_arr));
    report.absorb("objects action", check_action(&a.act_obj));

    let tg = &a.two_group;
    let gd = &a.target;
    let n_arr = gd.arrow_count();

    let mut s_eq = crate::report::LawReport::new("source equivariance s(u·φ) = s(u)·s(φ)");
    let mut t_eq = crate::report::LawReport::new("target equivariance t(u·φ) = t(u)·t(φ)");
    for u in 0..tg.arrow_count() {
        for phi in 0..n_arr {
            let moved = a.arr(u, phi);
            if gd.src[moved] != a.obj(tg.s_of(u), gd.src[phi]) {
                s_eq.record(|| {
                    format!("u = {}, φ = {}", tg.groupoid.arrows[u], gd.arrows[phi])
                });
            }
            if gd.tgt[moved] != a.obj(tg.t_of(u), gd.tgt[phi]) {
                t_eq.record(|| {
                    format!("u = {}, φ = {}", tg.groupoid.arrows[u], gd.arrows[phi])
                });
            }
        }
    }
    report.push_law(s_eq);
    report.push_law(t_eq);

    let unit_c = report.law("unit compatibility e(g)·1_p = 1_{g·p}");
    for g in 0..tg.base_group.order() {
        for p in 0..gd.object_count() {
            if a.arr(tg.e_of(g), gd.unit[p]) != gd.unit[a.obj(g, p)] {
                unit_c.record(|| format!("g = {}, p = {}", tg.base_group.label(g), gd.objects[p]));
            }
        }
    }

    let mult = report.law("multiplicativity (u2∘u1)·(φ2∘φ1) = (u2·φ2)∘(u1·φ1)");
    let tg_comp: Vec<(usize, usize, usize)> = tg
        .groupoid
        .comp
        .iter()
        .map(|(&(b, a2), &c)| (b, a2, c))
        .collect();
    let gd_comp: Vec<(usize, usize, usize)> =
        gd.comp.iter().map(|(&(b, a2), &c)| (b, a2, c)).collect();
    for &(u2, u1, uc) in &tg_comp {
        for &(p2, p1, pc) in &gd_comp {
            let lhs = a.arr(uc, pc);
            let r2 = a.arr(u2, p2);
            let r1 = a.arr(u1, p1);
            match gd.comp.get(&(r2, r1)) {
                Some(&rhs) if rhs == lhs => {}
                Some(_) => mult.record(|| {
                    format!(
                        "u2 = {}, u1 = {}, φ2 = {}, φ1 = {}",
                        tg.groupoid.arrows[u2],
                        tg.groupoid.arrows[u1],
                        gd.arrows[p2],
                        gd.arrows[p1]
                    )
                }),
                None => mult.record(|| {
                    format!(
                        "images not composable: u2·φ2 = {}, u1·φ1 = {}",
                        gd.arrows[r2], gd.arrows[r1]
                    )
                }),
            }
        }
    }

    report
}

/// A principal bundle groupoid: a free 2-group action together with its
/// base groupoid and the projection functor.
#[derive(Debug, Clone)]
pub struct PbGroupoid {
    pub action: TwoGroupAction,
    pub base: Arc<FiniteGroupoid>,
    pub proj: GroupoidFunctor,
}

impl PbGroupoid {
    pub fn two_group(&self) -> &Arc<TwoGroup> {
        &self.action.two_group
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.action.target
    }
}

/// Full audit: action laws, freeness at both levels, projection functor
/// laws, invariance, induced orbit bijections, the finite fibration
/// property, and the orbit-counting identity
/// `|P^(1)| = |H⋊G| · |M^(1)|`.
pub fn check_pb_groupoid(p: &PbGroupoid) -> ValidationReport {
    let mut report = ValidationReport::new(format!(
        "PB groupoid {} → {}",
        p.target().name,
        p.base.name
    ));
    report.absorb("action", check_two_group_action(&p.action));
    report.absorb("base", check_groupoid(&p.base));
    report.absorb("proj", check_functor(&p.proj));

    let free = report.law("freeness");
    if let Some((u, phi)) = free_violation(&p.action.act_arr) {
        free.record(|| {
            format!(
                "arrow action: {} fixes {}",
                p.two_group().groupoid.arrows[u],
                p.target().arrows[phi]
            )
        });
    }
    if let Some((g, pt)) = free_violation(&p.action.act_obj) {
        free.record(|| {
            format!(
                "object action: {} fixes {}",
                p.two_group().base_group.label(g),
                p.target().objects[pt]
            )
        });
    }

    let inv = report.law("projection invariance");
    for u in 0..p.two_group().arrow_count() {
        for phi in 0..p.target().arrow_count() {
            if p.proj.arr_map[p.action.arr(u, phi)] != p.proj.arr_map[phi] {
                inv.record(|| format!("u = {u}, φ = {}", p.target().arrows[phi]));
            }
        }
    }
    for g in 0..p.two_group().base_group.order() {
        for pt in 0..p.target().object_count() {
            if p.proj.obj_map[p.action.obj(g, pt)] != p.proj.obj_map[pt] {
                inv.record(|| format!("g = {g}, p = {}", p.target().objects[pt]));
            }
        }
    }

    let bij = report.law("induced orbit bijections");
    let arr_orbits = p.action.act_arr.orbits();
    let obj_orbits = p.action.act_obj.orbits();
    if arr_orbits.len() != p.base.arrow_count() {
        bij.record(|| {
            format!(
                "{} arrow orbits vs {} base arrows",
                arr_orbits.len(),
                p.base.arrow_count()
            )
        });
    } else {
        let mut seen = vec![false; p.base.arrow_count()];
        for orbit in &arr_orbits {
            let img = p.proj.arr_map[orbit[0]];
            if seen[img] {
                bij.record(|| format!("orbit of {} not separated", p.target().arrows[orbit[0]]));
            }
            seen[img] = true;
        }
    }
    if obj_orbits.len() != p.base.object_count() {
        bij.record(|| {
            format!(
                "{} object orbits vs {} base objects",
                obj_orbits.len(),
                p.base.object_count()
            )
        });
    } else {
        let mut seen = vec![false; p.base.object_count()];
        for orbit in &obj_orbits {
            let img = p.proj.obj_map[orbit[0]];
            if seen[img] {
                bij.record(|| format!("object orbit of {} not separated", p.target().objects[orbit[0]]));
            }
            seen[img] = true;
        }
    }

    let fib = report.law("fibration: lifts with prescribed source");
    if let Some((g, pt)) = p.proj.fibration_violation() {
        fib.record(|| format!("γ = {}, p = {}", p.base.arrows[g], p.target().objects[pt]));
    }

    let count = report.law("orbit counting |P^(1)| = |H⋊G|·|M^(1)|");
    if p.target().arrow_count() != p.two_group().arrow_count() * p.base.arrow_count() {
        count.record(|| {
            format!(
                "{} ≠ {}·{}",
                p.target().arrow_count(),
                p.two_group().arrow_count(),
                p.base.arrow_count()
            )
        });
    }

    report
}

fn canonical_orbit_reps(orbits: &[Vec<usize>], labels: &[String]) -> Vec<usize> {
    orbits
        .iter()
        .map(|orbit| {
            *orbit
                .iter()
                .min_by(|&&a, &&b| labels[a].cmp(&labels[b]))
                .expect("orbits nonempty")
        })
        .collect()
}

/// Quotient a free 2-group action into a principal bundle groupoid.
///
/// Builds `M^(1) = P^(1)/R^(1)` and `M = P/R` with the induced structure,
/// verifying well-definedness of every induced table; the class functor is
/// returned as the projection and is a fibration by construction (checked).
pub fn quotient_pb(a: &TwoGroupAction) -> Result<PbGroupoid> {
    if let Some((u, phi)) = free_violation(&a.act_arr) {
        return Err(Error::NotFree(format!(
            "{} fixes arrow {}",
            a.two_group.groupoid.arrows[u],
            a.target.arrows[phi]
        )));
    }
    if let Some((g, p)) = free_violation(&a.act_obj) {
        return Err(Error::NotFree(format!(
            "{} fixes object {}",
            a.two_group.base_group.label(g),
            a.target.objects[p]
        )));
    }
    let gd = &a.target;

    let obj_orbits = a.act_obj.orbits();
    let obj_reps = canonical_orbit_reps(&obj_orbits, &gd.objects);
    let mut obj_class = vec![usize::MAX; gd.object_count()];
    for (c, orbit) in obj_orbits.iter().enumerate() {
        for &p in orbit {
            obj_class[p] = c;
        }
    }

    let arr_orbits = a.act_arr.orbits();
    let arr_reps = canonical_orbit_reps(&arr_orbits, &gd.arrows);
    let mut arr_class = vec![usize::MAX; gd.arrow_count()];
    for (c, orbit) in arr_orbits.iter().enumerate() {
        for &phi in orbit {
            arr_class[phi] = c;
        }
    }

    // induced src/tgt, checked well-defined over every member
    let mut src = vec![usize::MAX; arr_orbits.len()];
    let mut tgt = vec![usize::MAX; arr_orbits.len()];
    for (c, orbit) in arr_orbits.iter().enumerate() {
        for &phi in orbit {
            let s = obj_class[gd.src[phi]];
            let t = obj_class[gd.tgt[phi]];
            if src[c] == usize::MAX {
                src[c] = s;
                tgt[c] = t;
            } else if src[c] != s || tgt[c] != t {
                return Err(Error::QuotientIllDefined(format!(
                    "src/tgt of class of {} depend on the representative",
                    gd.arrows[arr_reps[c]]
                )));
            }
        }
    }

    // induced composition: every compatible representative pair must agree
    let mut comp: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for cb in 0..arr_orbits.len() {
        for ca in 0..arr_orbits.len() {
            if src[cb] != tgt[ca] {
                continue;
            }
            let mut value: Option<usize> = None;
            for &beta in &arr_orbits[cb] {
                for &alpha in &arr_orbits[ca] {
                    if gd.src[beta] == gd.tgt[alpha] {
                        let composite = arr_class[gd.comp[&(beta, alpha)]];
                        match value {
                            None => value = Some(composite),
                            Some(v) if v != composite => {
                                return Err(Error::IllDefinedComposition(format!(
                                    "[{}]∘[{}]",
                                    gd.arrows[arr_reps[cb]], gd.arrows[arr_reps[ca]]
                                )))
                            }
                            _ => {}
                        }
                    }
                }
            }
            let v = value.ok_or_else(|| {
                Error::IllDefinedComposition(format!(
                    "no composable representatives for [{}]∘[{}]",
                    gd.arrows[arr_reps[cb]], gd.arrows[arr_reps[ca]]
                ))
            })?;
            comp.insert((cb, ca), v);
        }
    }

    let objects: Vec<String> = obj_reps
        .iter()
        .map(|&p| format!("[{}]", gd.objects[p]))
        .collect();
    let arrows: Vec<String> = arr_reps
        .iter()
        .map(|&phi| format!("[{}]", gd.arrows[phi]))
        .collect();
    let unit: Vec<usize> = obj_reps.iter().map(|&p| arr_class[gd.unit[p]]).collect();
    let inv: Vec<usize> = arr_reps.iter().map(|&phi| arr_class[gd.inv[phi]]).collect();

    let base = Arc::new(FiniteGroupoid::from_parts(
        format!("{}/{}", gd.name, a.two_group.groupoid.name),
        objects,
        arrows,
        src,
        tgt,
        comp,
        unit,
        inv,
    )?);
    let proj = GroupoidFunctor::new(gd.clone(), base.clone(), obj_class, arr_class)?;
    Ok(PbGroupoid {
        action: a.clone(),
        base,
        proj,
    })
}

/// Partial quotient of a PB groupoid: the quotient by the identity
/// bisection `{e_H}⋊G` only. The result is itself a principal `G`-bundle
/// groupoid whose projection is the class functor `Q`.
///
/// Only freeness of the restricted `G`-action is required; the report notes
/// when the full action is not free but the restriction is.
pub struct PartialQuotient {
    /// The `G`-restricted action packaged as a PB groupoid; its `base` is
    /// `P^(1)/_G` and its `proj` is `Q: P^(1) → P^(1)/_G`.
    pub pb: PbGroupoid,
    pub report: ValidationReport,
}

pub fn partial_quotient(p: &PbGroupoid) -> Result<PartialQuotient> {
    let restricted = p.action.restrict_to_identity_bisection()?;
    if let Some((g, phi)) = free_violation(&restricted.act_arr) {
        return Err(Error::NotFree(format!(
            "(e,{}) fixes arrow {}",
            restricted.two_group.base_group.label(g),
            restricted.target.arrows[phi]
        )));
    }
    let pb = quotient_pb(&restricted)?;
    let mut report = ValidationReport::new(format!("partial quotient of {}", p.target().name));
    report.absorb("principal G-bundle groupoid", check_pb_groupoid(&pb));
    if free_violation(&p.action.act_arr).is_some() {
        report.note(
            "full 2-group action is not free; only the identity-bisection restriction is, \
             which is all the partial quotient requires",
        );
    }
    // objects P/G must biject with the base objects M of the ambient PB groupoid
    let obj_matches = pb.base.object_count() == p.base.object_count();
    let law = report.law("P/G ≅ M object count");
    if !obj_matches {
        law.record(|| {
            format!(
                "{} G-orbits vs {} base objects",
                pb.base.object_count(),
                p.base.object_count()
            )
        });
    }
    Ok(PartialQuotient { pb, report })
}

/// A plain principal bundle `G ↷ P → M` at level zero.
#[derive(Debug, Clone)]
pub struct PrincipalBundle {
    pub group: Arc<FiniteGroup>,
    pub action: GroupAction,
    pub base: Vec<String>,
    /// `proj[p]` = index into `base`
    pub proj: Vec<usize>,
}

impl PrincipalBundle {
    pub fn new(
        group: Arc<FiniteGroup>,
        action: GroupAction,
        base: Vec<String>,
        proj: Vec<usize>,
    ) -> Result<Self> {
        if action.group.order() != group.order() {
            return Err(Error::TableArity {
                context: "principal bundle action".into(),
                expected: group.order(),
                got: action.group.order(),
            });
        }
        if proj.len() != action.carrier.len() {
            return Err(Error::TableArity {
                context: "principal bundle projection".into(),
                expected: action.carrier.len(),
                got: proj.len(),
            });
        }
        Ok(PrincipalBundle {
            group,
            action,
            base,
            proj,
        })
    }

    /// The trivial bundle `G×M → M` with left translation on the fiber.
    pub fn trivial(group: Arc<FiniteGroup>, base: Vec<String>) -> Self {
        let mut carrier = Vec::new();
        for g in 0..group.order() {
            for m in &base {
                carrier.push(format!("({},{})", group.label(g), m));
            }
        }
        let nb = base.len();
        let act = (0..group.order())
            .map(|g| {
                (0..carrier.len())
                    .map(|p| {
                        let (k, m) = (p / nb, p % nb);
                        group.mul(g, k) * nb + m
                    })
                    .collect()
            })
            .collect();
        let action = GroupAction::new(group.clone(), carrier.clone(), act).expect("trivial bundle");
        let proj = (0..carrier.len()).map(|p| p % nb).collect();
        PrincipalBundle {
            group,
            action,
            base,
            proj,
        }
    }

    pub fn total_size(&self) -> usize {
        self.action.carrier.len()
    }

    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new("principal bundle");
        report.absorb("action", check_action(&self.action));
        let free = report.law("freeness");
        if let Some((g, p)) = free_violation(&self.action) {
            free.record(|| {
                format!(
                    "{} fixes {}",
                    self.group.label(g),
                    self.action.carrier[p]
                )
            });
        }
        let inv = report.law("projection invariance");
        for g in 0..self.group.order() {
            for p in 0..self.total_size() {
                if self.proj[self.action.apply(g, p)] != self.proj[p] {
                    inv.record(|| format!("g = {}, p = {}", g, self.action.carrier[p]));
                }
            }
        }
        let bij = report.law("P/G ≅ M");
        let orbits = self.action.orbits();
        if orbits.len() != self.base.len() {
            bij.record(|| format!("{} orbits vs {} base points", orbits.len(), self.base.len()));
        } else {
            let mut seen = vec![false; self.base.len()];
            for orbit in &orbits {
                let m = self.proj[orbit[0]];
                if seen[m] {
                    bij.record(|| format!("orbit at {} not separated", self.action.carrier[orbit[0]]));
                }
                seen[m] = true;
            }
        }
        report
    }
}

/// The PB groupoid of a principal bundle: `G⋊G` acting on the pair
/// groupoid of `P` by `(h,g)·(p,q) = (hg·p, g·q)` over `g·p`.
pub fn pb_groupoid_from_principal_bundle(bundle: &PrincipalBundle) -> Result<PbGroupoid> {
    let audit = bundle.check();
    if !audit.is_valid() {
        return Err(Error::NotFree(
            audit.first_witness().unwrap_or("invalid bundle").to_string(),
        ));
    }
    let g_arc = bundle.group.clone();
    let tg = Arc::new(two_group_from_crossed_module(&CrossedModule::adjoint(
        g_arc.clone(),
    ))?);
    let pair_gd = Arc::new(FiniteGroupoid::pair_groupoid(
        format!("P({})", bundle.action.carrier.len()),
        bundle.action.carrier.clone(),
    )?);
    let np = bundle.total_size();
    let ng = g_arc.order();
    // arrow (p,q) of the pair groupoid has index p·np + q
    let mut act = Vec::with_capacity(tg.arrow_count());
    for h in 0..ng {
        for g in 0..ng {
            let hg = g_arc.mul(h, g);
            let mut row = Vec::with_capacity(np * np);
            for p in 0..np {
                for q in 0..np {
                    let tp = bundle.action.apply(hg, p);
                    let tq = bundle.action.apply(g, q);
                    row.push(tp * np + tq);
                }
            }
            act.push(row);
        }
    }
    let act_arr = GroupAction::new(tg.arrows_group.clone(), pair_gd.arrows.clone(), act)?;
    let act_obj = GroupAction::new(
        tg.base_group.clone(),
        bundle.action.carrier.clone(),
        bundle.action.act.clone(),
    )?;
    let action = TwoGroupAction::new(tg, pair_gd, act_arr, act_obj)?;
    quotient_pb(&action)
}

/// Which side a groupoid acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSide {
    Left,
    Right,
}

/// An action of a groupoid `G^(1) ⇉ G` on a finite set with anchor
/// `ρ: B → G`. Left actions pair `(γ, b)` with `s(γ) = ρ(b)`; right
/// actions pair `(b, γ)` with `ρ(b) = t(γ)`.
#[derive(Debug, Clone)]
pub struct GroupoidAction {
    pub side: ActionSide,
    pub acting: Arc<FiniteGroupoid>,
    pub carrier: Vec<String>,
    pub anchor: Vec<usize>,
    /// left: `(γ, b) ↦ γ⋆b`; right: `(b, γ) ↦ b⋆γ` stored as `(γ, b)` keys.
    pub star: BTreeMap<(usize, usize), usize>,
}

impl GroupoidAction {
    pub fn new(
        side: ActionSide,
        acting: Arc<FiniteGroupoid>,
        carrier: Vec<String>,
        anchor: Vec<usize>,
        star: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        if anchor.len() != carrier.len() {
            return Err(Error::TableArity {
                context: "groupoid action anchor".into(),
                expected: carrier.len(),
                got: anchor.len(),
            });
        }
        if let Some(&bad) = anchor.iter().find(|&&v| v >= acting.object_count()) {
            return Err(Error::IndexRange {
                context: "groupoid action anchor".into(),
                index: bad,
                size: acting.object_count(),
            });
        }
        let action = GroupoidAction {
            side,
            acting,
            carrier,
            anchor,
            star,
        };
        // star must be defined exactly on the matching pairs
        for gamma in 0..action.acting.arrow_count() {
            for b in 0..action.carrier.len() {
                let should = action.composable(gamma, b);
                let has = action.star.contains_key(&(gamma, b));
                if should != has {
                    return Err(Error::CompositionDomain(format!(
                        "star {} defined ≠ composable at (γ={}, b={})",
                        if has { "is" } else { "is not" },
                        action.acting.arrows[gamma],
                        action.carrier[b]
                    )));
                }
            }
        }
        Ok(action)
    }

    /// Is `γ⋆b` (resp. `b⋆γ`) defined?
    pub fn composable(&self, gamma: usize, b: usize) -> bool {
        match self.side {
            ActionSide::Left => self.acting.src[gamma] == self.anchor[b],
            ActionSide::Right => self.acting.tgt[gamma] == self.anchor[b],
        }
    }

    pub fn apply(&self, gamma: usize, b: usize) -> Result<usize> {
        self.star
            .get(&(gamma, b))
            .copied()
            .ok_or_else(|| Error::NotComposable {
                after: self.acting.arrows[gamma].clone(),
                before: self.carrier[b].clone(),
            })
    }

    /// Orbit partition of the carrier.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.carrier.len();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for b in 0..n {
            if class[b] != usize::MAX {
                continue;
            }
            let mut stack = vec![b];
            class[b] = next;
            while let Some(x) = stack.pop() {
                for (&(_, src), &img) in self.star.iter().filter(|(&(_, s), _)| s == x) {
                    debug_assert_eq!(src, x);
                    if class[img] == usize::MAX {
                        class[img] = next;
                        stack.push(img);
                    }
                }
            }
            next += 1;
        }
        let mut out = vec![Vec::new(); next];
        for b in 0..n {
            out[class[b]].push(b);
        }
        out
    }

    /// A witness `(γ, b)` with `γ` not a unit and `γ⋆b = b`, if any.
    pub fn free_violation(&self) -> Option<(usize, usize)> {
        self.star
            .iter()
            .find(|(&(g, b), &img)| img == b && !self.acting.is_unit(g))
            .map(|(&(g, b), _)| (g, b))
    }
}

/// Empty report iff the anchor and compatibility laws of a groupoid action
/// hold (conditions 1–2 plus unit neutrality).
pub fn check_groupoid_action(a: &GroupoidAction) -> ValidationReport {
    let mut report = ValidationReport::new("groupoid action");
    let gd = &a.acting;

    let anchor = report.law(match a.side {
        ActionSide::Left => "anchor ρ(γ⋆b) = t(γ)",
        ActionSide::Right => "anchor ρ(b⋆γ) = s(γ)",
    });
    for (&(gamma, b), &img) in &a.star {
        let expect = match a.side {
            ActionSide::Left => gd.tgt[gamma],
            ActionSide::Right => gd.src[gamma],
        };
        if a.anchor[img] != expect {
            anchor.record(|| format!("γ = {}, b = {}", gd.arrows[gamma], a.carrier[b]));
        }
    }

    let units = report.law("units act neutrally");
    for b in 0..a.carrier.len() {
        let u = gd.unit[a.anchor[b]];
        if a.star.get(&(u, b)) != Some(&b) {
            units.record(|| a.carrier[b].clone());
        }
    }

    let compat = report.law("compatibility with composition");
    for (&(g1, b), &b1) in &a.star {
        for g2 in 0..gd.arrow_count() {
            if !a.composable(g2, b1) {
                continue;
            }
            let lhs = a.star[&(g2, b1)];
            let composed = match a.side {
                ActionSide::Left => gd.comp.get(&(g2, g1)),
                ActionSide::Right => gd.comp.get(&(g1, g2)),
            };
            match composed {
                Some(&gg) => {
                    if a.star.get(&(gg, b)) != Some(&lhs) {
                        compat.record(|| {
                            format!(
                                "γ2 = {}, γ1 = {}, b = {}",
                                gd.arrows[g2], gd.arrows[g1], a.carrier[b]
                            )
                        });
                    }
                }
                None => compat.record(|| {
                    format!(
                        "actions compose but arrows do not: γ2 = {}, γ1 = {}",
                        gd.arrows[g2], gd.arrows[g1]
                    )
                }),
            }
        }
    }

    report
}

/// A principal groupoid bundle: a groupoid action plus a projection whose
/// fibers are exactly the orbits.
#[derive(Debug, Clone)]
pub struct PrincipalGroupoidBundle {
    pub action: GroupoidAction,
    pub base: Vec<String>,
    pub pi: Vec<usize>,
}

/// Empty report iff the groupoid action laws hold, `Π` is constant on
/// orbits, the induced map `B/G^(1) → M` is bijective, and the action is
/// free.
pub fn check_principal_groupoid_bundle(b: &PrincipalGroupoidBundle) -> ValidationReport {
    let mut report = ValidationReport::new("principal groupoid bundle");
    report.absorb("action", check_groupoid_action(&b.action));

    let inv = report.law("Π constant on orbits");
    for (&(gamma, x), &img) in &b.action.star {
        if b.pi[img] != b.pi[x] {
            inv.record(|| {
                format!(
                    "γ = {}, b = {}",
                    b.action.acting.arrows[gamma], b.action.carrier[x]
                )
            });
        }
    }

    let bij = report.law("B/G^(1) ≅ M");
    let orbits = b.action.orbits();
    if orbits.len() != b.base.len() {
        bij.record(|| format!("{} orbits vs {} base points", orbits.len(), b.base.len()));
    } else {
        let mut seen = vec![false; b.base.len()];
        for orbit in &orbits {
            let m = b.pi[orbit[0]];
            if seen[m] {
                bij.record(|| format!("orbit of {} not separated", b.action.carrier[orbit[0]]));
            }
            seen[m] = true;
        }
    }

    let free = report.law("freeness");
    if let Some((g, x)) = b.action.free_violation() {
        free.record(|| {
            format!(
                "{} fixes {}",
                b.action.acting.arrows[g], b.action.carrier[x]
            )
        });
    }

    report
}
