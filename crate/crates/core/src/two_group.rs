//! Crossed modules, 2-groups, and the equivalence between them.
//!
//! A crossed module `(H, G, C, d)` satisfies
//! `d(C_g h) = g·d(h)·g⁻¹` and `C_{d(h)}h' = h·h'·h⁻¹`.
//! Its 2-group is the groupoid with arrows `H×G` over `G`,
//! `s(h,g) = g`, `t(h,g) = d(h)·g`, composition `(h2, d(h1)g1)∘(h1,g1) =
//! (h2·h1, g1)`, and the semidirect product as group structure on arrows.
//!
//! The canonical carrier of every 2-group here is `H×G`; raw group-groupoids
//! are accepted only as input to [`crossed_module_from_two_group`] and
//! [`phi_iso`], which normalise them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    check_action, check_group, check_hom, group_isomorphism, semidirect_product, FiniteGroup,
    GroupAction, GroupHom,
};
use crate::groupoid::{check_groupoid, FiniteGroupoid, GroupoidFunctor};
use crate::report::ValidationReport;

/// A crossed module `(H, G, C, d)`.
#[derive(Debug, Clone)]
pub struct CrossedModule {
    pub name: String,
    pub h: Arc<FiniteGroup>,
    pub g: Arc<FiniteGroup>,
    /// Action of `G` on the elements of `H` (one permutation of H per g).
    pub action: GroupAction,
    /// `d: H → G`.
    pub d: GroupHom,
}

impl CrossedModule {
    pub fn new(
        name: impl Into<String>,
        h: Arc<FiniteGroup>,
        g: Arc<FiniteGroup>,
        action: GroupAction,
        d: GroupHom,
    ) -> Result<Self> {
        if action.group.order() != g.order() || action.carrier.len() != h.order() {
            return Err(Error::TableArity {
                context: "crossed module action".into(),
                expected: g.order(),
                got: action.group.order(),
            });
        }
        if d.map.len() != h.order() {
            return Err(Error::TableArity {
                context: "crossed module d".into(),
                expected: h.order(),
                got: d.map.len(),
            });
        }
        Ok(CrossedModule {
            name: name.into(),
            h,
            g,
            action,
            d,
        })
    }

    #[inline]
    pub fn c(&self, g: usize, h: usize) -> usize {
        self.action.apply(g, h)
    }

    #[inline]
    pub fn d_of(&self, h: usize) -> usize {
        self.d.map[h]
    }

    /// Crossed module of a normal subgroup: `d` the inclusion, `C`
    /// conjugation. `member[i]` gives the index of `h.elements[i]` in `g`.
    pub fn normal_subgroup(
        name: impl Into<String>,
        h: Arc<FiniteGroup>,
        g: Arc<FiniteGroup>,
        member: Vec<usize>,
    ) -> Result<Self> {
        let d = GroupHom::new(h.clone(), g.clone(), member.clone())?;
        let mut act = Vec::with_capacity(g.order());
        for gi in 0..g.order() {
            let mut row = Vec::with_capacity(h.order());
            for hi in 0..h.order() {
                let conj = g.mul(g.mul(gi, member[hi]), g.inv(gi));
                let back = member
                    .iter()
                    .position(|&m| m == conj)
                    .ok_or_else(|| Error::Other(format!("{} is not normal", h.name)))?;
                row.push(back);
            }
            act.push(row);
        }
        let action = GroupAction::new(g.clone(), h.elements.clone(), act)?;
        CrossedModule::new(name, h, g, action, d)
    }

    /// The identity crossed module `({e}, G)`.
    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let h = Arc::new(FiniteGroup::trivial());
        let action = GroupAction::trivial(g.clone(), h.elements.clone());
        let d = GroupHom::trivial(h.clone(), g.clone());
        CrossedModule {
            name: format!("1→{}", g.name),
            h,
            g,
            action,
            d,
        }
    }

    /// The crossed module `G = G` with `d = id` and `C` conjugation, whose
    /// 2-group `G⋊G` is the pair groupoid of `G`.
    pub fn adjoint(g: Arc<FiniteGroup>) -> Self {
        let action = GroupAction::conjugation(g.clone());
        let d = GroupHom::identity(g.clone());
        CrossedModule {
            name: format!("{0}◁{0}", g.name),
            h: g.clone(),
            g,
            action,
            d,
        }
    }
}

/// Empty report iff both crossed-module axioms hold (plus the action and
/// hom laws of the components, absorbed for convenience).
pub fn check_crossed_module(cm: &CrossedModule) -> ValidationReport {
    let mut report = ValidationReport::new(format!("crossed module {}", cm.name));
    report.absorb("H", check_group(&cm.h));
    report.absorb("G", check_group(&cm.g));
    report.absorb("C", check_action(&cm.action));
    report.absorb("d", check_hom(&cm.d));

    let auto = report.law("C acts by automorphisms");
    for g in 0..cm.g.order() {
        for a in 0..cm.h.order() {
            for b in 0..cm.h.order() {
                if cm.c(g, cm.h.mul(a, b)) != cm.h.mul(cm.c(g, a), cm.c(g, b)) {
                    auto.record(|| {
                        format!("C_{} not multiplicative at ({},{})", cm.g.label(g), a, b)
                    });
                }
            }
        }
    }

    let first = report.law("d(C_g h) = g·d(h)·g⁻¹");
    for g in 0..cm.g.order() {
        for h in 0..cm.h.order() {
            let lhs = cm.d_of(cm.c(g, h));
            let rhs = cm.g.mul(cm.g.mul(g, cm.d_of(h)), cm.g.inv(g));
            if lhs != rhs {
                first.record(|| format!("(g,h) = ({},{})", cm.g.label(g), cm.h.label(h)));
            }
        }
    }

    let second = report.law("C_{d(h)}h' = h·h'·h⁻¹");
    for h in 0..cm.h.order() {
        for hp in 0..cm.h.order() {
            let lhs = cm.c(cm.d_of(h), hp);
            let rhs = cm.h.mul(cm.h.mul(h, hp), cm.h.inv(h));
            if lhs != rhs {
                second.record(|| format!("(h,h') = ({},{})", cm.h.label(h), cm.h.label(hp)));
            }
        }
    }

    report
}

/// A 2-group in canonical form: the crossed module it came from, the
/// semidirect product on arrows, and the groupoid `H×G ⇉ G`.
///
/// Arrow index `(h,g) = h·|G| + g` agrees between the group and the
/// groupoid; object indices are `G`'s element indices.
#[derive(Debug, Clone)]
pub struct TwoGroup {
    pub cm: CrossedModule,
    pub arrows_group: Arc<FiniteGroup>,
    pub base_group: Arc<FiniteGroup>,
    pub groupoid: Arc<FiniteGroupoid>,
}

impl TwoGroup {
    #[inline]
    pub fn pair(&self, h: usize, g: usize) -> usize {
        h * self.cm.g.order() + g
    }

    #[inline]
    pub fn h_of(&self, arrow: usize) -> usize {
        arrow / self.cm.g.order()
    }

    #[inline]
    pub fn g_of(&self, arrow: usize) -> usize {
        arrow % self.cm.g.order()
    }

    /// Source `s(h,g) = g`.
    #[inline]
    pub fn s_of(&self, arrow: usize) -> usize {
        self.g_of(arrow)
    }

    /// Target `t(h,g) = d(h)·g`.
    #[inline]
    pub fn t_of(&self, arrow: usize) -> usize {
        self.cm.g.mul(self.cm.d_of(self.h_of(arrow)), self.g_of(arrow))
    }

    /// Unit section `e(g) = (e_H, g)`.
    #[inline]
    pub fn e_of(&self, g: usize) -> usize {
        self.pair(self.cm.h.unit, g)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows_group.order()
    }

    /// The structure maps as group homomorphisms.
    pub fn structure_homs(&self) -> (GroupHom, GroupHom, GroupHom, GroupHom) {
        let n = self.arrow_count();
        let s = GroupHom {
            dom: self.arrows_group.clone(),
            cod: self.base_group.clone(),
            map: (0..n).map(|a| self.s_of(a)).collect(),
        };
        let t = GroupHom {
            dom: self.arrows_group.clone(),
            cod: self.base_group.clone(),
            map: (0..n).map(|a| self.t_of(a)).collect(),
        };
        let e = GroupHom {
            dom: self.base_group.clone(),
            cod: self.arrows_group.clone(),
            map: (0..self.base_group.order()).map(|g| self.e_of(g)).collect(),
        };
        let inv = GroupHom {
            dom: self.arrows_group.clone(),
            cod: self.arrows_group.clone(),
            map: self.groupoid.inv.clone(),
        };
        (s, t, e, inv)
    }
}

/// Build the canonical 2-group of a crossed module.
pub fn two_group_from_crossed_module(cm: &CrossedModule) -> Result<TwoGroup> {
    let axioms = check_crossed_module(cm);
    if !axioms.is_valid() {
        return Err(Error::InvalidCrossedModule(
            axioms.first_witness().unwrap_or("axiom failure").to_string(),
        ));
    }
    let arrows_group = Arc::new(semidirect_product(&cm.h, &cm.g, &cm.action)?);
    let ng = cm.g.order();
    let nh = cm.h.order();
    let pair = |h: usize, g: usize| h * ng + g;
    let d = |h: usize| cm.d.map[h];

    let objects = cm.g.elements.clone();
    let arrows = arrows_group.elements.clone();
    let mut src = Vec::with_capacity(nh * ng);
    let mut tgt = Vec::with_capacity(nh * ng);
    for h in 0..nh {
        for g in 0..ng {
            src.push(g);
            tgt.push(cm.g.mul(d(h), g));
        }
    }
    let mut comp = BTreeMap::new();
    for h2 in 0..nh {
        for h1 in 0..nh {
            for g1 in 0..ng {
                // (h2, t(h1,g1)) ∘ (h1,g1) = (h2·h1, g1)
                let t1 = cm.g.mul(d(h1), g1);
                comp.insert((pair(h2, t1), pair(h1, g1)), pair(cm.h.mul(h2, h1), g1));
            }
        }
    }
    let unit = (0..ng).map(|g| pair(cm.h.unit, g)).collect();
    let mut inv = Vec::with_capacity(nh * ng);
    for h in 0..nh {
        for g in 0..ng {
            inv.push(pair(cm.h.inv(h), cm.g.mul(d(h), g)));
        }
    }
    let groupoid = Arc::new(FiniteGroupoid::from_parts(
        format!("{}⋊{}⇉{}", cm.h.name, cm.g.name, cm.g.name),
        objects,
        arrows,
        src,
        tgt,
        comp,
        unit,
        inv,
    )?);
    Ok(TwoGroup {
        base_group: cm.g.clone(),
        cm: cm.clone(),
        arrows_group,
        groupoid,
    })
}

/// Audit a 2-group: groupoid axioms, all five structure maps as group
/// homomorphisms, and the interchange law, exhaustively.
pub fn check_two_group(tg: &TwoGroup) -> ValidationReport {
    let mut report = ValidationReport::new(format!("2-group {}", tg.groupoid.name));
    report.absorb("arrows", check_group(&tg.arrows_group));
    report.absorb("base", check_group(&tg.base_group));
    report.absorb("groupoid", check_groupoid(&tg.groupoid));
    let (s, t, e, inv) = tg.structure_homs();
    report.absorb("s", check_hom(&s));
    report.absorb("t", check_hom(&t));
    report.absorb("e", check_hom(&e));
    report.absorb("inv", check_hom(&inv));

    let interchange = report.law("interchange (a∘b)·(c∘d) = (a·c)∘(b·d)");
    let gd = &tg.groupoid;
    let composable: Vec<(usize, usize)> = gd.comp.keys().copied().collect();
    for &(a, b) in &composable {
        for &(c, d) in &composable {
            let ac = tg.arrows_group.mul(a, c);
            let bd = tg.arrows_group.mul(b, d);
            match gd.comp.get(&(ac, bd)) {
                Some(&rhs) => {
                    let lhs = tg.arrows_group.mul(gd.comp[&(a, b)], gd.comp[&(c, d)]);
                    if lhs != rhs {
                        interchange.record(|| {
                            format!(
                                "a={}, b={}, c={}, d={}",
                                gd.arrows[a], gd.arrows[b], gd.arrows[c], gd.arrows[d]
                            )
                        });
                    }
                }
                None => {
                    interchange.record(|| {
                        format!("product of composables not composable: {}·{}", a, c)
                    });
                }
            }
        }
    }

    let tform = report.law("t(h,g) = d(h)·g");
    for arrow in 0..tg.arrow_count() {
        if tg.groupoid.tgt[arrow] != tg.t_of(arrow) {
            tform.record(|| tg.groupoid.arrows[arrow].clone());
        }
    }

    report
}

/// A groupoid whose arrows and objects both carry group structures on the
/// same index spaces: the raw input form for 2-group recognition.
#[derive(Debug, Clone)]
pub struct GroupGroupoid {
    pub groupoid: FiniteGroupoid,
    pub arrow_group: FiniteGroup,
    pub object_group: FiniteGroup,
}

impl GroupGroupoid {
    pub fn new(
        groupoid: FiniteGroupoid,
        arrow_group: FiniteGroup,
        object_group: FiniteGroup,
    ) -> Result<Self> {
        if arrow_group.order() != groupoid.arrow_count()
            || object_group.order() != groupoid.object_count()
        {
            return Err(Error::TableArity {
                context: "group-groupoid carriers".into(),
                expected: groupoid.arrow_count(),
                got: arrow_group.order(),
            });
        }
        Ok(GroupGroupoid {
            groupoid,
            arrow_group,
            object_group,
        })
    }

    /// The canonical raw form of a 2-group.
    pub fn from_two_group(tg: &TwoGroup) -> Self {
        GroupGroupoid {
            groupoid: (*tg.groupoid).clone(),
            arrow_group: (*tg.arrows_group).clone(),
            object_group: (*tg.base_group).clone(),
        }
    }
}

/// Check that the groupoid structure maps of a raw group-groupoid are all
/// group homomorphisms (including multiplicativity of ∘ on composable
/// pairs, i.e. interchange).
pub fn check_group_groupoid(gg: &GroupGroupoid) -> ValidationReport {
    let mut report = ValidationReport::new("group-groupoid");
    report.absorb("groupoid", check_groupoid(&gg.groupoid));
    report.absorb("arrow group", check_group(&gg.arrow_group));
    report.absorb("object group", check_group(&gg.object_group));

    let maps = report.law("structure maps are homs");
    let gd = &gg.groupoid;
    let ag = &gg.arrow_group;
    let og = &gg.object_group;
    for a in 0..gd.arrow_count() {
        for b in 0..gd.arrow_count() {
            let ab = ag.mul(a, b);
            if gd.src[ab] != og.mul(gd.src[a], gd.src[b]) {
                maps.record(|| format!("s not multiplicative at ({a},{b})"));
            }
            if gd.tgt[ab] != og.mul(gd.tgt[a], gd.tgt[b]) {
                maps.record(|| format!("t not multiplicative at ({a},{b})"));
            }
            if gd.inv[ab] != ag.mul(gd.inv[a], gd.inv[b]) {
                maps.record(|| format!("(-)⁻¹ not multiplicative at ({a},{b})"));
            }
        }
    }
    for p in 0..gd.object_count() {
        for q in 0..gd.object_count() {
            if gd.unit[og.mul(p, q)] != ag.mul(gd.unit[p], gd.unit[q]) {
                maps.record(|| format!("e not multiplicative at ({p},{q})"));
            }
        }
    }

    let interchange = report.law("∘ is a group morphism");
    let composable: Vec<(usize, usize)> = gd.comp.keys().copied().collect();
    for &(a, b) in &composable {
        for &(c, d) in &composable {
            let ac = ag.mul(a, c);
            let bd = ag.mul(b, d);
            match gd.comp.get(&(ac, bd)) {
                Some(&rhs) if ag.mul(gd.comp[&(a, b)], gd.comp[&(c, d)]) == rhs => {}
                _ => interchange.record(|| format!("pairs ({a},{b}), ({c},{d})")),
            }
        }
    }

    report
}

/// Extract the crossed module of a raw group-groupoid:
/// `H = Ker(s)`, `C_g h = e(g)·h·e(g)⁻¹`, `d = t|_H`.
pub fn crossed_module_from_two_group(gg: &GroupGroupoid) -> Result<CrossedModule> {
    let audit = check_group_groupoid(gg);
    if !audit.is_valid() {
        return Err(Error::StructureMapNotHom {
            map: "input".into(),
            witness: audit.first_witness().unwrap_or("invalid").to_string(),
        });
    }
    let gd = &gg.groupoid;
    let ag = &gg.arrow_group;
    let og = Arc::new(gg.object_group.clone());

    let kernel: Vec<usize> = (0..gd.arrow_count())
        .filter(|&a| gd.src[a] == og.unit)
        .collect();
    let pos = |a: usize| kernel.iter().position(|&k| k == a);
    let elements: Vec<String> = kernel.iter().map(|&a| gd.arrows[a].clone()).collect();
    let mut mul = Vec::with_capacity(kernel.len());
    for &a in &kernel {
        let mut row = Vec::with_capacity(kernel.len());
        for &b in &kernel {
            let p = ag.mul(a, b);
            let idx = pos(p).ok_or_else(|| Error::StructureMapNotHom {
                map: "s".into(),
                witness: format!("Ker(s) not closed at {}·{}", gd.arrows[a], gd.arrows[b]),
            })?;
            row.push(idx);
        }
        mul.push(row);
    }
    let h = Arc::new(FiniteGroup::from_mul_table(
        format!("Ker(s)⊂{}", ag.name),
        elements,
        mul,
    )?);

    // C_g h = e(g)·h·e(g)⁻¹
    let mut act = Vec::with_capacity(og.order());
    for g in 0..og.order() {
        let eg = gd.unit[g];
        let mut row = Vec::with_capacity(kernel.len());
        for &k in &kernel {
            let conj = ag.mul(ag.mul(eg, k), ag.inv(eg));
            let idx = pos(conj).ok_or_else(|| Error::StructureMapNotHom {
                map: "C".into(),
                witness: format!("conjugate of {} leaves Ker(s)", gd.arrows[k]),
            })?;
            row.push(idx);
        }
        act.push(row);
    }
    let action = GroupAction::new(og.clone(), h.elements.clone(), act)?;
    let d = GroupHom::new(h.clone(), og.clone(), kernel.iter().map(|&k| gd.tgt[k]).collect())?;

    CrossedModule::new(format!("cm({})", ag.name), h, og, action, d)
}

/// The comparison isomorphism `φ: H⋊G → G^(1)`, `(h,g) ↦ h·e(g)`,
/// between the canonical model of a raw group-groupoid and the input.
pub struct PhiIso {
    pub two_group: TwoGroup,
    /// φ as a group homomorphism `H⋊G → arrow group`.
    pub hom: GroupHom,
    /// φ as a groupoid functor from the canonical groupoid to the input.
    pub functor: GroupoidFunctor,
    pub report: ValidationReport,
}

/// Build and verify φ. Errors with [`Error::NotBijective`] when the input
/// is not a 2-group (so `(h,g) ↦ h·e(g)` cannot be a relabelling).
pub fn phi_iso(gg: &GroupGroupoid) -> Result<PhiIso> {
    let cm = crossed_module_from_two_group(gg)?;
    let tg = two_group_from_crossed_module(&cm)?;
    let kernel: Vec<usize> = (0..gg.groupoid.arrow_count())
        .filter(|&a| gg.groupoid.src[a] == gg.object_group.unit)
        .collect();

    let ag = Arc::new(gg.arrow_group.clone());
    let n = tg.arrow_count();
    let mut map = Vec::with_capacity(n);
    for idx in 0..n {
        let h = tg.h_of(idx);
        let g = tg.g_of(idx);
        map.push(gg.arrow_group.mul(kernel[h], gg.groupoid.unit[g]));
    }
    // bijectivity
    {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if seen[v] {
                return Err(Error::NotBijective {
                    map: "φ(h,g) = h·e(g)".into(),
                    witness: gg.groupoid.arrows[v].clone(),
                });
            }
            seen[v] = true;
        }
    }
    let hom = GroupHom::new(tg.arrows_group.clone(), ag, map.clone())?;
    let obj_map = (0..tg.base_group.order()).collect::<Vec<_>>();
    let functor = GroupoidFunctor::new(
        tg.groupoid.clone(),
        Arc::new(gg.groupoid.clone()),
        obj_map,
        map,
    )?;

    let mut report = ValidationReport::new("φ: H⋊G → G^(1)");
    report.absorb("group hom", check_hom(&hom));
    report.absorb("groupoid functor", crate::groupoid::check_functor(&functor));
    Ok(PhiIso {
        two_group: tg,
        hom,
        functor,
        report,
    })
}

/// An isomorphism of crossed modules: a pair of group isomorphisms
/// commuting with the actions and with `d`.
pub fn crossed_module_isomorphism(
    a: &CrossedModule,
    b: &CrossedModule,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if a.h.order() != b.h.order() || a.g.order() != b.g.order() {
        return Ok(None);
    }
    let h_isos = all_group_isomorphisms(&a.h, &b.h)?;
    let g_isos = all_group_isomorphisms(&a.g, &b.g)?;
    for fg in &g_isos {
        for fh in &h_isos {
            let d_ok = (0..a.h.order()).all(|h| fg[a.d_of(h)] == b.d_of(fh[h]));
            if !d_ok {
                continue;
            }
            let c_ok = (0..a.g.order()).all(|g| {
                (0..a.h.order()).all(|h| fh[a.c(g, h)] == b.c(fg[g], fh[h]))
            });
            if c_ok {
                return Ok(Some((fh.clone(), fg.clone())));
            }
        }
    }
    Ok(None)
}

/// All isomorphisms between two small groups (used as an oracle; the count
/// is |Aut| when the groups are isomorphic, so stays tiny at desk scale).
pub fn all_group_isomorphisms(a: &FiniteGroup, b: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    if a.order() != b.order() {
        return Ok(Vec::new());
    }
    if group_isomorphism(a, b)?.is_none() {
        return Ok(Vec::new());
    }
    let n = a.order();
    let ord_a: Vec<usize> = (0..n).map(|x| a.element_order(x)).collect();
    let ord_b: Vec<usize> = (0..n).map(|x| b.element_order(x)).collect();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.unit] = b.unit;
    used[b.unit] = true;
    fn go(
        a: &FiniteGroup,
        b: &FiniteGroup,
        ord_a: &[usize],
        ord_b: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = a.order();
        let x = match (0..n).find(|&x| map[x] == usize::MAX) {
            None => {
                // full map: verify hom
                let hom_ok = (0..n).all(|p| (0..n).all(|q| map[a.mul(p, q)] == b.mul(map[p], map[q])));
                if hom_ok {
                    out.push(map.clone());
                }
                return;
            }
            Some(x) => x,
        };
        for y in 0..n {
            if used[y] || ord_a[x] != ord_b[y] {
                continue;
            }
            // consistency with already-mapped products
            let consistent = (0..n).all(|p| {
                if map[p] == usize::MAX {
                    return true;
                }
                let xp = a.mul(x, p);
                let px = a.mul(p, x);
                (map[xp] == usize::MAX || map[xp] == b.mul(y, map[p]))
                    && (map[px] == usize::MAX || map[px] == b.mul(map[p], y))
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            go(a, b, ord_a, ord_b, map, used, out);
            map[x] = usize::MAX;
            used[y] = false;
        }
    }
    go(a, b, &ord_a, &ord_b, &mut map, &mut used, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3_in_s3() -> CrossedModule {
        let s3 = Arc::new(FiniteGroup::symmetric_3());
        let (a3, member) = FiniteGroup::alternating_3();
        CrossedModule::normal_subgroup("A3◁S3", Arc::new(a3), s3, member).unwrap()
    }

    #[test]
    fn a3_in_s3_is_a_crossed_module() {
        assert!(check_crossed_module(&a3_in_s3()).is_valid());
    }

    #[test]
    fn abelian_h_with_trivial_d_is_a_crossed_module() {
        // H abelian, d ≡ e_G, C any action: both axioms collapse
        let h = Arc::new(FiniteGroup::cyclic(3));
        let g = Arc::new(FiniteGroup::cyclic(2));
        let action = GroupAction::new(
            g.clone(),
            h.elements.clone(),
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap();
        let d = GroupHom::trivial(h.clone(), g.clone());
        let cm = CrossedModule::new("Z3→1→Z2", h, g, action, d).unwrap();
        assert!(check_crossed_module(&cm).is_valid());
    }

    // Oracle: axiom scan — nonabelian H with trivial d breaks Peiffer.
    #[test]
    fn s3_over_trivial_group_fails_second_axiom() {
        let h = Arc::new(FiniteGroup::symmetric_3());
        let g = Arc::new(FiniteGroup::trivial());
        let action = GroupAction::trivial(g.clone(), h.elements.clone());
        let d = GroupHom::trivial(h.clone(), g.clone());
        let cm = CrossedModule::new("S3/1", h, g, action, d).unwrap();
        let report = check_crossed_module(&cm);
        assert!(!report.is_valid());
        let law = report
            .laws
            .iter()
            .find(|l| l.law.contains("C_{d(h)}"))
            .unwrap();
        assert!(law.violations > 0);
        assert!(!law.witnesses.is_empty());
    }

    // Oracle: check all hom laws on the built 2-group.
    #[test]
    fn two_group_of_z2_z2_identity_d() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let cm = CrossedModule::new(
            "Z2=Z2",
            z2.clone(),
            z2.clone(),
            GroupAction::trivial(z2.clone(), z2.elements.clone()),
            GroupHom::identity(z2.clone()),
        )
        .unwrap();
        let tg = two_group_from_crossed_module(&cm).unwrap();
        assert_eq!(tg.arrow_count(), 4);
        assert_eq!(tg.base_group.order(), 2);
        assert!(check_two_group(&tg).is_valid());
    }

    #[test]
    fn identity_two_group_has_s_equal_t() {
        let g = Arc::new(FiniteGroup::symmetric_3());
        let tg = two_group_from_crossed_module(&CrossedModule::identity(g)).unwrap();
        assert!(check_two_group(&tg).is_valid());
        for a in 0..tg.arrow_count() {
            assert_eq!(tg.s_of(a), tg.t_of(a));
        }
    }

    // Oracle: check_groupoid + hom scan on the 18-arrow 2-group.
    #[test]
    fn two_group_of_a3_s3() {
        let tg = two_group_from_crossed_module(&a3_in_s3()).unwrap();
        assert_eq!(tg.arrow_count(), 18);
        assert!(check_two_group(&tg).is_valid());
    }

    // Oracle: round-trip isomorphism search.
    #[test]
    fn round_trip_crossed_module_two_group_crossed_module() {
        for cm in [
            a3_in_s3(),
            CrossedModule::identity(Arc::new(FiniteGroup::cyclic(4))),
            CrossedModule::adjoint(Arc::new(FiniteGroup::cyclic(3))),
        ] {
            let tg = two_group_from_crossed_module(&cm).unwrap();
            let raw = GroupGroupoid::from_two_group(&tg);
            let back = crossed_module_from_two_group(&raw).unwrap();
            assert!(check_crossed_module(&back).is_valid());
            assert!(
                crossed_module_isomorphism(&cm, &back).unwrap().is_some(),
                "round trip not isomorphic for {}",
                cm.name
            );
        }
    }

    #[test]
    fn kernel_of_identity_two_group_is_trivial() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let tg = two_group_from_crossed_module(&CrossedModule::identity(g)).unwrap();
        let back = crossed_module_from_two_group(&GroupGroupoid::from_two_group(&tg)).unwrap();
        assert_eq!(back.h.order(), 1);
    }

    // Oracle: kernel computation on the pair-groupoid-style 2-group.
    #[test]
    fn adjoint_two_group_kernel_is_g_with_identity_d() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let tg = two_group_from_crossed_module(&CrossedModule::adjoint(g.clone())).unwrap();
        let back = crossed_module_from_two_group(&GroupGroupoid::from_two_group(&tg)).unwrap();
        assert_eq!(back.h.order(), 3);
        assert!(group_isomorphism(&back.h, &g).unwrap().is_some());
        // d is injective onto G, hence an isomorphism here
        let mut image: Vec<usize> = back.d.map.clone();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image.len(), 3);
    }

    // Oracle: exhaustive bijectivity + law scan for φ on G⋊G, G = Z3.
    #[test]
    fn phi_iso_on_adjoint_z3() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let tg = two_group_from_crossed_module(&CrossedModule::adjoint(g)).unwrap();
        let raw = GroupGroupoid::from_two_group(&tg);
        let phi = phi_iso(&raw).unwrap();
        assert_eq!(phi.hom.map.len(), 9);
        assert!(phi.report.is_valid());
    }

    #[test]
    fn phi_iso_on_identity_two_group_is_identity() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let tg = two_group_from_crossed_module(&CrossedModule::identity(g)).unwrap();
        let phi = phi_iso(&GroupGroupoid::from_two_group(&tg)).unwrap();
        assert!(phi.report.is_valid());
        assert_eq!(phi.hom.map, (0..2).collect::<Vec<_>>());
    }

    #[test]
    fn phi_iso_on_catalog_crossed_module_is_relabelling() {
        let tg = two_group_from_crossed_module(&a3_in_s3()).unwrap();
        let phi = phi_iso(&GroupGroupoid::from_two_group(&tg)).unwrap();
        assert!(phi.report.is_valid());
        // identity-shaped: bijective map on 18 arrows
        let mut m = phi.hom.map.clone();
        m.sort_unstable();
        assert_eq!(m, (0..18).collect::<Vec<_>>());
    }
}
