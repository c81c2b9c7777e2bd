//! Finite groupoids, functors, and the standard constructions.
//!
//! A groupoid is stored as object and arrow label lists, source/target
//! tables, a partial composition table keyed by composable pairs
//! (`comp[(β,α)] = β∘α` requires `src(β) = tgt(α)`, arrows composed right
//! to left), a unit table and an inverse table. Non-composable lookups are
//! a distinct error, never a silent value.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::report::ValidationReport;

#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    /// `src[α]`, `tgt[α]` are object indices
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// `comp[(β,α)]` = β∘α, defined exactly when src(β) = tgt(α)
    pub comp: BTreeMap<(usize, usize), usize>,
    /// `unit[o]` = unit arrow at object o
    pub unit: Vec<usize>,
    /// `inv[α]` = α⁻¹
    pub inv: Vec<usize>,
}

impl FiniteGroupoid {
    /// Build from complete data. Verifies table shapes and that `comp` is
    /// defined exactly on composable pairs; axioms are audited separately
    /// by [`check_groupoid`].
    pub fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        comp: BTreeMap<(usize, usize), usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        let no = objects.len();
        let na = arrows.len();
        if no == 0 {
            return Err(Error::EmptyCarrier(name));
        }
        for (label, table, n, m) in [
            ("src", &src, na, no),
            ("tgt", &tgt, na, no),
            ("unit", &unit, no, na),
            ("inv", &inv, na, na),
        ] {
            if table.len() != n {
                return Err(Error::TableArity {
                    context: format!("{name}.{label}"),
                    expected: n,
                    got: table.len(),
                });
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= m) {
                return Err(Error::IndexRange {
                    context: format!("{name}.{label}"),
                    index: bad,
                    size: m,
                });
            }
        }
        for (&(b, a), &c) in &comp {
            if b >= na || a >= na || c >= na {
                return Err(Error::IndexRange {
                    context: format!("{name}.comp"),
                    index: b.max(a).max(c),
                    size: na,
                });
            }
            if src[b] != tgt[a] {
                return Err(Error::CompositionDomain(format!(
                    "({},{}) has src(β) ≠ tgt(α)",
                    arrows[b], arrows[a]
                )));
            }
        }
        for b in 0..na {
            for a in 0..na {
                if src[b] == tgt[a] && !comp.contains_key(&(b, a)) {
                    return Err(Error::CompositionDomain(format!(
                        "composable pair ({},{}) missing from comp",
                        arrows[b], arrows[a]
                    )));
                }
            }
        }
        Ok(FiniteGroupoid {
            name,
            objects,
            arrows,
            src,
            tgt,
            comp,
            unit,
            inv,
        })
    }

    /// Build from source/target/composition alone, inferring units and
    /// inverses. Fails if a unit or inverse does not exist.
    pub fn from_comp(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        comp: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let name = name.into();
        let na = arrows.len();
        let mut unit = Vec::with_capacity(objects.len());
        for o in 0..objects.len() {
            let u = (0..na)
                .find(|&u| {
                    src[u] == o
                        && tgt[u] == o
                        && (0..na).all(|a| {
                            let mut ok = true;
                            if src[a] == o {
                                ok &= comp.get(&(a, u)) == Some(&a);
                            }
                            if tgt[a] == o {
                                ok &= comp.get(&(u, a)) == Some(&a);
                            }
                            ok
                        })
                })
                .ok_or_else(|| Error::MissingUnit(objects[o].clone()))?;
            unit.push(u);
        }
        let mut inv = Vec::with_capacity(na);
        for a in 0..na {
            let i = (0..na)
                .find(|&b| {
                    src[b] == tgt[a]
                        && tgt[b] == src[a]
                        && comp.get(&(b, a)) == Some(&unit[src[a]])
                        && comp.get(&(a, b)) == Some(&unit[tgt[a]])
                })
                .ok_or_else(|| Error::MissingInverse(arrows[a].clone()))?;
            inv.push(i);
        }
        Self::from_parts(name, objects, arrows, src, tgt, comp, unit, inv)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// β∘α, requiring src(β) = tgt(α).
    pub fn compose(&self, after: usize, before: usize) -> Result<usize> {
        self.comp
            .get(&(after, before))
            .copied()
            .ok_or_else(|| Error::NotComposable {
                after: self.arrows[after].clone(),
                before: self.arrows[before].clone(),
            })
    }

    pub fn composable(&self, after: usize, before: usize) -> bool {
        self.src[after] == self.tgt[before]
    }

    /// Arrows from object `a` to object `b`.
    pub fn hom_set(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrow_count())
            .filter(|&f| self.src[f] == a && self.tgt[f] == b)
            .collect()
    }

    pub fn is_unit(&self, arrow: usize) -> bool {
        self.unit[self.src[arrow]] == arrow
    }

    /// The discrete (identity) groupoid on a label set.
    pub fn identity_groupoid(name: impl Into<String>, objects: Vec<String>) -> Self {
        let n = objects.len();
        let arrows = objects.iter().map(|o| format!("1_{o}")).collect();
        let src: Vec<usize> = (0..n).collect();
        let tgt = src.clone();
        let comp = (0..n).map(|i| ((i, i), i)).collect();
        let unit = src.clone();
        let inv = src.clone();
        FiniteGroupoid::from_parts(name, objects, arrows, src, tgt, comp, unit, inv)
            .expect("identity groupoid")
    }

    /// The pair groupoid on `x`: arrows X×X, `s(p,q) = q`, `t(p,q) = p`,
    /// `(p,q)∘(q,r) = (p,r)`.
    pub fn pair_groupoid(name: impl Into<String>, x: Vec<String>) -> Result<Self> {
        let name = name.into();
        let n = x.len();
        if n == 0 {
            return Err(Error::EmptyCarrier(name));
        }
        let mut arrows = Vec::with_capacity(n * n);
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let idx = |p: usize, q: usize| p * n + q;
        for p in 0..n {
            for q in 0..n {
                arrows.push(format!("({},{})", x[p], x[q]));
                tgt.push(p);
                src.push(q);
            }
        }
        let mut comp = BTreeMap::new();
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    comp.insert((idx(p, q), idx(q, r)), idx(p, r));
                }
            }
        }
        let unit = (0..n).map(|p| idx(p, p)).collect();
        let inv = (0..n)
            .flat_map(|p| (0..n).map(move |q| idx(q, p)))
            .collect();
        FiniteGroupoid::from_parts(name, x, arrows, src, tgt, comp, unit, inv)
    }

    /// One-object groupoid of a group; `comp(β,α) = β·α`.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let objects = vec!["*".to_string()];
        let arrows = g.elements.clone();
        let n = g.order();
        let src = vec![0; n];
        let tgt = vec![0; n];
        let mut comp = BTreeMap::new();
        for b in 0..n {
            for a in 0..n {
                comp.insert((b, a), g.mul(b, a));
            }
        }
        let unit = vec![g.unit];
        let inv = g.inv.clone();
        FiniteGroupoid::from_parts(format!("B{}", g.name), objects, arrows, src, tgt, comp, unit, inv)
            .expect("delooping groupoid")
    }

    /// Orbit decomposition into connected components (object index sets).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.object_count();
        let mut comp_id = vec![usize::MAX; n];
        let mut next = 0;
        for o in 0..n {
            if comp_id[o] != usize::MAX {
                continue;
            }
            let mut stack = vec![o];
            comp_id[o] = next;
            while let Some(p) = stack.pop() {
                for a in 0..self.arrow_count() {
                    for q in [self.src[a], self.tgt[a]] {
                        if (self.src[a] == p || self.tgt[a] == p) && comp_id[q] == usize::MAX {
                            comp_id[q] = next;
                            stack.push(q);
                        }
                    }
                }
            }
            next += 1;
        }
        let mut out = vec![Vec::new(); next];
        for o in 0..n {
            out[comp_id[o]].push(o);
        }
        out
    }
}

/// Surjection data `π: Y → M` used by fiber-product and pullback groupoids.
#[derive(Debug, Clone)]
pub struct Surjection {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub map: Vec<usize>,
}

impl Surjection {
    pub fn new(dom: Vec<String>, cod: Vec<String>, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::TableArity {
                context: "surjection".into(),
                expected: dom.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::IndexRange {
                context: "surjection".into(),
                index: bad,
                size: cod.len(),
            });
        }
        for (m, label) in cod.iter().enumerate() {
            if !map.contains(&m) {
                return Err(Error::NotSurjective(label.clone()));
            }
        }
        Ok(Surjection { dom, cod, map })
    }

    pub fn fiber(&self, m: usize) -> Vec<usize> {
        (0..self.dom.len()).filter(|&y| self.map[y] == m).collect()
    }
}

/// The fiber product groupoid `Y^[2] = Y ×_M Y` of a surjection, with
/// `s(y2,y1) = y1`, `t(y2,y1) = y2`, `(y3,y2)∘(y2,y1) = (y3,y1)`.
pub fn fiber_product_groupoid(name: impl Into<String>, pi: &Surjection) -> Result<FiniteGroupoid> {
    let name = name.into();
    let n = pi.dom.len();
    let mut arrows = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut index = BTreeMap::new();
    for y2 in 0..n {
        for y1 in 0..n {
            if pi.map[y2] == pi.map[y1] {
                index.insert((y2, y1), arrows.len());
                arrows.push(format!("({},{})", pi.dom[y2], pi.dom[y1]));
                tgt.push(y2);
                src.push(y1);
            }
        }
    }
    let mut comp = BTreeMap::new();
    for (&(y3, y2), &b) in &index {
        for (&(y2b, y1), &a) in &index {
            if y2 == y2b {
                comp.insert((b, a), index[&(y3, y1)]);
            }
        }
    }
    let unit = (0..n).map(|y| index[&(y, y)]).collect();
    let inv = index.keys().map(|&(y2, y1)| index[&(y1, y2)]).collect::<Vec<_>>();
    // index iteration is sorted by (y2,y1), matching arrow insertion order
    FiniteGroupoid::from_parts(name, pi.dom.clone(), arrows, src, tgt, comp, unit, inv)
}

/// The pullback groupoid `π⁻¹ m` of a groupoid `m` over the codomain of a
/// surjection `π: Y → M`: objects Y, arrows `(y2, γ, y1)` with
/// `src(γ) = π(y1)`, `tgt(γ) = π(y2)`, componentwise composition.
pub fn pullback_groupoid(
    name: impl Into<String>,
    pi: &Surjection,
    m: &FiniteGroupoid,
) -> Result<FiniteGroupoid> {
    let name = name.into();
    if pi.cod.len() != m.object_count() {
        return Err(Error::TableArity {
            context: format!("{name}: surjection codomain vs groupoid objects"),
            expected: m.object_count(),
            got: pi.cod.len(),
        });
    }
    let n = pi.dom.len();
    let mut arrows = Vec::new();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut index = BTreeMap::new();
    for y2 in 0..n {
        for g in 0..m.arrow_count() {
            for y1 in 0..n {
                if m.src[g] == pi.map[y1] && m.tgt[g] == pi.map[y2] {
                    index.insert((y2, g, y1), arrows.len());
                    arrows.push(format!("({}|{}|{})", pi.dom[y2], m.arrows[g], pi.dom[y1]));
                    tgt.push(y2);
                    src.push(y1);
                }
            }
        }
    }
    let mut comp = BTreeMap::new();
    for (&(y3, g2, y2), &b) in &index {
        for (&(y2b, g1, y1), &a) in &index {
            if y2 == y2b {
                let g = m.compose(g2, g1)?;
                comp.insert((b, a), index[&(y3, g, y1)]);
            }
        }
    }
    let unit = (0..n).map(|y| index[&(y, m.unit[pi.map[y]], y)]).collect();
    let inv = index
        .keys()
        .map(|&(y2, g, y1)| index[&(y1, m.inv[g], y2)])
        .collect();
    FiniteGroupoid::from_parts(name, pi.dom.clone(), arrows, src, tgt, comp, unit, inv)
}

/// The cartesian product groupoid with componentwise structure.
pub fn product_groupoid(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let objects: Vec<String> = a
        .objects
        .iter()
        .flat_map(|p| b.objects.iter().map(move |q| format!("({p},{q})")))
        .collect();
    let oidx = |p: usize, q: usize| p * b.object_count() + q;
    let arrows: Vec<String> = a
        .arrows
        .iter()
        .flat_map(|f| b.arrows.iter().map(move |g| format!("({f},{g})")))
        .collect();
    let aidx = |f: usize, g: usize| f * b.arrow_count() + g;
    let mut src = Vec::with_capacity(arrows.len());
    let mut tgt = Vec::with_capacity(arrows.len());
    for f in 0..a.arrow_count() {
        for g in 0..b.arrow_count() {
            src.push(oidx(a.src[f], b.src[g]));
            tgt.push(oidx(a.tgt[f], b.tgt[g]));
        }
    }
    let mut comp = BTreeMap::new();
    for (&(f2, f1), &fc) in &a.comp {
        for (&(g2, g1), &gc) in &b.comp {
            comp.insert((aidx(f2, g2), aidx(f1, g1)), aidx(fc, gc));
        }
    }
    let mut unit = Vec::with_capacity(objects.len());
    for p in 0..a.object_count() {
        for q in 0..b.object_count() {
            unit.push(aidx(a.unit[p], b.unit[q]));
        }
    }
    let mut inv = Vec::with_capacity(arrows.len());
    for f in 0..a.arrow_count() {
        for g in 0..b.arrow_count() {
            inv.push(aidx(a.inv[f], b.inv[g]));
        }
    }
    FiniteGroupoid::from_parts(
        format!("{}×{}", a.name, b.name),
        objects,
        arrows,
        src,
        tgt,
        comp,
        unit,
        inv,
    )
    .expect("product groupoid")
}

/// Empty report iff all groupoid axioms hold.
pub fn check_groupoid(g: &FiniteGroupoid) -> ValidationReport {
    let mut report = ValidationReport::new(format!("groupoid {}", g.name));
    let na = g.arrow_count();

    let st = report.law("src/tgt of composite");
    for (&(b, a), &c) in &g.comp {
        if g.src[c] != g.src[a] || g.tgt[c] != g.tgt[b] {
            st.record(|| format!("{}∘{}", g.arrows[b], g.arrows[a]));
        }
    }

    let assoc = report.law("associativity");
    for (&(c, b), &cb) in &g.comp {
        for a in 0..na {
            if g.composable(b, a) {
                let ba = g.comp[&(b, a)];
                if g.comp[&(cb, a)] != g.comp[&(c, ba)] {
                    assoc.record(|| {
                        format!("({}∘{})∘{}", g.arrows[c], g.arrows[b], g.arrows[a])
                    });
                }
            }
        }
    }

    let units = report.law("units neutral");
    for o in 0..g.object_count() {
        let u = g.unit[o];
        if g.src[u] != o || g.tgt[u] != o {
            units.record(|| format!("unit at {} has wrong endpoints", g.objects[o]));
            continue;
        }
        for a in 0..na {
            if g.src[a] == o && g.comp.get(&(a, u)) != Some(&a) {
                units.record(|| format!("{}∘1_{} ≠ {}", g.arrows[a], g.objects[o], g.arrows[a]));
            }
            if g.tgt[a] == o && g.comp.get(&(u, a)) != Some(&a) {
                units.record(|| format!("1_{}∘{} ≠ {}", g.objects[o], g.arrows[a], g.arrows[a]));
            }
        }
    }

    let inverse = report.law("inverses");
    for a in 0..na {
        let i = g.inv[a];
        let ok = g.src[i] == g.tgt[a]
            && g.tgt[i] == g.src[a]
            && g.comp.get(&(i, a)) == Some(&g.unit[g.src[a]])
            && g.comp.get(&(a, i)) == Some(&g.unit[g.tgt[a]]);
        if !ok {
            inverse.record(|| format!("inv({}) fails", g.arrows[a]));
        }
    }

    report
}

/// A functor between finite groupoids, given by object and arrow tables.
#[derive(Debug, Clone)]
pub struct GroupoidFunctor {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub obj_map: Vec<usize>,
    pub arr_map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn new(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        obj_map: Vec<usize>,
        arr_map: Vec<usize>,
    ) -> Result<Self> {
        if obj_map.len() != dom.object_count() || arr_map.len() != dom.arrow_count() {
            return Err(Error::TableArity {
                context: format!("functor {}→{}", dom.name, cod.name),
                expected: dom.object_count() + dom.arrow_count(),
                got: obj_map.len() + arr_map.len(),
            });
        }
        if let Some(&bad) = obj_map.iter().find(|&&v| v >= cod.object_count()) {
            return Err(Error::IndexRange {
                context: "functor obj_map".into(),
                index: bad,
                size: cod.object_count(),
            });
        }
        if let Some(&bad) = arr_map.iter().find(|&&v| v >= cod.arrow_count()) {
            return Err(Error::IndexRange {
                context: "functor arr_map".into(),
                index: bad,
                size: cod.arrow_count(),
            });
        }
        Ok(GroupoidFunctor {
            dom,
            cod,
            obj_map,
            arr_map,
        })
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        GroupoidFunctor {
            obj_map: (0..g.object_count()).collect(),
            arr_map: (0..g.arrow_count()).collect(),
            dom: g.clone(),
            cod: g,
        }
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        (0..self.cod.object_count()).all(|o| self.obj_map.contains(&o))
    }

    pub fn is_surjective_on_arrows(&self) -> bool {
        (0..self.cod.arrow_count()).all(|a| self.arr_map.contains(&a))
    }

    /// Finite fibration property: every arrow downstairs lifts with a
    /// prescribed source. Returns a counterexample `(γ, p)` if any.
    pub fn fibration_violation(&self) -> Option<(usize, usize)> {
        for g in 0..self.cod.arrow_count() {
            for p in 0..self.dom.object_count() {
                if self.obj_map[p] == self.cod.src[g] {
                    let lifted = (0..self.dom.arrow_count())
                        .any(|a| self.arr_map[a] == g && self.dom.src[a] == p);
                    if !lifted {
                        return Some((g, p));
                    }
                }
            }
        }
        None
    }
}

/// Empty report iff all functor laws hold.
pub fn check_functor(f: &GroupoidFunctor) -> ValidationReport {
    let mut report = ValidationReport::new(format!("functor {}→{}", f.dom.name, f.cod.name));
    let endpoints = report.law("commutes with src/tgt");
    for a in 0..f.dom.arrow_count() {
        if f.cod.src[f.arr_map[a]] != f.obj_map[f.dom.src[a]]
            || f.cod.tgt[f.arr_map[a]] != f.obj_map[f.dom.tgt[a]]
        {
            endpoints.record(|| f.dom.arrows[a].clone());
        }
    }
    let units = report.law("preserves units");
    for o in 0..f.dom.object_count() {
        if f.arr_map[f.dom.unit[o]] != f.cod.unit[f.obj_map[o]] {
            units.record(|| f.dom.objects[o].clone());
        }
    }
    let mult = report.law("preserves composition");
    for (&(b, a), &c) in &f.dom.comp {
        match f.cod.comp.get(&(f.arr_map[b], f.arr_map[a])) {
            Some(&img) if img == f.arr_map[c] => {}
            _ => mult.record(|| format!("{}∘{}", f.dom.arrows[b], f.dom.arrows[a])),
        }
    }
    report
}

/// Bound on brute-force groupoid isomorphism search.
pub const ISO_ARROW_BOUND: usize = 64;

/// Brute-force groupoid isomorphism. Returns `(obj_map, arr_map)` from `a`
/// to `b` if the groupoids are isomorphic; bounded at [`ISO_ARROW_BOUND`]
/// arrows.
pub fn groupoid_isomorphism(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if a.object_count() != b.object_count() || a.arrow_count() != b.arrow_count() {
        return Ok(None);
    }
    if a.arrow_count() > ISO_ARROW_BOUND {
        return Err(Error::SearchExhausted(format!(
            "{} arrows exceed bound {ISO_ARROW_BOUND}",
            a.arrow_count()
        )));
    }
    // object fingerprints: sorted hom-set size profile
    let profile = |g: &FiniteGroupoid, o: usize| -> Vec<usize> {
        let mut p: Vec<usize> = (0..g.object_count())
            .map(|q| g.hom_set(o, q).len() * 1000 + g.hom_set(q, o).len())
            .collect();
        p.sort_unstable();
        p
    };
    let pa: Vec<_> = (0..a.object_count()).map(|o| profile(a, o)).collect();
    let pb: Vec<_> = (0..b.object_count()).map(|o| profile(b, o)).collect();

    let mut obj_map = vec![usize::MAX; a.object_count()];
    let mut used = vec![false; b.object_count()];
    search_objects(a, b, &pa, &pb, &mut obj_map, &mut used, 0)
}

fn search_objects(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    pa: &[Vec<usize>],
    pb: &[Vec<usize>],
    obj_map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    next: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if next == a.object_count() {
        // hom-set sizes must match before arrow search
        for p in 0..a.object_count() {
            for q in 0..a.object_count() {
                if a.hom_set(p, q).len() != b.hom_set(obj_map[p], obj_map[q]).len() {
                    return Ok(None);
                }
            }
        }
        if let Some(arr_map) = arrow_isomorphism_over(a, b, obj_map)? {
            return Ok(Some((obj_map.clone(), arr_map)));
        }
        return Ok(None);
    }
    for cand in 0..b.object_count() {
        if used[cand] || pa[next] != pb[cand] {
            continue;
        }
        obj_map[next] = cand;
        used[cand] = true;
        if let Some(found) = search_objects(a, b, pa, pb, obj_map, used, next + 1)? {
            return Ok(Some(found));
        }
        obj_map[next] = usize::MAX;
        used[cand] = false;
    }
    Ok(None)
}

/// Arrow-level isomorphism search with the object bijection fixed.
///
/// This is the "isomorphic over the objects" mode used by Morita pullback
/// comparison, where the object identification is part of the statement.
pub fn arrow_isomorphism_over(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    obj_map: &[usize],
) -> Result<Option<Vec<usize>>> {
    if a.arrow_count() != b.arrow_count() {
        return Ok(None);
    }
    if a.arrow_count() > ISO_ARROW_BOUND {
        return Err(Error::SearchExhausted(format!(
            "{} arrows exceed bound {ISO_ARROW_BOUND}",
            a.arrow_count()
        )));
    }
    let na = a.arrow_count();
    let mut arr_map = vec![usize::MAX; na];
    let mut used = vec![false; na];
    // units are forced
    for o in 0..a.object_count() {
        let ua = a.unit[o];
        let ub = b.unit[obj_map[o]];
        arr_map[ua] = ub;
        used[ub] = true;
    }
    fn consistent(a: &FiniteGroupoid, b: &FiniteGroupoid, arr_map: &[usize], x: usize) -> bool {
        // check all compositions involving x against mapped arrows
        for y in 0..a.arrow_count() {
            if arr_map[y] == usize::MAX {
                continue;
            }
            for (p, q) in [(x, y), (y, x)] {
                if a.composable(p, q) {
                    let c = a.comp[&(p, q)];
                    match b.comp.get(&(arr_map[p], arr_map[q])) {
                        Some(&img) => {
                            if arr_map[c] != usize::MAX && arr_map[c] != img {
                                return false;
                            }
                        }
                        None => return false,
                    }
                }
            }
        }
        true
    }
    fn extend(
        a: &FiniteGroupoid,
        b: &FiniteGroupoid,
        obj_map: &[usize],
        arr_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = match (0..a.arrow_count()).find(|&x| arr_map[x] == usize::MAX) {
            None => return true,
            Some(x) => x,
        };
        for y in 0..b.arrow_count() {
            if used[y]
                || b.src[y] != obj_map[a.src[x]]
                || b.tgt[y] != obj_map[a.tgt[x]]
            {
                continue;
            }
            arr_map[x] = y;
            used[y] = true;
            if consistent(a, b, arr_map, x) && extend(a, b, obj_map, arr_map, used) {
                return true;
            }
            arr_map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }
    if extend(a, b, obj_map, &mut arr_map, &mut used) {
        Ok(Some(arr_map))
    } else {
        Ok(None)
    }
}
