//! Table-driven finite groups, homomorphisms and group actions.
//!
//! Elements are opaque string labels; all algebra runs on integer indices
//! after interning. Multiplication is a dense `n × n` table, the unit and
//! inverse tables are derived from it on construction and re-verified by
//! [`check_group`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// A finite group presented by its full Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub elements: Vec<String>,
    /// `mul[a][b]` = index of a·b
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
    /// `inv[a]` = index of a⁻¹
    pub inv: Vec<usize>,
}

impl FiniteGroup {
    /// Build a group from a raw multiplication table, deriving unit and
    /// inverses. Fails if the table shape is wrong or no two-sided unit /
    /// inverse exists; associativity is *not* enforced here — use
    /// [`check_group`] to audit it.
    pub fn from_mul_table(
        name: impl Into<String>,
        elements: Vec<String>,
        mul: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        let n = elements.len();
        if n == 0 {
            return Err(Error::EmptyCarrier(name));
        }
        if mul.len() != n {
            return Err(Error::TableArity {
                context: format!("{name}.mul rows"),
                expected: n,
                got: mul.len(),
            });
        }
        for (i, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::TableArity {
                    context: format!("{name}.mul row {i}"),
                    expected: n,
                    got: row.len(),
                });
            }
            for &v in row {
                if v >= n {
                    return Err(Error::IndexRange {
                        context: format!("{name}.mul"),
                        index: v,
                        size: n,
                    });
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| Error::MissingUnit(name.clone()))?;
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            let i = (0..n)
                .find(|&b| mul[a][b] == unit && mul[b][a] == unit)
                .ok_or_else(|| Error::MissingInverse(elements[a].clone()))?;
            inv.push(i);
        }
        Ok(FiniteGroup {
            name,
            elements,
            mul,
            unit,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.unit {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The trivial one-element group.
    pub fn trivial() -> Self {
        FiniteGroup::from_mul_table("1", vec!["e".into()], vec![vec![0]]).expect("trivial group")
    }

    /// Cyclic group of order `n`, written additively on labels `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs positive order");
        let elements = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::from_mul_table(format!("Z{n}"), elements, mul).expect("cyclic table")
    }

    /// Symmetric group on 3 letters, elements as cycle notation.
    ///
    /// Product is composition of permutations, `(a·b)(x) = a(b(x))`.
    pub fn symmetric_3() -> Self {
        // permutations of {0,1,2} as images [p(0),p(1),p(2)]
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2], // e
            [1, 0, 2], // (12)
            [2, 1, 0], // (13)
            [0, 2, 1], // (23)
            [1, 2, 0], // (123): 0->1,1->2,2->0
            [2, 0, 1], // (132)
        ];
        let labels: Vec<String> = vec!["e", "(12)", "(13)", "(23)", "(123)", "(132)"]
            .into_iter()
            .map(String::from)
            .collect();
        let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| find([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup::from_mul_table("S3", labels, mul).expect("S3 table")
    }

    /// Alternating subgroup A3 = {e, (123), (132)} of [`FiniteGroup::symmetric_3`],
    /// as a group in its own right together with the inclusion indices.
    pub fn alternating_3() -> (Self, Vec<usize>) {
        let s3 = Self::symmetric_3();
        let member: Vec<usize> = vec![0, 4, 5]; // e, (123), (132) in symmetric_3 order
        let elements = member.iter().map(|&i| s3.elements[i].clone()).collect();
        let pos = |s: usize| member.iter().position(|&m| m == s).expect("closed");
        let mul = member
            .iter()
            .map(|&a| member.iter().map(|&b| pos(s3.mul(a, b))).collect())
            .collect();
        let a3 = FiniteGroup::from_mul_table("A3", elements, mul).expect("A3 table");
        (a3, member)
    }
}

/// Exhaustive audit of the group axioms. Empty report iff `g` is a group.
pub fn check_group(g: &FiniteGroup) -> ValidationReport {
    let mut report = ValidationReport::new(format!("group {}", g.name));
    let n = g.order();

    let assoc = report.law("associativity");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                    assoc.record(|| {
                        format!(
                            "({}·{})·{} ≠ {}·({}·{})",
                            g.label(a),
                            g.label(b),
                            g.label(c),
                            g.label(a),
                            g.label(b),
                            g.label(c)
                        )
                    });
                }
            }
        }
    }

    let unit = report.law("unit");
    for a in 0..n {
        if g.mul(g.unit, a) != a || g.mul(a, g.unit) != a {
            unit.record(|| format!("unit not neutral on {}", g.label(a)));
        }
    }

    let inverse = report.law("inverse");
    for a in 0..n {
        if g.mul(a, g.inv(a)) != g.unit || g.mul(g.inv(a), a) != g.unit {
            inverse.record(|| format!("inv({}) fails", g.label(a)));
        }
    }

    report
}

/// A group homomorphism given by its value table.
#[derive(Debug, Clone)]
pub struct GroupHom {
    pub dom: Arc<FiniteGroup>,
    pub cod: Arc<FiniteGroup>,
    /// `map[a]` = image index in `cod`
    pub map: Vec<usize>,
}

impl GroupHom {
    pub fn new(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.order() {
            return Err(Error::TableArity {
                context: format!("hom {}→{}", dom.name, cod.name),
                expected: dom.order(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= cod.order()) {
            return Err(Error::IndexRange {
                context: format!("hom {}→{}", dom.name, cod.name),
                index: bad,
                size: cod.order(),
            });
        }
        Ok(GroupHom { dom, cod, map })
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = (0..g.order()).collect();
        GroupHom {
            dom: g.clone(),
            cod: g,
            map,
        }
    }

    /// Constant-unit homomorphism.
    pub fn trivial(dom: Arc<FiniteGroup>, cod: Arc<FiniteGroup>) -> Self {
        let map = vec![cod.unit; dom.order()];
        GroupHom { dom, cod, map }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }
}

/// Empty report iff `f` is multiplicative (unit preservation follows).
pub fn check_hom(f: &GroupHom) -> ValidationReport {
    let mut report = ValidationReport::new(format!("hom {}→{}", f.dom.name, f.cod.name));
    let mult = report.law("multiplicativity");
    let n = f.dom.order();
    for a in 0..n {
        for b in 0..n {
            if f.map[f.dom.mul(a, b)] != f.cod.mul(f.map[a], f.map[b]) {
                mult.record(|| {
                    format!(
                        "f({}·{}) ≠ f({})·f({})",
                        f.dom.label(a),
                        f.dom.label(b),
                        f.dom.label(a),
                        f.dom.label(b)
                    )
                });
            }
        }
    }
    let unit = report.law("unit");
    if f.map[f.dom.unit] != f.cod.unit {
        unit.record(|| "f(e) ≠ e".to_string());
    }
    report
}

/// A left action of a finite group on a finite carrier set.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: Arc<FiniteGroup>,
    pub carrier: Vec<String>,
    /// `act[g][p]` = index of g·p
    pub act: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn new(group: Arc<FiniteGroup>, carrier: Vec<String>, act: Vec<Vec<usize>>) -> Result<Self> {
        if act.len() != group.order() {
            return Err(Error::TableArity {
                context: format!("action of {}", group.name),
                expected: group.order(),
                got: act.len(),
            });
        }
        for (g, row) in act.iter().enumerate() {
            if row.len() != carrier.len() {
                return Err(Error::TableArity {
                    context: format!("action of {} row {g}", group.name),
                    expected: carrier.len(),
                    got: row.len(),
                });
            }
            for &v in row {
                if v >= carrier.len() {
                    return Err(Error::IndexRange {
                        context: format!("action of {}", group.name),
                        index: v,
                        size: carrier.len(),
                    });
                }
            }
        }
        Ok(GroupAction {
            group,
            carrier,
            act,
        })
    }

    /// Trivial action on a carrier.
    pub fn trivial(group: Arc<FiniteGroup>, carrier: Vec<String>) -> Self {
        let id: Vec<usize> = (0..carrier.len()).collect();
        let act = vec![id; group.order()];
        GroupAction {
            group,
            carrier,
            act,
        }
    }

    /// Left translation of the group on itself.
    pub fn left_translation(group: Arc<FiniteGroup>) -> Self {
        let act = (0..group.order())
            .map(|g| (0..group.order()).map(|p| group.mul(g, p)).collect())
            .collect();
        GroupAction {
            carrier: group.elements.clone(),
            group,
            act,
        }
    }

    /// Conjugation of the group on itself, `g·h = g h g⁻¹`.
    pub fn conjugation(group: Arc<FiniteGroup>) -> Self {
        let act = (0..group.order())
            .map(|g| {
                (0..group.order())
                    .map(|h| group.mul(group.mul(g, h), group.inv(g)))
                    .collect()
            })
            .collect();
        GroupAction {
            carrier: group.elements.clone(),
            group,
            act,
        }
    }

    #[inline]
    pub fn apply(&self, g: usize, p: usize) -> usize {
        self.act[g][p]
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier.len()
    }

    /// Orbit partition; each orbit is sorted, orbits sorted by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.carrier.len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for p in 0..n {
            if seen[p] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.apply(g, p)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &q in &orbit {
                seen[q] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }
}

/// Empty report iff unit and compatibility laws hold.
pub fn check_action(a: &GroupAction) -> ValidationReport {
    let mut report = ValidationReport::new(format!(
        "action of {} on {} points",
        a.group.name,
        a.carrier.len()
    ));
    let unit = report.law("unit acts neutrally");
    for p in 0..a.carrier.len() {
        if a.apply(a.group.unit, p) != p {
            unit.record(|| format!("e·{} ≠ {}", a.carrier[p], a.carrier[p]));
        }
    }
    let compat = report.law("compatibility g2·(g1·p) = (g2·g1)·p");
    for g2 in 0..a.group.order() {
        for g1 in 0..a.group.order() {
            for p in 0..a.carrier.len() {
                if a.apply(g2, a.apply(g1, p)) != a.apply(a.group.mul(g2, g1), p) {
                    compat.record(|| {
                        format!(
                            "{}·({}·{}) ≠ ({}·{})·{}",
                            a.group.label(g2),
                            a.group.label(g1),
                            a.carrier[p],
                            a.group.label(g2),
                            a.group.label(g1),
                            a.carrier[p]
                        )
                    });
                }
            }
        }
    }
    report
}

/// True iff `act(g,p) = p` implies `g = e`.
pub fn is_free(a: &GroupAction) -> bool {
    free_violation(a).is_none()
}

/// A witness `(g, p)` with `g ≠ e` and `g·p = p`, if one exists.
pub fn free_violation(a: &GroupAction) -> Option<(usize, usize)> {
    for g in 0..a.group.order() {
        if g == a.group.unit {
            continue;
        }
        for p in 0..a.carrier.len() {
            if a.apply(g, p) == p {
                return Some((g, p));
            }
        }
    }
    None
}

/// The semidirect product `H ⋊_C G` with product
/// `(h2,g2)·(h1,g1) = (h2·C_{g2}h1, g2·g1)`.
///
/// `c` must be an action of `G` on the elements of `H` by automorphisms;
/// each `C_g` is checked to be a homomorphism first.
///
/// Pair `(h,g)` is stored at index `h·|G| + g` with label `(h,g)`.
pub fn semidirect_product(h: &FiniteGroup, g: &FiniteGroup, c: &GroupAction) -> Result<FiniteGroup> {
    if c.carrier.len() != h.order() || c.group.order() != g.order() {
        return Err(Error::TableArity {
            context: format!("action tables for {}⋊{}", h.name, g.name),
            expected: h.order(),
            got: c.carrier.len(),
        });
    }
    for gi in 0..g.order() {
        for a in 0..h.order() {
            for b in 0..h.order() {
                if c.apply(gi, h.mul(a, b)) != h.mul(c.apply(gi, a), c.apply(gi, b)) {
                    return Err(Error::NotByAutomorphisms {
                        elem: g.label(gi).to_string(),
                        group: h.name.clone(),
                    });
                }
            }
        }
    }
    let ng = g.order();
    let pair = |hi: usize, gi: usize| hi * ng + gi;
    let n = h.order() * ng;
    let mut elements = Vec::with_capacity(n);
    for hi in 0..h.order() {
        for gi in 0..ng {
            elements.push(format!("({},{})", h.label(hi), g.label(gi)));
        }
    }
    let mut mul = vec![vec![0usize; n]; n];
    for h2 in 0..h.order() {
        for g2 in 0..ng {
            for h1 in 0..h.order() {
                for g1 in 0..ng {
                    let hm = h.mul(h2, c.apply(g2, h1));
                    let gm = g.mul(g2, g1);
                    mul[pair(h2, g2)][pair(h1, g1)] = pair(hm, gm);
                }
            }
        }
    }
    FiniteGroup::from_mul_table(format!("{}⋊{}", h.name, g.name), elements, mul)
}

/// Brute-force isomorphism search between small groups (orders ≤ 24).
///
/// Returns an explicit isomorphism table `a → b` if one exists.
pub fn group_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Result<Option<Vec<usize>>> {
    const BOUND: usize = 24;
    if a.order() != b.order() {
        return Ok(None);
    }
    let n = a.order();
    if n > BOUND {
        return Err(Error::SearchExhausted(format!(
            "group order {n} exceeds isomorphism search bound {BOUND}"
        )));
    }
    // order profiles prune the search
    let ord_a: Vec<usize> = (0..n).map(|x| a.element_order(x)).collect();
    let ord_b: Vec<usize> = (0..n).map(|x| b.element_order(x)).collect();
    {
        let mut pa = ord_a.clone();
        let mut pb = ord_b.clone();
        pa.sort_unstable();
        pb.sort_unstable();
        if pa != pb {
            return Ok(None);
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.unit] = b.unit;
    used[b.unit] = true;

    fn extend(
        a: &FiniteGroup,
        b: &FiniteGroup,
        ord_a: &[usize],
        ord_b: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.order();
        // next unmapped element
        let x = match (0..n).find(|&x| map[x] == usize::MAX) {
            None => return true,
            Some(x) => x,
        };
        for y in 0..n {
            if used[y] || ord_a[x] != ord_b[y] {
                continue;
            }
            // tentatively map x ↦ y, close under multiplication
            let mut added: Vec<usize> = Vec::new();
            let mut ok = true;
            map[x] = y;
            used[y] = true;
            added.push(x);
            // closure: for all mapped u,v the product must be consistent
            let mut frontier = vec![x];
            'closure: while let Some(u) = frontier.pop() {
                for v in 0..n {
                    if map[v] == usize::MAX {
                        continue;
                    }
                    for (p, q) in [(u, v), (v, u)] {
                        let prod = a.mul(p, q);
                        let img = b.mul(map[p], map[q]);
                        if map[prod] == usize::MAX {
                            if used[img] || ord_a[prod] != ord_b[img] {
                                ok = false;
                                break 'closure;
                            }
                            map[prod] = img;
                            used[img] = true;
                            added.push(prod);
                            frontier.push(prod);
                        } else if map[prod] != img {
                            ok = false;
                            break 'closure;
                        }
                    }
                }
            }
            if ok && extend(a, b, ord_a, ord_b, map, used) {
                return true;
            }
            for u in added {
                used[map[u]] = false;
                map[u] = usize::MAX;
            }
        }
        false
    }

    if extend(a, b, &ord_a, &ord_b, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}
