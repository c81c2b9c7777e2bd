//! File formats: self-contained JSON documents of named stanzas, canonical
//! emission, and machine-readable reports.
//!
//! A document is `{"kind":"document","catalog":bool,"stanzas":[…]}`; each
//! stanza carries `"kind"` and `"name"`, and fields referring to other
//! structures hold either an inline stanza or the name of an earlier one.
//! Element tables are integer index tables over the element label lists,
//! so files stay stable under relabelling-free edits. Emission sorts keys
//! (canonical form); `parse ∘ emit` is the identity on the entity level
//! and `emit ∘ parse ∘ emit` is byte-stable.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::action::{
    GroupoidAction, ActionSide, PbGroupoid, PrincipalBundle, TwoGroupAction,
};
use crate::error::{Error, Result};
use crate::gerbe::{BaseTrivialPb, BundleGerbe};
use crate::group::{FiniteGroup, GroupAction, GroupHom};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor, Surjection};
use crate::report::ValidationReport;
use crate::two_group::{two_group_from_crossed_module, CrossedModule, TwoGroup};

/// A parsed entity.
#[derive(Clone)]
pub enum Entity {
    Group(Arc<FiniteGroup>),
    Groupoid(Arc<FiniteGroupoid>),
    CrossedModule(CrossedModule),
    TwoGroup(Arc<TwoGroup>),
    Action(TwoGroupAction),
    Pb(Box<PbEntry>),
    Bundle(PrincipalBundle),
    Gerbe(Box<BundleGerbe>),
    Surjection(Surjection),
    Functor(GroupoidFunctor),
}

/// A PB groupoid stanza with its optional fiber-product presentation and
/// trivialisation.
#[derive(Clone)]
pub struct PbEntry {
    pub pb: PbGroupoid,
    pub fiber_surjection: Option<Surjection>,
    pub trivialization: Option<(Vec<usize>, Vec<usize>)>,
}

impl PbEntry {
    pub fn base_trivial(&self) -> Option<BaseTrivialPb> {
        self.trivialization.as_ref().map(|(g_of, y_of)| BaseTrivialPb {
            pb: self.pb.clone(),
            g_of: g_of.clone(),
            y_of: y_of.clone(),
        })
    }
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Group(_) => "group",
            Entity::Groupoid(_) => "groupoid",
            Entity::CrossedModule(_) => "crossed_module",
            Entity::TwoGroup(_) => "two_group",
            Entity::Action(_) => "two_group_action",
            Entity::Pb(_) => "pb_groupoid",
            Entity::Bundle(_) => "principal_bundle",
            Entity::Gerbe(_) => "bundle_gerbe",
            Entity::Surjection(_) => "surjection",
            Entity::Functor(_) => "functor",
        }
    }
}

/// A parsed document: named entities in declaration order.
pub struct SpecDocument {
    pub catalog: bool,
    pub order: Vec<String>,
    pub entities: BTreeMap<String, Entity>,
}

impl SpecDocument {
    pub fn get(&self, name: &str) -> Result<&Entity> {
        self.entities
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }
}

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn as_obj<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(path, "expected object"))
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(path, format!("missing field `{key}`")))
}

fn string_list(v: &Value, path: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| parse_err(path, "expected array of strings"))?
        .iter()
        .map(|s| {
            s.as_str()
                .map(String::from)
                .ok_or_else(|| parse_err(path, "expected string"))
        })
        .collect()
}

fn usize_list(v: &Value, path: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| parse_err(path, "expected array of integers"))?
        .iter()
        .map(|n| {
            n.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| parse_err(path, "expected non-negative integer"))
        })
        .collect()
}

fn table(v: &Value, path: &str) -> Result<Vec<Vec<usize>>> {
    v.as_array()
        .ok_or_else(|| parse_err(path, "expected table"))?
        .iter()
        .map(|row| usize_list(row, path))
        .collect()
}

/// Parse a document from JSON text.
pub fn parse_document(text: &str, path: &str) -> Result<SpecDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_string(),
        message: format!("line {}, column {}: {e}", e.line(), e.column()),
    })?;
    let obj = as_obj(&value, path)?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("document") => {}
        Some(other) => {
            // a bare stanza is accepted as a one-stanza document
            if STANZA_KINDS.contains(&other) {
                let mut doc = SpecDocument {
                    catalog: false,
                    order: Vec::new(),
                    entities: BTreeMap::new(),
                };
                parse_stanza(&value, path, &mut doc)?;
                return Ok(doc);
            }
            return Err(Error::UnknownKind(other.to_string()));
        }
        None => return Err(parse_err(path, "missing `kind`")),
    }
    let catalog = obj.get("catalog").and_then(Value::as_bool).unwrap_or(false);
    let stanzas = field(obj, "stanzas", path)?
        .as_array()
        .ok_or_else(|| parse_err(path, "`stanzas` must be an array"))?;
    let mut doc = SpecDocument {
        catalog,
        order: Vec::new(),
        entities: BTreeMap::new(),
    };
    for stanza in stanzas {
        parse_stanza(stanza, path, &mut doc)?;
    }
    Ok(doc)
}

const STANZA_KINDS: &[&str] = &[
    "group",
    "groupoid",
    "crossed_module",
    "two_group",
    "two_group_action",
    "pb_groupoid",
    "principal_bundle",
    "bundle_gerbe",
    "surjection",
    "functor",
];

fn parse_stanza(v: &Value, path: &str, doc: &mut SpecDocument) -> Result<()> {
    let obj = as_obj(v, path)?;
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| parse_err(path, "`kind` must be a string"))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("unnamed")
        .to_string();
    let entity = build_entity(kind, obj, path, doc)?;
    doc.order.push(name.clone());
    doc.entities.insert(name, entity);
    Ok(())
}

/// Resolve a field holding either an inline stanza or a reference name.
fn resolve(v: &Value, path: &str, doc: &mut SpecDocument) -> Result<Entity> {
    match v {
        Value::String(name) => doc.get(name).cloned(),
        Value::Object(obj) => {
            if let Some(Value::String(name)) = obj.get("ref") {
                return doc.get(name).cloned();
            }
            let kind = field(obj, "kind", path)?
                .as_str()
                .ok_or_else(|| parse_err(path, "`kind` must be a string"))?;
            build_entity(kind, obj, path, doc)
        }
        _ => Err(parse_err(path, "expected reference name or inline stanza")),
    }
}

fn resolve_group(v: &Value, path: &str, doc: &mut SpecDocument) -> Result<Arc<FiniteGroup>> {
    match resolve(v, path, doc)? {
        Entity::Group(g) => Ok(g),
        other => Err(parse_err(path, format!("expected group, got {}", other.kind()))),
    }
}

fn resolve_groupoid(v: &Value, path: &str, doc: &mut SpecDocument) -> Result<Arc<FiniteGroupoid>> {
    match resolve(v, path, doc)? {
        Entity::Groupoid(g) => Ok(g),
        other => Err(parse_err(
            path,
            format!("expected groupoid, got {}", other.kind()),
        )),
    }
}

fn resolve_two_group(v: &Value, path: &str, doc: &mut SpecDocument) -> Result<Arc<TwoGroup>> {
    match resolve(v, path, doc)? {
        Entity::TwoGroup(t) => Ok(t),
        Entity::CrossedModule(cm) => Ok(Arc::new(two_group_from_crossed_module(&cm)?)),
        other => Err(parse_err(
            path,
            format!("expected two_group or crossed_module, got {}", other.kind()),
        )),
    }
}

fn build_entity(
    kind: &str,
    obj: &Map<String, Value>,
    path: &str,
    doc: &mut SpecDocument,
) -> Result<Entity> {
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .unwrap_or("unnamed")
        .to_string();
    match kind {
        "group" => {
            let elements = string_list(field(obj, "elements", path)?, path)?;
            let mul = table(field(obj, "mul", path)?, path)?;
            let g = FiniteGroup::from_mul_table(name, elements, mul)?;
            Ok(Entity::Group(Arc::new(g)))
        }
        "groupoid" => {
            let objects = string_list(field(obj, "objects", path)?, path)?;
            let arrows_v = field(obj, "arrows", path)?
                .as_array()
                .ok_or_else(|| parse_err(path, "`arrows` must be an array"))?;
            let mut arrows = Vec::new();
            let mut src = Vec::new();
            let mut tgt = Vec::new();
            let obj_index = |label: &str| {
                objects
                    .iter()
                    .position(|o| o == label)
                    .ok_or_else(|| parse_err(path, format!("unknown object `{label}`")))
            };
            for a in arrows_v {
                let a = as_obj(a, path)?;
                arrows.push(
                    field(a, "id", path)?
                        .as_str()
                        .ok_or_else(|| parse_err(path, "arrow id must be a string"))?
                        .to_string(),
                );
                src.push(obj_index(
                    field(a, "src", path)?
                        .as_str()
                        .ok_or_else(|| parse_err(path, "arrow src must be a string"))?,
                )?);
                tgt.push(obj_index(
                    field(a, "tgt", path)?
                        .as_str()
                        .ok_or_else(|| parse_err(path, "arrow tgt must be a string"))?,
                )?);
            }
            let arrow_index = |label: &str| {
                arrows
                    .iter()
                    .position(|x| x == label)
                    .ok_or_else(|| parse_err(path, format!("unknown arrow `{label}`")))
            };
            let mut comp = BTreeMap::new();
            for row in field(obj, "comp", path)?
                .as_array()
                .ok_or_else(|| parse_err(path, "`comp` must be an array"))?
            {
                let triple = string_list(row, path)?;
                if triple.len() != 3 {
                    return Err(parse_err(path, "comp rows are [after, before, result]"));
                }
                comp.insert(
                    (arrow_index(&triple[0])?, arrow_index(&triple[1])?),
                    arrow_index(&triple[2])?,
                );
            }
            // inv is declared; units are inferred
            let g = FiniteGroupoid::from_comp(name, objects, arrows.clone(), src, tgt, comp)?;
            if let Some(inv_v) = obj.get("inv") {
                for row in inv_v
                    .as_array()
                    .ok_or_else(|| parse_err(path, "`inv` must be an array"))?
                {
                    let pair = string_list(row, path)?;
                    if pair.len() != 2 {
                        return Err(parse_err(path, "inv rows are [arrow, inverse]"));
                    }
                    let a = arrow_index(&pair[0])?;
                    let b = arrow_index(&pair[1])?;
                    if g.inv[a] != b {
                        return Err(parse_err(
                            path,
                            format!("declared inverse of `{}` disagrees with composition", pair[0]),
                        ));
                    }
                }
            }
            Ok(Entity::Groupoid(Arc::new(g)))
        }
        "crossed_module" => {
            let h = resolve_group(field(obj, "H", path)?, path, doc)?;
            let g = resolve_group(field(obj, "G", path)?, path, doc)?;
            let d_map = usize_list(field(obj, "d", path)?, path)?;
            let c = table(field(obj, "C", path)?, path)?;
            let d = GroupHom::new(h.clone(), g.clone(), d_map)?;
            let action = GroupAction::new(g.clone(), h.elements.clone(), c)?;
            Ok(Entity::CrossedModule(CrossedModule::new(
                name, h, g, action, d,
            )?))
        }
        "two_group" => {
            let cm = match resolve(field(obj, "crossed_module", path)?, path, doc)? {
                Entity::CrossedModule(cm) => cm,
                other => {
                    return Err(parse_err(
                        path,
                        format!("expected crossed_module, got {}", other.kind()),
                    ))
                }
            };
            Ok(Entity::TwoGroup(Arc::new(two_group_from_crossed_module(
                &cm,
            )?)))
        }
        "two_group_action" => {
            let tg = resolve_two_group(field(obj, "two_group", path)?, path, doc)?;
            let target = resolve_groupoid(field(obj, "groupoid", path)?, path, doc)?;
            let act_arr = table(field(obj, "act_arr", path)?, path)?;
            let act_obj = table(field(obj, "act_obj", path)?, path)?;
            let act_arr = GroupAction::new(tg.arrows_group.clone(), target.arrows.clone(), act_arr)?;
            let act_obj =
                GroupAction::new(tg.base_group.clone(), target.objects.clone(), act_obj)?;
            Ok(Entity::Action(TwoGroupAction::new(
                tg, target, act_arr, act_obj,
            )?))
        }
        "pb_groupoid" => {
            let action = match resolve(field(obj, "action", path)?, path, doc)? {
                Entity::Action(a) => a,
                other => {
                    return Err(parse_err(
                        path,
                        format!("expected two_group_action, got {}", other.kind()),
                    ))
                }
            };
            let base = resolve_groupoid(field(obj, "base", path)?, path, doc)?;
            let proj_obj = usize_list(field(obj, "proj_obj", path)?, path)?;
            let proj_arr = usize_list(field(obj, "proj_arr", path)?, path)?;
            let proj =
                GroupoidFunctor::new(action.target.clone(), base.clone(), proj_obj, proj_arr)?;
            let fiber_surjection = match obj.get("fiber_surjection") {
                Some(v) => {
                    let s = as_obj(v, path)?;
                    Some(Surjection::new(
                        base.objects.clone(),
                        string_list(field(s, "cod", path)?, path)?,
                        usize_list(field(s, "map", path)?, path)?,
                    )?)
                }
                None => None,
            };
            let trivialization = match obj.get("trivialization") {
                Some(v) => {
                    let t = as_obj(v, path)?;
                    Some((
                        usize_list(field(t, "g_of", path)?, path)?,
                        usize_list(field(t, "y_of", path)?, path)?,
                    ))
                }
                None => None,
            };
            Ok(Entity::Pb(Box::new(PbEntry {
                pb: PbGroupoid { action, base, proj },
                fiber_surjection,
                trivialization,
            })))
        }
        "principal_bundle" => {
            let group = resolve_group(field(obj, "group", path)?, path, doc)?;
            let total = string_list(field(obj, "total", path)?, path)?;
            let act = table(field(obj, "act", path)?, path)?;
            let base = string_list(field(obj, "base", path)?, path)?;
            let proj = usize_list(field(obj, "proj", path)?, path)?;
            let action = GroupAction::new(group.clone(), total, act)?;
            Ok(Entity::Bundle(PrincipalBundle::new(
                group, action, base, proj,
            )?))
        }
        "bundle_gerbe" => {
            let tg = resolve_two_group(field(obj, "two_group", path)?, path, doc)?;
            let carrier = resolve_groupoid(field(obj, "carrier", path)?, path, doc)?;
            let base = resolve_groupoid(field(obj, "base", path)?, path, doc)?;
            let pi_arr = usize_list(field(obj, "pi_arr", path)?, path)?;
            let rho = usize_list(field(obj, "rho", path)?, path)?;
            let star_rows = table(field(obj, "star", path)?, path)?;
            let mut star = BTreeMap::new();
            for row in &star_rows {
                if row.len() != 3 {
                    return Err(parse_err(path, "star rows are [gamma, b, result]"));
                }
                star.insert((row[0], row[1]), row[2]);
            }
            let pi = GroupoidFunctor::new(
                carrier.clone(),
                base.clone(),
                (0..carrier.object_count()).collect(),
                pi_arr,
            )?;
            let star = GroupoidAction::new(
                ActionSide::Left,
                tg.groupoid.clone(),
                carrier.arrows.clone(),
                rho.clone(),
                star,
            )?;
            let fiber_surjection = match obj.get("fiber_surjection") {
                Some(v) => {
                    let s = as_obj(v, path)?;
                    Some(Surjection::new(
                        carrier.objects.clone(),
                        string_list(field(s, "cod", path)?, path)?,
                        usize_list(field(s, "map", path)?, path)?,
                    )?)
                }
                None => None,
            };
            Ok(Entity::Gerbe(Box::new(BundleGerbe {
                two_group: tg,
                carrier,
                base,
                pi,
                rho,
                star,
                fiber_surjection,
            })))
        }
        "surjection" => Ok(Entity::Surjection(Surjection::new(
            string_list(field(obj, "dom", path)?, path)?,
            string_list(field(obj, "cod", path)?, path)?,
            usize_list(field(obj, "map", path)?, path)?,
        )?)),
        "functor" => {
            let dom = resolve_groupoid(field(obj, "dom", path)?, path, doc)?;
            let cod = resolve_groupoid(field(obj, "cod", path)?, path, doc)?;
            Ok(Entity::Functor(GroupoidFunctor::new(
                dom,
                cod,
                usize_list(field(obj, "obj_map", path)?, path)?,
                usize_list(field(obj, "arr_map", path)?, path)?,
            )?))
        }
        other => Err(Error::UnknownKind(other.to_string())),
    }
}

// ---------- emission ----------

fn group_value(name: &str, g: &FiniteGroup) -> Value {
    json!({
        "kind": "group",
        "name": name,
        "elements": g.elements,
        "mul": g.mul,
    })
}

fn groupoid_value(name: &str, g: &FiniteGroupoid) -> Value {
    let arrows: Vec<Value> = (0..g.arrow_count())
        .map(|a| {
            json!({
                "id": g.arrows[a],
                "src": g.objects[g.src[a]],
                "tgt": g.objects[g.tgt[a]],
            })
        })
        .collect();
    let comp: Vec<Value> = g
        .comp
        .iter()
        .map(|(&(b, a), &c)| json!([g.arrows[b], g.arrows[a], g.arrows[c]]))
        .collect();
    let inv: Vec<Value> = (0..g.arrow_count())
        .map(|a| json!([g.arrows[a], g.arrows[g.inv[a]]]))
        .collect();
    json!({
        "kind": "groupoid",
        "name": name,
        "objects": g.objects,
        "arrows": arrows,
        "comp": comp,
        "inv": inv,
    })
}

fn crossed_module_value(name: &str, cm: &CrossedModule, doc: &mut Vec<Value>) -> Value {
    let h_name = format!("{name}.H");
    let g_name = format!("{name}.G");
    doc.push(group_value(&h_name, &cm.h));
    doc.push(group_value(&g_name, &cm.g));
    json!({
        "kind": "crossed_module",
        "name": name,
        "H": h_name,
        "G": g_name,
        "d": cm.d.map,
        "C": cm.action.act,
    })
}

/// Emit one entity (and its dependencies) as a document value.
pub fn entity_to_document(name: &str, entity: &Entity) -> Value {
    let mut stanzas: Vec<Value> = Vec::new();
    match entity {
        Entity::Group(g) => stanzas.push(group_value(name, g)),
        Entity::Groupoid(g) => stanzas.push(groupoid_value(name, g)),
        Entity::CrossedModule(cm) => {
            let v = crossed_module_value(name, cm, &mut stanzas);
            stanzas.push(v);
        }
        Entity::TwoGroup(tg) => {
            let cm_name = format!("{name}.cm");
            let v = crossed_module_value(&cm_name, &tg.cm, &mut stanzas);
            stanzas.push(v);
            stanzas.push(json!({
                "kind": "two_group",
                "name": name,
                "crossed_module": cm_name,
            }));
        }
        Entity::Action(a) => {
            emit_action(name, a, &mut stanzas);
        }
        Entity::Pb(entry) => {
            let action_name = format!("{name}.action");
            emit_action(&action_name, &entry.pb.action, &mut stanzas);
            let base_name = format!("{name}.base");
            stanzas.push(groupoid_value(&base_name, &entry.pb.base));
            let mut fields = Map::new();
            fields.insert("kind".into(), json!("pb_groupoid"));
            fields.insert("name".into(), json!(name));
            fields.insert("action".into(), json!(action_name));
            fields.insert("base".into(), json!(base_name));
            fields.insert("proj_obj".into(), json!(entry.pb.proj.obj_map));
            fields.insert("proj_arr".into(), json!(entry.pb.proj.arr_map));
            if let Some(fs) = &entry.fiber_surjection {
                fields.insert(
                    "fiber_surjection".into(),
                    json!({"cod": fs.cod, "map": fs.map}),
                );
            }
            if let Some((g_of, y_of)) = &entry.trivialization {
                fields.insert("trivialization".into(), json!({"g_of": g_of, "y_of": y_of}));
            }
            stanzas.push(Value::Object(fields));
        }
        Entity::Bundle(b) => {
            let group_name = format!("{name}.group");
            stanzas.push(group_value(&group_name, &b.group));
            stanzas.push(json!({
                "kind": "principal_bundle",
                "name": name,
                "group": group_name,
                "total": b.action.carrier,
                "act": b.action.act,
                "base": b.base,
                "proj": b.proj,
            }));
        }
        Entity::Gerbe(g) => {
            let tg_name = format!("{name}.two_group");
            let cm_name = format!("{name}.cm");
            let v = crossed_module_value(&cm_name, &g.two_group.cm, &mut stanzas);
            stanzas.push(v);
            stanzas.push(json!({
                "kind": "two_group",
                "name": tg_name,
                "crossed_module": cm_name,
            }));
            let carrier_name = format!("{name}.carrier");
            stanzas.push(groupoid_value(&carrier_name, &g.carrier));
            let base_name = format!("{name}.base");
            stanzas.push(groupoid_value(&base_name, &g.base));
            let star: Vec<Value> = g
                .star
                .star
                .iter()
                .map(|(&(gamma, b), &r)| json!([gamma, b, r]))
                .collect();
            let mut fields = Map::new();
            fields.insert("kind".into(), json!("bundle_gerbe"));
            fields.insert("name".into(), json!(name));
            fields.insert("two_group".into(), json!(tg_name));
            fields.insert("carrier".into(), json!(carrier_name));
            fields.insert("base".into(), json!(base_name));
            fields.insert("pi_arr".into(), json!(g.pi.arr_map));
            fields.insert("rho".into(), json!(g.rho));
            fields.insert("star".into(), json!(star));
            if let Some(fs) = &g.fiber_surjection {
                fields.insert(
                    "fiber_surjection".into(),
                    json!({"cod": fs.cod, "map": fs.map}),
                );
            }
            stanzas.push(Value::Object(fields));
        }
        Entity::Surjection(s) => stanzas.push(json!({
            "kind": "surjection",
            "name": name,
            "dom": s.dom,
            "cod": s.cod,
            "map": s.map,
        })),
        Entity::Functor(f) => {
            let dom_name = format!("{name}.dom");
            let cod_name = format!("{name}.cod");
            stanzas.push(groupoid_value(&dom_name, &f.dom));
            stanzas.push(groupoid_value(&cod_name, &f.cod));
            stanzas.push(json!({
                "kind": "functor",
                "name": name,
                "dom": dom_name,
                "cod": cod_name,
                "obj_map": f.obj_map,
                "arr_map": f.arr_map,
            }));
        }
    }
    json!({
        "kind": "document",
        "catalog": false,
        "stanzas": stanzas,
    })
}

fn emit_action(name: &str, a: &TwoGroupAction, stanzas: &mut Vec<Value>) {
    let tg_name = format!("{name}.two_group");
    let cm_name = format!("{name}.cm");
    let v = crossed_module_value(&cm_name, &a.two_group.cm, stanzas);
    stanzas.push(v);
    stanzas.push(json!({
        "kind": "two_group",
        "name": tg_name,
        "crossed_module": cm_name,
    }));
    let target_name = format!("{name}.target");
    stanzas.push(groupoid_value(&target_name, &a.target));
    stanzas.push(json!({
        "kind": "two_group_action",
        "name": name,
        "two_group": tg_name,
        "groupoid": target_name,
        "act_arr": a.act_arr.act,
        "act_obj": a.act_obj.act,
    }));
}

/// Canonical text form: pretty JSON with sorted keys (serde_json maps are
/// ordered) and a trailing newline.
pub fn emit(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serialisable");
    out.push('\n');
    out
}

/// Wrap several entities into one document value.
pub fn document_value(catalog: bool, parts: Vec<(String, &Entity)>) -> Value {
    let mut stanzas: Vec<Value> = Vec::new();
    for (name, entity) in parts {
        let doc = entity_to_document(&name, entity);
        if let Value::Object(obj) = doc {
            if let Some(Value::Array(sub)) = obj.get("stanzas") {
                stanzas.extend(sub.clone());
            }
        }
    }
    // deduplicate identical named stanzas emitted twice (shared deps)
    let mut seen = BTreeMap::new();
    let mut unique = Vec::new();
    for s in stanzas {
        let key = s
            .get("name")
            .and_then(Value::as_str)
            .unwrap_or_default()
            .to_string();
        match seen.get(&key) {
            Some(prev) if *prev == s => {}
            Some(_) => unique.push(s.clone()),
            None => {
                seen.insert(key, s.clone());
                unique.push(s);
            }
        }
    }
    json!({
        "kind": "document",
        "catalog": catalog,
        "stanzas": unique,
    })
}

/// One check line of a machine-readable report.
#[derive(serde::Serialize)]
pub struct CheckLine {
    pub name: String,
    pub ok: bool,
    pub violations: u64,
    pub witnesses: Vec<String>,
}

/// A deterministic, machine-parseable report. Timing is intentionally not
/// part of the canonical form so reports stay byte-identical across runs.
#[derive(serde::Serialize)]
pub struct CliReport {
    pub command: String,
    pub ok: bool,
    pub checks: Vec<CheckLine>,
    pub counts: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl CliReport {
    pub fn new(command: impl Into<String>) -> Self {
        CliReport {
            command: command.into(),
            ok: true,
            checks: Vec::new(),
            counts: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn absorb(&mut self, prefix: &str, report: &ValidationReport) {
        for law in &report.laws {
            self.ok &= law.ok();
            self.checks.push(CheckLine {
                name: format!("{prefix}.{}", law.law),
                ok: law.ok(),
                violations: law.violations,
                witnesses: law.witnesses.clone(),
            });
        }
        for note in &report.notes {
            self.notes.push(format!("{prefix}: {note}"));
        }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: Option<String>) {
        self.ok &= ok;
        self.checks.push(CheckLine {
            name: name.into(),
            ok,
            violations: u64::from(!ok),
            witnesses: witness.into_iter().collect(),
        });
    }

    pub fn count(&mut self, name: impl Into<String>, value: u64) {
        self.counts.insert(name.into(), value);
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("serialisable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_group_stanza_round_trip() {
        let text = r#"{
            "kind": "document",
            "catalog": true,
            "stanzas": [
                {"kind":"group","name":"Z2","elements":["0","1"],"mul":[[0,1],[1,0]]}
            ]
        }"#;
        let doc = parse_document(text, "inline").unwrap();
        match doc.get("Z2").unwrap() {
            Entity::Group(g) => assert_eq!(g.order(), 2),
            _ => panic!("expected group"),
        }
    }

    #[test]
    fn dangling_reference_detected() {
        let text = r#"{
            "kind": "document",
            "stanzas": [
                {"kind":"two_group","name":"T","crossed_module":"missing"}
            ]
        }"#;
        match parse_document(text, "inline") {
            Err(Error::DanglingReference(name)) => assert_eq!(name, "missing"),
            _ => panic!("expected dangling reference"),
        }
    }

    #[test]
    fn parse_emit_parse_is_identity_and_byte_stable() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let doc1 = entity_to_document("Z3", &Entity::Group(g));
        let text1 = emit(&doc1);
        let parsed = parse_document(&text1, "emitted").unwrap();
        match parsed.get("Z3").unwrap() {
            Entity::Group(g) => {
                let doc2 = entity_to_document("Z3", &Entity::Group(g.clone()));
                let text2 = emit(&doc2);
                assert_eq!(text1, text2, "byte-stable canonical form");
            }
            _ => panic!("expected group"),
        }
    }

    #[test]
    fn groupoid_stanza_units_inferred() {
        let g = FiniteGroupoid::pair_groupoid("P", vec!["a".into(), "b".into()]).unwrap();
        let doc = entity_to_document("P", &Entity::Groupoid(Arc::new(g.clone())));
        let text = emit(&doc);
        let parsed = parse_document(&text, "emitted").unwrap();
        match parsed.get("P").unwrap() {
            Entity::Groupoid(h) => {
                assert_eq!(h.arrow_count(), g.arrow_count());
                assert_eq!(h.unit, g.unit);
                assert_eq!(h.inv, g.inv);
            }
            _ => panic!("expected groupoid"),
        }
    }

    #[test]
    fn bad_json_reports_position() {
        match parse_document("{\n \"kind\": }", "broken.json") {
            Err(Error::Parse { message, .. }) => assert!(message.contains("line")),
            _ => panic!("expected parse error"),
        }
    }
}
