//! `pbg` — command-line front end for the pbgroupoid engine.
//!
//! Exit codes: 0 = every check passed; 1 = a mathematical check failed
//! (the witness is in the report); 2 = input error (unreadable file,
//! parse error, dangling reference, unmet precondition).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use pbgroupoid::action::{check_pb_groupoid, check_two_group_action, partial_quotient, quotient_pb};
use pbgroupoid::catalog;
use pbgroupoid::error::Error;
use pbgroupoid::gerbe::{check_bundle_gerbe, functor_phi, functor_psi, functor_xi};
use pbgroupoid::group::check_group;
use pbgroupoid::groupoid::{check_functor, check_groupoid};
use pbgroupoid::io::{
    document_value, emit, entity_to_document, parse_document, CliReport, Entity, SpecDocument,
};
use pbgroupoid::morita::{
    bitorsor_exists, check_bitorsor, check_morita_pullback, find_weak_equivalence,
    BitorsorExistence,
};
use pbgroupoid::nerve::{check_simplicial, nerve, nerve_pb};
use pbgroupoid::transform::{
    aut_gerbe, aut_partial_quotient, check_aut_set, enumerate_aut, verify_square, TransformSetup,
    AUT_CAP,
};
use pbgroupoid::two_group::{check_crossed_module, check_two_group, two_group_from_crossed_module};

#[derive(Parser)]
#[command(name = "pbg", version, about = "finite PB groupoids, 2-groups and bundle gerbes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Phi,
    Psi,
    Xi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Pullback,
    Bitorsor,
    Weak,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and run every stanza through its checker.
    Validate { input: PathBuf },
    /// Construct canonical derived objects (2-groups of crossed modules,
    /// PB groupoids of principal bundles) and emit them.
    Build {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one of the Φ/Ψ/Ξ correspondences.
    Functor {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        input: PathBuf,
        /// Stanza name to transform (defaults to the first suitable one).
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient a 2-group action; `--partial` quotients by the identity
    /// bisection only.
    Quotient {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partial: bool,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nerve levels, simplicial identity verdicts and (for PB inputs)
    /// per-level bundle verdicts.
    Nerve {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner transformation groups at nerve level k.
    Aut {
        #[arg(long)]
        input: PathBuf,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        verify_square: bool,
        #[arg(long)]
        match_gerbe: bool,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Morita equivalence of the first groupoids in two documents.
    Morita {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        via: Via,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in catalog, or write it to a directory.
    Catalog {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Input errors exit 2; mathematical failures raised as errors mid
/// construction map to 1 (checker failures already exit 1 via reports).
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::DanglingReference(_)
        | Error::UnknownKind(_)
        | Error::TableArity { .. }
        | Error::IndexRange { .. }
        | Error::EmptyCarrier(_)
        | Error::CompositionDomain(_)
        | Error::MissingUnit(_)
        | Error::MissingInverse(_)
        | Error::NotSurjective(_)
        | Error::BaseNotFiberProduct(_)
        | Error::NotBaseTrivial(_)
        | Error::PreconditionNotMet(_)
        | Error::CarrierTooLarge { .. }
        | Error::LevelTooLarge { .. }
        | Error::SearchExhausted(_) => 2,
        _ => 1,
    }
}

fn read_doc(path: &Path) -> Result<SpecDocument, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_document(&text, &path.display().to_string())
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn find_entity<'d>(
    doc: &'d SpecDocument,
    name: &'d Option<String>,
    want: &str,
) -> Result<(&'d str, &'d Entity), Error> {
    if let Some(name) = name {
        let e = doc.get(name)?;
        if e.kind() != want {
            return Err(Error::PreconditionNotMet(format!(
                "stanza `{name}` is a {}, expected {want}",
                e.kind()
            )));
        }
        return Ok((name.as_str(), e));
    }
    doc.order
        .iter()
        .find_map(|n| {
            let e = &doc.entities[n];
            (e.kind() == want).then_some((n.as_str(), e))
        })
        .ok_or_else(|| Error::PreconditionNotMet(format!("no {want} stanza in the document")))
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Validate { input } => {
            let doc = read_doc(&input)?;
            let mut report = CliReport::new(format!("validate {}", input.display()));
            for name in &doc.order {
                validate_entity(name, &doc.entities[name], &mut report);
            }
            print!("{}", emit(&report.to_value()));
            Ok(report.ok)
        }
        Command::Build { input, out } => {
            let doc = read_doc(&input)?;
            let mut report = CliReport::new(format!("build {}", input.display()));
            let mut parts: Vec<(String, Entity)> = Vec::new();
            for name in &doc.order {
                let entity = &doc.entities[name];
                validate_entity(name, entity, &mut report);
                parts.push((name.clone(), entity.clone()));
                match entity {
                    Entity::CrossedModule(cm) => {
                        let tg = two_group_from_crossed_module(cm)?;
                        report.absorb(&format!("{name}.two_group"), &check_two_group(&tg));
                        parts.push((format!("{name}.two_group"), Entity::TwoGroup(Arc::new(tg))));
                    }
                    Entity::Bundle(b) => {
                        let pb = pbgroupoid::action::pb_groupoid_from_principal_bundle(b)?;
                        report.absorb(&format!("{name}.pb"), &check_pb_groupoid(&pb));
                        parts.push((
                            format!("{name}.pb"),
                            Entity::Pb(Box::new(pbgroupoid::io::PbEntry {
                                pb,
                                fiber_surjection: None,
                                trivialization: None,
                            })),
                        ));
                    }
                    _ => {}
                }
            }
            let refs: Vec<(String, &Entity)> =
                parts.iter().map(|(n, e)| (n.clone(), e)).collect();
            let text = emit(&document_value(false, refs));
            write_out(&out, &text)?;
            eprint!("{}", emit(&report.to_value()));
            Ok(report.ok)
        }
        Command::Functor {
            which,
            input,
            name,
            out,
        } => {
            let doc = read_doc(&input)?;
            let mut report = CliReport::new("functor");
            let (ok, text) = match which {
                Which::Phi => {
                    let (n, e) = find_entity(&doc, &name, "pb_groupoid")?;
                    let Entity::Pb(entry) = e else { unreachable!() };
                    let pi = entry.fiber_surjection.as_ref().ok_or_else(|| {
                        Error::BaseNotFiberProduct(
                            "pb_groupoid stanza carries no fiber_surjection".into(),
                        )
                    })?;
                    let gerbe = functor_phi(&entry.pb, pi)?;
                    report.absorb("Φ output", &check_bundle_gerbe(&gerbe));
                    report.count("carrier_arrows", gerbe.carrier.arrow_count() as u64);
                    report.count("base_arrows", gerbe.base.arrow_count() as u64);
                    let text = emit(&entity_to_document(
                        &format!("phi({n})"),
                        &Entity::Gerbe(Box::new(gerbe)),
                    ));
                    (report.ok, text)
                }
                Which::Psi => {
                    let (n, e) = find_entity(&doc, &name, "bundle_gerbe")?;
                    let Entity::Gerbe(gerbe) = e else { unreachable!() };
                    let psi = functor_psi(gerbe)?;
                    report.absorb("Ψ output", &psi.report);
                    report.absorb("Ψ action", &check_two_group_action(&psi.bt.pb.action));
                    let trivialization = Some((psi.bt.g_of.clone(), psi.bt.y_of.clone()));
                    let text = emit(&entity_to_document(
                        &format!("psi({n})"),
                        &Entity::Pb(Box::new(pbgroupoid::io::PbEntry {
                            pb: psi.bt.pb,
                            fiber_surjection: None,
                            trivialization,
                        })),
                    ));
                    (report.ok, text)
                }
                Which::Xi => {
                    let (n, e) = find_entity(&doc, &name, "pb_groupoid")?;
                    let Entity::Pb(entry) = e else { unreachable!() };
                    let bt = entry.base_trivial().ok_or_else(|| {
                        Error::NotBaseTrivial(
                            "pb_groupoid stanza carries no trivialization".into(),
                        )
                    })?;
                    let gerbe = functor_xi(&bt)?;
                    report.absorb("Ξ output", &check_bundle_gerbe(&gerbe));
                    report.count("carrier_arrows", gerbe.carrier.arrow_count() as u64);
                    let text = emit(&entity_to_document(
                        &format!("xi({n})"),
                        &Entity::Gerbe(Box::new(gerbe)),
                    ));
                    (report.ok, text)
                }
            };
            write_out(&out, &text)?;
            eprint!("{}", emit(&report.to_value()));
            Ok(ok)
        }
        Command::Quotient {
            input,
            partial,
            name,
            out,
        } => {
            let doc = read_doc(&input)?;
            let mut report = CliReport::new("quotient");
            let text = if partial {
                let (n, e) = find_entity(&doc, &name, "pb_groupoid")?;
                let Entity::Pb(entry) = e else { unreachable!() };
                let pq = partial_quotient(&entry.pb)?;
                report.absorb("partial quotient", &pq.report);
                report.count("arrows", pq.pb.base.arrow_count() as u64);
                emit(&entity_to_document(
                    &format!("{n}-partial-quotient"),
                    &Entity::Groupoid(pq.pb.base.clone()),
                ))
            } else {
                let found = find_entity(&doc, &name, "two_group_action")
                    .or_else(|_| find_entity(&doc, &name, "pb_groupoid"))?;
                let (n, action) = match found {
                    (n, Entity::Action(a)) => (n, a.clone()),
                    (n, Entity::Pb(p)) => (n, p.pb.action.clone()),
                    _ => unreachable!(),
                };
                let pb = quotient_pb(&action)?;
                report.absorb("quotient", &check_pb_groupoid(&pb));
                report.count("arrows", pb.base.arrow_count() as u64);
                emit(&entity_to_document(
                    &format!("{n}-quotient"),
                    &Entity::Groupoid(pb.base.clone()),
                ))
            };
            write_out(&out, &text)?;
            eprint!("{}", emit(&report.to_value()));
            Ok(report.ok)
        }
        Command::Nerve {
            input,
            k,
            check,
            name,
            out,
        } => {
            let doc = read_doc(&input)?;
            let mut report = CliReport::new(format!("nerve -k {k}"));
            if let Ok((_, Entity::Pb(entry))) = find_entity(&doc, &name, "pb_groupoid") {
                let npb = nerve_pb(&entry.pb, k)?;
                for lb in &npb.levels {
                    report.count(format!("P^({})", lb.k), lb.carrier.len() as u64);
                    report.count(format!("G^({})", lb.k), lb.group.order() as u64);
                    report.count(format!("M^({})", lb.k), lb.m_size as u64);
                }
                report.absorb("bundles", &npb.report);
                if check {
                    let (_, s) = nerve(entry.pb.action.target.clone(), k)?;
                    report.absorb("simplicial identities", &check_simplicial(&s));
                }
            } else {
                let (_, e) = find_entity(&doc, &name, "groupoid")?;
                let Entity::Groupoid(g) = e else { unreachable!() };
                let (levels, s) = nerve(g.clone(), k)?;
                for kk in 0..=k {
                    report.count(format!("N^({kk})"), levels.size(kk) as u64);
                }
                if check {
                    report.absorb("simplicial identities", &check_simplicial(&s));
                }
            }
            let text = emit(&report.to_value());
            write_out(&out, &text)?;
            Ok(report.ok)
        }
        Command::Aut {
            input,
            k,
            verify_square: do_square,
            match_gerbe,
            name,
            out,
        } => {
            let doc = read_doc(&input)?;
            let (_, e) = find_entity(&doc, &name, "pb_groupoid")?;
            let Entity::Pb(entry) = e else { unreachable!() };
            let setup = TransformSetup::new(&entry.pb, k)?;
            let mut report = CliReport::new(format!("aut -k {k}"));
            let orbit_count = setup.orbits(k).len();
            let group_order = setup.npb.levels[k].group.order() as u64;
            report.count("orbits", orbit_count as u64);
            report.count("group_order", group_order);
            report.count(
                "aut_order",
                group_order.pow(u32::try_from(orbit_count).unwrap_or(u32::MAX)),
            );
            if let Ok(auts) = enumerate_aut(&setup, k, AUT_CAP) {
                report.absorb("Aut set", &check_aut_set(&setup, k, &auts));
                report.count("materialised", auts.len() as u64);
                // each automorphism is x ↦ ψ(x)·x for a unique equivariant ψ;
                // distinct ψ-images give an independent count of
                // C_(H^k⋊G)(P^(k), H^k⋊G)
                let mut images: Vec<Vec<usize>> = Vec::new();
                for aut in &auts {
                    if let Ok(em) = pbgroupoid::transform::psi_k(&setup, aut) {
                        images.push(em.values);
                    }
                }
                images.sort();
                images.dedup();
                report.count("equivariant_full_count", images.len() as u64);
                // a generating family: the automorphisms acting by one group
                // element on one orbit, as permutation tables
                let orbits = setup.orbits(k);
                let lb = &setup.npb.levels[k];
                for (oi, orbit) in orbits.iter().enumerate() {
                    for u in 0..lb.group.order() {
                        if u == lb.group.unit {
                            continue;
                        }
                        let mut perm: Vec<usize> = (0..lb.carrier.len()).collect();
                        let rep = orbit[0];
                        let f_rep = lb.act[u][rep];
                        for v in 0..lb.group.order() {
                            perm[lb.act[v][rep]] = lb.act[v][f_rep];
                        }
                        report.notes.push(format!(
                            "generator (orbit {oi}, {}): {:?}",
                            lb.group.label(u),
                            perm
                        ));
                    }
                }
            }
            let apq = aut_partial_quotient(&setup, k)?;
            report.absorb("Aut(P^(k)/_G)", &apq.report);
            report.count("aut_partial_quotient_order", apq.order as u64);
            report.count("equivariant_hk_count", apq.equivariant_count as u64);
            if do_square {
                report.absorb("square", &verify_square(&setup, k)?);
            }
            if match_gerbe {
                let bt = entry.base_trivial().ok_or_else(|| {
                    Error::NotBaseTrivial("matching the gerbe needs a trivialization".into())
                })?;
                let ag = aut_gerbe(&setup, &bt, k)?;
                report.absorb("gerbe match", &ag.report);
                report.count("aut_gerbe_order", ag.order as u64);
            }
            let text = emit(&report.to_value());
            write_out(&out, &text)?;
            Ok(report.ok)
        }
        Command::Morita { a, b, via, out } => {
            let doc_a = read_doc(&a)?;
            let doc_b = read_doc(&b)?;
            let (_, ea) = find_entity(&doc_a, &None, "groupoid")?;
            let (_, eb) = find_entity(&doc_b, &None, "groupoid")?;
            let (Entity::Groupoid(ga), Entity::Groupoid(gb)) = (ea, eb) else {
                unreachable!()
            };
            let mut report = CliReport::new("morita");
            match via {
                Via::Weak => {
                    let fwd = find_weak_equivalence(ga, gb)?;
                    let bwd = if fwd.is_none() {
                        find_weak_equivalence(gb, ga)?
                    } else {
                        None
                    };
                    let ok = fwd.is_some() || bwd.is_some();
                    report.check(
                        "weak equivalence found",
                        ok,
                        (!ok).then(|| "no weak equivalence in either direction".into()),
                    );
                }
                Via::Bitorsor => match bitorsor_exists(ga.clone(), gb.clone())? {
                    BitorsorExistence::Yes(bit) => {
                        report.absorb("bitorsor", &check_bitorsor(&bit));
                    }
                    BitorsorExistence::No(reason) => {
                        report.check("bitorsor exists", false, Some(reason));
                    }
                    BitorsorExistence::Exhausted => {
                        report.check(
                            "bitorsor exists",
                            false,
                            Some("search exhausted without a verdict".into()),
                        );
                    }
                },
                Via::Pullback => {
                    let f = find_weak_equivalence(ga, gb)?.ok_or_else(|| {
                        Error::PreconditionNotMet(
                            "pullback comparison needs a weak equivalence to derive the span"
                                .into(),
                        )
                    })?;
                    if !f.is_surjective_on_objects() {
                        return Err(Error::PreconditionNotMet(
                            "derived σ is not surjective".into(),
                        ));
                    }
                    let rho: Vec<usize> = (0..ga.object_count()).collect();
                    let verdict = check_morita_pullback(ga, gb, &ga.objects, &rho, &f.obj_map)?;
                    report.check(
                        "pullback groupoids isomorphic over the carrier",
                        verdict.is_equivalent(),
                        match &verdict {
                            pbgroupoid::morita::MoritaVerdict::NotEquivalent(r) => Some(r.clone()),
                            _ => None,
                        },
                    );
                }
            }
            let text = emit(&report.to_value());
            write_out(&out, &text)?;
            Ok(report.ok)
        }
        Command::Catalog { emit: emit_dir } => {
            let entries = catalog::entries()?;
            match emit_dir {
                None => {
                    let mut report = CliReport::new("catalog");
                    for e in &entries {
                        report.check(format!("{} ({})", e.name, e.entity.kind()), true, None);
                    }
                    print!("{}", emit(&report.to_value()));
                    Ok(true)
                }
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::Parse {
                        path: dir.display().to_string(),
                        message: e.to_string(),
                    })?;
                    let mut valid_parts: Vec<(String, &Entity)> = Vec::new();
                    let mut invalid_parts: Vec<(String, &Entity)> = Vec::new();
                    for e in &entries {
                        let text = emit(&entity_to_document(&e.name, &e.entity));
                        let file = dir.join(format!("{}.json", e.name.replace(['◁', '/'], "-")));
                        std::fs::write(&file, text).map_err(|err| Error::Parse {
                            path: file.display().to_string(),
                            message: err.to_string(),
                        })?;
                        if e.expect_valid {
                            valid_parts.push((e.name.clone(), &e.entity));
                        } else {
                            invalid_parts.push((e.name.clone(), &e.entity));
                        }
                    }
                    let mut cat = document_value(true, valid_parts);
                    if let Some(obj) = cat.as_object_mut() {
                        obj.insert("catalog".into(), serde_json::Value::Bool(true));
                    }
                    std::fs::write(dir.join("catalog.json"), emit(&cat)).map_err(|e| {
                        Error::Parse {
                            path: "catalog.json".into(),
                            message: e.to_string(),
                        }
                    })?;
                    let counter = document_value(true, invalid_parts);
                    std::fs::write(dir.join("counterexamples.json"), emit(&counter)).map_err(
                        |e| Error::Parse {
                            path: "counterexamples.json".into(),
                            message: e.to_string(),
                        },
                    )?;
                    Ok(true)
                }
            }
        }
    }
}

fn validate_entity(name: &str, entity: &Entity, report: &mut CliReport) {
    match entity {
        Entity::Group(g) => report.absorb(name, &check_group(g)),
        Entity::Groupoid(g) => report.absorb(name, &check_groupoid(g)),
        Entity::CrossedModule(cm) => report.absorb(name, &check_crossed_module(cm)),
        Entity::TwoGroup(tg) => report.absorb(name, &check_two_group(tg)),
        Entity::Action(a) => report.absorb(name, &check_two_group_action(a)),
        Entity::Pb(entry) => {
            report.absorb(name, &check_pb_groupoid(&entry.pb));
            if let Some(bt) = entry.base_trivial() {
                report.absorb(
                    &format!("{name}.trivialization"),
                    &pbgroupoid::gerbe::check_base_trivial(&bt),
                );
            }
        }
        Entity::Bundle(b) => report.absorb(name, &b.check()),
        Entity::Gerbe(g) => report.absorb(name, &check_bundle_gerbe(g)),
        Entity::Surjection(_) => report.check(format!("{name} (surjection)"), true, None),
        Entity::Functor(f) => report.absorb(name, &check_functor(f)),
    }
}
