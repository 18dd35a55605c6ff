use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use dgla_deform::artin::{AlgebraElement, AlgebraMorphism, ArtinAlgebra, Monomial};
use dgla_deform::bicomplex::{
    check_hypotheses, obstruction_transfer, total_cohomology, transfer_class, validate_bicomplex, AugmentedBicomplex,
    Direction, PreimageMode,
};
use dgla_deform::deformation::{
    etale_criterion, gauge_act, gauge_compose, gauge_equivalent, is_mc, lift_along, mc_residual, obstruction_class,
    tangent_space, transfer_sample, EquivalenceVerdict, EtaleVerdict, GaugeSearch, LiftAlong, McSolution,
};
use dgla_deform::dgla::{invariant_subalgebra, validate_dgla, Axiom, Dgla, DglaCochain};
use dgla_deform::homology::{cohomology, CohomologyClass, TensorClass};
use dgla_deform::io::{self, BicomplexFile, CochainFile, DglaFile, LoadedDgla};
use dgla_deform::models::{self, CatalogObject};
use dgla_deform::rational::wrap_vec;
use dgla_deform::selftest::{self, Profile};
use dgla_deform::{models::group_cech_model, Error, Result};
use serde_json::{json, Value};

use crate::report::{Report, Status};
use crate::{BicomplexCommand, Command, Edge, ElementArgs, GaugeCommand, McCommand, ModelCommand};

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Cohomology { .. } => "cohomology",
        Command::Mc(McCommand::Check(_)) => "mc check",
        Command::Mc(McCommand::Residual(_)) => "mc residual",
        Command::Gauge(GaugeCommand::Act { .. }) => "gauge act",
        Command::Gauge(GaugeCommand::Compose { .. }) => "gauge compose",
        Command::Gauge(GaugeCommand::Equiv { .. }) => "gauge equiv",
        Command::Tangent { .. } => "tangent",
        Command::Obstruct { .. } => "obstruct",
        Command::Lift { .. } => "lift",
        Command::Etale { .. } => "etale",
        Command::Bicomplex(BicomplexCommand::Validate { .. }) => "bicomplex validate",
        Command::Bicomplex(BicomplexCommand::Hypotheses { .. }) => "bicomplex hypotheses",
        Command::Bicomplex(BicomplexCommand::Transfer { .. }) => "bicomplex transfer",
        Command::Bicomplex(BicomplexCommand::Obstruction { .. }) => "bicomplex obstruction",
        Command::Bicomplex(BicomplexCommand::Total { .. }) => "bicomplex total",
        Command::Model(ModelCommand::Catalog { .. }) => "model catalog",
        Command::Model(ModelCommand::GroupCech { .. }) => "model group-cech",
        Command::Model(ModelCommand::Simplicial { .. }) => "model simplicial",
        Command::Selftest { .. } => "selftest",
    }
}

pub fn dispatch(c: &Command) -> Result<Report> {
    let cmd = name(c);
    match c {
        Command::Validate { file } => validate(cmd, file),
        Command::Cohomology { file, degree } => {
            let l = load_dgla(file)?.dgla;
            let h = cohomology(&l.complex(), *degree);
            let reps: Vec<Value> = h
                .representatives()
                .iter()
                .map(|r| json!({ "text": l.render(*degree, r), "vector": wrap_vec(r) }))
                .collect();
            Ok(Report::new(
                cmd,
                Status::Ok,
                json!({ "degree": degree, "dim": h.dim(), "representatives": reps }),
            ))
        }
        Command::Mc(McCommand::Check(args)) => {
            let (l, a, x) = load_element(args)?;
            let residual = mc_residual(&l, &a, &x)?;
            let ok = residual.is_zero();
            let payload =
                json!({ "element": cochain(&l, &a, &x), "is_mc": ok, "residual": cochain(&l, &a, &residual) });
            Ok(Report::new(
                cmd,
                if ok { Status::Ok } else { Status::Negative },
                payload,
            ))
        }
        Command::Mc(McCommand::Residual(args)) => {
            let (l, a, x) = load_element(args)?;
            let residual = mc_residual(&l, &a, &x)?;
            Ok(Report::new(
                cmd,
                Status::Ok,
                json!({ "residual": cochain(&l, &a, &residual) }),
            ))
        }
        Command::Gauge(g) => gauge(cmd, g),
        Command::Tangent { dgla } => {
            let l = load_dgla(dgla)?.dgla;
            let (_, report) = tangent_space(&l)?;
            let status = if report.verified() {
                Status::Ok
            } else {
                Status::Negative
            };
            Ok(Report::new(
                cmd,
                status,
                serde_json::to_value(&report).expect("serializes"),
            ))
        }
        Command::Obstruct {
            dgla,
            extension,
            element,
        } => {
            let l = load_dgla(dgla)?.dgla;
            let ext = io::parse_extension(&io::read_file(extension)?)?;
            let (_, x) = io::parse_cochain(&io::read_file(element)?, &l, Some(ext.quotient()))?;
            let report = obstruction_class(&l, &ext, &x)?;
            let status = if report.is_obstructed() {
                Status::Obstructed
            } else {
                Status::Ok
            };
            let payload = json!({
                "class": tensor_class(&l, &report.class),
                "lift_attempt": cochain(&l, ext.total(), &report.lift_attempt),
                "residual": cochain(&l, ext.total(), &report.residual),
            });
            Ok(Report::new(cmd, status, payload))
        }
        Command::Lift { dgla, algebra, element } => lift(cmd, dgla, algebra, element),
        Command::Etale {
            source,
            target,
            morphism,
            sample,
            algebra,
        } => {
            let s = load_dgla(source)?.dgla;
            let t = load_dgla(target)?.dgla;
            let phi = io::parse_morphism(&io::read_file(morphism)?, s, t.clone())?;
            let report = etale_criterion(&phi)?;
            let mut payload = serde_json::to_value(&report).expect("serializes");
            if let Some(sample) = sample {
                let fallback = algebra.as_deref().map(io::algebra_arg).transpose()?.map(Arc::new);
                let (a, y) = io::parse_cochain(&io::read_file(sample)?, &t, fallback.as_ref())?;
                let moved = transfer_sample(&phi, &a, &y)?;
                payload["sample"] = json!({
                    "source_solution": cochain(phi.source(), &a, &moved.source_solution),
                    "gauge": cochain(&t, &a, &moved.gauge),
                });
            }
            let status = match report.verdict {
                EtaleVerdict::Etale | EtaleVerdict::Smooth => Status::Ok,
                EtaleVerdict::CriterionNotSatisfied => Status::Negative,
            };
            Ok(Report::new(cmd, status, payload))
        }
        Command::Bicomplex(b) => bicomplex(cmd, b),
        Command::Model(m) => model(cmd, m),
        Command::Selftest {
            seed,
            profile,
            property,
            case_seed,
        } => {
            let profile: Profile = profile.parse()?;
            if let (Some(p), Some(s)) = (property, case_seed) {
                let outcome = selftest::run_case(p, *s)?;
                let status = if outcome.is_ok() { Status::Ok } else { Status::Negative };
                let payload = json!({ "property": p, "case_seed": s, "failure": outcome.err() });
                return Ok(Report::new(cmd, status, payload));
            }
            let report = selftest::run(*seed, profile);
            let status = if report.passed { Status::Ok } else { Status::Negative };
            Ok(Report::new(
                cmd,
                status,
                serde_json::to_value(&report).expect("serializes"),
            ))
        }
    }
}

fn load_dgla(path: &Path) -> Result<LoadedDgla> {
    io::parse_dgla(&io::read_file(path)?)
}

fn load_element(args: &ElementArgs) -> Result<(Arc<Dgla>, Arc<ArtinAlgebra>, DglaCochain)> {
    let l = load_dgla(&args.dgla)?.dgla;
    let fallback = args.algebra.as_deref().map(io::algebra_arg).transpose()?.map(Arc::new);
    let (a, x) = io::parse_cochain(&io::read_file(&args.element)?, &l, fallback.as_ref())?;
    Ok((l, a, x))
}

/// Load several cochains that must share one algebra.
fn load_cochains(l: &Dgla, algebra: &Option<String>, files: &[&Path]) -> Result<(Arc<ArtinAlgebra>, Vec<DglaCochain>)> {
    let mut a = algebra.as_deref().map(io::algebra_arg).transpose()?.map(Arc::new);
    let mut out = Vec::new();
    for f in files {
        let (b, x) = io::parse_cochain(&io::read_file(f)?, l, a.as_ref())?;
        if let Some(prev) = &a {
            if prev.as_ref() != b.as_ref() {
                return Err(Error::parse(
                    f.display().to_string(),
                    "element lives over a different algebra",
                ));
            }
        }
        a = Some(b);
        out.push(x);
    }
    Ok((a.expect("at least one file"), out))
}

fn cochain(l: &Dgla, a: &ArtinAlgebra, x: &DglaCochain) -> Value {
    let mut v = json!({ "degree": x.degree(), "text": x.render(l, a) });
    if let Ok(file) = CochainFile::from_cochain(l, a, x) {
        v["terms"] = serde_json::to_value(file.terms).expect("serializes");
    }
    v
}

fn tensor_class(l: &Dgla, c: &TensorClass) -> Value {
    let h = cohomology(&l.complex(), c.degree);
    let basis: Vec<String> = h.representatives().iter().map(|r| l.render(c.degree, r)).collect();
    let mut v = serde_json::to_value(c).expect("serializes");
    v["basis"] = json!(basis);
    v
}

fn kind(path: &Path) -> &'static str {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    for (suffix, k) in [
        (".bix.json", "bicomplex"),
        (".simp.json", "simplicial"),
        (".group.json", "group"),
        (".alg.json", "algebra"),
        (".ext.json", "extension"),
    ] {
        if name.ends_with(suffix) {
            return k;
        }
    }
    "dgla"
}

fn validate(cmd: &str, file: &Path) -> Result<Report> {
    let text = io::read_file(file)?;
    match kind(file) {
        "bicomplex" => bicomplex_validation(cmd, &io::parse_bicomplex(&text)?),
        "simplicial" => {
            let k = io::parse_simplicial(&text)?;
            let counts: Vec<usize> = (0..=k.dimension()).map(|q| k.count(q)).collect();
            Ok(Report::new(
                cmd,
                Status::Ok,
                json!({ "kind": "simplicial", "vertices": k.vertices(), "simplex_counts": counts }),
            ))
        }
        "group" => {
            let (rep, p_max) = io::parse_group(&text)?;
            let payload = json!({ "kind": "group", "order": rep.group().order(), "is_resolution": rep.is_resolution(), "p_max": p_max });
            Ok(Report::new(
                cmd,
                if rep.is_resolution() {
                    Status::Ok
                } else {
                    Status::Negative
                },
                payload,
            ))
        }
        "algebra" => {
            let a = io::parse_algebra(&text)?;
            Ok(Report::new(
                cmd,
                Status::Ok,
                json!({ "kind": "algebra", "dim": a.dim(), "basis": a.labels(), "nil_index": a.nil_index() }),
            ))
        }
        "extension" => {
            let ext = io::parse_extension(&text)?;
            let payload = json!({
                "kind": "extension",
                "total": ext.total().labels(),
                "quotient": ext.quotient().labels(),
                "ideal": ext.ideal_labels(),
            });
            Ok(Report::new(cmd, Status::Ok, payload))
        }
        _ => {
            let loaded = io::parse_dgla(&text)?;
            let l = &loaded.dgla;
            let report = validate_dgla(l);
            let axioms: BTreeMap<&str, bool> = [
                ("d-squared", Axiom::DSquared),
                ("skew-symmetry", Axiom::SkewSymmetry),
                ("jacobi", Axiom::Jacobi),
                ("leibniz", Axiom::Leibniz),
            ]
            .into_iter()
            .map(|(n, a)| (n, report.first(a).is_none()))
            .collect();
            let dims: BTreeMap<String, usize> = l
                .space()
                .degrees()
                .into_iter()
                .map(|p| (p.to_string(), l.dim(p)))
                .collect();
            let mut payload = json!({
                "kind": "dgla",
                "dims": dims,
                "axioms": axioms,
                "violations": report.violations.iter().take(8).collect::<Vec<_>>(),
            });
            if let (Some(action), true) = (&loaded.action, report.passes()) {
                let (inv, _) = invariant_subalgebra(l, action)?;
                let inv_dims: BTreeMap<String, usize> = l
                    .space()
                    .degrees()
                    .into_iter()
                    .map(|p| (p.to_string(), inv.dim(p)))
                    .collect();
                payload["action"] = json!({ "order": action.group().order(), "invariant_dims": inv_dims });
            }
            Ok(Report::new(
                cmd,
                if report.passes() { Status::Ok } else { Status::Negative },
                payload,
            ))
        }
    }
}

fn gauge(cmd: &str, g: &GaugeCommand) -> Result<Report> {
    match g {
        GaugeCommand::Act {
            dgla,
            algebra,
            gauge,
            element,
        } => {
            let l = load_dgla(dgla)?.dgla;
            let (a, xs) = load_cochains(&l, algebra, &[gauge, element])?;
            let y = gauge_act(&l, &a, &xs[0], &xs[1])?;
            let payload = json!({ "result": cochain(&l, &a, &y), "is_mc": is_mc(&l, &a, &y)? });
            Ok(Report::new(cmd, Status::Ok, payload))
        }
        GaugeCommand::Compose { dgla, algebra, gauge } => {
            let l = load_dgla(dgla)?.dgla;
            let (a, xs) = load_cochains(&l, algebra, &[&gauge[0], &gauge[1]])?;
            let c = gauge_compose(&l, &a, &xs[0], &xs[1])?;
            Ok(Report::new(cmd, Status::Ok, json!({ "result": cochain(&l, &a, &c) })))
        }
        GaugeCommand::Equiv {
            dgla,
            algebra,
            element,
            max_nodes,
        } => {
            let l = load_dgla(dgla)?.dgla;
            let (a, xs) = load_cochains(&l, algebra, &[&element[0], &element[1]])?;
            let x = McSolution::new(&l, &a, xs[0].clone())?;
            let y = McSolution::new(&l, &a, xs[1].clone())?;
            let mut search = GaugeSearch::default();
            if let Some(n) = max_nodes {
                search.max_nodes = *n;
            }
            Ok(match gauge_equivalent(&l, &a, &x, &y, &search)? {
                EquivalenceVerdict::Equivalent { witness } => Report::new(
                    cmd,
                    Status::Ok,
                    json!({ "witness": cochain(&l, &a, &witness.parameter) }),
                ),
                EquivalenceVerdict::NotEquivalent { stage, certificate } => Report::new(
                    cmd,
                    Status::NotEquivalent,
                    json!({ "stage": stage, "certificate": tensor_class(&l, &certificate) }),
                ),
                EquivalenceVerdict::Unknown { stage, explored } => {
                    Report::new(cmd, Status::Unknown, json!({ "stage": stage, "explored": explored }))
                }
            })
        }
    }
}

/// Generators of `total` go to the generators of `quotient` with the same
/// name, or to zero.
fn projection_by_name(total: Arc<ArtinAlgebra>, quotient: Arc<ArtinAlgebra>) -> Result<AlgebraMorphism> {
    let tg = total.generator_names().to_vec();
    let qg = quotient.generator_names().to_vec();
    let images = tg
        .iter()
        .map(|name| match qg.iter().position(|n| n == name) {
            Some(i) => match quotient.monomial_index(&Monomial::generator(qg.len(), i)) {
                Some(k) => quotient.basis_element(k),
                None => quotient.zero(),
            },
            None => quotient.zero(),
        })
        .collect::<Vec<AlgebraElement>>();
    AlgebraMorphism::from_generator_images(total, quotient, &images)
}

fn lift(cmd: &str, dgla: &Path, algebra: &str, element: &Path) -> Result<Report> {
    let l = load_dgla(dgla)?.dgla;
    let total = Arc::new(io::algebra_arg(algebra)?);
    let (quotient, x) = io::parse_cochain(&io::read_file(element)?, &l, None)?;
    let proj = projection_by_name(total.clone(), quotient)?;
    if !proj.is_surjective() {
        return Err(Error::parse(
            "--algebra",
            "the element's algebra is not a quotient of this algebra by generator names",
        ));
    }
    Ok(match lift_along(&l, &proj, &x)? {
        LiftAlong::Lifted(y) => Report::new(cmd, Status::Ok, json!({ "lift": cochain(&l, &total, &y) })),
        LiftAlong::Failed {
            stage,
            extension,
            report,
        } => Report::new(
            cmd,
            Status::Obstructed,
            json!({
                "stage": stage,
                "extension": { "total": extension.total().labels(), "quotient": extension.quotient().labels() },
                "class": tensor_class(&l, &report.class),
                "lifted_so_far": cochain(&l, extension.quotient(), &report.lift_attempt.map_algebra(&l, extension.quotient(), extension.projection().matrix())?),
            }),
        ),
    })
}

fn load_bicomplex(file: &Path) -> Result<AugmentedBicomplex> {
    io::parse_bicomplex(&io::read_file(file)?)
}

fn bicomplex_validation(cmd: &str, ab: &AugmentedBicomplex) -> Result<Report> {
    let report = validate_bicomplex(ab);
    let b = ab.body();
    let payload = json!({ "kind": "bicomplex", "P": b.p_max(), "Q": b.q_max(), "violations": report.violations });
    Ok(Report::new(
        cmd,
        if report.passes() { Status::Ok } else { Status::Negative },
        payload,
    ))
}

fn parse_coordinates(text: &str, flag: &str) -> Result<Vec<dgla_deform::Rational>> {
    io::parse_vector(text).map_err(|e| match e {
        Error::Parse { path, message } => Error::parse(format!("{flag}{path}"), message),
        other => other,
    })
}

fn bicomplex(cmd: &str, c: &BicomplexCommand) -> Result<Report> {
    match c {
        BicomplexCommand::Validate { file } => bicomplex_validation(cmd, &load_bicomplex(file)?),
        BicomplexCommand::Hypotheses { file } => {
            let ab = load_bicomplex(file)?;
            let hyp = check_hypotheses(&ab);
            let status = if hyp.valid_through.is_some() {
                Status::Ok
            } else {
                Status::Negative
            };
            Ok(Report::new(
                cmd,
                status,
                serde_json::to_value(&hyp).expect("serializes"),
            ))
        }
        BicomplexCommand::Transfer {
            file,
            from,
            degree,
            class,
            randomized,
        } => {
            let ab = load_bicomplex(file)?;
            let coords = parse_coordinates(class, "--class")?;
            let source = if *from == Edge::Bottom { ab.bottom() } else { ab.left() };
            let dim = cohomology(source, *degree as i32).dim();
            if coords.len() != dim {
                return Err(Error::parse(
                    "--class",
                    format!("expected {dim} coordinates in degree {degree}"),
                ));
            }
            let hyp = check_hypotheses(&ab);
            if !hyp.supports(*degree) {
                let payload = json!({ "reason": "hypotheses do not cover this degree", "hypotheses": hyp });
                return Ok(Report::new(cmd, Status::Negative, payload));
            }
            let direction = match from {
                Edge::Bottom => Direction::BottomToLeft,
                Edge::Left => Direction::LeftToBottom,
            };
            let mode = randomized.map_or(PreimageMode::Canonical, PreimageMode::Randomized);
            let input = CohomologyClass {
                degree: *degree as i32,
                coordinates: coords,
            };
            let (out, trace) = transfer_class(&ab, direction, &input, mode)?;
            Ok(Report::new(cmd, Status::Ok, json!({ "class": out, "trace": trace })))
        }
        BicomplexCommand::Obstruction { file, cocycle } => {
            let ab = load_bicomplex(file)?;
            let h = parse_coordinates(cocycle, "--cocycle")?;
            if h.len() != ab.bottom().dim(2) {
                return Err(Error::parse(
                    "--cocycle",
                    format!("expected {} coordinates", ab.bottom().dim(2)),
                ));
            }
            if !check_hypotheses(&ab).supports(2) {
                return Ok(Report::new(
                    cmd,
                    Status::Negative,
                    json!({ "reason": "hypotheses do not cover degree 2" }),
                ));
            }
            let ob = obstruction_transfer(&ab, &h, PreimageMode::Canonical)?;
            Ok(Report::new(
                cmd,
                Status::Ok,
                serde_json::to_value(&ob).expect("serializes"),
            ))
        }
        BicomplexCommand::Total { file, degree } => {
            let ab = load_bicomplex(file)?;
            let b = ab.body();
            let degrees: Vec<usize> = match degree {
                Some(n) => vec![*n],
                None => (0..=b.p_max() + b.q_max()).collect(),
            };
            let rows: Vec<Value> = degrees
                .into_iter()
                .map(|n| {
                    let t = total_cohomology(&ab, n);
                    json!({ "degree": n, "total": t.total, "left": t.left, "bottom": t.bottom })
                })
                .collect();
            let valid_through = check_hypotheses(&ab).valid_through;
            Ok(Report::new(
                cmd,
                Status::Ok,
                json!({ "valid_through": valid_through, "dimensions": rows }),
            ))
        }
    }
}

fn write_out(path: &Option<std::path::PathBuf>, ab: &AugmentedBicomplex) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, io::to_json(&BicomplexFile::from_bicomplex(ab)) + "\n")
            .map_err(|e| Error::parse(p.display().to_string(), e.to_string()))?;
    }
    Ok(())
}

fn model_summary(ab: &AugmentedBicomplex) -> Value {
    let hyp = check_hypotheses(ab);
    let b = ab.body();
    let dims: Vec<Value> = (0..=b.p_max().min(b.q_max()))
        .map(|n| {
            let t = total_cohomology(ab, n);
            json!({ "degree": n, "total": t.total, "left": t.left, "bottom": t.bottom })
        })
        .collect();
    json!({ "P": b.p_max(), "Q": b.q_max(), "hypotheses": hyp, "dimensions": dims, "bicomplex": BicomplexFile::from_bicomplex(ab) })
}

fn model(cmd: &str, m: &ModelCommand) -> Result<Report> {
    match m {
        ModelCommand::Catalog { name } => {
            let entries = models::catalog()?;
            let selected: Vec<_> = match name {
                Some(n) => {
                    let e = entries
                        .into_iter()
                        .find(|e| &e.name == n)
                        .ok_or_else(|| Error::parse("--name", format!("no catalog entry {n:?}")))?;
                    vec![e]
                }
                None => entries,
            };
            let listed: Vec<Value> = selected
                .iter()
                .map(|e| {
                    let mut v = json!({ "name": e.name, "expected": e.expected });
                    if name.is_some() {
                        v["file"] = match &e.object {
                            CatalogObject::Dgla(l) => serde_json::to_value(DglaFile::from_dgla(l, None)),
                            CatalogObject::WithAction(l, act) => {
                                serde_json::to_value(DglaFile::from_dgla(l, Some(act)))
                            }
                            CatalogObject::Bicomplex(b) => serde_json::to_value(BicomplexFile::from_bicomplex(b)),
                        }
                        .expect("serializes");
                    }
                    v
                })
                .collect();
            Ok(Report::new(cmd, Status::Ok, json!({ "entries": listed })))
        }
        ModelCommand::GroupCech { file, p_max, out } => {
            let (rep, file_p) = io::parse_group(&io::read_file(file)?)?;
            let (ab, hyp) = group_cech_model(&rep, p_max.unwrap_or(file_p))?;
            write_out(out, &ab)?;
            let status = if hyp.all_exact() { Status::Ok } else { Status::Negative };
            Ok(Report::new(cmd, status, model_summary(&ab)))
        }
        ModelCommand::Simplicial { file, out } => {
            let k = io::parse_simplicial(&io::read_file(file)?)?;
            let ab = models::cech_simplicial_model(&k)?;
            write_out(out, &ab)?;
            let status = if check_hypotheses(&ab).all_exact() {
                Status::Ok
            } else {
                Status::Negative
            };
            Ok(Report::new(cmd, status, model_summary(&ab)))
        }
    }
}
