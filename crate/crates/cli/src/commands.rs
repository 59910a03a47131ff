use std::path::Path;
use std::sync::Arc;

use incidence_core::colimits::{
    certify_coequalizer, certify_coproduct, certify_pushout, coequalizer, coproduct, pushout, ProsetMap,
};
use incidence_core::functor::{apply_functor, verify_hom, RingHom};
use incidence_core::json::{
    label_to_json, map_to_json, matrix_to_json, parse_entries, parse_map, parse_matrix, proset_to_json, ring_token,
    ProsetInput,
};
use incidence_core::limits::{check_inverse_system, reconstruct, ConsistentFamily};
use incidence_core::matrix::IncMatrix;
use incidence_core::proset::{FiniteProset, Label};
use incidence_core::ring::{GaloisField, RingKind, Zmod};
use incidence_core::units::{derived_series, enumerate_gl, inverse, invertibility_routes, solvability_report, DEFAULT_GL_BUDGET};
use incidence_core::{Error, Result};
use serde_json::{json, Value};

use crate::input::{finite_carrier, proset_arg, read_json, window_arg, WindowArg};
use crate::{Cli, ColimitCmd, Command, FunctorCmd, GlCmd, LimitsCmd, MatrixCmd, ProsetCmd};

/// Runs `$body` with `$ring` bound to the concrete ring named by `$token`.
macro_rules! with_ring {
    ($token:expr, |$ring:ident| $body:expr) => {{
        match RingKind::parse($token)? {
            RingKind::Integers => {
                let $ring = incidence_core::Zz::new();
                $body
            }
            RingKind::Rationals => {
                let $ring = incidence_core::Qq::new();
                $body
            }
            RingKind::Residues { modulus, field_token: true } => {
                let $ring = Zmod::<u64>::prime_field(modulus);
                $body
            }
            RingKind::Residues { modulus, .. } => {
                let $ring = Zmod::<u64>::new(modulus);
                $body
            }
            RingKind::PrimePower { order } => {
                let $ring = GaloisField::new(order)?;
                $body
            }
        }
    }};
}

pub fn run(cli: &Cli) -> Result<Value> {
    let g = &cli.global;
    match &cli.command {
        Command::Proset(ProsetCmd::Analyze { proset }) => {
            let input = proset_arg(proset)?;
            let closure_added = match &input {
                ProsetInput::Finite { closure_added, .. } => Some(*closure_added),
                ProsetInput::Rule { .. } => None,
            };
            let p = finite_carrier(input, g.window.as_deref(), g.depth)?;
            Ok(analyze(&p, closure_added))
        }
        Command::Matrix(cmd) => matrix(cmd, cli),
        Command::Functor(cmd) => functor(cmd, cli),
        Command::Colimit(cmd) => colimit(cmd),
        Command::Gl(cmd) => gl(cmd, cli),
        Command::Limits(cmd) => limits(cmd, cli),
    }
}

fn labels_json(p: &FiniteProset, idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| label_to_json(p.label(i))).collect())
}

fn analyze(p: &FiniteProset, closure_added: Option<usize>) -> Value {
    let n = p.len();
    let intervals: Vec<Value> = p
        .comparable_pairs()
        .into_iter()
        .filter(|&(a, b)| a != b)
        .map(|(a, b)| json!({ "from": label_to_json(p.label(a)), "to": label_to_json(p.label(b)), "members": labels_json(p, &p.interval(a, b)) }))
        .collect();
    let mut convexity = vec![];
    for a in 0..n {
        for b in a + 1..n {
            let closure = p.convex_closure(&[a, b]).ok().map(|c| labels_json(p, &c));
            convexity.push(json!({ "set": labels_json(p, &[a, b]), "convex": p.is_convex(&[a, b]), "closure": closure }));
        }
    }
    let groups = |sets: Vec<Vec<usize>>| Value::Array(sets.iter().map(|s| labels_json(p, s)).collect());
    let mut out = json!({
        "proset": proset_to_json(p),
        "size": n,
        "is_poset": p.is_poset(),
        "height": p.height(),
        "classes": groups(p.classes()),
        "components": groups(p.components()),
        "layer_order": labels_json(p, &p.layer_order()),
        "intervals": intervals,
        "convexity": convexity,
    });
    if let Some(c) = closure_added {
        out["closure_added"] = json!(c);
    }
    out
}

/// The ring token: `--ring` if given, else the document's own.
fn token_for<'a>(cli: &'a Cli, doc: &'a Value) -> Result<&'a str> {
    match &cli.global.ring {
        Some(t) => Ok(t),
        None => ring_token(doc),
    }
}

fn matrix(cmd: &MatrixCmd, cli: &Cli) -> Result<Value> {
    match cmd {
        MatrixCmd::Mul { a, b } => {
            let (da, db) = (read_json(a)?, read_json(b)?);
            with_ring!(token_for(cli, &da)?, |ring| {
                let x = parse_matrix(&da, ring.clone())?;
                let y = match db.get("proset") {
                    Some(_) => parse_matrix(&db, ring)?,
                    None => parse_entries(&db, x.proset().clone(), ring)?,
                };
                Ok(matrix_to_json(&x.mul(&y)?))
            })
        }
        MatrixCmd::Inv { a } => {
            let da = read_json(a)?;
            with_ring!(token_for(cli, &da)?, |ring| {
                let x = parse_matrix(&da, ring)?;
                let routes = invertibility_routes(&x)?;
                let inv = inverse(&x)?;
                Ok(json!({ "inverse": matrix_to_json(&inv), "routes": routes }))
            })
        }
        MatrixCmd::Project { a } => {
            let da = read_json(a)?;
            let w = match cli.global.window.as_deref().map(window_arg).transpose()? {
                Some(WindowArg::Labels(ls)) => ls,
                Some(WindowArg::Depth(_)) | None => return Err(Error::Parse("project needs --window with labels".into())),
            };
            with_ring!(token_for(cli, &da)?, |ring| {
                let x = parse_matrix(&da, ring)?;
                let window = x.proset().window_of(&w)?;
                Ok(matrix_to_json(&x.project(&window)?))
            })
        }
    }
}

fn require_seed(cli: &Cli, verb: &str) -> Result<u64> {
    cli.global.seed.ok_or_else(|| Error::Parse(format!("{verb} is randomized and needs --seed")))
}

fn functor(cmd: &FunctorCmd, cli: &Cli) -> Result<Value> {
    match cmd {
        FunctorCmd::Apply { map, matrix } => {
            let f = parse_map(&read_json(map)?)?;
            let dm = read_json(matrix)?;
            with_ring!(token_for(cli, &dm)?, |ring| {
                let a = parse_entries(&dm, f.target().clone(), ring)?;
                Ok(matrix_to_json(&apply_functor(&f, &a)?))
            })
        }
        FunctorCmd::Verify { map, naive, trials } => {
            let seed = require_seed(cli, "functor verify")?;
            let f = parse_map(&read_json(map)?)?;
            let token = cli.global.ring.as_deref().unwrap_or("F2");
            with_ring!(token, |ring| {
                let h = if *naive { RingHom::naive_pullback(&f, ring) } else { RingHom::functor(&f, ring)? };
                let report = verify_hom(&h, *trials, seed)?;
                Ok(json!({ "map": map_to_json(&f), "fcc": f.is_fcc(), "classification": f.classification(), "report": report }))
            })
        }
    }
}

fn finite_arg(spec: &str) -> Result<Arc<FiniteProset>> {
    proset_arg(spec)?.into_finite().map(Arc::new)
}

fn colimit(cmd: &ColimitCmd) -> Result<Value> {
    match cmd {
        ColimitCmd::Coproduct { prosets, certify } => {
            let parts: Vec<Arc<FiniteProset>> = prosets.iter().map(|s| finite_arg(s)).collect::<Result<_>>()?;
            let co = coproduct(&parts);
            let injections: Vec<Value> = co.injections.iter().map(map_to_json).collect();
            let mut out = json!({ "proset": proset_to_json(&co.proset), "injections": injections });
            if *certify > 0 {
                out["certificate"] = serde_json::to_value(certify_coproduct(&parts, &co, *certify)).expect("serializable");
            }
            Ok(out)
        }
        ColimitCmd::Pushout { f, g, certify } => {
            let (f, g) = (parse_map(&read_json(f)?)?, parse_map(&read_json(g)?)?);
            let g = rebase(&f, g)?;
            let po = pushout(&f, &g)?;
            let mut out = json!({ "proset": proset_to_json(&po.proset), "p1": map_to_json(&po.p1), "p2": map_to_json(&po.p2) });
            if *certify > 0 {
                out["certificate"] = serde_json::to_value(certify_pushout(&f, &g, &po, *certify)).expect("serializable");
            }
            Ok(out)
        }
        ColimitCmd::Coeq { f1, f2, certify } => {
            let (f1, f2) = (parse_map(&read_json(f1)?)?, parse_map(&read_json(f2)?)?);
            let f2 = rebase(&f1, f2)?;
            let ce = coequalizer(&f1, &f2)?;
            let mut out = json!({ "proset": proset_to_json(&ce.proset), "p": map_to_json(&ce.p) });
            if *certify > 0 {
                out["certificate"] = serde_json::to_value(certify_coequalizer(&f1, &f2, &ce, *certify)).expect("serializable");
            }
            Ok(out)
        }
    }
}

/// Maps read from separate files carry separate copies of their prosets;
/// re-point `g` at `f`'s source (and target, when equal).
fn rebase(f: &ProsetMap, g: ProsetMap) -> Result<ProsetMap> {
    let source = if **g.source() == **f.source() { f.source().clone() } else { g.source().clone() };
    let target = if **g.target() == **f.target() { f.target().clone() } else { g.target().clone() };
    ProsetMap::from_pairs(source, target, &g.pairs())
}

fn gl(cmd: &GlCmd, cli: &Cli) -> Result<Value> {
    let token = cli.global.ring.as_deref().ok_or_else(|| Error::Parse("gl needs --ring".into()))?;
    let budget = cli.global.budget.unwrap_or(DEFAULT_GL_BUDGET);
    let carrier = |spec: &str| -> Result<Arc<FiniteProset>> {
        finite_carrier(proset_arg(spec)?, cli.global.window.as_deref(), cli.global.depth).map(Arc::new)
    };
    match cmd {
        GlCmd::Solvability { proset } => {
            let p = carrier(proset)?;
            with_ring!(token, |ring| {
                let r = solvability_report(p.clone(), ring, budget)?;
                let verdict = if r.solvable { "solvable" } else { "not solvable" };
                Ok(json!({ "proset": proset_to_json(&p), "ring": token, "verdict": verdict, "report": r }))
            })
        }
        GlCmd::Enumerate { proset } => {
            let p = carrier(proset)?;
            with_ring!(token, |ring| {
                let group = enumerate_gl(p.clone(), ring, budget)?;
                let series = derived_series(&group)?;
                let gens: Vec<Value> = group.generators().iter().map(matrix_to_json).collect();
                Ok(json!({ "proset": proset_to_json(&p), "ring": token, "order": group.order(), "generators": gens, "derived_series": series }))
            })
        }
    }
}

fn limits(cmd: &LimitsCmd, cli: &Cli) -> Result<Value> {
    let LimitsCmd::Check { proset, family, samples } = cmd;
    if let Some(path) = family {
        return family_check(path, cli);
    }
    let seed = require_seed(cli, "limits check")?;
    let spec = proset.as_deref().expect("clap enforces --proset or --family");
    let depth = cli.global.depth.unwrap_or(3);
    let token = cli.global.ring.as_deref().unwrap_or("Z");
    let report = match proset_arg(spec)? {
        ProsetInput::Rule { proset: p, .. } => {
            let windows: Vec<Vec<Label>> = (0..=depth).map(|d| p.standard_window(d).members().to_vec()).collect();
            with_ring!(token, |ring| check_inverse_system(&p, &windows, &ring, *samples, seed))?
        }
        ProsetInput::Finite { proset: p, .. } => {
            let windows = vec![p.labels().to_vec()];
            with_ring!(token, |ring| check_inverse_system(&p, &windows, &ring, *samples, seed))?
        }
    };
    Ok(json!({ "ring": token, "depth": depth, "passed": report.passed(), "report": report }))
}

/// `{ "proset": ..., "ring": ..., "family": [{ "window": [...], "entries": [...] }] }`
fn family_check(path: &Path, cli: &Cli) -> Result<Value> {
    let doc = read_json(path)?;
    let p = match incidence_core::json::parse_proset(doc.get("proset").ok_or_else(|| Error::Parse("missing \"proset\"".into()))?)? {
        ProsetInput::Rule { proset, .. } => proset,
        ProsetInput::Finite { .. } => return Err(Error::Parse("family files use a rule proset".into())),
    };
    let items = doc
        .get("family")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"family\" array".into()))?;
    with_ring!(token_for(cli, &doc)?, |ring| {
        let mut parts = vec![];
        for it in items {
            let w: Vec<Label> = it
                .get("window")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("family item needs \"window\"".into()))?
                .iter()
                .map(incidence_core::json::label_from_json)
                .collect::<Result<_>>()?;
            let carrier = Arc::new(p.restrict(&p.window(&w)?)?);
            parts.push((w, parse_entries(it, carrier, ring.clone())?));
        }
        let fam = ConsistentFamily::new(&p, parts)?;
        let limit: IncMatrix<_> = reconstruct(&fam)?;
        Ok(json!({ "compatible": true, "windows": fam.windows(), "reconstructed": matrix_to_json(&limit) }))
    })
}
