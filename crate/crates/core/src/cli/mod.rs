//! The `tensorcat` command line.
//!
//! Exit codes: 0 success or a positive answer, 1 a negative mathematical answer,
//! 2 input that fails validation or a procedure that does not converge, 3 structural or IO errors.

mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{algebra_dim, canonical_algebra, is_commutative, is_connected, verify_qsystem, AlgebraObject};
use crate::braided::{
    find_centralizing_object, gamma_characters, is_nondegenerate, is_nondegenerate_on, muger_centralizer, restriction_hom,
    s_matrix, twists, verify_hypergroup_hom,
};
use crate::category::{catalog, catalog_names, kappa_of, load_algebra_file, load_category, load_module_file, CategoryData};
use crate::center::{build_tube_algebra, decompose_center, lagrangian_algebra, theorem_c_report};
use crate::diagram::{categorical_trace, env_key, evaluate_str, vertex, vertex_env, Env};
use crate::error::{structural, Error, Result};
use crate::fusion_ring::validate_fusion_ring;
use crate::local_modules::{
    condensation_report, enumerate_local_modules_with, is_local, verify_module, ModuleObject, DEDUP_TOL,
};
use render::{complex, complex_list, matrix, tidy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "tensorcat", version, about = "Computations with braided unitary fusion categories")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Category file.
    #[arg(long, global = true, conflicts_with = "catalog")]
    input: Option<PathBuf>,
    /// Built-in category name.
    #[arg(long, global = true)]
    catalog: Option<String>,
    /// Algebra file, `canonical:LABEL`, or `lagrangian`.
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Module file.
    #[arg(long, global = true)]
    module: Option<PathBuf>,
    /// Comma-separated labels of a fusion subcategory.
    #[arg(long, global = true)]
    sub: Option<String>,
    #[arg(long, global = true, env = "TENSORCAT_TOL")]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Skip coherence validation of the input category.
    #[arg(long, global = true)]
    no_validate: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Fusion ring and coherence checks.
    Validate,
    /// Frobenius-Perron dimensions.
    Dims,
    /// Twists, S and T.
    Smatrix,
    /// Character table γ_a(b).
    Chars,
    /// Müger centralizer of `--sub` and the restriction map.
    Centralizer,
    /// An object outside `--sub` centralizing it.
    FindCentral,
    /// Q-system axioms of `--algebra`.
    QsystemCheck,
    /// Commutativity of `--algebra`.
    Commutative,
    /// Simple local modules over `--algebra`, or a check of `--module`.
    LocalModules,
    /// Local modules with the dimension identity.
    Condense,
    /// Drinfeld center via the tube algebra.
    Center {
        /// Print a partial category file for Z(C) instead of the summary.
        #[arg(long)]
        emit_category: bool,
    },
    /// Evaluate a string diagram.
    Eval { expr: String },
    /// Self-braidings of a pointed category.
    Kappa,
    /// List built-in categories.
    Catalog,
}

/// Resolved invocation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub input: Option<PathBuf>,
    pub catalog: Option<String>,
    pub algebra: Option<String>,
    pub module: Option<PathBuf>,
    pub sub: Option<String>,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub seed: u64,
    pub validate: bool,
}

impl CliConfig {
    fn from_args(a: &Args) -> Result<Self> {
        if let Some(t) = a.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(structural(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(CliConfig {
            input: a.input.clone(),
            catalog: a.catalog.clone(),
            algebra: a.algebra.clone(),
            module: a.module.clone(),
            sub: a.sub.clone(),
            tolerance: a.tol,
            format: a.format,
            seed: a.seed,
            validate: !a.no_validate,
        })
    }

    fn load_raw(&self) -> Result<CategoryData> {
        let cd = match (&self.input, &self.catalog) {
            (Some(p), _) => load_category(p, false)?,
            (None, Some(name)) => catalog(name)?,
            (None, None) => return Err(structural("one of --input or --catalog is required")),
        };
        Ok(match self.tolerance {
            Some(t) => cd.with_tolerance(t),
            None => cd,
        })
    }

    fn load(&self) -> Result<CategoryData> {
        let cd = self.load_raw()?;
        if self.validate && !cd.partial {
            let bad = validate_fusion_ring(&cd.ring);
            if let Some(v) = bad.first() {
                return Err(Error::Validation(format!("fusion ring: {v:?}")));
            }
            return cd.validated();
        }
        Ok(cd)
    }

    fn load_full(&self) -> Result<CategoryData> {
        let cd = self.load()?;
        if cd.partial {
            return Err(structural("this command needs F-symbols; the input is a partial category"));
        }
        Ok(cd)
    }

    fn sub(&self, cd: &CategoryData) -> Result<Vec<usize>> {
        let s = self.sub.as_deref().ok_or_else(|| structural("--sub is required"))?;
        cd.parse_labels(s)
    }

    /// The algebra, together with the category it lives in (`lagrangian` replaces `cd` by `Z(cd)`).
    fn algebra(&self, cd: CategoryData) -> Result<(CategoryData, AlgebraObject, String)> {
        let spec = self.algebra.as_deref().ok_or_else(|| structural("--algebra is required"))?;
        if spec == "lagrangian" {
            let tube = build_tube_algebra(&cd)?;
            let center = decompose_center(&cd, &tube, self.seed)?;
            let (pres, alg) = lagrangian_algebra(&center)?;
            let pres = pres.with_tolerance(cd.tolerance);
            let desc = center.presentation.map(|p| p.description).unwrap_or_default();
            return Ok((pres, alg, format!("lagrangian in {desc}")));
        }
        if let Some(label) = spec.strip_prefix("canonical:") {
            let x = cd
                .ring
                .label_index(label)
                .ok_or_else(|| structural(format!("unknown label `{label}`")))?;
            let alg = canonical_algebra(&cd, x)?;
            return Ok((cd, alg, spec.to_string()));
        }
        let file = load_algebra_file(spec)?;
        let alg = AlgebraObject::from_file(&cd, &file)?;
        Ok((cd, alg, spec.to_string()))
    }
}

fn labels(cd: &CategoryData, xs: &[usize]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::from(cd.label(x))).collect())
}

fn all_labels(cd: &CategoryData) -> Value {
    json!(cd.ring.labels())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) | Error::MissingBraiding => 1,
        Error::Validation(_) | Error::NonConvergence(_) => 2,
        _ => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Structural(_) => "structural",
        Error::Validation(_) => "validation",
        Error::Parse { .. } => "parse",
        Error::Type { .. } => "type",
        Error::MissingBraiding => "missing_braiding",
        Error::Multiplicity(_) => "multiplicity",
        Error::Precondition(_) => "precondition",
        Error::NonConvergence(_) => "non_convergence",
        Error::Overflow(_) => "overflow",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn module_json(cd: &CategoryData, m: &ModuleObject) -> Value {
    json!({
        "support": labels(cd, &m.support()),
        "multiplicities": m.mult,
        "dim": m.dim(cd),
    })
}

fn algebra_env(cd: &CategoryData, alg: &AlgebraObject, env: &mut Env) -> Result<()> {
    for (&(a, b, c), &z) in &alg.mu {
        env.insert(env_key(&cd.ring, "m", &[a, b, c]), vertex(&cd.ring, a, b, c)?.dagger().scale(z));
    }
    Ok(())
}

fn module_env(cd: &CategoryData, m: &ModuleObject, env: &mut Env) -> Result<()> {
    if !m.is_multiplicity_free() {
        return Err(Error::Multiplicity("eval binds module actions only for multiplicity-free modules".into()));
    }
    for (&(x, a, y), blk) in &m.rho {
        env.insert(env_key(&cd.ring, "rho", &[x, a, y]), vertex(&cd.ring, x, a, y)?.dagger().scale(blk[(0, 0)]));
    }
    Ok(())
}

type Outcome = (Value, i32);

fn validate(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load_raw()?;
    let ring: Vec<Value> = validate_fusion_ring(&cd.ring).iter().map(|v| json!(v)).collect();
    let coherence: Vec<Value> = if cd.partial || !ring.is_empty() {
        Vec::new()
    } else {
        cd.validate().iter().map(|v| json!(v)).collect()
    };
    let valid = ring.is_empty() && coherence.is_empty();
    let v = json!({
        "rank": cd.rank(),
        "labels": all_labels(&cd),
        "braided": cd.is_braided(),
        "partial": cd.partial,
        "ring_violations": ring,
        "coherence_violations": coherence,
        "valid": valid,
    });
    Ok((v, if valid { 0 } else { 2 }))
}

fn dims(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load()?;
    let v = json!({
        "labels": all_labels(&cd),
        "dims": cd.dims.dims,
        "global_dim": cd.global_dim(),
    });
    Ok((v, 0))
}

fn smatrix(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let s = s_matrix(&cd)?;
    let th = twists(&cd)?.theta;
    let v = json!({
        "labels": all_labels(&cd),
        "twists": complex_list(&th),
        "s_unnormalized": matrix(&s.s),
        "s": matrix(&s.normalized(cd.global_dim())),
        "nondegenerate": is_nondegenerate(&cd)?,
    });
    Ok((v, 0))
}

fn chars(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let g = gamma_characters(&cd)?;
    let law = g.character_law_residual(&cd.ring);
    let prod = g.product_expansion_residual(&cd);
    let pass = law <= cd.tolerance && prod <= cd.tolerance;
    let v = json!({
        "labels": all_labels(&cd),
        "gamma": matrix(&g.gamma),
        "character_law_residual": law,
        "product_expansion_residual": prod,
        "pass": pass,
    });
    Ok((v, if pass { 0 } else { 1 }))
}

fn centralizer(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let sub = cfg.sub(&cd)?;
    let cent = muger_centralizer(&cd, &sub)?;
    let res = restriction_hom(&cd, &sub)?;
    let viol: Vec<Value> = verify_hypergroup_hom(&cd, &res)
        .iter()
        .map(|h| json!({ "a": cd.label(h.a), "b": cd.label(h.b), "y": cd.label(h.y), "residual": h.residual }))
        .collect();
    let map: serde_json::Map<String, Value> = res
        .f
        .iter()
        .enumerate()
        .map(|(b, &y)| (cd.label(b).to_string(), Value::from(cd.label(y))))
        .collect();
    let v = json!({
        "sub": labels(&cd, &sub),
        "centralizer": labels(&cd, &cent),
        "nondegenerate_on_sub": is_nondegenerate_on(&cd, &sub)?,
        "restriction": map,
        "hom_violations": viol,
    });
    Ok((v, 0))
}

fn find_central(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let sub = cfg.sub(&cd)?;
    let found = find_centralizing_object(&cd, &sub)?;
    let v = json!({
        "sub": labels(&cd, &sub),
        "object": found.map(|x| cd.label(x).to_string()),
    });
    Ok((v, if found.is_some() { 0 } else { 1 }))
}

fn qsystem_check(cfg: &CliConfig) -> Result<Outcome> {
    let (cd, alg, name) = cfg.algebra(cfg.load_full()?)?;
    let rep = verify_qsystem(&cd, &alg)?;
    let v = json!({
        "algebra": name,
        "support": labels(&cd, &alg.support),
        "algebra_dim": algebra_dim(&cd, &alg),
        "connected": is_connected(&alg),
        "axioms": rep,
        "pass": rep.pass(),
    });
    Ok((v, if rep.pass() { 0 } else { 1 }))
}

fn commutative(cfg: &CliConfig) -> Result<Outcome> {
    let (cd, alg, name) = cfg.algebra(cfg.load_full()?)?;
    let (comm, residual) = is_commutative(&cd, &alg)?;
    let v = json!({
        "algebra": name,
        "support": labels(&cd, &alg.support),
        "commutative": comm,
        "residual": residual,
    });
    Ok((v, if comm { 0 } else { 1 }))
}

fn local_modules(cfg: &CliConfig, report: bool) -> Result<Outcome> {
    let (cd, alg, name) = cfg.algebra(cfg.load_full()?)?;
    if let (Some(path), false) = (&cfg.module, report) {
        let m = ModuleObject::from_file(&cd, &alg, &load_module_file(path)?)?;
        let rep = verify_module(&cd, &alg, &m)?;
        let (local, residual) = is_local(&cd, &alg, &m)?;
        let ok = rep.pass() && local;
        let v = json!({
            "algebra": name,
            "module": module_json(&cd, &m),
            "axioms": rep,
            "is_module": rep.pass(),
            "local": local,
            "locality_residual": residual,
        });
        return Ok((v, if ok { 0 } else { 1 }));
    }
    let data = enumerate_local_modules_with(&cd, &alg, cfg.seed, DEDUP_TOL)?;
    let simples: Vec<Value> = data.simples.iter().map(|m| module_json(&cd, m)).collect();
    let fusion = data.ring.as_ref().map(|r| {
        r.triples()
            .into_iter()
            .map(|(a, b, c, n)| json!([a, b, c, n]))
            .collect::<Vec<_>>()
    });
    let mut v = json!({
        "algebra": name,
        "algebra_support": labels(&cd, &alg.support),
        "simples": simples,
        "dims_over_algebra": data.dims_over_q,
        "fusion": fusion,
    });
    if !report {
        return Ok((v, 0));
    }
    let rep = condensation_report(&cd, &alg, &data);
    v["nondegenerate"] = json!(is_nondegenerate(&cd)?);
    v["report"] = json!(rep);
    Ok((v, if rep.pass { 0 } else { 1 }))
}

fn center(cfg: &CliConfig, emit: bool) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let tube = build_tube_algebra(&cd)?;
    let z = decompose_center(&cd, &tube, cfg.seed)?;
    if emit {
        return Ok((serde_json::to_value(z.to_partial_file()?)?, 0));
    }
    let rep = theorem_c_report(&cd, &z)?;
    let underlying: Vec<Value> = z
        .simples
        .iter()
        .map(|s| {
            let parts: serde_json::Map<String, Value> = s
                .underlying
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(x, &m)| (cd.label(x).to_string(), Value::from(m)))
                .collect();
            Value::Object(parts)
        })
        .collect();
    let v = json!({
        "rank": z.rank(),
        "labels": z.labels,
        "underlying": underlying,
        "dims": z.dims(),
        "global_dim": z.global_dim(),
        "twists": complex_list(&z.twists()),
        "s": matrix(&z.normalized_s()),
        "t": matrix(&z.t),
        "tube_dim": tube.dim(),
        "presentation": z.presentation.as_ref().map(|p| p.description.clone()),
        "theorem_c": rep,
    });
    Ok((v, if rep.pass { 0 } else { 1 }))
}

fn eval(cfg: &CliConfig, expr: &str) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let mut env = vertex_env(&cd.ring);
    let (cd, alg) = match &cfg.algebra {
        Some(_) => {
            let (cd, alg, _) = cfg.algebra(cd)?;
            algebra_env(&cd, &alg, &mut env)?;
            (cd, Some(alg))
        }
        None => (cd, None),
    };
    if let Some(path) = &cfg.module {
        let alg = alg.clone().unwrap_or_else(AlgebraObject::trivial);
        let m = ModuleObject::from_file(&cd, &alg, &load_module_file(path)?)?;
        module_env(&cd, &m, &mut env)?;
    }
    let mv = evaluate_str(expr, &cd, &env)?;
    let blocks: serde_json::Map<String, Value> = mv
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| !b.is_empty())
        .map(|(c, b)| (cd.label(c).to_string(), matrix(b)))
        .collect();
    let trace = (mv.source == mv.target).then(|| categorical_trace(&mv, &cd)).transpose()?;
    let v = json!({
        "expr": expr,
        "source": labels(&cd, &mv.source),
        "target": labels(&cd, &mv.target),
        "blocks": blocks,
        "scalar": mv.scalar().map(complex),
        "trace": trace.map(complex),
    });
    Ok((v, 0))
}

fn kappa(cfg: &CliConfig) -> Result<Outcome> {
    let cd = cfg.load_full()?;
    let r = cd.rank();
    let k = (0..r).map(|g| kappa_of(&cd, g)).collect::<Result<Vec<_>>>()?;
    let rs = cd.braiding()?;
    let mut worst = 0.0f64;
    for g in 0..r {
        for h in 0..r {
            let gh = cd.fuse(g, h)[0];
            let b = rs.get(g, h, gh).expect("channel") * rs.get(h, g, gh).expect("channel");
            worst = worst.max((k[g] * k[h] * b - k[gh]).norm());
        }
    }
    let pass = worst <= cd.tolerance;
    let v = json!({
        "labels": all_labels(&cd),
        "kappa": complex_list(&k),
        "bicharacter_residual": worst,
        "pass": pass,
    });
    Ok((v, if pass { 0 } else { 1 }))
}

fn list_catalog() -> Outcome {
    let entries: Vec<Value> = catalog_names()
        .map(|e| {
            let cd = e.build();
            json!({ "name": e.name, "description": e.description, "rank": cd.rank(), "braided": cd.is_braided() })
        })
        .collect();
    (json!({ "categories": entries }), 0)
}

fn dispatch(cfg: &CliConfig, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate => validate(cfg),
        Command::Dims => dims(cfg),
        Command::Smatrix => smatrix(cfg),
        Command::Chars => chars(cfg),
        Command::Centralizer => centralizer(cfg),
        Command::FindCentral => find_central(cfg),
        Command::QsystemCheck => qsystem_check(cfg),
        Command::Commutative => commutative(cfg),
        Command::LocalModules => local_modules(cfg, false),
        Command::Condense => local_modules(cfg, true),
        Command::Center { emit_category } => center(cfg, *emit_category),
        Command::Eval { expr } => eval(cfg, expr),
        Command::Kappa => kappa(cfg),
        Command::Catalog => Ok(list_catalog()),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate => "validate",
        Command::Dims => "dims",
        Command::Smatrix => "smatrix",
        Command::Chars => "chars",
        Command::Centralizer => "centralizer",
        Command::FindCentral => "find-central",
        Command::QsystemCheck => "qsystem-check",
        Command::Commutative => "commutative",
        Command::LocalModules => "local-modules",
        Command::Condense => "condense",
        Command::Center { .. } => "center",
        Command::Eval { .. } => "eval",
        Command::Kappa => "kappa",
        Command::Catalog => "catalog",
    }
}

fn effective_tolerance(cfg: &CliConfig) -> f64 {
    cfg.tolerance
        .or_else(|| cfg.load_raw().ok().map(|cd| cd.tolerance))
        .unwrap_or(crate::category::DEFAULT_TOLERANCE)
}

/// Runs one invocation, writing the report to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let cfg = match CliConfig::from_args(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 3;
        }
    };
    let (mut value, code) = match dispatch(&cfg, &args.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            (json!({ "error": e.to_string(), "kind": error_kind(&e) }), exit_code(&e))
        }
    };
    if let (Value::Object(o), false) = (&mut value, matches!(args.command, Command::Center { emit_category: true })) {
        o.insert("command".into(), Value::from(command_name(&args.command)));
        if !matches!(args.command, Command::Catalog) {
            o.insert("tolerance".into(), Value::from(effective_tolerance(&cfg)));
        }
    }
    tidy(&mut value);
    let written = match cfg.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json")),
        Format::Text => writeln!(out, "{}", render::text(&value)),
    };
    if written.is_err() {
        return 3;
    }
    code
}

#[cfg(test)]
mod tests;
