use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use maxtorus::complex::SimplicialComplex;
use maxtorus::cone::{cone_is_regular, cone_is_simplicial, cone_is_strictly_convex};
use maxtorus::divisor::divisor_hypotheses;
use maxtorus::error::{NormalityError, QuotientError, TkError};
use maxtorus::fan::{fan_is_complete, fan_validate, Fan};
use maxtorus::foliation::canonical_foliation;
use maxtorus::instances::{canonical_json, instance_files, INSTANCE_NAMES};
use maxtorus::lift::cox_batyrev_lift;
use maxtorus::normality::{
    certificate_json, check_certificate, cone_key, decide_normal, decide_weakly_normal, fan_vertices,
    parse_certificate, NormalityMode,
};
use maxtorus::quotient::{project_fan, quotient_map, validate_construction_i, validate_construction_ii};
use maxtorus::rational::{format_rational, Rational};
use maxtorus::sampling::{random_float_point, seeded_rng, DEFAULT_SEED};
use maxtorus::subspace::SubspaceData;
use maxtorus::tkform::{cocycle_check, fd_relative_error, kernel_check, TkContext, TkTolerances, HESSIAN_FD_FACTOR};

/// Exit status: 0 when the property holds, 1 when it decidably fails.
struct Outcome {
    holds: bool,
    report: Value,
    text: String,
}

impl Outcome {
    fn new(holds: bool, report: Value, text: impl Into<String>) -> Self {
        Self { holds, report, text: text.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Parser, Debug)]
#[command(name = "maxtorus", version, about = "Maximal torus actions on non-Kähler quotients of toric varieties")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Run independent per-cone and per-point checks in parallel.
    #[arg(long, global = true)]
    parallel: bool,
    /// Sampling seed; overrides MAXTORUS_SEED.
    #[arg(long, global = true)]
    seed: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the fan axioms and completeness.
    ValidateFan { fan: PathBuf },
    /// Check the hypotheses of a quotient construction.
    Validate {
        #[arg(value_enum)]
        construction: ConstructionArg,
        /// Fan (II) or simplicial complex (I).
        input: PathBuf,
        subspace: PathBuf,
    },
    /// Decide normality, or weak normality with --weak.
    Normality {
        fan: PathBuf,
        #[arg(long)]
        weak: bool,
    },
    /// Vertices determined by support numbers.
    Vertices { fan: PathBuf, certificate: PathBuf },
    /// Present a second-construction quotient through the first.
    Lift { fan: PathBuf, subspace: PathBuf },
    /// The canonical foliation.
    Foliation {
        subspace: PathBuf,
        #[arg(long)]
        fan: Option<PathBuf>,
    },
    /// Hypotheses of the divisor statements.
    DivisorHypotheses { complex: PathBuf, subspace: PathBuf },
    /// Numerical checks of the transverse-Kähler form.
    TkCheck {
        fan: PathBuf,
        subspace: PathBuf,
        certificate: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Smoothness order used to scale the characters.
        #[arg(long, default_value_t = 2)]
        smoothness: u32,
        #[arg(long)]
        kernel_tol: Option<f64>,
        #[arg(long)]
        angle_tol: Option<f64>,
        #[arg(long)]
        cocycle_tol: Option<f64>,
        #[arg(long)]
        fd_tol: Option<f64>,
    },
    /// Write a bundled instance.
    Example {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| anyhow!("invalid seed {s:?}"))
}

fn resolve_seed(flag: Option<&str>) -> Result<u64> {
    match flag {
        Some(s) => parse_seed(s),
        None => match std::env::var("MAXTORUS_SEED") {
            Ok(s) => parse_seed(&s).context("MAXTORUS_SEED"),
            Err(_) => Ok(DEFAULT_SEED),
        },
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid input", path.display()))
}

fn rationals(v: &[Rational]) -> Value {
    v.iter().map(format_rational).collect::<Vec<_>>().into()
}

fn one_based(cone: &[usize]) -> Vec<usize> {
    cone.iter().map(|i| i + 1).collect()
}

fn validate_fan(path: &Path, seed: u64, parallel: bool) -> Result<Outcome> {
    let fan: Fan = read_json(path)?;
    let g = fan.geometry();
    let per_cone = |c: usize| {
        let gens = g.cone_generators(c);
        let ints: Vec<_> = fan.max_cones()[c].iter().map(|&i| fan.rays()[i].clone()).collect();
        json!({
            "cone": one_based(&fan.max_cones()[c]),
            "dim": g.cone_dim(c),
            "strictly_convex": cone_is_strictly_convex(&gens, g.dim),
            "simplicial": cone_is_simplicial(&gens, g.dim),
            "regular": cone_is_regular(&ints, g.dim),
        })
    };
    let cones: Vec<Value> = if parallel {
        (0..fan.max_cones().len()).into_par_iter().map(per_cone).collect()
    } else {
        (0..fan.max_cones().len()).map(per_cone).collect()
    };
    let validity = fan_validate(g);
    let valid = validity.is_valid();
    let complete = if valid && fan.is_simplicial() { fan_is_complete(g, seed).ok() } else { None };
    let report = json!({
        "valid": valid,
        "dim": fan.dim(),
        "rays": fan.rays().len(),
        "simplicial": fan.is_simplicial(),
        "regular": fan.is_regular(),
        "complete": complete,
        "non_convex_cones": validity.non_convex_cones.iter().map(|c| c + 1).collect::<Vec<_>>(),
        "violating_pairs": validity.violating_pairs.iter().map(|(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
        "warnings": fan.warnings(),
        "cones": cones,
    });
    let complete_text = match complete {
        Some(true) => "complete",
        Some(false) => "not complete",
        None => "completeness undetermined",
    };
    let text = if valid {
        format!("valid fan in dimension {} with {} maximal cones, {complete_text}", fan.dim(), fan.max_cones().len())
    } else {
        format!(
            "not a fan: {} non-convex cones, {} incompatible pairs",
            validity.non_convex_cones.len(),
            validity.violating_pairs.len()
        )
    };
    Ok(Outcome::new(valid, report, text))
}

fn validate(construction: ConstructionArg, input: &Path, subspace: &Path, seed: u64) -> Result<Outcome> {
    let h: SubspaceData = read_json(subspace)?;
    let report = match construction {
        ConstructionArg::II => {
            let fan: Fan = read_json(input)?;
            validate_construction_ii(&fan, &h, seed)?
        }
        ConstructionArg::I => {
            let k: SimplicialComplex = read_json(input)?;
            validate_construction_i(&k, &h, seed)?
        }
    };
    let text = match &report.descriptor {
        Some(d) => format!(
            "valid: dim_C M = {}, dim T = {}, max stabilizer dim = {}, foliation dim = {}",
            d.dim_c_m, d.dim_t, d.max_stabilizer_dim, d.foliation_dim
        ),
        None => format!("invalid: {}", report.failed_codes().join(", ")),
    };
    Ok(Outcome::new(report.is_valid(), serde_json::to_value(&report)?, text))
}

fn normality(path: &Path, weak: bool, seed: u64) -> Result<Outcome> {
    let fan: Fan = read_json(path)?;
    let (mode, found) = if weak {
        ("weakly_normal", decide_weakly_normal(fan.geometry(), seed)?)
    } else {
        ("normal", decide_normal(fan.geometry(), seed)?)
    };
    let word = if weak { "weakly normal" } else { "normal" };
    Ok(match found {
        Some(cert) => Outcome::new(
            true,
            json!({ "mode": mode, "holds": true, "certificate": certificate_json(fan.geometry(), &cert) }),
            format!("{word}; b = ({})", cert.b.iter().map(format_rational).collect::<Vec<_>>().join(", ")),
        ),
        None => Outcome::new(false, json!({ "mode": mode, "holds": false }), format!("not {word}")),
    })
}

fn vertices(path: &Path, cert: &Path, seed: u64) -> Result<Outcome> {
    let fan: Fan = read_json(path)?;
    let g = fan.geometry();
    let text = std::fs::read_to_string(cert).with_context(|| format!("cannot read {}", cert.display()))?;
    let b = parse_certificate(g, &text).map_err(|e| anyhow!("{}: {e}", cert.display()))?;
    if b.len() != fan.rays().len() {
        bail!("{}: expected {} support numbers, found {}", cert.display(), fan.rays().len(), b.len());
    }
    let verts = fan_vertices(g, &b)?;
    let mut map = serde_json::Map::new();
    for (c, u) in g.max_cones.iter().zip(&verts) {
        map.insert(cone_key(c), rationals(u));
    }
    let mut report = json!({ "b": rationals(&b), "vertices": map });
    let mut holds = true;
    if fan_is_complete(g, seed).unwrap_or(false) {
        for (key, mode) in [("normal", NormalityMode::Normal), ("weakly_normal", NormalityMode::WeaklyNormal)] {
            let check = check_certificate(g, &b, mode, seed)?;
            report[key] = json!({ "holds": check.holds, "violations": check.violations });
            if mode == NormalityMode::WeaklyNormal {
                holds = check.holds;
            }
        }
    }
    let mut distinct: Vec<String> =
        verts.iter().map(|u| format!("({})", u.iter().map(format_rational).collect::<Vec<_>>().join(", "))).collect();
    distinct.sort();
    distinct.dedup();
    Ok(Outcome::new(holds, report, format!("vertices: {}", distinct.join(", "))))
}

fn lift(fan: &Path, subspace: &Path, seed: u64) -> Result<Outcome> {
    let fan: Fan = read_json(fan)?;
    let h: SubspaceData = read_json(subspace)?;
    let report = validate_construction_ii(&fan, &h, seed)?;
    if !report.is_valid() {
        let text = format!("input rejected: {}", report.failed_codes().join(", "));
        return Ok(Outcome::new(false, json!({ "rejected": report }), text));
    }
    let l = cox_batyrev_lift(&fan, &h, seed)?;
    let text = format!(
        "K on {} vertices ({} ghosts), dim h'' = {}, component group {:?}",
        l.complex.vertex_count(),
        l.ghost_count,
        l.subspace.dim(),
        l.component_group.iter().map(|d| d.to_string()).collect::<Vec<_>>()
    );
    Ok(Outcome::new(true, serde_json::to_value(&l)?, text))
}

fn foliation(subspace: &Path, fan: Option<&Path>) -> Result<Outcome> {
    let h: SubspaceData = read_json(subspace)?;
    let h = h.exact()?;
    let fan: Option<Fan> = fan.map(read_json).transpose()?;
    if let Some(f) = &fan {
        if f.dim() != h.ambient_dim() {
            bail!("fan has dimension {}, subspace lives in C^{}", f.dim(), h.ambient_dim());
        }
    }
    let data = canonical_foliation(&h, fan.as_ref());
    let holds = data.consistent_with_fan != Some(false);
    let text = format!("leaf dimension {}, dim(h ∩ h̄) = {}", data.leaf_dim, data.h_cap_hbar_dim);
    Ok(Outcome::new(holds, serde_json::to_value(&data)?, text))
}

fn divisor(complex: &Path, subspace: &Path) -> Result<Outcome> {
    let k: SimplicialComplex = read_json(complex)?;
    let h: SubspaceData = read_json(subspace)?;
    let d = divisor_hypotheses(&k, &h)?;
    let text = format!("simply connected: {}, generic annihilator: {}", d.simply_connected, d.generic_annihilator);
    Ok(Outcome::new(d.simply_connected && d.generic_annihilator, serde_json::to_value(&d)?, text))
}

struct TkArgs<'a> {
    fan: &'a Path,
    subspace: &'a Path,
    certificate: Option<&'a Path>,
    points: usize,
    smoothness: u32,
    tol: TkTolerances,
}

fn tk_check(args: TkArgs, seed: u64, parallel: bool) -> Result<Outcome> {
    let fan: Fan = read_json(args.fan)?;
    let h: SubspaceData = read_json(args.subspace)?;
    let h = h.exact()?;
    if h.ambient_dim() != fan.dim() {
        bail!("fan has dimension {}, subspace lives in C^{}", fan.dim(), h.ambient_dim());
    }
    let b = match args.certificate {
        Some(path) => {
            let projected = project_fan(fan.geometry(), &quotient_map(&SubspaceData::Exact(h.clone()))?);
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let b = parse_certificate(&projected, &text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            if b.len() != fan.rays().len() {
                bail!("{}: expected {} support numbers, found {}", path.display(), fan.rays().len(), b.len());
            }
            Some(b)
        }
        None => None,
    };
    let ctx = match TkContext::new(&fan, &h, b, args.smoothness, seed) {
        Ok(ctx) => ctx,
        Err(TkError::NotWeaklyNormal) => {
            let text = "the projected fan is not weakly normal";
            return Ok(Outcome::new(false, json!({ "passes": false, "obstruction": text }), text));
        }
        Err(TkError::Quotient(QuotientError::Rejected(msg))) => {
            let text = format!("condition (b) fails: {msg}");
            return Ok(Outcome::new(false, json!({ "passes": false, "obstruction": text }), text));
        }
        Err(e) => return Err(e.into()),
    };
    let charts: Vec<_> = fan.max_cones().iter().map(|c| ctx.chart(c)).collect::<Result<_, _>>()?;
    let first = &charts[0];

    let mut rng = seeded_rng(seed);
    let ys: Vec<Vec<f64>> = (0..args.points).map(|_| random_float_point(&mut rng, fan.dim(), 0.1)).collect();
    let eval = |(i, y): (usize, &Vec<f64>)| {
        let r = kernel_check(first, y, &ctx.p_h, &args.tol);
        let fd = fd_relative_error(first, y, 8, seed.wrapping_add(i as u64));
        (r, fd)
    };
    let results: Vec<_> = if parallel {
        ys.par_iter().enumerate().map(eval).collect()
    } else {
        ys.iter().enumerate().map(eval).collect()
    };

    let mut cocycle = 0.0f64;
    for i in 0..charts.len() {
        for j in i + 1..charts.len() {
            cocycle = cocycle.max(cocycle_check(&charts[i], &charts[j], args.points.max(1), seed, 0.1)?);
        }
    }

    let psd = results.iter().all(|(r, _)| r.psd);
    let kernel_dims: Vec<usize> = results.iter().map(|(r, _)| r.kernel_dim).collect();
    let kernel_dim = kernel_dims.first().copied().filter(|d| kernel_dims.iter().all(|e| e == d));
    let max_angle = results.iter().map(|(r, _)| r.max_angle).fold(0.0, f64::max);
    let fd_error = results.iter().map(|(_, fd)| *fd).fold(0.0, f64::max);
    let passes = results.iter().all(|(r, _)| r.passes) && cocycle < args.tol.cocycle && fd_error < args.tol.fd;

    let pointwise: Vec<Value> = results
        .iter()
        .map(|(r, fd)| {
            json!({
                "y": r.y,
                "eigenvalues": r.eigenvalues,
                "kernel_dim": r.kernel_dim,
                "max_angle": r.max_angle,
                "psd": r.psd,
                "exact_kernel_residual": r.exact_kernel_residual,
                "fd_error": fd,
                "passes": r.passes,
            })
        })
        .collect();
    let report = json!({
        "passes": passes,
        "kappa": ctx.kappa.to_string(),
        "b": rationals(&ctx.b),
        "fd_factor": HESSIAN_FD_FACTOR,
        "tolerances": args.tol,
        "charts": charts.iter().map(|d| json!({
            "chart": one_based(&d.chart),
            "shift": rationals(&d.shift),
            "characters": d.characters.iter().map(|w| rationals(w)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "pointwise": pointwise,
        "summary": {
            "psd": psd,
            "kernel_dim": kernel_dim,
            "expected_kernel_dim": ctx.p_h.len(),
            "max_angle": max_angle,
            "max_cocycle_dev": cocycle,
            "fd_error": fd_error,
        },
    });
    let text = format!(
        "{}: kernel dim {} (expected {}), psd {psd}, max angle {max_angle:.3e}, cocycle {cocycle:.3e}, fd error {fd_error:.3e}",
        if passes { "pass" } else { "fail" },
        kernel_dim.map_or("varies".to_string(), |d| d.to_string()),
        ctx.p_h.len(),
    );
    Ok(Outcome::new(passes, report, text))
}

fn example(name: &str, out: &Path) -> Result<Outcome> {
    let files = instance_files(name)
        .ok_or_else(|| anyhow!("unknown example {name:?}; choose one of {}", INSTANCE_NAMES.join(", ")))?;
    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let mut written = Vec::new();
    for (file, value) in files {
        let path = out.join(&file);
        std::fs::write(&path, canonical_json(&value)).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(file);
    }
    let text = format!("wrote {}", written.join(", "));
    Ok(Outcome::new(true, json!({ "example": name, "files": written }), text))
}

fn run(cli: Cli) -> Result<Outcome> {
    let seed = resolve_seed(cli.seed.as_deref())?;
    match cli.command {
        Command::ValidateFan { fan } => validate_fan(&fan, seed, cli.parallel),
        Command::Validate { construction, input, subspace } => validate(construction, &input, &subspace, seed),
        Command::Normality { fan, weak } => normality(&fan, weak, seed),
        Command::Vertices { fan, certificate } => vertices(&fan, &certificate, seed),
        Command::Lift { fan, subspace } => lift(&fan, &subspace, seed),
        Command::Foliation { subspace, fan } => foliation(&subspace, fan.as_deref()),
        Command::DivisorHypotheses { complex, subspace } => divisor(&complex, &subspace),
        Command::TkCheck {
            fan,
            subspace,
            certificate,
            points,
            smoothness,
            kernel_tol,
            angle_tol,
            cocycle_tol,
            fd_tol,
        } => {
            let d = TkTolerances::default();
            let tol = TkTolerances {
                kernel: kernel_tol.unwrap_or(d.kernel),
                angle: angle_tol.unwrap_or(d.angle),
                cocycle: cocycle_tol.unwrap_or(d.cocycle),
                fd: fd_tol.unwrap_or(d.fd),
            };
            let args = TkArgs { fan: &fan, subspace: &subspace, certificate: certificate.as_deref(), points, smoothness, tol };
            tk_check(args, seed, cli.parallel)
        }
        Command::Example { name, out } => example(&name, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(outcome) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&outcome.report).expect("report serializes"),
                Format::Text => outcome.text,
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(e) => {
            let e = match e.downcast::<NormalityError>() {
                Ok(NormalityError::NotComplete) => anyhow!("normality is defined for complete fans only"),
                Ok(other) => other.into(),
                Err(e) => e,
            };
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
