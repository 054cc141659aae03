//! The `metric-lie` command-line tool.
//!
//! Exit codes: 0 on success, 2 for malformed or invalid input, 3 when a
//! mathematical precondition fails, 4 when a verification contradicts an
//! expected identity.

pub mod file;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify_ricci, decompose_double_extension, type_i_decomposition};
use crate::constructions::{
    catalog, check_parallel_conditions, complexify, double_extension, extension_invariants, type_i_metric,
    DoubleExtensionSpec, CATALOG,
};
use crate::error::{Error, Result};
use crate::geometry::MetricLieAlgebra;
use crate::linalg::{max_abs, Tolerance};

use file::{rows, AlgebraFile, ExtensionFile};
use report::{build_report, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "metric-lie", version, about = "Curvature of left-invariant metrics on Lie groups")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Absolute residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_abs: f64,
    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Relative singular-value cutoff for ranks and nondegeneracy.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_rank: f64,
    /// Print JSON to stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON result to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Jacobi identity and the metric of an algebra file.
    Validate { path: PathBuf },
    /// Curvature report for an algebra file, or every `.json` file in a directory.
    Report { path: PathBuf },
    /// Double extension of a base algebra by (D, K, L).
    DoubleExtend { base: PathBuf, extension: PathBuf },
    /// Complexification, optionally with the type I metric for (lambda, mu).
    Complexify {
        base: PathBuf,
        #[arg(long, num_args = 2, value_names = ["LAMBDA", "MU"], allow_negative_numbers = true)]
        type1: Option<Vec<f64>>,
    },
    /// Recover (D, K, L) from a nilpotent Lorentz type II algebra.
    Decompose { path: PathBuf },
    /// Emit a named algebra; parameters are given as key=value.
    Catalog {
        name: Option<String>,
        params: Vec<String>,
    },
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn tolerance(opts: &GlobalOpts) -> Result<Tolerance> {
    Tolerance::new(opts.tol_abs, opts.tol_rel, opts.tol_rank)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".sidecar.json");
    PathBuf::from(name)
}

/// Writes an algebra plus sidecar to `--out`, or both to stdout as one object.
fn emit_algebra(opts: &GlobalOpts, m: &MetricLieAlgebra, sidecar: Value, stdout: &mut dyn Write) -> Result<()> {
    let file = AlgebraFile::from_metric_algebra(m);
    match &opts.out {
        Some(path) => {
            std::fs::write(path, to_json(&file))?;
            std::fs::write(sidecar_path(path), to_json(&sidecar))?;
            if !opts.json {
                writeln!(stdout, "wrote {} and {}", path.display(), sidecar_path(path).display())?;
            }
        }
        None => stdout.write_all(to_json(&json!({ "algebra": file, "sidecar": sidecar })).as_bytes())?,
    }
    Ok(())
}

fn emit_value(opts: &GlobalOpts, value: &Value, text: &str, stdout: &mut dyn Write) -> Result<()> {
    if let Some(path) = &opts.out {
        std::fs::write(path, to_json(value))?;
    }
    if opts.json {
        stdout.write_all(to_json(value).as_bytes())?;
    } else {
        stdout.write_all(text.as_bytes())?;
    }
    Ok(())
}

fn header(tol: &Tolerance) -> Value {
    json!({ "tool_version": TOOL_VERSION, "tolerance": tol })
}

fn load(path: &Path, tol: &Tolerance) -> Result<MetricLieAlgebra> {
    AlgebraFile::load(path)?.metric_algebra(tol)
}

fn execute(cli: &Cli, stdout: &mut dyn Write, _stderr: &mut dyn Write) -> Result<i32> {
    let opts = &cli.opts;
    let tol = tolerance(opts)?;
    match &cli.command {
        Command::Validate { path } => validate(opts, &tol, path, stdout),
        Command::Report { path } => report(opts, &tol, path, stdout),
        Command::DoubleExtend { base, extension } => {
            let base = load(base, &tol)?;
            let (d, k, l) = ExtensionFile::load(extension)?.parts(base.dim())?;
            let spec = DoubleExtensionSpec::new(base, d, k, l)?;
            let residuals = spec.validate(&tol)?;
            let m = double_extension(&spec, &tol)?;
            let inv = extension_invariants(&spec);
            let cond = check_parallel_conditions(&spec, &tol);
            let mut sidecar = header(&tol);
            sidecar["spec_residuals"] = json!(residuals);
            sidecar["delta"] = json!(inv.delta.as_slice());
            sidecar["gamma"] = json!(inv.gamma);
            sidecar["z0"] = json!(inv.z0.as_slice());
            sidecar["conditions"] = json!(cond);
            emit_algebra(opts, &m, sidecar, stdout)?;
            Ok(0)
        }
        Command::Complexify { base, type1 } => {
            let base = load(base, &tol)?;
            let (m, sidecar) = match type1 {
                None => {
                    let (m, j) = complexify(&base)?;
                    let mut s = header(&tol);
                    s["j"] = json!(rows(&j));
                    (m, s)
                }
                Some(p) => {
                    let (lambda, mu) = (p[0], p[1]);
                    let check = base.is_einstein(&tol);
                    let c = check.constant.ok_or(Error::NotEinstein { residual: check.residual })?;
                    let m = type_i_metric(&base, c, lambda, mu, &tol)?;
                    let cls = classify_ricci(&m, &tol);
                    let dec = type_i_decomposition(&m, &cls, &tol)?;
                    let mut s = header(&tol);
                    s["base_einstein_constant"] = json!(c);
                    s["requested"] = json!({ "lambda": lambda, "mu": mu });
                    s["classification"] = json!(cls);
                    s["lambda"] = json!(dec.lambda);
                    s["mu"] = json!(dec.mu);
                    s["j"] = json!(rows(&dec.j));
                    s["einstein_metric"] = json!(rows(dec.einstein_metric.gram()));
                    s["residuals"] = json!(dec.residuals);
                    (m, s)
                }
            };
            emit_algebra(opts, &m, sidecar, stdout)?;
            Ok(0)
        }
        Command::Decompose { path } => {
            let m = load(path, &tol)?;
            let dec = decompose_double_extension(&m, &tol)?;
            let mut s = header(&tol);
            s["D"] = json!(rows(&dec.spec.derivation));
            s["K"] = json!(rows(&dec.spec.skew));
            s["L"] = json!(dec.spec.twist.as_slice());
            s["basis"] = json!(rows(&dec.basis));
            s["sign"] = json!(dec.sign);
            s["rebuild_residual"] = json!(dec.rebuild_residual);
            s["gamma"] = json!(extension_invariants(&dec.spec).gamma);
            emit_algebra(opts, &dec.spec.base, s, stdout)?;
            Ok(0)
        }
        Command::Catalog { name: None, .. } => {
            let list: Vec<Value> = CATALOG.iter().map(|(n, p)| json!({ "name": n, "params": p })).collect();
            let text: String = CATALOG.iter().map(|(n, p)| format!("{n}({})\n", p.join(", "))).collect();
            emit_value(opts, &Value::Array(list), &text, stdout)?;
            Ok(0)
        }
        Command::Catalog { name: Some(name), params } => {
            let mut map = BTreeMap::new();
            for p in params {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Error::BadParams(format!("expected key=value, got `{p}`")))?;
                let v: f64 = v.trim().parse().map_err(|_| Error::BadParams(format!("`{k}` is not a number: `{v}`")))?;
                map.insert(k.trim().to_string(), v);
            }
            let m = catalog(name, &map)?;
            let mut s = header(&tol);
            s["name"] = json!(name);
            s["params"] = json!(map);
            emit_algebra(opts, &m, s, stdout)?;
            Ok(0)
        }
    }
}

fn validate(opts: &GlobalOpts, tol: &Tolerance, path: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let f = AlgebraFile::load(path)?;
    let alg = f.algebra()?;
    let g = f.gram()?;
    let jacobi = alg.jacobi_residual();
    let jacobi_scale = alg.max_constant().max(1.0).powi(2);
    let symmetry = max_abs(&(&g - g.transpose()));
    let sv = g.clone().singular_values();
    let (smallest, largest) = if f.dim == 0 { (0.0, 0.0) } else { (sv.min(), sv.max()) };
    let jacobi_ok = tol.passes(jacobi, jacobi_scale);
    let symmetric_ok = symmetry <= tol.abs;
    let nondegenerate_ok = f.dim == 0 || smallest > tol.rank * largest.max(1.0);
    let passed = jacobi_ok && symmetric_ok && nondegenerate_ok;

    let mut v = header(tol);
    v["path"] = json!(path.display().to_string());
    v["jacobi"] = json!({ "passed": jacobi_ok, "residual": jacobi });
    v["symmetry"] = json!({ "passed": symmetric_ok, "residual": symmetry });
    v["nondegeneracy"] = json!({ "passed": nondegenerate_ok, "smallest_singular_value": smallest });
    v["passed"] = json!(passed);
    let text = format!(
        "jacobi           {} (residual {jacobi:.3e})\nsymmetry         {} (residual {symmetry:.3e})\nnondegeneracy    {} (smallest singular value {smallest:.3e})\n",
        verdict(jacobi_ok),
        verdict(symmetric_ok),
        verdict(nondegenerate_ok)
    );
    emit_value(opts, &v, &text, stdout)?;
    Ok(if passed { 0 } else { 2 })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn report(opts: &GlobalOpts, tol: &Tolerance, path: &Path, stdout: &mut dyn Write) -> Result<i32> {
    if !path.is_dir() {
        let r = build_report(&load(path, tol)?, tol)?;
        emit_value(opts, &json!(r), &r.to_text(), stdout)?;
        return Ok(0);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().ends_with(".sidecar.json"))
        .collect();
    files.sort();
    let mut entries = Vec::with_capacity(files.len());
    let mut text = String::new();
    let mut code = 0;
    for f in &files {
        let name = f.display().to_string();
        match load(f, tol).and_then(|m| build_report(&m, tol)) {
            Ok(r) => {
                text.push_str(&format!("== {name}\n{}", r.to_text()));
                entries.push(json!({ "path": name, "report": r }));
            }
            Err(e) => {
                text.push_str(&format!("== {name}\nerror: {e}\n"));
                entries.push(json!({ "path": name, "error": e.to_string(), "exit_code": e.exit_code() }));
                code = code.max(e.exit_code());
            }
        }
    }
    emit_value(opts, &Value::Array(entries), &text, stdout)?;
    Ok(code)
}
