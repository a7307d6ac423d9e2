//! Command-line front end. Every subcommand prints one JSON document on
//! stdout (an indented listing with `--pretty`).
//!
//! Exit codes: 0 on success or a PASS verdict, 1 on a FAIL verdict or a
//! domain error, 2 on usage and parse errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::borderbasis::from_groebner;
use crate::continuity::{cluster_charpoly_bound, local_bezout_count, PerturbationExperiment, Verdict};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, local_multiplicity_truncation, quotient_staircase, DEFAULT_NMAX};
use crate::hensel::{
    assemble_lift, char_poly_diagnostics, lift_border_basis, localize_residual, verify_lift, CharPolyReport,
    DivisionStrategy, LiftedBorderBasis, VerificationReport,
};
use crate::io::{read_system, FieldKind, SystemFile};
use crate::json::{exponent_key, series_from_json, ToJson};
use crate::localzero::{
    multiplicity_at_origin, split_idempotent, stickelberger_decompose, StickelbergerOptions, DEFAULT_GAP,
    DEFAULT_RANK_TOL,
};
use crate::polynomials::{parse_polynomial, variable_names, MonomialOrder, Polynomial, VarTable};
use crate::scalars::{Field, Series, SeriesCtx, ToComplex, Q};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "HENSELBEZ_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "henselbez",
    version,
    about = "Border bases, Hensel lifting and local Bezout counts"
)]
pub struct Cli {
    /// Indented human-readable listing instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pub pretty: bool,
    /// JSON output (the default).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certified border basis of a zero-dimensional system.
    Borderbasis {
        file: PathBuf,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
    },
    /// Multiplicity of the origin.
    Multiplicity { file: PathBuf },
    /// Idempotent splitting at the origin and all zeros of the quotient.
    Split {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GAP)]
        gap: f64,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tolerance: f64,
    },
    /// Lift the residual border basis of a deformed system.
    Lift {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a lift report against its system.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        system: PathBuf,
    },
    /// Count zeros near a point over seeded perturbations.
    Count {
        #[arg(long)]
        system: PathBuf,
        /// Comma-separated rational coordinates.
        #[arg(long)]
        point: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GAP)]
        gap: f64,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tolerance: f64,
    },
    /// Gröbner-based reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    Groebner {
        file: PathBuf,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
    },
    Staircase {
        file: PathBuf,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
    },
    Member {
        file: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "grevlex")]
        order: MonomialOrder,
    },
    Localmult {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: u32,
    },
}

/// A command's JSON and whether its verdict passed.
struct Outcome {
    value: Value,
    pass: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, pass: true }
    }
}

/// Cap the global thread pool from [`THREADS_ENV`]; later calls are no-ops.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parse `argv`, run, write the report, and return the exit code.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let text = if cli.pretty {
                render_pretty(&o.value)
            } else {
                render_json(&o.value)
            };
            if writeln!(out, "{text}").is_err() {
                return 1;
            }
            i32::from(!o.pass)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(
                out,
                "{}",
                render_json(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } }))
            );
            if matches!(e, Error::Parse { .. }) {
                2
            } else {
                1
            }
        }
    }
}

fn render_json(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn pretty_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object()
                    || x.as_array()
                        .is_some_and(|a| a.iter().any(|e| e.is_object() || e.is_array()))
                {
                    out.push_str(&format!("{pad}{k}:\n"));
                    pretty_into(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: "));
                    pretty_into(x, 0, out);
                    out.push('\n');
                }
            }
        }
        Value::Array(items) if items.iter().any(|e| e.is_object() || e.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                if x.is_object() {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    pretty_into(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}[{i}] "));
                    pretty_into(x, 0, out);
                    out.push('\n');
                }
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}{}", parts.join("  ")));
        }
        other => out.push_str(&format!("{pad}{}", scalar_text(other))),
    }
}

fn render_pretty(v: &Value) -> String {
    let mut s = String::new();
    pretty_into(v, 0, &mut s);
    s.trim_end().to_string()
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Borderbasis { file, order } => {
            let sys = read_system(file)?;
            dispatch(&sys, |f| borderbasis_json(f, *order), |f| borderbasis_json(f, *order))
        }
        Command::Multiplicity { file } => {
            let sys = read_system(file)?;
            let r = dispatch(&sys, multiplicity_at_origin, multiplicity_at_origin)?;
            Ok(Outcome::ok(json!({ "r": r })))
        }
        Command::Split {
            file,
            seed,
            gap,
            tolerance,
        } => {
            let opts = StickelbergerOptions {
                seed: *seed,
                gap: *gap,
                rank_tol: *tolerance,
                ..StickelbergerOptions::default()
            };
            split_json(&read_system(file)?.rational()?, &opts).map(Outcome::ok)
        }
        Command::Lift { input, precision, out } => {
            let sys = read_system(input)?;
            let f = sys.deformed(*precision)?;
            let local = localize_residual(&f.residual())?;
            let lifted = lift_border_basis(&f, &local, DivisionStrategy::default())?;
            let report = verify_lift(&lifted, &f);
            let pass = report.all_pass();
            let value = lift_json(&sys, &lifted, &report);
            match out {
                Some(path) => {
                    write_file(path, &render_json(&value))?;
                    Ok(Outcome {
                        value: json!({ "out": path.display().to_string(), "verdict": verdict(pass) }),
                        pass,
                    })
                }
                None => Ok(Outcome { value, pass }),
            }
        }
        Command::Verify { input, system } => verify_json(input, system),
        Command::Count {
            system,
            point,
            eps,
            delta,
            trials,
            seed,
            gap,
            tolerance,
        } => {
            let f = read_system(system)?.rational()?;
            let point = parse_point(point)?;
            let mut e = PerturbationExperiment::new(f, point, *eps, *delta, *trials, *seed)?;
            e.gap = *gap;
            e.rank_tol = *tolerance;
            count_json(&e)
        }
        Command::Oracle(o) => oracle(o).map(Outcome::ok),
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        Verdict::Pass.as_str()
    } else {
        Verdict::Fail.as_str()
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, format!("{text}\n"))
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

/// Run `q` on rational systems and `p` on modular ones.
fn dispatch<T>(
    sys: &SystemFile,
    q: impl FnOnce(&[Polynomial<Q>]) -> Result<T>,
    p: impl FnOnce(&[Polynomial<crate::scalars::Fp>]) -> Result<T>,
) -> Result<T> {
    match sys.field {
        FieldKind::Rational => q(&sys.rational()?),
        FieldKind::Prime(m) => p(&sys.modular(m)?),
    }
}

fn monomial_names(ms: &[crate::polynomials::Monomial]) -> Vec<String> {
    ms.iter().map(ToString::to_string).collect()
}

fn borderbasis_json<K: Field + ToJson>(f: &[Polynomial<K>], order: MonomialOrder) -> Result<Outcome> {
    let bb = from_groebner(&buchberger(f, order)?)?;
    let mut v = Map::new();
    v.insert("order".into(), json!(order.name()));
    v.insert("dimension".into(), json!(bb.dim()));
    v.insert("border".into(), json!(monomial_names(bb.order_ideal().border())));
    if let Value::Object(rest) = bb.to_json() {
        v.extend(rest);
    }
    Ok(Outcome::ok(Value::Object(v)))
}

fn split_json(f: &[Polynomial<Q>], opts: &StickelbergerOptions) -> Result<Value> {
    let rep = split_idempotent(f)?;
    let zeros = stickelberger_decompose(&rep.basis, opts)?;
    Ok(json!({
        "r": rep.r,
        "nilIndex": rep.nil_index,
        "totalDim": rep.basis.dim(),
        "basis": monomial_names(rep.basis.order_ideal().monomials()),
        "idempotent": rep.idempotent().to_string(),
        "zeros": zeros.iter().map(ToJson::to_json).collect::<Vec<_>>(),
        "seed": opts.seed,
    }))
}

fn rules_by_name(bb: &crate::borderbasis::BorderBasis<Series<Q>>) -> Value {
    let mut rules = Map::new();
    for (beta, row) in bb.order_ideal().border().iter().zip(bb.rules()) {
        rules.insert(
            beta.to_string(),
            Value::Array(row.iter().map(ToJson::to_json).collect()),
        );
    }
    Value::Object(rules)
}

fn verification_json(r: &VerificationReport) -> Value {
    json!({
        "generatorsReduce": r.generators_reduce,
        "commutation": r.commutation,
        "commutationWitness": r.commutation_witness,
        "residualMatches": r.residual_matches,
        "detSUnit": r.det_unit,
        "rank": r.rank,
        "verdict": verdict(r.all_pass()),
    })
}

fn charpoly_json(reports: &[CharPolyReport<Q>], names: &[String]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|c| {
                json!({
                    "variable": names[c.variable],
                    "coefficients": c.coefficients.iter().map(ToJson::to_json).collect::<Vec<_>>(),
                    "valuations": c.valuations.iter().map(ToJson::to_json).collect::<Vec<_>>(),
                    "residualIsPower": c.residual_is_power,
                    "inMaximalIdeal": c.in_maximal_ideal,
                    "gradedBound": c.graded_bound,
                })
            })
            .collect(),
    )
}

fn lift_json(sys: &SystemFile, l: &LiftedBorderBasis<Q>, report: &VerificationReport) -> Value {
    let oi = l.base.order_ideal();
    let working_oi = l.working.order_ideal();
    json!({
        "precision": l.precision,
        "nvars": sys.nvars,
        "ndeform": sys.ndeform,
        "r": l.r,
        "orderIdeal": oi.monomials().iter().map(|m| json!(m.exponents())).collect::<Vec<_>>(),
        "basis": monomial_names(oi.monomials()),
        "rules": rules_by_name(&l.base),
        "augmented": l.is_augmented(),
        "idempotent": l.idempotent.as_ref().map(ToString::to_string),
        "workingBorder": working_oi.border().iter().map(|b| exponent_key(b.exponents())).collect::<Vec<_>>(),
        "workingRules": l.working.rules().iter()
            .map(|row| Value::Array(row.iter().map(ToJson::to_json).collect()))
            .collect::<Vec<_>>(),
        "detS": det_s_text(l),
        "valuationTrace": l.valuation_trace.iter().map(ToJson::to_json).collect::<Vec<_>>(),
        "charPoly": charpoly_json(&char_poly_diagnostics(l), &variable_names(sys.nvars)),
        "verification": verification_json(report),
        "verdict": verdict(report.all_pass()),
    })
}

/// `detS` with the auxiliary variable of an augmented lift printed as `t`.
fn det_s_text(l: &LiftedBorderBasis<Q>) -> String {
    let mut names = variable_names(l.base.nvars());
    if l.is_augmented() {
        names.push("t".into());
    }
    l.det_s.to_text_with(&names)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn verify_json(input: &Path, system: &Path) -> Result<Outcome> {
    let text = std::fs::read_to_string(input).map_err(|e| invalid(format!("cannot read {}: {e}", input.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", input.display())))?;
    let precision = doc["precision"]
        .as_u64()
        .and_then(|p| u32::try_from(p).ok())
        .ok_or_else(|| invalid("lift report lacks a precision"))?;
    let sys = read_system(system)?;
    let f = sys.deformed(Some(precision))?;
    let local = localize_residual(&f.residual())?;
    let ctx: SeriesCtx<Q> = f.series_ctx.clone();
    let rows = doc["workingRules"]
        .as_array()
        .ok_or_else(|| invalid("lift report lacks workingRules"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| invalid("rule rows must be arrays"))?
                .iter()
                .map(|s| series_from_json(s, &ctx))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let lifted = assemble_lift(&f, &local, rows, DivisionStrategy::default())?;
    let expected: Vec<String> = lifted
        .working
        .order_ideal()
        .border()
        .iter()
        .map(|b| exponent_key(b.exponents()))
        .collect();
    if doc["workingBorder"] != json!(expected) {
        return Err(invalid("lift report border does not match the system's residual basis"));
    }
    let report = verify_lift(&lifted, &f);
    let pass = report.all_pass();
    Ok(Outcome {
        value: json!({
            "precision": precision,
            "detS": det_s_text(&lifted),
            "charPoly": charpoly_json(&char_poly_diagnostics(&lifted), &variable_names(sys.nvars)),
            "verification": verification_json(&report),
            "verdict": verdict(pass),
        }),
        pass,
    })
}

fn parse_point(text: &str) -> Result<Vec<Q>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<Q>()
                .map_err(|_| invalid(format!("bad coordinate `{s}` in --point")))
        })
        .collect()
}

fn count_json(e: &PerturbationExperiment) -> Result<Outcome> {
    let rep = local_bezout_count(e)?;
    let n = e.nvars();
    let trials: Vec<Value> = rep
        .trials
        .iter()
        .enumerate()
        .map(|(k, t)| {
            json!({
                "index": t.index,
                "resamples": t.resamples,
                "zeros": t.zeros.iter().enumerate().map(|(j, z)| {
                    let mut v = z.to_json();
                    v["inside"] = json!(t.inside.contains(&j));
                    v
                }).collect::<Vec<_>>(),
                "sumInside": t.sum_inside,
                "globalSum": t.global_sum,
                "dimension": t.dimension,
                "charpolyBound": (0..n).all(|i| cluster_charpoly_bound(&rep, k, i)),
            })
        })
        .collect();
    let pass = rep.verdict == Verdict::Pass;
    Ok(Outcome {
        value: json!({
            "point": e.point.iter().map(|q| q.to_c64().to_json()).collect::<Vec<_>>(),
            "r": rep.r,
            "eps": rep.eps,
            "delta": rep.delta,
            "seed": rep.seed,
            "trialCount": rep.trials.len(),
            "resamples": rep.resamples,
            "conserved": rep.conserved(),
            "countedR": rep.counted_r(),
            "trials": trials,
            "verdict": rep.verdict.as_str(),
        }),
        pass,
    })
}

fn groebner_json<K: Field>(f: &[Polynomial<K>], order: MonomialOrder) -> Result<Value> {
    let g = buchberger(f, order)?;
    Ok(json!({
        "order": order.name(),
        "generators": g.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "leadingMonomials": monomial_names(&g.leading_monomials()),
    }))
}

fn staircase_json<K: Field>(f: &[Polynomial<K>], order: MonomialOrder) -> Result<Value> {
    let s = quotient_staircase(&buchberger(f, order)?)?;
    Ok(json!({
        "order": order.name(),
        "dimension": s.dimension,
        "staircase": monomial_names(s.order_ideal.monomials()),
    }))
}

fn member_json<K: Field>(f: &[Polynomial<K>], p: &Polynomial<K>, order: MonomialOrder) -> Result<Value> {
    let g = buchberger(f, order)?;
    let cert = g.certificate(p);
    Ok(json!({
        "member": cert.is_some(),
        "certificate": cert.map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()),
    }))
}

fn oracle(cmd: &OracleCommand) -> Result<Value> {
    match cmd {
        OracleCommand::Groebner { file, order } => dispatch(
            &read_system(file)?,
            |f| groebner_json(f, *order),
            |f| groebner_json(f, *order),
        ),
        OracleCommand::Staircase { file, order } => dispatch(
            &read_system(file)?,
            |f| staircase_json(f, *order),
            |f| staircase_json(f, *order),
        ),
        OracleCommand::Member { file, poly, order } => {
            let sys = read_system(file)?;
            let p = parse_polynomial(poly, &VarTable::new(sys.nvars, 0), 1)?;
            dispatch(
                &sys,
                |f| member_json(f, &p, *order),
                |f| {
                    let m = f[0].coeff_ctx();
                    let pm = p.map_coeffs(m, |c| {
                        crate::scalars::Fp::from_rational(m, &c.0).unwrap_or_else(|| crate::scalars::Fp::new(0, *m))
                    });
                    member_json(f, &pm, *order)
                },
            )
        }
        OracleCommand::Localmult { file, nmax } => {
            let (r, n) = dispatch(
                &read_system(file)?,
                |f| local_multiplicity_truncation(f, *nmax),
                |f| local_multiplicity_truncation(f, *nmax),
            )?;
            Ok(json!({ "r": r, "stabilizedAt": n }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_command(
            std::iter::once("henselbez").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn temp_system(name: &str, text: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("henselbez-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn multiplicity_output() {
        let p = temp_system("sq.txt", "QQ 2 0\nx^2\ny^2\n");
        let (code, out, _) = run(&["multiplicity", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"r":4}"#);
    }

    #[test]
    fn usage_and_parse_errors() {
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["multiplicity", "--bogus", "x"]).0, 2);
        let p = temp_system("bad.txt", "QQ 1 0\nx^-1\n");
        let (code, out, err) = run(&["multiplicity", p.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(out.contains("\"Parse\""));
        assert!(err.contains("2:3"));
    }

    #[test]
    fn domain_error_exit() {
        let p = temp_system("far.txt", "QQ 1 0\nx - 1\n");
        let (code, out, _) = run(&["multiplicity", p.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(out.contains("OriginNotAZero"));
    }

    #[test]
    fn lift_then_verify() {
        let sys = temp_system("cubic.txt", "QQ[[v]] 1 1 8\nx^2 - x^3 - v\n");
        let out = sys.with_file_name("cubic.json");
        let (code, _, _) = run(&[
            "lift",
            "--precision",
            "4",
            "--input",
            sys.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(doc["rules"]["x^2"][1], json!({"1": "1", "2": "2", "3": "7", "4": "30"}));
        let (code, vout, _) = run(&[
            "verify",
            "--input",
            out.to_str().unwrap(),
            "--system",
            sys.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{vout}");

        let mut bad = doc.clone();
        bad["workingRules"][0][1] = json!({"1": "1", "2": "5"});
        std::fs::write(&out, bad.to_string()).unwrap();
        let (code, vout, _) = run(&[
            "verify",
            "--input",
            out.to_str().unwrap(),
            "--system",
            sys.to_str().unwrap(),
        ]);
        assert_eq!(code, 1, "{vout}");
    }

    #[test]
    fn oracle_and_pretty() {
        let p = temp_system("cusp.txt", "QQ 2 0\nx^2 - y^3\ny^2\n");
        let (code, out, _) = run(&["oracle", "localmult", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.starts_with(r#"{"r":4,"#));
        let (code, out, _) = run(&["oracle", "member", p.to_str().unwrap(), "--poly", "x^3"]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""member":true"#));
        let (code, out, _) = run(&["--pretty", "borderbasis", p.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.contains("dimension: 4"));
    }
}
