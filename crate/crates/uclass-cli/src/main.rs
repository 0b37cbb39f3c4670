//! Batch front end for the function-class toolkit.
//!
//! Each subcommand reads one JSON config (see `config`), computes with the
//! library, and writes a single JSON or CSV document with a provenance
//! header (see `output`). Exit codes: 0 success, 2 config error, 3 when a
//! verification refutes the claim under test, 1 for IO failures.

mod config;
mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use uclass::{
    a2_bound, a2_report, b_coefficients, bk_bound, bk_report, classify, critical_point_witness,
    l2_bound, l2_report, l2_weighted_sum, maximize_h_modulus, membership_of_spec,
    subordination_scan, sweep, ClassParams, ExploreError, OptimizeConfig, PowerSeries,
    RegionVerdict, SweepOptions, SweepRow, Verdict,
};

use config::{cx, grid_or_default, CheckKind, ConfigDoc, FunctionConfig};
use output::{fmt_c, fmt_f, jc, provenance, write_out, Document, Format, Table};

#[derive(Parser)]
#[command(
    name = "uclass",
    version,
    about = "Construct, check and explore members of a disk function class \
             defined by a bounded-operator inequality"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON config file for the subcommand.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Overrides the config's seed, where the command uses one.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config's series order, where the command uses one.
    #[arg(long, global = true, value_name = "N")]
    order: Option<usize>,
    /// Worker threads for the parallel commands; default: all cores.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a member function and check it against its class inequality.
    Construct,
    /// Run membership, local-univalence and univalence probes on a function.
    Verify,
    /// Tabulate z/f coefficients with their per-index bounds.
    Coeffs,
    /// Sharp-bound table: bound vs extremal-achieved value per row.
    Bounds,
    /// Locate a parameter point relative to the structural regions.
    Classify,
    /// Sharpness data for one extremal function.
    Extremal,
    /// Multistart search for the largest boundary modulus at radius p.
    Maximize,
    /// Batch subordination evidence scan over parameter points.
    Subordination,
    /// Parameter-grid sweep of bounds, verdicts and random-member probes.
    Sweep,
    /// Boundary curve samples and operator profiles, ready for plotting.
    Plotdata,
}

enum Failure {
    /// Bad config or bad parameters: exit 2.
    Config(String),
    /// A check refuted the claim under test: exit 3 (output was written).
    Refuted(String),
    /// IO or internal: exit 1.
    Other(String),
}

fn main() {
    let code = match run() {
        Ok(()) => 0,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(Failure::Refuted(msg)) => {
            eprintln!("refuted: {msg}");
            3
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    };
    std::process::exit(code);
}

fn run() -> Result<(), Failure> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Config("--jobs must be at least 1".into()));
        }
        // The global pool can only be set once; a second attempt is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let path = cli
        .config
        .clone()
        .ok_or_else(|| Failure::Config("missing --config <PATH>".into()))?;
    match cli.command {
        Cmd::Construct => cmd_construct(&cli, &path),
        Cmd::Verify => cmd_verify(&cli, &path),
        Cmd::Coeffs => cmd_coeffs(&cli, &path),
        Cmd::Bounds => cmd_bounds(&cli, &path),
        Cmd::Classify => cmd_classify(&cli, &path),
        Cmd::Extremal => cmd_extremal(&cli, &path),
        Cmd::Maximize => cmd_maximize(&cli, &path),
        Cmd::Subordination => cmd_subordination(&cli, &path),
        Cmd::Sweep => cmd_sweep(&cli, &path),
        Cmd::Plotdata => cmd_plotdata(&cli, &path),
    }
}

fn load<T: ConfigDoc>(path: &Path) -> Result<(T, Vec<u8>), Failure> {
    config::load(path).map_err(Failure::Config)
}

fn emit(cli: &Cli, doc: &Document) -> Result<(), Failure> {
    let text = doc.render(cli.format.into());
    write_out(&text, cli.out.as_deref()).map_err(Failure::Other)
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

/// Tag name of a kind-tagged verdict value, for CSV cells.
fn kind_of(v: &Value) -> String {
    v.get("kind").and_then(Value::as_str).unwrap_or("?").to_string()
}

fn coeff_json(s: &PowerSeries, order: usize) -> Value {
    Value::Array((0..=order).map(|k| jc(s.coeff(k))).collect())
}

fn region_label(v: &RegionVerdict) -> &'static str {
    if v.univalence_guaranteed {
        "univalence_guaranteed"
    } else if v.open_region {
        "locally_univalent_open"
    } else {
        "contains_non_locally_univalent"
    }
}

fn cmd_construct(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::ConstructConfig>(path)?;
    let order = cli.order.or(cfg.order).unwrap_or(32);
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let (label, spec) = cfg.function.resolve(order).map_err(Failure::Config)?;
    let grid = grid_or_default(&cfg.grid, seed).map_err(Failure::Config)?;

    let zf = spec.zf_series();
    let f = spec.f_series();
    let membership = membership_of_spec(&spec, spec.params(), &grid);

    let data = json!({
        "function": label,
        "spec": to_json(&spec),
        "order": order,
        "zf_coefficients": coeff_json(&zf, order),
        "f_coefficients": coeff_json(&f, order),
        "membership": to_json(&membership),
    });
    let mut table = Table::new(vec!["k", "zf", "f"]);
    for k in 0..=order {
        table.push(vec![k.to_string(), fmt_c(zf.coeff(k)), fmt_c(f.coeff(k))]);
    }
    let doc = Document {
        command: "construct",
        provenance: provenance(&raw, Some(seed)),
        data,
        table,
    };
    emit(cli, &doc)?;

    if let Verdict::RefutedAt { z, value } = membership.verdict {
        return Err(Failure::Refuted(format!(
            "membership fails at z = {}: |U - mu| = {}",
            fmt_c(z),
            fmt_f((value - spec.params().mu()).norm())
        )));
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::VerifyConfig>(path)?;
    let order = cli.order.or(cfg.order).unwrap_or(32);
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let (label, spec) = cfg.function.resolve(order).map_err(Failure::Config)?;
    let params = match (cfg.lambda, cfg.mu) {
        (Some(l), Some(m)) => ClassParams::new(l, cx(m)).map_err(|e| Failure::Config(e.to_string()))?,
        (None, None) => *spec.params(),
        _ => {
            return Err(Failure::Config(
                "lambda and mu must be given together (or both omitted)".into(),
            ))
        }
    };
    let grid = grid_or_default(&cfg.grid, seed).map_err(Failure::Config)?;
    let checks = cfg.checks.unwrap_or_else(|| {
        vec![CheckKind::Membership, CheckKind::LocalUnivalence, CheckKind::Univalence]
    });
    if checks.is_empty() {
        return Err(Failure::Config("checks must not be empty".into()));
    }

    let mut table = Table::new(vec!["check", "verdict", "detail"]);
    let mut checks_json = serde_json::Map::new();
    let mut refuted: Vec<&str> = Vec::new();

    for check in &checks {
        match check {
            CheckKind::Membership => {
                let rep = membership_of_spec(&spec, &params, &grid);
                let v = to_json(&rep);
                table.push(vec![
                    "membership".into(),
                    kind_of(&v["verdict"]),
                    format!(
                        "sup |U - mu| = {}, margin = {}",
                        fmt_f(rep.sup_estimate),
                        fmt_f(rep.margin)
                    ),
                ]);
                if matches!(rep.verdict, Verdict::RefutedAt { .. }) {
                    refuted.push("membership");
                }
                checks_json.insert("membership".into(), v);
            }
            CheckKind::LocalUnivalence => {
                let rep = uclass::local_univalence_of_spec(&spec, &grid);
                let v = to_json(&rep);
                table.push(vec![
                    "local_univalence".into(),
                    kind_of(&v["verdict"]),
                    format!(
                        "min |f'| = {} at {}",
                        fmt_f(rep.min_abs_derivative),
                        fmt_c(rep.argmin)
                    ),
                ]);
                if matches!(rep.verdict, Verdict::RefutedAt { .. }) {
                    refuted.push("local_univalence");
                }
                checks_json.insert("local_univalence".into(), v);
            }
            CheckKind::Univalence => {
                let rep = uclass::univalence_of_spec(&spec, &grid);
                let v = to_json(&rep);
                table.push(vec![
                    "univalence".into(),
                    kind_of(&v["verdict"]),
                    format!(
                        "{} point pairs, {} winding targets",
                        rep.pairs_tested, rep.winding_targets_tested
                    ),
                ]);
                if matches!(rep.verdict, uclass::UnivalenceVerdict::RefutedAt { .. }) {
                    refuted.push("univalence");
                }
                checks_json.insert("univalence".into(), v);
            }
        }
    }

    let data = json!({
        "function": label,
        "spec": to_json(&spec),
        "lambda": params.lambda(),
        "mu": jc(params.mu()),
        "checks": Value::Object(checks_json),
        "refuted": refuted,
    });
    let doc = Document {
        command: "verify",
        provenance: provenance(&raw, Some(seed)),
        data,
        table,
    };
    emit(cli, &doc)?;

    if refuted.is_empty() {
        Ok(())
    } else {
        Err(Failure::Refuted(refuted.join(", ")))
    }
}

fn cmd_coeffs(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::CoeffsConfig>(path)?;
    let order = cli.order.or(cfg.order).unwrap_or(32);
    let kmax = cfg.kmax.unwrap_or(16);
    if kmax < 1 || kmax > order {
        return Err(Failure::Config(format!(
            "kmax must lie in 1..=order ({kmax} vs order {order})"
        )));
    }
    let (label, spec) = cfg.function.resolve(order).map_err(Failure::Config)?;
    let params = *spec.params();
    let f = spec.f_series();
    let b = b_coefficients(&f, kmax).map_err(|e| Failure::Other(e.to_string()))?;
    let tail_sum = l2_weighted_sum(&f, kmax).map_err(|e| Failure::Other(e.to_string()))?;

    let mut rows = Vec::new();
    let mut table = Table::new(vec!["k", "b", "abs_b", "bound"]);
    for (i, bk) in b.iter().enumerate() {
        let k = i + 1;
        let bound = (k >= 2).then(|| bk_bound(k, &params));
        rows.push(json!({
            "k": k,
            "b": jc(*bk),
            "abs_b": bk.norm(),
            "bound": bound,
        }));
        table.push(vec![
            k.to_string(),
            fmt_c(*bk),
            fmt_f(bk.norm()),
            bound.map_or_else(|| "n/a".into(), fmt_f),
        ]);
    }

    let data = json!({
        "function": label,
        "spec": to_json(&spec),
        "kmax": kmax,
        "rows": rows,
        "weighted_tail": {
            "terms": kmax,
            "sum": tail_sum,
            "bound": l2_bound(&params),
        },
    });
    let doc = Document {
        command: "coeffs",
        provenance: provenance(&raw, None),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_bounds(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::BoundsConfig>(path)?;
    let order = cli.order.or(cfg.order).unwrap_or(64);
    let params =
        ClassParams::new(cfg.lambda, cx(cfg.mu)).map_err(|e| Failure::Config(e.to_string()))?;

    let mut rows: Vec<Value> = Vec::new();
    let mut table = Table::new(vec!["kind", "k_or_p", "bound", "achieved", "gap"]);
    for &k in &cfg.k_values {
        let rep = bk_report(&params, k, order).map_err(|e| Failure::Config(e.to_string()))?;
        table.push(vec![
            "bk".into(),
            k.to_string(),
            fmt_f(rep.bound_value),
            fmt_f(rep.achieved_value),
            fmt_f(rep.gap),
        ]);
        rows.push(to_json(&rep));
    }
    let rep = l2_report(&params, cfg.l2_terms, order).map_err(|e| Failure::Config(e.to_string()))?;
    table.push(vec![
        "l2".into(),
        cfg.l2_terms.to_string(),
        fmt_f(rep.bound_value),
        fmt_f(rep.achieved_value),
        fmt_f(rep.gap),
    ]);
    rows.push(to_json(&rep));

    if let Some(p) = cfg.p {
        if !(p.is_finite() && 0.0 < p && p <= 1.0) {
            return Err(Failure::Config(format!("p must lie in (0, 1], got {p}")));
        }
        // The second-coefficient row needs a real ratio a in [0, 1); other
        // parameter points get an explicit n/a row rather than an error.
        match a2_report(&params, p, order) {
            Ok(rep) => {
                table.push(vec![
                    "a2".into(),
                    fmt_f(p),
                    fmt_f(rep.bound_value),
                    fmt_f(rep.achieved_value),
                    fmt_f(rep.gap),
                ]);
                rows.push(to_json(&rep));
            }
            Err(e) => {
                table.push(vec!["a2".into(), fmt_f(p), "n/a".into(), "n/a".into(), "n/a".into()]);
                rows.push(json!({
                    "kind": "a2",
                    "p": p,
                    "bound_value": null,
                    "achieved_value": null,
                    "gap": null,
                    "note": e.to_string(),
                }));
            }
        }
    }

    let data = json!({
        "lambda": params.lambda(),
        "mu": jc(params.mu()),
        "order": order,
        "rows": rows,
    });
    let doc = Document {
        command: "bounds",
        provenance: provenance(&raw, None),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_classify(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::ClassifyConfig>(path)?;
    let params =
        ClassParams::new(cfg.lambda, cx(cfg.mu)).map_err(|e| Failure::Config(e.to_string()))?;
    let verdict = classify(&params).map_err(|e| Failure::Config(e.to_string()))?;
    let region = region_label(&verdict);

    let (witness, witness_note) = if verdict.contains_non_locally_univalent {
        match critical_point_witness(&params) {
            Ok(w) => (
                json!({
                    "z1": jc(w.z1),
                    "abs_z1": w.z1.norm(),
                    "f_prime_modulus": w.f_prime_modulus,
                }),
                Value::Null,
            ),
            Err(e) => (Value::Null, Value::String(e.to_string())),
        }
    } else {
        (Value::Null, Value::Null)
    };

    let mut table = Table::new(vec!["name", "value"]);
    table.push(vec!["lambda".into(), fmt_f(params.lambda())]);
    table.push(vec!["mu".into(), fmt_c(params.mu())]);
    table.push(vec!["a".into(), fmt_c(params.a())]);
    table.push(vec!["region".into(), region.into()]);
    table.push(vec![
        "locally_univalent_all".into(),
        verdict.locally_univalent_all.to_string(),
    ]);
    table.push(vec![
        "univalence_guaranteed".into(),
        verdict.univalence_guaranteed.to_string(),
    ]);
    table.push(vec![
        "contains_non_locally_univalent".into(),
        verdict.contains_non_locally_univalent.to_string(),
    ]);
    table.push(vec!["open_region".into(), verdict.open_region.to_string()]);
    if let Some(z1) = witness.get("z1") {
        table.push(vec!["witness_z1".into(), fmt_c(cx([z1[0].as_f64().unwrap(), z1[1].as_f64().unwrap()]))]);
        table.push(vec![
            "witness_f_prime_modulus".into(),
            fmt_f(witness["f_prime_modulus"].as_f64().unwrap()),
        ]);
    }

    let data = json!({
        "lambda": params.lambda(),
        "mu": jc(params.mu()),
        "a": jc(params.a()),
        "region": region,
        "flags": to_json(&verdict),
        "witness": witness,
        "witness_note": witness_note,
    });
    let doc = Document {
        command: "classify",
        provenance: provenance(&raw, None),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_extremal(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::ExtremalConfig>(path)?;
    let order = cli.order.or(cfg.order).unwrap_or(64);
    let (label, spec) = cfg.function.resolve(order).map_err(Failure::Config)?;
    let params = *spec.params();

    let mut table = Table::new(vec!["kind", "k_or_p", "bound", "achieved", "gap"]);
    let (report, pole_residual) = match &cfg.function {
        FunctionConfig::ExtremalK(e) => {
            let rep = bk_report(&params, e.k, order).map_err(|e| Failure::Config(e.to_string()))?;
            table.push(vec![
                "bk".into(),
                e.k.to_string(),
                fmt_f(rep.bound_value),
                fmt_f(rep.achieved_value),
                fmt_f(rep.gap),
            ]);
            (rep, None)
        }
        FunctionConfig::ExtremalPole(e) => {
            let rep =
                a2_report(&params, e.p, order).map_err(|e| Failure::Config(e.to_string()))?;
            table.push(vec![
                "a2".into(),
                fmt_f(e.p),
                fmt_f(rep.bound_value),
                fmt_f(rep.achieved_value),
                fmt_f(rep.gap),
            ]);
            // z = p is the boundary pole of this member: z/f vanishes there.
            let residual = spec
                .h_at(Complex64::new(e.p, 0.0))
                .map_err(|e| Failure::Other(e.to_string()))?
                .norm();
            table.push(vec![
                "h_at_p".into(),
                fmt_f(e.p),
                "n/a".into(),
                fmt_f(residual),
                "n/a".into(),
            ]);
            (rep, Some(residual))
        }
        _ => {
            return Err(Failure::Config(
                "the extremal command needs an extremal_k or extremal_pole function".into(),
            ))
        }
    };

    let zf = spec.zf_series();
    let f = spec.f_series();
    let data = json!({
        "function": label,
        "spec": to_json(&spec),
        "order": order,
        "report": to_json(&report),
        "pole_residual": pole_residual,
        "zf_coefficients": coeff_json(&zf, order),
        "f_coefficients": coeff_json(&f, order),
    });
    let doc = Document {
        command: "extremal",
        provenance: provenance(&raw, None),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_maximize(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::MaximizeConfig>(path)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    let params =
        ClassParams::new(cfg.lambda, cx(cfg.mu)).map_err(|e| Failure::Config(e.to_string()))?;
    let optimize =
        OptimizeConfig::new(cfg.family.clone(), cfg.starts, cfg.max_iters, cfg.tolerance, seed)
            .map_err(|e| Failure::Config(e.to_string()))?;
    let rep = maximize_h_modulus(&params, cfg.p, &optimize).map_err(|e| match e {
        ExploreError::BadConfig { .. } => Failure::Config(e.to_string()),
        other => Failure::Other(other.to_string()),
    })?;
    // Sharp reference value where the closed form applies; the search
    // result divided by p is a certified-construction lower bound for it.
    let reference = a2_bound(&params, cfg.p).ok();

    let mut table = Table::new(vec!["name", "value"]);
    table.push(vec!["best_value".into(), fmt_f(rep.best_value)]);
    table.push(vec!["best_over_p".into(), fmt_f(rep.best_value / cfg.p)]);
    table.push(vec![
        "a2_bound".into(),
        reference.map_or_else(|| "n/a".into(), fmt_f),
    ]);
    table.push(vec!["argmax_z".into(), fmt_c(rep.argmax_z)]);
    table.push(vec!["best_start".into(), rep.best_start.to_string()]);
    for (i, v) in rep.history.iter().enumerate() {
        table.push(vec![format!("start_{i}_best"), fmt_f(*v)]);
    }

    let data = json!({
        "lambda": params.lambda(),
        "mu": jc(params.mu()),
        "p": cfg.p,
        "family": to_json(&cfg.family),
        "starts": cfg.starts,
        "max_iters": cfg.max_iters,
        "tolerance": cfg.tolerance,
        "seed": seed,
        "best_value": rep.best_value,
        "best_over_p": rep.best_value / cfg.p,
        "a2_bound": reference,
        "argmax_z": jc(rep.argmax_z),
        "argmax_omega": to_json(&rep.argmax_omega),
        "history": rep.history,
        "best_start": rep.best_start,
        "note": "numerical evidence: multistart search gives a lower bound \
                 for the true maximum, not a certificate",
    });
    let doc = Document {
        command: "maximize",
        provenance: provenance(&raw, Some(seed)),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_subordination(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::SubordinationConfig>(path)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    if cfg.points.is_empty() {
        return Err(Failure::Config("points must not be empty".into()));
    }
    if cfg.radii.is_empty() || cfg.radii.iter().any(|r| !(r.is_finite() && 0.0 < *r && *r < 1.0)) {
        return Err(Failure::Config("radii must be a nonempty list inside (0, 1)".into()));
    }
    let mut points = Vec::with_capacity(cfg.points.len());
    for (i, pt) in cfg.points.iter().enumerate() {
        let params = ClassParams::new(pt.lambda, cx(pt.mu))
            .map_err(|e| Failure::Config(format!("points[{i}]: {e}")))?;
        points.push(params);
    }

    let rows = subordination_scan(&points, cfg.samples_per_row, &cfg.radii, seed);

    let mut table = Table::new(vec![
        "lambda",
        "mu",
        "a",
        "tested",
        "supported",
        "refuted",
        "inconclusive",
        "skipped_nonanalytic",
        "first_refutation",
        "error",
    ]);
    for row in &rows {
        table.push(vec![
            fmt_f(row.lambda),
            fmt_c(row.mu),
            row.a.map_or_else(String::new, fmt_f),
            row.tested.to_string(),
            row.supported.to_string(),
            row.refuted.to_string(),
            row.inconclusive.to_string(),
            row.skipped_nonanalytic.to_string(),
            row.first_refutation.as_ref().map_or_else(String::new, |v| kind_of(&to_json(v))),
            row.error.clone().unwrap_or_default(),
        ]);
    }

    let data = json!({
        "note": "conjecture scan: sampled numerical evidence, not a proof",
        "samples_per_row": cfg.samples_per_row,
        "radii": cfg.radii,
        "seed": seed,
        "rows": to_json(&rows),
    });
    let doc = Document {
        command: "subordination",
        provenance: provenance(&raw, Some(seed)),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_sweep(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::SweepConfig>(path)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    if cfg.lambdas.is_empty() || cfg.mus.is_empty() {
        return Err(Failure::Config("lambdas and mus must not be empty".into()));
    }

    let mut options = SweepOptions::new(seed);
    if let Some(p) = cfg.p {
        if !(p.is_finite() && 0.0 < p && p <= 1.0) {
            return Err(Failure::Config(format!("p must lie in (0, 1], got {p}")));
        }
        options.p = p;
    }
    if let Some(m) = cfg.metric {
        options.metric = m;
    }
    if let Some(n) = cfg.mc_samples {
        options.mc_samples = n;
    }
    if let Some(n) = cli.order.or(cfg.order) {
        if n < 4 {
            return Err(Failure::Config(format!("order must be at least 4, got {n}")));
        }
        options.order = n;
    }
    if let Some(g) = &cfg.grid {
        options.grid = g.build().map_err(Failure::Config)?;
    }
    if let Some(n) = cfg.optimizer_starts {
        if n < 1 {
            return Err(Failure::Config("optimizer_starts must be at least 1".into()));
        }
        options.optimizer_starts = n;
    }
    if let Some(n) = cfg.optimizer_iters {
        if n < 1 {
            return Err(Failure::Config("optimizer_iters must be at least 1".into()));
        }
        options.optimizer_iters = n;
    }

    // The cross product may contain parameter points outside the class
    // hypothesis; those become rows with an embedded error, in place.
    let mut valid: Vec<ClassParams> = Vec::new();
    let mut cells: Vec<Result<usize, SweepRow>> = Vec::new();
    for &lambda in &cfg.lambdas {
        for &mu in &cfg.mus {
            match ClassParams::new(lambda, cx(mu)) {
                Ok(params) => {
                    cells.push(Ok(valid.len()));
                    valid.push(params);
                }
                Err(e) => cells.push(Err(SweepRow {
                    lambda,
                    mu: cx(mu),
                    verdict: None,
                    b2_bound: None,
                    l2_bound: None,
                    a2_bound: None,
                    h_max_lower_bound: None,
                    mc_tested: 0,
                    mc_local_refuted: 0,
                    mc_collision_refuted: 0,
                    mc_inconclusive: 0,
                    error: Some(e.to_string()),
                })),
            }
        }
    }
    let computed = sweep(&valid, &options);
    let rows: Vec<SweepRow> = cells
        .into_iter()
        .map(|cell| match cell {
            Ok(i) => computed[i].clone(),
            Err(row) => row,
        })
        .collect();

    let mut table = Table::new(vec![
        "lambda",
        "mu",
        "region",
        "b2_bound",
        "l2_bound",
        "a2_bound",
        "h_max_lower_bound",
        "mc_tested",
        "mc_local_refuted",
        "mc_collision_refuted",
        "mc_inconclusive",
        "error",
    ]);
    for row in &rows {
        table.push(vec![
            fmt_f(row.lambda),
            fmt_c(row.mu),
            row.verdict.as_ref().map_or("", region_label).to_string(),
            row.b2_bound.map_or_else(String::new, fmt_f),
            row.l2_bound.map_or_else(String::new, fmt_f),
            row.a2_bound.map_or_else(String::new, fmt_f),
            row.h_max_lower_bound.map_or_else(String::new, fmt_f),
            row.mc_tested.to_string(),
            row.mc_local_refuted.to_string(),
            row.mc_collision_refuted.to_string(),
            row.mc_inconclusive.to_string(),
            row.error.clone().unwrap_or_default(),
        ]);
    }

    let data = json!({
        "p": options.p,
        "metric": to_json(&options.metric),
        "mc_samples": options.mc_samples,
        "order": options.order,
        "optimizer_starts": options.optimizer_starts,
        "optimizer_iters": options.optimizer_iters,
        "seed": seed,
        "rows": to_json(&rows),
    });
    let doc = Document {
        command: "sweep",
        provenance: provenance(&raw, Some(seed)),
        data,
        table,
    };
    emit(cli, &doc)
}

fn cmd_plotdata(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let (cfg, raw) = load::<config::PlotdataConfig>(path)?;
    let order = cli.order.or(cfg.order).unwrap_or(32);
    if cfg.radii.is_empty() || cfg.radii.iter().any(|r| !(r.is_finite() && 0.0 < *r && *r < 1.0)) {
        return Err(Failure::Config("radii must be a nonempty list inside (0, 1)".into()));
    }
    if cfg.angles == 0 {
        return Err(Failure::Config("angles must be at least 1".into()));
    }
    let (label, spec) = cfg.function.resolve(order).map_err(Failure::Config)?;
    let mu = spec.params().mu();

    // Row order is (radius, angle), row-major; evaluation is parallel but
    // assembly keeps that order.
    let indices: Vec<(usize, usize)> = (0..cfg.radii.len())
        .flat_map(|i| (0..cfg.angles).map(move |j| (i, j)))
        .collect();
    let inf = Complex64::new(f64::INFINITY, f64::INFINITY);
    let points: Vec<(f64, f64, Complex64, Complex64, Complex64)> = indices
        .par_iter()
        .map(|&(i, j)| {
            let r = cfg.radii[i];
            let theta = std::f64::consts::TAU * j as f64 / cfg.angles as f64;
            let z = Complex64::from_polar(r, theta);
            // A pole on the circle shows up as an infinite cell, not an error.
            let f = spec.f_at(z).unwrap_or(inf);
            let u = spec.u_at(z).unwrap_or(inf);
            (r, theta, z, f, u)
        })
        .collect();

    let mut table = Table::new(vec!["r", "theta", "z", "f", "abs_f", "u", "abs_u_minus_mu"]);
    let mut rows = Vec::with_capacity(points.len());
    for (r, theta, z, f, u) in &points {
        table.push(vec![
            fmt_f(*r),
            fmt_f(*theta),
            fmt_c(*z),
            fmt_c(*f),
            fmt_f(f.norm()),
            fmt_c(*u),
            fmt_f((u - mu).norm()),
        ]);
        rows.push(json!({
            "r": r,
            "theta": theta,
            "z": jc(*z),
            "f": jc(*f),
            "abs_f": f.norm(),
            "u": jc(*u),
            "abs_u_minus_mu": (u - mu).norm(),
        }));
    }

    let data = json!({
        "function": label,
        "spec": to_json(&spec),
        "order": order,
        "angles": cfg.angles,
        "radii": cfg.radii,
        "mu": jc(mu),
        "rows": rows,
    });
    let doc = Document {
        command: "plotdata",
        provenance: provenance(&raw, None),
        data,
        table,
    };
    emit(cli, &doc)
}
