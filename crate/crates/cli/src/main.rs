//! `levy`: batch front end for the levyspec library.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 verification failure,
//! 4 digit budget exceeded.

mod artifact;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use artifact::Sink;
use levyspec::construction::{
    default_prop1_schedule, minimal_l1, prop3_ones, CantorParams, Exponents, PointFile, PointParams, DEFAULT_N0,
};
use levyspec::diophantine::{delta_estimate_with, DeltaOptions};
use levyspec::exact::parse_decimal;
use levyspec::levy::{eval_exact, eval_translated, eval_translated_stream, haar_coeff_closed, haar_coeff_numeric_with, HaarNorm, LevyParams};
use levyspec::measure::{cylinder_count, forbidden_positions, free_positions, local_dim_series, log_cylinder_count, mu_cylinder};
use levyspec::spectrum::{
    dichotomy_classify, empirical_bivariate, theoretical_report, BinRow, EmpiricalConfig, SpectrumQuery, YDescriptor,
};
use levyspec::symbolic::{decode_hex, DigitStream, StreamJson, Word};
use levyspec::yspec::YSpec;

const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "levy", version, about = "Bivariate multifractal analysis of Lévy functions")]
struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sample and grid loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certified value of L_α(x − y).
    Eval(EvalArgs),
    /// Leading digits of y.
    Digits(DigitsArgs),
    /// Finite-depth estimate of Δ^b(y).
    Delta(DeltaArgs),
    /// Translation parameters with a prescribed exponent.
    BuildY(BuildYArgs),
    #[command(subcommand)]
    Cantor(CantorCmd),
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Haar coefficients against the closed form (CSV).
    Haar(HaarArgs),
    /// Run the acceptance criteria.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum CantorCmd {
    /// Sample a point and write a point file.
    Sample(SampleArgs),
    /// Re-check a point file.
    Verify(VerifyArgs),
    /// Cylinder counts and masses at depth n.
    Count(CountArgs),
    /// Local dimension checkpoints (CSV).
    Localdim(LocaldimArgs),
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Closed-form value and region of (H₁, H₂).
    Theoretical(TheoreticalArgs),
    /// Binned estimate from sampled points (CSV).
    Empirical(EmpiricalArgs),
}

fn decimal(s: &str) -> Result<String, String> {
    parse_decimal(s).map(|_| s.trim().to_string()).map_err(|e| e.to_string())
}

fn yspec(s: &str) -> Result<YSpec, String> {
    YSpec::parse(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Decimal or p/q, read exactly.
    #[arg(long, value_parser = decimal)]
    x: String,
    /// Decimal, p/q, or a y-spec.
    #[arg(long)]
    y: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct DigitsArgs {
    #[arg(long, value_parser = yspec)]
    y_spec: YSpec,
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long, value_parser = yspec)]
    y_spec: YSpec,
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long, default_value_t = 100_000)]
    depth: u64,
    /// First position of the sup (default ⌈√depth⌉).
    #[arg(long)]
    burn_in: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Prop3,
    Prop1,
}

#[derive(Args)]
struct BuildYArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    eta: f64,
    /// Seed l_1 of the recurrence (prop3) or first schedule entry (prop1).
    #[arg(long)]
    l1: Option<u64>,
    /// Full prop1 schedule, comma separated; overrides --l1.
    #[arg(long, value_delimiter = ',')]
    schedule: Vec<u64>,
    #[arg(long, default_value_t = 1000)]
    depth: u64,
    #[arg(long, default_value_t = 2)]
    base: u32,
}

#[derive(Args)]
struct ExpArgs {
    #[arg(long, value_parser = decimal)]
    alpha1: String,
    #[arg(long, value_parser = decimal)]
    alpha2: String,
    #[arg(long, value_parser = decimal)]
    h1: String,
    #[arg(long, value_parser = decimal)]
    h2: String,
}

impl ExpArgs {
    fn config(&self) -> Value {
        json!({ "alpha1": self.alpha1, "alpha2": self.alpha2, "h1": self.h1, "h2": self.h2 })
    }
}

#[derive(Args)]
struct SetArgs {
    #[command(flatten)]
    exps: ExpArgs,
    #[arg(long, value_parser = yspec)]
    y_spec: YSpec,
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long, default_value_t = DEFAULT_N0 as u64)]
    n0: u64,
}

impl SetArgs {
    fn config(&self, levels: usize) -> Value {
        let mut c = self.exps.config();
        c["y_spec"] = self.y_spec.to_string().into();
        c["base"] = self.base.into();
        c["n0"] = self.n0.into();
        c["levels"] = levels.into();
        c
    }

    fn params(&self, levels: usize) -> Result<CantorParams, Fail> {
        let e = Exponents::parse(&self.exps.alpha1, &self.exps.alpha2, &self.exps.h1, &self.exps.h2)?;
        let theta = digits_of(&self.y_spec, self.base)?;
        Ok(CantorParams::new(e, theta, self.n0 as u128, levels, u128::MAX / 4)?)
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Fill ≠θ positions with (θ_j + 1) mod b instead of random digits.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    point_file: PathBuf,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Depth of the cylinders; at most n_K.
    #[arg(long)]
    n: u64,
    /// Mass of this cylinder as well.
    #[arg(long)]
    prefix_hex: Option<String>,
}

#[derive(Args)]
struct LocaldimArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, default_value_t = 14)]
    levels: usize,
}

#[derive(Args)]
struct TheoreticalArgs {
    #[command(flatten)]
    exps: ExpArgs,
    #[arg(long, value_parser = yspec)]
    y_spec: YSpec,
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Also scan the digits of y for the dichotomy conditions up to this depth.
    #[arg(long)]
    dichotomy_depth: Option<u64>,
}

#[derive(Args)]
struct EmpiricalArgs {
    #[arg(long)]
    alpha1: f64,
    #[arg(long)]
    alpha2: f64,
    #[arg(long, value_parser = yspec)]
    y_spec: YSpec,
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// Bin width in both exponents.
    #[arg(long, default_value_t = 0.25)]
    grid: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 1 << 14)]
    depth: u64,
    /// Depth of the counted cells (default: --depth).
    #[arg(long)]
    cell_depth: Option<u64>,
    #[arg(long)]
    seed: u64,
    /// Cantor target `h1,h2`; repeatable.
    #[arg(long, value_parser = pair)]
    cantor: Vec<(f64, f64)>,
    #[arg(long, default_value_t = 0.0)]
    cantor_fraction: f64,
    #[arg(long, default_value_t = DEFAULT_N0 as u64)]
    n0: u64,
}

fn pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected h1,h2")?;
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((f(a)?, f(b)?))
}

#[derive(Args)]
struct HaarArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 12)]
    j_max: u32,
    #[arg(long, default_value_t = 0)]
    k: u64,
    /// Terms beyond l = j in the full numeric sum.
    #[arg(long, default_value_t = 40)]
    extra_terms: u32,
}

#[derive(Args)]
struct SelftestArgs {
    /// Criterion ids (default: all).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u32>,
}

enum Fail {
    Usage(String),
    Domain(String),
    Verify(String),
    Resource(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Usage(_) => 1,
            Fail::Domain(_) => 2,
            Fail::Verify(_) => 3,
            Fail::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Fail::Usage(m) | Fail::Domain(m) | Fail::Verify(m) | Fail::Resource(m) => m,
        }
    }
}

impl From<levyspec::Error> for Fail {
    fn from(e: levyspec::Error) -> Self {
        match e {
            levyspec::Error::Resource { .. } => Fail::Resource(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Usage(format!("i/o: {e}"))
    }
}

fn budget() -> Result<u64, Fail> {
    match std::env::var("LEVYSPEC_DIGIT_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| Fail::Usage(format!("LEVYSPEC_DIGIT_BUDGET: not an integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn within_budget(what: &str, digits: u128) -> Result<u64, Fail> {
    let b = budget()?;
    if digits > b as u128 {
        return Err(Fail::Resource(format!(
            "{what} needs {digits} digits, over the budget of {b} (set LEVYSPEC_DIGIT_BUDGET)"
        )));
    }
    Ok(digits as u64)
}

fn digits_of(y: &YSpec, base: u32) -> Result<DigitStream, Fail> {
    y.stream(base)?.ok_or_else(|| Fail::Domain("y-spec \"ae\" names no digits; use random:<seed>".into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("levy: {e}");
            return ExitCode::from(1);
        }
    }
    let sink = Sink::new(cli.out);
    match run(cli.cmd, &sink) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("levy: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Cmd, sink: &Sink) -> Result<(), Fail> {
    match cmd {
        Cmd::Eval(a) => eval(a, sink),
        Cmd::Digits(a) => digits(a, sink),
        Cmd::Delta(a) => delta(a, sink),
        Cmd::BuildY(a) => build_y(a, sink),
        Cmd::Cantor(CantorCmd::Sample(a)) => cantor_sample(a, sink),
        Cmd::Cantor(CantorCmd::Verify(a)) => cantor_verify(a, sink),
        Cmd::Cantor(CantorCmd::Count(a)) => cantor_count(a, sink),
        Cmd::Cantor(CantorCmd::Localdim(a)) => cantor_localdim(a, sink),
        Cmd::Spectrum(SpectrumCmd::Theoretical(a)) => theoretical(a, sink),
        Cmd::Spectrum(SpectrumCmd::Empirical(a)) => empirical(a, sink),
        Cmd::Haar(a) => haar(a, sink),
        Cmd::Selftest(a) => selftest(a, sink),
    }
}

fn eval(a: EvalArgs, sink: &Sink) -> Result<(), Fail> {
    let p = LevyParams::new(a.alpha, a.base)?;
    let x = parse_decimal(&a.x)?;
    let r = match &a.y {
        None => eval_exact(&p, &x, a.tol)?,
        Some(y) => match parse_decimal(y) {
            Ok(yq) => eval_translated(&p, &x, &yq, a.tol)?,
            Err(_) => {
                let parsed = YSpec::parse(y).map_err(|e| Fail::Usage(format!("--y: {e}")))?;
                let s = digits_of(&parsed, a.base)?;
                within_budget("eval", p.terms_for(a.tol)? as u128 + 64)?;
                eval_translated_stream(&p, &x, &s, a.tol)?
            }
        },
    };
    let config = json!({ "alpha": a.alpha, "base": a.base, "x": a.x, "y": a.y, "tol": a.tol });
    Ok(sink.json("eval", config, &r)?)
}

fn digits(a: DigitsArgs, sink: &Sink) -> Result<(), Fail> {
    let n = within_budget("digits", a.n as u128)? as usize;
    let s = digits_of(&a.y_spec, a.base)?;
    let config = json!({ "y_spec": a.y_spec.to_string(), "base": a.base, "n": a.n, "format": a.format });
    match a.format {
        Format::Json => Ok(sink.json("digits", config, &StreamJson::from_stream(&s, n))?),
        Format::Csv => {
            let rows: Vec<String> = s.prefix(n).iter().enumerate().map(|(i, d)| format!("{},{d}", i + 1)).collect();
            Ok(sink.csv("digits", config, "index,digit", &rows)?)
        }
    }
}

fn delta(a: DeltaArgs, sink: &Sink) -> Result<(), Fail> {
    within_budget("delta", a.depth as u128)?;
    let s = digits_of(&a.y_spec, a.base)?;
    let opts = DeltaOptions { burn_in: a.burn_in, ..Default::default() };
    let est = delta_estimate_with(&s, a.depth, opts)?;
    let config = json!({ "y_spec": a.y_spec.to_string(), "base": a.base, "depth": a.depth, "burn_in": a.burn_in });
    Ok(sink.json("delta", config, &est)?)
}

fn build_y(a: BuildYArgs, sink: &Sink) -> Result<(), Fail> {
    let depth = within_budget("build-y", a.depth as u128)?;
    let (ys, ones) = match a.mode {
        Mode::Prop3 => {
            let l1 = match a.l1 {
                Some(l) => l,
                None => minimal_l1(a.eta)?,
            };
            (YSpec::Prop3 { eta: a.eta, l1 }, Some(prop3_ones(a.eta, l1, depth)))
        }
        Mode::Prop1 => {
            let schedule = if a.schedule.is_empty() {
                default_prop1_schedule(a.eta, &[a.l1.unwrap_or(8)])?
            } else {
                a.schedule.clone()
            };
            (YSpec::Prop1 { eta: a.eta, schedule }, None)
        }
    };
    let s = digits_of(&ys, a.base)?;
    let est = delta_estimate_with(&s, depth, DeltaOptions::default())?;
    #[derive(Serialize)]
    struct Out {
        y_spec: String,
        stream: StreamJson,
        #[serde(skip_serializing_if = "Option::is_none")]
        ones: Option<Vec<u64>>,
        delta: levyspec::diophantine::ExponentEstimate,
    }
    let out = Out { y_spec: ys.to_string(), stream: StreamJson::from_stream(&s, depth as usize), ones, delta: est };
    let config = json!({
        "mode": a.mode, "eta": a.eta, "l1": a.l1, "schedule": a.schedule, "depth": a.depth, "base": a.base,
    });
    Ok(sink.json("build-y", config, &out)?)
}

fn cantor_sample(a: SampleArgs, sink: &Sink) -> Result<(), Fail> {
    let e = &a.set.exps;
    let params = PointParams {
        alpha1: e.alpha1.clone(),
        alpha2: e.alpha2.clone(),
        h1: e.h1.clone(),
        h2: e.h2.clone(),
        y_spec: a.set.y_spec.to_string(),
        base: a.set.base,
        n0: a.set.n0,
        levels: a.levels,
        deterministic: a.deterministic,
    };
    let pf = PointFile::sample(params, a.seed, budget()?)?;
    let mut s = pf.to_json_string();
    s.push('\n');
    sink.raw(&s)?;
    if !pf.reported_pass() {
        return Err(Fail::Verify("sampled point failed its own verification".into()));
    }
    Ok(())
}

fn cantor_verify(a: VerifyArgs, sink: &Sink) -> Result<(), Fail> {
    let text = std::fs::read_to_string(&a.point_file)
        .map_err(|e| Fail::Usage(format!("{}: {e}", a.point_file.display())))?;
    let pf = PointFile::from_json_str(&text)?;
    let c = pf.check(budget()?)?;
    let config = json!({ "point_file": a.point_file.display().to_string(), "params": pf.params, "seed": pf.seed });
    sink.json("cantor verify", config, &c)?;
    match &c.report {
        None => Err(Fail::Verify(format!("prefix has {} digits, verification needs {}", c.digits_present, c.digits_needed))),
        Some(r) if !r.pass => Err(Fail::Verify("point violates the membership conditions".into())),
        Some(_) if !c.stored_report_matches => Err(Fail::Verify("stored report differs from the recomputed one".into())),
        Some(_) => Ok(()),
    }
}

fn cantor_count(a: CountArgs, sink: &Sink) -> Result<(), Fail> {
    let p = a.set.params(a.levels)?;
    let n = a.n as u128;
    if n > p.last_n() {
        return Err(Fail::Domain(format!("--n {n} is beyond n_K = {}", p.last_n())));
    }
    #[derive(Serialize)]
    struct Out {
        n: u128,
        free: u128,
        forbidden: u128,
        count: String,
        log_b_count: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        cylinder: Option<levyspec::measure::CylinderMass>,
    }
    let cylinder = match &a.prefix_hex {
        Some(h) => Some(mu_cylinder(&p, &Word::new(p.base, decode_hex(p.base, h)?)?)?),
        None => None,
    };
    let out = Out {
        n,
        free: free_positions(&p, n),
        forbidden: forbidden_positions(&p, n),
        count: cylinder_count(&p, n)?.to_string(),
        log_b_count: log_cylinder_count(&p, n),
        cylinder,
    };
    let mut config = a.set.config(a.levels);
    config["n"] = a.n.into();
    config["prefix_hex"] = a.prefix_hex.clone().into();
    Ok(sink.json("cantor count", config, &out)?)
}

fn cantor_localdim(a: LocaldimArgs, sink: &Sink) -> Result<(), Fail> {
    let p = a.set.params(a.levels)?;
    let series = local_dim_series(&p);
    let mut config = a.set.config(a.levels);
    config["target_min"] = series.target_min.into();
    Ok(sink.csv(
        "cantor localdim",
        config,
        "k,n_checkpoint,u_n,ratio,target,abs_error",
        &series.to_csv_rows(),
    )?)
}

fn theoretical(a: TheoreticalArgs, sink: &Sink) -> Result<(), Fail> {
    let desc = YDescriptor::from_yspec(&a.y_spec, a.base)?;
    let e = &a.exps;
    let q = SpectrumQuery::parse(&e.h1, &e.h2, &e.alpha1, &e.alpha2, desc)?;
    let report = theoretical_report(&q);
    let mut body = serde_json::to_value(&report).expect("serializable");
    body["y"] = serde_json::to_value(&q.y).expect("serializable");
    if let Some(depth) = a.dichotomy_depth {
        within_budget("dichotomy scan", depth as u128)?;
        let theta = digits_of(&a.y_spec, a.base)?;
        body["dichotomy"] = serde_json::to_value(dichotomy_classify(&theta, &q, depth)?).expect("serializable");
    }
    let mut config = e.config();
    config["y_spec"] = a.y_spec.to_string().into();
    config["base"] = a.base.into();
    config["dichotomy_depth"] = a.dichotomy_depth.into();
    Ok(sink.json("spectrum theoretical", config, &body)?)
}

fn empirical(a: EmpiricalArgs, sink: &Sink) -> Result<(), Fail> {
    within_budget("spectrum empirical (per sample)", a.depth as u128)?;
    let y = digits_of(&a.y_spec, a.base)?;
    let desc = YDescriptor::from_yspec(&a.y_spec, a.base)?;
    let mut cfg = EmpiricalConfig::new(a.base, a.alpha1, a.alpha2, y, desc, a.seed);
    cfg.depth = a.depth;
    cfg.cell_depth = a.cell_depth.unwrap_or(a.depth);
    cfg.samples = a.samples;
    cfg.cantor = a.cantor.clone();
    cfg.cantor_fraction = a.cantor_fraction;
    cfg.n0 = a.n0 as u128;
    cfg.bin_width = a.grid;
    let rows = empirical_bivariate(&cfg)?;
    let config = json!({
        "alpha1": a.alpha1, "alpha2": a.alpha2, "y_spec": a.y_spec.to_string(), "base": a.base,
        "grid": a.grid, "samples": a.samples, "depth": a.depth, "cell_depth": cfg.cell_depth,
        "seed": a.seed, "cantor": a.cantor, "cantor_fraction": a.cantor_fraction, "n0": a.n0,
    });
    let lines: Vec<String> = rows.iter().map(BinRow::to_csv).collect();
    Ok(sink.csv("spectrum empirical", config, BinRow::csv_header(), &lines)?)
}

fn haar(a: HaarArgs, sink: &Sink) -> Result<(), Fail> {
    let mut rows = vec![];
    for j in 0..=a.j_max {
        let closed = haar_coeff_closed(a.alpha, j, j, 2)?;
        let partial = haar_coeff_numeric_with(a.alpha, j, a.k, 0..=j, HaarNorm::L2)?;
        let full = haar_coeff_numeric_with(a.alpha, j, a.k, 0..=j + a.extra_terms, HaarNorm::L2)?;
        let scaled = partial * 2f64.powi(j as i32) / closed;
        rows.push(format!("{j},{},{closed:.16e},{partial:.16e},{full:.16e},{scaled:.16e}", a.k));
    }
    let config = json!({ "alpha": a.alpha, "j_max": a.j_max, "k": a.k, "extra_terms": a.extra_terms });
    Ok(sink.csv("haar", config, "j,k,closed,numeric_partial,numeric_full,partial_times_2j_over_closed", &rows)?)
}

fn selftest(a: SelftestArgs, sink: &Sink) -> Result<(), Fail> {
    if let Some(bad) = a.criteria.iter().find(|&&i| !levyspec_acceptance::CRITERIA.iter().any(|c| c.id == i)) {
        return Err(Fail::Usage(format!("no criterion {bad}")));
    }
    let out = levyspec_acceptance::run(&a.criteria, |o| eprintln!("{}", o.line()));
    let failed = out.iter().filter(|o| !o.pass).count();
    let results: Vec<Value> = out
        .iter()
        .map(|o| json!({ "id": o.id, "name": o.name, "pass": o.pass, "detail": o.detail, "seconds": o.seconds }))
        .collect();
    let body = json!({ "criteria": results, "passed": out.len() - failed, "failed": failed });
    sink.json("selftest", json!({ "criteria": a.criteria }), &body)?;
    if failed > 0 {
        return Err(Fail::Verify(format!("{failed} criteria failed")));
    }
    Ok(())
}
