use std::fs;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use combwalks::explore::{
    prop3_scan, q1_scan, q2_points, q2_scan, render_reports, render_table, Cell, Format, Manifest, Prop3Params,
    ScanTable,
};
use combwalks::identities::{catalan_zero_check, dp_oracle_suite, prop1_check, prop2_suite, IdentityReport};
use combwalks::{Direction, Engine, Magnitude, Potential, SignFilter, StepSet, SumResult, WalkClass};
use serde_json::json;

use crate::args::{Cli, Compute, DirectionArg, Explore, GlobalOpts, Method, OutputFormat, SignArg, StepArgs, Verify};
use crate::potential::{parse_values, ParsedPotential};

pub enum Outcome {
    Ok,
    Failed,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::Failed => 1,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let engine = Engine::new(cli.global.exclude_single_step);
    match &cli.command {
        crate::args::Command::Verify(v) => verify(&cli.global, &engine, v),
        crate::args::Command::Compute(c) => compute(&cli.global, &engine, c),
        crate::args::Command::Explore(e) => explore(&cli.global, &engine, e),
    }
}

fn format(opts: &GlobalOpts) -> Format {
    match opts.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Text => Format::Text,
    }
}

fn emit(opts: &GlobalOpts, text: &str) -> Result<()> {
    match &opts.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn base_manifest(opts: &GlobalOpts, command: &str) -> Manifest {
    Manifest::new(command).param("exclude_single_step", opts.exclude_single_step)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn verify(opts: &GlobalOpts, engine: &Engine, cmd: &Verify) -> Result<Outcome> {
    let start = Instant::now();
    let (reports, manifest): (Vec<IdentityReport>, Manifest) = match *cmd {
        Verify::Prop1 { n_min, n_max } => (
            (n_min..=n_max).map(|n| prop1_check(engine, n)).collect::<combwalks::Result<_>>()?,
            base_manifest(opts, "verify prop1").param("n_min", n_min).param("n_max", n_max),
        ),
        Verify::Prop2 { m_max } => (prop2_suite(m_max)?, base_manifest(opts, "verify prop2").param("m_max", m_max)),
        Verify::Catalan { m_max } => (
            (1..=m_max).map(|m| catalan_zero_check(engine, m)).collect::<combwalks::Result<_>>()?,
            base_manifest(opts, "verify catalan").param("m_max", m_max),
        ),
        Verify::DpOracle { n_max, kappa_n_max, samples } => (
            dp_oracle_suite(engine, n_max, kappa_n_max, samples, opts.seed)?,
            base_manifest(opts, "verify dp-oracle")
                .param("n_max", n_max)
                .param("kappa_n_max", kappa_n_max)
                .param("samples", samples)
                .seed(opts.seed)
                .note("rational weights p/q, |p| <= 9, 1 <= q <= 9, on steps 2, 4, 6"),
        ),
    };
    let mut manifest = manifest;
    manifest.wall_time_ms = elapsed_ms(start);
    emit(opts, &render_reports(&reports, &manifest, format(opts)))?;
    let failed = reports.iter().filter(|r| r.verdict.is_mismatch()).count();
    if failed > 0 {
        eprintln!("{failed} mismatch(es)");
        return Ok(Outcome::Failed);
    }
    Ok(Outcome::Ok)
}

fn step_set(args: &StepArgs) -> Result<StepSet> {
    match (args.m, args.steps.is_empty()) {
        (Some(m), _) => Ok(StepSet::symmetric(m)),
        (None, false) => Ok(StepSet::new(args.steps.iter().copied())?),
        (None, true) => bail!("give --m or --steps"),
    }
}

fn direction(d: DirectionArg) -> Direction {
    match d {
        DirectionArg::Ascending => Direction::Ascending,
        DirectionArg::Descending => Direction::Descending,
    }
}

fn emit_result(
    opts: &GlobalOpts,
    manifest: Manifest,
    class: Option<&WalkClass>,
    result: &SumResult,
    note: Option<&str>,
) -> Result<()> {
    let text = match format(opts) {
        Format::Json => {
            let mut doc = json!({ "manifest": manifest, "result": result });
            if let Some(c) = class {
                doc["class"] = serde_json::to_value(c)?;
            }
            if let Some(note) = note {
                doc["note"] = json!(note);
            }
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut table =
                ScanTable::new(vec!["value", "exact", "walk_count", "truncated", "L", "W", "last_increment", "note"]);
            let t = result.truncation;
            table.push(vec![
                Cell::from_value(&result.value),
                Cell::Bool(result.exact),
                Cell::Int(result.walk_count.min(i64::MAX as u64) as i64),
                Cell::Bool(result.truncated),
                t.map_or(Cell::Empty, |t| Cell::Int(t.max_steps as i64)),
                t.map_or(Cell::Empty, |t| Cell::Int(t.window as i64)),
                result.last_increment.as_ref().map_or(Cell::Empty, Cell::from_value),
                note.map_or(Cell::Empty, |n| Cell::Text(n.into())),
            ]);
            render_table(&table, &manifest, Format::Csv)
        }
        Format::Text => {
            let mut s = format!("{}\n", result.value);
            s.push_str(&format!("exact={} walks={} truncated={}", result.exact, result.walk_count, result.truncated));
            if let Some(inc) = &result.last_increment {
                s.push_str(&format!(" last_increment={inc}"));
            }
            s.push('\n');
            if let Some(note) = note {
                s.push_str(&format!("note: {note}\n"));
            }
            s
        }
    };
    emit(opts, &text)
}

fn compute(opts: &GlobalOpts, engine: &Engine, cmd: &Compute) -> Result<Outcome> {
    let start = Instant::now();
    match cmd {
        Compute::Sum { n, steps, values, direction: dir, sign, kappa, max_steps, window, abs, method, class } => {
            let class = match class {
                Some(json) => serde_json::from_str::<WalkClass>(json).context("parsing --class")?,
                None => {
                    let Some(n) = *n else { bail!("give --n or --class") };
                    let mut c = WalkClass::new(n, direction(*dir), step_set(steps)?).with_sign_filter(match sign {
                        SignArg::All => SignFilter::All,
                        SignArg::Positive => SignFilter::PositiveOnly,
                        SignArg::Negative => SignFilter::NegativeOnly,
                    });
                    if let Some(k) = kappa {
                        c = c.with_kappa(*k);
                    }
                    if let Some(l) = max_steps {
                        c = c.truncated(*l, *window);
                    }
                    c
                }
            };
            class.validate()?;
            let dp_shape = class.sign_filter != SignFilter::All
                && class.kappa.is_none()
                && class.truncation.is_none()
                && !class.exclude_single_step;
            let use_dp = match method {
                Method::Auto => dp_shape,
                Method::Dp if dp_shape => true,
                Method::Dp => bail!("--method dp needs a one-signed class without kappa or truncation"),
                Method::Brute => false,
            };
            let potential = parse_values(&values.values)?;
            let result = match &potential {
                ParsedPotential::Exact(v) => class_sum(engine, &class, v, *abs, use_dp)?,
                ParsedPotential::Approx(v) => class_sum(engine, &class, v, *abs, use_dp)?,
            };
            let mut manifest = base_manifest(opts, "compute sum")
                .param("method", if use_dp { "dp" } else { "brute" })
                .param("abs", *abs)
                .param("values", values.values.clone());
            manifest.wall_time_ms = elapsed_ms(start);
            let note = (result.walk_count == 0).then_some("empty class");
            emit_result(opts, manifest, Some(&class), &result, note)?;
        }
        Compute::Poly { n, steps } => {
            let steps = step_set(steps)?;
            let p = engine.sum_polynomial(*n, &steps);
            let mut manifest =
                base_manifest(opts, "compute poly").param("n", *n).param("steps", steps.iter().collect::<Vec<_>>());
            manifest.wall_time_ms = elapsed_ms(start);
            let text = match format(opts) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&json!({ "manifest": manifest, "polynomial": p }))?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut table = ScanTable::new(vec!["exponents", "coeff"]);
                    for (m, c) in p.terms() {
                        table.push(vec![Cell::Text(m.to_string()), Cell::Exact(c.clone())]);
                    }
                    render_table(&table, &manifest, Format::Csv)
                }
                Format::Text => format!("{p}\n"),
            };
            emit(opts, &text)?;
        }
        Compute::Bkappa { n, r, s, kappa, abs } => {
            let result =
                if *abs { engine.kappa_abs_sum(*n, *r, *s, *kappa)? } else { engine.kappa_sum(*n, *r, *s, *kappa)? };
            let mut manifest = base_manifest(opts, "compute bkappa")
                .param("n", *n)
                .param("R", *r)
                .param("S", *s)
                .param("kappa", *kappa)
                .param("abs", *abs);
            manifest.wall_time_ms = elapsed_ms(start);
            let note = (result.walk_count == 0).then_some("empty class");
            emit_result(opts, manifest, None, &result, note)?;
        }
        Compute::Beta { n, steps, values, direction: dir, max_steps, window } => {
            let steps = step_set(steps)?;
            let result = match parse_values(&values.values)? {
                ParsedPotential::Exact(v) => {
                    engine.beta_truncated(*n, &steps, &v, direction(*dir), *max_steps, *window)?
                }
                ParsedPotential::Approx(v) => {
                    engine.beta_truncated(*n, &steps, &v, direction(*dir), *max_steps, *window)?
                }
            };
            let mut manifest = base_manifest(opts, "compute beta")
                .param("n", *n)
                .param("steps", steps.iter().collect::<Vec<_>>())
                .param("values", values.values.clone());
            manifest.wall_time_ms = elapsed_ms(start);
            emit_result(opts, manifest, None, &result, None)?;
        }
    }
    Ok(Outcome::Ok)
}

fn class_sum<T: Magnitude>(
    engine: &Engine,
    class: &WalkClass,
    v: &Potential<T>,
    abs: bool,
    use_dp: bool,
) -> Result<SumResult> {
    if !use_dp {
        return Ok(if abs { engine.abs_sum_bruteforce(class, v)? } else { engine.sum_bruteforce(class, v)? });
    }
    // one-signed classes: positive ascending, negative descending; anything else is empty
    let res = match (class.sign_filter, class.direction) {
        (SignFilter::PositiveOnly, Direction::Ascending) if abs => engine.abs_sum_positive(class.n, &class.steps, v),
        (SignFilter::PositiveOnly, Direction::Ascending) => engine.sum_positive_dp(class.n, &class.steps, v),
        (SignFilter::NegativeOnly, Direction::Descending) if abs => engine.abs_sum_negative(class.n, &class.steps, v),
        (SignFilter::NegativeOnly, Direction::Descending) => engine.sum_negative_dp(class.n, &class.steps, v),
        _ => SumResult::empty(),
    };
    Ok(res)
}

fn finish_table(opts: &GlobalOpts, table: &ScanTable, mut manifest: Manifest, start: Instant) -> Result<Outcome> {
    manifest.wall_time_ms = elapsed_ms(start);
    emit(opts, &render_table(table, &manifest, format(opts)))?;
    if table.failures.is_empty() {
        return Ok(Outcome::Ok);
    }
    for f in &table.failures {
        eprintln!("{f}");
    }
    Ok(Outcome::Failed)
}

fn explore(opts: &GlobalOpts, engine: &Engine, cmd: &Explore) -> Result<Outcome> {
    let start = Instant::now();
    match cmd {
        Explore::Q1 { m, n_min, n_max, full } => {
            let table = q1_scan(engine, *m, *n_min..=*n_max, *full)?;
            let manifest = base_manifest(opts, "explore q1")
                .param("m", *m)
                .param("n_min", *n_min)
                .param("n_max", *n_max)
                .param("full", *full)
                .note("normalized = coefficient * 4^(n-1) * ((n-1)!)^2, a presentation scale")
                .note("terms ordered lexicographically by exponent vector over V(2), V(4), ...");
            finish_table(opts, &table, manifest, start)
        }
        Explore::Q2 { m, n_min, n_max, samples, values } => {
            let mut manifest =
                base_manifest(opts, "explore q2").param("m", *m).param("n_min", *n_min).param("n_max", *n_max);
            let table = if values.values.is_empty() {
                manifest = manifest
                    .param("samples", *samples)
                    .seed(opts.seed)
                    .note("z_k = V(2k), k = 1..floor(m/2), uniform by area on 0.5 <= |z_k| <= 2")
                    .note("ChaCha8 stream seeded by --seed; samples drawn in order, radius then angle per coordinate")
                    .note("float arithmetic; ratio = sum|h| / |sum h| over positive walks");
                q2_scan(engine, *m, *n_min..=*n_max, *samples, opts.seed)?
            } else {
                manifest = manifest.param("values", values.values.clone());
                let z = parse_values(&values.values)?.to_approx();
                fixed_q2_table(engine, *m, *n_min, *n_max, &z)
            };
            finish_table(opts, &table, manifest, start)
        }
        Explore::Q3 { m_min, m_max, oracle_max } => {
            let table = combwalks::explore::q3_scan(engine, *m_min..=*m_max, *oracle_max)?;
            let manifest = base_manifest(opts, "explore q3")
                .param("m_min", *m_min)
                .param("m_max", *m_max)
                .param("oracle_max", *oracle_max)
                .note("steps {-2, +4}, kappa = 3, n = 2m + 1; growth = (m! * abs_sum)^(1/m)");
            finish_table(opts, &table, manifest, start)
        }
        Explore::Prop3 { m, n_min, n_max, values, max_steps, window, bound } => {
            let max_steps = max_steps.unwrap_or(*n_max as usize + 8);
            let params = Prop3Params { m: *m, n_range: *n_min..=*n_max, max_steps, window: *window, bound: *bound };
            let table = match parse_values(&values.values)? {
                ParsedPotential::Exact(v) => prop3_scan(engine, &params, &v)?,
                ParsedPotential::Approx(v) => prop3_scan(engine, &params, &v)?,
            };
            let mut manifest = base_manifest(opts, "explore prop3")
                .param("m", *m)
                .param("n_min", *n_min)
                .param("n_max", *n_max)
                .param("values", values.values.clone())
                .param("L", max_steps)
                .param("W", *window)
                .note("ratio_plus = beta_plus / sum over positive ascending walks")
                .note("ratio_minus = beta_minus / sum over negative descending walks")
                .note("diag = |ratio - 1| * n / ln n");
            if let Some(b) = bound {
                manifest = manifest.param("bound", *b);
            }
            finish_table(opts, &table, manifest, start)
        }
    }
}

fn fixed_q2_table(
    engine: &Engine,
    m: u32,
    n_min: u32,
    n_max: u32,
    z: &Potential<combwalks::ApproxComplex>,
) -> ScanTable {
    let mut table = ScanTable::new(vec!["sample", "n", "abs_sum", "signed_sum_abs", "ratio", "running_max", "flag"]);
    for p in q2_points(engine, m, n_min..=n_max, z) {
        table.push(vec![
            Cell::Int(0),
            Cell::Int(p.n as i64),
            Cell::Float(p.abs_sum),
            Cell::Float(p.signed_abs),
            Cell::opt_float(p.ratio),
            Cell::opt_float(p.running_max),
            p.flag.map_or(Cell::Empty, |f| Cell::Text(f.into())),
        ]);
    }
    table
}
