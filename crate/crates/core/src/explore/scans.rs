use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::table::{complex17, Cell, ScanTable};
use crate::error::{Error, Result};
use crate::numerics::{ApproxComplex, ExactRational};
use crate::sampling;
use crate::sums::{Engine, Magnitude, SumValue};
use crate::walk::{enumerate_walks, h1, Direction, Potential, StepSet, WalkClass};

/// Denominators below this magnitude are treated as cancelled.
pub const NEAR_CANCELLATION: f64 = 1e-300;

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// Positive-walk polynomials over `F_m` with their coefficients rescaled by
/// `4^{n-1} ((n-1)!)^2`.
pub fn q1_scan(engine: &Engine, m: u32, n_range: RangeInclusive<u32>, full: bool) -> Result<ScanTable> {
    if m < 2 {
        return Err(Error::ParameterRange("m must be at least 2".into()));
    }
    if *n_range.start() < 1 {
        return Err(Error::ParameterRange("n must be positive".into()));
    }
    let steps = StepSet::positive_up_to(m);
    let rows: Vec<Vec<Cell>> = n_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let p = engine.sum_polynomial(n, &steps);
            let f = factorial(n - 1);
            let scale = ExactRational::from(num_traits::pow(BigInt::from(4), (n - 1) as usize) * &f * &f);
            let normalized: Vec<ExactRational> = p.terms().map(|(_, c)| c * &scale).collect();
            let homogeneous = p.terms().all(|(mono, c)| mono.weighted_degree() == n as u64 && c.is_positive());
            let list = normalized.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
            let min = normalized.iter().min().cloned();
            let max = normalized.iter().max().cloned();
            vec![
                Cell::Int(m as i64),
                Cell::Int(n as i64),
                Cell::Int(p.len() as i64),
                Cell::Bool(homogeneous),
                min.map_or(Cell::Empty, Cell::Exact),
                max.map_or(Cell::Empty, Cell::Exact),
                Cell::Text(list),
                if full { Cell::Text(p.to_string()) } else { Cell::Empty },
            ]
        })
        .collect();
    let mut table = ScanTable::new(vec![
        "m",
        "n",
        "terms",
        "weighted_homogeneous",
        "normalized_min",
        "normalized_max",
        "normalized",
        "polynomial",
    ]);
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

/// One `(z, n)` evaluation of `sum |h| / |sum h|` over `X_n^+(F_m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Q2Point {
    pub n: u32,
    pub abs_sum: f64,
    pub signed_abs: f64,
    pub ratio: Option<f64>,
    pub running_max: Option<f64>,
    pub flag: Option<&'static str>,
}

/// Ratios for a fixed potential over `n_range`, with the running maximum in `n`.
pub fn q2_points(engine: &Engine, m: u32, n_range: RangeInclusive<u32>, z: &Potential<ApproxComplex>) -> Vec<Q2Point> {
    let steps = StepSet::positive_up_to(m);
    let mut running: Option<f64> = None;
    n_range
        .map(|n| {
            let abs_sum = engine.abs_sum_positive(n, &steps, z).value.as_approx().expect("float").re;
            let signed_abs = engine.sum_positive_dp(n, &steps, z).value.as_approx().expect("float").norm();
            let (ratio, flag) = if signed_abs < NEAR_CANCELLATION {
                (None, Some("near-cancellation"))
            } else {
                (Some(abs_sum / signed_abs), None)
            };
            if let Some(r) = ratio {
                running = Some(running.map_or(r, |m| m.max(r)));
            }
            Q2Point { n, abs_sum, signed_abs, ratio, running_max: running, flag }
        })
        .collect()
}

/// Complex potentials `z_k = V(2k)`, `k = 1..floor(m/2)`, drawn in sample order
/// from one seeded stream.
pub fn q2_sample_points(m: u32, samples: usize, seed: u64) -> Vec<Potential<ApproxComplex>> {
    let mut rng = sampling::seeded(seed);
    (0..samples)
        .map(|_| {
            Potential::new((1..=(m / 2) as i64).map(|k| (2 * k, sampling::annulus_point(&mut rng))))
                .expect("positive even steps")
        })
        .collect()
}

pub fn q2_scan(engine: &Engine, m: u32, n_range: RangeInclusive<u32>, samples: usize, seed: u64) -> Result<ScanTable> {
    if samples < 1 {
        return Err(Error::ParameterRange("samples must be at least 1".into()));
    }
    if m < 2 || *n_range.start() < 1 {
        return Err(Error::ParameterRange("need m >= 2 and n >= 1".into()));
    }
    let potentials = q2_sample_points(m, samples, seed);
    let per_sample: Vec<(String, Vec<Q2Point>)> = potentials
        .par_iter()
        .map(|z| {
            let coords = z.iter().map(|(_, v)| complex17(*v)).collect::<Vec<_>>().join(";");
            (coords, q2_points(engine, m, n_range.clone(), z))
        })
        .collect();
    let mut table =
        ScanTable::new(vec!["sample", "n", "z", "abs_sum", "signed_sum_abs", "ratio", "running_max", "flag"]);
    for (sample, (coords, points)) in per_sample.into_iter().enumerate() {
        for p in points {
            table.push(vec![
                Cell::Int(sample as i64),
                Cell::Int(p.n as i64),
                Cell::Text(coords.clone()),
                Cell::Float(p.abs_sum),
                Cell::Float(p.signed_abs),
                Cell::opt_float(p.ratio),
                Cell::opt_float(p.running_max),
                p.flag.map_or(Cell::Empty, |f| Cell::Text(f.into())),
            ]);
        }
    }
    Ok(table)
}

/// `B_3(2m + 1)` over `{-2, +4}`, its absolute counterpart, and the scaled
/// growth diagnostics. Rows with `m <= oracle_max` are re-derived by
/// enumeration.
pub fn q3_scan(engine: &Engine, m_range: RangeInclusive<u32>, oracle_max: u32) -> Result<ScanTable> {
    if *m_range.start() < 1 {
        return Err(Error::ParameterRange("m must be at least 1".into()));
    }
    let rows: Vec<(Vec<Cell>, Option<String>)> = m_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|m| -> Result<_> {
            let n = 2 * m + 1;
            let signed = engine.kappa_sum(n, 1, 2, 3)?;
            let abs = engine.kappa_abs_sum(n, 1, 2, 3)?;
            let b3 = signed.value.as_exact().cloned().expect("exact");
            let abs_sum = abs.value.as_exact().cloned().expect("exact");
            let fact = ExactRational::from(factorial(m));
            let scaled_b3 = &fact * &b3.abs();
            let scaled_abs = &fact * &abs_sum;
            let growth = (scaled_abs.ln_abs() / m as f64).exp();
            let (oracle, failure) = if m <= oracle_max {
                let class = WalkClass::kappa_class(n, 1, 2, 3)?.excluding_single_step(engine.exclude_single_step);
                let walks = enumerate_walks(&class)?;
                let weights = walks.iter().map(|w| h1(w, n, Direction::Ascending)).collect::<Result<Vec<_>>>()?;
                let brute: ExactRational = weights.iter().cloned().sum();
                let brute_abs: ExactRational = weights.iter().map(ExactRational::abs).sum();
                if brute == b3 && brute_abs == abs_sum && walks.len() as u64 == signed.walk_count {
                    (Cell::Text("match".into()), None)
                } else {
                    (Cell::Text("MISMATCH".into()), Some(format!("q3 m={m}: enumeration disagrees")))
                }
            } else {
                (Cell::Empty, None)
            };
            Ok((
                vec![
                    Cell::Int(m as i64),
                    Cell::Int(n as i64),
                    Cell::Int(signed.walk_count as i64),
                    Cell::Exact(b3),
                    Cell::Exact(abs_sum),
                    Cell::Float(scaled_b3.to_f64()),
                    Cell::Float(scaled_abs.to_f64()),
                    Cell::Float(growth),
                    oracle,
                ],
                failure,
            ))
        })
        .collect::<Result<_>>()?;
    let mut table =
        ScanTable::new(vec!["m", "n", "walks", "b3", "abs_sum", "mfact_abs_b3", "mfact_abs_sum", "growth", "oracle"]);
    for (cells, failure) in rows {
        table.push(cells);
        table.failures.extend(failure);
    }
    Ok(table)
}

#[derive(Clone, Debug)]
pub struct Prop3Params {
    pub m: u32,
    pub n_range: RangeInclusive<u32>,
    pub max_steps: usize,
    pub window: u32,
    /// Upper bound on `|ratio - 1| n / ln n`; rows above it are failures.
    pub bound: Option<f64>,
}

enum Ratio {
    Exact(ExactRational),
    Approx(ApproxComplex),
}

fn ratio(num: &SumValue, den: &SumValue) -> std::result::Result<Ratio, &'static str> {
    if let (SumValue::Exact(a), SumValue::Exact(b)) = (num, den) {
        return a.checked_div(b).map(Ratio::Exact).map_err(|_| "degenerate");
    }
    let (a, b) = (num.as_approx().expect("scalar"), den.as_approx().expect("scalar"));
    let mag = b.norm();
    if mag == 0.0 {
        Err("degenerate")
    } else if mag < NEAR_CANCELLATION {
        Err("near-cancellation")
    } else {
        Ok(Ratio::Approx(a / b))
    }
}

fn deviation_diagnostic(r: &Ratio, n: u32) -> (f64, Option<f64>) {
    let dev = match r {
        Ratio::Exact(x) => (x - &ExactRational::one()).abs().to_f64(),
        Ratio::Approx(z) => (z - ApproxComplex::new(1.0, 0.0)).norm(),
    };
    let diag = (n >= 2).then(|| dev * n as f64 / (n as f64).ln());
    (dev, diag)
}

/// Truncated `beta_n^{+-}` against the one-signed sums over `X_n^+(F_m)` and
/// `Y_n^-(F_m)`, with the `|ratio - 1| n / ln n` diagnostic.
pub fn prop3_scan<T: Magnitude>(engine: &Engine, params: &Prop3Params, v: &Potential<T>) -> Result<ScanTable> {
    if params.m < 2 || *params.n_range.start() < 1 {
        return Err(Error::ParameterRange("need m >= 2 and n >= 1".into()));
    }
    let steps = StepSet::symmetric(params.m);
    let rows: Vec<(Vec<Cell>, Vec<String>)> = params
        .n_range
        .clone()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| -> Result<_> {
            let mut cells = vec![Cell::Int(n as i64)];
            let mut flags = Vec::new();
            let mut failures = Vec::new();
            for (label, dir) in [("plus", Direction::Ascending), ("minus", Direction::Descending)] {
                let one_signed = match dir {
                    Direction::Ascending => engine.sum_positive_dp(n, &steps, v),
                    Direction::Descending => engine.sum_negative_dp(n, &steps, v),
                };
                let beta = engine.beta_truncated(n, &steps, v, dir, params.max_steps, params.window)?;
                cells.push(Cell::from_value(&one_signed.value));
                cells.push(Cell::from_value(&beta.value));
                cells.push(Cell::Bool(beta.truncated));
                match ratio(&beta.value, &one_signed.value) {
                    Ok(r) => {
                        let (dev, diag) = deviation_diagnostic(&r, n);
                        cells.push(match r {
                            Ratio::Exact(x) => Cell::Exact(x),
                            Ratio::Approx(z) => Cell::Complex(z),
                        });
                        cells.push(Cell::Float(dev));
                        cells.push(Cell::opt_float(diag));
                        if let (Some(bound), Some(d)) = (params.bound, diag) {
                            if d > bound {
                                failures.push(format!("prop3 n={n} {label}: diagnostic {d:e} exceeds {bound:e}"));
                            }
                        }
                    }
                    Err(flag) => {
                        cells.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
                        flags.push(format!("{label}:{flag}"));
                    }
                }
            }
            cells.push(if flags.is_empty() { Cell::Empty } else { Cell::Text(flags.join(";")) });
            Ok((cells, failures))
        })
        .collect::<Result<_>>()?;
    let mut table = ScanTable::new(vec![
        "n",
        "positive_sum",
        "beta_plus",
        "truncated_plus",
        "ratio_plus",
        "dev_plus",
        "diag_plus",
        "negative_sum",
        "beta_minus",
        "truncated_minus",
        "ratio_minus",
        "dev_minus",
        "diag_minus",
        "flags",
    ]);
    for (cells, failures) in rows {
        table.push(cells);
        table.failures.extend(failures);
    }
    Ok(table)
}
