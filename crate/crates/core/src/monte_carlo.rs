//! Path-parallel Monte Carlo drivers: terminal-state ensembles, statistical
//! validation of the integral moments, strong-convergence measurement on
//! geometric Brownian motion, and the shell calibration of the exact error
//! calculus.
//!
//! Every driver comes in a parallel flavor (rayon, behind the `parallel`
//! feature) and a sequential one; both consume the same per-(path, step)
//! derived streams, so results are bit-identical across thread counts and
//! between the two flavors.

use crate::coeff::TableSet;
use crate::error::Result;
use crate::error_calc::{exact_error, pair_error_00, IndexPattern};
use crate::models::Gbm;
use crate::pattern::WeightPattern::{self, *};
use crate::plan::TruncationPlan;
use crate::pool::{derive_stream, GaussianPool, StreamId};
use crate::sampler::StepSampler;
use crate::scheme::{step, PathState, SchemeConfig, SchemeOrder, StrongSolver};
use serde::Serialize;

#[cfg(feature = "parallel")]
fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indexed<T>(n: usize, f: impl Fn(usize) -> Result<T>) -> Result<Vec<T>> {
    map_indexed_seq(n, f)
}

fn map_indexed_seq<T>(n: usize, f: impl Fn(usize) -> Result<T>) -> Result<Vec<T>> {
    (0..n).map(f).collect()
}

/// Terminal states of `paths` independent trajectories.
pub fn run_terminal_states(
    solver: &StrongSolver<'_>,
    y0: &[f64],
    paths: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    map_indexed(paths, |p| {
        solver.run_terminal(
            y0,
            StreamId {
                seed,
                path: p as u64,
            },
        )
    })
}

/// Sequential twin of [`run_terminal_states`]; same streams, same output.
pub fn run_terminal_states_seq(
    solver: &StrongSolver<'_>,
    y0: &[f64],
    paths: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    map_indexed_seq(paths, |p| {
        solver.run_terminal(
            y0,
            StreamId {
                seed,
                path: p as u64,
            },
        )
    })
}

/// Moment accumulator with enough state for z-scores of both the mean and
/// the variance.
#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    n: f64,
    sum: f64,
    sum2: f64,
    sum4: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        self.sum += x;
        self.sum2 += x * x;
        self.sum4 += x * x * x * x;
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.n += other.n;
        self.sum += other.sum;
        self.sum2 += other.sum2;
        self.sum4 += other.sum4;
        self
    }

    fn mean(&self) -> f64 {
        self.sum / self.n
    }

    fn variance(&self) -> f64 {
        self.sum2 / self.n - self.mean().powi(2)
    }

    fn mean_z(&self) -> f64 {
        self.mean() / (self.variance() / self.n).sqrt()
    }

    fn variance_z(&self, target: f64) -> f64 {
        let m2 = self.sum2 / self.n;
        let m4 = self.sum4 / self.n;
        let se = ((m4 - m2 * m2).max(f64::MIN_POSITIVE) / self.n).sqrt();
        (self.variance() - target) / se
    }
}

/// One validated statistic of one integral instance.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub family: WeightPattern,
    pub indices: Vec<usize>,
    pub statistic: String,
    pub observed: f64,
    pub target: f64,
    pub z: f64,
}

/// Exact variance of the time-weighted pair expansions with distinct
/// components, by direct enumeration of the expansion coefficients. This is
/// an independent re-derivation used as the validation target.
pub fn pair_variance_distinct(pattern: WeightPattern, q: usize, delta: f64) -> f64 {
    use std::collections::BTreeMap;
    let mut coef: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut add = |j1: usize, j2: usize, v: f64| {
        *coef.entry((j1, j2)).or_insert(0.0) += v;
    };
    let d2 = delta * delta;
    // the embedded plain pair, scaled by -delta/2
    add(0, 0, -d2 / 4.0);
    for i in 1..=q {
        let w = d2 / 4.0 / ((4 * i * i - 1) as f64).sqrt();
        add(i - 1, i, -w);
        add(i, i - 1, w);
    }
    match pattern {
        W01 => {
            add(0, 1, -d2 / 4.0 / 3f64.sqrt());
            for i in 0..=q {
                let fi = i as f64;
                let denom = ((2.0 * fi + 1.0) * (2.0 * fi + 5.0)).sqrt() * (2.0 * fi + 3.0);
                add(i, i + 2, -d2 / 4.0 * (fi + 2.0) / denom);
                add(i + 2, i, d2 / 4.0 * (fi + 1.0) / denom);
                add(i, i, d2 / 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi + 3.0)));
            }
        }
        W10 => {
            add(1, 0, -d2 / 4.0 / 3f64.sqrt());
            for i in 0..=q {
                let fi = i as f64;
                let denom = ((2.0 * fi + 1.0) * (2.0 * fi + 5.0)).sqrt() * (2.0 * fi + 3.0);
                add(i, i + 2, -d2 / 4.0 * (fi + 1.0) / denom);
                add(i + 2, i, d2 / 4.0 * (fi + 2.0) / denom);
                add(i, i, -d2 / 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi + 3.0)));
            }
        }
        other => panic!("pair_variance_distinct expects (01) or (10), got {other}"),
    }
    coef.values().map(|c| c * c).sum()
}

/// Draws `samples` pools and checks the empirical mean and variance of each
/// integral family instance against its exact target.
pub fn validate_moments(
    samples: usize,
    delta: f64,
    plan: &TruncationPlan,
    seed: u64,
    tables: &TableSet,
) -> Result<Vec<MomentRow>> {
    let m = 5; // enough components for an all-distinct quintuple
    let sampler = StepSampler::new(m, delta, plan.clone(), tables)?;
    let q_pair = plan.q(W00);

    // (family, indices) instances in report order
    let instances: Vec<(WeightPattern, Vec<usize>)> = vec![
        (W0, vec![0]),
        (W1, vec![0]),
        (W2, vec![0]),
        (W00, vec![0, 1]),
        (W00, vec![0, 0]),
        (W01, vec![0, 1]),
        (W10, vec![0, 1]),
        (W000, vec![0, 1, 2]),
        (W001, vec![0, 1, 2]),
        (W010, vec![0, 1, 2]),
        (W100, vec![0, 1, 2]),
        (W0000, vec![0, 1, 2, 3]),
        (W00000, vec![0, 1, 2, 3, 4]),
    ];

    let batch = 2048usize;
    let batches = samples.div_ceil(batch);
    let partials: Vec<Vec<Accumulator>> = map_indexed(batches, |b| {
        let mut accs = vec![Accumulator::default(); instances.len()];
        let lo = b * batch;
        let hi = ((b + 1) * batch).min(samples);
        for s in lo..hi {
            let mut rng = derive_stream(seed, s as u64, 0);
            let pool = GaussianPool::draw(m, plan.q_max(), &mut rng);
            for (k, (family, idx)) in instances.iter().enumerate() {
                let v = match family.multiplicity() {
                    1 => sampler.single(*family, idx[0], &pool),
                    2 => sampler.pair(*family, idx[0], idx[1], &pool),
                    3 => sampler.triple(*family, [idx[0], idx[1], idx[2]], &pool),
                    4 => sampler.quad([idx[0], idx[1], idx[2], idx[3]], &pool),
                    _ => sampler.quint([idx[0], idx[1], idx[2], idx[3], idx[4]], &pool),
                };
                accs[k].push(v);
            }
        }
        Ok(accs)
    })?;
    let totals = partials
        .into_iter()
        .reduce(|a, b| {
            a.into_iter()
                .zip(b)
                .map(|(x, y)| x.merge(y))
                .collect::<Vec<_>>()
        })
        .expect("at least one batch");

    let mut rows = Vec::new();
    for ((family, idx), acc) in instances.iter().zip(&totals) {
        let var_target = match family {
            W0 => delta,
            W1 => delta.powi(3) / 3.0,
            W2 => delta.powi(5) / 5.0,
            W00 => {
                if idx[0] == idx[1] {
                    delta * delta / 2.0
                } else {
                    family.l2_norm_sq(delta) - pair_error_00(q_pair, delta)
                }
            }
            W01 | W10 => pair_variance_distinct(*family, plan.q(*family), delta),
            table_backed => {
                let table = tables.get(*table_backed, plan.q(*table_backed))?;
                table.sum_scaled_sq(delta)
            }
        };
        rows.push(MomentRow {
            family: *family,
            indices: idx.clone(),
            statistic: "mean".to_string(),
            observed: acc.mean(),
            target: 0.0,
            z: acc.mean_z(),
        });
        rows.push(MomentRow {
            family: *family,
            indices: idx.clone(),
            statistic: "variance".to_string(),
            observed: acc.variance(),
            target: var_target,
            z: acc.variance_z(var_target),
        });
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x` with its standard error.
pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let mut ss_res = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        let fitted = my + slope * (x - mx);
        ss_res += (y - fitted).powi(2);
    }
    let dof = (xs.len().max(3) - 2) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    (slope, stderr)
}

/// Mean absolute terminal error of the scheme on geometric Brownian motion
/// against the exact solution driven by the same Brownian increments
/// (`w_{p+1} - w_p = sqrt(delta) zeta_0`).
#[allow(clippy::too_many_arguments)]
pub fn gbm_strong_error(
    gbm: &Gbm,
    y0: f64,
    t_end: f64,
    order: SchemeOrder,
    delta: f64,
    paths: usize,
    seed: u64,
    budget_constant: f64,
    tables: &TableSet,
) -> Result<f64> {
    let steps = (t_end / delta).round() as usize;
    let config = SchemeConfig::new(order, delta, steps).with_budget_constant(budget_constant);
    let solver = StrongSolver::new(gbm, config, tables)?;
    let q_max = solver.plan().q_max();
    let errors = map_indexed(paths, |p| {
        let mut state = PathState {
            y: vec![y0],
            step_index: 0,
            time: 0.0,
        };
        let mut w = 0.0;
        for s in 0..steps {
            let mut rng = derive_stream(seed, p as u64, s as u64);
            let pool = GaussianPool::draw(1, q_max, &mut rng);
            let integrals = solver.sampler().sample_step(&pool)?;
            state = step(gbm, &state, &integrals, solver.config())?;
            w += delta.sqrt() * pool.zeta(0, 0);
        }
        Ok((state.y[0] - gbm.exact(y0, t_end, w)).abs())
    })?;
    Ok(errors.iter().sum::<f64>() / paths as f64)
}

/// Strong-convergence study: fitted log-log slope over a step grid.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceFit {
    pub order: f64,
    pub deltas: Vec<f64>,
    pub mean_abs_errors: Vec<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn gbm_convergence(
    gbm: &Gbm,
    y0: f64,
    t_end: f64,
    order: SchemeOrder,
    deltas: &[f64],
    paths: usize,
    seed: u64,
    budget_constant: f64,
    tables: &TableSet,
) -> Result<ConvergenceFit> {
    let mut errors = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        errors.push(gbm_strong_error(
            gbm,
            y0,
            t_end,
            order,
            delta,
            paths,
            seed,
            budget_constant,
            tables,
        )?);
    }
    let (slope, slope_stderr) = fit_log_slope(deltas, &errors);
    Ok(ConvergenceFit {
        order: order.as_f64(),
        deltas: deltas.to_vec(),
        mean_abs_errors: errors,
        slope,
        slope_stderr,
    })
}

/// Compares the empirical mean-square gap between two truncations of the
/// all-zero triple integral (shared pool, distinct components) with the
/// exact-error difference, returning `(observed, expected, z)`.
pub fn triple_shell_calibration(
    samples: usize,
    delta: f64,
    q_low: usize,
    q_high: usize,
    seed: u64,
    tables: &TableSet,
) -> Result<(f64, f64, f64)> {
    assert!(q_low < q_high);
    let table = tables.get(W000, q_high)?;
    let scaled = table.scaled_values(delta);
    let n = q_high + 1;
    let batch = 2048usize;
    let batches = samples.div_ceil(batch);
    let partials: Vec<Accumulator> = map_indexed(batches, |b| {
        let mut acc = Accumulator::default();
        let lo = b * batch;
        let hi = ((b + 1) * batch).min(samples);
        for s in lo..hi {
            let mut rng = derive_stream(seed, s as u64, 1);
            let pool = GaussianPool::draw(3, q_high, &mut rng);
            // distinct components: the sums are plain triple products
            let mut low = 0.0;
            let mut high = 0.0;
            for j1 in 0..=q_high {
                let z1 = pool.zeta(j1, 0);
                for j2 in 0..=q_high {
                    let z12 = z1 * pool.zeta(j2, 1);
                    for j3 in 0..=q_high {
                        let term = scaled[(j1 * n + j2) * n + j3] * z12 * pool.zeta(j3, 2);
                        high += term;
                        if j1 <= q_low && j2 <= q_low && j3 <= q_low {
                            low += term;
                        }
                    }
                }
            }
            acc.push(high - low);
        }
        Ok(acc)
    })?;
    let acc = partials
        .into_iter()
        .reduce(|a, b| a.merge(b))
        .expect("at least one batch");

    let distinct = IndexPattern::all_distinct(3);
    let low_table = tables.get(W000, q_low)?;
    let expected = exact_error(W000, q_low, delta, &distinct, &low_table)?
        - exact_error(W000, q_high, delta, &distinct, &table)?;
    let observed = acc.sum2 / acc.n;
    let m4 = acc.sum4 / acc.n;
    let se = ((m4 - observed * observed).max(f64::MIN_POSITIVE) / acc.n).sqrt();
    Ok((observed, expected, (observed - expected) / se))
}
