//! Iterated Stratonovich integrals of the all-zero weight kernels, sampled
//! as plain product sums without indicator corrections, and the error
//! decomposition of the triple case.
//!
//! The product-sum form is simpler than the Ito expansion, but its
//! mean-square error splits into the Ito error plus three extra terms
//! `F_q`, `G_q`, `H_q` that only vanish in the limit; the Ito route is the
//! one with exactly computable errors.

use crate::coeff::CoeffTable;
use crate::error::{Error, Result};
use crate::pattern::WeightPattern;
use crate::pool::GaussianPool;

/// One sampled iterated Stratonovich integral.
#[derive(Debug, Clone, PartialEq)]
pub struct StratSample {
    pub value: f64,
    pub pattern: WeightPattern,
    pub indices: Vec<usize>,
}

fn strat_pattern(k: usize) -> Result<WeightPattern> {
    match k {
        2 => Ok(WeightPattern::W00),
        3 => Ok(WeightPattern::W000),
        4 => Ok(WeightPattern::W0000),
        5 => Ok(WeightPattern::W00000),
        other => Err(Error::InvalidConfig(format!(
            "Stratonovich product-sum sampling covers multiplicities 2..5, got {other}"
        ))),
    }
}

/// Samples the multiplicity-`k` Stratonovich integral as
/// `sum_{j <= q} C_j prod_l zeta_{j_l}^{(i_l)}` over the shared pool.
pub fn sample_strat(
    k: usize,
    indices: &[usize],
    q: usize,
    table: &CoeffTable,
    pool: &GaussianPool,
    delta: f64,
) -> Result<StratSample> {
    let pattern = strat_pattern(k)?;
    if indices.len() != k {
        return Err(Error::InvalidConfig(format!(
            "expected {k} component indices, got {}",
            indices.len()
        )));
    }
    if table.pattern() != pattern || table.q() < q {
        return Err(Error::TableMismatch {
            expected: pattern.to_string(),
            expected_q: q,
            found: table.pattern().to_string(),
            found_q: table.q(),
        });
    }
    for &i in indices {
        if i >= pool.components() {
            return Err(Error::InvalidConfig(format!(
                "Wiener component {i} out of range, pool has {}",
                pool.components()
            )));
        }
    }
    if pool.rows() < q + 1 {
        return Err(Error::InvalidConfig(format!(
            "pool has {} rows, expansion reads index {q}",
            pool.rows()
        )));
    }

    let scaled = table.scaled_values(delta);
    let n = table.q() + 1;
    let mut sum = 0.0;
    let mut j = [0usize; 5];
    loop {
        let mut idx = 0;
        let mut prod = 1.0;
        for (d, &jd) in j[..k].iter().enumerate() {
            idx = idx * n + jd;
            prod *= pool.zeta(jd, indices[d]);
        }
        sum += scaled[idx] * prod;
        let mut done = true;
        for d in (0..k).rev() {
            j[d] += 1;
            if j[d] <= q {
                done = false;
                break;
            }
            j[d] = 0;
        }
        if done {
            break;
        }
    }
    Ok(StratSample {
        value: sum,
        pattern,
        indices: indices.to_vec(),
    })
}

/// The three extra mean-square terms of the triple Stratonovich error bound,
/// as explicit quadratic forms over the `(000)` coefficient table.
///
/// `F_q` measures how well the diagonal sums `sum_{j1} C_{j3 j1 j1}`
/// reproduce the basis coefficients of `1/2 int int ds df` (which are
/// `delta^{3/2}/4` and `delta^{3/2}/(4 sqrt 3)` on indices 0 and 1, zero
/// beyond); `G_q` is the analog for `1/2 int int df ds`; `H_q` is the norm
/// of the unmatched middle-diagonal sums.
pub fn triple_error_terms(q: usize, table: &CoeffTable, delta: f64) -> Result<(f64, f64, f64)> {
    let pattern = WeightPattern::W000;
    if table.pattern() != pattern || table.q() < q {
        return Err(Error::TableMismatch {
            expected: pattern.to_string(),
            expected_q: q,
            found: table.pattern().to_string(),
            found_q: table.q(),
        });
    }
    let scaled = table.scaled_values(delta);
    let n = table.q() + 1;
    let at = |j1: usize, j2: usize, j3: usize| scaled[(j1 * n + j2) * n + j3];

    let a0 = delta.powf(1.5) / 4.0;
    let a1 = delta.powf(1.5) / (4.0 * 3f64.sqrt());

    // coefficients of 1/2 int_t^T int_t^tau ds df_tau on zeta_{j3}
    let target_f = |j: usize| match j {
        0 => a0,
        1 => a1,
        _ => 0.0,
    };
    // coefficients of 1/2 int_t^T int_t^tau df_s d tau on zeta_{j1}
    let target_g = |j: usize| match j {
        0 => a0,
        1 => -a1,
        _ => 0.0,
    };

    let top = q.max(1);
    let mut f = 0.0;
    let mut g = 0.0;
    for j in 0..=top {
        let matched_f: f64 = if j <= q {
            (0..=q).map(|j1| at(j1, j1, j)).sum()
        } else {
            0.0
        };
        let matched_g: f64 = if j <= q {
            (0..=q).map(|j3| at(j, j3, j3)).sum()
        } else {
            0.0
        };
        f += (target_f(j) - matched_f).powi(2);
        g += (target_g(j) - matched_g).powi(2);
    }

    let mut h = 0.0;
    for j2 in 0..=q {
        let s: f64 = (0..=q).map(|j1| at(j1, j2, j1)).sum();
        h += s * s;
    }
    Ok((f, g, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::TableSet;
    use crate::pool::derive_stream;
    use crate::sampler::{sample_pair, sample_triple};

    #[test]
    fn pair_difference_is_the_ito_shift() {
        // shared pool: strat(k=2, i1=i2) - I_(00)^{(ii)q} = delta/2 at any q
        let tables = TableSet::new();
        let delta = 0.6;
        for q in [0usize, 1, 3] {
            let table = tables.get(WeightPattern::W00, q).unwrap();
            let pool = GaussianPool::draw(1, q, &mut derive_stream(5, q as u64, 0));
            let strat = sample_strat(2, &[0, 0], q, &table, &pool, delta).unwrap();
            let ito = sample_pair(WeightPattern::W00, 0, 0, q, &pool, delta).unwrap();
            assert!((strat.value - ito - delta / 2.0).abs() < 1e-13, "q = {q}");
        }
    }

    #[test]
    fn triple_single_term_at_q0() {
        let tables = TableSet::new();
        let table = tables.get(WeightPattern::W000, 0).unwrap();
        let pool = GaussianPool::draw(3, 0, &mut derive_stream(6, 0, 0));
        let delta = 1.0;
        let s = sample_strat(3, &[0, 1, 2], 0, &table, &pool, delta).unwrap();
        let expected = delta.powf(1.5) / 6.0 * pool.zeta(0, 0) * pool.zeta(0, 1) * pool.zeta(0, 2);
        assert!((s.value - expected).abs() < 1e-15);
    }

    #[test]
    fn triple_difference_equals_correction_terms() {
        let tables = TableSet::new();
        let q = 3;
        let table = tables.get(WeightPattern::W000, q).unwrap();
        let delta = 0.8;
        let scaled = table.scaled_values(delta);
        let n = q + 1;
        let at = |j1: usize, j2: usize, j3: usize| scaled[(j1 * n + j2) * n + j3];
        for (indices, seed) in [
            ([0, 0, 1], 1u64),
            ([0, 1, 1], 2),
            ([1, 0, 1], 3),
            ([0, 0, 0], 4),
        ] {
            for rep in 0..250 {
                let pool = GaussianPool::draw(2, q, &mut derive_stream(seed, rep, 0));
                let strat = sample_strat(3, &indices, q, &table, &pool, delta)
                    .unwrap()
                    .value;
                let ito =
                    sample_triple(WeightPattern::W000, indices, q, &table, &pool, delta).unwrap();
                let mut corrections = 0.0;
                for j1 in 0..=q {
                    for j2 in 0..=q {
                        for j3 in 0..=q {
                            let c = at(j1, j2, j3);
                            if indices[0] == indices[1] && j1 == j2 {
                                corrections += c * pool.zeta(j3, indices[2]);
                            }
                            if indices[1] == indices[2] && j2 == j3 {
                                corrections += c * pool.zeta(j1, indices[0]);
                            }
                            if indices[0] == indices[2] && j1 == j3 {
                                corrections += c * pool.zeta(j2, indices[1]);
                            }
                        }
                    }
                }
                let diff = strat - ito;
                let scale = diff.abs().max(1.0);
                assert!(
                    (diff - corrections).abs() < 1e-12 * scale,
                    "indices {indices:?}: {diff} vs {corrections}"
                );
            }
        }
    }

    #[test]
    fn h_term_at_q0() {
        let tables = TableSet::new();
        let table = tables.get(WeightPattern::W000, 0).unwrap();
        let delta: f64 = 0.7;
        let (_, _, h) = triple_error_terms(0, &table, delta).unwrap();
        assert!((h - delta.powi(3) / 36.0).abs() < 1e-15);
    }

    #[test]
    fn terms_decay_toward_zero() {
        let tables = TableSet::new();
        let mut prev = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        for q in 0..=8 {
            let table = tables.get(WeightPattern::W000, q).unwrap();
            let (f, g, h) = triple_error_terms(q, &table, 1.0).unwrap();
            assert!(f >= 0.0 && g >= 0.0 && h >= 0.0);
            assert!(f <= prev.0 + 1e-12 && g <= prev.1 + 1e-12 && h <= prev.2 + 1e-12);
            prev = (f, g, h);
        }
        assert!(prev.0 < 2e-3 && prev.1 < 2e-3 && prev.2 < 2e-3, "{prev:?}");
    }

    #[test]
    fn rejects_unsupported_multiplicity() {
        let tables = TableSet::new();
        let table = tables.get(WeightPattern::W00, 0).unwrap();
        let pool = GaussianPool::draw(1, 0, &mut derive_stream(1, 0, 0));
        assert!(sample_strat(1, &[0], 0, &table, &pool, 1.0).is_err());
        assert!(sample_strat(6, &[0; 6], 0, &table, &pool, 1.0).is_err());
    }
}
