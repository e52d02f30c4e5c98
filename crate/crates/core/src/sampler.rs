//! Joint sampling of the twelve iterated Ito integrals of one step from a
//! shared Gaussian pool.
//!
//! Multiplicities 1 and 2 use closed expansions; multiplicities 3 to 5 sum
//! the coefficient table against products of pool normals with the indicator
//! correction terms of the Ito expansions. Everything is a pure function of
//! `(pool, coefficients, q, delta)`, so sampling is freely parallel across
//! steps and paths as long as pools are distinct.

use crate::coeff::{CoeffTable, TableSet};
use crate::error::{Error, Result};
use crate::pattern::WeightPattern;
use crate::plan::TruncationPlan;
use crate::pool::GaussianPool;
use std::collections::BTreeMap;

/// Scaled coefficients in `j_1`-major layout with edge `n` (entries cover
/// indices `0 .. n-1` per axis; sums may stop earlier).
#[derive(Clone, Copy)]
struct ScaledView<'a> {
    values: &'a [f64],
    n: usize,
}

impl<'a> ScaledView<'a> {
    fn from_table(table: &CoeffTable, scaled: &'a [f64]) -> Self {
        ScaledView {
            values: scaled,
            n: table.q() + 1,
        }
    }

    #[inline]
    fn get3(&self, j1: usize, j2: usize, j3: usize) -> f64 {
        self.values[(j1 * self.n + j2) * self.n + j3]
    }

    #[inline]
    fn get4(&self, j1: usize, j2: usize, j3: usize, j4: usize) -> f64 {
        self.values[((j1 * self.n + j2) * self.n + j3) * self.n + j4]
    }

    #[inline]
    fn get5(&self, j1: usize, j2: usize, j3: usize, j4: usize, j5: usize) -> f64 {
        self.values[(((j1 * self.n + j2) * self.n + j3) * self.n + j4) * self.n + j5]
    }
}

fn check_component(pool: &GaussianPool, i: usize) -> Result<()> {
    if i >= pool.components() {
        return Err(Error::InvalidConfig(format!(
            "Wiener component {i} out of range, pool has {}",
            pool.components()
        )));
    }
    Ok(())
}

fn check_rows(pool: &GaussianPool, needed: usize) -> Result<()> {
    if pool.rows() < needed {
        return Err(Error::InvalidConfig(format!(
            "pool has {} rows, the requested expansion reads index {}",
            pool.rows(),
            needed - 1
        )));
    }
    Ok(())
}

fn check_table(table: &CoeffTable, pattern: WeightPattern, q: usize) -> Result<()> {
    if table.pattern() != pattern || table.q() < q {
        return Err(Error::TableMismatch {
            expected: pattern.to_string(),
            expected_q: q,
            found: table.pattern().to_string(),
            found_q: table.q(),
        });
    }
    Ok(())
}

/// Multiplicity-1 integrals; their expansions are finite and exact.
pub fn sample_single(
    pattern: WeightPattern,
    i1: usize,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    check_component(pool, i1)?;
    check_rows(pool, 3)?;
    single_kernel(pattern, i1, pool, delta)
}

fn single_kernel(
    pattern: WeightPattern,
    i1: usize,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    use WeightPattern::*;
    let z = |j: usize| pool.zeta(j, i1);
    match pattern {
        W0 => Ok(delta.sqrt() * z(0)),
        W1 => Ok(-delta.powf(1.5) / 2.0 * (z(0) + z(1) / 3f64.sqrt())),
        W2 => {
            Ok(delta.powf(2.5) / 3.0
                * (z(0) + 3f64.sqrt() / 2.0 * z(1) + z(2) / (2.0 * 5f64.sqrt())))
        }
        other => Err(Error::InvalidConfig(format!(
            "pattern {other} has multiplicity {}, expected 1",
            other.multiplicity()
        ))),
    }
}

/// Multiplicity-2 integrals. The expansions with one time weight read basis
/// indices up to `q + 2`.
pub fn sample_pair(
    pattern: WeightPattern,
    i1: usize,
    i2: usize,
    q: usize,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    check_component(pool, i1)?;
    check_component(pool, i2)?;
    check_rows(pool, q + 3)?;
    pair_kernel(pattern, i1, i2, q, pool, delta)
}

fn pair_kernel(
    pattern: WeightPattern,
    i1: usize,
    i2: usize,
    q: usize,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    use WeightPattern::*;
    match pattern {
        W00 => Ok(pair_00(i1, i2, q, pool, delta)),
        W01 => Ok(pair_01(i1, i2, q, pool, delta)),
        W10 => Ok(pair_10(i1, i2, q, pool, delta)),
        other => Err(Error::InvalidConfig(format!(
            "pattern {other} has multiplicity {}, expected 2",
            other.multiplicity()
        ))),
    }
}

fn pair_00(i1: usize, i2: usize, q: usize, pool: &GaussianPool, delta: f64) -> f64 {
    let mut sum = pool.zeta(0, i1) * pool.zeta(0, i2);
    for i in 1..=q {
        sum += (pool.zeta(i - 1, i1) * pool.zeta(i, i2) - pool.zeta(i, i1) * pool.zeta(i - 1, i2))
            / ((4 * i * i - 1) as f64).sqrt();
    }
    if i1 == i2 {
        sum -= 1.0;
    }
    delta / 2.0 * sum
}

fn pair_01(i1: usize, i2: usize, q: usize, pool: &GaussianPool, delta: f64) -> f64 {
    let ito_correction = if i1 == i2 { 1.0 } else { 0.0 };
    let mut bracket = pool.zeta(0, i1) * pool.zeta(1, i2) / 3f64.sqrt();
    for i in 0..=q {
        let fi = i as f64;
        let denom = ((2.0 * fi + 1.0) * (2.0 * fi + 5.0)).sqrt() * (2.0 * fi + 3.0);
        bracket += ((fi + 2.0) * pool.zeta(i, i1) * pool.zeta(i + 2, i2)
            - (fi + 1.0) * pool.zeta(i + 2, i1) * pool.zeta(i, i2))
            / denom;
        bracket -= (pool.zeta(i, i1) * pool.zeta(i, i2) - ito_correction)
            / ((2.0 * fi - 1.0) * (2.0 * fi + 3.0));
    }
    -delta / 2.0 * pair_00(i1, i2, q, pool, delta) - delta * delta / 4.0 * bracket
}

fn pair_10(i1: usize, i2: usize, q: usize, pool: &GaussianPool, delta: f64) -> f64 {
    let ito_correction = if i1 == i2 { 1.0 } else { 0.0 };
    let mut bracket = pool.zeta(0, i2) * pool.zeta(1, i1) / 3f64.sqrt();
    for i in 0..=q {
        let fi = i as f64;
        let denom = ((2.0 * fi + 1.0) * (2.0 * fi + 5.0)).sqrt() * (2.0 * fi + 3.0);
        bracket += ((fi + 1.0) * pool.zeta(i + 2, i2) * pool.zeta(i, i1)
            - (fi + 2.0) * pool.zeta(i, i2) * pool.zeta(i + 2, i1))
            / denom;
        bracket += (pool.zeta(i, i1) * pool.zeta(i, i2) - ito_correction)
            / ((2.0 * fi - 1.0) * (2.0 * fi + 3.0));
    }
    -delta / 2.0 * pair_00(i1, i2, q, pool, delta) - delta * delta / 4.0 * bracket
}

/// Multiplicity-3 integrals `(000)`, `(001)`, `(010)`, `(100)`.
pub fn sample_triple(
    pattern: WeightPattern,
    indices: [usize; 3],
    q: usize,
    table: &CoeffTable,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    if pattern.multiplicity() != 3 {
        return Err(Error::InvalidConfig(format!(
            "pattern {pattern} has multiplicity {}, expected 3",
            pattern.multiplicity()
        )));
    }
    check_table(table, pattern, q)?;
    for &i in &indices {
        check_component(pool, i)?;
    }
    check_rows(pool, q + 1)?;
    let scaled = table.scaled_values(delta);
    let view = ScaledView::from_table(table, &scaled);
    Ok(triple_kernel(view, q, indices, pool))
}

fn triple_kernel(c: ScaledView<'_>, q: usize, ind: [usize; 3], pool: &GaussianPool) -> f64 {
    let [i1, i2, i3] = ind;
    let mut sum = 0.0;
    for j1 in 0..=q {
        let z1 = pool.zeta(j1, i1);
        for j2 in 0..=q {
            let z2 = pool.zeta(j2, i2);
            for j3 in 0..=q {
                let z3 = pool.zeta(j3, i3);
                let mut term = z1 * z2 * z3;
                if i1 == i2 && j1 == j2 {
                    term -= z3;
                }
                if i2 == i3 && j2 == j3 {
                    term -= z1;
                }
                if i1 == i3 && j1 == j3 {
                    term -= z2;
                }
                sum += c.get3(j1, j2, j3) * term;
            }
        }
    }
    sum
}

/// The multiplicity-4 integral `(0000)`.
pub fn sample_quad(
    indices: [usize; 4],
    q: usize,
    table: &CoeffTable,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    check_table(table, WeightPattern::W0000, q)?;
    for &i in &indices {
        check_component(pool, i)?;
    }
    check_rows(pool, q + 1)?;
    let scaled = table.scaled_values(delta);
    let view = ScaledView::from_table(table, &scaled);
    Ok(quad_kernel(view, q, indices, pool))
}

fn quad_kernel(c: ScaledView<'_>, q: usize, ind: [usize; 4], pool: &GaussianPool) -> f64 {
    let [i1, i2, i3, i4] = ind;
    let mut sum = 0.0;
    for j1 in 0..=q {
        let z1 = pool.zeta(j1, i1);
        for j2 in 0..=q {
            let z2 = pool.zeta(j2, i2);
            let p12 = i1 == i2 && j1 == j2;
            for j3 in 0..=q {
                let z3 = pool.zeta(j3, i3);
                let p13 = i1 == i3 && j1 == j3;
                let p23 = i2 == i3 && j2 == j3;
                for j4 in 0..=q {
                    let z4 = pool.zeta(j4, i4);
                    let p14 = i1 == i4 && j1 == j4;
                    let p24 = i2 == i4 && j2 == j4;
                    let p34 = i3 == i4 && j3 == j4;
                    let mut term = z1 * z2 * z3 * z4;
                    if p12 {
                        term -= z3 * z4;
                    }
                    if p13 {
                        term -= z2 * z4;
                    }
                    if p14 {
                        term -= z2 * z3;
                    }
                    if p23 {
                        term -= z1 * z4;
                    }
                    if p24 {
                        term -= z1 * z3;
                    }
                    if p34 {
                        term -= z1 * z2;
                    }
                    if p12 && p34 {
                        term += 1.0;
                    }
                    if p13 && p24 {
                        term += 1.0;
                    }
                    if p14 && p23 {
                        term += 1.0;
                    }
                    sum += c.get4(j1, j2, j3, j4) * term;
                }
            }
        }
    }
    sum
}

/// The multiplicity-5 integral `(00000)`.
pub fn sample_quint(
    indices: [usize; 5],
    q: usize,
    table: &CoeffTable,
    pool: &GaussianPool,
    delta: f64,
) -> Result<f64> {
    check_table(table, WeightPattern::W00000, q)?;
    for &i in &indices {
        check_component(pool, i)?;
    }
    check_rows(pool, q + 1)?;
    let scaled = table.scaled_values(delta);
    let view = ScaledView::from_table(table, &scaled);
    Ok(quint_kernel(view, q, indices, pool))
}

fn quint_kernel(c: ScaledView<'_>, q: usize, ind: [usize; 5], pool: &GaussianPool) -> f64 {
    let [i1, i2, i3, i4, i5] = ind;
    let mut sum = 0.0;
    for j1 in 0..=q {
        let z1 = pool.zeta(j1, i1);
        for j2 in 0..=q {
            let z2 = pool.zeta(j2, i2);
            let p12 = i1 == i2 && j1 == j2;
            for j3 in 0..=q {
                let z3 = pool.zeta(j3, i3);
                let p13 = i1 == i3 && j1 == j3;
                let p23 = i2 == i3 && j2 == j3;
                for j4 in 0..=q {
                    let z4 = pool.zeta(j4, i4);
                    let p14 = i1 == i4 && j1 == j4;
                    let p24 = i2 == i4 && j2 == j4;
                    let p34 = i3 == i4 && j3 == j4;
                    for j5 in 0..=q {
                        let z5 = pool.zeta(j5, i5);
                        let p15 = i1 == i5 && j1 == j5;
                        let p25 = i2 == i5 && j2 == j5;
                        let p35 = i3 == i5 && j3 == j5;
                        let p45 = i4 == i5 && j4 == j5;
                        let mut term = z1 * z2 * z3 * z4 * z5;
                        if p12 {
                            term -= z3 * z4 * z5;
                        }
                        if p13 {
                            term -= z2 * z4 * z5;
                        }
                        if p14 {
                            term -= z2 * z3 * z5;
                        }
                        if p15 {
                            term -= z2 * z3 * z4;
                        }
                        if p23 {
                            term -= z1 * z4 * z5;
                        }
                        if p24 {
                            term -= z1 * z3 * z5;
                        }
                        if p25 {
                            term -= z1 * z3 * z4;
                        }
                        if p34 {
                            term -= z1 * z2 * z5;
                        }
                        if p35 {
                            term -= z1 * z2 * z4;
                        }
                        if p45 {
                            term -= z1 * z2 * z3;
                        }
                        if p12 && p34 {
                            term += z5;
                        }
                        if p12 && p35 {
                            term += z4;
                        }
                        if p12 && p45 {
                            term += z3;
                        }
                        if p13 && p24 {
                            term += z5;
                        }
                        if p13 && p25 {
                            term += z4;
                        }
                        if p13 && p45 {
                            term += z2;
                        }
                        if p14 && p23 {
                            term += z5;
                        }
                        if p14 && p25 {
                            term += z3;
                        }
                        if p14 && p35 {
                            term += z2;
                        }
                        if p15 && p23 {
                            term += z4;
                        }
                        if p15 && p24 {
                            term += z3;
                        }
                        if p15 && p34 {
                            term += z2;
                        }
                        if p23 && p45 {
                            term += z1;
                        }
                        if p24 && p35 {
                            term += z1;
                        }
                        if p25 && p34 {
                            term += z1;
                        }
                        sum += c.get5(j1, j2, j3, j4, j5) * term;
                    }
                }
            }
        }
    }
    sum
}

/// All approximated integrals of one step, keyed by pattern and the tuple of
/// Wiener component indices (innermost variable first, 0-based).
#[derive(Debug, Clone)]
pub struct StepIntegrals {
    components: usize,
    families: BTreeMap<WeightPattern, Vec<f64>>,
}

impl StepIntegrals {
    pub fn components(&self) -> usize {
        self.components
    }

    #[inline]
    pub fn value(&self, pattern: WeightPattern, indices: &[usize]) -> f64 {
        debug_assert_eq!(indices.len(), pattern.multiplicity());
        let mut idx = 0;
        for &i in indices {
            debug_assert!(i < self.components);
            idx = idx * self.components + i;
        }
        self.families[&pattern][idx]
    }

    pub fn family(&self, pattern: WeightPattern) -> &[f64] {
        &self.families[&pattern]
    }

    /// Total number of stored integral values.
    pub fn len(&self) -> usize {
        self.families.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Prepared per-step sampler: plan, scaled coefficient tables and step
/// length are fixed once, then any number of pools can be evaluated.
pub struct StepSampler {
    components: usize,
    delta: f64,
    plan: TruncationPlan,
    scaled: BTreeMap<WeightPattern, Vec<f64>>,
}

impl StepSampler {
    pub fn new(
        components: usize,
        delta: f64,
        plan: TruncationPlan,
        tables: &TableSet,
    ) -> Result<Self> {
        if components == 0 {
            return Err(Error::InvalidConfig(
                "need at least one Wiener component".to_string(),
            ));
        }
        if delta <= 0.0 || delta.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "step length must be positive, got {delta}"
            )));
        }
        let mut scaled = BTreeMap::new();
        for pattern in WeightPattern::ALL {
            if pattern.needs_table() {
                let table = tables.get(pattern, plan.q(pattern))?;
                scaled.insert(pattern, table.scaled_values(delta));
            }
        }
        Ok(StepSampler {
            components,
            delta,
            plan,
            scaled,
        })
    }

    pub fn plan(&self) -> &TruncationPlan {
        &self.plan
    }

    pub fn pool_rows(&self) -> usize {
        self.plan.pool_rows()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn single(&self, pattern: WeightPattern, i1: usize, pool: &GaussianPool) -> f64 {
        single_kernel(pattern, i1, pool, self.delta).expect("single pattern")
    }

    pub fn pair(&self, pattern: WeightPattern, i1: usize, i2: usize, pool: &GaussianPool) -> f64 {
        pair_kernel(pattern, i1, i2, self.plan.q(pattern), pool, self.delta).expect("pair pattern")
    }

    fn view(&self, pattern: WeightPattern) -> ScaledView<'_> {
        ScaledView {
            values: &self.scaled[&pattern],
            n: self.plan.q(pattern) + 1,
        }
    }

    pub fn triple(&self, pattern: WeightPattern, indices: [usize; 3], pool: &GaussianPool) -> f64 {
        triple_kernel(self.view(pattern), self.plan.q(pattern), indices, pool)
    }

    pub fn quad(&self, indices: [usize; 4], pool: &GaussianPool) -> f64 {
        let pattern = WeightPattern::W0000;
        quad_kernel(self.view(pattern), self.plan.q(pattern), indices, pool)
    }

    pub fn quint(&self, indices: [usize; 5], pool: &GaussianPool) -> f64 {
        let pattern = WeightPattern::W00000;
        quint_kernel(self.view(pattern), self.plan.q(pattern), indices, pool)
    }

    /// Populates all twelve families for every component combination from one
    /// shared pool.
    pub fn sample_step(&self, pool: &GaussianPool) -> Result<StepIntegrals> {
        use WeightPattern::*;
        let m = self.components;
        if pool.components() != m {
            return Err(Error::InvalidConfig(format!(
                "pool has {} components, sampler expects {m}",
                pool.components()
            )));
        }
        check_rows(pool, self.pool_rows())?;

        let mut families = BTreeMap::new();
        for pattern in [W0, W1, W2] {
            let values = (0..m).map(|i1| self.single(pattern, i1, pool)).collect();
            families.insert(pattern, values);
        }
        for pattern in [W00, W01, W10] {
            let mut values = Vec::with_capacity(m * m);
            for i1 in 0..m {
                for i2 in 0..m {
                    values.push(self.pair(pattern, i1, i2, pool));
                }
            }
            families.insert(pattern, values);
        }
        for pattern in [W000, W001, W010, W100] {
            let mut values = Vec::with_capacity(m * m * m);
            for i1 in 0..m {
                for i2 in 0..m {
                    for i3 in 0..m {
                        values.push(self.triple(pattern, [i1, i2, i3], pool));
                    }
                }
            }
            families.insert(pattern, values);
        }
        let mut quad_values = Vec::with_capacity(m.pow(4));
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    for i4 in 0..m {
                        quad_values.push(self.quad([i1, i2, i3, i4], pool));
                    }
                }
            }
        }
        families.insert(W0000, quad_values);
        let mut quint_values = Vec::with_capacity(m.pow(5));
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    for i4 in 0..m {
                        for i5 in 0..m {
                            quint_values.push(self.quint([i1, i2, i3, i4, i5], pool));
                        }
                    }
                }
            }
        }
        families.insert(W00000, quint_values);

        Ok(StepIntegrals {
            components: m,
            families,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pool::derive_stream;
    use WeightPattern::*;

    fn pool_with(values: Vec<f64>, components: usize) -> GaussianPool {
        let rows = values.len() / components;
        GaussianPool::from_values(components, rows, values)
    }

    #[test]
    fn single_examples() {
        // one component, zeta_0 = 1, zeta_1 = zeta_2 = 0
        let pool = pool_with(vec![1.0, 0.0, 0.0], 1);
        assert_eq!(sample_single(W0, 0, &pool, 4.0).unwrap(), 2.0);
        assert_eq!(sample_single(W1, 0, &pool, 1.0).unwrap(), -0.5);
        let pool2 = pool_with(vec![0.0, 1.0, 0.0], 1);
        assert!((sample_single(W1, 0, &pool2, 1.0).unwrap() + 0.5 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pair_00_equal_components_closed_form() {
        // the antisymmetric sum cancels identically when i1 = i2
        for q in [0usize, 1, 5, 40] {
            let mut rng = derive_stream(9, q as u64, 0);
            let pool = GaussianPool::draw(1, q, &mut rng);
            let z0 = pool.zeta(0, 0);
            let got = sample_pair(W00, 0, 0, q, &pool, 1.0).unwrap();
            assert_eq!(got, 0.5 * (z0 * z0 - 1.0), "q = {q}");
        }
        let pool = pool_with(vec![2.0, 0.0, 0.0], 1);
        assert_eq!(sample_pair(W00, 0, 0, 0, &pool, 1.0).unwrap(), 1.5);
    }

    #[test]
    fn pair_00_antisymmetry() {
        for seed in 0..20 {
            let mut rng = derive_stream(seed, 0, 0);
            let pool = GaussianPool::draw(2, 4, &mut rng);
            let delta = 0.7;
            let ab = sample_pair(W00, 0, 1, 4, &pool, delta).unwrap();
            let ba = sample_pair(W00, 1, 0, 4, &pool, delta).unwrap();
            let product = delta * pool.zeta(0, 0) * pool.zeta(0, 1);
            assert!((ab + ba - product).abs() < 1e-14);
        }
    }

    #[test]
    fn pair_mixed_sum_identity_equal_components() {
        // I_(01) + I_(10) + delta I_(00) = -delta^2/(2 sqrt 3) z0 z1 when i1 = i2
        for q in [0usize, 1, 3, 9] {
            let mut rng = derive_stream(33, q as u64, 1);
            let pool = GaussianPool::draw(1, q, &mut rng);
            let delta = 0.45;
            let i01 = sample_pair(W01, 0, 0, q, &pool, delta).unwrap();
            let i10 = sample_pair(W10, 0, 0, q, &pool, delta).unwrap();
            let i00 = sample_pair(W00, 0, 0, q, &pool, delta).unwrap();
            let rhs = -delta * delta / (2.0 * 3f64.sqrt()) * pool.zeta(0, 0) * pool.zeta(1, 0);
            assert!(
                (i01 + i10 + delta * i00 - rhs).abs() < 1e-13,
                "q = {q}: {} vs {rhs}",
                i01 + i10 + delta * i00
            );
        }
    }

    #[test]
    fn triple_equal_components_reproduces_hermite_form() {
        // for i1 = i2 = i3 the (000) integral is delta^{3/2} (z^3 - 3z)/6
        // exactly, at every truncation order
        let tables = TableSet::new();
        for q in [0usize, 1, 2, 4] {
            let table = tables.get(W000, q).unwrap();
            for seed in 0..10 {
                let mut rng = derive_stream(seed, 77, q as u64);
                let pool = GaussianPool::draw(1, q, &mut rng);
                let delta: f64 = 0.8;
                let z = pool.zeta(0, 0);
                let expected = delta.powf(1.5) * (z * z * z - 3.0 * z) / 6.0;
                let got = sample_triple(W000, [0, 0, 0], q, &table, &pool, delta).unwrap();
                assert!(
                    (got - expected).abs() < 1e-12 * expected.abs().max(1.0),
                    "q = {q}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn quad_and_quint_equal_components_reproduce_hermite_forms() {
        let tables = TableSet::new();
        let q = 2;
        let quad_table = tables.get(W0000, q).unwrap();
        let quint_table = tables.get(W00000, q).unwrap();
        for seed in 0..10 {
            let mut rng = derive_stream(seed, 5, 9);
            let pool = GaussianPool::draw(1, q, &mut rng);
            let delta: f64 = 1.3;
            let z = pool.zeta(0, 0);
            let h4 = z.powi(4) - 6.0 * z * z + 3.0;
            let h5 = z.powi(5) - 10.0 * z.powi(3) + 15.0 * z;
            let quad = sample_quad([0; 4], q, &quad_table, &pool, delta).unwrap();
            let quint = sample_quint([0; 5], q, &quint_table, &pool, delta).unwrap();
            assert!((quad - delta * delta * h4 / 24.0).abs() < 1e-12 * h4.abs().max(1.0));
            assert!((quint - delta.powf(2.5) * h5 / 120.0).abs() < 1e-12 * h5.abs().max(1.0));
        }
    }

    #[test]
    fn quad_with_two_equal_pairs_factorizes_at_q0() {
        // i1 = i2 != i3 = i4 at q = 0: the corrections leave
        // C_0000 (z^2 - 1)(h^2 - 1)
        let tables = TableSet::new();
        let table = tables.get(W0000, 0).unwrap();
        for seed in 0..10 {
            let pool = GaussianPool::draw(2, 0, &mut derive_stream(seed, 21, 0));
            let delta: f64 = 0.9;
            let z = pool.zeta(0, 0);
            let h = pool.zeta(0, 1);
            let expected = delta * delta / 24.0 * (z * z - 1.0) * (h * h - 1.0);
            let got = sample_quad([0, 0, 1, 1], 0, &table, &pool, delta).unwrap();
            assert!((got - expected).abs() < 1e-14 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn step_integral_counts() {
        let tables = TableSet::new();
        let sampler = StepSampler::new(2, 0.5, TruncationPlan::uniform(1), &tables).unwrap();
        let mut rng = derive_stream(4, 0, 0);
        let pool = GaussianPool::draw(2, 1, &mut rng);
        let integrals = sampler.sample_step(&pool).unwrap();
        // 3m + 3m^2 + 4m^3 + m^4 + m^5 with m = 2
        assert_eq!(integrals.len(), 6 + 12 + 32 + 16 + 32);

        let single = StepSampler::new(1, 0.5, TruncationPlan::uniform(1), &tables).unwrap();
        let pool1 = GaussianPool::draw(1, 1, &mut rng);
        let ints1 = single.sample_step(&pool1).unwrap();
        let z0 = pool1.zeta(0, 0);
        assert_eq!(ints1.value(W00, &[0, 0]), 0.25 * (z0 * z0 - 1.0));
    }

    #[test]
    fn sampling_is_deterministic() {
        let tables = TableSet::new();
        let sampler = StepSampler::new(2, 0.25, TruncationPlan::uniform(2), &tables).unwrap();
        let a = sampler
            .sample_step(&GaussianPool::draw(2, 2, &mut derive_stream(10, 2, 3)))
            .unwrap();
        let b = sampler
            .sample_step(&GaussianPool::draw(2, 2, &mut derive_stream(10, 2, 3)))
            .unwrap();
        for p in WeightPattern::ALL {
            assert_eq!(a.family(p), b.family(p));
        }
    }

    #[test]
    fn mismatched_table_rejected() {
        let tables = TableSet::new();
        let t000 = tables.get(W000, 2).unwrap();
        let pool = GaussianPool::draw(1, 2, &mut derive_stream(1, 0, 0));
        assert!(matches!(
            sample_triple(W100, [0, 0, 0], 2, &t000, &pool, 1.0),
            Err(Error::TableMismatch { .. })
        ));
        assert!(matches!(
            sample_triple(W000, [0, 0, 0], 3, &t000, &pool, 1.0),
            Err(Error::TableMismatch { .. })
        ));
    }
}
