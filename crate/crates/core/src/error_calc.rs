//! Exact mean-square approximation errors of the truncated integral
//! expansions, the factorial estimate, and the per-pattern truncation
//! selector.
//!
//! For a multi-index set truncated at `q`, the exact error of a
//! multiplicity-`k` approximation is
//!
//! ```text
//! E_k^q = I_k - sum_{j <= q} C_j * sum_{sigma} C_{sigma(j)}
//! ```
//!
//! where `sigma` ranges over the position permutations that leave the tuple
//! of Wiener component indices unchanged (swapping `j_r` with `j_s` is
//! admissible exactly when `i_r = i_s`). With pairwise distinct components
//! only the identity survives and `E_k^q = I_k - sum C^2`; repeated
//! components add the cross products seen in the multiplicity-2 and 3
//! special cases.

use crate::basis::MAX_DEGREE;
use crate::coeff::{CoeffTable, TableSet};
use crate::error::{Error, Result};
use crate::pattern::WeightPattern;
use crate::plan::TruncationPlan;
use serde::Serialize;
use std::fmt;

/// Mean-square budget `C * delta^6` that every integral approximation of a
/// step must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    constant: f64,
    delta: f64,
}

impl ErrorBudget {
    pub fn new(constant: f64, delta: f64) -> Result<Self> {
        if constant <= 0.0 || constant.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "budget constant must be positive, got {constant}"
            )));
        }
        if delta <= 0.0 || delta.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "step length must be positive, got {delta}"
            )));
        }
        Ok(ErrorBudget { constant, delta })
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Per-integral target `C * delta^6`.
    pub fn target(&self) -> f64 {
        self.constant * self.delta.powi(6)
    }
}

/// Equality pattern over the component indices `(i_1 .. i_k)`, stored as a
/// set partition of the positions `0 .. k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexPattern {
    /// Block id per position, in restricted-growth form: `blocks[0] = 0` and
    /// each value is at most `1 + max` of the values before it.
    blocks: Vec<usize>,
}

impl IndexPattern {
    pub fn all_distinct(k: usize) -> Self {
        IndexPattern {
            blocks: (0..k).collect(),
        }
    }

    pub fn all_equal(k: usize) -> Self {
        IndexPattern { blocks: vec![0; k] }
    }

    /// Derives the pattern from concrete component indices.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut blocks = Vec::with_capacity(indices.len());
        let mut seen: Vec<usize> = Vec::new();
        for &i in indices {
            match seen.iter().position(|&s| s == i) {
                Some(b) => blocks.push(b),
                None => {
                    blocks.push(seen.len());
                    seen.push(i);
                }
            }
        }
        IndexPattern { blocks }
    }

    /// All set partitions of `k` positions.
    pub fn enumerate(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut blocks = vec![0usize; k];
        fn rec(blocks: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<IndexPattern>) {
            if pos == blocks.len() {
                out.push(IndexPattern {
                    blocks: blocks.clone(),
                });
                return;
            }
            for b in 0..=max_used + 1 {
                blocks[pos] = b;
                rec(blocks, pos + 1, max_used.max(b), out);
            }
        }
        if k == 0 {
            return out;
        }
        blocks[0] = 0;
        rec(&mut blocks, 1, 0, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_all_distinct(&self) -> bool {
        self.blocks.iter().enumerate().all(|(p, &b)| p == b)
    }

    pub fn is_all_equal(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Smallest number of distinct components that realizes the pattern.
    pub fn block_count(&self) -> usize {
        self.blocks.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Representative component indices (block ids themselves).
    pub fn representative_indices(&self) -> Vec<usize> {
        self.blocks.clone()
    }

    /// Position permutations `sigma` with `i_{sigma(p)} = i_p` for all `p`:
    /// products of permutations within each equality block.
    pub fn admissible_permutations(&self) -> Vec<Vec<usize>> {
        let k = self.blocks.len();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.block_count()];
        for (pos, &b) in self.blocks.iter().enumerate() {
            members[b].push(pos);
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..k).collect()];
        for block in &members {
            let block_perms = permutations(block);
            let mut next = Vec::with_capacity(perms.len() * block_perms.len());
            for base in &perms {
                for bp in &block_perms {
                    let mut sigma = base.clone();
                    for (slot, &target) in block.iter().zip(bp) {
                        sigma[*slot] = target;
                    }
                    next.push(sigma);
                }
            }
            perms = next;
        }
        perms
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.block_count()];
        for (pos, &b) in self.blocks.iter().enumerate() {
            members[b].push(pos + 1);
        }
        let parts: Vec<String> = members
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|p| format!("i{p}"))
                    .collect::<Vec<_>>()
                    .join("=")
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (pos, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(pos);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn factorial(k: usize) -> f64 {
    (1..=k).product::<usize>() as f64
}

/// Exact `E_k^q` for the square-truncated expansion of `pattern` under the
/// given component equality pattern.
pub fn exact_error(
    pattern: WeightPattern,
    q: usize,
    delta: f64,
    index_pattern: &IndexPattern,
    table: &CoeffTable,
) -> Result<f64> {
    let k = pattern.multiplicity();
    if index_pattern.len() != k {
        return Err(Error::InvalidConfig(format!(
            "index pattern over {} positions does not fit pattern {pattern}",
            index_pattern.len()
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
    let ik = pattern.l2_norm_sq(delta);
    let scaled = table.scaled_values(delta);
    let n = table.q() + 1;
    let perms = index_pattern.admissible_permutations();

    let mut captured = 0.0;
    let mut j = [0usize; 5];
    let mut jp = [0usize; 5];
    loop {
        let mut idx = 0;
        for &jd in &j[..k] {
            idx = idx * n + jd;
        }
        let c = scaled[idx];
        if c != 0.0 {
            let mut inner = 0.0;
            for sigma in &perms {
                for (p, &s) in sigma.iter().enumerate() {
                    jp[p] = j[s];
                }
                let mut pidx = 0;
                for &jd in &jp[..k] {
                    pidx = pidx * n + jd;
                }
                inner += scaled[pidx];
            }
            captured += c * inner;
        }
        // advance the multi-index over {0..q}^k
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
    let e = ik - captured;
    // the permutation sum is exactly I_k for some configurations; absorb the
    // floating-point dust so the nonnegativity contract holds
    if e < 0.0 && e > -1e-9 * ik.max(f64::MIN_POSITIVE) {
        return Ok(0.0);
    }
    Ok(e)
}

/// Factorial estimate `k! (I_k - sum_{j<=q} C^2)`, valid for every
/// combination of components in `1..m` and any step length.
pub fn error_bound(
    pattern: WeightPattern,
    q: usize,
    delta: f64,
    table: &CoeffTable,
) -> Result<f64> {
    if table.pattern() != pattern || table.q() < q {
        return Err(Error::TableMismatch {
            expected: pattern.to_string(),
            expected_q: q,
            found: table.pattern().to_string(),
            found_q: table.q(),
        });
    }
    let k = pattern.multiplicity();
    let scaled = table.scaled_values(delta);
    let n = table.q() + 1;
    let mut sum_sq = 0.0;
    let mut j = [0usize; 5];
    loop {
        let mut idx = 0;
        for &jd in &j[..k] {
            idx = idx * n + jd;
        }
        sum_sq += scaled[idx] * scaled[idx];
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
    Ok(factorial(k) * (pattern.l2_norm_sq(delta) - sum_sq).max(0.0))
}

/// Closed-form mean-square errors of the multiplicity-2 sampled expansions.
pub fn pair_errors(
    pattern: WeightPattern,
    q: usize,
    delta: f64,
    index_pattern: &IndexPattern,
) -> Result<f64> {
    if index_pattern.len() != 2 {
        return Err(Error::InvalidConfig(format!(
            "index pattern over {} positions does not fit a pair",
            index_pattern.len()
        )));
    }
    let equal = index_pattern.is_all_equal();
    match pattern {
        WeightPattern::W00 => {
            if equal {
                // the antisymmetric expansion is exact when i1 = i2
                Ok(0.0)
            } else {
                Ok(pair_error_00(q, delta))
            }
        }
        WeightPattern::W01 | WeightPattern::W10 => {
            if equal {
                Ok(pair_error_time_weighted_equal(q, delta))
            } else {
                Ok(pair_error_time_weighted_distinct(q, delta))
            }
        }
        other => Err(Error::InvalidConfig(format!(
            "pattern {other} has multiplicity {}, expected 2",
            other.multiplicity()
        ))),
    }
}

/// `(i1 != i2)`: `delta^2/2 (1/2 - sum_{i=1}^q 1/(4i^2-1)) = delta^2/(4(2q+1))`.
pub fn pair_error_00(q: usize, delta: f64) -> f64 {
    let mut sum = 0.0;
    for i in 1..=q {
        sum += 1.0 / (4 * i * i - 1) as f64;
    }
    delta * delta / 2.0 * (0.5 - sum)
}

/// `(01)/(10)` with `i1 != i2`.
pub fn pair_error_time_weighted_distinct(q: usize, delta: f64) -> f64 {
    let mut bracket = 5.0 / 9.0;
    for i in 2..=q {
        bracket -= 2.0 / (4 * i * i - 1) as f64;
    }
    for i in 1..=q {
        let fi = i as f64;
        bracket -= 1.0 / ((2.0 * fi - 1.0).powi(2) * (2.0 * fi + 3.0).powi(2));
    }
    for i in 0..=q {
        let fi = i as f64;
        bracket -= ((fi + 2.0).powi(2) + (fi + 1.0).powi(2))
            / ((2.0 * fi + 1.0) * (2.0 * fi + 5.0) * (2.0 * fi + 3.0).powi(2));
    }
    delta.powi(4) / 16.0 * bracket
}

/// `(01)/(10)` with `i1 = i2`; the two families have equal errors.
pub fn pair_error_time_weighted_equal(q: usize, delta: f64) -> f64 {
    let mut bracket = 1.0 / 9.0;
    for i in 0..=q {
        let fi = i as f64;
        bracket -= 1.0 / ((2.0 * fi + 1.0) * (2.0 * fi + 5.0) * (2.0 * fi + 3.0).powi(2));
    }
    for i in 1..=q {
        let fi = i as f64;
        bracket -= 2.0 / ((2.0 * fi - 1.0).powi(2) * (2.0 * fi + 3.0).powi(2));
    }
    delta.powi(4) / 16.0 * bracket
}

/// Largest pair truncation the selector will consider; the pair expansions
/// cost O(q) per sample, so q can be large, but not unbounded.
pub const PAIR_Q_CAP: usize = 1 << 24;

/// Largest table truncation the selector searches per multiplicity. Exact
/// rational tables grow as `(q+1)^k` with rising polynomial degrees, so the
/// search stops where builds stop being a few seconds; a budget that is
/// still unmet there is reported infeasible with this cap in the error.
pub fn table_q_cap(pattern: WeightPattern) -> usize {
    match pattern.multiplicity() {
        3 => 24,
        4 => 8,
        _ => 5,
    }
    .min(MAX_DEGREE)
}

/// Query points for the monotone search: the error is nonincreasing in `q`,
/// so geometric probing skips most intermediate tables and a short backward
/// scan pins the minimal feasible order.
fn probe_points(cap: usize) -> Vec<usize> {
    let mut points: Vec<usize> = [0usize, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64]
        .iter()
        .copied()
        .filter(|&q| q < cap)
        .collect();
    points.push(cap);
    points
}

/// Smallest `q` for one pattern meeting the budget.
///
/// With `m = 1` every sampled integral has all component indices equal, so
/// the governing expressions are the equal-index exact errors; the all-zero
/// weight patterns are then exact at every order and get `q = 0`. With
/// `m >= 2` the closed pair forms and the factorial bounds govern.
pub fn select_truncation_for(
    pattern: WeightPattern,
    budget: &ErrorBudget,
    m: usize,
    tables: &TableSet,
) -> Result<usize> {
    select_truncation_capped(pattern, budget, m, tables, table_q_cap(pattern))
}

/// [`select_truncation_for`] with an explicit table-search cap (never above
/// the default cap for the pattern).
pub fn select_truncation_with_cap(
    pattern: WeightPattern,
    budget: &ErrorBudget,
    m: usize,
    tables: &TableSet,
    cap: usize,
) -> Result<usize> {
    select_truncation_capped(pattern, budget, m, tables, cap.min(table_q_cap(pattern)))
}

fn select_truncation_capped(
    pattern: WeightPattern,
    budget: &ErrorBudget,
    m: usize,
    tables: &TableSet,
    cap: usize,
) -> Result<usize> {
    use WeightPattern::*;
    let target = budget.target();
    let delta = budget.delta();
    match pattern {
        // multiplicity 1 expansions are finite and exact
        W0 | W1 | W2 => Ok(0),
        W00 => {
            if m == 1 {
                return Ok(0);
            }
            let mut q = if delta * delta / (4.0 * target) <= 1.0 {
                0
            } else {
                ((delta * delta / (4.0 * target) - 1.0) / 2.0).ceil() as usize
            };
            while pair_error_00(q, delta) > target {
                q += 1;
            }
            while q > 0 && pair_error_00(q - 1, delta) <= target {
                q -= 1;
            }
            Ok(q)
        }
        W01 | W10 => {
            let governing = |q: usize| {
                if m == 1 {
                    pair_error_time_weighted_equal(q, delta)
                } else {
                    pair_error_time_weighted_distinct(q, delta)
                        .max(pair_error_time_weighted_equal(q, delta))
                }
            };
            let mut q = 0;
            while governing(q) > target {
                q += 1;
                if q > PAIR_Q_CAP {
                    return Err(Error::InfeasibleTruncation {
                        pattern: pattern.to_string(),
                        cap: PAIR_Q_CAP,
                        budget: target,
                    });
                }
            }
            Ok(q)
        }
        _ => {
            let all_zero = pattern.weight_sum() == 0;
            if m == 1 && all_zero {
                // equal-index expansions of (000), (0000), (00000) are exact
                return Ok(0);
            }
            let equal = IndexPattern::all_equal(pattern.multiplicity());
            let governing = |q: usize| -> Result<f64> {
                let table = tables.get(pattern, q)?;
                if m == 1 {
                    exact_error(pattern, q, delta, &equal, &table)
                } else {
                    error_bound(pattern, q, delta, &table)
                }
            };
            let mut last_failed: Option<usize> = None;
            for probe in probe_points(cap) {
                if governing(probe)? <= target {
                    // minimal q lies after the last failed probe
                    let mut q = last_failed.map_or(0, |f| f + 1);
                    while q < probe {
                        if governing(q)? <= target {
                            break;
                        }
                        q += 1;
                    }
                    return Ok(q);
                }
                last_failed = Some(probe);
            }
            Err(Error::InfeasibleTruncation {
                pattern: pattern.to_string(),
                cap,
                budget: target,
            })
        }
    }
}

/// Minimal truncation orders for all twelve patterns.
pub fn select_truncations(
    budget: &ErrorBudget,
    m: usize,
    tables: &TableSet,
) -> Result<TruncationPlan> {
    let mut plan = TruncationPlan::uniform(0);
    for pattern in WeightPattern::ALL {
        plan.set(pattern, select_truncation_for(pattern, budget, m, tables)?);
    }
    Ok(plan)
}
