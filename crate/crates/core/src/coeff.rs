//! Exact Fourier-Legendre coefficients of the iterated integral kernels.
//!
//! For a pattern `(l_1 ... l_k)` the normalized coefficient is the nested
//! polynomial integral over [-1, 1]
//!
//! ```text
//! Cbar_{j_k ... j_1} = (-1)^{sum l} *
//!     int_{-1}^{1} P_{j_k}(x_k) (x_k+1)^{l_k}
//!       int_{-1}^{x_k} ... int_{-1}^{x_2} P_{j_1}(x_1) (x_1+1)^{l_1} dx_1 ... dx_k
//! ```
//!
//! computed exactly in rational arithmetic. The step-scaled coefficient is
//!
//! ```text
//! C = sqrt(prod (2 j_d + 1)) / 2^{k + sum l} * delta^{k/2 + sum l} * Cbar.
//! ```
//!
//! Tables do not depend on the step length, so one table serves every step
//! size and even variable-step runs.

use crate::basis::{check_degree, legendre_family};
use crate::error::{Error, Result};
use crate::pattern::WeightPattern;
use crate::poly::{format_ratio, parse_ratio, ratio_to_f64, RationalPoly};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, Mutex};

/// Complete table of normalized coefficients for one pattern, over all
/// multi-indices `0 <= j_1, ..., j_k <= q`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pattern: WeightPattern,
    q: usize,
    /// Exact values, indexed with `j_1` as the slowest (major) coordinate.
    cbar: Vec<BigRational>,
    /// The same values converted once to floating point.
    cbar_f64: Vec<f64>,
}

impl CoeffTable {
    /// Builds the table for `pattern` at truncation order `q`. Deterministic
    /// and idempotent; the work is a depth-first sweep that shares the inner
    /// antiderivative chains across outer indices.
    pub fn build(pattern: WeightPattern, q: usize) -> Result<Self> {
        check_degree(q)?;
        let weights = pattern.weights();
        let k = weights.len();
        let n = q + 1;
        let legendre = legendre_family(q);
        // P_j(x) * (x+1)^l for every level weight l that occurs
        let mut weighted: BTreeMap<u32, Vec<RationalPoly>> = BTreeMap::new();
        for &l in weights {
            weighted.entry(l).or_insert_with(|| {
                let mut shift = RationalPoly::one();
                let x_plus_1 = RationalPoly::from_integers(&[1, 1]);
                for _ in 0..l {
                    shift = &shift * &x_plus_1;
                }
                legendre.iter().map(|p| p * &shift).collect()
            });
        }

        let len = n.pow(k as u32);
        let block = len / n;
        let negate = pattern.weight_sum() % 2 == 1;

        let fill_block = |j1: usize| -> Vec<BigRational> {
            let mut out = vec![BigRational::zero(); block];
            let first = &weighted[&weights[0]][j1];
            if k == 1 {
                out[0] = first.integrate_over_minus1_1();
            } else {
                let partial = first.antiderivative_from_minus1();
                fill_level(&weighted, weights, q, 1, &partial, 0, &mut out);
            }
            if negate {
                for v in &mut out {
                    *v = -std::mem::take(v);
                }
            }
            out
        };

        let blocks: Vec<Vec<BigRational>> = run_indexed(n, fill_block);
        let mut cbar = Vec::with_capacity(len);
        for b in blocks {
            cbar.extend(b);
        }
        let cbar_f64 = cbar.iter().map(ratio_to_f64).collect();
        Ok(CoeffTable {
            pattern,
            q,
            cbar,
            cbar_f64,
        })
    }

    pub fn pattern(&self) -> WeightPattern {
        self.pattern
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.cbar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cbar.is_empty()
    }

    /// Flat index of the multi-index `j` (innermost variable first).
    pub fn index(&self, j: &[usize]) -> usize {
        debug_assert_eq!(j.len(), self.pattern.multiplicity());
        let n = self.q + 1;
        let mut idx = 0;
        for &jd in j {
            debug_assert!(jd <= self.q);
            idx = idx * n + jd;
        }
        idx
    }

    pub fn cbar(&self, j: &[usize]) -> &BigRational {
        &self.cbar[self.index(j)]
    }

    pub fn cbar_f64(&self, j: &[usize]) -> f64 {
        self.cbar_f64[self.index(j)]
    }

    fn scale_constant(&self, delta: f64) -> f64 {
        let p = self.pattern;
        delta.powf(p.delta_exponent()) / 2f64.powi(p.multiplicity() as i32 + p.weight_sum() as i32)
    }

    /// Step-scaled coefficient `C` for the multi-index `j`.
    pub fn scaled(&self, j: &[usize], delta: f64) -> f64 {
        let mut root = 1.0;
        for &jd in j {
            root *= (2 * jd + 1) as f64;
        }
        root.sqrt() * self.scale_constant(delta) * self.cbar_f64(j)
    }

    /// All scaled coefficients in table order (`j_1` major).
    pub fn scaled_values(&self, delta: f64) -> Vec<f64> {
        let k = self.pattern.multiplicity();
        let n = self.q + 1;
        let constant = self.scale_constant(delta);
        let mut j = vec![0usize; k];
        let mut out = Vec::with_capacity(self.cbar_f64.len());
        for (idx, &c) in self.cbar_f64.iter().enumerate() {
            let mut root = 1.0;
            for &jd in &j {
                root *= (2 * jd + 1) as f64;
            }
            out.push(root.sqrt() * constant * c);
            if idx + 1 < self.cbar_f64.len() {
                for d in (0..k).rev() {
                    j[d] += 1;
                    if j[d] < n {
                        break;
                    }
                    j[d] = 0;
                }
            }
        }
        out
    }

    /// `sum_{j <= q} C^2` at step length `delta`.
    pub fn sum_scaled_sq(&self, delta: f64) -> f64 {
        self.scaled_values(delta).iter().map(|c| c * c).sum()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = TableFile::from_table(self);
        let body = serde_json::to_string_pretty(&file).expect("table serializes");
        std::fs::write(path, body).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file: TableFile = serde_json::from_str(&body).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.into_table()
    }
}

/// Orders the per-`j_1` block construction; parallel when the `parallel`
/// feature is enabled.
#[cfg(feature = "parallel")]
fn run_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_indexed<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

fn fill_level(
    weighted: &BTreeMap<u32, Vec<RationalPoly>>,
    weights: &[u32],
    q: usize,
    level: usize,
    partial: &RationalPoly,
    offset: usize,
    out: &mut [BigRational],
) {
    let k = weights.len();
    let n = q + 1;
    let polys = &weighted[&weights[level]];
    if level == k - 1 {
        for (jd, p) in polys.iter().enumerate() {
            out[offset + jd] = (p * partial).integrate_over_minus1_1();
        }
    } else {
        let stride = n.pow((k - level - 1) as u32);
        for (jd, p) in polys.iter().enumerate() {
            let next = (p * partial).antiderivative_from_minus1();
            fill_level(
                weighted,
                weights,
                q,
                level + 1,
                &next,
                offset + jd * stride,
                out,
            );
        }
    }
}

/// One-off exact coefficient; prefer [`CoeffTable::build`] (or [`TableSet`])
/// when more than a handful of indices are needed.
pub fn cbar(pattern: WeightPattern, j: &[usize]) -> Result<BigRational> {
    if j.len() != pattern.multiplicity() {
        return Err(Error::InvalidConfig(format!(
            "pattern {pattern} takes {} indices, got {}",
            pattern.multiplicity(),
            j.len()
        )));
    }
    for &jd in j {
        check_degree(jd)?;
    }
    let weights = pattern.weights();
    let q_needed = j.iter().copied().max().unwrap_or(0);
    let legendre = legendre_family(q_needed);
    let x_plus_1 = RationalPoly::from_integers(&[1, 1]);
    let mut partial = RationalPoly::one();
    for (d, (&jd, &l)) in j.iter().zip(weights).enumerate() {
        let mut term = legendre[jd].clone();
        for _ in 0..l {
            term = &term * &x_plus_1;
        }
        term = &term * &partial;
        if d == weights.len() - 1 {
            let mut value = term.integrate_over_minus1_1();
            if pattern.weight_sum() % 2 == 1 {
                value = -value;
            }
            return Ok(value);
        }
        partial = term.antiderivative_from_minus1();
    }
    unreachable!("patterns have multiplicity >= 1")
}

/// One-off step-scaled coefficient.
pub fn scaled(pattern: WeightPattern, j: &[usize], delta: f64) -> Result<f64> {
    let value = cbar(pattern, j)?;
    let mut root = 1.0;
    for &jd in j {
        root *= (2 * jd + 1) as f64;
    }
    let constant = delta.powf(pattern.delta_exponent())
        / 2f64.powi(pattern.multiplicity() as i32 + pattern.weight_sum() as i32);
    Ok(root.sqrt() * constant * ratio_to_f64(&value))
}

/// Memoized collection of coefficient tables keyed by `(pattern, q)`.
/// Completed tables are immutable and shared; building distinct tables from
/// several threads is fine.
#[derive(Default)]
pub struct TableSet {
    tables: Mutex<BTreeMap<(WeightPattern, usize), Arc<CoeffTable>>>,
}

impl TableSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, pattern: WeightPattern, q: usize) -> Result<Arc<CoeffTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(&(pattern, q)) {
            return Ok(Arc::clone(t));
        }
        let built = Arc::new(CoeffTable::build(pattern, q)?);
        let mut guard = self.tables.lock().unwrap();
        let entry = guard
            .entry((pattern, q))
            .or_insert_with(|| Arc::clone(&built));
        Ok(Arc::clone(entry))
    }
}

const TABLE_FORMAT: &str = "fourier-legendre coefficient table";
const TABLE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TableFile {
    format: String,
    version: u32,
    pattern: String,
    q: usize,
    content_hash: String,
    entries: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    j: Vec<usize>,
    cbar: String,
}

impl TableFile {
    fn from_table(table: &CoeffTable) -> Self {
        let k = table.pattern.multiplicity();
        let n = table.q + 1;
        let mut entries = Vec::with_capacity(table.cbar.len());
        let mut j = vec![0usize; k];
        for (idx, value) in table.cbar.iter().enumerate() {
            entries.push(TableEntry {
                j: j.clone(),
                cbar: format_ratio(value),
            });
            if idx + 1 < table.cbar.len() {
                for d in (0..k).rev() {
                    j[d] += 1;
                    if j[d] < n {
                        break;
                    }
                    j[d] = 0;
                }
            }
        }
        let mut file = TableFile {
            format: TABLE_FORMAT.to_string(),
            version: TABLE_VERSION,
            pattern: table.pattern.label().to_string(),
            q: table.q,
            content_hash: String::new(),
            entries,
        };
        file.content_hash = file.hash();
        file
    }

    fn hash(&self) -> String {
        // FNV-1a over the canonical entry listing
        let mut h: u64 = 0xcbf29ce484222325;
        let mut absorb = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        absorb(self.pattern.as_bytes());
        absorb(&self.q.to_le_bytes());
        for e in &self.entries {
            for &jd in &e.j {
                absorb(&jd.to_le_bytes());
            }
            absorb(e.cbar.as_bytes());
            absorb(b";");
        }
        format!("fnv1a:{h:016x}")
    }

    fn into_table(self) -> Result<CoeffTable> {
        if self.format != TABLE_FORMAT {
            return Err(Error::IncompatibleTable(format!(
                "unknown format tag `{}`",
                self.format
            )));
        }
        if self.version != TABLE_VERSION {
            return Err(Error::IncompatibleTable(format!(
                "file version {} does not match supported version {}",
                self.version, TABLE_VERSION
            )));
        }
        let pattern: WeightPattern = self
            .pattern
            .parse()
            .map_err(|e| Error::IncompatibleTable(format!("{e}")))?;
        let expected_hash = self.hash();
        if self.content_hash != expected_hash {
            return Err(Error::IncompatibleTable(format!(
                "content hash {} does not match recomputed {expected_hash}",
                self.content_hash
            )));
        }
        let k = pattern.multiplicity();
        let n = self.q + 1;
        let len = n.pow(k as u32);
        if self.entries.len() != len {
            return Err(Error::IncompatibleTable(format!(
                "pattern {pattern} at q = {} requires {len} entries, file has {}",
                self.q,
                self.entries.len()
            )));
        }
        let mut cbar = vec![None::<BigRational>; len];
        for e in &self.entries {
            if e.j.len() != k {
                return Err(Error::IncompatibleTable(format!(
                    "entry index {:?} does not match pattern {pattern}",
                    e.j
                )));
            }
            if e.j.iter().any(|&jd| jd > self.q) {
                return Err(Error::IncompatibleTable(format!(
                    "entry index {:?} exceeds table order {}",
                    e.j, self.q
                )));
            }
            let mut idx = 0;
            for &jd in &e.j {
                idx = idx * n + jd;
            }
            let value = parse_ratio(&e.cbar).ok_or_else(|| {
                Error::IncompatibleTable(format!("malformed rational `{}`", e.cbar))
            })?;
            if cbar[idx].replace(value).is_some() {
                return Err(Error::IncompatibleTable(format!(
                    "duplicate entry for index {:?}",
                    e.j
                )));
            }
        }
        let cbar: Vec<BigRational> = cbar
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::IncompatibleTable("missing entries".to_string()))?;
        let cbar_f64 = cbar.iter().map(ratio_to_f64).collect();
        Ok(CoeffTable {
            pattern,
            q: self.q,
            cbar,
            cbar_f64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::legendre_value;
    use crate::pattern::WeightPattern::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn triple_all_zero_index() {
        // int_{-1}^{1} (z+1)^2/2 dz = 4/3
        assert_eq!(cbar(W000, &[0, 0, 0]).unwrap(), rat(4, 3));
    }

    #[test]
    fn scaled_examples() {
        assert!((scaled(W000, &[0, 0, 0], 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let delta = 0.37;
        assert!((scaled(W0, &[0], delta).unwrap() - delta.sqrt()).abs() < 1e-15);
        assert!((scaled(W00000, &[0; 5], 1.0).unwrap() - 1.0 / 120.0).abs() < 1e-15);
        // the 1/sqrt(3) cross term of the double integral
        let c10 = scaled(W00, &[0, 1], 1.0).unwrap();
        assert!((c10 - 0.5 / 3f64.sqrt()).abs() < 1e-15);
        let c01 = scaled(W00, &[1, 0], 1.0).unwrap();
        assert!((c01 + 0.5 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_weighted_coefficients_match_closed_expansions() {
        // weight (t - tau): coefficients of -(delta^{3/2}/2)(z0 + z1/sqrt(3))
        assert!((scaled(W1, &[0], 1.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((scaled(W1, &[1], 1.0).unwrap() + 0.5 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(cbar(W1, &[2]).unwrap(), rat(0, 1));
        // weight (t - tau)^2: delta^{5/2}/3 (z0 + sqrt(3)/2 z1 + 1/(2 sqrt 5) z2)
        assert!((scaled(W2, &[0], 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((scaled(W2, &[1], 1.0).unwrap() - 3f64.sqrt() / 6.0).abs() < 1e-15);
        assert!((scaled(W2, &[2], 1.0).unwrap() - 1.0 / (6.0 * 5f64.sqrt())).abs() < 1e-15);
    }

    /// Nested Gauss-Legendre quadrature oracle for the normalized integrals,
    /// entirely in floating point and independent of the rational pipeline.
    mod quadrature {
        use super::*;

        pub fn gauss_nodes(n: usize) -> Vec<(f64, f64)> {
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                for _ in 0..60 {
                    let p = legendre_value(n, x);
                    let pm1 = legendre_value(n - 1, x);
                    let dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
                    let dx = p / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                let dp = n as f64 * (x * legendre_value(n, x) - legendre_value(n - 1, x))
                    / (x * x - 1.0);
                out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
            }
            out
        }

        /// Iterated integral over -1 < x_1 < ... < x_k < 1 of
        /// prod P_{j_d}(x_d) (x_d + 1)^{l_d}, with the leading sign.
        pub fn cbar_oracle(pattern: WeightPattern, j: &[usize]) -> f64 {
            let weights = pattern.weights();
            let nodes = gauss_nodes(30);
            let sign = if pattern.weight_sum() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            sign * nested(&nodes, weights, j, weights.len() - 1, 1.0)
        }

        fn nested(
            nodes: &[(f64, f64)],
            weights: &[u32],
            j: &[usize],
            level: usize,
            upper: f64,
        ) -> f64 {
            let half = (upper + 1.0) / 2.0;
            let mut acc = 0.0;
            for &(u, w) in nodes {
                let x = -1.0 + half * (u + 1.0);
                let mut f = legendre_value(j[level], x) * (x + 1.0).powi(weights[level] as i32);
                if level > 0 {
                    f *= nested(nodes, weights, j, level - 1, x);
                }
                acc += w * f * half;
            }
            acc
        }
    }

    #[test]
    fn quadrature_oracle_agrees_with_exact_values() {
        use quadrature::cbar_oracle;
        let cases: Vec<(WeightPattern, Vec<usize>)> = vec![
            (W000, vec![0, 0, 1]),
            (W000, vec![2, 1, 0]),
            (W00, vec![0, 1]),
            (W100, vec![1, 0, 2]),
            (W010, vec![0, 2, 1]),
            (W001, vec![1, 1, 1]),
            (W0000, vec![1, 0, 2, 0]),
        ];
        for (pattern, j) in cases {
            let exact = ratio_to_f64(&cbar(pattern, &j).unwrap());
            let approx = cbar_oracle(pattern, &j);
            assert!(
                (exact - approx).abs() < 1e-12,
                "{pattern} {j:?}: exact {exact} oracle {approx}"
            );
        }
    }

    #[test]
    fn table_matches_one_off_values() {
        let table = CoeffTable::build(W001, 3).unwrap();
        for j1 in 0..=3 {
            for j2 in 0..=3 {
                for j3 in 0..=3 {
                    let j = [j1, j2, j3];
                    assert_eq!(table.cbar(&j), &cbar(W001, &j).unwrap());
                }
            }
        }
    }

    #[test]
    fn all_zero_patterns_give_simplex_volume() {
        for (pattern, k) in [(W00, 2), (W000, 3), (W0000, 4), (W00000, 5)] {
            let table = CoeffTable::build(pattern, 0).unwrap();
            let zeros = vec![0usize; k];
            let factorial: f64 = (1..=k).product::<usize>() as f64;
            assert!((table.scaled(&zeros, 1.0) - 1.0 / factorial).abs() < 1e-15);
        }
    }

    #[test]
    fn sum_of_squares_monotone_and_bounded() {
        for pattern in [W000, W100, W0000] {
            let ik = pattern.l2_norm_sq(1.0);
            let mut prev = 0.0;
            for q in 0..=4 {
                let s = CoeffTable::build(pattern, q).unwrap().sum_scaled_sq(1.0);
                assert!(s >= prev - 1e-15, "{pattern} q={q}");
                assert!(s <= ik + 1e-15, "{pattern} q={q}");
                prev = s;
            }
        }
    }

    #[test]
    fn float_conversion_accuracy() {
        let table = CoeffTable::build(W000, 5).unwrap();
        for j1 in 0..=5 {
            for j2 in 0..=5 {
                for j3 in 0..=5 {
                    let r = table.cbar(&[j1, j2, j3]);
                    assert!(crate::poly::ratio_f64_relative_error(r) < 1e-15);
                }
            }
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = std::env::temp_dir().join("taylor-ito-table-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w000_q3.json");
        let table = CoeffTable::build(W000, 3).unwrap();
        table.save(&path).unwrap();
        let loaded = CoeffTable::load(&path).unwrap();
        assert_eq!(loaded.pattern(), table.pattern());
        assert_eq!(loaded.q(), table.q());
        assert_eq!(loaded.cbar, table.cbar);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let dir = std::env::temp_dir().join("taylor-ito-table-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("truncated.json");
        let table = CoeffTable::build(W00, 2).unwrap();
        table.save(&path).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &body[..body.len() / 2]).unwrap();
        assert!(matches!(CoeffTable::load(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn wrong_pattern_tag_is_incompatible() {
        let dir = std::env::temp_dir().join("taylor-ito-table-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("wrong_pattern.json");
        let table = CoeffTable::build(W000, 1).unwrap();
        table.save(&path).unwrap();
        let body = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"(000)\"", "\"(00)\"");
        std::fs::write(&path, body).unwrap();
        assert!(matches!(
            CoeffTable::load(&path),
            Err(Error::IncompatibleTable(_))
        ));
    }

    #[test]
    fn version_mismatch_is_incompatible() {
        let dir = std::env::temp_dir().join("taylor-ito-table-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("wrong_version.json");
        let table = CoeffTable::build(W00, 1).unwrap();
        table.save(&path).unwrap();
        let body = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"version\": 1", "\"version\": 2");
        std::fs::write(&path, body).unwrap();
        assert!(matches!(
            CoeffTable::load(&path),
            Err(Error::IncompatibleTable(_))
        ));
    }

    #[test]
    fn table_set_memoizes() {
        let set = TableSet::new();
        let a = set.get(W000, 2).unwrap();
        let b = set.get(W000, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn degree_cap_rejected() {
        assert!(matches!(
            CoeffTable::build(W00, crate::basis::MAX_DEGREE + 1),
            Err(Error::DegreeCap { .. })
        ));
    }
}
