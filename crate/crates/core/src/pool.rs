//! Per-step pool of standard normal draws shared by every integral
//! approximation within that step, plus reproducible stream derivation for
//! parallel Monte Carlo.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Matrix of i.i.d. standard normals `zeta_j^{(i)}`, rows `j = 0 .. rows-1`,
/// one column per Wiener component (0-based). All integral approximations of
/// one step must read from the same pool.
#[derive(Debug, Clone)]
pub struct GaussianPool {
    rows: usize,
    components: usize,
    /// Row-major: `values[j * components + i]`.
    values: Vec<f64>,
}

impl GaussianPool {
    /// Draws a pool with rows `0 ..= q_max + 2`; the expansions of the pairs
    /// with one time weight reach basis index `q + 2`.
    pub fn draw<R: Rng + ?Sized>(components: usize, q_max: usize, rng: &mut R) -> Self {
        assert!(components >= 1, "need at least one Wiener component");
        let rows = q_max + 3;
        let values = (0..rows * components)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        GaussianPool {
            rows,
            components,
            values,
        }
    }

    /// Wraps explicit values (row-major); mostly for tests and oracles.
    pub fn from_values(components: usize, rows: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), rows * components);
        GaussianPool {
            rows,
            components,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `zeta_j^{(i)}` with 0-based component index.
    #[inline]
    pub fn zeta(&self, j: usize, component: usize) -> f64 {
        debug_assert!(component < self.components);
        self.values[j * self.components + component]
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Identifies one reproducible random stream within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamId {
    pub seed: u64,
    pub path: u64,
}

/// Derives the generator for `(seed, path, step)`. Distinct keys give
/// independent streams, so paths can run concurrently and in any order while
/// reproducing the same draws.
pub fn derive_stream(seed: u64, path: u64, step: u64) -> ChaCha8Rng {
    let base = mix(seed ^ 0x9E3779B97F4A7C15)
        ^ mix(path.wrapping_add(0xD1B54A32D192ED03))
        ^ mix(step.wrapping_add(0x8CB92BA72F3D8DD7));
    let mut bytes = [0u8; 32];
    for (i, chunk) in bytes.chunks_exact_mut(8).enumerate() {
        let word = mix(base.wrapping_add((i as u64 + 1).wrapping_mul(0xA0761D6478BD642F)));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_size_and_determinism() {
        let mut rng = derive_stream(7, 0, 0);
        let pool = GaussianPool::draw(1, 0, &mut rng);
        assert_eq!(pool.len(), 3);

        let a = GaussianPool::draw(2, 6, &mut derive_stream(42, 3, 5));
        let b = GaussianPool::draw(2, 6, &mut derive_stream(42, 3, 5));
        assert_eq!(a.values, b.values);
        assert_eq!(a.len(), 18);

        let c = GaussianPool::draw(2, 6, &mut derive_stream(42, 3, 6));
        assert_ne!(a.values, c.values);
        let d = GaussianPool::draw(2, 6, &mut derive_stream(42, 4, 5));
        assert_ne!(a.values, d.values);
    }

    #[test]
    fn moments_and_column_independence() {
        let n = 100_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut cross = 0.0;
        for p in 0..n {
            let pool = GaussianPool::draw(2, 0, &mut derive_stream(1234, p as u64, 0));
            let z0 = pool.zeta(0, 0);
            let z1 = pool.zeta(0, 1);
            sum += z0;
            sum_sq += z0 * z0;
            cross += z0 * z1;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let corr = cross / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
        assert!(
            corr.abs() < 4.0 / (n as f64).sqrt(),
            "cross correlation {corr}"
        );
    }
}
