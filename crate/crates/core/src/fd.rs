//! Finite-difference fallback for models whose operator compositions are not
//! available analytically: only drift and diffusion closures are supplied,
//! and every composition is built by applying the generator and the
//! noise-direction derivatives with central differences (O(h^2) per
//! application).

use crate::error::Result;
use crate::scheme::SdeCoefficients;

type Field<'s> = Box<dyn Fn(&[f64], f64) -> Vec<f64> + 's>;

/// Wraps `a(y, t)` and column callables `B_i(y, t)` into a full coefficient
/// provider.
pub struct FiniteDifference<A, B> {
    dim: usize,
    noise_dim: usize,
    drift_fn: A,
    diffusion_fn: B,
    bump: f64,
}

impl<A, B> FiniteDifference<A, B>
where
    A: Fn(&[f64], f64) -> Vec<f64> + Sync,
    B: Fn(usize, &[f64], f64) -> Vec<f64> + Sync,
{
    pub fn new(dim: usize, noise_dim: usize, drift_fn: A, diffusion_fn: B, bump: f64) -> Self {
        assert!(bump > 0.0, "difference step must be positive");
        FiniteDifference {
            dim,
            noise_dim,
            drift_fn,
            diffusion_fn,
            bump,
        }
    }

    fn drift_field(&self) -> Field<'_> {
        Box::new(move |y, t| (self.drift_fn)(y, t))
    }

    fn diffusion_field(&self, i: usize) -> Field<'_> {
        Box::new(move |y, t| (self.diffusion_fn)(i, y, t))
    }

    /// Difference step for the `level`-th operator application. Outer
    /// stencils differentiate fields that are themselves stencils, so their
    /// values carry rounding noise of the inner step; widening the outer
    /// step keeps that noise from being amplified. Each application stays
    /// O(h^2) in its own step.
    fn level_bump(&self, level: usize) -> f64 {
        self.bump * 8f64.powi(level as i32)
    }

    /// `G_i f = sum_j B_{ji} df/dy_j`, differences in the state only.
    fn apply_g<'s>(&'s self, i: usize, f: Field<'s>, level: usize) -> Field<'s> {
        let h = self.level_bump(level);
        let n = self.dim;
        Box::new(move |y, t| {
            let b = (self.diffusion_fn)(i, y, t);
            let mut out = vec![0.0; n];
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            for j in 0..n {
                yp[j] = y[j] + h;
                ym[j] = y[j] - h;
                let fp = f(&yp, t);
                let fm = f(&ym, t);
                for r in 0..n {
                    out[r] += b[j] * (fp[r] - fm[r]) / (2.0 * h);
                }
                yp[j] = y[j];
                ym[j] = y[j];
            }
            out
        })
    }

    /// `L f = df/dt + sum_j a_j df/dy_j + 1/2 sum_{l,r} (B B^T)_{lr} d2f/dy_l dy_r`.
    fn apply_l<'s>(&'s self, f: Field<'s>, level: usize) -> Field<'s> {
        let h = self.level_bump(level);
        let n = self.dim;
        let m = self.noise_dim;
        Box::new(move |y, t| {
            let mut out = vec![0.0; n];
            let ft_p = f(y, t + h);
            let ft_m = f(y, t - h);
            for r in 0..n {
                out[r] += (ft_p[r] - ft_m[r]) / (2.0 * h);
            }

            let a = (self.drift_fn)(y, t);
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            for j in 0..n {
                yp[j] = y[j] + h;
                ym[j] = y[j] - h;
                let fp = f(&yp, t);
                let fm = f(&ym, t);
                for r in 0..n {
                    out[r] += a[j] * (fp[r] - fm[r]) / (2.0 * h);
                }
                yp[j] = y[j];
                ym[j] = y[j];
            }

            // diffusion matrix columns at (y, t)
            let cols: Vec<Vec<f64>> = (0..m).map(|k| (self.diffusion_fn)(k, y, t)).collect();
            let f0 = f(y, t);
            let mut work = y.to_vec();
            for l in 0..n {
                for r_idx in l..n {
                    let mut d2 = vec![0.0; n];
                    if l == r_idx {
                        work[l] = y[l] + h;
                        let fp = f(&work, t);
                        work[l] = y[l] - h;
                        let fm = f(&work, t);
                        work[l] = y[l];
                        for r in 0..n {
                            d2[r] = (fp[r] - 2.0 * f0[r] + fm[r]) / (h * h);
                        }
                    } else {
                        let mut eval = |sl: f64, sr: f64| {
                            work[l] = y[l] + sl * h;
                            work[r_idx] = y[r_idx] + sr * h;
                            let v = f(&work, t);
                            work[l] = y[l];
                            work[r_idx] = y[r_idx];
                            v
                        };
                        let pp = eval(1.0, 1.0);
                        let pm = eval(1.0, -1.0);
                        let mp = eval(-1.0, 1.0);
                        let mm = eval(-1.0, -1.0);
                        for r in 0..n {
                            d2[r] = (pp[r] - pm[r] - mp[r] + mm[r]) / (4.0 * h * h);
                        }
                    }
                    let mut weight = 0.0;
                    for col in &cols {
                        weight += col[l] * col[r_idx];
                    }
                    // off-diagonal pairs appear twice in the symmetric sum
                    let factor = if l == r_idx { 0.5 } else { 1.0 };
                    for r in 0..n {
                        out[r] += factor * weight * d2[r];
                    }
                }
            }
            out
        })
    }

    fn compose(&self, base: Field<'_>, word: &[Letter], y: &[f64], t: f64) -> Vec<f64> {
        let mut field = base;
        for (level, letter) in word.iter().enumerate() {
            field = match letter {
                Letter::G(i) => self.apply_g(*i, field, level),
                Letter::L => self.apply_l(field, level),
            };
        }
        field(y, t)
    }
}

#[derive(Clone, Copy)]
enum Letter {
    G(usize),
    L,
}

impl<A, B> SdeCoefficients for FiniteDifference<A, B>
where
    A: Fn(&[f64], f64) -> Vec<f64> + Sync,
    B: Fn(usize, &[f64], f64) -> Vec<f64> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn noise_dim(&self) -> usize {
        self.noise_dim
    }
    fn drift(&self, y: &[f64], t: f64) -> Vec<f64> {
        (self.drift_fn)(y, t)
    }
    fn diffusion(&self, i1: usize, y: &[f64], t: f64) -> Vec<f64> {
        (self.diffusion_fn)(i1, y, t)
    }
    fn g_diffusion(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.diffusion_field(i1), &[Letter::G(i2)], y, t))
    }
    fn g_drift(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.drift_field(), &[Letter::G(i1)], y, t))
    }
    fn l_diffusion(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.diffusion_field(i1), &[Letter::L], y, t))
    }
    fn gg_diffusion(&self, i3: usize, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.diffusion_field(i1),
            &[Letter::G(i2), Letter::G(i3)],
            y,
            t,
        ))
    }
    fn l_drift(&self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.drift_field(), &[Letter::L], y, t))
    }
    fn gl_diffusion(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.diffusion_field(i1), &[Letter::L, Letter::G(i2)], y, t))
    }
    fn lg_diffusion(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.diffusion_field(i1), &[Letter::G(i2), Letter::L], y, t))
    }
    fn gg_drift(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.drift_field(), &[Letter::G(i1), Letter::G(i2)], y, t))
    }
    fn ggg_diffusion(
        &self,
        i4: usize,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.diffusion_field(i1),
            &[Letter::G(i2), Letter::G(i3), Letter::G(i4)],
            y,
            t,
        ))
    }
    fn gl_drift(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.drift_field(), &[Letter::L, Letter::G(i1)], y, t))
    }
    fn ll_diffusion(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.diffusion_field(i1), &[Letter::L, Letter::L], y, t))
    }
    fn lg_drift(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.drift_field(), &[Letter::G(i1), Letter::L], y, t))
    }
    fn glg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.diffusion_field(i1),
            &[Letter::G(i2), Letter::L, Letter::G(i3)],
            y,
            t,
        ))
    }
    fn ggl_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.diffusion_field(i1),
            &[Letter::L, Letter::G(i2), Letter::G(i3)],
            y,
            t,
        ))
    }
    fn ggg_drift(&self, i3: usize, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.drift_field(),
            &[Letter::G(i1), Letter::G(i2), Letter::G(i3)],
            y,
            t,
        ))
    }
    fn lgg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.diffusion_field(i1),
            &[Letter::G(i2), Letter::G(i3), Letter::L],
            y,
            t,
        ))
    }
    fn gggg_diffusion(
        &self,
        i5: usize,
        i4: usize,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.compose(
            self.diffusion_field(i1),
            &[Letter::G(i2), Letter::G(i3), Letter::G(i4), Letter::G(i5)],
            y,
            t,
        ))
    }
    fn ll_drift(&self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(self.compose(self.drift_field(), &[Letter::L, Letter::L], y, t))
    }
}
