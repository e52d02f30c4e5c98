//! Built-in test systems with every operator composition available in
//! closed form.

use crate::error::Result;
use crate::scheme::SdeCoefficients;

/// Geometric Brownian motion `dx = lambda x dt + mu x dw`.
///
/// Every composition is `lambda^a mu^b x`, where `a` counts generator
/// applications plus one for drift-based words and `b` counts noise
/// derivatives plus one for diffusion-based words.
#[derive(Debug, Clone, Copy)]
pub struct Gbm {
    pub lambda: f64,
    pub mu: f64,
}

impl Gbm {
    pub fn new(lambda: f64, mu: f64) -> Self {
        Gbm { lambda, mu }
    }

    /// Exact solution at time `t` for the Wiener value `w_t`.
    pub fn exact(&self, y0: f64, t: f64, w: f64) -> f64 {
        y0 * ((self.lambda - 0.5 * self.mu * self.mu) * t + self.mu * w).exp()
    }

    fn word(&self, l_count: i32, g_count: i32, y: &[f64]) -> Vec<f64> {
        vec![self.lambda.powi(l_count) * self.mu.powi(g_count) * y[0]]
    }
}

impl SdeCoefficients for Gbm {
    fn dim(&self) -> usize {
        1
    }
    fn noise_dim(&self) -> usize {
        1
    }
    fn drift(&self, y: &[f64], _t: f64) -> Vec<f64> {
        self.word(1, 0, y)
    }
    fn diffusion(&self, _i1: usize, y: &[f64], _t: f64) -> Vec<f64> {
        self.word(0, 1, y)
    }
    fn g_diffusion(&self, _i2: usize, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(0, 2, y))
    }
    fn g_drift(&self, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(1, 1, y))
    }
    fn l_diffusion(&self, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(1, 1, y))
    }
    fn gg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(0, 3, y))
    }
    fn l_drift(&self, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(2, 0, y))
    }
    fn gl_diffusion(&self, _i2: usize, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(1, 2, y))
    }
    fn lg_diffusion(&self, _i2: usize, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(1, 2, y))
    }
    fn gg_drift(&self, _i2: usize, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(1, 2, y))
    }
    fn ggg_diffusion(
        &self,
        _i4: usize,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(0, 4, y))
    }
    fn gl_drift(&self, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(2, 1, y))
    }
    fn ll_diffusion(&self, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(2, 1, y))
    }
    fn lg_drift(&self, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(2, 1, y))
    }
    fn glg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(1, 3, y))
    }
    fn ggl_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(1, 3, y))
    }
    fn ggg_drift(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(1, 3, y))
    }
    fn lgg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(1, 3, y))
    }
    fn gggg_diffusion(
        &self,
        _i5: usize,
        _i4: usize,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(0, 5, y))
    }
    fn ll_drift(&self, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(3, 0, y))
    }
}

/// Scalar linear system with a drift rate that moves linearly in time:
/// `dx = (alpha + beta t) x dt + sigma x dw`.
#[derive(Debug, Clone, Copy)]
pub struct ScalarLinear {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl ScalarLinear {
    pub fn new(alpha: f64, beta: f64, sigma: f64) -> Self {
        ScalarLinear { alpha, beta, sigma }
    }

    fn rate(&self, t: f64) -> f64 {
        self.alpha + self.beta * t
    }

    /// Exact solution given the Wiener value `w_t`.
    pub fn exact(&self, y0: f64, t: f64, w: f64) -> f64 {
        let drift_integral = self.alpha * t + 0.5 * self.beta * t * t;
        y0 * (drift_integral - 0.5 * self.sigma * self.sigma * t + self.sigma * w).exp()
    }
}

impl SdeCoefficients for ScalarLinear {
    fn dim(&self) -> usize {
        1
    }
    fn noise_dim(&self) -> usize {
        1
    }
    fn drift(&self, y: &[f64], t: f64) -> Vec<f64> {
        vec![self.rate(t) * y[0]]
    }
    fn diffusion(&self, _i1: usize, y: &[f64], _t: f64) -> Vec<f64> {
        vec![self.sigma * y[0]]
    }
    fn g_diffusion(&self, _i2: usize, _i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma * self.sigma * y[0]])
    }
    fn g_drift(&self, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma * self.rate(t) * y[0]])
    }
    fn l_diffusion(&self, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma * self.rate(t) * y[0]])
    }
    fn gg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(3) * y[0]])
    }
    fn l_drift(&self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        let r = self.rate(t);
        Ok(vec![(self.beta + r * r) * y[0]])
    }
    fn gl_diffusion(&self, _i2: usize, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma * self.sigma * self.rate(t) * y[0]])
    }
    fn lg_diffusion(&self, _i2: usize, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma * self.sigma * self.rate(t) * y[0]])
    }
    fn gg_drift(&self, _i2: usize, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma * self.sigma * self.rate(t) * y[0]])
    }
    fn ggg_diffusion(
        &self,
        _i4: usize,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(4) * y[0]])
    }
    fn gl_drift(&self, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        let r = self.rate(t);
        Ok(vec![self.sigma * (self.beta + r * r) * y[0]])
    }
    fn ll_diffusion(&self, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        let r = self.rate(t);
        Ok(vec![self.sigma * (self.beta + r * r) * y[0]])
    }
    fn lg_drift(&self, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        let r = self.rate(t);
        Ok(vec![self.sigma * (self.beta + r * r) * y[0]])
    }
    fn glg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(3) * self.rate(t) * y[0]])
    }
    fn ggl_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(3) * self.rate(t) * y[0]])
    }
    fn ggg_drift(&self, _i3: usize, _i2: usize, _i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(3) * self.rate(t) * y[0]])
    }
    fn lgg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(3) * self.rate(t) * y[0]])
    }
    fn gggg_diffusion(
        &self,
        _i5: usize,
        _i4: usize,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![self.sigma.powi(5) * y[0]])
    }
    fn ll_drift(&self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        let r = self.rate(t);
        Ok(vec![(3.0 * self.beta * r + r.powi(3)) * y[0]])
    }
}

/// Two-dimensional bilinear system with two non-commuting noise channels:
/// `dy = A y dt + M_1 y dw^(1) + M_2 y dw^(2)`.
///
/// For linear fields `F y` the operators act by right multiplication of the
/// word: `G_i (F y) = F M_i y` and `L (F y) = F A y`, so every composition
/// is a matrix word applied to the state. `[M_1, M_2] != 0` keeps the mixed
/// iterated integrals essential.
#[derive(Debug, Clone)]
pub struct Bilinear2d {
    pub a: [[f64; 2]; 2],
    pub m1: [[f64; 2]; 2],
    pub m2: [[f64; 2]; 2],
}

type Mat2 = [[f64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn mat_apply(a: &Mat2, y: &[f64]) -> Vec<f64> {
    vec![
        a[0][0] * y[0] + a[0][1] * y[1],
        a[1][0] * y[0] + a[1][1] * y[1],
    ]
}

/// Operator letters of a composition word, in application order.
#[derive(Clone, Copy)]
enum Op {
    G(usize),
    L,
}

impl Bilinear2d {
    pub fn standard() -> Self {
        Bilinear2d {
            a: [[-0.5, 0.2], [0.1, -0.3]],
            m1: [[0.4, 0.1], [0.0, 0.3]],
            m2: [[0.2, 0.0], [0.25, 0.1]],
        }
    }

    fn noise(&self, i: usize) -> &Mat2 {
        match i {
            0 => &self.m1,
            _ => &self.m2,
        }
    }

    fn word(&self, base: Mat2, ops: &[Op], y: &[f64]) -> Vec<f64> {
        let mut acc = base;
        for op in ops {
            acc = match op {
                Op::G(i) => mat_mul(&acc, self.noise(*i)),
                Op::L => mat_mul(&acc, &self.a),
            };
        }
        mat_apply(&acc, y)
    }
}

impl SdeCoefficients for Bilinear2d {
    fn dim(&self) -> usize {
        2
    }
    fn noise_dim(&self) -> usize {
        2
    }
    fn drift(&self, y: &[f64], _t: f64) -> Vec<f64> {
        mat_apply(&self.a, y)
    }
    fn diffusion(&self, i1: usize, y: &[f64], _t: f64) -> Vec<f64> {
        mat_apply(self.noise(i1), y)
    }
    fn g_diffusion(&self, i2: usize, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::G(i2)], y))
    }
    fn g_drift(&self, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::G(i1)], y))
    }
    fn l_diffusion(&self, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::L], y))
    }
    fn gg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::G(i2), Op::G(i3)], y))
    }
    fn l_drift(&self, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::L], y))
    }
    fn gl_diffusion(&self, i2: usize, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::L, Op::G(i2)], y))
    }
    fn lg_diffusion(&self, i2: usize, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::G(i2), Op::L], y))
    }
    fn gg_drift(&self, i2: usize, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::G(i1), Op::G(i2)], y))
    }
    fn ggg_diffusion(
        &self,
        i4: usize,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::G(i2), Op::G(i3), Op::G(i4)], y))
    }
    fn gl_drift(&self, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::L, Op::G(i1)], y))
    }
    fn ll_diffusion(&self, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::L, Op::L], y))
    }
    fn lg_drift(&self, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::G(i1), Op::L], y))
    }
    fn glg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::G(i2), Op::L, Op::G(i3)], y))
    }
    fn ggl_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::L, Op::G(i2), Op::G(i3)], y))
    }
    fn ggg_drift(&self, i3: usize, i2: usize, i1: usize, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::G(i1), Op::G(i2), Op::G(i3)], y))
    }
    fn lgg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(*self.noise(i1), &[Op::G(i2), Op::G(i3), Op::L], y))
    }
    fn gggg_diffusion(
        &self,
        i5: usize,
        i4: usize,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(self.word(
            *self.noise(i1),
            &[Op::G(i2), Op::G(i3), Op::G(i4), Op::G(i5)],
            y,
        ))
    }
    fn ll_drift(&self, y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(self.word(self.a, &[Op::L, Op::L], y))
    }
}

/// Zero-drift, zero-noise system; trajectories are constant.
#[derive(Debug, Clone, Copy)]
pub struct Frozen {
    pub dim: usize,
}

impl SdeCoefficients for Frozen {
    fn dim(&self) -> usize {
        self.dim
    }
    fn noise_dim(&self) -> usize {
        1
    }
    fn drift(&self, _y: &[f64], _t: f64) -> Vec<f64> {
        vec![0.0; self.dim]
    }
    fn diffusion(&self, _i1: usize, _y: &[f64], _t: f64) -> Vec<f64> {
        vec![0.0; self.dim]
    }
    fn g_diffusion(&self, _i2: usize, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn g_drift(&self, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn l_diffusion(&self, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn gg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn l_drift(&self, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn gl_diffusion(&self, _i2: usize, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn lg_diffusion(&self, _i2: usize, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn gg_drift(&self, _i2: usize, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn ggg_diffusion(
        &self,
        _i4: usize,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn gl_drift(&self, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn ll_diffusion(&self, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn lg_drift(&self, _i1: usize, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn glg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn ggl_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn ggg_drift(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn lgg_diffusion(
        &self,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn gggg_diffusion(
        &self,
        _i5: usize,
        _i4: usize,
        _i3: usize,
        _i2: usize,
        _i1: usize,
        _y: &[f64],
        _t: f64,
    ) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
    fn ll_drift(&self, _y: &[f64], _t: f64) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.dim])
    }
}
