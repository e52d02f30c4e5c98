//! Explicit one-step strong schemes of orders 1.5, 2.0 and 2.5 for Ito
//! systems `dx = a(x,t) dt + B(x,t) dw`, assembled from the jointly sampled
//! iterated integrals of each step.
//!
//! The order-1.5 map uses the multiplicity-1..3 all-zero and single-weight
//! integrals; order 2.0 adds the mixed-weight pairs and the multiplicity-4
//! block; order 2.5 adds the squared-weight singles, the weighted triples,
//! the multiplicity-5 block and the deterministic third-order drift terms.

use crate::coeff::TableSet;
use crate::error::{Error, Result};
use crate::error_calc::{select_truncations, ErrorBudget};
use crate::pattern::WeightPattern::*;
use crate::plan::TruncationPlan;
use crate::pool::{derive_stream, GaussianPool, StreamId};
use crate::sampler::{StepIntegrals, StepSampler};

/// Strong convergence order of the one-step map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SchemeOrder {
    Order15,
    Order20,
    Order25,
}

impl SchemeOrder {
    pub fn as_f64(self) -> f64 {
        match self {
            SchemeOrder::Order15 => 1.5,
            SchemeOrder::Order20 => 2.0,
            SchemeOrder::Order25 => 2.5,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1.5" => Ok(SchemeOrder::Order15),
            "2" | "2.0" => Ok(SchemeOrder::Order20),
            "2.5" => Ok(SchemeOrder::Order25),
            other => Err(Error::InvalidConfig(format!(
                "unsupported scheme order `{other}` (use 1.5, 2.0 or 2.5)"
            ))),
        }
    }
}

impl std::fmt::Display for SchemeOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// Drift, diffusion columns and the operator compositions entering the
/// schemes, all evaluated at the current point `(y, t)` and returning
/// vectors of the state dimension.
///
/// `l_*` prefixes apply the generator
/// `L = d/dt + sum a_i d/dx_i + 1/2 sum (B B^T)_{li} d^2/dx_l dx_i`,
/// `g_*` prefixes apply the noise-direction derivative
/// `G_i = sum B_{ji} d/dx_j`; prefixes read left to right in application
/// order, e.g. `gl_diffusion(i2, i1)` is `G_{i2} L B_{i1}`.
///
/// Only `drift` and `diffusion` are required for construction; compositions
/// default to a configuration error naming themselves, so a type only has to
/// supply what the order it is used with actually needs.
#[allow(unused_variables, clippy::too_many_arguments)]
pub trait SdeCoefficients: Sync {
    fn dim(&self) -> usize;
    fn noise_dim(&self) -> usize;

    fn drift(&self, y: &[f64], t: f64) -> Vec<f64>;
    fn diffusion(&self, i1: usize, y: &[f64], t: f64) -> Vec<f64>;

    // order 1.5 compositions
    fn g_diffusion(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i2} B_{i1}", 1.5)
    }
    fn g_drift(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i1} a", 1.5)
    }
    fn l_diffusion(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("L B_{i1}", 1.5)
    }
    fn gg_diffusion(&self, i3: usize, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i3} G_{i2} B_{i1}", 1.5)
    }
    fn l_drift(&self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("L a", 1.5)
    }

    // order 2.0 compositions
    fn gl_diffusion(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i2} L B_{i1}", 2.0)
    }
    fn lg_diffusion(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("L G_{i2} B_{i1}", 2.0)
    }
    fn gg_drift(&self, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i2} G_{i1} a", 2.0)
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
        missing("G_{i4} G_{i3} G_{i2} B_{i1}", 2.0)
    }

    // order 2.5 compositions
    fn gl_drift(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i1} L a", 2.5)
    }
    fn ll_diffusion(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("L L B_{i1}", 2.5)
    }
    fn lg_drift(&self, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("L G_{i1} a", 2.5)
    }
    fn glg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        missing("G_{i3} L G_{i2} B_{i1}", 2.5)
    }
    fn ggl_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        missing("G_{i3} G_{i2} L B_{i1}", 2.5)
    }
    fn ggg_drift(&self, i3: usize, i2: usize, i1: usize, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("G_{i3} G_{i2} G_{i1} a", 2.5)
    }
    fn lgg_diffusion(
        &self,
        i3: usize,
        i2: usize,
        i1: usize,
        y: &[f64],
        t: f64,
    ) -> Result<Vec<f64>> {
        missing("L G_{i3} G_{i2} B_{i1}", 2.5)
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
        missing("G_{i5} G_{i4} G_{i3} G_{i2} B_{i1}", 2.5)
    }
    fn ll_drift(&self, y: &[f64], t: f64) -> Result<Vec<f64>> {
        missing("L L a", 2.5)
    }
}

fn missing(name: &'static str, order: f64) -> Result<Vec<f64>> {
    Err(Error::MissingComposition { name, order })
}

/// State of one trajectory at a grid point `tau_p = p * delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    pub y: Vec<f64>,
    pub step_index: usize,
    pub time: f64,
}

/// Scheme order, step geometry and truncation policy for one run.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub order: SchemeOrder,
    pub delta: f64,
    pub steps: usize,
    pub budget_constant: f64,
    /// Explicit truncation orders; `None` selects them from the budget.
    pub plan: Option<TruncationPlan>,
}

impl SchemeConfig {
    pub fn new(order: SchemeOrder, delta: f64, steps: usize) -> Self {
        SchemeConfig {
            order,
            delta,
            steps,
            budget_constant: 1.0,
            plan: None,
        }
    }

    pub fn with_budget_constant(mut self, c: f64) -> Self {
        self.budget_constant = c;
        self
    }

    pub fn with_plan(mut self, plan: TruncationPlan) -> Self {
        self.plan = Some(plan);
        self
    }

    pub fn total_time(&self) -> f64 {
        self.delta * self.steps as f64
    }
}

/// One-step map of the selected order. The integrals must come from a pool
/// drawn for this step with the plan the solver resolved.
pub fn step(
    coeffs: &dyn SdeCoefficients,
    state: &PathState,
    integrals: &StepIntegrals,
    config: &SchemeConfig,
) -> Result<PathState> {
    let n = coeffs.dim();
    let m = coeffs.noise_dim();
    if integrals.components() != m {
        return Err(Error::InvalidConfig(format!(
            "integrals sampled for {} components, system has {m}",
            integrals.components()
        )));
    }
    let delta = config.delta;
    let y = &state.y;
    let t = state.time;
    let mut next = y.clone();
    let add = |out: &mut Vec<f64>, v: &[f64], w: f64| {
        for (o, x) in out.iter_mut().zip(v) {
            *o += w * x;
        }
    };

    // order 1.5 block
    for i1 in 0..m {
        add(
            &mut next,
            &coeffs.diffusion(i1, y, t),
            integrals.value(W0, &[i1]),
        );
    }
    add(&mut next, &coeffs.drift(y, t), delta);
    for i1 in 0..m {
        for i2 in 0..m {
            add(
                &mut next,
                &coeffs.g_diffusion(i2, i1, y, t)?,
                integrals.value(W00, &[i2, i1]),
            );
        }
    }
    for i1 in 0..m {
        let i0 = integrals.value(W0, &[i1]);
        let i_1 = integrals.value(W1, &[i1]);
        add(&mut next, &coeffs.g_drift(i1, y, t)?, delta * i0 + i_1);
        add(&mut next, &coeffs.l_diffusion(i1, y, t)?, -i_1);
    }
    for i1 in 0..m {
        for i2 in 0..m {
            for i3 in 0..m {
                add(
                    &mut next,
                    &coeffs.gg_diffusion(i3, i2, i1, y, t)?,
                    integrals.value(W000, &[i3, i2, i1]),
                );
            }
        }
    }
    add(&mut next, &coeffs.l_drift(y, t)?, delta * delta / 2.0);

    if config.order >= SchemeOrder::Order20 {
        for i1 in 0..m {
            for i2 in 0..m {
                let idx = [i2, i1];
                let i10 = integrals.value(W10, &idx);
                let i01 = integrals.value(W01, &idx);
                let i00 = integrals.value(W00, &idx);
                add(&mut next, &coeffs.gl_diffusion(i2, i1, y, t)?, i10 - i01);
                add(&mut next, &coeffs.lg_diffusion(i2, i1, y, t)?, -i10);
                add(
                    &mut next,
                    &coeffs.gg_drift(i2, i1, y, t)?,
                    i01 + delta * i00,
                );
            }
        }
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    for i4 in 0..m {
                        add(
                            &mut next,
                            &coeffs.ggg_diffusion(i4, i3, i2, i1, y, t)?,
                            integrals.value(W0000, &[i4, i3, i2, i1]),
                        );
                    }
                }
            }
        }
    }

    if config.order >= SchemeOrder::Order25 {
        for i1 in 0..m {
            let i0 = integrals.value(W0, &[i1]);
            let i_1 = integrals.value(W1, &[i1]);
            let i2v = integrals.value(W2, &[i1]);
            add(
                &mut next,
                &coeffs.gl_drift(i1, y, t)?,
                0.5 * i2v + delta * i_1 + delta * delta / 2.0 * i0,
            );
            add(&mut next, &coeffs.ll_diffusion(i1, y, t)?, 0.5 * i2v);
            add(&mut next, &coeffs.lg_drift(i1, y, t)?, -(i2v + delta * i_1));
        }
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    let idx = [i3, i2, i1];
                    let i100 = integrals.value(W100, &idx);
                    let i010 = integrals.value(W010, &idx);
                    let i001 = integrals.value(W001, &idx);
                    let i000 = integrals.value(W000, &idx);
                    add(
                        &mut next,
                        &coeffs.glg_diffusion(i3, i2, i1, y, t)?,
                        i100 - i010,
                    );
                    add(
                        &mut next,
                        &coeffs.ggl_diffusion(i3, i2, i1, y, t)?,
                        i010 - i001,
                    );
                    add(
                        &mut next,
                        &coeffs.ggg_drift(i3, i2, i1, y, t)?,
                        delta * i000 + i001,
                    );
                    add(&mut next, &coeffs.lgg_diffusion(i3, i2, i1, y, t)?, -i100);
                }
            }
        }
        for i1 in 0..m {
            for i2 in 0..m {
                for i3 in 0..m {
                    for i4 in 0..m {
                        for i5 in 0..m {
                            add(
                                &mut next,
                                &coeffs.gggg_diffusion(i5, i4, i3, i2, i1, y, t)?,
                                integrals.value(W00000, &[i5, i4, i3, i2, i1]),
                            );
                        }
                    }
                }
            }
        }
        add(&mut next, &coeffs.ll_drift(y, t)?, delta.powi(3) / 6.0);
    }

    debug_assert_eq!(next.len(), n);
    Ok(PathState {
        y: next,
        step_index: state.step_index + 1,
        time: (state.step_index + 1) as f64 * delta,
    })
}

/// A scheme bound to one system: the truncation plan is resolved once and
/// the per-step sampler is shared by all paths.
pub struct StrongSolver<'a> {
    coeffs: &'a dyn SdeCoefficients,
    config: SchemeConfig,
    sampler: StepSampler,
}

impl<'a> StrongSolver<'a> {
    pub fn new(
        coeffs: &'a dyn SdeCoefficients,
        config: SchemeConfig,
        tables: &TableSet,
    ) -> Result<Self> {
        let m = coeffs.noise_dim();
        let plan = match &config.plan {
            Some(plan) => plan.clone(),
            None => {
                let budget = ErrorBudget::new(config.budget_constant, config.delta)?;
                select_truncations(&budget, m, tables)?
            }
        };
        let sampler = StepSampler::new(m, config.delta, plan, tables)?;
        Ok(StrongSolver {
            coeffs,
            config,
            sampler,
        })
    }

    pub fn plan(&self) -> &TruncationPlan {
        self.sampler.plan()
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn sampler(&self) -> &StepSampler {
        &self.sampler
    }

    /// Runs one trajectory; `stream` pins every draw, so the same id always
    /// reproduces the same path, independent of scheduling.
    pub fn run_path(&self, y0: &[f64], stream: StreamId) -> Result<Vec<PathState>> {
        let mut states = Vec::with_capacity(self.config.steps + 1);
        states.push(PathState {
            y: y0.to_vec(),
            step_index: 0,
            time: 0.0,
        });
        for p in 0..self.config.steps {
            let mut rng = derive_stream(stream.seed, stream.path, p as u64);
            let pool = GaussianPool::draw(
                self.coeffs.noise_dim(),
                self.sampler.plan().q_max(),
                &mut rng,
            );
            let integrals = self.sampler.sample_step(&pool)?;
            let next = step(
                self.coeffs,
                states.last().unwrap(),
                &integrals,
                &self.config,
            )?;
            if next.y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence { step: p });
            }
            states.push(next);
        }
        Ok(states)
    }

    /// Terminal state only.
    pub fn run_terminal(&self, y0: &[f64], stream: StreamId) -> Result<Vec<f64>> {
        Ok(self.run_path(y0, stream)?.pop().expect("non-empty").y)
    }
}
