//! Mean-square modeling of iterated Ito stochastic integrals of
//! multiplicities 1 to 5 by multiple Fourier-Legendre series, with the exact
//! error calculus needed to pick truncation orders, and the explicit one-step
//! strong schemes of orders 1.5, 2.0 and 2.5 built on those integrals.
//!
//! ```
//! use taylor_ito::coeff::TableSet;
//! use taylor_ito::models::Gbm;
//! use taylor_ito::monte_carlo::run_terminal_states;
//! use taylor_ito::scheme::{SchemeConfig, SchemeOrder, StrongSolver};
//!
//! let tables = TableSet::new();
//! let gbm = Gbm::new(2.0, 0.5);
//! let config = SchemeConfig::new(SchemeOrder::Order25, 0.125, 8);
//! let solver = StrongSolver::new(&gbm, config, &tables)?;
//! let terminals = run_terminal_states(&solver, &[1.0], 256, 42)?;
//! assert_eq!(terminals.len(), 256);
//! # Ok::<(), taylor_ito::Error>(())
//! ```

pub mod basis;
pub mod coeff;
pub mod error;
pub mod error_calc;
pub mod fd;
pub mod models;
pub mod monte_carlo;
pub mod pattern;
pub mod plan;
pub mod poly;
pub mod pool;
pub mod sampler;
pub mod scheme;
pub mod strat;

pub use crate::error::{Error, Result};
pub use crate::pattern::WeightPattern;
pub use crate::plan::TruncationPlan;
