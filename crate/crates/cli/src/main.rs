//! Command-line harness: coefficient tables, error/truncation reports,
//! statistical validation of the integral moments, one-step scheme runs and
//! strong-convergence studies, with reproducible seeds and CSV/JSON output.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{sink, Report};
use std::path::PathBuf;
use std::time::Instant;
use taylor_ito::coeff::{CoeffTable, TableSet};
use taylor_ito::error_calc::{
    error_bound, exact_error, pair_errors, select_truncation_for, select_truncation_with_cap,
    ErrorBudget, IndexPattern,
};
use taylor_ito::models::{Bilinear2d, Gbm, ScalarLinear};
use taylor_ito::monte_carlo::{
    gbm_convergence, run_terminal_states, validate_moments, ConvergenceFit,
};
use taylor_ito::pool::{derive_stream, GaussianPool};
use taylor_ito::sampler::StepSampler;
use taylor_ito::scheme::{SchemeConfig, SchemeOrder, SdeCoefficients, StrongSolver};
use taylor_ito::strat::triple_error_terms;
use taylor_ito::{Error, TruncationPlan, WeightPattern};

#[derive(Parser)]
#[command(
    name = "taylor-ito",
    version,
    about = "Mean-square modeling of iterated Ito stochastic integrals and strong one-step schemes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffFormat {
    TableFile,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gbm,
    LinearT,
    Bilinear2d,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an exact coefficient table and write it out
    Coeffs {
        /// Weight pattern, e.g. (000)
        #[arg(long)]
        pattern: String,
        /// Truncation order of the table
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = CoeffFormat::TableFile)]
        format: CoeffFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Step length used when rendering scaled values (csv/json only)
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Per-pattern minimal truncation orders and error values for a budget
    Errors {
        #[arg(long, default_value_t = 1.0)]
        budget_c: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Number of Wiener components the schemes will use
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Cap the table search; infeasible budgets are reported faster with
        /// a low cap
        #[arg(long)]
        table_cap: Option<usize>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Statistical check of integral means and variances against exact targets
    Validate {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Series truncation order applied to every family
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Sample all twelve integral families of one step from a shared pool
    Sample {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        budget_c: f64,
        /// Override the budget-derived plan with a uniform order
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Decay table of the Stratonovich triple-error terms F, G, H
    StratCompare {
        #[arg(long, default_value_t = 12)]
        q_max: usize,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run a scheme on a built-in model and emit terminal states
    Solve {
        #[arg(long, value_enum)]
        model: Model,
        /// Strong order: 1.5, 2.0 or 2.5
        #[arg(long, default_value = "2.0")]
        order: String,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        budget_c: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Strong-convergence slopes on geometric Brownian motion
    Convergence {
        #[arg(long, value_enum, default_value_t = Model::Gbm)]
        model: Model,
        /// Comma-separated list of orders
        #[arg(long, default_value = "1.5,2.0,2.5")]
        orders: String,
        /// Comma-separated geometric step grid
        #[arg(long, default_value = "0.25,0.125,0.0625,0.03125,0.015625")]
        deltas: String,
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        budget_c: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::InfeasibleTruncation { .. } => 4,
                Error::InadmissiblePattern(_)
                | Error::DegreeCap { .. }
                | Error::TableMismatch { .. }
                | Error::MissingComposition { .. }
                | Error::Parse { .. }
                | Error::IncompatibleTable(_)
                | Error::InvalidConfig(_) => 3,
                Error::Io { .. } | Error::Divergence { .. } => 1,
            };
            std::process::ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<std::process::ExitCode, Error> {
    let started = Instant::now();
    match cli.command {
        Command::Coeffs {
            pattern,
            q,
            format,
            out,
            delta,
        } => {
            let pattern: WeightPattern = pattern.parse()?;
            let table = CoeffTable::build(pattern, q)?;
            match format {
                CoeffFormat::TableFile => {
                    let path = out.unwrap_or_else(|| {
                        PathBuf::from(format!(
                            "coeffs_{}_q{q}.json",
                            pattern.label().trim_matches(|c| c == '(' || c == ')')
                        ))
                    });
                    table.save(&path)?;
                    eprintln!("wrote {}", path.display());
                }
                CoeffFormat::Csv | CoeffFormat::Json => {
                    let mut report = Report::new(started);
                    report.set("pattern", pattern.label());
                    report.set("q", q);
                    report.set("delta", delta);
                    let mut rows = Vec::new();
                    let k = pattern.multiplicity();
                    let n = q + 1;
                    let mut j = vec![0usize; k];
                    for idx in 0..table.len() {
                        rows.push(serde_json::json!({
                            "j": j.clone(),
                            "cbar": format!("{:?}", table.cbar(&j)),
                            "scaled": format!("{:.17e}", table.scaled(&j, delta)),
                        }));
                        if idx + 1 < table.len() {
                            for d in (0..k).rev() {
                                j[d] += 1;
                                if j[d] < n {
                                    break;
                                }
                                j[d] = 0;
                            }
                        }
                    }
                    report.set("entries", rows);
                    let csv_mode = matches!(format, CoeffFormat::Csv);
                    report.emit_rows(sink(out)?, csv_mode, "entries", &["j", "cbar", "scaled"])?;
                }
            }
            Ok(std::process::ExitCode::SUCCESS)
        }

        Command::Errors {
            budget_c,
            delta,
            m,
            table_cap,
            output,
        } => {
            let budget = ErrorBudget::new(budget_c, delta)?;
            let tables = TableSet::new();
            let mut rows = Vec::new();
            let mut any_infeasible = false;
            for pattern in WeightPattern::ALL {
                let k = pattern.multiplicity();
                let selected = match table_cap {
                    Some(cap) => select_truncation_with_cap(pattern, &budget, m, &tables, cap),
                    None => select_truncation_for(pattern, &budget, m, &tables),
                };
                match selected {
                    Ok(q) => {
                        let (err_distinct, err_equal, bound) = if k == 1 {
                            (0.0, 0.0, Some(0.0))
                        } else if k == 2 {
                            let d = pair_errors(pattern, q, delta, &IndexPattern::all_distinct(2))?;
                            let e = pair_errors(pattern, q, delta, &IndexPattern::all_equal(2))?;
                            (d, e, None)
                        } else {
                            let table = tables.get(pattern, q)?;
                            let d = exact_error(
                                pattern,
                                q,
                                delta,
                                &IndexPattern::all_distinct(k),
                                &table,
                            )?;
                            let e = exact_error(
                                pattern,
                                q,
                                delta,
                                &IndexPattern::all_equal(k),
                                &table,
                            )?;
                            let b = error_bound(pattern, q, delta, &table)?;
                            (d, e, Some(b))
                        };
                        rows.push(serde_json::json!({
                            "pattern": pattern.label(),
                            "multiplicity": k,
                            "status": "ok",
                            "q": q,
                            "exact_error_distinct": err_distinct,
                            "exact_error_equal": err_equal,
                            "factorial_bound": bound,
                        }));
                    }
                    Err(Error::InfeasibleTruncation { cap, .. }) => {
                        any_infeasible = true;
                        rows.push(serde_json::json!({
                            "pattern": pattern.label(),
                            "multiplicity": k,
                            "status": "infeasible",
                            "q": serde_json::Value::Null,
                            "search_cap": cap,
                        }));
                    }
                    Err(other) => return Err(other),
                }
            }
            let mut report = Report::new(started);
            report.set("budget_c", budget_c);
            report.set("delta", delta);
            report.set("m", m);
            report.set("target", budget.target());
            report.set("patterns", rows);
            report.emit_rows(
                sink(output.out)?,
                matches!(output.format, Format::Csv),
                "patterns",
                &[
                    "pattern",
                    "multiplicity",
                    "status",
                    "q",
                    "exact_error_distinct",
                    "exact_error_equal",
                    "factorial_bound",
                ],
            )?;
            if any_infeasible {
                Ok(std::process::ExitCode::from(4))
            } else {
                Ok(std::process::ExitCode::SUCCESS)
            }
        }

        Command::Validate {
            samples,
            delta,
            q,
            seed,
            output,
        } => {
            if samples < 10_000 {
                return Err(Error::InvalidConfig(format!(
                    "validation needs at least 10^4 samples, got {samples}"
                )));
            }
            let tables = TableSet::new();
            let plan = TruncationPlan::uniform(q);
            let rows = validate_moments(samples, delta, &plan, seed, &tables)?;
            let worst = rows.iter().map(|r| r.z.abs()).fold(0.0f64, f64::max);
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "family": r.family.label(),
                        "indices": r.indices,
                        "statistic": r.statistic,
                        "observed": r.observed,
                        "target": r.target,
                        "z": r.z,
                    })
                })
                .collect();
            let mut report = Report::new(started);
            report.set("samples", samples);
            report.set("delta", delta);
            report.set("q", q);
            report.set("seed", seed);
            report.set("worst_abs_z", worst);
            report.set("pass", worst <= 4.0);
            report.set("moments", json_rows);
            report.emit_rows(
                sink(output.out)?,
                matches!(output.format, Format::Csv),
                "moments",
                &["family", "indices", "statistic", "observed", "target", "z"],
            )?;
            if worst > 4.0 {
                Ok(std::process::ExitCode::from(2))
            } else {
                Ok(std::process::ExitCode::SUCCESS)
            }
        }

        Command::Sample {
            m,
            delta,
            seed,
            budget_c,
            q,
            output,
        } => {
            let tables = TableSet::new();
            let plan = match q {
                Some(q) => TruncationPlan::uniform(q),
                None => {
                    let budget = ErrorBudget::new(budget_c, delta)?;
                    taylor_ito::error_calc::select_truncations(&budget, m, &tables)?
                }
            };
            let sampler = StepSampler::new(m, delta, plan.clone(), &tables)?;
            let pool = GaussianPool::draw(m, plan.q_max(), &mut derive_stream(seed, 0, 0));
            let integrals = sampler.sample_step(&pool)?;
            let mut rows = Vec::new();
            for pattern in WeightPattern::ALL {
                let k = pattern.multiplicity();
                let family = integrals.family(pattern);
                let mut idx = vec![0usize; k];
                for flat in 0..family.len() {
                    rows.push(serde_json::json!({
                        "pattern": pattern.label(),
                        "q": plan.q(pattern),
                        "indices": idx.clone(),
                        "value": family[flat],
                    }));
                    if flat + 1 < family.len() {
                        for d in (0..k).rev() {
                            idx[d] += 1;
                            if idx[d] < m {
                                break;
                            }
                            idx[d] = 0;
                        }
                    }
                }
            }
            let mut report = Report::new(started);
            report.set("m", m);
            report.set("delta", delta);
            report.set("seed", seed);
            report.set("plan", plan_json(&plan));
            report.set("count", rows.len());
            report.set("integrals", rows);
            report.emit_rows(
                sink(output.out)?,
                matches!(output.format, Format::Csv),
                "integrals",
                &["pattern", "q", "indices", "value"],
            )?;
            Ok(std::process::ExitCode::SUCCESS)
        }

        Command::StratCompare {
            q_max,
            delta,
            output,
        } => {
            let tables = TableSet::new();
            let mut rows = Vec::new();
            for q in 0..=q_max {
                let table = tables.get(WeightPattern::W000, q)?;
                let (f, g, h) = triple_error_terms(q, &table, delta)?;
                rows.push(serde_json::json!({ "q": q, "f": f, "g": g, "h": h }));
            }
            let mut report = Report::new(started);
            report.set("delta", delta);
            report.set("q_max", q_max);
            report.set("terms", rows);
            report.emit_rows(
                sink(output.out)?,
                matches!(output.format, Format::Csv),
                "terms",
                &["q", "f", "g", "h"],
            )?;
            Ok(std::process::ExitCode::SUCCESS)
        }

        Command::Solve {
            model,
            order,
            delta,
            t_end,
            paths,
            seed,
            budget_c,
            output,
        } => {
            let order = SchemeOrder::parse(&order)?;
            let steps = (t_end / delta).round().max(1.0) as usize;
            let config = SchemeConfig::new(order, delta, steps).with_budget_constant(budget_c);
            let tables = TableSet::new();
            let (coeffs, y0): (Box<dyn SdeCoefficients>, Vec<f64>) = match model {
                Model::Gbm => (Box::new(Gbm::new(2.0, 0.5)), vec![1.0]),
                Model::LinearT => (Box::new(ScalarLinear::new(1.5, -0.5, 0.4)), vec![1.0]),
                Model::Bilinear2d => (Box::new(Bilinear2d::standard()), vec![1.0, 1.0]),
            };
            let solver = StrongSolver::new(coeffs.as_ref(), config, &tables)?;
            let terminals = run_terminal_states(&solver, &y0, paths, seed)?;
            let rows: Vec<serde_json::Value> = terminals
                .iter()
                .enumerate()
                .map(|(p, y)| serde_json::json!({ "path_id": p, "y": y }))
                .collect();
            let mut report = Report::new(started);
            report.set("model", model_name(model));
            report.set("order", order.as_f64());
            report.set("delta", delta);
            report.set("t_end", t_end);
            report.set("steps", steps);
            report.set("paths", paths);
            report.set("seed", seed);
            report.set("budget_c", budget_c);
            report.set("plan", plan_json(solver.plan()));
            report.set("states", rows);
            report.emit_rows(
                sink(output.out)?,
                matches!(output.format, Format::Csv),
                "states",
                &["path_id", "y"],
            )?;
            Ok(std::process::ExitCode::SUCCESS)
        }

        Command::Convergence {
            model,
            orders,
            deltas,
            paths,
            seed,
            budget_c,
            output,
        } => {
            if !matches!(model, Model::Gbm) {
                return Err(Error::InvalidConfig(
                    "the convergence study couples against the exact solution and supports \
                     only the gbm model"
                        .to_string(),
                ));
            }
            let orders: Vec<SchemeOrder> = orders
                .split(',')
                .map(SchemeOrder::parse)
                .collect::<Result<_, _>>()?;
            let deltas: Vec<f64> = deltas
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidConfig(format!("bad step value `{s}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            if deltas.len() < 4 {
                return Err(Error::InvalidConfig(
                    "the step grid needs at least 4 points".to_string(),
                ));
            }
            let tables = TableSet::new();
            let gbm = Gbm::new(2.0, 0.5);
            let mut fits: Vec<ConvergenceFit> = Vec::new();
            for order in orders {
                fits.push(gbm_convergence(
                    &gbm, 1.0, 1.0, order, &deltas, paths, seed, budget_c, &tables,
                )?);
            }
            let rows: Vec<serde_json::Value> = fits
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "order": f.order,
                        "slope": f.slope,
                        "slope_stderr": f.slope_stderr,
                        "deltas": f.deltas,
                        "mean_abs_errors": f.mean_abs_errors,
                    })
                })
                .collect();
            let mut report = Report::new(started);
            report.set("model", "gbm");
            report.set("paths", paths);
            report.set("seed", seed);
            report.set("budget_c", budget_c);
            report.set("fits", rows);
            report.emit_rows(
                sink(output.out)?,
                matches!(output.format, Format::Csv),
                "fits",
                &[
                    "order",
                    "slope",
                    "slope_stderr",
                    "deltas",
                    "mean_abs_errors",
                ],
            )?;
            Ok(std::process::ExitCode::SUCCESS)
        }
    }
}

fn model_name(model: Model) -> &'static str {
    match model {
        Model::Gbm => "gbm",
        Model::LinearT => "linear-t",
        Model::Bilinear2d => "bilinear2d",
    }
}

fn plan_json(plan: &TruncationPlan) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = plan
        .iter()
        .map(|(p, q)| (p.label().to_string(), serde_json::json!(q)))
        .collect();
    serde_json::Value::Object(map)
}
