//! Executes a validated configuration and writes its outputs.
//!
//! Every run ends with a norm-closure self-check on the unpruned state
//! (surviving probability plus absorbed probability must be 1); a violation
//! is reported with a dedicated exit code because it means the simulation
//! itself, not the user input, went wrong.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use walk_core::ctqw::{Graph, GeneratorMatrix};
use walk_core::{
    Distribution, JointDistribution, SingleParticleState, Topology, TwoParticleState,
};

use crate::config::{
    ClassicalConfig, CtqwConfig, OutputFormat, RunConfig, SingleConfig, SweepConfig, SweepWalker,
    TwoConfig,
};
use crate::output::{self, emit, with_period_suffix};
use crate::svg;
use crate::CliError;

const DTQW_CLOSURE_TOL: f64 = 1e-12;
const CTQW_CLOSURE_TOL: f64 = 1e-10;
/// Emitted-file pruning threshold for continuous-time probabilities, matching
/// the discrete engines' distribution extraction.
const PRUNE_EPS: f64 = 1e-15;

pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    match config {
        RunConfig::Single(cfg) => run_single(cfg),
        RunConfig::Two(cfg) => run_two(cfg),
        RunConfig::Ctqw(cfg) => run_ctqw(cfg),
        RunConfig::Classical(cfg) => run_classical(cfg),
        RunConfig::Sweep(cfg) => run_sweep(cfg),
    }
}

fn check_closure(label: &str, survival: f64, absorbed: f64, tol: f64) -> Result<(), CliError> {
    let closure = survival + absorbed;
    if (closure - 1.0).abs() > tol {
        return Err(CliError::SelfCheck(format!(
            "{label}: surviving + absorbed probability is {closure}, expected 1"
        )));
    }
    Ok(())
}

fn usage(e: walk_core::WalkError) -> CliError {
    CliError::Usage(e.to_string())
}

fn is_absorbing(topology: Topology) -> bool {
    matches!(topology, Topology::Absorbing { .. })
}

fn run_single(cfg: &SingleConfig) -> Result<(), CliError> {
    let initial =
        SingleParticleState::point(cfg.topology, 0, cfg.init.0, cfg.init.1).map_err(usage)?;
    let config_json = json!({
        "mode": "single",
        "topology": cfg.topology_label,
        "coin": cfg.coin_label,
        "init_coin": cfg.init_label,
        "steps": cfg.steps,
        "trace": cfg.trace,
    });

    if cfg.trace {
        let reports = initial.evolve_with_trace(&cfg.coin, cfg.steps);
        for report in &reports {
            check_closure(
                &format!("step {}", report.step_index),
                report.state.norm().powi(2),
                report.state.absorbed(),
                DTQW_CLOSURE_TOL,
            )?;
        }
        let dists: Vec<(usize, Distribution)> = reports
            .iter()
            .map(|r| (r.step_index, r.state.position_distribution()))
            .collect();
        let data = match cfg.io.format {
            OutputFormat::Csv => {
                output::csv_distribution_trace(dists.iter().map(|(k, d)| (*k, d)))
            }
            OutputFormat::Json => {
                let steps: Vec<Value> = reports
                    .iter()
                    .zip(&dists)
                    .map(|(report, (k, dist))| {
                        let mut entry = serde_json::Map::new();
                        entry.insert("step".into(), json!(k));
                        entry.insert(
                            "distribution".into(),
                            output::json_distribution_value(dist),
                        );
                        if is_absorbing(cfg.topology) {
                            entry.insert("absorbed".into(), json!(report.state.absorbed()));
                        }
                        Value::Object(entry)
                    })
                    .collect();
                output::json_document(config_json, vec![("trace", Value::Array(steps))])
            }
        };
        emit(cfg.io.out.as_deref(), &data)?;
        if let Some(plot) = &cfg.io.plot {
            let (_, final_dist) = dists.last().expect("trace always has a step-0 report");
            let chart = svg::bar_chart(&plot_title_single(cfg), final_dist);
            emit(Some(plot), &chart)?;
        }
        return Ok(());
    }

    let state = initial.evolve(&cfg.coin, cfg.steps);
    check_closure(
        "final state",
        state.norm().powi(2),
        state.absorbed(),
        DTQW_CLOSURE_TOL,
    )?;
    let dist = state.position_distribution();
    let data = match cfg.io.format {
        OutputFormat::Csv => output::csv_distribution(&dist),
        OutputFormat::Json => {
            let mut fields = vec![("distribution", output::json_distribution_value(&dist))];
            if is_absorbing(cfg.topology) {
                fields.push(("absorbed", json!(state.absorbed())));
            }
            output::json_document(config_json, fields)
        }
    };
    emit(cfg.io.out.as_deref(), &data)?;
    if let Some(plot) = &cfg.io.plot {
        emit(Some(plot), &svg::bar_chart(&plot_title_single(cfg), &dist))?;
    }
    Ok(())
}

fn plot_title_single(cfg: &SingleConfig) -> String {
    format!(
        "single walker, {}, coin {}, init {}, {} steps",
        cfg.topology_label, cfg.coin_label, cfg.init_label, cfg.steps
    )
}

fn run_two(cfg: &TwoConfig) -> Result<(), CliError> {
    let initial = TwoParticleState::initial(cfg.kind, cfg.topology).map_err(usage)?;
    let config_json = json!({
        "mode": "two",
        "topology": cfg.topology_label,
        "coin": cfg.coin_label,
        "state": cfg.kind_label,
        "steps": cfg.steps,
        "trace": cfg.trace,
    });
    let title = format!(
        "two walkers, {}, coin {}, {} state, {} steps",
        cfg.topology_label, cfg.coin_label, cfg.kind_label, cfg.steps
    );

    if cfg.trace {
        let mut states = Vec::with_capacity(cfg.steps + 1);
        states.push(initial);
        for _ in 0..cfg.steps {
            let next = states.last().unwrap().step(&cfg.coin);
            states.push(next);
        }
        let mut dists = Vec::with_capacity(states.len());
        for (k, state) in states.iter().enumerate() {
            check_closure(
                &format!("step {k}"),
                state.norm().powi(2),
                state.absorbed(),
                DTQW_CLOSURE_TOL,
            )?;
            dists.push((k, state.joint_distribution()));
        }
        let data = match cfg.io.format {
            OutputFormat::Csv => output::csv_joint_trace(dists.iter().map(|(k, d)| (*k, d))),
            OutputFormat::Json => {
                let steps: Vec<Value> = states
                    .iter()
                    .zip(&dists)
                    .map(|(state, (k, dist))| {
                        let mut entry = serde_json::Map::new();
                        entry.insert("step".into(), json!(k));
                        entry.insert("joint".into(), output::json_joint_value(dist));
                        if is_absorbing(cfg.topology) {
                            entry.insert("absorbed".into(), json!(state.absorbed()));
                        }
                        Value::Object(entry)
                    })
                    .collect();
                output::json_document(config_json, vec![("trace", Value::Array(steps))])
            }
        };
        emit(cfg.io.out.as_deref(), &data)?;
        if let Some(plot) = &cfg.io.plot {
            let (_, final_dist) = dists.last().unwrap();
            emit(Some(plot), &svg::heat_map(&title, final_dist))?;
        }
        return Ok(());
    }

    let state = initial.evolve(&cfg.coin, cfg.steps);
    check_closure(
        "final state",
        state.norm().powi(2),
        state.absorbed(),
        DTQW_CLOSURE_TOL,
    )?;
    let dist = state.joint_distribution();
    let data = match cfg.io.format {
        OutputFormat::Csv => output::csv_joint(&dist),
        OutputFormat::Json => {
            let mut fields = vec![("joint", output::json_joint_value(&dist))];
            if is_absorbing(cfg.topology) {
                fields.push(("absorbed", json!(state.absorbed())));
            }
            output::json_document(config_json, fields)
        }
    };
    emit(cfg.io.out.as_deref(), &data)?;
    if let Some(plot) = &cfg.io.plot {
        emit(Some(plot), &svg::heat_map(&title, &dist))?;
    }
    Ok(())
}

fn run_ctqw(cfg: &CtqwConfig) -> Result<(), CliError> {
    let generator = GeneratorMatrix::new(&cfg.graph, cfg.gamma).map_err(usage)?;
    let dim = generator.dim();

    let probabilities: Vec<f64> = if cfg.classical {
        let mut p0 = vec![0.0; dim];
        p0[cfg.start] = 1.0;
        generator.evolve_classical(&p0, cfg.time).map_err(usage)?
    } else {
        let mut psi0 = vec![Complex64::ZERO; dim];
        psi0[cfg.start] = Complex64::ONE;
        generator
            .evolve_quantum(&psi0, cfg.time)
            .map_err(usage)?
            .iter()
            .map(|a| a.norm_sqr())
            .collect()
    };

    if let Graph::LineSegment(v) = cfg.graph {
        let edge = probabilities[0].max(probabilities[v - 1]);
        if edge > 1e-10 {
            eprintln!(
                "warning: probability {edge:.3e} reached the reflecting segment ends; \
                 rerun with a larger --topology line:<vertices> for an accurate line walk"
            );
        }
    }

    let total: f64 = probabilities.iter().sum();
    check_closure("final state", total, 0.0, CTQW_CLOSURE_TOL)?;

    // Positions are reported relative to the start vertex on a segment, and
    // as raw vertex indices on a cycle.
    let dist = Distribution::from_entries(probabilities.iter().enumerate().filter_map(
        |(vertex, &p)| {
            let position = match cfg.graph {
                Graph::LineSegment(_) => vertex as i64 - cfg.start as i64,
                Graph::Cycle(_) => vertex as i64,
            };
            (p >= PRUNE_EPS).then_some((position, p))
        },
    ));

    let config_json = json!({
        "mode": "ctqw",
        "topology": cfg.topology_label,
        "gamma": cfg.gamma,
        "time": cfg.time,
        "classical": cfg.classical,
    });
    let data = match cfg.io.format {
        OutputFormat::Csv => output::csv_distribution(&dist),
        OutputFormat::Json => output::json_document(
            config_json,
            vec![("distribution", output::json_distribution_value(&dist))],
        ),
    };
    emit(cfg.io.out.as_deref(), &data)?;
    if let Some(plot) = &cfg.io.plot {
        let kind = if cfg.classical { "classical" } else { "quantum" };
        let title = format!(
            "continuous-time {kind} walk, {}, gamma {}, t = {}",
            cfg.topology_label, cfg.gamma, cfg.time
        );
        emit(Some(plot), &svg::bar_chart(&title, &dist))?;
    }
    Ok(())
}

fn run_classical(cfg: &ClassicalConfig) -> Result<(), CliError> {
    let config_json = json!({
        "mode": "classical",
        "steps": cfg.steps,
        "trace": cfg.trace,
    });
    let title = format!("classical random walk, {} steps", cfg.steps);

    if cfg.trace {
        let dists: Vec<(usize, Distribution)> = (0..=cfg.steps)
            .map(|k| (k, walk_core::analysis::classical_dtrw(k)))
            .collect();
        for (k, dist) in &dists {
            check_closure(&format!("step {k}"), dist.total(), 0.0, DTQW_CLOSURE_TOL)?;
        }
        let data = match cfg.io.format {
            OutputFormat::Csv => {
                output::csv_distribution_trace(dists.iter().map(|(k, d)| (*k, d)))
            }
            OutputFormat::Json => {
                let steps: Vec<Value> = dists
                    .iter()
                    .map(|(k, dist)| {
                        json!({"step": k, "distribution": output::json_distribution_value(dist)})
                    })
                    .collect();
                output::json_document(config_json, vec![("trace", Value::Array(steps))])
            }
        };
        emit(cfg.io.out.as_deref(), &data)?;
        if let Some(plot) = &cfg.io.plot {
            emit(Some(plot), &svg::bar_chart(&title, &dists.last().unwrap().1))?;
        }
        return Ok(());
    }

    let dist = walk_core::analysis::classical_dtrw(cfg.steps);
    check_closure("final state", dist.total(), 0.0, DTQW_CLOSURE_TOL)?;
    let data = match cfg.io.format {
        OutputFormat::Csv => output::csv_distribution(&dist),
        OutputFormat::Json => output::json_document(
            config_json,
            vec![("distribution", output::json_distribution_value(&dist))],
        ),
    };
    emit(cfg.io.out.as_deref(), &data)?;
    if let Some(plot) = &cfg.io.plot {
        emit(Some(plot), &svg::bar_chart(&title, &dist))?;
    }
    Ok(())
}

enum SweepResult {
    Single(Distribution),
    Two(JointDistribution),
}

fn run_sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    // Independent simulations; each period writes to its own file, so they
    // can run in parallel. Messages are printed afterwards in period order.
    let outcomes: Vec<Result<Vec<String>, CliError>> = cfg
        .periods
        .par_iter()
        .map(|&period| sweep_one(cfg, period))
        .collect();
    for outcome in outcomes {
        for line in outcome? {
            println!("{line}");
        }
    }
    Ok(())
}

fn sweep_one(cfg: &SweepConfig, period: usize) -> Result<Vec<String>, CliError> {
    let topology = Topology::Cycle(period);
    let topology_label = format!("cycle:{period}");

    let (result, walk_label, walker_fields) = match &cfg.walker {
        SweepWalker::Single { init, init_label } => {
            let state = SingleParticleState::point(topology, 0, init.0, init.1)
                .map_err(usage)?
                .evolve(&cfg.coin, cfg.steps);
            check_closure("final state", state.norm().powi(2), 0.0, DTQW_CLOSURE_TOL)?;
            (
                SweepResult::Single(state.position_distribution()),
                "single",
                ("init_coin", init_label.clone()),
            )
        }
        SweepWalker::Two { kind, kind_label } => {
            let state = TwoParticleState::initial(*kind, topology)
                .map_err(usage)?
                .evolve(&cfg.coin, cfg.steps);
            check_closure("final state", state.norm().powi(2), 0.0, DTQW_CLOSURE_TOL)?;
            (
                SweepResult::Two(state.joint_distribution()),
                "two",
                ("state", kind_label.clone()),
            )
        }
    };

    let config_json = json!({
        "mode": "sweep",
        "walk": walk_label,
        "topology": topology_label,
        "coin": cfg.coin_label,
        walker_fields.0: walker_fields.1,
        "steps": cfg.steps,
        "period": period,
    });

    let data = match (&result, cfg.format) {
        (SweepResult::Single(dist), OutputFormat::Csv) => output::csv_distribution(dist),
        (SweepResult::Single(dist), OutputFormat::Json) => output::json_document(
            config_json,
            vec![("distribution", output::json_distribution_value(dist))],
        ),
        (SweepResult::Two(dist), OutputFormat::Csv) => output::csv_joint(dist),
        (SweepResult::Two(dist), OutputFormat::Json) => output::json_document(
            config_json,
            vec![("joint", output::json_joint_value(dist))],
        ),
    };

    let out_path = with_period_suffix(&cfg.out, period);
    emit(Some(&out_path), &data)?;
    let mut messages = vec![format!("wrote {}", out_path.display())];

    if let Some(plot) = &cfg.plot {
        let plot_path = with_period_suffix(plot, period);
        let title = format!(
            "{walk_label} walker sweep, cycle:{period}, coin {}, {} steps",
            cfg.coin_label, cfg.steps
        );
        let chart = match &result {
            SweepResult::Single(dist) => svg::bar_chart(&title, dist),
            SweepResult::Two(dist) => svg::heat_map(&title, dist),
        };
        emit(Some(&plot_path), &chart)?;
        messages.push(format!("wrote {}", plot_path.display()));
    }
    Ok(messages)
}
