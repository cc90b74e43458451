//! `groupsim`: simulate group-agent reactions to online events and evaluate
//! the resulting traffic curves.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use groupsim_core::hierarchy::{instantiate_agents, retrieve_layer};
use groupsim_core::model::{CountryCode, Domain};
use groupsim_core::reasoning::{HeatModel, HeatSchedule};
use groupsim_core::runtime::{
    run_replications, run_simulation, summarize_replications, ReplicationSet, Scenario,
};

use groupsim_cli::config::RunConfig;
use groupsim_cli::events::{load_event, save_event};
use groupsim_cli::fixtures::{make_fixture, Archetype};
use groupsim_cli::graphdir::{graph_for_run, init_graph_dir};
use groupsim_cli::report::{
    emit_report, evaluate_traces, read_trace, render_table, write_daily_totals_csv,
    write_engagements_csv, write_metrics, write_trace,
};
use groupsim_cli::CliError;

#[derive(Parser)]
#[command(
    name = "groupsim",
    version,
    about = "Group-agent social network simulation"
)]
struct Cli {
    /// JSON config file; defaults plus env overrides when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Log request/response detail (API keys stay redacted).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeatArg {
    SinglePeakDay2,
    SinglePeakDay3,
    DoublePeak,
    Plateau,
    Growth,
}

impl HeatArg {
    fn model(self, initial_heat: f64) -> HeatModel {
        match self {
            HeatArg::SinglePeakDay2 => HeatModel::Schedule {
                schedule: HeatSchedule::SingleImpulse { peak_day: 2 },
            },
            HeatArg::SinglePeakDay3 => HeatModel::Schedule {
                schedule: HeatSchedule::SingleImpulse { peak_day: 3 },
            },
            HeatArg::DoublePeak => HeatModel::Schedule {
                schedule: HeatSchedule::DoubleImpulse,
            },
            HeatArg::Plateau => HeatModel::Schedule {
                schedule: HeatSchedule::Plateau,
            },
            HeatArg::Growth => HeatModel::Growth { initial_heat },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Instantiate the group agents for (country, domain) at a layer.
    GenerateAgents {
        #[arg(long)]
        country: String,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        layer: u32,
        /// Knowledge-graph directory; bundled education data when omitted.
        #[arg(long)]
        graph_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Initialize a knowledge-graph directory with the bundled hierarchy.
    InitGraph {
        #[arg(long)]
        graph_dir: PathBuf,
    },
    /// Run one event simulation and write the trace bundle.
    Simulate {
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        layer: Option<u32>,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = HeatArg::SinglePeakDay2)]
        heat: HeatArg,
        /// Initial heat for the growth model.
        #[arg(long, default_value_t = 1.0)]
        initial_heat: f64,
        /// Heated discussion: comments/shares may exceed likes.
        #[arg(long)]
        heated: bool,
        /// Prediction options (comma separated); enables the predict action.
        #[arg(long, value_delimiter = ',')]
        options: Vec<String>,
        #[arg(long)]
        graph_dir: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Run the same scenario under several seeds and report reproducibility.
    Replicate {
        #[arg(long)]
        event: PathBuf,
        #[arg(long)]
        layer: Option<u32>,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = HeatArg::SinglePeakDay2)]
        heat: HeatArg,
        #[arg(long, default_value_t = 1.0)]
        initial_heat: f64,
        #[arg(long)]
        heated: bool,
        #[arg(long)]
        graph_dir: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Evaluate trace(s) against an event's ground truth.
    Evaluate {
        /// Trace file; repeat for replicates (first complete one is primary).
        #[arg(long, required = true)]
        trace: Vec<PathBuf>,
        #[arg(long)]
        event: PathBuf,
        #[arg(long, default_value = "metrics.json")]
        out: PathBuf,
    },
    /// Emit synthetic benchmark events for an archetype.
    Fixtures {
        #[arg(long, value_enum)]
        archetype: Archetype,
        /// Magnitude: peak-day views land near 3x this value.
        #[arg(long, default_value_t = 9_000_000)]
        scale: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long, default_value = "fixtures")]
        out_dir: PathBuf,
    },
}

fn parse_domain(raw: &str) -> Result<Domain, CliError> {
    Domain::parse(raw).ok_or_else(|| CliError::Validation(format!("unknown domain `{raw}`")))
}

fn write_used_config(
    config: &RunConfig,
    invocation: serde_json::Value,
    out_dir: &Path,
) -> Result<(), CliError> {
    let used = serde_json::json!({
        "config": config.redacted(),
        "invocation": invocation,
    });
    let path = out_dir.join("config.used.json");
    let mut text =
        serde_json::to_string_pretty(&used).map_err(|e| CliError::Validation(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::io(&format!("writing {}", path.display()), e))
}

fn build_scenario(
    config: &RunConfig,
    event_path: &Path,
    layer: Option<u32>,
    horizon: Option<u32>,
    heat: HeatArg,
    initial_heat: f64,
    heated: bool,
    options: Vec<String>,
) -> Result<Scenario, CliError> {
    let event = load_event(event_path)?;
    let mut scenario = Scenario::new(event, layer.unwrap_or(config.simulation.layer));
    scenario.horizon_days = horizon.unwrap_or(config.simulation.horizon_days);
    scenario.heat = heat.model(initial_heat);
    scenario.heated = heated;
    scenario.options = options.into_iter().filter(|o| !o.is_empty()).collect();
    Ok(scenario)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::from_env()?,
    };

    match cli.command {
        Command::GenerateAgents {
            country,
            domain,
            layer,
            graph_dir,
            seed,
            out,
        } => {
            let country =
                CountryCode::new(&country).map_err(|e| CliError::Validation(e.to_string()))?;
            let domain = parse_domain(&domain)?;
            let graph = graph_for_run(graph_dir.as_deref())?;
            let oracle = config.build_oracle()?;
            let specs = retrieve_layer(&graph, &country, domain, layer)?;
            let agents = instantiate_agents(
                &specs,
                &country,
                oracle.as_ref(),
                config.reasoning.memory_capacity,
                seed,
            )?;
            let json = serde_json::to_string_pretty(&agents)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            match out {
                Some(path) => std::fs::write(&path, json + "\n")
                    .map_err(|e| CliError::io(&format!("writing {}", path.display()), e))?,
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::InitGraph { graph_dir } => {
            init_graph_dir(&graph_dir)?;
            println!("initialized {}", graph_dir.display());
            Ok(())
        }
        Command::Simulate {
            event,
            layer,
            horizon,
            seed,
            workers,
            heat,
            initial_heat,
            heated,
            options,
            graph_dir,
            out_dir,
        } => {
            let scenario = build_scenario(
                &config,
                &event,
                layer,
                horizon,
                heat,
                initial_heat,
                heated,
                options,
            )?;
            let mut graph = graph_for_run(graph_dir.as_deref())?;
            let oracle = config.build_oracle()?;
            let trace = run_simulation(
                &scenario,
                &config.engine_config(),
                oracle.as_ref(),
                &mut graph,
                seed,
                workers,
            )?;
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::io(&format!("creating {}", out_dir.display()), e))?;
            write_trace(&trace, &out_dir.join("trace.json"))?;
            write_daily_totals_csv(&trace, &out_dir.join("daily_totals.csv"))?;
            write_engagements_csv(&trace, &out_dir.join("engagements.csv"))?;
            write_used_config(
                &config,
                serde_json::json!({
                    "command": "simulate",
                    "event": event,
                    "layer": scenario.layer,
                    "horizon_days": scenario.horizon_days,
                    "seed": seed,
                    "workers": workers,
                    "heat": format!("{:?}", heat),
                    "heated": heated,
                }),
                &out_dir,
            )?;
            println!(
                "simulated {} agents over {} days: {} total views ({})",
                trace.agents.len(),
                trace.days.len(),
                trace.total_views(),
                if trace.complete {
                    "complete"
                } else {
                    "incomplete"
                },
            );
            if let Some(prediction) = &trace.prediction {
                println!("predicted winner: {}", prediction.winner);
            }
            Ok(())
        }
        Command::Replicate {
            event,
            layer,
            horizon,
            seeds,
            workers,
            heat,
            initial_heat,
            heated,
            graph_dir,
            out_dir,
        } => {
            let scenario = build_scenario(
                &config,
                &event,
                layer,
                horizon,
                heat,
                initial_heat,
                heated,
                Vec::new(),
            )?;
            let mut graph = graph_for_run(graph_dir.as_deref())?;
            let oracle = config.build_oracle()?;
            let set = run_replications(
                &scenario,
                &config.engine_config(),
                oracle.as_ref(),
                &mut graph,
                &seeds,
                workers,
            )?;
            let (written, report) = emit_report(&set, &scenario.event, &out_dir)?;
            write_used_config(
                &config,
                serde_json::json!({
                    "command": "replicate",
                    "event": event,
                    "layer": scenario.layer,
                    "seeds": seeds,
                    "workers": workers,
                    "heat": format!("{:?}", heat),
                }),
                &out_dir,
            )?;
            print!("{}", render_table(&report));
            print_replication_summary(&set);
            log::info!("wrote {} files to {}", written.len(), out_dir.display());
            Ok(())
        }
        Command::Evaluate { trace, event, out } => {
            let event_record = load_event(&event)?;
            let traces = trace
                .iter()
                .map(|p| read_trace(p))
                .collect::<Result<Vec<_>, _>>()?;
            let report = evaluate_traces(&traces, &event_record)?;
            write_metrics(&report, &out)?;
            let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
            write_used_config(
                &config,
                serde_json::json!({
                    "command": "evaluate",
                    "event": event,
                    "traces": trace,
                    "out": out,
                }),
                parent.unwrap_or(Path::new(".")),
            )?;
            let event = event_record;
            print!("{}", render_table(&report));
            if traces.len() > 1 {
                let scenario = Scenario::new(event, traces[0].layer);
                let summary = summarize_replications(&scenario, &traces)?;
                if let Some(z_max) = summary.z_max_abs {
                    println!(
                        "reproducibility: max |Z| = {z_max:.3} ({})",
                        summary.z_label.as_deref().unwrap_or("unlabeled")
                    );
                }
            }
            Ok(())
        }
        Command::Fixtures {
            archetype,
            scale,
            seed,
            count,
            out_dir,
        } => {
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::io(&format!("creating {}", out_dir.display()), e))?;
            for i in 0..u64::from(count) {
                let record = make_fixture(archetype, scale, seed + i)?;
                let path = out_dir.join(format!("{}.json", record.id));
                save_event(&record, &path)?;
                println!("{}", path.display());
            }
            write_used_config(
                &config,
                serde_json::json!({
                    "command": "fixtures",
                    "archetype": archetype.as_str(),
                    "scale": scale,
                    "seed": seed,
                    "count": count,
                }),
                &out_dir,
            )?;
            Ok(())
        }
    }
}

fn print_replication_summary(set: &ReplicationSet) {
    for (seed, total) in &set.summary.seed_totals {
        println!("seed {seed}: {total} total views");
    }
    match (set.summary.z_max_abs, set.summary.z_label.as_deref()) {
        (Some(z), Some(label)) => {
            println!("reproducibility: max |Z| = {z:.3} ({label}; <1 excellent, <3 acceptable)")
        }
        _ => println!("reproducibility: not enough complete replicates for Z-scores"),
    }
    if set.summary.partial {
        println!("warning: at least one replicate aborted early");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .filter_level(level)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
