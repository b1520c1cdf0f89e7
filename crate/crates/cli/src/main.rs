use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ehybrid_core::par::Exec;
use ehybrid_core::scenario::{
    builtin, parse_value, run_scenario, set_parameter, sha256_hex, sweep, write_run, ScenarioOutput, ScenarioSpec, Table,
    SCENARIOS,
};
use ehybrid_core::Error;

#[derive(Parser, Debug)]
#[command(name = "ehybrid", version, about = "Trapped-electron / superconducting-circuit hybrid simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV files and the manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Accepted for scripts; every computation is deterministic.
    #[arg(long, global = true)]
    seedless: bool,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in scenarios.
    Scenarios,
    /// Print the resolved spec of a scenario as a config file.
    Show(Source),
    /// Run a scenario and write its outputs.
    Simulate(Source),
    /// Run a scenario once per value of one parameter.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Dotted parameter path, e.g. `n` or `experiment.chain.heating`.
        #[arg(long)]
        param: String,
        /// Comma-separated values; quantities may carry units ("1 MHz").
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Rate and circuit calculators.
    Design {
        topic: DesignTopic,
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// Surface-noise and heating estimates.
    Noise {
        topic: NoiseTopic,
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// Classical trap dynamics.
    Trap {
        topic: TrapTopic,
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Built-in scenario name.
    name: Option<String>,
    /// Scenario config or run manifest (TOML).
    #[arg(long, conflicts_with = "name")]
    config: Option<PathBuf>,
    /// Override a parameter, e.g. `--set heating=0`.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DesignTopic {
    Rates,
    Impedance,
    Reduction,
    Pickup,
    Cavity,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NoiseTopic {
    Tip,
    Ring,
    Heating,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TrapTopic {
    Stability,
    Sidebands,
}

fn topic_source(name: &str, set: Vec<String>) -> Source {
    Source {
        name: Some(name.to_string()),
        config: None,
        set,
    }
}

fn load(source: &Source) -> Result<ScenarioSpec, Error> {
    let mut spec = match (&source.name, &source.config) {
        (_, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            ScenarioSpec::from_toml_str(&text)?
        }
        (Some(name), None) => builtin(name)?,
        (None, None) => {
            return Err(Error::Config {
                message: "give a scenario name or --config".into(),
                line: None,
                field: None,
            })
        }
    };
    for item in &source.set {
        let (path, value) = item.split_once('=').ok_or_else(|| Error::Config {
            message: format!("`{item}` is not PATH=VALUE"),
            line: None,
            field: None,
        })?;
        spec = set_parameter(&spec, path.trim(), parse_value(value))?;
    }
    Ok(spec)
}

fn print_output(out: &ScenarioOutput) {
    for m in &out.summary {
        println!("{:<28} {:>14.6e} {}", m.name, m.value, m.unit);
    }
}

fn simulate(cli: &Cli, source: &Source, exec: Exec) -> Result<(), Error> {
    let spec = load(source)?.resolve()?;
    let start = Instant::now();
    let out = run_scenario(&spec, exec)?;
    let manifest = write_run(&cli.out, &spec, &out, start.elapsed().as_secs_f64())?;
    println!("scenario {} ({:.2} s)", spec.name, manifest.wall_clock_seconds);
    print_output(&out);
    for file in manifest.files.keys() {
        println!("wrote {}", cli.out.join(file).display());
    }
    Ok(())
}

fn write_table(cli: &Cli, file: &str, table: &Table) -> Result<String, Error> {
    let io = |e: std::io::Error| Error::Io {
        path: cli.out.display().to_string(),
        source: e,
    };
    std::fs::create_dir_all(&cli.out).map_err(io)?;
    let csv = table.to_csv()?;
    std::fs::write(cli.out.join(file), &csv).map_err(io)?;
    Ok(sha256_hex(csv.as_bytes()))
}

fn run(cli: &Cli) -> Result<(), Error> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Scenarios => {
            for name in SCENARIOS {
                println!("{name:<22} {}", builtin(name)?.description);
            }
            Ok(())
        }
        Command::Show(source) => {
            print!("{}", load(source)?.resolve()?.to_toml_string()?);
            Ok(())
        }
        Command::Simulate(source) => simulate(cli, source, exec),
        Command::Sweep { source, param, values } => {
            let spec = load(source)?;
            let values: Vec<toml::Value> = values.iter().map(|v| parse_value(v)).collect();
            let (table, record) = sweep(exec, &spec, param, &values)?;
            let file = format!("{}-sweep-{}.csv", spec.name, param.replace('.', "_"));
            let digest = write_table(cli, &file, &table)?;
            println!("sweep {} over {} = {:?}", spec.name, record.path, record.values);
            println!("wrote {} (sha256 {digest})", cli.out.join(&file).display());
            Ok(())
        }
        Command::Design { topic, set } => {
            let name = match topic {
                DesignTopic::Rates => "rates",
                DesignTopic::Impedance => "impedance",
                DesignTopic::Reduction => "appendixE-reduction",
                DesignTopic::Pickup => "appendixC-pickup",
                DesignTopic::Cavity => "appendixD-coupling",
            };
            simulate(cli, &topic_source(name, set.clone()), exec)
        }
        Command::Noise { topic, set } => {
            let name = match topic {
                NoiseTopic::Tip => "noise-tip-factor",
                NoiseTopic::Ring => "noise-ring-factor",
                NoiseTopic::Heating => "heating-rates",
            };
            simulate(cli, &topic_source(name, set.clone()), exec)
        }
        Command::Trap { topic, set } => {
            let name = match topic {
                TrapTopic::Stability => "trap-stability",
                TrapTopic::Sidebands => "sidebands",
            };
            simulate(cli, &topic_source(name, set.clone()), exec)
        }
    }
}

/// 0 success, 2 invalid input, 3 numerical failure, 1 I/O.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 1,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
