use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use qpar::bench::{
    prepare, run_sweep, write_report, BenchmarkSource, SweepConfig, BUILTIN_BENCHMARKS,
};
use qpar::hardware::{powers_of_two, DEFAULT_INTERFACE_WIDTH};
use qpar::subnet::mark_groups;
use qpar::{AddressingMode, CxTemplate, DistributionMode, EncodingScheme, TimingModel};

/// Sweep addressing modes over benchmark circuits and report speedups.
#[derive(Debug, Parser)]
#[command(name = "qpar", version)]
struct Args {
    /// Distribution modes (`semi`, `fully`); defaults to both.
    #[arg(long, value_delimiter = ',')]
    dist: Vec<DistributionMode>,
    /// Encoding schemes; defaults to the three parallel schemes.
    #[arg(long, value_delimiter = ',')]
    scheme: Vec<EncodingScheme>,
    /// Subnet counts, either `1,2,8` or a power-of-two range `2..64`.
    #[arg(long)]
    subnets: Option<String>,
    /// Logical qubits per built-in benchmark.
    #[arg(long, default_value_t = 128)]
    qubits: usize,
    /// Built-in benchmark names.
    #[arg(long, value_delimiter = ',')]
    bench: Vec<String>,
    /// OpenQASM 2 files to evaluate.
    #[arg(long, value_delimiter = ',')]
    qasm: Vec<PathBuf>,
    /// Interface width in bits.
    #[arg(long, default_value_t = DEFAULT_INTERFACE_WIDTH)]
    interface_width: u32,
    /// TOML timing table.
    #[arg(long)]
    timing: Option<PathBuf>,
    /// TOML remote-CX template.
    #[arg(long)]
    cx_template: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "qpar-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also write every compiled program as a text dump under `<out>/programs`.
    #[arg(long)]
    dump_program: bool,
}

fn parse_subnets(text: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .with_context(|| format!("bad range start in `{text}`"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .with_context(|| format!("bad range end in `{text}`"))?;
        let values = powers_of_two(lo, hi);
        if values.is_empty() {
            bail!("range `{text}` contains no power of two");
        }
        return Ok(values);
    }
    let values: BTreeSet<usize> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("bad subnet count `{s}`"))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() || values.contains(&0) {
        bail!("subnet counts must be positive");
    }
    Ok(values.into_iter().collect())
}

fn config(args: &Args) -> Result<SweepConfig> {
    let mut cfg = SweepConfig {
        num_logical: args.qubits,
        interface_width: args.interface_width,
        seed: args.seed,
        ..SweepConfig::default()
    };
    if args.interface_width == 0 {
        bail!("interface width must be positive");
    }
    if !args.dist.is_empty() {
        cfg.dists = args.dist.clone();
    }
    if !args.scheme.is_empty() {
        cfg.schemes = args.scheme.clone();
    }
    cfg.subnets = args.subnets.as_deref().map(parse_subnets).transpose()?;
    if let Some(path) = &args.timing {
        cfg.timing = TimingModel::load(path)?;
    }
    if let Some(path) = &args.cx_template {
        cfg.template = CxTemplate::load(path)?;
    }
    if !args.bench.is_empty() || !args.qasm.is_empty() {
        cfg.benchmarks.clear();
        for name in &args.bench {
            if !BUILTIN_BENCHMARKS.contains(&name.as_str()) {
                bail!(
                    "unknown benchmark `{name}` (expected one of {})",
                    BUILTIN_BENCHMARKS.join(", ")
                );
            }
            cfg.benchmarks.push(BenchmarkSource::Builtin(name.clone()));
        }
        cfg.benchmarks
            .extend(args.qasm.iter().cloned().map(BenchmarkSource::Qasm));
    }
    Ok(cfg)
}

fn dump_programs(cfg: &SweepConfig, dir: &Path) -> Result<()> {
    let dir = dir.join("programs");
    std::fs::create_dir_all(&dir)?;
    let timing = cfg.timing.clone().with_interface_width(cfg.interface_width);
    for source in &cfg.benchmarks {
        let name = source.name();
        for &dist in &cfg.dists {
            let Ok(circuit) = source.load(cfg.num_logical, cfg.seed) else {
                continue;
            };
            let Ok(prep) = prepare(&circuit, dist, &timing, &cfg.template) else {
                continue;
            };
            std::fs::write(
                dir.join(format!("{name}_{dist}_baseline.txt")),
                prep.naive.dump(),
            )?;
            for &scheme in &cfg.schemes {
                let subnets = cfg
                    .subnets
                    .clone()
                    .unwrap_or_else(|| scheme.default_subnet_range(dist));
                for m in subnets {
                    let Ok(mode) = AddressingMode::for_network(
                        scheme,
                        dist.network_size(),
                        m,
                        cfg.interface_width,
                    ) else {
                        continue;
                    };
                    let Ok(program) = prep.optimized_for(&mode, &cfg.template) else {
                        continue;
                    };
                    let file = format!("{name}_{dist}_{}_M{m}.txt", scheme.cli_name());
                    std::fs::write(dir.join(file), mark_groups(&program, &mode).dump())?;
                }
            }
        }
    }
    Ok(())
}

fn run(args: &Args) -> Result<ExitCode> {
    let cfg = config(args)?;
    let report = run_sweep(&cfg);
    write_report(&report, &args.out)
        .with_context(|| format!("writing report to {}", args.out.display()))?;
    if args.dump_program {
        dump_programs(&cfg, &args.out)?;
    }
    println!(
        "{} cells evaluated, {} failed, results in {}",
        report.rows.len(),
        report.failures.len(),
        args.out.display()
    );
    for f in &report.failures {
        eprintln!(
            "failed: {} {} {} M={}: {}",
            f.benchmark, f.dist, f.scheme, f.m, f.error
        );
    }
    Ok(if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subnet_lists_and_ranges() {
        assert_eq!(parse_subnets("8,2,2").unwrap(), vec![2, 8]);
        assert_eq!(parse_subnets("3..20").unwrap(), vec![4, 8, 16]);
        assert!(parse_subnets("0").is_err());
        assert!(parse_subnets("5..7").is_err());
        assert!(parse_subnets("x").is_err());
    }
}
