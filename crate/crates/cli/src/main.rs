use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use specpath::eigen::DEFAULT_TOL;
use specpath::experiments::{
    doubling_ks, perturbation_trial, rw_stretch_report, sweep_double_broom, sweep_weighted_cycle, write_sweep_csv,
    DEFAULT_EPSILONS, DEFAULT_MAX_K,
};
use specpath::families::{analytic_quotient, SymbolicQuotient};
use specpath::io::{read_tsv, to_dot, write_tsv};
use specpath::quotient::{quotient_graph, quotient_spectral_path, refine_partition};
use specpath::spectral::grounded_eigenfunction_with_tol;
use specpath::{spectral_tree, spread_path, Connector, Error, Family, FamilyParams, PathRecord, WeightedGraph};

#[derive(Parser)]
#[command(name = "specpath", version, about = "Spectral descent paths on weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family instance.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Descend the grounded eigenfunction at `--to` starting from `--from`.
    SpectralPath {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Solve on the refinement quotient at `--to` and lift the path.
        #[arg(long)]
        quotient: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Descend the spread function at `--to` starting from `--from`.
    SpreadPath {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Quotient by colour refinement at `--at`.
    Quotient {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        at: String,
        /// Use the closed-form quotient of a generated family (`--at u` or `v`).
        #[arg(long)]
        analytic: bool,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Doubling k-sweep of the weighted cycle or double broom.
    Sweep {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_parser = parse_t)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1)]
        min_k: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_K)]
        max_k: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Write 0 in the wall-time column so output is byte-stable.
        #[arg(long)]
        no_timing: bool,
    },
    /// Random weight perturbations of a graph or of a family's limit quotient.
    Perturb {
        #[command(flatten)]
        source: Source,
        /// Replace the graph by the limit quotient at `u` of the given family.
        #[arg(long)]
        limit: bool,
        #[arg(long)]
        special: Option<String>,
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        epsilons: Option<Vec<f64>>,
    },
    /// Random-walk Fiedler vector and the descent bound check.
    RwReport {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    k: usize,
    /// Pendant ratio, decimal or `a/b`.
    #[arg(long, value_parser = parse_t)]
    t: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
}

impl FamilyArgs {
    fn params(&self) -> FamilyParams {
        FamilyParams { family: self.family, ell: self.ell, k: self.k, t: self.t, d: self.d }
    }
}

#[derive(Args)]
struct Source {
    /// TSV graph file, `-` for stdin.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    #[arg(long, requires_all = ["ell", "k"])]
    family: Option<Family>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = parse_t)]
    t: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
}

impl Source {
    fn params(&self) -> Option<FamilyParams> {
        Some(FamilyParams { family: self.family?, ell: self.ell?, k: self.k?, t: self.t, d: self.d })
    }

    fn load(&self) -> Result<WeightedGraph, Failure> {
        if let Some(params) = self.params() {
            return Ok(params.generate()?);
        }
        match &self.input {
            Some(p) if p.as_os_str() == "-" => Ok(read_tsv(io::stdin().lock())?),
            Some(p) => Ok(read_tsv(BufReader::new(File::open(p).map_err(Error::from)?))?),
            None => Err(Failure::Usage("give --input or --family/--ell/--k".into())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Dot,
    Csv,
    Json,
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn parse_t(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if b == 0.0 {
                return Err("zero denominator".into());
            }
            a / b
        }
        None => s.parse().map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(format!("t must be finite and non-negative, got {s:?}"))
    }
}

/// A label, or a plain index when no vertex has that label.
fn vertex(g: &WeightedGraph, name: &str) -> Result<usize, Failure> {
    match g.find_vertex(name) {
        Ok(v) => Ok(v),
        Err(e) => match name.parse::<usize>() {
            Ok(v) => {
                g.check_vertex(v)?;
                Ok(v)
            }
            Err(_) => Err(e.into()),
        },
    }
}

fn bad_format(cmd: &str, f: Format) -> Failure {
    let name = f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Failure::Usage(format!("{cmd} does not support --format {name}"))
}

fn path_json(g: &WeightedGraph, p: &PathRecord) -> serde_json::Value {
    json!({
        "vertices": p.labels(g),
        "indices": p.vertices,
        "length": p.length,
        "distance": p.endpoint_distance,
        "stretch": p.stretch().map(|s| s.to_string()),
        "tie": p.tie,
    })
}

fn emit(out: &mut impl Write, v: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(io::Error::from).map_err(Error::from)?;
    writeln!(out, "{text}").map_err(Error::from)?;
    Ok(())
}

fn print_path(out: &mut impl Write, g: &WeightedGraph, p: &PathRecord, format: Format, cmd: &str) -> Result<(), Failure> {
    match format {
        Format::Json => return emit(out, &path_json(g, p)),
        Format::Tsv => writeln!(
            out,
            "{}\t{}\t{}\t{}",
            p.labels(g).join(" "),
            p.length,
            p.endpoint_distance,
            p.tie
        ),
        Format::Dot => write!(out, "{}", to_dot(g, Some(&p.vertices))),
        Format::Csv => return Err(bad_format(cmd, format)),
    }
    .map_err(Error::from)?;
    Ok(())
}

fn run(cmd: Command, out: &mut impl Write) -> Result<(), Failure> {
    match cmd {
        Command::Generate { family, format, output } => {
            let g = family.params().generate()?;
            let mut sink: Box<dyn Write> = match output {
                Some(p) => Box::new(File::create(p).map_err(Error::from)?),
                None => Box::new(&mut *out),
            };
            match format {
                Format::Tsv => write_tsv(&g, &mut sink)?,
                Format::Dot => sink.write_all(to_dot(&g, None).as_bytes()).map_err(Error::from)?,
                f => return Err(bad_format("generate", f)),
            }
        }
        Command::SpectralPath { source, from, to, tol, quotient, format } => {
            let g = source.load()?;
            let (from, to) = (vertex(&g, &from)?, vertex(&g, &to)?);
            let path = if quotient {
                quotient_spectral_path(&g, from, to)?.path
            } else {
                let f = grounded_eigenfunction_with_tol(&g, to, tol)?;
                spectral_tree(&g, &f).path_from(&g, from)?
            };
            print_path(out, &g, &path, format, "spectral-path")?;
        }
        Command::SpreadPath { source, from, to, format } => {
            let g = source.load()?;
            let path = spread_path(&g, vertex(&g, &from)?, vertex(&g, &to)?)?;
            print_path(out, &g, &path, format, "spread-path")?;
        }
        Command::Quotient { source, at, analytic, format } => {
            let g = source.load()?;
            let i = vertex(&g, &at)?;
            let q = if analytic {
                let params = source.params().ok_or_else(|| Failure::Usage("--analytic needs --family".into()))?;
                let conn = match g.label(i).as_str() {
                    "u" => Connector::U,
                    "v" => Connector::V,
                    _ => return Err(Failure::Usage("--analytic needs --at u or --at v".into())),
                };
                analytic_quotient(&g, &params, conn)?
            } else {
                quotient_graph(&g, i, &refine_partition(&g, i))?
            };
            match format {
                Format::Tsv => write_tsv(&q.graph, &mut *out)?,
                Format::Dot => out.write_all(to_dot(&q.graph, None).as_bytes()).map_err(Error::from)?,
                Format::Json => {
                    let v = json!({
                        "cells": q.graph.n(),
                        "special_cell": q.special_cell,
                        "labels": (0..q.graph.n()).map(|c| q.graph.label(c)).collect::<Vec<_>>(),
                        "phi": q.phi,
                    });
                    emit(out, &v)?;
                }
                f => return Err(bad_format("quotient", f)),
            }
        }
        Command::Sweep { family, ell, t, min_k, max_k, format, no_timing } => {
            let ks = doubling_ks(min_k, max_k);
            let report = match family {
                Family::WeightedCycle => sweep_weighted_cycle(ell, &ks)?,
                Family::DoubleBroom => {
                    let t = t.ok_or_else(|| Failure::Usage("double-broom sweep needs --t".into()))?;
                    sweep_double_broom(ell, t, &ks)?
                }
                other => return Err(Failure::Usage(format!("no sweep for {other}"))),
            };
            match format {
                Format::Csv => write_sweep_csv(&report, &mut *out, !no_timing)?,
                Format::Json => {
                    let mut v = json!(report);
                    if no_timing {
                        zero_timing(&mut v);
                    }
                    emit(out, &v)?;
                }
                f => return Err(bad_format("sweep", f)),
            }
        }
        Command::Perturb { source, limit, special, start, trials, seed, epsilons } => {
            let (g, default_special) = if limit {
                let params = source.params().ok_or_else(|| Failure::Usage("--limit needs --family".into()))?;
                let sym = match params.family {
                    Family::WeightedCycle => SymbolicQuotient::weighted_cycle(params.ell, Connector::U)?,
                    Family::DoubleBroom => {
                        SymbolicQuotient::double_broom(params.ell, params.t.unwrap_or(0.0), Connector::U)?
                    }
                    other => return Err(Error::UnsupportedFamily(other.to_string()).into()),
                };
                (sym.limit_graph()?, Some(sym.special_cell))
            } else {
                (source.load()?, None)
            };
            let special = match (special, default_special) {
                (Some(s), _) => vertex(&g, &s)?,
                (None, Some(s)) => s,
                (None, None) => return Err(Failure::Usage("give --special".into())),
            };
            let start = vertex(&g, &start)?;
            let eps = epsilons.unwrap_or_else(|| DEFAULT_EPSILONS.to_vec());
            let rep = perturbation_trial(&g, special, start, &eps, trials, seed)?;
            let v = json!({
                "graph": { "n": g.n(), "special": g.label(special), "start": g.label(start) },
                "baseline": rep.baseline.iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
                "report": rep,
            });
            emit(out, &v)?;
        }
        Command::RwReport { source } => {
            let g = source.load()?;
            let rep = rw_stretch_report(&g)?;
            emit(out, &json!(rep))?;
        }
    }
    Ok(())
}

fn zero_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            if let Some(t) = m.get_mut("wall_time_s") {
                *t = json!(0.0);
            }
            m.values_mut().for_each(zero_timing);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(zero_timing),
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let res = run(cli.command, &mut out);
    let flushed = out.flush();
    match res {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
