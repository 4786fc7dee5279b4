use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fatpoint_hilbert::cache::{Cache, CacheKey};
use fatpoint_hilbert::interpolation::{duality_residual, hpowlin_generic, hpts_generic};
use fatpoint_hilbert::obstruction::ubda_generic;
use fatpoint_hilbert::scanner::{
    ctr_inequalities, k_of, m_of, strong_scan, violations, weak_scan, ScanOptions, CSV_HEADER,
    DEFAULT_CAP,
};
use fatpoint_hilbert::{g, GridSpec, Result, ScanRecord, Uple, DEFAULT_MODULUS};

#[derive(Parser)]
#[command(
    name = "fatpoints",
    version,
    about = "Hilbert functions of fat points: conjectural values, rank oracle, obstruction bounds and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Cell {
    /// Projective dimension.
    #[arg(long = "n")]
    n: u32,
    /// Multiplicities, e.g. `2,2,1` or `3x10`.
    #[arg(long = "A", value_parser = parse_uple)]
    a: Uple,
    /// Degree.
    #[arg(long = "m")]
    m: u32,
}

#[derive(Args, Clone)]
struct Oracle {
    #[arg(long, default_value_t = DEFAULT_MODULUS)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    trials: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Conjectural value G.
    G {
        #[command(flatten)]
        cell: Cell,
    },
    /// Generic Hilbert function value by rank.
    Hpts {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        oracle: Oracle,
        /// Line-delimited result cache.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Codimension of an ideal of random powers of linear forms; `--A` gives the powers.
    Hpowlin {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        oracle: Oracle,
    },
    /// Points against dual powers of the same vectors read as linear forms.
    Duality {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        oracle: Oracle,
    },
    /// Codimension-one obstruction bound with the per-step table.
    Ubda {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        oracle: Oracle,
    },
    /// Parameter sweeps.
    Scan {
        #[command(subcommand)]
        kind: ScanKind,
    },
}

#[derive(Args, Clone)]
struct Grid {
    #[arg(long = "n")]
    n: u32,
    /// Exact number of points (overrides --dmin/--dmax).
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, default_value_t = 1)]
    dmin: u32,
    #[arg(long, default_value_t = 6)]
    dmax: u32,
    /// Exact multiplicity (overrides --kmin/--kmax).
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 1)]
    kmin: u32,
    #[arg(long, default_value_t = 3)]
    kmax: u32,
    /// Exact degree (overrides --mmin/--mmax).
    #[arg(long = "m")]
    m: Option<u32>,
    #[arg(long, default_value_t = 0)]
    mmin: u32,
    #[arg(long, default_value_t = 8)]
    mmax: u32,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[command(flatten)]
    oracle: Oracle,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    out: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl Grid {
    fn spec(&self) -> GridSpec {
        let range = |exact: Option<u32>, lo, hi| exact.map_or((lo, hi), |v| (v, v));
        GridSpec::new(
            self.n,
            range(self.d, self.dmin, self.dmax),
            range(self.k, self.kmin, self.kmax),
            range(self.m, self.mmin, self.mmax),
        )
        .with_cap(self.cap)
    }

    fn options(&self) -> ScanOptions {
        ScanOptions {
            modulus: self.oracle.prime,
            seed: self.oracle.seed,
            trials: self.oracle.trials,
        }
    }
}

#[derive(Subcommand)]
enum ScanKind {
    /// Every sorted uple in the grid; exits nonzero on any hpts > G.
    Weak(Grid),
    /// Homogeneous uples, sorted against the exception list.
    Strong(Grid),
    /// Counterexample inequality chain and the k(n) threshold table.
    Ctr(Ctr),
}

#[derive(Args)]
struct Ctr {
    #[arg(long = "n")]
    n: u32,
    #[arg(long, default_value_t = 2000)]
    kmax: u32,
    /// Evaluate the flags at a single multiplicity instead of tabulating.
    #[arg(long)]
    k: Option<u32>,
    /// Degree for --k (defaults to m(n,k)).
    #[arg(long = "m")]
    m: Option<u32>,
    /// Number of points for --k (defaults to n+5).
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    out: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_uple(s: &str) -> std::result::Result<Uple, String> {
    s.parse()
        .map_err(|e: fatpoint_hilbert::Error| e.to_string())
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_records(records: &[ScanRecord], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, records)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in records {
                w.write_record(r.csv_fields()).map_err(csv_err)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn csv_err(e: csv::Error) -> fatpoint_hilbert::Error {
    io::Error::other(e).into()
}

fn open_cache(path: &Option<PathBuf>) -> Result<Option<Cache>> {
    path.as_ref().map(Cache::open).transpose()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::G { cell } => {
            let v = g(cell.n, &cell.a, cell.m);
            print_json(&json!({
                "n": cell.n,
                "A": cell.a,
                "m": cell.m,
                "value": v.value.to_string(),
                "clamped": v.clamped,
                "ambient_dim": v.ambient_dim.to_string(),
            }))?;
        }
        Command::Hpts {
            cell,
            oracle,
            cache,
        } => {
            let compute = || {
                hpts_generic(
                    cell.n,
                    &cell.a,
                    cell.m,
                    oracle.prime,
                    oracle.seed,
                    oracle.trials,
                )
            };
            let value = match open_cache(&cache)? {
                Some(c) => {
                    let key = CacheKey::new(
                        cell.n,
                        &cell.a,
                        cell.m,
                        oracle.prime,
                        oracle.seed,
                        oracle.trials,
                    );
                    c.get_or_insert_with(key, compute)?
                }
                None => compute()?,
            };
            print_json(&value)?;
        }
        Command::Hpowlin { cell, oracle } => {
            print_json(&hpowlin_generic(
                cell.n,
                &cell.a,
                cell.m,
                oracle.prime,
                oracle.seed,
            )?)?;
        }
        Command::Duality { cell, oracle } => {
            print_json(&duality_residual(
                cell.n,
                &cell.a,
                cell.m,
                oracle.prime,
                oracle.seed,
            )?)?;
        }
        Command::Ubda { cell, oracle } => {
            print_json(&ubda_generic(
                cell.n,
                &cell.a,
                cell.m,
                oracle.prime,
                oracle.seed,
            )?)?;
        }
        Command::Scan {
            kind: ScanKind::Weak(grid),
        } => {
            let cache = open_cache(&grid.cache)?;
            let records = weak_scan(&grid.spec(), grid.options(), cache.as_ref())?;
            write_records(&records, grid.out, &mut *sink(&grid.output)?)?;
            let bad = violations(&records);
            eprintln!(
                "weak scan: {} cells, {} violations",
                records.len(),
                bad.len()
            );
            for r in &bad {
                eprintln!("VIOLATION {r}");
            }
            if !bad.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Scan {
            kind: ScanKind::Strong(grid),
        } => {
            let cache = open_cache(&grid.cache)?;
            let report = strong_scan(&grid.spec(), grid.options(), cache.as_ref())?;
            let mut out = sink(&grid.output)?;
            match grid.out {
                Format::Csv => write_records(&report.records, Format::Csv, &mut *out)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *out, &report)?;
                    writeln!(out)?;
                }
            }
            eprintln!(
                "strong scan: {} cells, {} unexpected strict cells, {} exceptional cells attaining G",
                report.records.len(),
                report.counterexample_candidates.len(),
                report.exceptions_attaining_g.len()
            );
            for &i in &report.counterexample_candidates {
                eprintln!("UNEXPECTED {}", report.records[i]);
            }
        }
        Command::Scan {
            kind: ScanKind::Ctr(c),
        } => {
            let mut out = sink(&c.output)?;
            if let Some(k) = c.k {
                let m = c.m.unwrap_or_else(|| m_of(c.n, k));
                let d = c.d.unwrap_or(c.n + 5);
                let flags = ctr_inequalities(c.n, k, m, d);
                serde_json::to_writer_pretty(
                    &mut *out,
                    &json!({"n": c.n, "k": k, "m": m, "d": d, "flags": flags}),
                )?;
                writeln!(out)?;
                return Ok(ExitCode::SUCCESS);
            }
            let report = k_of(c.n, c.kmax)?;
            match c.out {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *out, &report)?;
                    writeln!(out)?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["k", "m", "max", "rn1", "rn2", "surrogate"])
                        .map_err(csv_err)?;
                    for r in &report.table {
                        w.write_record(
                            [r.k, r.m]
                                .map(|v| v.to_string())
                                .into_iter()
                                .chain([r.max, r.rn1, r.rn2, r.surrogate].map(|b| b.to_string())),
                        )
                        .map_err(csv_err)?;
                    }
                    w.flush()?;
                }
            }
            eprintln!(
                "k({}) up to {}: computed {:?}, rn2-restricted {:?}, reference {:?}, {:?}",
                c.n,
                c.kmax,
                report.computed,
                report.computed_rn2,
                report.reference,
                report.agreement
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
