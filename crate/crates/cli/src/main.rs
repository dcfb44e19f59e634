use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rmcodes::bounds::{self, BoundReport, Source, TableRow};
use rmcodes::code::{build_code_with, BuildOptions, CodeSpec, Variant, DEFAULT_MAX_N};
use rmcodes::distance::{minimum_distance, DistanceResult, SearchBudget, DEFAULT_MAX_MESSAGES};
use rmcodes::verify::{self, Group, VerifyOptions};

#[derive(Parser)]
#[command(name = "rmcodes", version, about = "Cyclic codes Ω(q,m,h) and Ω̄(q,m,h): construction, distance bounds, order tables")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CliConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Largest code length n the constructor accepts.
    #[arg(long, env = "RMCODES_MAX_N", default_value_t = DEFAULT_MAX_N, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_n: u64,
    /// Largest number of messages q^k enumerated by the exact distance search.
    #[arg(long, default_value_t = DEFAULT_MAX_MESSAGES as u64, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0x5eed, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct SpecArgs {
    q: u64,
    m: u32,
    h: u32,
    #[arg(long, default_value = "omega", value_parser = parse_variant)]
    variant: Variant,
}

impl SpecArgs {
    fn spec(&self) -> Result<CodeSpec> {
        Ok(CodeSpec::new(self.q, self.m, self.h, self.variant)?)
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse::<Variant>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and print its parameters and generator polynomial.
    Code {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also list every zero exponent.
        #[arg(long)]
        emit: bool,
    },
    /// Distance bounds with the rule behind each one.
    Bounds {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also compute the exact distance when the search budget allows.
        #[arg(long)]
        distance: bool,
    },
    /// Divisors e of q^m - 1 dividing no exponent of I(q,m,h).
    SearchE {
        q: u64,
        m: u32,
        h: u32,
        #[arg(long)]
        max_e: Option<u128>,
    },
    /// Odd-order table rows (q, a, l, e) with the bounds q+1 and 2q-1.
    Tables {
        #[arg(long, default_value_t = 7)]
        q_min: u64,
        #[arg(long, default_value_t = 32)]
        q_max: u64,
    },
    /// Run the acceptance checklist; exit status 0 iff every criterion passes.
    VerifyPaper {
        /// Criteria to run, by number or name (comma separated).
        #[arg(long, value_delimiter = ',', value_parser = parse_group)]
        only: Vec<Group>,
        /// CSV with columns q,a,l,e replacing the built-in reference cells.
        #[arg(long)]
        golden_tables: Option<PathBuf>,
    },
}

fn parse_group(s: &str) -> Result<Group, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = &cli.config;
    let build = BuildOptions {
        max_n: cfg.max_n,
        seed: cfg.seed,
        ..BuildOptions::default()
    };
    let budget = SearchBudget::with_max_messages(cfg.budget as u128);
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Code { spec, emit } => {
            let inst = build_code_with(&spec.spec()?, &build)?;
            let doc = inst.to_document();
            match cfg.format {
                Format::Json => json(&mut out, &doc)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["q", "m", "h", "variant", "n", "k", "deg_g", "zeros", "gen_poly"])?;
                    let gen = join(&doc.gen_poly);
                    w.write_record([
                        doc.q.to_string(),
                        doc.m.to_string(),
                        doc.h.to_string(),
                        doc.variant.to_string(),
                        doc.n.to_string(),
                        doc.k.to_string(),
                        (doc.n - doc.k).to_string(),
                        doc.zero_exponents.len().to_string(),
                        gen,
                    ])?;
                    w.flush()?;
                }
                Format::Text => {
                    writeln!(out, "{}", inst.spec())?;
                    writeln!(out, "n = {}", doc.n)?;
                    writeln!(out, "k = {}", doc.k)?;
                    writeln!(out, "deg g = {}", doc.n - doc.k)?;
                    writeln!(out, "zeros = {}", doc.zero_exponents.len())?;
                    writeln!(out, "g = {}  (coefficients, lowest degree first)", join(&doc.gen_poly))?;
                    if *emit {
                        writeln!(out, "zero exponents = {}", join(&doc.zero_exponents))?;
                    }
                }
            }
        }
        Command::Bounds { spec, distance } => {
            let spec = spec.spec()?;
            let mut report = bounds::refined_bounds(&spec);
            let mut exact: Option<DistanceResult> = None;
            if *distance {
                match build_code_with(&spec, &build)
                    .map_err(anyhow::Error::from)
                    .and_then(|inst| Ok(minimum_distance(&inst, &budget)?))
                {
                    Ok(r) => {
                        if r.exact {
                            report.add_exact(r.value as u128, Source::Exhaustive);
                        } else {
                            report.add_upper(r.value as u128, Source::Exhaustive);
                        }
                        exact = Some(r);
                    }
                    Err(e) => report.notes.push(format!("distance search skipped: {e:#}")),
                }
            }
            if !report.is_consistent() {
                bail!("inconsistent bounds for {spec}: {report:?}");
            }
            print_bounds(&mut out, cfg.format, &report, exact.as_ref())?;
        }
        Command::SearchE { q, m, h, max_e } => {
            CodeSpec::omega(*q, *m, *h)?;
            let found = bounds::divisor_search(*q, *m, *h, *max_e)?;
            match cfg.format {
                Format::Json => json(&mut out, &found)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["e"])?;
                    for e in &found {
                        w.write_record([e.to_string()])?;
                    }
                    w.flush()?;
                }
                Format::Text => {
                    writeln!(out, "divisors e of {}^{} - 1 with e dividing no element of I({q},{m},{h}):", q, m)?;
                    writeln!(out, "{}", join(&found))?;
                }
            }
        }
        Command::Tables { q_min, q_max } => {
            if q_min > q_max {
                bail!("--q-min {q_min} exceeds --q-max {q_max}");
            }
            let rows = bounds::order_table(*q_min, *q_max)?;
            print_table(&mut out, cfg.format, &rows)?;
        }
        Command::VerifyPaper { only, golden_tables } => {
            let mut opts = VerifyOptions {
                only: only.clone(),
                seed: cfg.seed,
                ..VerifyOptions::default()
            };
            if let Some(path) = golden_tables {
                opts.golden.cells = read_golden(path)?;
            }
            let report = verify::run(&opts);
            match cfg.format {
                Format::Json => json(&mut out, &report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["criterion", "group", "passed", "elapsed_ms", "limit_ms", "failures"])?;
                    for o in &report.outcomes {
                        w.write_record([
                            o.criterion.to_string(),
                            o.group.to_string(),
                            o.passed.to_string(),
                            o.elapsed_ms.to_string(),
                            o.limit_ms.to_string(),
                            o.failures.join("; "),
                        ])?;
                    }
                    w.flush()?;
                }
                Format::Text => {
                    for o in &report.outcomes {
                        writeln!(out, "{o}")?;
                    }
                }
            }
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    report: &'a BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<&'a DistanceResult>,
}

fn print_bounds(out: &mut impl Write, format: Format, report: &BoundReport, distance: Option<&DistanceResult>) -> Result<()> {
    match format {
        Format::Json => json(out, &BoundsOutput { report, distance }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["q", "m", "h", "variant", "lower", "upper", "exact"])?;
            let s = &report.spec;
            let opt = |b: &Option<bounds::Bound>| b.as_ref().map(|b| b.value.to_string()).unwrap_or_default();
            w.write_record([
                s.q.to_string(),
                s.m.to_string(),
                s.h.to_string(),
                s.variant.to_string(),
                report.lower.value.to_string(),
                opt(&report.upper),
                opt(&report.exact),
            ])?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            write!(out, "{report}")?;
            if let Some(d) = distance {
                writeln!(out, "  minimum-weight word support: {}", join(&d.witness.support()))?;
            }
            Ok(())
        }
    }
}

fn print_table(out: &mut impl Write, format: Format, rows: &[TableRow]) -> Result<()> {
    match format {
        Format::Json => json(out, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            if rows.is_empty() {
                w.write_record(["q", "a", "l", "e", "q_plus_1", "two_q_minus_1", "pinned"])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            let mut q = 0;
            for r in rows {
                if r.q != q {
                    q = r.q;
                    writeln!(out, "q = {q}: {} <= d({q},m,1) <= {} for odd m", r.q_plus_1, r.two_q_minus_1)?;
                }
                writeln!(
                    out,
                    "  a = {:>2}  l = {:>2}  e = {:>2}  d({q},{}λ,1) <= {}{}",
                    r.a,
                    r.l,
                    r.e,
                    r.l,
                    r.e,
                    if r.pinned == 1 { "" } else { "  (unpinned)" }
                )?;
            }
            Ok(())
        }
    }
}

fn read_golden(path: &PathBuf) -> Result<Vec<(u64, u64, u64, u64)>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cells = Vec::new();
    for (i, rec) in rdr.deserialize::<(u64, u64, u64, u64)>().enumerate() {
        cells.push(rec.with_context(|| format!("{} row {}", path.display(), i + 1))?);
    }
    if cells.is_empty() {
        bail!("{} has no rows", path.display());
    }
    Ok(cells)
}
