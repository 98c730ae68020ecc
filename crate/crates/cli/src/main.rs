use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use seifert_tc::bounds::SearchOptions;
use seifert_tc::report::{compute, Input, Options, Report};
use seifert_tc::tensor::DEFAULT_BUDGET;
use seifert_tc::{selfcheck, Error, SeifertInvariants};

const BUDGET_ENV: &str = "SEIFERT_TC_BUDGET";

#[derive(Parser)]
#[command(name = "seifert-tc", version, about = "Cohomology rings and TC bounds for Seifert manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the ring and report cat / TCₙ bounds for one input.
    Compute {
        /// Invariant text such as "(O,o;1|1:(2,1),(2,1),(6,1))", or a file
        /// holding invariant text or JSON.
        input: Option<String>,
        /// Use #k(S²×S¹) instead of a Seifert manifold.
        #[arg(long, value_name = "K", conflicts_with = "input")]
        connected_sum: Option<u32>,
        /// Write the JSON report here ("-" for stdout instead of text).
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Cohomological dimension of the product group; enables the wedge formula.
        #[arg(long, value_name = "INT")]
        wedge_cd: Option<u32>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute a report for every input of a corpus.
    Batch {
        /// One invariant per line, or a JSON array of invariants.
        corpus: PathBuf,
        /// Directory receiving one JSON report per input and summary.csv.
        output_dir: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the built-in invariant suite and print the published-result table.
    Selfcheck,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// TC orders: a list and/or inclusive ranges, e.g. "2,3" or "2..5".
    #[arg(long, value_name = "LIST", default_value = "2", value_parser = parse_orders)]
    tc: Orders,
    #[arg(long, value_name = "P", default_value_t = 2)]
    prime: u32,
    /// Maximum number of basis tuples in a tensor power.
    #[arg(long, value_name = "TUPLES")]
    budget: Option<u64>,
    /// Also use zero divisors pⱼ*(u) − pᵢ*(u) for every pair i < j.
    #[arg(long)]
    all_pairs: bool,
}

#[derive(Clone)]
struct Orders(Vec<usize>);

fn parse_orders(text: &str) -> Result<Orders, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let range = match part.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                let lo: usize = lo.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
                let hi: usize = hi.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                lo..=hi
            }
            None => {
                let n: usize = part.parse().map_err(|_| format!("bad TC order {part:?}"))?;
                n..=n
            }
        };
        out.extend(range);
    }
    if out.is_empty() {
        return Err("no TC orders given".into());
    }
    if let Some(n) = out.iter().find(|&&n| n < 2) {
        return Err(format!("TC order {n} is below 2"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(Orders(out))
}

impl CommonArgs {
    fn options(&self, wedge_cd: Option<u32>) -> anyhow::Result<Options> {
        let budget = match (self.budget, std::env::var(BUDGET_ENV)) {
            (Some(b), _) => b,
            (None, Ok(v)) => v.trim().parse().with_context(|| format!("{BUDGET_ENV}={v:?} is not an integer"))?,
            (None, Err(_)) => DEFAULT_BUDGET,
        };
        Ok(Options {
            prime: self.prime,
            orders: self.tc.0.clone(),
            search: SearchOptions {
                budget,
                all_pairs: self.all_pairs,
            },
            wedge_cd,
        })
    }
}

/// Parses invariant text or JSON, pointing at the offending column on error.
fn parse_invariants(text: &str) -> anyhow::Result<SeifertInvariants> {
    let text = text.trim();
    let parsed = if text.starts_with('{') {
        SeifertInvariants::from_json(text)
    } else {
        SeifertInvariants::parse(text)
    };
    parsed.map_err(|e| match &e {
        Error::Parse { column, .. } => {
            let caret = format!("{}^", " ".repeat(column.saturating_sub(1)));
            anyhow!(e.clone()).context(format!("in input\n  {text}\n  {caret}"))
        }
        _ => anyhow!(e),
    })
}

fn read_input(arg: &str) -> anyhow::Result<SeifertInvariants> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_invariants(&text)
    } else {
        parse_invariants(arg)
    }
}

fn cmd_compute(
    input: Option<String>,
    connected_sum: Option<u32>,
    json: Option<PathBuf>,
    wedge_cd: Option<u32>,
    common: &CommonArgs,
) -> anyhow::Result<()> {
    let input = match (input, connected_sum) {
        (_, Some(k)) => Input::ConnectedSum(k),
        (Some(text), None) => Input::Seifert(read_input(&text)?),
        (None, None) => bail!("give invariants or --connected-sum <K>"),
    };
    let report = compute(&input, &common.options(wedge_cd)?)?;
    match json {
        Some(path) if path.as_os_str() == "-" => println!("{}", report.to_json()),
        Some(path) => {
            fs::write(&path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            print!("{}", report.render_text());
        }
        None => print!("{}", report.render_text()),
    }
    Ok(())
}

fn corpus_entries(text: &str) -> anyhow::Result<Vec<String>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(trimmed).context("corpus JSON array")?;
        return Ok(values
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            })
            .collect());
    }
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn summary_header(orders: &[usize]) -> Vec<String> {
    let mut h: Vec<String> = ["index", "input", "case", "cat_lo", "cat_hi"].map(String::from).into();
    for n in orders {
        h.push(format!("tc{n}_lo"));
        h.push(format!("tc{n}_hi"));
    }
    h.push("warnings".into());
    h
}

fn summary_row(index: usize, report: &Report, orders: &[usize]) -> Vec<String> {
    let mut row = vec![
        index.to_string(),
        report.input.clone(),
        report.ring.case.to_string(),
        report.cat.lower.to_string(),
        report.cat.upper.to_string(),
    ];
    for &n in orders {
        let r = report.tc_report(n).expect("every requested order is reported");
        row.push(r.lower.to_string());
        row.push(r.upper.to_string());
    }
    row.push(report.warnings.len().to_string());
    row
}

fn cmd_batch(corpus: &Path, out_dir: &Path, common: &CommonArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(corpus).with_context(|| format!("reading {}", corpus.display()))?;
    let entries = corpus_entries(&text)?;
    let opts = common.options(None)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;

    let mut summary = csv::Writer::from_path(out_dir.join("summary.csv"))?;
    summary.write_record(summary_header(&opts.orders))?;
    let mut errors = Vec::new();
    let mut written = 0usize;
    for (k, entry) in entries.iter().enumerate() {
        let index = k + 1;
        let result = parse_invariants(entry).and_then(|inv| Ok(compute(&Input::Seifert(inv), &opts)?));
        match result {
            Ok(report) => {
                let path = out_dir.join(format!("report-{index:04}.json"));
                fs::write(&path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
                summary.write_record(summary_row(index, &report, &opts.orders))?;
                written += 1;
            }
            Err(e) => {
                let line = format!("input {index} ({entry}): {e:#}");
                eprintln!("error: {line}");
                errors.push(line);
            }
        }
    }
    summary.flush()?;
    if !errors.is_empty() {
        fs::write(out_dir.join("errors.log"), errors.join("\n") + "\n")?;
    }
    println!("{written} reports written to {}, {} warning(s)", out_dir.display(), errors.len());
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::UnsupportedCase(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            input,
            connected_sum,
            json,
            wedge_cd,
            common,
        } => cmd_compute(input, connected_sum, json, wedge_cd, &common),
        Command::Batch {
            corpus,
            output_dir,
            common,
        } => cmd_batch(&corpus, &output_dir, &common),
        Command::Selfcheck => {
            let outcome = selfcheck::run();
            print!("{}", outcome.render());
            return if outcome.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
