//! `peer-pressure` command line.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 when a request exceeds
//! the solver capacity, 1 on I/O failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{DEFAULT_SEED, DealKind, Ratio, SweepMode, SweepSpec, census, sweep, write_csv};
use crate::game::{Player, Position, play_out};
use crate::lemma::{interval_certificate, interval_counts, lemma_strategy};
use crate::solver::{DEFAULT_MMAX, HARD_CAP, SolverStrategy, SolverTable, extract_strategy, longest_resistance};
use crate::strategy::{HighestCard, LowestCard, RandomCard, Strategy};

#[derive(Debug, Parser)]
#[command(name = "peer-pressure", version, about = "Solve and simulate the card game Peer Pressure")]
pub struct CommandConfig {
    /// Largest live-card count the solver table may cover (at most 26).
    #[arg(long, global = true)]
    pub mmax: Option<usize>,
    /// Solver table cache; loaded when present, written after a rebuild.
    #[arg(long, global = true, env = "PP_TABLE_PATH")]
    pub table: Option<PathBuf>,
    /// Worker threads for table builds and trials (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write machine-readable output here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ui,
    Ue,
    Bi,
    Be,
}

impl From<ModelArg> for DealKind {
    fn from(m: ModelArg) -> DealKind {
        match m {
            ModelArg::Ui => DealKind::UnbiasedIid,
            ModelArg::Ue => DealKind::UnbiasedExact,
            ModelArg::Bi => DealKind::BiasedIid,
            ModelArg::Be => DealKind::BiasedExact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Solver,
    Certificate,
    Countonly,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a position, e.g. `solve 1,2,4/3,5`.
    Solve { position: String },
    /// Tally outcomes over every deal of n cards.
    Census { n: usize },
    /// Monte Carlo estimates over a grid of bias ratios and deck sizes.
    Sweep {
        #[arg(long, value_enum, default_value = "ui")]
        model: ModelArg,
        /// Comma-separated bias ratios, `p/q` or decimal.
        #[arg(long = "r", default_value = "1", value_delimiter = ',')]
        r: Vec<String>,
        /// Comma-separated deck sizes.
        #[arg(long = "n", value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long = "k", default_value_t = 5)]
        k: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "solver")]
        mode: ModeArg,
    },
    /// Interval-defense certificates for both defenders.
    Certify {
        position: String,
        #[arg(long = "k")]
        k: usize,
    },
    /// Play two named policies against each other.
    Playout {
        position: String,
        /// lowest | highest | lemma | solver | random:SEED
        #[arg(long)]
        alice: String,
        #[arg(long)]
        bob: String,
    },
    /// Time a full table build.
    Bench,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapacityExceeded { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

/// Parse `args` (program name first) and run. Human output goes to `stdout`.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let workers = config.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let mut buffer = Vec::new();
    let result = pool.install(|| execute(&config, &mut buffer));
    let _ = stdout.write_all(&buffer);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn cap(config: &CommandConfig) -> Result<usize> {
    let cap = config.mmax.unwrap_or(DEFAULT_MMAX);
    if cap == 0 || cap > HARD_CAP {
        return Err(Error::CapacityExceeded { live: cap, cap: HARD_CAP });
    }
    Ok(cap)
}

/// A table covering `needed` live cards, from the cache when possible.
fn table_for(config: &CommandConfig, needed: usize) -> Result<Arc<SolverTable>> {
    let cap = cap(config)?;
    if needed > cap {
        return Err(Error::CapacityExceeded { live: needed, cap });
    }
    let needed = needed.max(1);
    if let Some(path) = config.table.as_deref().filter(|p| p.exists()) {
        let table = SolverTable::load(path)?;
        if table.mmax() >= needed {
            return Ok(Arc::new(table));
        }
    }
    let table = SolverTable::build(needed)?;
    if let Some(path) = &config.table {
        table.save(path)?;
    }
    Ok(Arc::new(table))
}

fn parse_position(text: &str) -> Result<Position> {
    let text = text.trim();
    if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse { input: text.to_string(), reason: e.to_string() })
    } else {
        text.parse()
    }
}

fn write_out(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body)?;
    Ok(())
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn execute(config: &CommandConfig, out: &mut dyn Write) -> Result<()> {
    match &config.command {
        Command::Solve { position } => solve(config, &parse_position(position)?, out),
        Command::Census { n } => {
            let table = table_for(config, *n)?;
            let report = census(&table, *n)?;
            writeln!(
                out,
                "n = {}: {} deals, alice {}, bob {}, draw {}",
                report.n, report.deals, report.alice_win, report.bob_win, report.draw
            )
            .map_err(io)?;
            for d in &report.draws {
                writeln!(out, "draw {d}").map_err(io)?;
            }
            if let Some(path) = &config.out {
                match config.format.unwrap_or(Format::Json) {
                    Format::Json => write_out(path, &serde_json::to_string_pretty(&report).expect("serializable"))?,
                    Format::Plain => write_out(path, &report.draws.join("\n"))?,
                    Format::Csv => return Err(Error::Parse { input: "csv".into(), reason: "census output is json or plain".into() }),
                }
            }
            Ok(())
        }
        Command::Sweep { model, r, n, k, trials, seed, mode } => {
            let r_values = r.iter().map(|s| s.parse()).collect::<Result<Vec<Ratio>>>()?;
            let mode = match mode {
                ModeArg::Solver => SweepMode::Solver,
                ModeArg::Certificate => SweepMode::Certificate,
                ModeArg::Countonly => SweepMode::CountOnly,
            };
            let spec = SweepSpec { kind: (*model).into(), r_values, n_values: n.clone(), k: *k, trials: *trials, seed: *seed, mode };
            let table = match mode {
                SweepMode::Solver => {
                    let largest = n.iter().copied().max().unwrap_or(0);
                    let needed = usize::try_from(largest).unwrap_or(usize::MAX);
                    Some(table_for(config, needed)?)
                }
                _ => None,
            };
            let rows = sweep(table.as_deref(), &spec)?;
            match &config.out {
                Some(path) => match config.format.unwrap_or(Format::Csv) {
                    Format::Json => write_out(path, &serde_json::to_string_pretty(&rows).expect("serializable"))?,
                    _ => {
                        let mut buf = Vec::new();
                        write_csv(&rows, &mut buf).map_err(io)?;
                        fs::write(path, buf)?;
                    }
                },
                None => {
                    writeln!(
                        out,
                        "{:<10} {:>8} {:>9} {:>3} {:>8} {:>9} {:>9} {:>9} {:>8}  95% CI",
                        "model", "r", "n", "k", "trials", "alice", "bob", "draw", "rate"
                    )
                    .map_err(io)?;
                    for row in &rows {
                        writeln!(
                            out,
                            "{:<10} {:>8} {:>9} {:>3} {:>8} {:>9} {:>9} {:>9} {:>8.4}  [{:.4}, {:.4}]",
                            row.model,
                            row.r,
                            row.n,
                            row.k,
                            row.trials,
                            row.alice_win,
                            row.bob_win,
                            row.draw,
                            row.rate,
                            row.ci_lo,
                            row.ci_hi
                        )
                        .map_err(io)?;
                    }
                }
            }
            Ok(())
        }
        Command::Certify { position, k } => {
            let pos = parse_position(position)?;
            let (alice, bob) = interval_counts(&pos, *k, Player::Alice)?;
            let bob_defends = interval_certificate(&alice, &bob)?;
            let alice_defends = interval_certificate(&bob, &alice)?;
            let body = json!({
                "position": pos.to_string(),
                "k": k,
                "bobDefends": bob_defends,
                "aliceDefends": alice_defends,
            });
            let text = serde_json::to_string_pretty(&body).expect("serializable");
            writeln!(out, "{text}").map_err(io)?;
            if let Some(path) = &config.out {
                write_out(path, &text)?;
            }
            Ok(())
        }
        Command::Playout { position, alice, bob } => {
            let pos = parse_position(position)?;
            let a = policy(config, alice, &pos, Player::Alice)?;
            let b = policy(config, bob, &pos, Player::Bob)?;
            let transcript = play_out(&pos, a.as_ref(), b.as_ref(), pos.live_count())?;
            writeln!(out, "{transcript}").map_err(io)?;
            if let Some(path) = &config.out {
                write_out(path, &serde_json::to_string_pretty(&transcript).expect("serializable"))?;
            }
            Ok(())
        }
        Command::Bench => {
            let mmax = cap(config)?;
            let start = Instant::now();
            let table = SolverTable::build(mmax)?;
            let elapsed = start.elapsed();
            writeln!(out, "mmax {mmax}: built in {:.2} s", elapsed.as_secs_f64()).map_err(io)?;
            writeln!(out, "table size {:.2} MiB", table.memory_bytes() as f64 / (1 << 20) as f64).map_err(io)?;
            if let Some(peak) = peak_rss_kib() {
                writeln!(out, "peak resident memory {:.1} MiB", peak as f64 / 1024.0).map_err(io)?;
            }
            writeln!(out, "exclusion violations {}", table.exclusion_violations()).map_err(io)?;
            if let Some(path) = &config.table {
                table.save(path)?;
            }
            Ok(())
        }
    }
}

fn solve(config: &CommandConfig, pos: &Position, out: &mut dyn Write) -> Result<()> {
    let table = table_for(config, pos.live_count())?;
    let outcome = table.outcome(pos)?;
    writeln!(out, "{outcome}").map_err(io)?;
    writeln!(out, "position {pos} ({} live cards)", pos.live_count()).map_err(io)?;
    let mut report = json!({ "position": pos.to_string(), "outcome": outcome });
    if let Some(winner) = outcome.winner() {
        if pos.alice().is_empty() || pos.bob().is_empty() {
            writeln!(out, "game over").map_err(io)?;
        } else {
            let moves = table.winning_moves(pos, winner)?;
            let list: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
            writeln!(out, "winning moves for {winner}: {}", list.join(",")).map_err(io)?;
            let strategy = extract_strategy(&table, pos, winner)?;
            let line = longest_resistance(pos, &strategy, winner.other())?;
            writeln!(out, "extracted strategy against the longest resistance:").map_err(io)?;
            writeln!(out, "{line}").map_err(io)?;
            report["winningMoves"] = json!(moves);
            report["transcript"] = json!(line);
        }
    }
    if let Some(path) = &config.out {
        write_out(path, &serde_json::to_string_pretty(&report).expect("serializable"))?;
    }
    Ok(())
}

fn policy(config: &CommandConfig, name: &str, pos: &Position, player: Player) -> Result<Box<dyn Strategy>> {
    let bad = || Error::Parse { input: name.to_string(), reason: "policy must be lowest, highest, lemma, solver or random:SEED".into() };
    Ok(match name {
        "lowest" => Box::new(LowestCard),
        "highest" => Box::new(HighestCard),
        "lemma" => Box::new(lemma_strategy(pos, player)?),
        "solver" => Box::new(SolverStrategy::new(table_for(config, pos.live_count())?)),
        other => {
            let seed = other.strip_prefix("random:").ok_or_else(bad)?;
            Box::new(RandomCard::new(seed.parse().map_err(|_| bad())?))
        }
    })
}

fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["peer-pressure"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_cli(&["solve", "1,2/2"]).0, 2);
        assert_eq!(run_cli(&["solve", "1,2,3,4,5,6,7,8,9,10/11,12,13", "--mmax", "12"]).0, 3);
        assert_eq!(run_cli(&["bogus"]).0, 2);
        assert_eq!(run_cli(&["playout", "1,2/3", "--alice", "sideways", "--bob", "lowest"]).0, 2);
        assert_eq!(run_cli(&["playout", "1,2,4/3,5", "--alice", "lemma", "--bob", "lowest"]).0, 2);
        assert_eq!(run_cli(&["--mmax", "30", "bench"]).0, 3);
    }

    #[test]
    fn json_position_argument() {
        let (code, out, _) = run_cli(&["solve", r#"{"alice":[1,2,4],"bob":[3,5]}"#]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("draw"));
    }
}
