//! Monte Carlo estimators and parameter sweeps.
//!
//! Trials run on the rayon pool. Each trial derives its generator from
//! (seed, trial index) and the per-trial tallies are summed, so results do
//! not depend on scheduling.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::deal::{deal_interval_counts, sample_deal};
use super::{DealKind, DealModel, Ratio};
use crate::error::{Error, Result};
use crate::lemma::{interval_certificate, phi_times_greater};
use crate::solver::{Outcome, SolverTable};

pub const CSV_HEADER: &str = "model,r,n,k,trials,seed,alice_win,bob_win,draw,rate,ci_lo,ci_hi";

const Z95: f64 = 1.959_963_984_540_054;

/// One grid point. In certificate rows `alice_win`/`bob_win` hold the
/// feasible/infeasible counts; in count-only rows they hold the number of
/// deals where Alice has more than φ times Bob's cards and the rest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub model: String,
    pub r: String,
    pub n: u64,
    pub k: u64,
    pub trials: u64,
    pub seed: u64,
    pub alice_win: u64,
    pub bob_win: u64,
    pub draw: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// One-sided deals that were redrawn. Not part of the CSV.
    pub rejections: u64,
}

impl EstimateRow {
    pub fn alice_rate(&self) -> f64 {
        self.alice_win as f64 / self.trials as f64
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6}",
            self.model,
            self.r,
            self.n,
            self.k,
            self.trials,
            self.seed,
            self.alice_win,
            self.bob_win,
            self.draw,
            self.rate,
            self.ci_lo,
            self.ci_hi
        )
    }
}

pub fn write_csv(rows: &[EstimateRow], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

/// 95% Wilson score interval for `hits` out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).clamp(0.0, 1.0).min(p), (center + half).clamp(0.0, 1.0).max(p))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    alice: u64,
    bob: u64,
    draw: u64,
    rejections: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally { alice: self.alice + o.alice, bob: self.bob + o.bob, draw: self.draw + o.draw, rejections: self.rejections + o.rejections }
    }
}

fn row(model: String, m: &DealModel, k: u64, seed: u64, tally: Tally, hits: u64, exact: bool) -> EstimateRow {
    let trials = tally.alice + tally.bob + tally.draw;
    let rate = hits as f64 / trials as f64;
    let (ci_lo, ci_hi) = if exact { (rate, rate) } else { wilson_interval(hits, trials) };
    EstimateRow {
        model,
        r: m.r.to_string(),
        n: m.n,
        k,
        trials,
        seed,
        alice_win: tally.alice,
        bob_win: tally.bob,
        draw: tally.draw,
        rate,
        ci_lo,
        ci_hi,
        rejections: tally.rejections,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    MonteCarlo {
        trials: u64,
    },
    /// Every assignment of the deck, equally weighted (one-sided deals
    /// included). Unbiased kinds only.
    Exhaustive,
}

/// Draw rate under `model`, with outcomes from the solver table.
pub fn estimate_draw_rate(table: &SolverTable, model: &DealModel, sampling: Sampling, seed: u64) -> Result<EstimateRow> {
    let n = model.n as usize;
    if n > table.mmax() {
        return Err(Error::CapacityExceeded { live: n, cap: table.mmax() });
    }
    let classify = |o: Outcome| match o {
        Outcome::AliceWin => Tally { alice: 1, ..Tally::default() },
        Outcome::BobWin => Tally { bob: 1, ..Tally::default() },
        Outcome::Draw => Tally { draw: 1, ..Tally::default() },
    };
    match sampling {
        Sampling::MonteCarlo { trials } => {
            if trials == 0 {
                return Err(Error::InvalidTrials(0));
            }
            let tally = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let deal = sample_deal(model, seed, t);
                    let outcome = table.outcome(&deal.position).expect("deal fits the table");
                    Tally { rejections: deal.rejections, ..classify(outcome) }
                })
                .reduce(Tally::default, |a, b| a + b);
            Ok(row(model.kind.code().to_string(), model, 0, seed, tally, tally.draw, false))
        }
        Sampling::Exhaustive => {
            let half = match model.kind {
                DealKind::UnbiasedIid => None,
                DealKind::UnbiasedExact => Some(n as u32 / 2),
                _ => return Err(Error::InvalidModel("exhaustive enumeration needs an unbiased model".into())),
            };
            let tally = (0..1u64 << n)
                .into_par_iter()
                .filter(|mask| half.is_none_or(|h| mask.count_ones() == h))
                .map(|mask| {
                    let outcome = match table.predicates(n, mask) {
                        (true, _) => Outcome::AliceWin,
                        (_, true) => Outcome::BobWin,
                        _ => Outcome::Draw,
                    };
                    classify(outcome)
                })
                .reduce(Tally::default, |a, b| a + b);
            Ok(row(format!("{}-exact", model.kind.code()), model, 0, seed, tally, tally.draw, true))
        }
    }
}

/// Fraction of deals on which the interval-defense certificate with `k`
/// intervals shows Alice has no winning strategy. Needs no solver.
pub fn estimate_certificate_rate(model: &DealModel, k: u64, trials: u64, seed: u64) -> Result<EstimateRow> {
    if k < 2 || k > model.n {
        return Err(Error::InvalidK { k, n: model.n });
    }
    if trials == 0 {
        return Err(Error::InvalidTrials(0));
    }
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (alice, bob, rejections) = deal_interval_counts(model, k as usize, seed, t);
            let plan = interval_certificate(&alice, &bob).expect("equal lengths");
            if plan.feasible {
                Tally { alice: 1, rejections, ..Tally::default() }
            } else {
                Tally { bob: 1, rejections, ..Tally::default() }
            }
        })
        .reduce(Tally::default, |a, b| a + b);
    Ok(row(format!("cert-{}", model.kind.code()), model, k, seed, tally, tally.alice, false))
}

/// Fraction of deals where Alice holds more than φ times Bob's count.
pub fn estimate_count_only(model: &DealModel, trials: u64, seed: u64) -> Result<EstimateRow> {
    if trials == 0 {
        return Err(Error::InvalidTrials(0));
    }
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (alice, bob, rejections) = deal_interval_counts(model, 1, seed, t);
            if phi_times_greater(alice[0], bob[0]) {
                Tally { alice: 1, rejections, ..Tally::default() }
            } else {
                Tally { bob: 1, rejections, ..Tally::default() }
            }
        })
        .reduce(Tally::default, |a, b| a + b);
    Ok(row(format!("count-{}", model.kind.code()), model, 0, seed, tally, tally.alice, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepMode {
    Solver,
    Certificate,
    CountOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub kind: DealKind,
    pub r_values: Vec<Ratio>,
    pub n_values: Vec<u64>,
    pub k: u64,
    pub trials: u64,
    pub seed: u64,
    pub mode: SweepMode,
}

/// One row per `(r, n)` grid point, `r` outermost.
pub fn sweep(table: Option<&SolverTable>, spec: &SweepSpec) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::with_capacity(spec.r_values.len() * spec.n_values.len());
    for &r in &spec.r_values {
        for &n in &spec.n_values {
            let model = DealModel::new(spec.kind, n, r)?;
            let row = match spec.mode {
                SweepMode::Solver => {
                    let table = table.ok_or(Error::CapacityExceeded { live: n as usize, cap: 0 })?;
                    estimate_draw_rate(table, &model, Sampling::MonteCarlo { trials: spec.trials }, spec.seed)?
                }
                SweepMode::Certificate => estimate_certificate_rate(&model, spec.k, spec.trials, spec.seed)?,
                SweepMode::CountOnly => estimate_count_only(&model, spec.trials, spec.seed)?,
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_edges() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.03 && hi < 0.04);
        let (lo, hi) = wilson_interval(100, 100);
        assert_eq!(hi, 1.0);
        assert!(lo > 0.96);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn exhaustive_five_cards() {
        let t = SolverTable::build(8).unwrap();
        let m = DealModel::unbiased_iid(5).unwrap();
        let row = estimate_draw_rate(&t, &m, Sampling::Exhaustive, 0).unwrap();
        assert_eq!((row.trials, row.draw), (32, 2));
        assert_eq!(row.rate, 0.0625);
        let ue = DealModel::new(DealKind::UnbiasedExact, 6, Ratio::ONE).unwrap();
        assert_eq!(estimate_draw_rate(&t, &ue, Sampling::Exhaustive, 0).unwrap().trials, 20);
    }

    #[test]
    fn degenerate_inputs() {
        let t = SolverTable::build(8).unwrap();
        let m = DealModel::unbiased_iid(5).unwrap();
        assert_eq!(estimate_draw_rate(&t, &m, Sampling::MonteCarlo { trials: 0 }, 1), Err(Error::InvalidTrials(0)));
        let big = DealModel::unbiased_iid(9).unwrap();
        assert!(matches!(estimate_draw_rate(&t, &big, Sampling::MonteCarlo { trials: 5 }, 1), Err(Error::CapacityExceeded { .. })));
        assert_eq!(estimate_certificate_rate(&m, 6, 5, 1), Err(Error::InvalidK { k: 6, n: 5 }));
        assert_eq!(estimate_certificate_rate(&m, 1, 5, 1), Err(Error::InvalidK { k: 1, n: 5 }));
    }

    #[test]
    fn counts_sum_and_reproduce() {
        let t = SolverTable::build(10).unwrap();
        let m = DealModel::unbiased_iid(10).unwrap();
        let a = estimate_draw_rate(&t, &m, Sampling::MonteCarlo { trials: 777 }, 42).unwrap();
        assert_eq!(a.alice_win + a.bob_win + a.draw, 777);
        assert!(a.ci_lo <= a.rate && a.rate <= a.ci_hi);
        assert_eq!(a, estimate_draw_rate(&t, &m, Sampling::MonteCarlo { trials: 777 }, 42).unwrap());
    }

    #[test]
    fn small_decks_defeat_the_certificate() {
        let m = DealModel::unbiased_iid(10).unwrap();
        let row = estimate_certificate_rate(&m, 5, 200, 3).unwrap();
        assert!(row.rate < 0.5, "{}", row.rate);
    }

    #[test]
    fn sweep_grid_and_csv() {
        let spec = SweepSpec {
            kind: DealKind::BiasedIid,
            r_values: vec![Ratio::ONE, Ratio::new(17, 10).unwrap()],
            n_values: vec![100, 1000, 10_000],
            k: 0,
            trials: 50,
            seed: 1,
            mode: SweepMode::CountOnly,
        };
        let rows = sweep(None, &spec).unwrap();
        assert_eq!(rows.len(), 6);
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("count-bi,1,100,0,50,1,"));
        assert!(lines[4].starts_with("count-bi,1.7,100,"));
        let solver = SweepSpec { mode: SweepMode::Solver, ..spec };
        assert!(sweep(None, &solver).is_err());
    }
}
