use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Position;
use crate::solver::SolverTable;

/// Outcome tally over every deal of cards `1..=n` with both hands nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub deals: u64,
    pub alice_win: u64,
    pub bob_win: u64,
    pub draw: u64,
    /// Draw positions in `alice/bob` text form, by ownership mask.
    pub draws: Vec<String>,
}

pub fn census(table: &SolverTable, n: usize) -> Result<CensusReport> {
    if n > table.mmax() {
        return Err(Error::CapacityExceeded { live: n, cap: table.mmax() });
    }
    let mut report = CensusReport { n, deals: 0, alice_win: 0, bob_win: 0, draw: 0, draws: Vec::new() };
    if n < 2 {
        return Ok(report);
    }
    for mask in 1..(1u64 << n) - 1 {
        report.deals += 1;
        match table.predicates(n, mask) {
            (true, _) => report.alice_win += 1,
            (_, true) => report.bob_win += 1,
            _ => {
                report.draw += 1;
                report.draws.push(Position::from_mask(mask, n).to_string());
            }
        }
    }
    Ok(report)
}
