//! Interval-defense certificate.
//!
//! Split the ranks into `k` consecutive intervals `C_1 < ... < C_k`. The
//! defender uses `x_{i+1}` of his cards from `C_{i+1}` against the attacker's
//! cards in `C_i` (all higher, so the high-cards case needs
//! `a_i < φ x_{i+1}`) and throws every remaining card at the attacker's top
//! interval (the many-cards case needs `L > φ a_k`). The allocation is fixed
//! before play, so a feasible plan means the attacker has no winning
//! strategy.

use serde::{Deserialize, Serialize};

use super::phi::{min_phi_cover, phi_times_greater};
use crate::error::{Error, Result};
use crate::game::{Player, Position, canonicalize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntervalPlan {
    pub k: usize,
    pub a_counts: Vec<u64>,
    pub b_counts: Vec<u64>,
    /// `x_2..x_k`, clipped to the defender's count when short.
    pub allocations: Vec<u64>,
    pub leftover: u64,
    pub feasible: bool,
}

/// `attacker[i]`, `defender[i]`: cards each side holds in interval `i`,
/// intervals ordered low to high.
pub fn interval_certificate(attacker: &[u64], defender: &[u64]) -> Result<IntervalPlan> {
    if attacker.len() != defender.len() {
        return Err(Error::LengthMismatch { alice: attacker.len(), bob: defender.len() });
    }
    let k = attacker.len();
    if k == 0 {
        return Err(Error::InvalidK { k: 0, n: 0 });
    }
    let mut fits = true;
    let mut allocations = Vec::with_capacity(k - 1);
    let mut leftover = defender[0];
    for i in 1..k {
        let need = min_phi_cover(attacker[i - 1]);
        let x = need.min(defender[i]);
        fits &= need <= defender[i];
        allocations.push(x);
        leftover += defender[i] - x;
    }
    let feasible = fits && phi_times_greater(leftover, attacker[k - 1]);
    Ok(IntervalPlan { k, a_counts: attacker.to_vec(), b_counts: defender.to_vec(), allocations, leftover, feasible })
}

/// Per-interval card counts of `player` and the opponent, after compressing
/// ranks to `1..=m` and cutting at `floor(i·m/k)`.
pub fn interval_counts(pos: &Position, k: usize, player: Player) -> Result<(Vec<u64>, Vec<u64>)> {
    let c = canonicalize(pos)?;
    let m = c.live;
    if k == 0 || k > m {
        return Err(Error::InvalidK { k: k as u64, n: m as u64 });
    }
    let mut mine = vec![0u64; k];
    let mut theirs = vec![0u64; k];
    let mut interval = 0;
    for rank in 1..=m {
        while rank > (interval + 1) * m / k {
            interval += 1;
        }
        if c.owner(rank) == player {
            mine[interval] += 1;
        } else {
            theirs[interval] += 1;
        }
    }
    Ok((mine, theirs))
}
