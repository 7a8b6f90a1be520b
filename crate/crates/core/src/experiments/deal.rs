//! Reproducible dealing.
//!
//! Every trial seeds its own ChaCha8 generator from
//! `trial_seed(seed, trial) = splitmix64(splitmix64(seed) ^ trial)` and draws
//! one uniform `u64` key per card, in rank order:
//!
//! * iid kinds give the card to Alice when its key is below
//!   [`DealModel::iid_threshold`];
//! * exact kinds give Alice the cards with the smallest keys (ties broken by
//!   rank).
//!
//! Either way, raising `r` under the same seed only moves cards from Bob to
//! Alice. Deals that leave a hand empty are redrawn from the same generator.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DealKind, DealModel};
use crate::game::{Position, Rank};
use crate::strategy::splitmix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deal {
    pub position: Position,
    /// Deals discarded because a hand came out empty.
    pub rejections: u64,
}

pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ trial)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}

/// One pass of dealing. Calls `visit(card, to_alice)` for cards `1..=n` in
/// order and returns Alice's total.
fn deal_once(model: &DealModel, rng: &mut ChaCha8Rng, mut visit: impl FnMut(u64, bool)) -> u64 {
    let n = model.n;
    let mut alice = 0;
    match model.kind {
        DealKind::UnbiasedIid | DealKind::BiasedIid => {
            let threshold = model.iid_threshold();
            for card in 1..=n {
                let to_alice = rng.next_u64() < threshold;
                alice += to_alice as u64;
                visit(card, to_alice);
            }
        }
        DealKind::UnbiasedExact | DealKind::BiasedExact => {
            let keys: Vec<(u64, u32)> = (0..n as u32).map(|i| (rng.next_u64(), i)).collect();
            let count = model.alice_count() as usize;
            let mut scratch = keys.clone();
            let cut = *scratch.select_nth_unstable(count - 1).1;
            for (i, key) in keys.iter().enumerate() {
                let to_alice = *key <= cut;
                alice += to_alice as u64;
                visit(i as u64 + 1, to_alice);
            }
        }
    }
    alice
}

/// Deal trial `trial` of a run seeded with `seed`. Cards are labelled `1..=n`.
pub fn sample_deal(model: &DealModel, seed: u64, trial: u64) -> Deal {
    let mut rng = trial_rng(seed, trial);
    let mut rejections = 0;
    loop {
        let mut alice: Vec<Rank> = Vec::new();
        let mut bob: Vec<Rank> = Vec::new();
        let count = deal_once(model, &mut rng, |card, to_alice| if to_alice { alice.push(card as Rank) } else { bob.push(card as Rank) });
        if count > 0 && count < model.n {
            let position = Position::new(alice, bob).expect("dealt hands are disjoint");
            return Deal { position, rejections };
        }
        rejections += 1;
    }
}

/// Per-interval counts `(alice, bob, rejections)` for intervals
/// `(floor((i-1)n/k), floor(i·n/k)]`, without building hands. Draws the same
/// keys as [`sample_deal`].
pub fn deal_interval_counts(model: &DealModel, k: usize, seed: u64, trial: u64) -> (Vec<u64>, Vec<u64>, u64) {
    let mut rng = trial_rng(seed, trial);
    let n = model.n as u128;
    let bound = |i: usize| ((i as u128 * n) / k as u128) as u64;
    let mut rejections = 0;
    loop {
        let mut alice = vec![0u64; k];
        let mut bob = vec![0u64; k];
        let mut interval = 0;
        let mut upper = bound(1);
        let count = deal_once(model, &mut rng, |card, to_alice| {
            while card > upper {
                interval += 1;
                upper = bound(interval + 1);
            }
            if to_alice { alice[interval] += 1 } else { bob[interval] += 1 }
        });
        if count > 0 && count < model.n {
            return (alice, bob, rejections);
        }
        rejections += 1;
    }
}
