//! Golden-ratio threshold results: the hand-size classifier, its
//! constructive strategy, the elementary improvement steps of the
//! monotonicity argument, and the interval-defense certificate.

mod certificate;
mod monotonicity;
mod phi;
mod strategy;

pub use certificate::{IntervalPlan, interval_certificate, interval_counts};
pub use monotonicity::{Improvement, ImprovementStep, improvement_steps};
pub use phi::{min_phi_cover, phi_times_greater, phi_times_less};
pub use strategy::{LemmaStrategy, Phase, PhaseCheck, PhaseSwitch, lemma_strategy, verify_phase_invariants};

use serde::Serialize;

use crate::game::{Player, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LemmaVerdict {
    /// More than φ times as many cards as the opponent.
    ManyCards,
    /// Every card above every opposing card, and the opponent holds fewer
    /// than φ times as many.
    HighCards,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaVerdicts {
    pub alice: LemmaVerdict,
    pub bob: LemmaVerdict,
}

impl LemmaVerdicts {
    pub fn for_player(&self, player: Player) -> LemmaVerdict {
        match player {
            Player::Alice => self.alice,
            Player::Bob => self.bob,
        }
    }
}

pub fn classify_for(pos: &Position, player: Player) -> LemmaVerdict {
    let (mine, theirs) = pos.sides(player);
    let (a, b) = (mine.len() as u64, theirs.len() as u64);
    if phi_times_greater(a, b) {
        return LemmaVerdict::ManyCards;
    }
    match (mine.lowest(), theirs.highest()) {
        (Some(low), Some(high)) if low > high && phi_times_less(b, a) => LemmaVerdict::HighCards,
        _ => LemmaVerdict::None,
    }
}

pub fn classify_lemma(pos: &Position) -> LemmaVerdicts {
    LemmaVerdicts { alice: classify_for(pos, Player::Alice), bob: classify_for(pos, Player::Bob) }
}
