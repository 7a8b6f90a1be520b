//! Constructive strategy for the golden-ratio classifier.
//!
//! Two phases alternate:
//!
//! * many-cards: play the lowest held card until every opposing card is below
//!   every held card;
//! * high-cards: take a snapshot of the hand and play each snapshot card once,
//!   ascending. Cards captured during the phase wait until it ends.
//!
//! The phase and the snapshot live in the strategy memory as
//! `[phase, hand size at switch, opponent size at switch, snapshot...]`.

use std::collections::HashSet;

use serde::Serialize;

use super::phi::{phi_times_greater, phi_times_less};
use super::{LemmaVerdict, classify_for};
use crate::error::{Error, Result};
use crate::game::{Player, Position, Rank, is_terminal, successor};
use crate::strategy::{Memory, Strategy};

const MANY: u32 = 0;
const HIGH: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    ManyCards,
    HighCards,
}

/// A phase change together with the hand-size condition the next phase
/// needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseSwitch {
    pub to: Phase,
    pub mine: usize,
    pub theirs: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LemmaStrategy;

pub fn lemma_strategy(pos: &Position, player: Player) -> Result<LemmaStrategy> {
    match classify_for(pos, player) {
        LemmaVerdict::None => Err(Error::LemmaNotApplicable(player)),
        _ => Ok(LemmaStrategy),
    }
}

impl LemmaStrategy {
    /// Apply any phase changes due at `pos`.
    pub fn settle(&self, pos: &Position, me: Player, memory: &[u32], switches: &mut Vec<PhaseSwitch>) -> Memory {
        let mut memory = memory.to_vec();
        let (mine, theirs) = pos.sides(me);
        if mine.is_empty() || theirs.is_empty() {
            return memory;
        }
        loop {
            match memory[0] {
                MANY if theirs.highest() < mine.lowest() => {
                    // entering high-cards: the opponent must hold fewer than φ times our count
                    let (a, b) = (mine.len(), theirs.len());
                    switches.push(PhaseSwitch { to: Phase::HighCards, mine: a, theirs: b, holds: phi_times_less(b as u64, a as u64) });
                    memory = vec![HIGH, a as u32, b as u32];
                    memory.extend_from_slice(mine.ranks());
                }
                HIGH if memory.len() == 3 => {
                    // every snapshot card won: a kept, the opponent is down to b - a
                    let (a0, b0) = (memory[1] as usize, memory[2] as usize);
                    let (a, b) = (mine.len(), theirs.len());
                    let holds = a == a0 && b0.checked_sub(a0) == Some(b) && phi_times_greater(a as u64, b as u64);
                    switches.push(PhaseSwitch { to: Phase::ManyCards, mine: a, theirs: b, holds });
                    memory = vec![MANY, 0, 0];
                }
                _ => return memory,
            }
        }
    }

    pub fn phase(memory: &[u32]) -> Phase {
        if memory.first() == Some(&HIGH) { Phase::HighCards } else { Phase::ManyCards }
    }
}

impl Strategy for LemmaStrategy {
    fn name(&self) -> &str {
        "lemma"
    }

    fn initial_memory(&self, _start: &Position, _me: Player) -> Memory {
        vec![MANY, 0, 0]
    }

    fn choose(&self, pos: &Position, me: Player, memory: &[u32]) -> Rank {
        let memory = self.settle(pos, me, memory, &mut Vec::new());
        let hand = pos.hand(me);
        let lowest = hand.lowest().expect("choose called with an empty hand");
        match memory[0] {
            HIGH => memory.get(3).copied().filter(|&r| hand.contains(r)).unwrap_or(lowest),
            _ => lowest,
        }
    }

    fn observe(&self, memory: &[u32], before: &Position, me: Player, mine: Rank, _theirs: Rank, _after: &Position) -> Memory {
        let mut memory = self.settle(before, me, memory, &mut Vec::new());
        if memory[0] == HIGH
            && let Some(at) = memory[3..].iter().position(|&r| r == mine)
        {
            memory.remove(3 + at);
        }
        memory
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PhaseCheck {
    /// Distinct (position, memory) states visited.
    pub states: usize,
    pub switches: usize,
    /// Terminal states reached where the lemma player lost.
    pub losses: usize,
}

/// Follow the lemma strategy for `player` against every possible opponent
/// line and check the hand-size condition at each phase change.
pub fn verify_phase_invariants(pos: &Position, player: Player) -> Result<PhaseCheck> {
    let strategy = lemma_strategy(pos, player)?;
    let mut check = PhaseCheck::default();
    let mut seen = HashSet::new();
    let mut stack = vec![(pos.clone(), strategy.initial_memory(pos, player))];
    while let Some((current, memory)) = stack.pop() {
        if is_terminal(&current)?.is_some() || !seen.insert((current.clone(), memory.clone())) {
            continue;
        }
        check.states += 1;
        let mut switches = Vec::new();
        let settled = strategy.settle(&current, player, &memory, &mut switches);
        check.switches += switches.len();
        if let Some(bad) = switches.iter().find(|s| !s.holds) {
            return Err(Error::InvariantViolated(format!(
                "{current}: entering {:?} with {} cards against {}",
                bad.to, bad.mine, bad.theirs
            )));
        }
        let card = strategy.choose(&current, player, &settled);
        for &reply in current.hand(player.other()).ranks() {
            let (a, b) = match player {
                Player::Alice => (card, reply),
                Player::Bob => (reply, card),
            };
            let next = successor(&current, a, b)?;
            match is_terminal(&next)? {
                Some(w) if w != player => check.losses += 1,
                Some(_) => {}
                None => {
                    let m = strategy.observe(&settled, &current, player, card, reply, &next);
                    stack.push((next, m));
                }
            }
        }
    }
    Ok(check)
}
