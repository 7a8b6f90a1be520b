//! Deterministic playing policies.
//!
//! A strategy picks a held card from the current position. Most policies are
//! purely positional. Phased policies (the constructive lemma strategy) also
//! carry a small [`Memory`] that the referee threads through play and that
//! best-response search includes in its state key.

use std::collections::HashMap;

use crate::game::{Player, Position, Rank};

/// Opaque per-strategy state. Empty for positional strategies.
pub type Memory = Vec<u32>;

pub trait Strategy: Send + Sync {
    fn name(&self) -> &str;

    fn initial_memory(&self, _start: &Position, _me: Player) -> Memory {
        Memory::new()
    }

    /// Card to play. Only called when `me` holds at least one card and the
    /// opponent does too.
    fn choose(&self, pos: &Position, me: Player, memory: &[u32]) -> Rank;

    /// Memory after a battle in which `me` played `mine` and the opponent
    /// played `theirs`.
    fn observe(&self, memory: &[u32], _before: &Position, _me: Player, _mine: Rank, _theirs: Rank, _after: &Position) -> Memory {
        memory.to_vec()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LowestCard;

impl Strategy for LowestCard {
    fn name(&self) -> &str {
        "lowest"
    }

    fn choose(&self, pos: &Position, me: Player, _: &[u32]) -> Rank {
        pos.hand(me).lowest().expect("choose called with an empty hand")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HighestCard;

impl Strategy for HighestCard {
    fn name(&self) -> &str {
        "highest"
    }

    fn choose(&self, pos: &Position, me: Player, _: &[u32]) -> Rank {
        pos.hand(me).highest().expect("choose called with an empty hand")
    }
}

/// Pseudo-random but positional: the card is a hash of (seed, position), so
/// the same position always gets the same answer.
#[derive(Debug, Clone)]
pub struct RandomCard {
    seed: u64,
    name: String,
}

impl RandomCard {
    pub fn new(seed: u64) -> RandomCard {
        RandomCard { seed, name: format!("random:{seed}") }
    }
}

impl Strategy for RandomCard {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&self, pos: &Position, me: Player, _: &[u32]) -> Rank {
        let mut h = splitmix64(self.seed ^ (me as u64 + 1));
        for &r in pos.alice().ranks() {
            h = splitmix64(h ^ r as u64);
        }
        h = splitmix64(h ^ 0xB0B);
        for &r in pos.bob().ranks() {
            h = splitmix64(h ^ r as u64);
        }
        let hand = pos.hand(me).ranks();
        hand[(h % hand.len() as u64) as usize]
    }
}

/// Explicit position → card table, falling back to the lowest card.
#[derive(Debug, Clone, Default)]
pub struct LookupStrategy {
    pub moves: HashMap<Position, Rank>,
    name: String,
}

impl LookupStrategy {
    pub fn new(name: impl Into<String>, moves: HashMap<Position, Rank>) -> LookupStrategy {
        LookupStrategy { moves, name: name.into() }
    }
}

impl Strategy for LookupStrategy {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&self, pos: &Position, me: Player, _: &[u32]) -> Rank {
        match self.moves.get(pos) {
            Some(&r) => r,
            None => pos.hand(me).lowest().expect("choose called with an empty hand"),
        }
    }
}

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_card_is_positional_and_legal() {
        let p: Position = "1,4,6,9/2,3,11".parse().unwrap();
        let s = RandomCard::new(7);
        let a = s.choose(&p, Player::Alice, &[]);
        assert!(p.alice().contains(a));
        assert_eq!(a, s.choose(&p, Player::Alice, &[]));
        let b = s.choose(&p, Player::Bob, &[]);
        assert!(p.bob().contains(b));
        // different seeds eventually disagree somewhere
        let picks: std::collections::HashSet<_> = (0..32).map(|seed| RandomCard::new(seed).choose(&p, Player::Alice, &[])).collect();
        assert!(picks.len() > 1);
    }

    #[test]
    fn lookup_falls_back_to_lowest() {
        let p: Position = "2,5/3".parse().unwrap();
        let mut moves = HashMap::new();
        moves.insert(p.clone(), 5);
        let s = LookupStrategy::new("t", moves);
        assert_eq!(s.choose(&p, Player::Alice, &[]), 5);
        let q: Position = "2,6/3".parse().unwrap();
        assert_eq!(s.choose(&q, Player::Alice, &[]), 2);
    }
}
