//! Cards, hands, positions and the battle rule.
//!
//! Each battle both players reveal one card at the same time. The higher card
//! is discarded and the lower card passes to the player who played the higher
//! one. A player left without cards loses. Ranks are distinct positive
//! integers; only their relative order matters, so positions can be
//! compressed to ranks `1..=m` (see [`canonicalize`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategy::Strategy;

pub type Rank = u32;

/// Widest ownership mask a [`CanonicalPosition`] can hold.
pub const MAX_CANONICAL_LIVE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alice" | "a" => Ok(Player::Alice),
            "bob" | "b" => Ok(Player::Bob),
            _ => Err(Error::Parse { input: s.to_string(), reason: "expected alice or bob".into() }),
        }
    }
}

/// A set of distinct ranks, kept sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Hand(Vec<Rank>);

impl Hand {
    pub fn new(ranks: impl IntoIterator<Item = Rank>) -> Result<Hand> {
        let mut ranks: Vec<Rank> = ranks.into_iter().collect();
        ranks.sort_unstable();
        for w in ranks.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateRank(w[0]));
            }
        }
        if ranks.first() == Some(&0) {
            return Err(Error::InvalidRank(0));
        }
        Ok(Hand(ranks))
    }

    pub fn empty() -> Hand {
        Hand(Vec::new())
    }

    pub fn ranks(&self) -> &[Rank] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, rank: Rank) -> bool {
        self.0.binary_search(&rank).is_ok()
    }

    pub fn lowest(&self) -> Option<Rank> {
        self.0.first().copied()
    }

    pub fn highest(&self) -> Option<Rank> {
        self.0.last().copied()
    }

    fn insert(&mut self, rank: Rank) {
        if let Err(at) = self.0.binary_search(&rank) {
            self.0.insert(at, rank);
        }
    }

    fn remove(&mut self, rank: Rank) -> bool {
        match self.0.binary_search(&rank) {
            Ok(at) => {
                self.0.remove(at);
                true
            }
            Err(_) => false,
        }
    }
}

impl<'de> Deserialize<'de> for Hand {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ranks = Vec::<Rank>::deserialize(deserializer)?;
        Hand::new(ranks).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Both hands. The hands never share a rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Position {
    alice: Hand,
    bob: Hand,
}

#[derive(Deserialize)]
struct RawPosition {
    alice: Hand,
    bob: Hand,
}

impl<'de> Deserialize<'de> for Position {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPosition::deserialize(deserializer)?;
        Position::from_hands(raw.alice, raw.bob).map_err(serde::de::Error::custom)
    }
}

impl Position {
    pub fn new(alice: impl IntoIterator<Item = Rank>, bob: impl IntoIterator<Item = Rank>) -> Result<Position> {
        Position::from_hands(Hand::new(alice)?, Hand::new(bob)?)
    }

    pub fn from_hands(alice: Hand, bob: Hand) -> Result<Position> {
        let (mut i, mut j) = (0, 0);
        while i < alice.len() && j < bob.len() {
            let (x, y) = (alice.0[i], bob.0[j]);
            if x == y {
                return Err(Error::Overlap(x));
            }
            if x < y {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(Position { alice, bob })
    }

    /// Position over ranks `1..=m` where bit `i` of `mask` set means Alice
    /// holds rank `i + 1`.
    pub fn from_mask(mask: u64, live: usize) -> Position {
        assert!(live <= MAX_CANONICAL_LIVE);
        let mut alice = Vec::new();
        let mut bob = Vec::new();
        for i in 0..live {
            if mask >> i & 1 == 1 {
                alice.push(i as Rank + 1);
            } else {
                bob.push(i as Rank + 1);
            }
        }
        Position { alice: Hand(alice), bob: Hand(bob) }
    }

    pub fn alice(&self) -> &Hand {
        &self.alice
    }

    pub fn bob(&self) -> &Hand {
        &self.bob
    }

    pub fn hand(&self, player: Player) -> &Hand {
        match player {
            Player::Alice => &self.alice,
            Player::Bob => &self.bob,
        }
    }

    pub fn live_count(&self) -> usize {
        self.alice.len() + self.bob.len()
    }

    /// The same position with the players' hands exchanged.
    pub fn mirrored(&self) -> Position {
        Position { alice: self.bob.clone(), bob: self.alice.clone() }
    }

    /// Hands as seen by `player`: (own, opponent).
    pub fn sides(&self, player: Player) -> (&Hand, &Hand) {
        (self.hand(player), self.hand(player.other()))
    }

    /// Apply `rank ↦ f(rank)` to every card. `f` must be strictly increasing.
    pub fn relabel(&self, f: impl Fn(Rank) -> Rank) -> Position {
        Position { alice: Hand(self.alice.0.iter().map(|&r| f(r)).collect()), bob: Hand(self.bob.0.iter().map(|&r| f(r)).collect()) }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.alice, self.bob)
    }
}

impl FromStr for Position {
    type Err = Error;

    /// Parses `1,2,4/3,5`, with `-` for an empty side.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let (a, b) = s.trim().split_once('/').ok_or_else(|| err("expected <alice>/<bob>"))?;
        let side = |text: &str| -> Result<Hand> {
            let text = text.trim();
            if text == "-" {
                return Ok(Hand::empty());
            }
            if text.is_empty() {
                return Err(err("empty side must be written as '-'"));
            }
            let mut ranks = Vec::new();
            for tok in text.split(',') {
                let value: u64 = tok.trim().parse().map_err(|_| err("ranks must be positive integers"))?;
                if value == 0 || value > Rank::MAX as u64 {
                    return Err(Error::InvalidRank(value));
                }
                ranks.push(value as Rank);
            }
            Hand::new(ranks)
        };
        Position::from_hands(side(a)?, side(b)?)
    }
}

/// A position with ranks compressed to `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalPosition {
    pub live: usize,
    /// Bit `i` set: Alice holds compressed rank `i + 1`.
    pub mask: u64,
    /// `rank_map[i]` is the original label of compressed rank `i + 1`.
    pub rank_map: Vec<Rank>,
}

impl CanonicalPosition {
    pub fn owner(&self, compressed: usize) -> Player {
        if self.mask >> (compressed - 1) & 1 == 1 { Player::Alice } else { Player::Bob }
    }

    pub fn ownership(&self) -> Vec<Player> {
        (1..=self.live).map(|c| self.owner(c)).collect()
    }

    /// The compressed rank of an original label, if it is live.
    pub fn compress(&self, rank: Rank) -> Option<usize> {
        self.rank_map.binary_search(&rank).ok().map(|i| i + 1)
    }

    pub fn decode(&self, compressed: usize) -> Rank {
        self.rank_map[compressed - 1]
    }

    pub fn to_position(&self) -> Position {
        Position::from_mask(self.mask, self.live)
    }
}

pub fn canonicalize(pos: &Position) -> Result<CanonicalPosition> {
    let live = pos.live_count();
    if live > MAX_CANONICAL_LIVE {
        return Err(Error::CapacityExceeded { live, cap: MAX_CANONICAL_LIVE });
    }
    let mut rank_map = Vec::with_capacity(live);
    let mut mask = 0u64;
    let (a, b) = (pos.alice.ranks(), pos.bob.ranks());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_alice = j == b.len() || (i < a.len() && a[i] < b[j]);
        if take_alice {
            if j < b.len() && a[i] == b[j] {
                return Err(Error::Overlap(a[i]));
            }
            mask |= 1 << rank_map.len();
            rank_map.push(a[i]);
            i += 1;
        } else {
            if i < a.len() && a[i] == b[j] {
                return Err(Error::Overlap(b[j]));
            }
            rank_map.push(b[j]);
            j += 1;
        }
    }
    Ok(CanonicalPosition { live, mask, rank_map })
}

/// Winner of a finished game, or `None` while both players hold cards.
pub fn is_terminal(pos: &Position) -> Result<Option<Player>> {
    match (pos.alice.is_empty(), pos.bob.is_empty()) {
        (true, true) => Err(Error::BothEmpty),
        (false, true) => Ok(Some(Player::Alice)),
        (true, false) => Ok(Some(Player::Bob)),
        (false, false) => Ok(None),
    }
}

/// Play one battle.
pub fn successor(pos: &Position, alice_card: Rank, bob_card: Rank) -> Result<Position> {
    if pos.alice.is_empty() || pos.bob.is_empty() {
        return Err(Error::TerminalPosition);
    }
    if !pos.alice.contains(alice_card) {
        return Err(Error::CardNotHeld { player: Player::Alice, rank: alice_card });
    }
    if !pos.bob.contains(bob_card) {
        return Err(Error::CardNotHeld { player: Player::Bob, rank: bob_card });
    }
    let mut next = pos.clone();
    if alice_card > bob_card {
        next.alice.remove(alice_card);
        next.bob.remove(bob_card);
        next.alice.insert(bob_card);
    } else {
        next.bob.remove(bob_card);
        next.alice.remove(alice_card);
        next.bob.insert(alice_card);
    }
    Ok(next)
}

/// Winner of a battle between two distinct cards.
pub fn battle_winner(alice_card: Rank, bob_card: Rank) -> Player {
    if alice_card > bob_card { Player::Alice } else { Player::Bob }
}

/// `c` is at least as good as `other`: for every k, the k-th highest card of
/// `c` exists and is no lower than the k-th highest of `other`, or `other`
/// has fewer than k cards.
pub fn dominates(c: &Hand, other: &Hand) -> bool {
    c.len() >= other.len() && c.ranks().iter().rev().zip(other.ranks().iter().rev()).all(|(x, y)| x >= y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Battle {
    pub alice: Rank,
    pub bob: Rank,
    pub winner: Player,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub start: Position,
    pub battles: Vec<Battle>,
    pub final_winner: Player,
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.start)?;
        let mut pos = self.start.clone();
        for (i, b) in self.battles.iter().enumerate() {
            pos = successor(&pos, b.alice, b.bob).map_err(|_| fmt::Error)?;
            writeln!(f, "  {:>3}: alice {} vs bob {} -> {} wins, now {}", i + 1, b.alice, b.bob, b.winner, pos)?;
        }
        write!(f, "winner {}", self.final_winner)
    }
}

/// Referee: plays two strategies against each other from `pos`.
///
/// Both strategies are asked for a card before either choice is applied, so
/// neither can see the other's pending play.
pub fn play_out(pos: &Position, alice: &dyn Strategy, bob: &dyn Strategy, max_rounds: usize) -> Result<Transcript> {
    let mut current = pos.clone();
    let mut alice_memory = alice.initial_memory(pos, Player::Alice);
    let mut bob_memory = bob.initial_memory(pos, Player::Bob);
    let mut battles = Vec::new();
    loop {
        if let Some(winner) = is_terminal(&current)? {
            return Ok(Transcript { start: pos.clone(), battles, final_winner: winner });
        }
        if battles.len() >= max_rounds {
            return Err(Error::RoundLimitExceeded(max_rounds));
        }
        let a = checked_choice(alice, &current, Player::Alice, &alice_memory)?;
        let b = checked_choice(bob, &current, Player::Bob, &bob_memory)?;
        let next = successor(&current, a, b)?;
        alice_memory = alice.observe(&alice_memory, &current, Player::Alice, a, b, &next);
        bob_memory = bob.observe(&bob_memory, &current, Player::Bob, b, a, &next);
        battles.push(Battle { alice: a, bob: b, winner: battle_winner(a, b) });
        current = next;
    }
}

pub(crate) fn checked_choice(strategy: &dyn Strategy, pos: &Position, me: Player, memory: &[u32]) -> Result<Rank> {
    let card = strategy.choose(pos, me, memory);
    if pos.hand(me).contains(card) { Ok(card) } else { Err(Error::Strategy { name: strategy.name().to_string(), player: me, rank: card }) }
}
