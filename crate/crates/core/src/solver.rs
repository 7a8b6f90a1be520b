//! Exact solver: a tablebase of guaranteed-win predicates over canonical
//! ownership masks, plus strategy extraction and best-response search.
//!
//! For a mask `S` on `m` live cards:
//!
//! * `WA(S)`: some Alice card beats every Bob reply, i.e. for every Bob card
//!   the successor is again `WA`.
//! * `WB(S)`: the same with the roles exchanged.
//!
//! Every successor has `m - 1` live cards, so levels are filled bottom-up and
//! each level only reads the one below it. Masks inside a level are
//! independent and are evaluated in parallel, 64 per output word.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Battle, Player, Position, Rank, Transcript, battle_winner, canonicalize, checked_choice, is_terminal, successor};
use crate::strategy::{Memory, Strategy};

pub const DEFAULT_MMAX: usize = 22;
pub const HARD_CAP: usize = 26;

const CACHE_MAGIC: &[u8; 4] = b"PPTB";
const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    #[serde(rename = "alice")]
    AliceWin,
    #[serde(rename = "bob")]
    BobWin,
    Draw,
}

impl Outcome {
    pub fn win(player: Player) -> Outcome {
        match player {
            Player::Alice => Outcome::AliceWin,
            Player::Bob => Outcome::BobWin,
        }
    }

    pub fn winner(self) -> Option<Player> {
        match self {
            Outcome::AliceWin => Some(Player::Alice),
            Outcome::BobWin => Some(Player::Bob),
            Outcome::Draw => None,
        }
    }

    pub fn mirrored(self) -> Outcome {
        match self {
            Outcome::AliceWin => Outcome::BobWin,
            Outcome::BobWin => Outcome::AliceWin,
            Outcome::Draw => Outcome::Draw,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::AliceWin => "alice",
            Outcome::BobWin => "bob",
            Outcome::Draw => "draw",
        })
    }
}

#[derive(Clone)]
struct Level {
    wa: Vec<u64>,
    wb: Vec<u64>,
}

impl Level {
    #[inline]
    fn wa(&self, mask: u32) -> bool {
        self.wa[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
    }

    #[inline]
    fn wb(&self, mask: u32) -> bool {
        self.wb[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
    }
}

#[inline]
fn remove_bit(t: u32, p: u32) -> u32 {
    (t & ((1 << p) - 1)) | ((t >> (p + 1)) << p)
}

/// Successor mask after Alice plays compressed index `i` and Bob plays `j`
/// (both 0-based).
#[inline]
fn child(mask: u32, i: u32, j: u32) -> u32 {
    if i > j { remove_bit(mask | 1 << j, i) } else { remove_bit(mask & !(1 << i), j) }
}

struct Bits(u32);

impl Iterator for Bits {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i)
    }
}

fn evaluate(mask: u32, live: u32, lower: &Level) -> (bool, bool) {
    let full = ((1u64 << live) - 1) as u32;
    if mask == full {
        return (true, false);
    }
    if mask == 0 {
        return (false, true);
    }
    let bob = !mask & full;
    let wa = Bits(mask).any(|i| Bits(bob).all(|j| lower.wa(child(mask, i, j))));
    let wb = Bits(bob).any(|j| Bits(mask).all(|i| lower.wb(child(mask, i, j))));
    (wa, wb)
}

/// `WA`/`WB` bit arrays for every ownership mask with `1..=mmax` live cards.
#[derive(Clone)]
pub struct SolverTable {
    mmax: usize,
    levels: Vec<Level>,
}

impl fmt::Debug for SolverTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolverTable").field("mmax", &self.mmax).field("bytes", &self.memory_bytes()).finish()
    }
}

fn words_for(live: usize) -> usize {
    (1usize << live).div_ceil(64)
}

impl SolverTable {
    /// Build every level up to `mmax` on the current rayon pool.
    pub fn build(mmax: usize) -> Result<SolverTable> {
        if mmax == 0 || mmax > HARD_CAP {
            return Err(Error::CapacityExceeded { live: mmax, cap: HARD_CAP });
        }
        let mut levels = Vec::with_capacity(mmax + 1);
        levels.push(Level { wa: vec![0], wb: vec![0] });
        for live in 1..=mmax {
            let lower = &levels[live - 1];
            let size = 1u64 << live;
            let words: Vec<(u64, u64)> = (0..words_for(live))
                .into_par_iter()
                .map(|w| {
                    let (mut wa, mut wb) = (0u64, 0u64);
                    let start = (w as u64) << 6;
                    for bit in 0..64u64.min(size - start) {
                        let mask = (start + bit) as u32;
                        let (a, b) = evaluate(mask, live as u32, lower);
                        assert!(!(a && b), "both players win mask {mask:#b} at {live} live cards");
                        wa |= (a as u64) << bit;
                        wb |= (b as u64) << bit;
                    }
                    (wa, wb)
                })
                .collect();
            let (wa, wb) = words.into_iter().unzip();
            levels.push(Level { wa, wb });
        }
        Ok(SolverTable { mmax, levels })
    }

    /// Build on a dedicated pool of `workers` threads.
    pub fn build_with_workers(mmax: usize, workers: usize) -> Result<SolverTable> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| SolverTable::build(mmax))
    }

    pub fn mmax(&self) -> usize {
        self.mmax
    }

    pub fn level_size(&self, live: usize) -> usize {
        if live == 0 || live > self.mmax { 0 } else { 1 << live }
    }

    pub fn memory_bytes(&self) -> usize {
        self.levels.iter().map(|l| (l.wa.len() + l.wb.len()) * 8).sum()
    }

    fn check_live(&self, live: usize) -> Result<()> {
        if live > self.mmax { Err(Error::CapacityExceeded { live, cap: self.mmax }) } else { Ok(()) }
    }

    /// `(WA, WB)` for a canonical mask. Panics if `live` is out of range.
    pub fn predicates(&self, live: usize, mask: u64) -> (bool, bool) {
        assert!(live >= 1 && live <= self.mmax, "live count {live} outside 1..={}", self.mmax);
        let level = &self.levels[live];
        let mask = mask as u32;
        (level.wa(mask), level.wb(mask))
    }

    fn wins(&self, live: usize, mask: u64, player: Player) -> bool {
        let (wa, wb) = self.predicates(live, mask);
        match player {
            Player::Alice => wa,
            Player::Bob => wb,
        }
    }

    /// Masks where both predicates hold. Empty for any correctly built table.
    pub fn exclusion_violations(&self) -> usize {
        self.levels.iter().skip(1).map(|l| l.wa.iter().zip(&l.wb).map(|(a, b)| (a & b).count_ones() as usize).sum::<usize>()).sum()
    }

    pub fn outcome(&self, pos: &Position) -> Result<Outcome> {
        if let Some(winner) = is_terminal(pos)? {
            return Ok(Outcome::win(winner));
        }
        let c = canonicalize(pos)?;
        self.check_live(c.live)?;
        Ok(match self.predicates(c.live, c.mask) {
            (true, _) => Outcome::AliceWin,
            (_, true) => Outcome::BobWin,
            _ => Outcome::Draw,
        })
    }

    /// Cards `player` can play that keep a guaranteed win against every
    /// reply, ascending.
    pub fn winning_moves(&self, pos: &Position, player: Player) -> Result<Vec<Rank>> {
        if is_terminal(pos)?.is_some() {
            return Err(Error::TerminalPosition);
        }
        let c = canonicalize(pos)?;
        self.check_live(c.live)?;
        if !self.wins(c.live, c.mask, player) {
            return Err(Error::NotWinning(player));
        }
        let full = ((1u64 << c.live) - 1) as u32;
        let mask = c.mask as u32;
        let (mine, theirs) = match player {
            Player::Alice => (mask, !mask & full),
            Player::Bob => (!mask & full, mask),
        };
        let moves = Bits(mine)
            .filter(|&x| {
                Bits(theirs).all(|y| {
                    let next = match player {
                        Player::Alice => child(mask, x, y),
                        Player::Bob => child(mask, y, x),
                    };
                    self.wins(c.live - 1, next as u64, player)
                })
            })
            .map(|x| c.rank_map[x as usize])
            .collect();
        Ok(moves)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = Vec::new();
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.mmax as u32).to_le_bytes());
        for live in 1..=self.mmax {
            let n = cache_bytes(live);
            let level = &self.levels[live];
            for words in [&level.wa, &level.wb] {
                let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
                out.extend_from_slice(&bytes[..n]);
            }
        }
        let mut file = fs::File::create(path)?;
        file.write_all(&out)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<SolverTable> {
        let mut data = Vec::new();
        fs::File::open(path)?.read_to_end(&mut data)?;
        SolverTable::from_bytes(&data)
    }

    pub fn from_bytes(data: &[u8]) -> Result<SolverTable> {
        if data.len() < 12 || &data[..4] != CACHE_MAGIC {
            return Err(Error::Cache("missing PPTB header".into()));
        }
        let version = u32::from_le_bytes(data[4..8].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        let mmax = u32::from_le_bytes(data[8..12].try_into().unwrap()) as usize;
        if mmax == 0 || mmax > HARD_CAP {
            return Err(Error::Cache(format!("mmax {mmax} out of range")));
        }
        let expected = 12 + (1..=mmax).map(|m| 2 * cache_bytes(m)).sum::<usize>();
        if data.len() != expected {
            return Err(Error::Cache(format!("expected {expected} bytes, found {}", data.len())));
        }
        let mut levels = vec![Level { wa: vec![0], wb: vec![0] }];
        let mut at = 12;
        for live in 1..=mmax {
            let n = cache_bytes(live);
            let mut read = || {
                let mut buf = vec![0u8; words_for(live) * 8];
                buf[..n].copy_from_slice(&data[at..at + n]);
                at += n;
                buf.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect::<Vec<u64>>()
            };
            let wa = read();
            let wb = read();
            levels.push(Level { wa, wb });
        }
        let table = SolverTable { mmax, levels };
        if table.exclusion_violations() > 0 {
            return Err(Error::Cache("table has masks won by both players".into()));
        }
        Ok(table)
    }
}

fn cache_bytes(live: usize) -> usize {
    (1usize << live).div_ceil(8)
}

/// Solver-backed policy: plays the lowest winning card when one exists,
/// otherwise the lowest card.
#[derive(Debug, Clone)]
pub struct SolverStrategy {
    table: Arc<SolverTable>,
    name: String,
}

impl SolverStrategy {
    pub fn new(table: Arc<SolverTable>) -> SolverStrategy {
        SolverStrategy { table, name: "solver".into() }
    }
}

impl Strategy for SolverStrategy {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose(&self, pos: &Position, me: Player, _: &[u32]) -> Rank {
        let lowest = pos.hand(me).lowest().expect("choose called with an empty hand");
        match self.table.winning_moves(pos, me) {
            Ok(moves) => moves.first().copied().unwrap_or(lowest),
            Err(_) => lowest,
        }
    }
}

/// A winning strategy for `player`, which must have a guaranteed win.
pub fn extract_strategy(table: &Arc<SolverTable>, pos: &Position, player: Player) -> Result<SolverStrategy> {
    if table.outcome(pos)? != Outcome::win(player) {
        return Err(Error::NotWinning(player));
    }
    Ok(SolverStrategy { table: Arc::clone(table), name: format!("solver-{player}") })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BestResponseReport {
    pub beaten: bool,
    pub witness: Option<Transcript>,
}

fn order(revealed: Player, card: Rank, reply: Rank) -> (Rank, Rank) {
    match revealed {
        Player::Alice => (card, reply),
        Player::Bob => (reply, card),
    }
}

type StateKey = (Position, Memory);

struct Refuter<'a> {
    revealed: &'a dyn Strategy,
    player: Player,
    // Some(reply) when the defender can force a win from this state.
    memo: HashMap<StateKey, Option<Rank>>,
}

impl Refuter<'_> {
    fn refute(&mut self, pos: &Position, memory: &Memory) -> Result<Option<Rank>> {
        let key = (pos.clone(), memory.clone());
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let defender = self.player.other();
        let card = checked_choice(self.revealed, pos, self.player, memory)?;
        let mut found = None;
        for &reply in pos.hand(defender).ranks() {
            let (a, b) = order(self.player, card, reply);
            let next = successor(pos, a, b)?;
            let wins = match is_terminal(&next)? {
                Some(w) => w == defender,
                None => {
                    let next_memory = self.revealed.observe(memory, pos, self.player, card, reply, &next);
                    self.refute(&next, &next_memory)?.is_some()
                }
            };
            if wins {
                found = Some(reply);
                break;
            }
        }
        self.memo.insert(key, found);
        Ok(found)
    }
}

/// Search for a line where `defender` beats the fixed strategy `revealed`
/// (played by the other side).
pub fn best_response(pos: &Position, revealed: &dyn Strategy, defender: Player) -> Result<BestResponseReport> {
    let player = defender.other();
    if let Some(winner) = is_terminal(pos)? {
        let beaten = winner == defender;
        let witness = beaten.then(|| Transcript { start: pos.clone(), battles: vec![], final_winner: winner });
        return Ok(BestResponseReport { beaten, witness });
    }
    let mut refuter = Refuter { revealed, player, memo: HashMap::new() };
    let start_memory = revealed.initial_memory(pos, player);
    if refuter.refute(pos, &start_memory)?.is_none() {
        return Ok(BestResponseReport { beaten: false, witness: None });
    }
    let mut battles = Vec::new();
    let (mut current, mut memory) = (pos.clone(), start_memory);
    while is_terminal(&current)?.is_none() {
        let card = checked_choice(revealed, &current, player, &memory)?;
        let reply = refuter.memo[&(current.clone(), memory.clone())].expect("refuting line leaves the memo");
        let (a, b) = order(player, card, reply);
        let next = successor(&current, a, b)?;
        memory = revealed.observe(&memory, &current, player, card, reply, &next);
        battles.push(Battle { alice: a, bob: b, winner: battle_winner(a, b) });
        current = next;
    }
    Ok(BestResponseReport { beaten: true, witness: Some(Transcript { start: pos.clone(), battles, final_winner: defender }) })
}

/// Play `revealed` against the reply that refutes it if possible and
/// otherwise keeps the game going longest.
pub fn longest_resistance(pos: &Position, revealed: &dyn Strategy, defender: Player) -> Result<Transcript> {
    struct Search<'a> {
        revealed: &'a dyn Strategy,
        player: Player,
        // (defender wins, rounds remaining, reply)
        memo: HashMap<StateKey, (bool, usize, Rank)>,
    }
    impl Search<'_> {
        fn value(&mut self, pos: &Position, memory: &Memory) -> Result<(bool, usize, Rank)> {
            let key = (pos.clone(), memory.clone());
            if let Some(&v) = self.memo.get(&key) {
                return Ok(v);
            }
            let defender = self.player.other();
            let card = checked_choice(self.revealed, pos, self.player, memory)?;
            let mut best: Option<(bool, usize, Rank)> = None;
            for &reply in pos.hand(defender).ranks() {
                let (a, b) = order(self.player, card, reply);
                let next = successor(pos, a, b)?;
                let (wins, rounds) = match is_terminal(&next)? {
                    Some(w) => (w == defender, 1),
                    None => {
                        let m = self.revealed.observe(memory, pos, self.player, card, reply, &next);
                        let (w, r, _) = self.value(&next, &m)?;
                        (w, r + 1)
                    }
                };
                let better = match best {
                    None => true,
                    Some((bw, br, _)) => (wins && !bw) || (wins == bw && (if wins { rounds < br } else { rounds > br })),
                };
                if better {
                    best = Some((wins, rounds, reply));
                }
            }
            let v = best.expect("defender holds a card");
            self.memo.insert(key, v);
            Ok(v)
        }
    }

    let player = defender.other();
    let mut search = Search { revealed, player, memo: HashMap::new() };
    let mut memory = revealed.initial_memory(pos, player);
    let mut current = pos.clone();
    let mut battles = Vec::new();
    loop {
        if let Some(winner) = is_terminal(&current)? {
            return Ok(Transcript { start: pos.clone(), battles, final_winner: winner });
        }
        let (_, _, reply) = search.value(&current, &memory)?;
        let card = checked_choice(revealed, &current, player, &memory)?;
        let (a, b) = order(player, card, reply);
        let next = successor(&current, a, b)?;
        memory = revealed.observe(&memory, &current, player, card, reply, &next);
        battles.push(Battle { alice: a, bob: b, winner: battle_winner(a, b) });
        current = next;
    }
}
