mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use common::{TopDownOracle, all_positions};
use peer_pressure::game::{Player, Position, canonicalize, is_terminal, successor};
use peer_pressure::solver::{Outcome, SolverTable, best_response, extract_strategy};
use peer_pressure::strategy::{HighestCard, LowestCard, RandomCard, Strategy as Policy};

fn table() -> &'static Arc<SolverTable> {
    static T: OnceLock<Arc<SolverTable>> = OnceLock::new();
    T.get_or_init(|| Arc::new(SolverTable::build(14).unwrap()))
}

fn arb_position(max_live: usize) -> impl Strategy<Value = Position> {
    (1..=max_live).prop_flat_map(|live| (Just(live), 0..(1u64 << live))).prop_map(|(live, mask)| Position::from_mask(mask, live))
}

#[test]
fn matches_top_down_recursion() {
    let mut oracle = TopDownOracle::default();
    for pos in all_positions(1, 10) {
        let c = canonicalize(&pos).unwrap();
        assert_eq!(table().predicates(c.live, c.mask), oracle.predicates(&pos), "{pos}");
    }
}

#[test]
fn level_recurrence_holds() {
    // WA(S) iff some Alice card wins against every Bob reply, read back off the table
    let t = table();
    for pos in all_positions(1, 11) {
        if is_terminal(&pos).unwrap().is_some() {
            continue;
        }
        let after = |a, b| t.outcome(&successor(&pos, a, b).unwrap()).unwrap();
        let wa = pos.alice().ranks().iter().any(|&a| pos.bob().ranks().iter().all(|&b| after(a, b) == Outcome::AliceWin));
        let wb = pos.bob().ranks().iter().any(|&b| pos.alice().ranks().iter().all(|&a| after(a, b) == Outcome::BobWin));
        let expected = match (wa, wb) {
            (true, false) => Outcome::AliceWin,
            (false, true) => Outcome::BobWin,
            (false, false) => Outcome::Draw,
            (true, true) => panic!("{pos}: both players win"),
        };
        assert_eq!(t.outcome(&pos).unwrap(), expected, "{pos}");
    }
}

#[test]
fn no_position_is_won_by_both() {
    assert_eq!(SolverTable::build(18).unwrap().exclusion_violations(), 0);
}

#[test]
fn decided_positions_have_unbeatable_extracted_strategies() {
    let t = table();
    for pos in all_positions(2, 8) {
        let Some(winner) = t.outcome(&pos).unwrap().winner() else { continue };
        if is_terminal(&pos).unwrap().is_some() {
            continue;
        }
        let s = extract_strategy(t, &pos, winner).unwrap();
        assert!(!best_response(&pos, &s, winner.other()).unwrap().beaten, "{pos}");
    }
}

#[test]
fn undecided_positions_refute_every_tried_strategy() {
    let t = table();
    let mut strategies: Vec<Box<dyn Policy>> = vec![Box::new(LowestCard), Box::new(HighestCard)];
    strategies.extend((0..16).map(|s| Box::new(RandomCard::new(s)) as Box<dyn Policy>));
    for pos in all_positions(2, 6) {
        if is_terminal(&pos).unwrap().is_some() {
            continue;
        }
        let outcome = t.outcome(&pos).unwrap();
        for player in [Player::Alice, Player::Bob] {
            if outcome == Outcome::win(player) {
                continue;
            }
            for s in &strategies {
                let report = best_response(&pos, s.as_ref(), player.other()).unwrap();
                assert!(report.beaten, "{pos}: {} for {player} survived", s.name());
                let line = report.witness.unwrap();
                assert_eq!(line.final_winner, player.other());
            }
        }
    }
}

#[test]
fn cache_round_trip() {
    let path = std::env::temp_dir().join(format!("pp-table-{}.bin", std::process::id()));
    let t = SolverTable::build(12).unwrap();
    t.save(&path).unwrap();
    let back = SolverTable::load(&path).unwrap();
    std::fs::remove_file(&path).ok();
    for pos in all_positions(1, 12) {
        assert_eq!(back.outcome(&pos).unwrap(), t.outcome(&pos).unwrap());
    }
}

proptest! {
    #[test]
    fn relabelling_preserves_outcome(pos in arb_position(12), gaps in prop::collection::vec(1u32..50, 12)) {
        let mut labels = Vec::new();
        let mut next = 0;
        for g in gaps {
            next += g;
            labels.push(next);
        }
        let moved = pos.relabel(|r| labels[r as usize - 1]);
        prop_assert_eq!(table().outcome(&moved).unwrap(), table().outcome(&pos).unwrap());
    }

    #[test]
    fn swapping_players_mirrors_outcome(pos in arb_position(13)) {
        prop_assert_eq!(table().outcome(&pos.mirrored()).unwrap(), table().outcome(&pos).unwrap().mirrored());
    }

    #[test]
    fn winning_moves_lead_to_wins(pos in arb_position(13)) {
        let t = table();
        if is_terminal(&pos).unwrap().is_none()
            && let Some(winner) = t.outcome(&pos).unwrap().winner() {
                let moves = t.winning_moves(&pos, winner).unwrap();
                prop_assert!(!moves.is_empty());
                let (_, theirs) = pos.sides(winner);
                for m in moves {
                    for &reply in theirs.ranks() {
                        let next = match winner {
                            Player::Alice => successor(&pos, m, reply).unwrap(),
                            Player::Bob => successor(&pos, reply, m).unwrap(),
                        };
                        prop_assert_eq!(t.outcome(&next).unwrap(), Outcome::win(winner));
                    }
                }
            }
    }
}
