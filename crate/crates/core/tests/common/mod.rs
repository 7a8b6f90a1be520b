//! Test-only references that do not go through the solver table.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigUint;
use peer_pressure::game::{Player, Position, is_terminal, successor};

/// Naive top-down recursion over concrete positions: `(WA, WB)`.
#[derive(Default)]
pub struct TopDownOracle {
    memo: HashMap<Position, (bool, bool)>,
}

impl TopDownOracle {
    pub fn predicates(&mut self, pos: &Position) -> (bool, bool) {
        match is_terminal(pos).unwrap() {
            Some(Player::Alice) => return (true, false),
            Some(Player::Bob) => return (false, true),
            None => {}
        }
        if let Some(&v) = self.memo.get(pos) {
            return v;
        }
        let mut wa = false;
        for &a in pos.alice().ranks() {
            let mut all = true;
            for &b in pos.bob().ranks() {
                if !self.predicates(&successor(pos, a, b).unwrap()).0 {
                    all = false;
                    break;
                }
            }
            if all {
                wa = true;
                break;
            }
        }
        let mut wb = false;
        for &b in pos.bob().ranks() {
            let mut all = true;
            for &a in pos.alice().ranks() {
                if !self.predicates(&successor(pos, a, b).unwrap()).1 {
                    all = false;
                    break;
                }
            }
            if all {
                wb = true;
                break;
            }
        }
        self.memo.insert(pos.clone(), (wa, wb));
        (wa, wb)
    }
}

/// Every position on ranks `1..=m` for `m` in `lo..=hi`, including one-sided ones.
pub fn all_positions(lo: usize, hi: usize) -> impl Iterator<Item = Position> {
    (lo..=hi).flat_map(|m| (0..1u64 << m).map(move |mask| Position::from_mask(mask, m)))
}

/// Decimal expansion of φ to 50 places, scaled by 10^50.
pub const PHI_50: &str = "161803398874989484820458683436563811772030917980576";

pub fn phi_scaled() -> BigUint {
    PHI_50.parse().unwrap()
}

/// `a/b` against φ at 50-digit precision: `Some(true)` for above,
/// `Some(false)` for below, `None` if too close to call.
pub fn numeric_phi_above(a: u64, b: u64, phi: &BigUint) -> Option<bool> {
    let scale = BigUint::from(10u32).pow(50);
    let lhs = BigUint::from(a) * &scale;
    let lo = BigUint::from(b) * phi;
    let hi = &lo + BigUint::from(b);
    if lhs > hi {
        Some(true)
    } else if lhs < lo {
        Some(false)
    } else {
        None
    }
}
