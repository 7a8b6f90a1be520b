//! Single pro-Alice modifications of a position. Chaining them reaches any
//! position in which Alice's hand dominates and Bob's is dominated.

use serde::Serialize;

use crate::game::{Position, canonicalize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ImprovementStep {
    /// Alice gains a new card in gap `0..=m` of the live order.
    ExtraCard { gap: usize },
    /// One of Bob's cards leaves play.
    RemoveCard { rank: usize },
    /// One of Bob's cards moves to Alice.
    Transfer { rank: usize },
    /// Alice's card and the next-higher Bob card trade places.
    Promote { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Improvement {
    pub step: ImprovementStep,
    pub position: Position,
}

/// Every position one elementary improvement away from `pos`, with ranks
/// compressed to `1..=m`. Ranks in the steps are compressed ranks of `pos`.
pub fn improvement_steps(pos: &Position) -> Vec<Improvement> {
    let c = canonicalize(pos).expect("improvement steps need a legal position");
    let (m, mask) = (c.live, c.mask);
    let mut out = Vec::new();
    for gap in 0..=m {
        let low = mask & ((1u64 << gap) - 1);
        let high = (mask >> gap) << (gap + 1);
        out.push(Improvement { step: ImprovementStep::ExtraCard { gap }, position: Position::from_mask(low | 1 << gap | high, m + 1) });
    }
    for j in (0..m).filter(|&j| mask >> j & 1 == 0) {
        if m > 1 {
            let low = mask & ((1u64 << j) - 1);
            let high = (mask >> (j + 1)) << j;
            out.push(Improvement { step: ImprovementStep::RemoveCard { rank: j + 1 }, position: Position::from_mask(low | high, m - 1) });
        }
        out.push(Improvement { step: ImprovementStep::Transfer { rank: j + 1 }, position: Position::from_mask(mask | 1 << j, m) });
    }
    for i in 0..m.saturating_sub(1) {
        if mask >> i & 1 == 1 && mask >> (i + 1) & 1 == 0 {
            out.push(Improvement { step: ImprovementStep::Promote { rank: i + 1 }, position: Position::from_mask(mask ^ (0b11 << i), m) });
        }
    }
    out
}
