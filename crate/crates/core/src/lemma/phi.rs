//! Exact comparisons against the golden ratio φ = (1 + √5) / 2.
//!
//! φ² = φ + 1, so for nonnegative integers `a > φb` exactly when
//! `a² > ab + b²`. Equality needs `a = b = 0`. When `a > b` the test is
//! rearranged to `a(a - b)` against `b²` so nothing overflows `u128`.

/// `a > φ·b`.
pub fn phi_times_greater(a: u64, b: u64) -> bool {
    if a <= b {
        // a ≤ b ≤ φb, strict unless both are zero
        return b == 0 && a > 0;
    }
    let (a, b) = (a as u128, b as u128);
    a * (a - b) > b * b
}

/// `a < φ·b`.
pub fn phi_times_less(a: u64, b: u64) -> bool {
    if a <= b {
        return b > 0;
    }
    let (a, b) = (a as u128, b as u128);
    a * (a - b) < b * b
}

/// Smallest `x` with `a < φ·x`, or 0 when `a` is 0.
pub fn min_phi_cover(a: u64) -> u64 {
    if a == 0 {
        return 0;
    }
    let (mut lo, mut hi) = (0u64, a);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if phi_times_less(a, mid) { hi = mid } else { lo = mid }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_examples() {
        assert!(!phi_times_less(5, 3));
        assert!(phi_times_greater(5, 3));
        assert!(phi_times_less(8, 5));
        assert!(!phi_times_greater(8, 5));
        assert!(!phi_times_less(1, 0));
        assert!(phi_times_greater(1, 0));
        assert!(!phi_times_less(0, 0) && !phi_times_greater(0, 0));
    }

    #[test]
    fn fibonacci_pairs_alternate() {
        let (mut f0, mut f1) = (1u64, 1u64);
        let mut prev = None;
        for _ in 0..85 {
            let (a, b) = (f1, f0);
            let g = phi_times_greater(a, b);
            assert_ne!(g, phi_times_less(a, b));
            if let Some(p) = prev {
                assert_ne!(p, g);
            }
            prev = Some(g);
            (f0, f1) = (f1, f0 + f1);
        }
    }

    #[test]
    fn no_overflow_at_the_top() {
        assert!(phi_times_greater(u64::MAX, u64::MAX / 2));
        assert!(phi_times_less(u64::MAX / 2, u64::MAX / 3));
        assert!(phi_times_less(u64::MAX - 1, u64::MAX));
    }

    #[test]
    fn min_cover() {
        assert_eq!(min_phi_cover(0), 0);
        assert_eq!(min_phi_cover(1), 1);
        assert_eq!(min_phi_cover(10), 7);
        assert_eq!(min_phi_cover(10100), 6243);
        for a in 1..3000 {
            let x = min_phi_cover(a);
            assert!(phi_times_less(a, x) && !phi_times_less(a, x - 1));
        }
    }
}
