//! Random dealing, exhaustive census and Monte Carlo estimators.

mod census;
mod deal;
mod estimate;

pub use census::{CensusReport, census};
pub use deal::{Deal, deal_interval_counts, sample_deal, trial_seed};
pub use estimate::{
    CSV_HEADER, EstimateRow, Sampling, SweepMode, SweepSpec, estimate_certificate_rate, estimate_count_only, estimate_draw_rate, sweep,
    wilson_interval, write_csv,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Fixed default seed for reproducible runs.
pub const DEFAULT_SEED: u64 = 1_618_033_988;

/// Positive rational `num/den`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Ratio> {
        if den == 0 || num == 0 {
            return Err(Error::InvalidModel(format!("ratio {num}/{den} must be positive")));
        }
        let g = gcd(num, den);
        Ok(Ratio { num: num / g, den: den / g })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 { write!(f, "{}", self.num) } else { write!(f, "{}", self.as_f64()) }
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// `p/q`, an integer, or a finite decimal such as `1.7`.
    fn from_str(s: &str) -> Result<Ratio> {
        let s = s.trim();
        let bad = || Error::InvalidModel(format!("cannot parse ratio {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            return Ratio::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
        }
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
        let frac_value: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = whole.checked_mul(den).and_then(|w| w.checked_add(frac_value)).ok_or_else(bad)?;
        Ratio::new(num, den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DealKind {
    /// Each card to either player with probability 1/2.
    UnbiasedIid,
    /// Exactly n/2 cards each.
    UnbiasedExact,
    /// Each card to Alice with probability r/(r+1).
    BiasedIid,
    /// Alice gets round(n·r/(r+1)) cards.
    BiasedExact,
}

impl DealKind {
    pub fn code(self) -> &'static str {
        match self {
            DealKind::UnbiasedIid => "ui",
            DealKind::UnbiasedExact => "ue",
            DealKind::BiasedIid => "bi",
            DealKind::BiasedExact => "be",
        }
    }

    pub fn is_biased(self) -> bool {
        matches!(self, DealKind::BiasedIid | DealKind::BiasedExact)
    }

    pub fn is_iid(self) -> bool {
        matches!(self, DealKind::UnbiasedIid | DealKind::BiasedIid)
    }
}

impl FromStr for DealKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<DealKind> {
        match s {
            "ui" => Ok(DealKind::UnbiasedIid),
            "ue" => Ok(DealKind::UnbiasedExact),
            "bi" => Ok(DealKind::BiasedIid),
            "be" => Ok(DealKind::BiasedExact),
            _ => Err(Error::InvalidModel(format!("unknown model {s:?}; expected ui, ue, bi or be"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DealModel {
    pub kind: DealKind,
    pub n: u64,
    pub r: Ratio,
}

impl DealModel {
    pub fn new(kind: DealKind, n: u64, r: Ratio) -> Result<DealModel> {
        if n < 2 {
            return Err(Error::InvalidModel(format!("need at least 2 cards, got {n}")));
        }
        if n > u32::MAX as u64 {
            return Err(Error::InvalidModel(format!("{n} cards is too many")));
        }
        if !kind.is_biased() && r != Ratio::ONE {
            return Err(Error::InvalidModel(format!("unbiased model {} takes r = 1, got {r}", kind.code())));
        }
        if r.num < r.den {
            return Err(Error::InvalidModel(format!("bias ratio must be at least 1, got {r}")));
        }
        let model = DealModel { kind, n, r };
        match kind {
            DealKind::UnbiasedExact if n % 2 == 1 => Err(Error::InvalidModel(format!("exact halves need an even deck, got {n}"))),
            DealKind::BiasedExact => {
                let a = model.alice_count();
                if a == 0 || a >= n { Err(Error::InvalidModel(format!("r = {r} gives Alice {a} of {n} cards"))) } else { Ok(model) }
            }
            _ => Ok(model),
        }
    }

    pub fn unbiased_iid(n: u64) -> Result<DealModel> {
        DealModel::new(DealKind::UnbiasedIid, n, Ratio::ONE)
    }

    /// Alice's card count in the exact-count kinds, rounding halves up.
    pub fn alice_count(&self) -> u64 {
        match self.kind {
            DealKind::UnbiasedExact => self.n / 2,
            _ => {
                let (p, q) = (self.r.num as u128, self.r.den as u128);
                let n = self.n as u128;
                ((2 * n * p + p + q) / (2 * (p + q))) as u64
            }
        }
    }

    /// A uniform `u64` below this goes to Alice in the iid kinds:
    /// `floor(2^64 · r/(r+1))`.
    pub fn iid_threshold(&self) -> u64 {
        let (p, q) = (self.r.num as u128, self.r.den as u128);
        ((p << 64) / (p + q)) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_parsing() {
        assert_eq!("3/2".parse::<Ratio>().unwrap(), Ratio { num: 3, den: 2 });
        assert_eq!("1.8".parse::<Ratio>().unwrap(), Ratio { num: 9, den: 5 });
        assert_eq!("17/10".parse::<Ratio>().unwrap().to_string(), "1.7");
        assert_eq!("2".parse::<Ratio>().unwrap().to_string(), "2");
        assert!("0/1".parse::<Ratio>().is_err());
        assert!("x".parse::<Ratio>().is_err());
        assert!("1/0".parse::<Ratio>().is_err());
    }

    #[test]
    fn model_validation() {
        let r = Ratio::new(3, 2).unwrap();
        let m = DealModel::new(DealKind::BiasedExact, 10, r).unwrap();
        assert_eq!(m.alice_count(), 6);
        assert!(DealModel::new(DealKind::UnbiasedExact, 7, Ratio::ONE).is_err());
        assert!(DealModel::new(DealKind::UnbiasedIid, 8, r).is_err());
        assert!(DealModel::new(DealKind::BiasedIid, 8, Ratio::new(1, 2).unwrap()).is_err());
        assert!(DealModel::new(DealKind::BiasedExact, 2, Ratio::new(5, 1).unwrap()).is_err());
        assert!(DealModel::unbiased_iid(1).is_err());
        assert_eq!(DealModel::unbiased_iid(4).unwrap().iid_threshold(), 1 << 63);
    }
}
