//! Exact dyadic phase angles.
//!
//! Phase-shift gates carry angles `±2π/2^k`. Sums of such angles (the phase
//! accumulation of diagonal circuits) are dyadic multiples of 2π, so a phase
//! is stored as the reduced fraction `2π·num/2^level` with `0 ≤ num <
//! 2^level`. All arithmetic is integer arithmetic modulo 2π; floats only
//! appear when a phase is materialized as `e^{iθ}`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible denominator exponent.
pub const MAX_LEVEL: u32 = 62;

/// An exact dyadic multiple of 2π.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicPhase {
    num: u64,
    level: u32,
}

impl DyadicPhase {
    pub const ZERO: DyadicPhase = DyadicPhase { num: 0, level: 0 };

    /// The unit phase `sign·2π/2^level` of a phase-shift gate.
    pub fn new(sign: i8, level: u32) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Contract(format!(
                "phase sign must be ±1, got {sign}"
            )));
        }
        if level > MAX_LEVEL {
            return Err(Error::PhaseLevel {
                level,
                max: MAX_LEVEL,
            });
        }
        if level == 0 {
            // ±2π is a full turn.
            return Ok(Self::ZERO);
        }
        let num = if sign > 0 { 1 } else { (1u64 << level) - 1 };
        Ok(Self { num, level }.reduced())
    }

    /// π, the phase of a `Z` gate.
    pub fn pi() -> Self {
        DyadicPhase { num: 1, level: 1 }
    }

    /// General fraction `2π·num/2^level`, reduced modulo a full turn.
    pub fn from_fraction(num: i128, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::PhaseLevel {
                level,
                max: MAX_LEVEL,
            });
        }
        let modulus = 1i128 << level;
        let num = num.rem_euclid(modulus) as u64;
        Ok(Self { num, level }.reduced())
    }

    fn reduced(mut self) -> Self {
        if self.num == 0 {
            return Self::ZERO;
        }
        while self.num & 1 == 0 {
            self.num >>= 1;
            self.level -= 1;
        }
        self
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Denominator exponent of the reduced fraction.
    pub fn level(self) -> u32 {
        self.level
    }

    /// Views the phase as `sign·2π/2^k` if it is of that unit form.
    ///
    /// Every phase constructed by [`DyadicPhase::new`] (and its negation)
    /// is; general sums usually are not.
    pub fn sign_level(self) -> Option<(i8, u32)> {
        if self.num == 0 {
            Some((1, 0))
        } else if self.num == 1 {
            Some((1, self.level))
        } else if self.level >= 2 && self.num == (1u64 << self.level) - 1 {
            Some((-1, self.level))
        } else {
            None
        }
    }

    pub fn radians(self) -> f64 {
        std::f64::consts::TAU * (self.num as f64) / (1u64 << self.level) as f64
    }

    /// `e^{iθ}`. Quarter-turn multiples are returned exactly.
    pub fn phase_factor(self) -> Complex64 {
        if self.level <= 2 {
            let quarters = self.num << (2 - self.level);
            return match quarters {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        Complex64::from_polar(1.0, self.radians())
    }

    /// Halves the angle: `2·half() ≡ self (mod 2π)`.
    pub fn half(self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::ZERO);
        }
        if self.level + 1 > MAX_LEVEL {
            return Err(Error::PhaseLevel {
                level: self.level + 1,
                max: MAX_LEVEL,
            });
        }
        Ok(DyadicPhase {
            num: self.num,
            level: self.level + 1,
        })
    }

    /// Snaps a float angle to the closest dyadic phase of smallest level, if
    /// one agrees with it to `tol` in the complex plane.
    pub fn snap(theta: f64, tol: f64) -> Option<Self> {
        let target = Complex64::from_polar(1.0, theta);
        let turns = (theta / std::f64::consts::TAU).rem_euclid(1.0);
        for level in 0..=MAX_LEVEL {
            let denom = (1u128 << level) as f64;
            let num = (turns * denom).round() as i128;
            let cand = Self::from_fraction(num, level).ok()?;
            if (cand.phase_factor() - target).norm() <= tol {
                return Some(cand);
            }
        }
        None
    }
}

impl Add for DyadicPhase {
    type Output = DyadicPhase;

    fn add(self, rhs: DyadicPhase) -> DyadicPhase {
        let level = self.level.max(rhs.level);
        let a = (self.num as u128) << (level - self.level);
        let b = (rhs.num as u128) << (level - rhs.level);
        let modulus = 1u128 << level;
        DyadicPhase {
            num: ((a + b) % modulus) as u64,
            level,
        }
        .reduced()
    }
}

impl AddAssign for DyadicPhase {
    fn add_assign(&mut self, rhs: DyadicPhase) {
        *self = *self + rhs;
    }
}

impl Neg for DyadicPhase {
    type Output = DyadicPhase;

    fn neg(self) -> DyadicPhase {
        if self.num == 0 {
            return self;
        }
        DyadicPhase {
            num: (1u64 << self.level) - self.num,
            level: self.level,
        }
        .reduced()
    }
}

impl fmt::Debug for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2π·{}/2^{}", self.num, self.level)
    }
}

impl fmt::Display for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_forms() {
        let pi = DyadicPhase::new(1, 1).unwrap();
        assert_eq!(pi, DyadicPhase::pi());
        assert_eq!(pi.sign_level(), Some((1, 1)));
        // -π is the same angle as π.
        assert_eq!(DyadicPhase::new(-1, 1).unwrap(), pi);
        let minus_quarter = DyadicPhase::new(-1, 2).unwrap();
        assert_eq!(minus_quarter.sign_level(), Some((-1, 2)));
        assert_eq!(DyadicPhase::new(1, 0).unwrap(), DyadicPhase::ZERO);
    }

    #[test]
    fn full_turn_sums_to_zero() {
        for k in [0u32, 1, 3, 7] {
            let unit = DyadicPhase::new(1, k).unwrap();
            let mut acc = DyadicPhase::ZERO;
            for _ in 0..(1u64 << k) {
                acc += unit;
            }
            assert!(acc.is_zero(), "2^{k} copies of 2π/2^{k} must vanish");
        }
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(DyadicPhase::pi().phase_factor(), Complex64::new(-1.0, 0.0));
        let half_pi = DyadicPhase::new(1, 2).unwrap();
        assert_eq!(half_pi.phase_factor(), Complex64::new(0.0, 1.0));
        assert_eq!(
            DyadicPhase::new(-1, 2).unwrap().phase_factor(),
            Complex64::new(0.0, -1.0)
        );
    }

    #[test]
    fn level_cap_enforced() {
        assert!(DyadicPhase::new(1, MAX_LEVEL).is_ok());
        assert!(matches!(
            DyadicPhase::new(1, MAX_LEVEL + 1),
            Err(Error::PhaseLevel { .. })
        ));
        assert!(DyadicPhase::new(1, MAX_LEVEL).unwrap().half().is_err());
    }

    #[test]
    fn snap_finds_small_levels() {
        let snapped = DyadicPhase::snap(std::f64::consts::FRAC_PI_4, 1e-9).unwrap();
        assert_eq!(snapped, DyadicPhase::new(1, 3).unwrap());
        let snapped = DyadicPhase::snap(-std::f64::consts::FRAC_PI_2, 1e-9).unwrap();
        assert_eq!(snapped, DyadicPhase::new(-1, 2).unwrap());
    }

    proptest! {
        #[test]
        fn add_neg_cancels(num in 0i128..1_000_000, level in 0u32..40) {
            let p = DyadicPhase::from_fraction(num, level).unwrap();
            prop_assert!((p + (-p)).is_zero());
        }

        #[test]
        fn addition_matches_floats(a in 0i128..4096, b in 0i128..4096) {
            let x = DyadicPhase::from_fraction(a, 12).unwrap();
            let y = DyadicPhase::from_fraction(b, 12).unwrap();
            let sum = (x + y).phase_factor();
            let direct = x.phase_factor() * y.phase_factor();
            prop_assert!((sum - direct).norm() < 1e-12);
        }
    }
}
