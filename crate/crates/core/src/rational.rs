//! Exact values in ℚ/ℤ.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Serialize, Serializer};

/// A rational number modulo 1, kept reduced with numerator in `[0, den)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RationalMod1 {
    num: u64,
    den: u64,
}

impl RationalMod1 {
    pub const ZERO: RationalMod1 = RationalMod1 { num: 0, den: 1 };

    /// Builds `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i128, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let d = den as i128;
        let n = num.rem_euclid(d);
        let g = n.gcd(&d).max(1);
        RationalMod1 {
            num: (n / g) as u64,
            den: (d / g) as u64,
        }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn mul_int(self, k: i128) -> Self {
        RationalMod1::new(self.num as i128 * k, self.den)
    }

    /// The numerator of this value written over `den`; `den` must be a multiple of the denominator.
    pub fn numer_over(self, den: u64) -> u64 {
        debug_assert_eq!(den % self.den, 0);
        self.num * (den / self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for RationalMod1 {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for RationalMod1 {
    type Output = RationalMod1;
    fn add(self, rhs: Self) -> Self {
        let l = self.den.lcm(&rhs.den);
        let n = self.num as i128 * (l / self.den) as i128 + rhs.num as i128 * (l / rhs.den) as i128;
        RationalMod1::new(n, l)
    }
}

impl Sub for RationalMod1 {
    type Output = RationalMod1;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for RationalMod1 {
    type Output = RationalMod1;
    fn neg(self) -> Self {
        RationalMod1::new(-(self.num as i128), self.den)
    }
}

impl fmt::Display for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for RationalMod1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
