//! Genus symbols: parsing, validation, canonical text, and enumeration.
//!
//! Text grammar: `symbol := component ("." component)*`,
//! `component := q ["_" (t | "II")] "^" ("+"|"-") n`, with `"1"` for the trivial form.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::{kronecker2, prime_power};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i32(v: i32) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

/// One p-adic Jordan component `q^{±n}` with `q = p^scale_exp`.
///
/// For odd `p` the parity is always `Odd` and no oddity is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanComponent {
    pub prime: u64,
    pub scale_exp: u32,
    pub rank: u32,
    pub sign: Sign,
    pub parity: Parity,
    pub oddity: Option<u8>,
}

/// Largest rank accepted for a single component.
pub const MAX_COMPONENT_RANK: u32 = 64;

impl JordanComponent {
    pub fn odd_prime(prime: u64, scale_exp: u32, rank: u32, sign: Sign) -> Result<Self> {
        let c = JordanComponent {
            prime,
            scale_exp,
            rank,
            sign,
            parity: Parity::Odd,
            oddity: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn two_even(scale_exp: u32, rank: u32, sign: Sign) -> Result<Self> {
        let c = JordanComponent {
            prime: 2,
            scale_exp,
            rank,
            sign,
            parity: Parity::Even,
            oddity: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn two_odd(scale_exp: u32, rank: u32, sign: Sign, oddity: u8) -> Result<Self> {
        let c = JordanComponent {
            prime: 2,
            scale_exp,
            rank,
            sign,
            parity: Parity::Odd,
            oddity: Some(oddity % 8),
        };
        c.validate()?;
        Ok(c)
    }

    /// The scale `q = p^k`.
    pub fn scale(&self) -> u64 {
        self.prime.pow(self.scale_exp)
    }

    /// Group order `q^n`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.scale().checked_pow(self.rank)
    }

    /// Level of the component: `q`, except odd 2-adic components which have level `2q`.
    pub fn level(&self) -> u64 {
        if self.prime == 2 && self.parity == Parity::Odd {
            2 * self.scale()
        } else {
            self.scale()
        }
    }

    pub fn is_odd_two_adic(&self) -> bool {
        self.prime == 2 && self.parity == Parity::Odd
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.prime;
        if !crate::arith::is_prime(p) {
            return Err(Error::Validity(format!("{p} is not prime")));
        }
        if self.scale_exp == 0 {
            return Err(Error::Validity("scale must be a proper prime power".into()));
        }
        if self.rank == 0 {
            return Err(Error::Validity(format!("rank-0 component at scale {}", self.scale())));
        }
        if self.rank > MAX_COMPONENT_RANK {
            return Err(Error::Validity(format!("rank {} too large", self.rank)));
        }
        if self.prime.checked_pow(self.scale_exp).is_none() || self.order().is_none() {
            return Err(Error::Validity("component order overflows".into()));
        }
        match (p == 2, self.parity, self.oddity) {
            (false, Parity::Odd, None) => Ok(()),
            (false, _, _) => Err(Error::Validity(format!(
                "odd prime {p} takes no parity or oddity marker"
            ))),
            (true, Parity::Even, None) => {
                if self.rank % 2 == 1 {
                    Err(Error::Validity(format!(
                        "even 2-adic component {} has odd rank {}",
                        self.scale(),
                        self.rank
                    )))
                } else {
                    Ok(())
                }
            }
            (true, Parity::Odd, Some(t)) => {
                if unit_decomposition(self.rank, t, self.sign).is_some() {
                    Ok(())
                } else {
                    Err(Error::Validity(format!(
                        "oddity {t}, sign {} and rank {} are not realizable",
                        self.sign.as_char(),
                        self.rank
                    )))
                }
            }
            (true, _, _) => Err(Error::Validity("inconsistent parity and oddity".into())),
        }
    }
}

impl fmt::Display for JordanComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.scale();
        let s = self.sign.as_char();
        match (self.prime, self.parity, self.oddity) {
            (2, Parity::Even, _) => write!(f, "{q}_II^{s}{}", self.rank),
            (2, Parity::Odd, Some(t)) => write!(f, "{q}_{t}^{s}{}", self.rank),
            _ => write!(f, "{q}^{s}{}", self.rank),
        }
    }
}

/// Unit norms `a_1 <= ... <= a_n` in `{1,3,5,7}` with `Σa ≡ t (mod 8)` and
/// `Π(a_i|2) = sign`; the lexicographically smallest such list, or `None`.
pub fn unit_decomposition(n: u32, t: u8, sign: Sign) -> Option<Vec<u8>> {
    let n = n as i64;
    let t = (t % 8) as i64;
    // Lexicographically smallest non-decreasing list: maximize the count of 1s, then 3s, then 5s.
    for c1 in (0..=n).rev() {
        for c3 in (0..=n - c1).rev() {
            for c5 in (0..=n - c1 - c3).rev() {
                let c7 = n - c1 - c3 - c5;
                let sum = (c1 + 3 * c3 + 5 * c5 + 7 * c7).rem_euclid(8);
                let s = if (c3 + c5) % 2 == 0 { Sign::Plus } else { Sign::Minus };
                if sum == t && s == sign {
                    let mut out = Vec::with_capacity(n as usize);
                    out.extend(std::iter::repeat(1u8).take(c1 as usize));
                    out.extend(std::iter::repeat(3u8).take(c3 as usize));
                    out.extend(std::iter::repeat(5u8).take(c5 as usize));
                    out.extend(std::iter::repeat(7u8).take(c7 as usize));
                    debug_assert_eq!(
                        out.iter().map(|&a| kronecker2(a as i64)).product::<i32>(),
                        sign.value()
                    );
                    return Some(out);
                }
            }
        }
    }
    None
}

/// A validated genus symbol; components sorted by `(prime, scale_exp)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenusSymbol {
    components: Vec<JordanComponent>,
}

impl GenusSymbol {
    pub fn trivial() -> Self {
        GenusSymbol::default()
    }

    /// Validates, sorts, and rejects duplicate `(prime, scale)` pairs.
    pub fn new(mut components: Vec<JordanComponent>) -> Result<Self> {
        for c in &components {
            c.validate()?;
        }
        components.sort_by_key(|c| (c.prime, c.scale_exp));
        for w in components.windows(2) {
            if (w[0].prime, w[0].scale_exp) == (w[1].prime, w[1].scale_exp) {
                return Err(Error::Validity(format!(
                    "duplicate component at scale {}",
                    w[0].scale()
                )));
            }
        }
        let sym = GenusSymbol { components };
        if sym.checked_order().is_none() {
            return Err(Error::Validity("group order overflows".into()));
        }
        Ok(sym)
    }

    pub fn components(&self) -> &[JordanComponent] {
        &self.components
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    fn checked_order(&self) -> Option<u64> {
        self.components
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.order()?))
    }

    pub fn order(&self) -> u64 {
        self.checked_order().expect("validated symbol order fits in u64")
    }

    pub fn level(&self) -> u64 {
        let mut by_prime: std::collections::BTreeMap<u64, u64> = Default::default();
        for c in &self.components {
            let e = by_prime.entry(c.prime).or_insert(1);
            *e = (*e).max(c.level());
        }
        by_prime.values().product()
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(|c| c.rank).sum()
    }

    /// Distinct primes in increasing order.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.components.iter().map(|c| c.prime).collect();
        ps.dedup();
        ps
    }

    pub fn p_part(&self, p: u64) -> GenusSymbol {
        GenusSymbol {
            components: self
                .components
                .iter()
                .filter(|c| c.prime == p)
                .cloned()
                .collect(),
        }
    }

    pub fn component_at(&self, p: u64, k: u32) -> Option<&JordanComponent> {
        self.components
            .iter()
            .find(|c| c.prime == p && c.scale_exp == k)
    }

    /// Orthogonal sum. Components at a common scale merge: ranks add, signs multiply, and at
    /// `p = 2` the result is odd if either part is, with oddities added mod 8.
    pub fn direct_sum(&self, other: &GenusSymbol) -> Result<GenusSymbol> {
        let mut comps = self.components.clone();
        for c in &other.components {
            match comps
                .iter_mut()
                .find(|x| (x.prime, x.scale_exp) == (c.prime, c.scale_exp))
            {
                None => comps.push(c.clone()),
                Some(x) => {
                    x.rank += c.rank;
                    x.sign = Sign::from_i32(x.sign.value() * c.sign.value());
                    if x.prime == 2 && (x.parity == Parity::Odd || c.parity == Parity::Odd) {
                        let t = x.oddity.unwrap_or(0) + c.oddity.unwrap_or(0);
                        x.parity = Parity::Odd;
                        x.oddity = Some(t % 8);
                    }
                }
            }
        }
        GenusSymbol::new(comps)
    }

    /// Applies `2_t^ε ≅ 2_{t+4}^{−ε}` to every odd 2-adic component at scale 2 so that `ε = +1`.
    ///
    /// Only scale 2 is touched: there a unit `a` and `a + 4` give the same norm `a/4 mod 1`.
    /// At scale 4 and above the two symbols describe non-isomorphic forms.
    pub fn normalize_oddity(&self) -> GenusSymbol {
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                if c.is_odd_two_adic() && c.scale_exp == 1 && c.sign == Sign::Minus {
                    c.sign = Sign::Plus;
                    c.oddity = c.oddity.map(|t| (t + 4) % 8);
                }
                c
            })
            .collect();
        GenusSymbol { components }
    }
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "1");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for GenusSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for GenusSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbol(s)
    }
}

pub fn parse_symbol(text: &str) -> Result<GenusSymbol> {
    let text = text.trim();
    let syntax = |reason: &str| Error::Syntax {
        input: text.to_string(),
        reason: reason.to_string(),
    };
    if text.is_empty() {
        return Err(syntax("empty symbol"));
    }
    if text == "1" {
        return Ok(GenusSymbol::trivial());
    }
    let mut comps = Vec::new();
    for part in text.split('.') {
        comps.push(parse_component(part).map_err(|e| match e {
            Error::Syntax { reason, .. } => syntax(&format!("component {part:?}: {reason}")),
            other => other,
        })?);
    }
    GenusSymbol::new(comps)
}

enum Subscript {
    None,
    Even,
    Oddity(u8),
}

fn parse_component(part: &str) -> Result<JordanComponent> {
    let syntax = |reason: &str| Error::Syntax {
        input: part.to_string(),
        reason: reason.to_string(),
    };
    let (head, tail) = part.split_once('^').ok_or_else(|| syntax("missing '^'"))?;
    let (q_text, sub) = match head.split_once('_') {
        None => (head, Subscript::None),
        Some((q, "II")) => (q, Subscript::Even),
        Some((q, t)) => {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(syntax("subscript must be digits or II"));
            }
            let t: u64 = t.parse().map_err(|_| syntax("oddity out of range"))?;
            (q, Subscript::Oddity((t % 8) as u8))
        }
    };
    if q_text.is_empty() || !q_text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax("scale must be a positive integer"));
    }
    let q: u64 = q_text.parse().map_err(|_| syntax("scale out of range"))?;
    let mut chars = tail.chars();
    let sign = match chars.next() {
        Some('+') => Sign::Plus,
        Some('-') => Sign::Minus,
        _ => return Err(syntax("expected '+' or '-' after '^'")),
    };
    let n_text = chars.as_str();
    if n_text.is_empty() || !n_text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax("rank must be a non-negative integer"));
    }
    let rank: u32 = n_text.parse().map_err(|_| syntax("rank out of range"))?;
    let (p, k) =
        prime_power(q).ok_or_else(|| Error::Validity(format!("{q} is not a prime power")))?;
    match (p, sub) {
        (2, Subscript::None) | (2, Subscript::Even) => JordanComponent::two_even(k, rank, sign),
        (2, Subscript::Oddity(t)) => JordanComponent::two_odd(k, rank, sign, t),
        (_, Subscript::None) => JordanComponent::odd_prime(p, k, rank, sign),
        (_, _) => Err(Error::Validity(format!(
            "odd prime {p} takes no subscript"
        ))),
    }
}

/// Every valid single-component option of rank `n` at `p^k`.
fn component_options(p: u64, k: u32, n: u32) -> Vec<JordanComponent> {
    let mut out = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        if p != 2 {
            out.extend(JordanComponent::odd_prime(p, k, n, sign));
            continue;
        }
        if n % 2 == 0 {
            out.extend(JordanComponent::two_even(k, n, sign));
        }
        for t in 0..8u8 {
            if t as u32 % 2 == n % 2 {
                out.extend(JordanComponent::two_odd(k, n, sign, t));
            }
        }
    }
    out
}

/// All valid p-adic symbols of order `<= max_order`.
fn enumerate_p_adic(p: u64, max_order: u64) -> Vec<(u64, Vec<JordanComponent>)> {
    let mut max_exp = 0u32;
    let mut o = 1u64;
    while let Some(next) = o.checked_mul(p) {
        if next > max_order {
            break;
        }
        o = next;
        max_exp += 1;
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        p: u64,
        k: u32,
        budget: u32,
        max_exp: u32,
        current: &mut Vec<JordanComponent>,
        out: &mut Vec<(u64, Vec<JordanComponent>)>,
    ) {
        if k > max_exp {
            let order = current.iter().map(|c| c.order().unwrap()).product();
            out.push((order, current.clone()));
            return;
        }
        rec(p, k + 1, budget, max_exp, current, out);
        let mut n = 1;
        while n * k <= budget {
            for c in component_options(p, k, n) {
                current.push(c);
                rec(p, k + 1, budget - n * k, max_exp, current, out);
                current.pop();
            }
            n += 1;
        }
    }
    rec(p, 1, max_exp, max_exp, &mut current, &mut out);
    out
}

/// All valid genus symbols supported on `primes` with group order `<= max_order`,
/// sorted by `(order, canonical text)`.
pub fn enumerate_symbols(max_order: u64, primes: &[u64]) -> Vec<GenusSymbol> {
    let mut ps: Vec<u64> = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let mut acc: Vec<(u64, Vec<JordanComponent>)> = vec![(1, Vec::new())];
    if max_order >= 1 {
        for &p in &ps {
            let local = enumerate_p_adic(p, max_order);
            let mut next = Vec::new();
            for (o1, c1) in &acc {
                for (o2, c2) in &local {
                    if let Some(o) = o1.checked_mul(*o2) {
                        if o <= max_order {
                            let mut c = c1.clone();
                            c.extend(c2.iter().cloned());
                            next.push((o, c));
                        }
                    }
                }
            }
            acc = next;
        }
    } else {
        acc.clear();
    }
    let mut out: Vec<(u64, String, GenusSymbol)> = acc
        .into_iter()
        .map(|(o, c)| {
            let s = GenusSymbol::new(c).expect("enumerated components are valid");
            (o, s.to_string(), s)
        })
        .collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.dedup_by(|a, b| a.2 == b.2);
    out.into_iter().map(|(_, _, s)| s).collect()
}
