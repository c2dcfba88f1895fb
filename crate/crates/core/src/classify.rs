//! Small-type classification from genus symbols, and the structural predicates behind it.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::arith::{kronecker2, minus_one_symbol, prime_power};
use crate::error::{Error, Result};
use crate::form::{DiscriminantForm, Elem, Subgroup};
use crate::genus::{GenusSymbol, JordanComponent, Parity, Sign};
use crate::lift::{isotropic_elements, Bounds};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub symbol: String,
    pub small: bool,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallTypeVerdict {
    pub small: bool,
    pub rule: String,
    pub per_prime: BTreeMap<u64, PrimeVerdict>,
}

/// Small-type verdict; a form is small exactly when every prime part is.
pub fn small_type(sym: &GenusSymbol) -> Result<SmallTypeVerdict> {
    for c in sym.components() {
        c.validate()?;
    }
    let mut per_prime = BTreeMap::new();
    for p in sym.primes() {
        let part = sym.p_part(p);
        let (small, rule) = if p == 2 {
            two_adic_small(&part)
        } else {
            odd_small(&part, p)
        };
        per_prime.insert(
            p,
            PrimeVerdict {
                symbol: part.to_string(),
                small,
                rule,
            },
        );
    }
    let small = per_prime.values().all(|v| v.small);
    let rule = match per_prime.len() {
        0 => "(i) rank≤2".to_string(),
        1 => per_prime.values().next().unwrap().rule.clone(),
        _ if small => "every prime part small".to_string(),
        _ => {
            let bad: Vec<String> = per_prime
                .iter()
                .filter(|(_, v)| !v.small)
                .map(|(p, _)| p.to_string())
                .collect();
            format!("prime part not small: {}", bad.join(","))
        }
    };
    Ok(SmallTypeVerdict {
        small,
        rule,
        per_prime,
    })
}

fn odd_small(part: &GenusSymbol, p: u64) -> (bool, String) {
    let n = part.rank();
    let level_p = part.component_at(p, 1);
    let r_p = level_p.map_or(0, |c| c.rank);
    let r_plus = n - r_p;
    let eps = Sign::from_i32(minus_one_symbol(p));
    let anisotropic_plane = level_p.map_or(false, |c| c.rank == 2 && c.sign == eps.flip());
    match n {
        0..=2 => (true, "(i) rank≤2".into()),
        3 if r_p >= 1 => (true, "(ii) rank 3 with a level-p component".into()),
        4 if r_plus < 2 || (r_plus == 2 && anisotropic_plane) => {
            (true, "(iii) rank 4 = p^-ε2 q1 q2".into())
        }
        5 if r_p == 5 => (true, "(iv) rank 5 of level p".into()),
        _ => (false, format!("rank {n}: no small-type clause")),
    }
}

/// Scale-2 and odd scale-4 components: the part of a 2-adic form with anisotropic order-2
/// elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct TwoAdicA {
    even2: Option<(u32, Sign)>,
    odd2: Option<(u32, u8, Sign)>,
    odd4: u32,
}

fn split_two_adic(part: &GenusSymbol) -> (TwoAdicA, u32) {
    let norm = part.normalize_oddity();
    let mut a = TwoAdicA::default();
    let mut r = 0;
    for c in norm.components() {
        match (c.scale_exp, c.parity) {
            (1, Parity::Even) => a.even2 = Some((c.rank, c.sign)),
            (1, Parity::Odd) => a.odd2 = Some((c.rank, c.oddity.unwrap_or(0), c.sign)),
            (2, Parity::Odd) => a.odd4 = c.rank,
            _ => r += c.rank,
        }
    }
    (a, r)
}

/// `ε·e(t/8) ≠ 1`.
fn eps_e_not_one(t: u8, s: Sign) -> bool {
    !matches!((s, t % 8), (Sign::Plus, 0) | (Sign::Minus, 4))
}

/// `ε·(t|2) = −1`.
fn eps_kronecker_minus(t: u8, s: Sign) -> bool {
    s.value() * kronecker2(t as i64) == -1
}

type Entry = (&'static str, fn(&TwoAdicA) -> bool);

fn none2(a: &TwoAdicA) -> bool {
    a.even2.is_none() && a.odd2.is_none()
}

fn even2(a: &TwoAdicA, n: u32) -> bool {
    a.even2.map_or(false, |(r, _)| r == n)
}

fn odd2(a: &TwoAdicA, pred: impl Fn(u32, u8, Sign) -> bool) -> bool {
    a.odd2.map_or(false, |(n, t, s)| pred(n, t, s))
}

const D1: &[Entry] = &[
    ("{0}", |a| none2(a) && a.odd4 == 0),
    ("2_II^-2", |a| a.even2 == Some((2, Sign::Minus)) && a.odd4 == 0),
    ("2_t^±1", |a| odd2(a, |n, _, _| n == 1) && a.odd4 == 0),
    ("2_t^±2,t≡2(4)", |a| odd2(a, |n, t, _| n == 2 && t % 4 == 2) && a.odd4 == 0),
    ("2_t^ε3,ε(t|2)=-1", |a| {
        odd2(a, |n, t, s| n == 3 && eps_kronecker_minus(t, s)) && a.odd4 == 0
    }),
    ("4_t^±1", |a| none2(a) && a.odd4 == 1),
    ("2_t^±1 4_s^±1", |a| odd2(a, |n, _, _| n == 1) && a.odd4 == 1),
];

const D2: &[Entry] = &[
    ("{0}", |a| none2(a) && a.odd4 == 0),
    ("2_II^±2", |a| even2(a, 2) && a.odd4 == 0),
    ("2_t^±n,n≤3", |a| odd2(a, |n, _, _| n <= 3) && a.odd4 == 0),
    ("2_t^ε4,εe(t/8)≠1", |a| {
        odd2(a, |n, t, s| n == 4 && eps_e_not_one(t, s)) && a.odd4 == 0
    }),
    ("4_s^±1", |a| none2(a) && a.odd4 == 1),
    ("2_II^±2 4_s^±1", |a| even2(a, 2) && a.odd4 == 1),
    ("2_t^±n 4_s^±1,n≤3", |a| odd2(a, |n, _, _| n <= 3) && a.odd4 == 1),
    ("4_s^±2", |a| none2(a) && a.odd4 == 2),
    ("2_t^±1 4_s^±2", |a| odd2(a, |n, _, _| n == 1) && a.odd4 == 2),
];

const D2_EXTRA: &[Entry] = &[
    ("2_II^-4", |a| a.even2 == Some((4, Sign::Minus)) && a.odd4 == 0),
    ("2_t^ε5,ε(t|2)=-1", |a| {
        odd2(a, |n, t, s| n == 5 && eps_kronecker_minus(t, s)) && a.odd4 == 0
    }),
];

const D3: &[Entry] = &[
    ("{0}", |a| none2(a) && a.odd4 == 0),
    ("2_II^±2", |a| even2(a, 2) && a.odd4 == 0),
    ("2_II^±4", |a| even2(a, 4) && a.odd4 == 0),
    ("2_t^±n,n≤5", |a| odd2(a, |n, _, _| n <= 5) && a.odd4 == 0),
    ("2_t^±6,t≡2(4)", |a| odd2(a, |n, t, _| n == 6 && t % 4 == 2) && a.odd4 == 0),
    ("4_s^±1", |a| none2(a) && a.odd4 == 1),
    ("2_II^±2 4_s^±1", |a| even2(a, 2) && a.odd4 == 1),
    ("2_II^±4 4_s^±1", |a| even2(a, 4) && a.odd4 == 1),
    ("2_t^±n 4_s^±1,n≤5", |a| odd2(a, |n, _, _| n <= 5) && a.odd4 == 1),
    ("4_s^±2", |a| none2(a) && a.odd4 == 2),
    ("2_II^±2 4_s^±2", |a| even2(a, 2) && a.odd4 == 2),
    ("2_t^±n 4_s^±2,n≤3", |a| odd2(a, |n, _, _| n <= 3) && a.odd4 == 2),
    ("4_s^±3", |a| none2(a) && a.odd4 == 3),
    ("2_t^±1 4_s^±3", |a| odd2(a, |n, _, _| n == 1) && a.odd4 == 3),
];

/// Entries of the no-cube catalog at level 3 that differ from the small-type list.
const D3_CATALOG: &[Entry] = &[
    ("2_II^-6", |a| a.even2 == Some((6, Sign::Minus)) && a.odd4 == 0),
    ("2_t^ε6,εe(t/8)≠1", |a| {
        odd2(a, |n, t, s| n == 6 && eps_e_not_one(t, s)) && a.odd4 == 0
    }),
    ("2_t^ε7,ε(t|2)=-1", |a| {
        odd2(a, |n, t, s| n == 7 && eps_kronecker_minus(t, s)) && a.odd4 == 0
    }),
];

fn find_entry(lists: &[&[Entry]], a: &TwoAdicA) -> Option<&'static str> {
    lists
        .iter()
        .flat_map(|l| l.iter())
        .find(|(_, f)| f(a))
        .map(|(name, _)| *name)
}

fn two_adic_small(part: &GenusSymbol) -> (bool, String) {
    let (a, r) = split_two_adic(part);
    if r >= 3 {
        return (false, format!("r={r}: B has rank ≥ 3"));
    }
    let k = 3 - r;
    let list: &[Entry] = match k {
        1 => D1,
        2 => D2,
        _ => D3,
    };
    match find_entry(&[list], &a) {
        Some(name) => (true, format!("D{k}:{name}")),
        None => (false, format!("r={r}: A not in D{k}")),
    }
}

/// Catalog verdict for "contains no isotropic (Z/p)³", for a symbol of prime-power level.
pub fn no_cube_catalog_check(sym: &GenusSymbol) -> Result<bool> {
    let primes = sym.primes();
    let p = match primes.as_slice() {
        [] => return Ok(true),
        [p] => *p,
        _ => {
            return Err(Error::Validity(format!(
                "{sym} does not have prime-power level"
            )))
        }
    };
    if p == 2 {
        let (a, r) = split_two_adic(sym);
        return Ok(match r {
            0 => find_entry(&[D3, D3_CATALOG], &a).is_some(),
            1 => find_entry(&[D2, D2_EXTRA], &a).is_some(),
            2 => find_entry(&[D1], &a).is_some(),
            _ => false,
        });
    }
    let level_p: Option<&JordanComponent> = sym.component_at(p, 1);
    let n_a = level_p.map_or(0, |c| c.rank);
    let s_a = level_p.map_or(Sign::Plus, |c| c.sign);
    let r_b = sym.rank() - n_a;
    let eps = Sign::from_i32(minus_one_symbol(p));
    Ok(match r_b {
        2 => n_a <= 1 || (n_a == 2 && s_a == eps.flip()),
        1 => n_a <= 3 || (n_a == 4 && s_a == Sign::Minus),
        0 => n_a <= 5 || (n_a == 6 && s_a == eps.flip()),
        _ => false,
    })
}

/// Largest `r` with an isotropic `(Z/p)^r` inside `p^{εn}` at level `p`.
pub fn max_isotropic_rank(p: u64, n: u32, sign: Sign) -> u32 {
    if n % 2 == 1 {
        return (n - 1) / 2;
    }
    let expected = if (n / 2) % 2 == 0 {
        1
    } else {
        minus_one_symbol(p)
    };
    if sign.value() == expected {
        n / 2
    } else {
        n.saturating_sub(2) / 2
    }
}

/// Isotropic elementary abelian subgroups of rank `k`, by closure search; stops at the first
/// one found when `first_only` is set.
fn elementary_isotropic(
    d: &DiscriminantForm,
    p: u64,
    k: u32,
    first_only: bool,
) -> Vec<Subgroup> {
    let cands = isotropic_elements(d, Some(p));
    let mut level: Vec<Subgroup> = vec![d.span(&[])];
    for step in 1..=k {
        let mut seen: HashSet<Vec<Elem>> = HashSet::new();
        let mut next = Vec::new();
        for h in &level {
            for &m in &cands {
                if h.contains(m) || h.generators.iter().any(|&g| !d.is_orthogonal(g, m)) {
                    continue;
                }
                if step == k && first_only {
                    let mut gens = h.generators.clone();
                    gens.push(m);
                    return vec![d.span(&gens)];
                }
                let mut gens = h.generators.clone();
                gens.push(m);
                let s = d.span(&gens);
                if seen.insert(s.elements.clone()) {
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            return next;
        }
        level = next;
    }
    level
}

/// Whether `D` contains an isotropic subgroup isomorphic to `(Z/p)^k`.
pub fn contains_isotropic_elementary(
    d: &DiscriminantForm,
    p: u64,
    k: u32,
    bounds: &Bounds,
) -> Result<bool> {
    if d.order() > bounds.max_span_order {
        return Err(Error::BoundExceeded {
            what: "isotropic subgroup search",
            order: d.order(),
            bound: bounds.max_span_order,
        });
    }
    if k == 0 {
        return Ok(true);
    }
    Ok(!elementary_isotropic(d, p, k, true).is_empty())
}

/// Largest `k` with an isotropic `(Z/p)^k` in `D`, by exhaustive search.
pub fn max_isotropic_elementary_rank(d: &DiscriminantForm, p: u64, bounds: &Bounds) -> Result<u32> {
    let mut k = 0;
    while contains_isotropic_elementary(d, p, k + 1, bounds)? {
        k += 1;
    }
    Ok(k)
}

/// The prime of a prime-power level symbol, if any.
pub fn symbol_prime(sym: &GenusSymbol) -> Option<u64> {
    prime_power(sym.level()).map(|(p, _)| p)
}
