//! Small integer helpers: primality, prime powers, residue symbols.

/// Trial-division primality test, adequate for the word-size moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `(p, k)` with `n = p^k`, `k >= 1`, or `None` if `n` is not a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = smallest_prime_factor(n);
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn smallest_prime_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest power of `p` dividing `n` (as the power itself, not the exponent).
pub fn p_power_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

/// Legendre symbol `(a|p)` for an odd prime `p`; returns 0 when `p | a`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let p = p as i64;
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let r = pow_mod(a as u64, ((p - 1) / 2) as u64, p as u64);
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a|2)` for odd `a`: +1 if `a ≡ ±1 (mod 8)`, −1 if `a ≡ ±3`.
pub fn kronecker2(a: i64) -> i32 {
    match a.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut r = 1 % m;
    let mut b = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// `(−1|p)` for an odd prime `p`.
pub fn minus_one_symbol(p: u64) -> i32 {
    if p % 4 == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(61) && !is_prime(1) && !is_prime(91));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(p_power_part(72, 2), 8);
    }

    #[test]
    fn residue_symbols() {
        // squares mod 7 are 1, 2, 4
        let sq: Vec<i32> = (1..7).map(|a| legendre(a, 7)).collect();
        assert_eq!(sq, vec![1, 1, -1, 1, -1, -1]);
        assert_eq!(legendre(2, 3), -1);
        assert_eq!(legendre(9, 3), 0);
        assert_eq!(kronecker2(7), 1);
        assert_eq!(kronecker2(-3), -1);
        assert_eq!(minus_one_symbol(5), 1);
        assert_eq!(minus_one_symbol(3), -1);
    }
}
