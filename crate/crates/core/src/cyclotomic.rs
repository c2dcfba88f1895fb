//! Exact arithmetic in the cyclotomic field ℚ(ζ_M).
//!
//! Elements are handled in two shapes. Group-ring vectors of length `M` (coefficient `i` on `ζ^i`)
//! are cheap to add and multiply by roots of unity. The canonical form is the power basis of
//! degree `φ(M)`, obtained by reduction modulo `Φ_M`. `Φ_M(x) = Φ_r(x^{M/r})` with `r` the
//! radical of `M`, so `ζ_M^{j + (M/r)·l}` for `j < M/r` reduces through a table of
//! `x^l mod Φ_r`, `l < r`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::prime_factors;

/// The field ℚ(ζ_M) with precomputed reduction data.
#[derive(Debug)]
pub struct CyclotomicField {
    m: usize,
    rad: usize,
    stride: usize,
    degree: usize,
    phi_rad: Vec<i64>,
    /// `powers[l]` = coefficients of `x^l mod Φ_rad`, for `l < rad`.
    powers: Vec<Vec<i64>>,
}

/// Exact division by a monic polynomial; panics if the remainder is nonzero.
fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    assert_eq!(*b.last().unwrap(), 1);
    let dq = rem.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db];
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[i + j] -= c * bj;
            }
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact polynomial division");
    q
}

fn substitute_power(a: &[i64], p: usize) -> Vec<i64> {
    let mut out = vec![0i64; (a.len() - 1) * p + 1];
    for (i, &c) in a.iter().enumerate() {
        out[i * p] = c;
    }
    out
}

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial for squarefree `n`.
pub fn cyclotomic_polynomial_squarefree(n: usize) -> Vec<i64> {
    let mut phi = vec![-1i64, 1];
    let mut m = 1usize;
    for p in prime_factors(n as u64) {
        let p = p as usize;
        // Φ_{mp}(x) = Φ_m(x^p) / Φ_m(x) for p ∤ m.
        phi = poly_div_exact(&substitute_power(&phi, p), &phi);
        m *= p;
    }
    debug_assert_eq!(m, n.max(1));
    phi
}

impl CyclotomicField {
    pub fn new(m: usize) -> Arc<Self> {
        assert!(m >= 1);
        let rad: usize = prime_factors(m as u64).iter().map(|&p| p as usize).product();
        let rad = rad.max(1);
        let phi_rad = cyclotomic_polynomial_squarefree(rad);
        let d = phi_rad.len() - 1;
        let mut powers = Vec::with_capacity(rad);
        let mut cur = vec![0i64; d];
        if d > 0 {
            cur[0] = 1;
        }
        for _ in 0..rad {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic Φ_rad
            let top = if d > 0 { cur[d - 1] } else { 0 };
            let mut next = vec![0i64; d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1];
            }
            if d > 0 {
                for i in 0..d {
                    next[i] -= top * phi_rad[i];
                }
            }
            cur = next;
        }
        let stride = m / rad;
        Arc::new(CyclotomicField {
            m,
            rad,
            stride,
            degree: d * stride,
            phi_rad,
            powers,
        })
    }

    pub fn conductor(&self) -> usize {
        self.m
    }

    /// `φ(M)`, the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn radical_polynomial(&self) -> &[i64] {
        &self.phi_rad
    }

    /// Reduces an integer group-ring vector (length `M`) to power-basis coefficients.
    pub fn reduce_i128(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(v.len(), self.m);
        let d = self.degree / self.stride;
        let mut out = vec![0i128; self.degree];
        for j in 0..self.stride {
            for l in 0..self.rad {
                let c = v[j + l * self.stride];
                if c == 0 {
                    continue;
                }
                for (i, &pw) in self.powers[l].iter().enumerate().take(d) {
                    if pw != 0 {
                        out[j + i * self.stride] += c * pw as i128;
                    }
                }
            }
        }
        out
    }

    /// True iff the integer group-ring vector represents zero in the field.
    pub fn is_zero_i128(&self, v: &[i128]) -> bool {
        self.reduce_i128(v).iter().all(|&c| c == 0)
    }

    pub fn is_zero_i64(&self, v: &[i64]) -> bool {
        let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        self.is_zero_i128(&w)
    }

    fn reduce_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.m);
        let d = self.degree / self.stride;
        let mut out = vec![BigRational::zero(); self.degree];
        for j in 0..self.stride {
            for l in 0..self.rad {
                let c = &v[j + l * self.stride];
                if c.is_zero() {
                    continue;
                }
                for (i, &pw) in self.powers[l].iter().enumerate().take(d) {
                    if pw != 0 {
                        out[j + i * self.stride] += c * BigRational::from_integer(BigInt::from(pw));
                    }
                }
            }
        }
        out
    }
}

/// An element of ℚ(ζ_M) in canonical power-basis form.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coeffs: vec![BigRational::zero(); field.degree],
        }
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: BigRational) -> Self {
        let mut v = vec![BigRational::zero(); field.m];
        v[0] = r;
        Self::from_group_ring(field, &v)
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_integer(field, 1)
    }

    /// `e(a/M) = ζ_M^a`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, a: i64) -> Self {
        let mut v = vec![BigRational::zero(); field.m];
        v[a.rem_euclid(field.m as i64) as usize] = BigRational::one();
        Self::from_group_ring(field, &v)
    }

    /// Builds `Σ v[i] ζ^i` from a group-ring vector of length `M`.
    pub fn from_group_ring(field: &Arc<CyclotomicField>, v: &[BigRational]) -> Self {
        Cyclotomic {
            field: field.clone(),
            coeffs: field.reduce_rational(v),
        }
    }

    pub fn from_group_ring_i128(field: &Arc<CyclotomicField>, v: &[i128]) -> Self {
        let r = field.reduce_i128(v);
        let mut coeffs = Vec::with_capacity(r.len());
        for c in r {
            coeffs.push(BigRational::from_integer(BigInt::from(c)));
        }
        Cyclotomic {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn group_ring(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.field.m];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i] = c.clone();
        }
        v
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.field.m;
        let mut v = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[(m - i) % m] += c;
            }
        }
        Self::from_group_ring(&self.field, &v)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.field.m as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN);
            let a = std::f64::consts::TAU * i as f64 / m;
            re += x * a.cos();
            im += x * a.sin();
        }
        (re, im)
    }

    fn check_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.m == other.field.m,
            "cyclotomic conductors differ"
        );
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "z^{i}")?;
            } else if c.is_negative() {
                write!(f, "({c})*z^{i}")?;
            } else {
                write!(f, "{c}*z^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [M={}]", self.field.m)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let m = self.field.m;
        let a = self.group_ring();
        let b = rhs.group_ring();
        let mut v = vec![BigRational::zero(); m];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    v[(i + j) % m] += x * y;
                }
            }
        }
        Cyclotomic::from_group_ring(&self.field, &v)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}
