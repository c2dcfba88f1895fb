//! The Weil representation on `ℚ(ζ_M)[D]`: `ρ(T)` and the scaled matrix `W = √|D|·ρ(S)`.
//!
//! Every entry of `ρ(T)` and `W` is a root of unity, so both are stored as exponent tables
//! modulo `M`. Products are accumulated over `ℤ[x]/(x^{M/2} + 1)` and compared in the
//! field by reduction modulo `Φ_M`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::error::{Error, Result};
use crate::form::{DiscriminantForm, Subgroup};
use crate::lift::{lift_matrix, Bounds};

/// Default conductor `lcm(8, N)`.
pub fn default_conductor(d: &DiscriminantForm) -> usize {
    8u64.lcm(&d.level()) as usize
}

/// `√|D|·ρ(S)` with a tracked power of `√|D|`: the represented operator is
/// `entries / |D|^{scale_exp/2}`.
#[derive(Clone, Debug)]
pub struct ScaledWeilMatrix {
    pub entries: Vec<Vec<Cyclotomic>>,
    pub scale_exp: u32,
    pub order: usize,
}

impl ScaledWeilMatrix {
    pub fn mul(&self, other: &ScaledWeilMatrix) -> Result<ScaledWeilMatrix> {
        let n = self.entries.len();
        if other.entries.len() != n || self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: other.entries.len(),
            });
        }
        let field = self.entries[0][0].field().clone();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Cyclotomic::zero(&field), |acc, k| {
                            acc + self.entries[i][k].clone() * other.entries[k][j].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(ScaledWeilMatrix {
            entries,
            scale_exp: self.scale_exp + other.scale_exp,
            order: self.order,
        })
    }

    /// The represented operator, when the scale is a rational number.
    pub fn folded(&self) -> Option<Vec<Vec<Cyclotomic>>> {
        if self.scale_exp % 2 == 1 {
            return None;
        }
        let s = BigRational::new(
            BigInt::from(1),
            BigInt::from(self.order).pow(self.scale_exp / 2),
        );
        Some(
            self.entries
                .iter()
                .map(|row| row.iter().map(|x| x.scale(&s)).collect())
                .collect(),
        )
    }
}

/// `ρ(T)` as its diagonal.
pub fn rho_t(d: &DiscriminantForm) -> Vec<Cyclotomic> {
    let w = WeilTables::new(d, default_conductor(d)).expect("default conductor is valid");
    w.t.iter()
        .map(|&e| Cyclotomic::root_of_unity(&w.field, e as i64))
        .collect()
}

/// `W[β,γ] = e(−sign/8)·e(−(γ,β))`, with `scale_exp = 1`.
pub fn rho_s_scaled(d: &DiscriminantForm) -> Result<ScaledWeilMatrix> {
    let w = WeilTables::new(d, default_conductor(d))?;
    let n = w.n;
    let entries = (0..n)
        .map(|b| {
            (0..n)
                .map(|g| Cyclotomic::root_of_unity(&w.field, w.w[b * n + g] as i64))
                .collect()
        })
        .collect();
    Ok(ScaledWeilMatrix {
        entries,
        scale_exp: 1,
        order: n,
    })
}

/// Exponent tables of `W` and `ρ(T)` over a fixed conductor.
struct WeilTables {
    n: usize,
    field: Arc<CyclotomicField>,
    signature: u8,
    w: Vec<u32>,
    t: Vec<u32>,
}

impl WeilTables {
    fn new(d: &DiscriminantForm, m: usize) -> Result<Self> {
        let level = d.level() as usize;
        if m % 8 != 0 || m % level != 0 {
            return Err(Error::Validity(format!(
                "conductor {m} is not a multiple of lcm(8, {level})"
            )));
        }
        let s = d.signature()? as usize;
        let n = d.order();
        let step = m / level;
        let base = (m - s * m / 8 % m) % m;
        let mut w = vec![0u32; n * n];
        for b in 0..n {
            for g in 0..n {
                let e = (base + m - d.bnum(g, b) as usize * step % m) % m;
                w[b * n + g] = e as u32;
            }
        }
        let t = (0..n)
            .map(|g| (d.qnum(g) as usize * step % m) as u32)
            .collect();
        Ok(WeilTables {
            n,
            field: CyclotomicField::new(m),
            signature: s as u8,
            w,
            t,
        })
    }
}

/// Matrix of ring elements, row-major. Since `8 | M`, `ζ^{M/2} = −1`, so entries live in
/// `ℤ[x]/(x^{M/2} + 1)` as vectors of length `h = M/2`.
struct RingMatrix {
    n: usize,
    m: usize,
    data: Vec<i64>,
}

impl RingMatrix {
    fn h(&self) -> usize {
        self.m / 2
    }

    fn zero(n: usize, m: usize) -> Self {
        RingMatrix {
            n,
            m,
            data: vec![0; n * n * (m / 2)],
        }
    }

    fn entry(&self, i: usize, j: usize) -> &[i64] {
        let h = self.h();
        let o = (i * self.n + j) * h;
        &self.data[o..o + h]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut [i64] {
        let h = self.h();
        let o = (i * self.n + j) * h;
        &mut self.data[o..o + h]
    }

    /// Product of two root-of-unity matrices given by exponents.
    fn from_roots(n: usize, m: usize, a: &[u32], b: &[u32]) -> Self {
        let h = m / 2;
        let mut out = RingMatrix::zero(n, m);
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k] as usize;
                for j in 0..n {
                    let e = (x + b[k * n + j] as usize) % m;
                    let o = (i * n + j) * h;
                    if e < h {
                        out.data[o + e] += 1;
                    } else {
                        out.data[o + e - h] -= 1;
                    }
                }
            }
        }
        out
    }

    /// `self · R` for a root-of-unity matrix `R`.
    fn mul_roots(&self, r: &[u32]) -> Self {
        let (n, h) = (self.n, self.h());
        let mut out = RingMatrix::zero(n, self.m);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k).to_vec();
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..n {
                    // ζ^shift is a negacyclic rotation
                    let shift = r[k * n + j] as usize;
                    let dst = out.entry_mut(i, j);
                    if shift < h {
                        let (head, tail) = a.split_at(h - shift);
                        for (d, &c) in dst[shift..].iter_mut().zip(head) {
                            *d += c;
                        }
                        for (d, &c) in dst[..shift].iter_mut().zip(tail) {
                            *d -= c;
                        }
                    } else {
                        let s = shift - h;
                        let (head, tail) = a.split_at(h - s);
                        for (d, &c) in dst[s..].iter_mut().zip(head) {
                            *d -= c;
                        }
                        for (d, &c) in dst[..s].iter_mut().zip(tail) {
                            *d += c;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Checks that a ring matrix equals `expected(i, j)`, each given as `(coefficient, exponent)`
/// pairs.
fn compare(
    field: &CyclotomicField,
    a: &RingMatrix,
    relation: &'static str,
    expected: impl Fn(usize, usize) -> Vec<(i64, usize)>,
) -> Result<()> {
    let h = a.h();
    let mut v = vec![0i64; a.m];
    for i in 0..a.n {
        for j in 0..a.n {
            v[..h].copy_from_slice(a.entry(i, j));
            for (c, e) in expected(i, j) {
                let e = e % a.m;
                if e < h {
                    v[e] -= c;
                } else {
                    v[e - h] += c;
                }
            }
            if !field.is_zero_i64(&v) {
                return Err(Error::RelationFailed {
                    relation,
                    row: i,
                    col: j,
                });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub order: usize,
    pub conductor: usize,
    pub signature: u8,
    pub checked: Vec<&'static str>,
}

fn check_budget(d: &DiscriminantForm, bounds: &Bounds) -> Result<()> {
    if d.order() > bounds.max_cyclotomic_order {
        return Err(Error::BoundExceeded {
            what: "Weil representation",
            order: d.order(),
            bound: bounds.max_cyclotomic_order,
        });
    }
    Ok(())
}

/// Exact check of `W W* = |D|I`, `W² = |D|e(−sign/4)P_{−1}`, `((Wρ_T)³)² = |D|W⁴` and the
/// Gauss-sum consistency of the first column of `W`.
pub fn check_relations(d: &DiscriminantForm, bounds: &Bounds) -> Result<RelationReport> {
    check_relations_with_conductor(d, default_conductor(d), bounds)
}

pub fn check_relations_with_conductor(
    d: &DiscriminantForm,
    m: usize,
    bounds: &Bounds,
) -> Result<RelationReport> {
    check_budget(d, bounds)?;
    let tab = WeilTables::new(d, m)?;
    let (n, f) = (tab.n, &tab.field);
    let size = n as i64;
    let s = tab.signature as usize;

    // W* has exponents −W[j,i]
    let wstar: Vec<u32> = (0..n * n)
        .map(|x| {
            let (i, j) = (x / n, x % n);
            ((m - tab.w[j * n + i] as usize) % m) as u32
        })
        .collect();
    let wws = RingMatrix::from_roots(n, m, &tab.w, &wstar);
    compare(f, &wws, "W W* = |D| I", |i, j| {
        if i == j {
            vec![(size, 0)]
        } else {
            vec![]
        }
    })?;

    let w2 = RingMatrix::from_roots(n, m, &tab.w, &tab.w);
    let quarter = (m - s * m / 4 % m) % m;
    compare(f, &w2, "W^2 = |D| e(-sign/4) P", |i, j| {
        if j == d.neg(i) {
            vec![(size, quarter)]
        } else {
            vec![]
        }
    })?;

    let x: Vec<u32> = (0..n * n)
        .map(|k| ((tab.w[k] + tab.t[k % n]) as usize % m) as u32)
        .collect();
    let mut x6 = RingMatrix::from_roots(n, m, &x, &x);
    for _ in 0..4 {
        x6 = x6.mul_roots(&x);
    }
    // W² = |D|e(−sign/4)P was just verified and P² = I, so |D|·W⁴ = |D|³e(−sign/2)·I
    let half = (m - s * m / 2 % m) % m;
    compare(f, &x6, "((W rho_T)^3)^2 = |D| W^4", |i, j| {
        if i == j {
            vec![(size * size * size, half)]
        } else {
            vec![]
        }
    })?;

    // (Σ_β e(q(β)) W[β,0])² = |D|
    let mut v = vec![0i64; m];
    for b in 0..n {
        v[(tab.t[b] + tab.w[b * n]) as usize % m] += 1;
    }
    let mut sq = vec![0i64; m];
    for (e1, &c1) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
        for (e2, &c2) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
            sq[(e1 + e2) % m] += c1 * c2;
        }
    }
    sq[0] -= size;
    if !f.is_zero_i64(&sq) {
        return Err(Error::RelationFailed {
            relation: "Gauss sum of the first column",
            row: 0,
            col: 0,
        });
    }

    Ok(RelationReport {
        order: n,
        conductor: m,
        signature: tab.signature,
        checked: vec![
            "W W* = |D| I",
            "W^2 = |D| e(-sign/4) P",
            "((W rho_T)^3)^2 = |D| W^4",
            "Gauss sum of the first column",
        ],
    })
}

/// Exact check of `ρ_T(D)·U = U·ρ_T(D′)` and `W_D·U = |H|·U·W_{D′}` for the lift matrix `U`
/// of `H`, `D′ = H⊥/H`.
pub fn check_lift_equivariance(
    d: &DiscriminantForm,
    h: &Subgroup,
    bounds: &Bounds,
) -> Result<bool> {
    check_budget(d, bounds)?;
    let lift = lift_matrix(d, h)?;
    let dq = lift.source();
    for (c, col) in lift.columns().iter().enumerate() {
        for &g in col {
            if d.q(g) != dq.q(c) {
                return Err(Error::RelationFailed {
                    relation: "rho_T U = U rho_T'",
                    row: g,
                    col: c,
                });
            }
        }
    }

    let m = default_conductor(d);
    let tab = WeilTables::new(d, m)?;
    let mq = default_conductor(dq);
    let tq = WeilTables::new(dq, mq)?;
    let lift_factor = m / mq;
    let (n, nq) = (tab.n, tq.n);
    let hsize = h.order() as i64;
    let map = lift.quotient_map();
    for b in 0..n {
        let proj = map.project(b);
        for (c, col) in lift.columns().iter().enumerate() {
            let mut v = vec![0i64; m];
            for &g in col {
                v[tab.w[b * n + g] as usize] += 1;
            }
            if let Some(pb) = proj {
                v[tq.w[pb * nq + c] as usize * lift_factor % m] -= hsize;
            }
            if !tab.field.is_zero_i64(&v) {
                return Err(Error::RelationFailed {
                    relation: "W U = |H| U W'",
                    row: b,
                    col: c,
                });
            }
        }
    }
    Ok(true)
}
