//! Span and null space of 0/1 column families.
//!
//! Rank is computed by incremental reduced row echelon form modulo the Mersenne prime
//! `2^61 − 1`. The null space of the transposed family is read off the echelon form, lifted to
//! ℚ by rational reconstruction and then checked exactly against every column. A verified
//! null space of dimension `n − r` together with a modular rank `r` certifies the rational
//! rank, since modular rank never exceeds rational rank. If reconstruction or the exact check
//! fails, a rational elimination recomputes everything.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const P: u64 = (1 << 61) - 1;
const NONE: u32 = u32::MAX;
const RECON_BOUND: i128 = (1 << 30) - 1;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let lo = (x as u64) & P;
    let hi = (x >> 61) as u64;
    let s = lo + hi;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn invmod(a: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a;
    let mut e = P - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

#[cfg(test)]
fn to_mod(x: i64) -> u64 {
    x.rem_euclid(P as i64) as u64
}

/// Smallest-height `r/s ≡ a (mod P)` with `|r|, s < 2^30`.
fn reconstruct(a: u64) -> Option<(i64, i64)> {
    let (mut r0, mut r1) = (P as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 > RECON_BOUND {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if s1 == 0 || s1.abs() > RECON_BOUND {
        return None;
    }
    let (r, s) = if s1 < 0 { (-r1, -s1) } else { (r1, s1) };
    if r.gcd(&s) != 1 {
        return None;
    }
    Some((r as i64, s as i64))
}

/// Incremental reduced echelon form over `F_P`.
struct ModEchelon {
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    pivot_row: Vec<u32>,
}

impl ModEchelon {
    fn new(n: usize) -> Self {
        ModEchelon {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NONE; n],
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts the 0/1 vector with the given support; returns true if the rank grew.
    fn insert_support(&mut self, support: &[usize]) -> bool {
        let mut v = vec![0u64; self.n];
        for &i in support {
            v[i] = (v[i] + 1) % P;
        }
        // rows vanish on foreign pivot columns, so only the original support needs clearing
        for &c in support {
            let r = self.pivot_row[c];
            if r == NONE || v[c] == 0 {
                continue;
            }
            let f = v[c];
            let row = &self.rows[r as usize];
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = submod(*x, mulmod(f, y));
                }
            }
        }
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = invmod(v[lead]);
        for x in v.iter_mut() {
            if *x != 0 {
                *x = mulmod(*x, inv);
            }
        }
        let nz: Vec<usize> = (0..self.n).filter(|&i| v[i] != 0).collect();
        for row in self.rows.iter_mut() {
            let f = row[lead];
            if f == 0 {
                continue;
            }
            for &i in &nz {
                row[i] = submod(row[i], mulmod(f, v[i]));
            }
        }
        self.pivot_row[lead] = self.rows.len() as u32;
        self.pivots.push(lead);
        self.rows.push(v);
        true
    }
}

/// A row-reduced basis of a subspace of ℚ^n.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    pub dim: usize,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    /// Sparse rows, each with entry 1 at its pivot and 0 at every other pivot.
    pub rows: Vec<Vec<(usize, BigRational)>>,
}

impl SpanBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Exact membership of a dense vector.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        let mut r = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if r[c].is_zero() {
                continue;
            }
            let f = r[c].clone();
            for (i, x) in row {
                r[*i] -= &f * x;
            }
        }
        r.iter().all(|x| x.is_zero())
    }
}

/// Span of a family of 0/1 columns in ℚ^n together with an integral basis of its orthogonal
/// complement (the null space of the transposed family).
#[derive(Clone, Debug)]
pub struct ColumnSpan {
    pub basis: SpanBasis,
    /// Sparse integral vectors spanning the orthogonal complement.
    pub kernel: Vec<Vec<(usize, i64)>>,
    pub columns_seen: usize,
}

impl ColumnSpan {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

/// A column family is replayed through this callback; the consumer returns `false` to stop early.
pub type ColumnVisitor<'a> = dyn FnMut(&[usize]) -> bool + 'a;

/// Computes the span of 0/1 columns over ℚ. `columns` must visit the same family every time it
/// is called.
pub fn column_span(n: usize, columns: &dyn Fn(&mut ColumnVisitor)) -> Result<ColumnSpan> {
    let mut ech = ModEchelon::new(n);
    let mut seen = 0usize;
    if n > 0 {
        columns(&mut |s: &[usize]| {
            seen += 1;
            ech.insert_support(s);
            ech.rank() < n
        });
    }
    if ech.rank() == n {
        let rows = (0..n).map(|i| vec![(i, BigRational::one())]).collect();
        return Ok(ColumnSpan {
            basis: SpanBasis {
                dim: n,
                pivots: (0..n).collect(),
                rows,
            },
            kernel: Vec::new(),
            columns_seen: seen,
        });
    }
    if let Some(span) = lift_modular(&ech, seen) {
        if kernel_annihilates(n, &span.kernel, columns) {
            return Ok(span);
        }
    }
    rational_span(n, columns)
}

fn lift_modular(ech: &ModEchelon, seen: usize) -> Option<ColumnSpan> {
    let n = ech.n;
    let free: Vec<usize> = (0..n).filter(|&c| ech.pivot_row[c] == NONE).collect();
    let mut rows: Vec<Vec<(usize, BigRational)>> = Vec::with_capacity(ech.rank());
    // kernel vector for free column f: 1 at f, −R_i[f] at pivot i
    let mut kernel_rat: Vec<Vec<(usize, i64, i64)>> =
        free.iter().map(|&f| vec![(f, 1, 1)]).collect();
    for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
        let mut sparse = vec![(c, BigRational::one())];
        for (k, &f) in free.iter().enumerate() {
            if row[f] == 0 {
                continue;
            }
            let (a, b) = reconstruct(row[f])?;
            sparse.push((f, BigRational::new(a.into(), b.into())));
            kernel_rat[k].push((c, -a, b));
        }
        sparse.sort_by_key(|e| e.0);
        rows.push(sparse);
    }
    let mut kernel = Vec::with_capacity(free.len());
    for kv in kernel_rat {
        let l = kv.iter().try_fold(1i64, |acc, &(_, _, b)| {
            let g = acc.gcd(&b);
            acc.checked_mul(b / g)
        })?;
        let mut v: Vec<(usize, i64)> = kv
            .iter()
            .map(|&(i, a, b)| Some((i, a.checked_mul(l / b)?)))
            .collect::<Option<_>>()?;
        v.sort_by_key(|e| e.0);
        kernel.push(v);
    }
    Some(ColumnSpan {
        basis: SpanBasis {
            dim: n,
            pivots: ech.pivots.clone(),
            rows,
        },
        kernel,
        columns_seen: seen,
    })
}

/// Exact check that every kernel vector sums to zero over every column support.
fn kernel_annihilates(
    n: usize,
    kernel: &[Vec<(usize, i64)>],
    columns: &dyn Fn(&mut ColumnVisitor),
) -> bool {
    if kernel.is_empty() {
        return true;
    }
    let mut dense = vec![vec![0i64; n]; kernel.len()];
    for (d, v) in dense.iter_mut().zip(kernel) {
        for &(i, x) in v {
            d[i] = x;
        }
    }
    let mut ok = true;
    columns(&mut |s: &[usize]| {
        for d in &dense {
            let sum: i128 = s.iter().map(|&i| d[i] as i128).sum();
            if sum != 0 {
                ok = false;
                return false;
            }
        }
        true
    });
    ok
}

/// Exact rational elimination, used when the modular lift cannot be certified.
fn rational_span(n: usize, columns: &dyn Fn(&mut ColumnVisitor)) -> Result<ColumnSpan> {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut pivot_row = vec![NONE; n];
    let mut seen = 0;
    columns(&mut |s: &[usize]| {
        seen += 1;
        let mut v = vec![BigRational::zero(); n];
        for &i in s {
            v[i] += BigRational::one();
        }
        for &c in s {
            let r = pivot_row[c];
            if r == NONE || v[c].is_zero() {
                continue;
            }
            let f = v[c].clone();
            for (x, y) in v.iter_mut().zip(&rows[r as usize]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if let Some(lead) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[lead].recip();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            for row in rows.iter_mut() {
                let f = row[lead].clone();
                if f.is_zero() {
                    continue;
                }
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivot_row[lead] = rows.len() as u32;
            pivots.push(lead);
            rows.push(v);
        }
        rows.len() < n
    });
    let free: Vec<usize> = (0..n).filter(|&c| pivot_row[c] == NONE).collect();
    let mut kernel = Vec::with_capacity(free.len());
    for &f in &free {
        let mut entries: Vec<(usize, BigRational)> = vec![(f, BigRational::one())];
        for (row, &c) in rows.iter().zip(&pivots) {
            if !row[f].is_zero() {
                entries.push((c, -row[f].clone()));
            }
        }
        let l = entries
            .iter()
            .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
        let mut v = Vec::with_capacity(entries.len());
        for (i, x) in entries {
            let scaled = (x * BigRational::from_integer(l.clone())).to_integer();
            let val = scaled.to_i64().ok_or_else(|| {
                Error::Inconsistent("null-space vector exceeds 64-bit entries".into())
            })?;
            v.push((i, val));
        }
        v.sort_by_key(|e| e.0);
        kernel.push(v);
    }
    if !kernel_annihilates(n, &kernel, columns) {
        return Err(Error::Inconsistent("rational null space fails the exact check".into()));
    }
    let sparse_rows = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect()
        })
        .collect();
    Ok(ColumnSpan {
        basis: SpanBasis {
            dim: n,
            pivots,
            rows: sparse_rows,
        },
        kernel,
        columns_seen: seen,
    })
}

/// Rank of a dense integer matrix over ℚ, by exact rational elimination.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_of(n: usize, cols: &[Vec<usize>]) -> ColumnSpan {
        column_span(n, &|visit: &mut ColumnVisitor| {
            for c in cols {
                if !visit(c) {
                    break;
                }
            }
        })
        .unwrap()
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mulmod(P - 1, P - 1), 1);
        assert_eq!(mulmod(invmod(12345), 12345), 1);
        let half = invmod(2);
        assert_eq!(reconstruct(half), Some((1, 2)));
        assert_eq!(reconstruct(to_mod(-3)), Some((-3, 1)));
        assert_eq!(reconstruct(mulmod(to_mod(-5), invmod(7))), Some((-5, 7)));
    }

    #[test]
    fn plane_lift_span() {
        // e0+ea, e0+eb in dimension 4 (indices 0, a=2, b=1)
        let s = span_of(4, &[vec![0, 2], vec![0, 1]]);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.kernel.len(), 2);
        for k in &s.kernel {
            let d: std::collections::HashMap<usize, i64> = k.iter().copied().collect();
            let at = |i| *d.get(&i).unwrap_or(&0);
            assert_eq!(at(0) + at(2), 0);
            assert_eq!(at(0) + at(1), 0);
        }
    }

    #[test]
    fn odd_cycle_has_full_span() {
        // a triangle of pair supports spans everything: e_i = ½(sum of two edges − third)
        let s = span_of(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(s.rank(), 3);
        assert!(s.kernel.is_empty());
        let even = span_of(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        assert_eq!(even.rank(), 3);
        assert_eq!(even.kernel, vec![vec![(0, -1), (1, 1), (2, -1), (3, 1)]]);
    }

    #[test]
    fn basis_membership() {
        let s = span_of(4, &[vec![0, 2], vec![0, 1]]);
        let v = |x: [i64; 4]| -> Vec<BigRational> {
            x.iter().map(|&a| BigRational::from_integer(a.into())).collect()
        };
        assert!(s.basis.contains(&v([2, 1, 1, 0])));
        assert!(!s.basis.contains(&v([1, 0, 0, 0])));
        assert!(!s.basis.contains(&v([0, 0, 0, 1])));
    }

    #[test]
    fn rational_fallback_agrees() {
        let cols = vec![vec![0, 1, 2], vec![2, 3], vec![0, 1, 3], vec![4]];
        let fast = span_of(6, &cols);
        let slow = rational_span(6, &|visit: &mut ColumnVisitor| {
            for c in &cols {
                if !visit(c) {
                    break;
                }
            }
        })
        .unwrap();
        assert_eq!(fast.rank(), slow.rank());
        assert_eq!(fast.kernel.len(), slow.kernel.len());
        assert_eq!(exact_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 2, 1]]), 2);
    }
}
