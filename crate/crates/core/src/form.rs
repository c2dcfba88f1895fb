//! Finite quadratic modules with explicit element tables.
//!
//! Every form enumerates its elements as indices `0..order`, with index 0 the identity.
//! Forms built from generators use mixed-radix indices, so index order is the lexicographic
//! order of coefficient vectors. Quotients `H⊥/H` and subgroups are presented by coset
//! representatives in a parent form.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use crate::arith::{pow_mod, prime_power};
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};
use crate::genus::{unit_decomposition, GenusSymbol, Parity, Sign};
use crate::lift::ImageAnalysis;
use crate::rational::RationalMod1;

/// Element of a form, as an index into its element table.
pub type Elem = usize;

const NONE: u32 = u32::MAX;

/// Largest form whose element tables are built.
pub const MAX_TABLE_ORDER: usize = 1 << 20;

#[derive(Clone)]
pub struct DiscriminantForm {
    inner: Arc<Inner>,
}

struct Inner {
    order: usize,
    level: u64,
    qnum: Vec<u32>,
    neg: Vec<u32>,
    elem_order: Vec<u32>,
    pres: Presentation,
    signature: OnceLock<Result<u8>>,
    pub(crate) analysis: Mutex<Option<Arc<ImageAnalysis>>>,
}

enum Presentation {
    Generated {
        orders: Vec<u64>,
        strides: Vec<usize>,
        q_diag: Vec<RationalMod1>,
        gram: Vec<RationalMod1>,
    },
    Subquotient {
        parent: DiscriminantForm,
        map: Arc<QuotientMap>,
    },
    Product {
        left: DiscriminantForm,
        right: DiscriminantForm,
    },
}

/// Coset bookkeeping for a subquotient `S/H` of a parent form.
///
/// `class_of[γ]` is the index of `γ + H` for `γ ∈ S`, and `reps[c]` is the smallest parent
/// index in class `c`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    class_of: Vec<u32>,
    reps: Vec<Elem>,
}

impl QuotientMap {
    /// Projection `S → S/H`; `None` outside `S`.
    pub fn project(&self, g: Elem) -> Option<Elem> {
        match self.class_of[g] {
            NONE => None,
            c => Some(c as usize),
        }
    }

    /// Section `S/H → S` choosing the smallest representative.
    pub fn section(&self, c: Elem) -> Elem {
        self.reps[c]
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// A subgroup given by its sorted element list and an irredundant generating list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    pub elements: Vec<Elem>,
    pub generators: Vec<Elem>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() <= 1
    }
}

fn rational_lcm_den(values: &[RationalMod1]) -> u64 {
    values.iter().fold(1u64, |acc, r| acc.lcm(&r.denom()))
}

impl DiscriminantForm {
    fn from_parts(pres: Presentation, order: usize, raw_q: Vec<u64>, den: u64) -> Self {
        // reduce the common denominator to the level
        let g = raw_q.iter().fold(den, |acc, &x| acc.gcd(&x));
        let level = den / g.max(1);
        let qnum: Vec<u32> = raw_q.iter().map(|&x| (x / g.max(1)) as u32).collect();
        let mut form = Inner {
            order,
            level,
            qnum,
            neg: Vec::new(),
            elem_order: Vec::new(),
            pres,
            signature: OnceLock::new(),
            analysis: Mutex::new(None),
        };
        form.neg = (0..order).map(|a| form.pres_neg(a) as u32).collect();
        form.elem_order = (0..order).map(|a| form.pres_order(a) as u32).collect();
        DiscriminantForm {
            inner: Arc::new(form),
        }
    }

    /// The trivial form `{0}`.
    pub fn trivial() -> Self {
        Self::generated_unchecked(vec![], vec![], vec![]).expect("trivial form")
    }

    /// A form on `Z/o_1 × … × Z/o_m` with `q(g_i) = q_diag[i]` and `b(g_i, g_j) = gram[i][j]`.
    ///
    /// Checks symmetry, `b(g_i,g_i) = 2q(g_i)`, well-definedness and non-degeneracy.
    pub fn from_generators(
        orders: Vec<u64>,
        q_diag: Vec<RationalMod1>,
        gram: Vec<Vec<RationalMod1>>,
    ) -> Result<Self> {
        let m = orders.len();
        if q_diag.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: q_diag.len(),
            });
        }
        if gram.len() != m || gram.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: gram.len(),
            });
        }
        for i in 0..m {
            if orders[i] < 2 {
                return Err(Error::Validity(format!("generator {i} has order {}", orders[i])));
            }
            if gram[i][i] != q_diag[i].mul_int(2) {
                return Err(Error::Validity(format!("b(g{i},g{i}) != 2 q(g{i})")));
            }
            if !q_diag[i].mul_int(orders[i] as i128 * orders[i] as i128).is_zero() {
                return Err(Error::Validity(format!("q is not well defined on generator {i}")));
            }
            for j in 0..m {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Validity("Gram table is not symmetric".into()));
                }
                if !gram[i][j].mul_int(orders[i] as i128).is_zero() {
                    return Err(Error::Validity(format!(
                        "b(g{i}, g{j}) is not killed by the order of g{i}"
                    )));
                }
            }
        }
        let flat: Vec<RationalMod1> = gram.into_iter().flatten().collect();
        let form = Self::generated_unchecked(orders, q_diag, flat)?;
        if !form.radical_is_trivial() {
            return Err(Error::DegenerateForm);
        }
        Ok(form)
    }

    fn generated_unchecked(
        orders: Vec<u64>,
        q_diag: Vec<RationalMod1>,
        gram: Vec<RationalMod1>,
    ) -> Result<Self> {
        let m = orders.len();
        let mut order: usize = 1;
        for &o in &orders {
            order = order
                .checked_mul(o as usize)
                .filter(|&n| n <= MAX_TABLE_ORDER)
                .ok_or(Error::BoundExceeded {
                    what: "form table",
                    order: usize::MAX,
                    bound: MAX_TABLE_ORDER,
                })?;
        }
        let mut strides = vec![1usize; m];
        for i in (0..m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let den = rational_lcm_den(&q_diag).lcm(&rational_lcm_den(&gram));
        let qd: Vec<i128> = q_diag.iter().map(|r| r.numer_over(den) as i128).collect();
        let gd: Vec<i128> = gram.iter().map(|r| r.numer_over(den) as i128).collect();
        let d = den as i128;
        // walk coefficient vectors in lexicographic order
        let mut raw = Vec::with_capacity(order);
        let mut x = vec![0i128; m];
        for _ in 0..order {
            let mut acc: i128 = 0;
            for i in 0..m {
                if x[i] == 0 {
                    continue;
                }
                acc = (acc + x[i] * x[i] % d * qd[i]) % d;
                for j in (i + 1)..m {
                    if x[j] != 0 {
                        acc = (acc + x[i] * x[j] % d * gd[i * m + j]) % d;
                    }
                }
            }
            raw.push(acc.rem_euclid(d) as u64);
            for i in (0..m).rev() {
                x[i] += 1;
                if x[i] < orders[i] as i128 {
                    break;
                }
                x[i] = 0;
            }
        }
        Ok(Self::from_parts(
            Presentation::Generated {
                orders,
                strides,
                q_diag,
                gram,
            },
            order,
            raw,
            den,
        ))
    }

    /// Builds the explicit model of a genus symbol.
    pub fn from_symbol(sym: &GenusSymbol) -> Result<Self> {
        let mut orders = Vec::new();
        let mut q_diag: Vec<RationalMod1> = Vec::new();
        // blocks of generators: (start, size, off-diagonal b within block)
        let mut planes: Vec<(usize, RationalMod1)> = Vec::new();
        for c in sym.components() {
            c.validate()?;
            let q = c.scale();
            let n = c.rank as usize;
            if c.prime != 2 {
                let p = c.prime;
                let units = odd_units(p, n, c.sign);
                for a in units {
                    orders.push(q);
                    q_diag.push(RationalMod1::new(a as i128, q));
                }
            } else if c.parity == Parity::Odd {
                let units = unit_decomposition(c.rank, c.oddity.unwrap_or(0), c.sign)
                    .ok_or_else(|| Error::Validity(format!("{c} is not realizable")))?;
                for a in units {
                    orders.push(q);
                    q_diag.push(RationalMod1::new(a as i128, 2 * q));
                }
            } else {
                let planes_needed = n / 2;
                for k in 0..planes_needed {
                    let start = orders.len();
                    let anisotropic = c.sign == Sign::Minus && k + 1 == planes_needed;
                    let qv = if anisotropic {
                        RationalMod1::new(1, q)
                    } else {
                        RationalMod1::ZERO
                    };
                    orders.extend([q, q]);
                    q_diag.extend([qv, qv]);
                    planes.push((start, RationalMod1::new(1, q)));
                }
            }
        }
        let m = orders.len();
        let mut gram = vec![vec![RationalMod1::ZERO; m]; m];
        for i in 0..m {
            gram[i][i] = q_diag[i].mul_int(2);
        }
        for (s, b) in planes {
            gram[s][s + 1] = b;
            gram[s + 1][s] = b;
        }
        let form = Self::from_generators(orders, q_diag, gram)?;
        debug_assert_eq!(form.order() as u64, sym.order());
        debug_assert_eq!(form.level(), sym.level());
        Ok(form)
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn level(&self) -> u64 {
        self.inner.level
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.inner.order
    }

    /// Numerator of `q(γ)` over the level.
    pub fn qnum(&self, g: Elem) -> u64 {
        self.inner.qnum[g] as u64
    }

    pub fn q(&self, g: Elem) -> RationalMod1 {
        RationalMod1::new(self.qnum(g) as i128, self.level())
    }

    pub fn is_isotropic(&self, g: Elem) -> bool {
        self.inner.qnum[g] == 0
    }

    /// Numerator of `b(γ, β)` over the level.
    pub fn bnum(&self, g: Elem, h: Elem) -> u64 {
        let n = self.level();
        let s = self.qnum(self.add(g, h)) + 2 * n - self.qnum(g) - self.qnum(h);
        s % n
    }

    pub fn b(&self, g: Elem, h: Elem) -> RationalMod1 {
        RationalMod1::new(self.bnum(g, h) as i128, self.level())
    }

    pub fn is_orthogonal(&self, g: Elem, h: Elem) -> bool {
        self.bnum(g, h) == 0
    }

    pub fn neg(&self, g: Elem) -> Elem {
        self.inner.neg[g] as usize
    }

    pub fn sub(&self, g: Elem, h: Elem) -> Elem {
        self.add(g, self.neg(h))
    }

    pub fn element_order(&self, g: Elem) -> u64 {
        self.inner.elem_order[g] as u64
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.inner.pres_add(a, b)
    }

    /// `k·γ` for any integer `k`.
    pub fn mul(&self, k: i64, g: Elem) -> Elem {
        let o = self.element_order(g) as i64;
        let mut k = k.rem_euclid(o) as u64;
        let mut base = g;
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Length of the coefficient vectors returned by [`coords`](Self::coords).
    pub fn num_coords(&self) -> usize {
        match &self.inner.pres {
            Presentation::Generated { orders, .. } => orders.len(),
            Presentation::Subquotient { parent, .. } => parent.num_coords(),
            Presentation::Product { left, right } => left.num_coords() + right.num_coords(),
        }
    }

    /// Coefficient vector of an element against the build-order generators.
    ///
    /// For subquotients this is the vector of the smallest coset representative in the parent.
    pub fn coords(&self, g: Elem) -> Vec<u64> {
        match &self.inner.pres {
            Presentation::Generated {
                orders, strides, ..
            } => orders
                .iter()
                .zip(strides)
                .map(|(&o, &s)| ((g / s) as u64) % o)
                .collect(),
            Presentation::Subquotient { parent, map } => parent.coords(map.section(g)),
            Presentation::Product { left, right } => {
                let (l, r) = (g / right.order(), g % right.order());
                let mut v = left.coords(l);
                v.extend(right.coords(r));
                v
            }
        }
    }

    /// Inverse of [`coords`](Self::coords); entries are reduced modulo the generator orders.
    pub fn element_from_coords(&self, c: &[i64]) -> Result<Elem> {
        if c.len() != self.num_coords() {
            return Err(Error::DimensionMismatch {
                expected: self.num_coords(),
                got: c.len(),
            });
        }
        match &self.inner.pres {
            Presentation::Generated {
                orders, strides, ..
            } => Ok(c
                .iter()
                .zip(orders.iter().zip(strides))
                .map(|(&x, (&o, &s))| x.rem_euclid(o as i64) as usize * s)
                .sum()),
            Presentation::Subquotient { parent, map } => {
                let g = parent.element_from_coords(c)?;
                map.project(g).ok_or_else(|| {
                    Error::Validity("coefficient vector lies outside the subquotient".into())
                })
            }
            Presentation::Product { left, right } => {
                let k = left.num_coords();
                let l = left.element_from_coords(&c[..k])?;
                let r = right.element_from_coords(&c[k..])?;
                Ok(l * right.order() + r)
            }
        }
    }

    /// Human-readable coefficient vector, e.g. `(1,0,2)`.
    pub fn label(&self, g: Elem) -> String {
        let c = self.coords(g);
        let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Orders of the build generators, when the form is generator-presented.
    pub fn generator_orders(&self) -> Option<&[u64]> {
        match &self.inner.pres {
            Presentation::Generated { orders, .. } => Some(orders),
            _ => None,
        }
    }

    /// `q(g_i)` of the build generators, when generator-presented.
    pub fn q_diagonal(&self) -> Option<&[RationalMod1]> {
        match &self.inner.pres {
            Presentation::Generated { q_diag, .. } => Some(q_diag),
            _ => None,
        }
    }

    /// Gram table `b(g_i, g_j)` of the build generators, when generator-presented.
    pub fn gram(&self) -> Option<Vec<Vec<RationalMod1>>> {
        match &self.inner.pres {
            Presentation::Generated { gram, orders, .. } => {
                let m = orders.len();
                Some((0..m).map(|i| gram[i * m..(i + 1) * m].to_vec()).collect())
            }
            _ => None,
        }
    }

    /// Elements generating the form: build generators, or images of a spanning set.
    pub fn generators(&self) -> Vec<Elem> {
        match &self.inner.pres {
            Presentation::Generated { strides, .. } => strides.clone(),
            _ => self.span_all().generators,
        }
    }

    fn span_all(&self) -> Subgroup {
        let all: Vec<Elem> = self.elements().collect();
        self.subgroup_from_elements_unchecked(all)
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[Elem]) -> Subgroup {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut elements = vec![0];
        let mut generators = Vec::new();
        for &g in gens {
            if member[g] {
                continue;
            }
            generators.push(g);
            let base = elements.clone();
            let mut shift = g;
            while !member[shift] {
                for &h in &base {
                    let e = self.add(h, shift);
                    if !member[e] {
                        member[e] = true;
                        elements.push(e);
                    }
                }
                shift = self.add(shift, g);
            }
        }
        elements.sort_unstable();
        Subgroup {
            elements,
            generators,
        }
    }

    /// Wraps a list already known to be a subgroup, computing an irredundant generating list.
    pub(crate) fn subgroup_from_elements_unchecked(&self, mut elements: Vec<Elem>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let gens = self.span(&elements).generators;
        Subgroup {
            elements,
            generators: gens,
        }
    }

    /// `{β : b(β, s) = 0 for all s ∈ S}` where `S` is given by any generating list.
    pub fn orthogonal_complement(&self, gens: &[Elem]) -> Subgroup {
        let elements: Vec<Elem> = self
            .elements()
            .filter(|&b| gens.iter().all(|&s| self.is_orthogonal(b, s)))
            .collect();
        self.subgroup_from_elements_unchecked(elements)
    }

    /// True when `q` vanishes on every element of `h`.
    pub fn subgroup_is_isotropic(&self, h: &Subgroup) -> bool {
        h.elements.iter().all(|&g| self.is_isotropic(g))
    }

    /// The form `H⊥/H` with its projection and section maps.
    pub fn quotient_form(&self, h: &Subgroup) -> Result<(DiscriminantForm, Arc<QuotientMap>)> {
        if !self.subgroup_is_isotropic(h) {
            return Err(Error::NotIsotropic);
        }
        let perp = self.orthogonal_complement(&h.generators);
        let mut class_of = vec![NONE; self.order()];
        let mut reps = Vec::with_capacity(perp.order() / h.order().max(1));
        for &g in &perp.elements {
            if class_of[g] != NONE {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for &x in &h.elements {
                class_of[self.add(g, x)] = c;
            }
        }
        let map = Arc::new(QuotientMap { class_of, reps });
        Ok((self.subquotient(map.clone()), map))
    }

    fn subquotient(&self, map: Arc<QuotientMap>) -> DiscriminantForm {
        let n = self.level();
        let raw: Vec<u64> = map.reps.iter().map(|&g| self.qnum(g)).collect();
        let order = map.reps.len();
        Self::from_parts(
            Presentation::Subquotient {
                parent: self.clone(),
                map,
            },
            order,
            raw,
            n,
        )
    }

    /// The restriction of `q` to a non-degenerate subgroup, with the embedding map.
    pub fn restrict(&self, s: &Subgroup) -> (DiscriminantForm, Vec<Elem>) {
        let mut class_of = vec![NONE; self.order()];
        for (i, &g) in s.elements.iter().enumerate() {
            class_of[g] = i as u32;
        }
        let map = Arc::new(QuotientMap {
            class_of,
            reps: s.elements.clone(),
        });
        (self.subquotient(map), s.elements.clone())
    }

    /// The p-part `{γ : p^ν γ = 0}` and its embedding into this form.
    pub fn p_part(&self, p: u64) -> (DiscriminantForm, Vec<Elem>) {
        let is_p_elem = |g: Elem| {
            let o = self.element_order(g);
            o == 1 || prime_power(o).map(|(q, _)| q == p).unwrap_or(false)
        };
        if let Presentation::Generated {
            orders,
            strides,
            q_diag,
            gram,
        } = &self.inner.pres
        {
            if orders.iter().all(|&o| prime_power(o).is_some()) {
                let m = orders.len();
                let keep: Vec<usize> = (0..m)
                    .filter(|&i| prime_power(orders[i]).map(|(q, _)| q) == Some(p))
                    .collect();
                let sub_orders: Vec<u64> = keep.iter().map(|&i| orders[i]).collect();
                let sub_q: Vec<RationalMod1> = keep.iter().map(|&i| q_diag[i]).collect();
                let mut sub_gram = Vec::with_capacity(keep.len() * keep.len());
                for &i in &keep {
                    for &j in &keep {
                        sub_gram.push(gram[i * m + j]);
                    }
                }
                let part = Self::generated_unchecked(sub_orders, sub_q, sub_gram)
                    .expect("p-part of a valid form");
                let embed: Vec<Elem> = part
                    .elements()
                    .map(|e| {
                        let c = part.coords(e);
                        keep.iter().zip(c).map(|(&i, x)| x as usize * strides[i]).sum()
                    })
                    .collect();
                return (part, embed);
            }
        }
        let elems: Vec<Elem> = self.elements().filter(|&g| is_p_elem(g)).collect();
        let s = self.subgroup_from_elements_unchecked(elems);
        self.restrict(&s)
    }

    /// Orthogonal direct sum; element index is `i·|D2| + j`.
    pub fn direct_sum(&self, other: &DiscriminantForm) -> DiscriminantForm {
        if let (
            Presentation::Generated {
                orders: o1,
                q_diag: q1,
                gram: g1,
                ..
            },
            Presentation::Generated {
                orders: o2,
                q_diag: q2,
                gram: g2,
                ..
            },
        ) = (&self.inner.pres, &other.inner.pres)
        {
            let (m1, m2) = (o1.len(), o2.len());
            let m = m1 + m2;
            let mut gram = vec![RationalMod1::ZERO; m * m];
            for i in 0..m1 {
                for j in 0..m1 {
                    gram[i * m + j] = g1[i * m1 + j];
                }
            }
            for i in 0..m2 {
                for j in 0..m2 {
                    gram[(m1 + i) * m + m1 + j] = g2[i * m2 + j];
                }
            }
            let mut orders = o1.clone();
            orders.extend(o2);
            let mut q = q1.clone();
            q.extend(q2);
            if let Ok(f) = Self::generated_unchecked(orders, q, gram) {
                return f;
            }
        }
        let den = self.level().lcm(&other.level());
        let (f1, f2) = (den / self.level(), den / other.level());
        let mut raw = Vec::with_capacity(self.order() * other.order());
        for a in self.elements() {
            for b in other.elements() {
                raw.push((self.qnum(a) * f1 + other.qnum(b) * f2) % den);
            }
        }
        Self::from_parts(
            Presentation::Product {
                left: self.clone(),
                right: other.clone(),
            },
            self.order() * other.order(),
            raw,
            den,
        )
    }

    fn radical_is_trivial(&self) -> bool {
        let gens = self.generators();
        self.elements()
            .skip(1)
            .all(|g| gens.iter().any(|&s| !self.is_orthogonal(g, s)))
    }

    /// Full non-degeneracy check by enumeration.
    pub fn is_nondegenerate(&self) -> bool {
        self.radical_is_trivial()
    }

    /// Counts of `q`-numerators: `counts[r] = #{γ : q(γ) = r/N}`.
    pub fn q_histogram(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.level() as usize];
        for &x in &self.inner.qnum {
            counts[x as usize] += 1;
        }
        counts
    }

    /// Numerical Gauss sum `Σ e(q(γ))`.
    pub fn gauss_sum_numeric(&self) -> (f64, f64) {
        let n = self.level() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (r, &c) in self.q_histogram().iter().enumerate() {
            if c > 0 {
                let a = std::f64::consts::TAU * r as f64 / n;
                re += c as f64 * a.cos();
                im += c as f64 * a.sin();
            }
        }
        (re, im)
    }

    /// Checks `G² = |D|·e(s/4)` exactly in ℚ(ζ_M), `M = lcm(8, N)`, for the Gauss sum `G`.
    pub fn milgram_identity_holds(&self, s: u8) -> bool {
        self.milgram_identity_holds_with_conductor(s, 8u64.lcm(&self.level()))
    }

    /// As [`milgram_identity_holds`](Self::milgram_identity_holds) but in ℚ(ζ_m) for a given
    /// multiple `m` of `lcm(8, N)`.
    pub fn milgram_identity_holds_with_conductor(&self, s: u8, m: u64) -> bool {
        let n = self.level();
        assert_eq!(m % 8u64.lcm(&n), 0, "conductor must be a multiple of lcm(8, level)");
        let step = (m / n) as usize;
        let m = m as usize;
        let hist = self.q_histogram();
        let terms: Vec<(usize, i128)> = hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (r * step % m, c as i128))
            .collect();
        let mut sq = vec![0i128; m];
        for &(e1, c1) in &terms {
            for &(e2, c2) in &terms {
                sq[(e1 + e2) % m] += c1 * c2;
            }
        }
        sq[(s as usize % 8) * m / 4 % m] -= self.order() as i128;
        let field = CyclotomicField::new(m);
        field.is_zero_i128(&sq)
    }

    /// Signature mod 8, certified by the exact Milgram identity.
    pub fn signature(&self) -> Result<u8> {
        self.inner
            .signature
            .get_or_init(|| self.compute_signature())
            .clone()
    }

    fn compute_signature(&self) -> Result<u8> {
        let (re, im) = self.gauss_sum_numeric();
        let size = self.order() as f64;
        let abs2 = re * re + im * im;
        if abs2 < 0.25 {
            return Err(Error::DegenerateForm);
        }
        if ((abs2 - size) / size).abs() > 1e-6 {
            return Err(Error::Inconsistent(format!(
                "|Gauss sum|^2 = {abs2}, expected {size}"
            )));
        }
        let eighth = std::f64::consts::TAU / 8.0;
        let arg = im.atan2(re);
        let k = (arg / eighth).round();
        if (arg - k * eighth).abs() > eighth / 4.0 {
            return Err(Error::Inconsistent(format!("Gauss sum argument {arg} off the grid")));
        }
        let s = (k as i64).rem_euclid(8) as u8;
        if !self.milgram_identity_holds(s) {
            return Err(Error::Inconsistent(format!(
                "Milgram identity fails for signature {s}"
            )));
        }
        Ok(s)
    }

    pub(crate) fn analysis_slot(&self) -> &Mutex<Option<Arc<ImageAnalysis>>> {
        &self.inner.analysis
    }

    /// True if both handles refer to the same form object.
    pub fn ptr_eq(&self, other: &DiscriminantForm) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

/// Units `a_i` for an odd-p component of rank `n`: all 1 except the last, adjusted so
/// that `Π (2a_i|p) = ε`.
fn odd_units(p: u64, n: usize, sign: Sign) -> Vec<u64> {
    let two = crate::arith::legendre(2, p);
    let base = if n % 2 == 0 { 1 } else { two };
    let mut units = vec![1u64; n];
    if base != sign.value() {
        let non_residue = (2..p)
            .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a non-residue");
        units[n - 1] = non_residue;
    }
    units
}

impl Inner {
    fn pres_add(&self, a: Elem, b: Elem) -> Elem {
        match &self.pres {
            Presentation::Generated {
                orders, strides, ..
            } => {
                let mut r = 0;
                for (&o, &s) in orders.iter().zip(strides) {
                    let o = o as usize;
                    let x = (a / s) % o + (b / s) % o;
                    r += if x >= o { x - o } else { x } * s;
                }
                r
            }
            Presentation::Subquotient { parent, map } => {
                let s = parent.add(map.reps[a], map.reps[b]);
                map.class_of[s] as usize
            }
            Presentation::Product { right, .. } => {
                let n = right.order();
                let (l, r) = (self.pres_left().add(a / n, b / n), right.add(a % n, b % n));
                l * n + r
            }
        }
    }

    fn pres_left(&self) -> &DiscriminantForm {
        match &self.pres {
            Presentation::Product { left, .. } => left,
            _ => unreachable!(),
        }
    }

    fn pres_neg(&self, a: Elem) -> Elem {
        match &self.pres {
            Presentation::Generated {
                orders, strides, ..
            } => {
                let mut r = 0;
                for (&o, &s) in orders.iter().zip(strides) {
                    let o = o as usize;
                    let x = (a / s) % o;
                    r += ((o - x) % o) * s;
                }
                r
            }
            Presentation::Subquotient { parent, map } => {
                map.class_of[parent.neg(map.reps[a])] as usize
            }
            Presentation::Product { left, right } => {
                let n = right.order();
                left.neg(a / n) * n + right.neg(a % n)
            }
        }
    }

    fn pres_order(&self, a: Elem) -> u64 {
        match &self.pres {
            Presentation::Generated {
                orders, strides, ..
            } => orders.iter().zip(strides).fold(1u64, |acc, (&o, &s)| {
                let x = ((a / s) as u64) % o;
                acc.lcm(&(o / x.gcd(&o)))
            }),
            Presentation::Subquotient { parent, map } => {
                let rep = map.reps[a];
                let bound = parent.element_order(rep);
                let mut d = 1u64;
                while d <= bound {
                    if bound % d == 0 && map.class_of[parent.mul(d as i64, rep)] == 0 {
                        return d;
                    }
                    d += 1;
                }
                bound
            }
            Presentation::Product { left, right } => {
                let n = right.order();
                left.element_order(a / n).lcm(&right.element_order(a % n))
            }
        }
    }
}

impl fmt::Debug for DiscriminantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.inner.pres {
            Presentation::Generated { .. } => "generated",
            Presentation::Subquotient { .. } => "subquotient",
            Presentation::Product { .. } => "product",
        };
        f.debug_struct("DiscriminantForm")
            .field("kind", &kind)
            .field("order", &self.order())
            .field("level", &self.level())
            .finish()
    }
}

/// Builds the explicit model of a genus symbol.
pub fn build_form(sym: &GenusSymbol) -> Result<DiscriminantForm> {
    DiscriminantForm::from_symbol(sym)
}
