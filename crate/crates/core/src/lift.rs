//! Isotropic lifts ↑_H, descents ↓_H, the span of all lifts and the explicit constructions
//! that express basis vectors as combinations of lifts or separate them from the span.

use std::collections::{HashSet, VecDeque};
use std::ops::AddAssign;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{prime_factors, prime_power};
use crate::error::{Error, Result};
use crate::form::{DiscriminantForm, Elem, QuotientMap, Subgroup};
use crate::linalg::{column_span, ColumnVisitor, SpanBasis};
use crate::rational::RationalMod1;

/// Size limits for the enumeration-heavy operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Bounds {
    /// Largest form whose lift span is computed.
    pub max_span_order: usize,
    /// Largest form for which all isotropic subgroups are enumerated.
    pub max_enum_order: usize,
    /// Largest form whose Weil matrices are built.
    pub max_cyclotomic_order: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_span_order: 4096,
            max_enum_order: 256,
            max_cyclotomic_order: 64,
        }
    }
}

impl Bounds {
    /// Defaults overridden by `DFT_MAX_SPAN_ORDER` and `DFT_MAX_ENUM_ORDER`.
    pub fn from_env() -> Self {
        let mut b = Bounds::default();
        let read = |name: &str| std::env::var(name).ok().and_then(|v| v.trim().parse().ok());
        if let Some(v) = read("DFT_MAX_SPAN_ORDER") {
            b.max_span_order = v;
        }
        if let Some(v) = read("DFT_MAX_ENUM_ORDER") {
            b.max_enum_order = v;
        }
        b
    }

    fn check(what: &'static str, order: usize, bound: usize) -> Result<()> {
        if order > bound {
            Err(Error::BoundExceeded { what, order, bound })
        } else {
            Ok(())
        }
    }
}

/// Nonzero isotropic elements, optionally only those of a given order.
pub fn isotropic_elements(d: &DiscriminantForm, order_filter: Option<u64>) -> Vec<Elem> {
    d.elements()
        .skip(1)
        .filter(|&g| d.is_isotropic(g))
        .filter(|&g| order_filter.map_or(true, |o| d.element_order(g) == o))
        .collect()
}

fn sort_subgroups(list: &mut [Subgroup]) {
    list.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
}

/// True when `g` is the smallest nonzero element of the cyclic group it generates among its
/// generators, used to list each cyclic group of prime order once.
fn is_canonical_generator(d: &DiscriminantForm, g: Elem) -> bool {
    let o = d.element_order(g) as i64;
    (2..o).all(|k| d.mul(k, g) > g)
}

/// The isotropic subgroups of prime order, over every prime dividing `|D|`.
pub fn prime_order_isotropic_subgroups(d: &DiscriminantForm) -> Vec<Subgroup> {
    let mut out = Vec::new();
    for p in prime_factors(d.order() as u64) {
        for mu in isotropic_elements(d, Some(p)) {
            if is_canonical_generator(d, mu) {
                out.push(d.span(&[mu]));
            }
        }
    }
    sort_subgroups(&mut out);
    out
}

/// Every non-trivial isotropic subgroup, by closure search from isotropic cyclic subgroups.
pub fn isotropic_subgroups(d: &DiscriminantForm, bounds: &Bounds) -> Result<Vec<Subgroup>> {
    Bounds::check("isotropic subgroup enumeration", d.order(), bounds.max_enum_order)?;
    let iso = isotropic_elements(d, None);
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    for &g in &iso {
        let h = d.span(&[g]);
        if seen.insert(h.elements.clone()) {
            queue.push_back(h);
        }
    }
    while let Some(h) = queue.pop_front() {
        let perp = d.orthogonal_complement(&h.generators);
        for &b in &perp.elements {
            if !d.is_isotropic(b) || h.contains(b) {
                continue;
            }
            // one extension per coset of h
            if h.elements.iter().any(|&x| d.add(b, x) < b) {
                continue;
            }
            let mut gens = h.generators.clone();
            gens.push(b);
            let k = d.span(&gens);
            if seen.insert(k.elements.clone()) {
                queue.push_back(k);
            }
        }
        out.push(h);
    }
    sort_subgroups(&mut out);
    Ok(out)
}

/// The lift `↑_H : ℚ[H⊥/H] → ℚ[D]`, stored by the supports of its 0/1 columns.
#[derive(Clone, Debug)]
pub struct LiftMap {
    subgroup: Subgroup,
    source: DiscriminantForm,
    map: Arc<QuotientMap>,
    columns: Vec<Vec<Elem>>,
    target_order: usize,
}

fn build_lift(d: &DiscriminantForm, h: &Subgroup) -> Result<LiftMap> {
    let (source, map) = d.quotient_form(h)?;
    let columns = (0..source.order())
        .map(|c| {
            let rep = map.section(c);
            let mut s: Vec<Elem> = h.elements.iter().map(|&m| d.add(rep, m)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    Ok(LiftMap {
        subgroup: h.clone(),
        source,
        map,
        columns,
        target_order: d.order(),
    })
}

/// The lift matrix of a non-trivial isotropic subgroup.
pub fn lift_matrix(d: &DiscriminantForm, h: &Subgroup) -> Result<LiftMap> {
    if h.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    build_lift(d, h)
}

impl LiftMap {
    /// The form `H⊥/H`.
    pub fn source(&self) -> &DiscriminantForm {
        &self.source
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn quotient_map(&self) -> &QuotientMap {
        &self.map
    }

    /// Support of the column for each coset of `H` in `H⊥`.
    pub fn columns(&self) -> &[Vec<Elem>] {
        &self.columns
    }

    /// Dense `|D| × |H⊥/H|` matrix.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.columns.len()]; self.target_order];
        for (c, col) in self.columns.iter().enumerate() {
            for &g in col {
                m[g][c] = 1;
            }
        }
        m
    }

    /// Dense `|H⊥/H| × |D|` matrix of `↓_H`, built from the projection `H⊥ → H⊥/H`.
    pub fn descent_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.target_order]; self.columns.len()];
        for g in 0..self.target_order {
            if let Some(c) = self.map.project(g) {
                m[c][g] = 1;
            }
        }
        m
    }

    /// `↑_H v` for `v ∈ ℚ[H⊥/H]`.
    pub fn lift<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Clone + Zero + for<'a> AddAssign<&'a T>,
    {
        let mut out = vec![T::zero(); self.target_order];
        for (x, col) in v.iter().zip(&self.columns) {
            if x.is_zero() {
                continue;
            }
            for &g in col {
                out[g] += x;
            }
        }
        out
    }

    /// `↓_H v` for `v ∈ ℚ[D]`: `e^γ ↦ e^{γ+H}` on `H⊥`, zero elsewhere.
    pub fn descend<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Clone + Zero + for<'a> AddAssign<&'a T>,
    {
        let mut out = vec![T::zero(); self.columns.len()];
        for (g, x) in v.iter().enumerate() {
            if let Some(c) = self.map.project(g) {
                out[c] += x;
            }
        }
        out
    }
}

/// The span of all lifts over a family of isotropic subgroups, with a basis of its orthogonal
/// complement `ker(↓)` and per-element membership of the unit vectors.
#[derive(Clone, Debug)]
pub struct ImageAnalysis {
    pub order: usize,
    pub rank: usize,
    pub basis: SpanBasis,
    /// Integral vectors spanning `ker(↓)`, sparse.
    pub kernel: Vec<Vec<(usize, i64)>>,
    /// `in_image[γ]` iff `e^γ` lies in the span.
    pub in_image: Vec<bool>,
    pub subgroup_count: usize,
    pub column_count: usize,
}

impl ImageAnalysis {
    pub fn is_full(&self) -> bool {
        self.rank == self.order
    }

    /// Elements whose unit vector is not in the span.
    pub fn witnesses(&self) -> Vec<Elem> {
        (0..self.order).filter(|&g| !self.in_image[g]).collect()
    }
}

fn analyze(d: &DiscriminantForm, subgroups: &[Subgroup]) -> Result<ImageAnalysis> {
    let perps: Vec<Vec<Elem>> = subgroups
        .iter()
        .map(|h| d.orthogonal_complement(&h.generators).elements)
        .collect();
    let columns = |visit: &mut ColumnVisitor| {
        let mut support = Vec::new();
        for (h, perp) in subgroups.iter().zip(&perps) {
            for &g in perp {
                support.clear();
                support.extend(h.elements.iter().map(|&m| d.add(g, m)));
                if support.iter().any(|&x| x < g) {
                    continue;
                }
                if !visit(&support) {
                    return;
                }
            }
        }
    };
    let span = column_span(d.order(), &columns)?;
    let mut in_image = vec![true; d.order()];
    for k in &span.kernel {
        for &(i, x) in k {
            if x != 0 {
                in_image[i] = false;
            }
        }
    }
    Ok(ImageAnalysis {
        order: d.order(),
        rank: span.rank(),
        basis: span.basis,
        kernel: span.kernel,
        in_image,
        subgroup_count: subgroups.len(),
        column_count: span.columns_seen,
    })
}

/// The span of lifts over prime-order isotropic subgroups, cached on the form.
pub fn image_analysis(d: &DiscriminantForm, bounds: &Bounds) -> Result<Arc<ImageAnalysis>> {
    Bounds::check("lift span", d.order(), bounds.max_span_order)?;
    let mut slot = d.analysis_slot().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(a) = slot.as_ref() {
        return Ok(a.clone());
    }
    let a = Arc::new(analyze(d, &prime_order_isotropic_subgroups(d))?);
    *slot = Some(a.clone());
    Ok(a)
}

/// The span of lifts over every non-trivial isotropic subgroup (not cached).
pub fn full_image_analysis(d: &DiscriminantForm, bounds: &Bounds) -> Result<ImageAnalysis> {
    let all = isotropic_subgroups(d, bounds)?;
    analyze(d, &all)
}

/// Rank of the lift span and its row-reduced basis.
pub fn image_rank(d: &DiscriminantForm, bounds: &Bounds) -> Result<(usize, SpanBasis)> {
    let a = image_analysis(d, bounds)?;
    Ok((a.rank, a.basis.clone()))
}

/// Whether `e^γ` is a rational combination of isotropic lifts.
pub fn e_gamma_in_image(d: &DiscriminantForm, g: Elem, bounds: &Bounds) -> Result<bool> {
    Ok(image_analysis(d, bounds)?.in_image[g])
}

/// True when some two orthogonal isotropic elements of order `p` among `candidates` generate a
/// subgroup of order `p²`.
pub fn contains_isotropic_plane(d: &DiscriminantForm, candidates: &[Elem], p: u64) -> bool {
    let iso: Vec<Elem> = candidates
        .iter()
        .copied()
        .filter(|&g| g != 0 && d.is_isotropic(g) && d.element_order(g) == p)
        .collect();
    for (i, &a) in iso.iter().enumerate() {
        let line: Vec<Elem> = (0..p as i64).map(|k| d.mul(k, a)).collect();
        for &b in &iso[i + 1..] {
            if d.is_orthogonal(a, b) && !line.contains(&b) {
                return true;
            }
        }
    }
    false
}

/// Whether `γ⊥` contains an isotropic subgroup isomorphic to `(Z/p)²`.
pub fn perp_contains_isotropic_plane(d: &DiscriminantForm, g: Elem, p: u64) -> bool {
    let perp = d.orthogonal_complement(&[g]);
    contains_isotropic_plane(d, &perp.elements, p)
}

/// For odd `p`: `γ` has order at most `p`, or `q(γ) = j/n` with `n` the order of `γ` and
/// `p | j`. Under this condition membership of `e^γ` is decided by isotropic planes in `γ⊥`.
pub fn plane_criterion_applies(d: &DiscriminantForm, g: Elem, p: u64) -> bool {
    let n = d.element_order(g);
    if n <= p {
        return true;
    }
    let j = d.q(g).numer_over(n);
    j % p == 0
}

/// A term `c · ↑_H(e^{γ+H})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftTerm {
    pub subgroup: Subgroup,
    /// A representative of the coset, lying in `H⊥`.
    pub coset: Elem,
    pub coefficient: BigRational,
}

/// `Σ c · ↑_H(e^{γ+H})` as a coordinate vector; checks isotropy and `γ ∈ H⊥` for each term.
pub fn evaluate_terms(d: &DiscriminantForm, terms: &[LiftTerm]) -> Result<Vec<BigRational>> {
    let mut out = vec![BigRational::zero(); d.order()];
    for t in terms {
        if !d.subgroup_is_isotropic(&t.subgroup) {
            return Err(Error::NotIsotropic);
        }
        if t.subgroup.generators.iter().any(|&h| !d.is_orthogonal(h, t.coset)) {
            return Err(Error::HypothesisFailed(format!(
                "coset representative {} is not orthogonal to its subgroup",
                d.label(t.coset)
            )));
        }
        for &m in &t.subgroup.elements {
            out[d.add(t.coset, m)] += &t.coefficient;
        }
    }
    Ok(out)
}

fn unit_vector(n: usize, g: Elem) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[g] = BigRational::one();
    v
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn prime_of(d: &DiscriminantForm) -> Result<u64> {
    prime_power(d.order() as u64)
        .map(|(p, _)| p)
        .ok_or_else(|| Error::HypothesisFailed("form is not of prime-power order".into()))
}

/// `v = e^γ − (1/(p−1)) Σ e^{γ+μ}` over isotropic `μ ⊥ γ` of order `p`, which pairs to 1 with
/// `e^γ` and is killed by every descent `↓_H` with `H ⊆ γ⊥`.
pub fn kernel_vector(d: &DiscriminantForm, g: Elem, bounds: &Bounds) -> Result<Vec<BigRational>> {
    let p = prime_of(d)?;
    let perp = d.orthogonal_complement(&[g]);
    if contains_isotropic_plane(d, &perp.elements, p) {
        return Err(Error::HypothesisFailed(format!(
            "the orthogonal complement of {} contains an isotropic (Z/{p})^2",
            d.label(g)
        )));
    }
    let iso: Vec<Elem> = perp
        .elements
        .iter()
        .copied()
        .filter(|&m| m != 0 && d.is_isotropic(m) && d.element_order(m) == p)
        .collect();
    let mut v = unit_vector(d.order(), g);
    let w = ratio(1, p as i64 - 1);
    for &m in &iso {
        v[d.add(g, m)] -= &w;
    }
    if v[g] != BigRational::one() {
        return Err(Error::Inconsistent("kernel vector does not pair to 1".into()));
    }
    let inside: Vec<Subgroup> = if d.order() <= bounds.max_enum_order {
        isotropic_subgroups(d, bounds)?
    } else {
        prime_order_isotropic_subgroups(d)
    }
    .into_iter()
    .filter(|h| h.elements.iter().all(|&x| perp.contains(x)))
    .collect();
    for h in &inside {
        if build_lift(d, h)?.descend(&v).iter().any(|x| !x.is_zero()) {
            return Err(Error::Inconsistent(format!(
                "kernel vector is not killed by the descent of a subgroup of order {}",
                h.order()
            )));
        }
    }
    Ok(v)
}

/// For an odd isotropic cycle `(γ_1, …, γ_n)` the combination
/// `Σ_i ½(−1)^{i−1} ↑_{⟨μ_i⟩}(e^{γ_i})`, `μ_i = γ_{i+1} − γ_i`, which equals `e^{γ_1}`.
pub fn odd_cycle_expression(d: &DiscriminantForm, cycle: &[Elem]) -> Result<Vec<LiftTerm>> {
    let n = cycle.len();
    if n % 2 == 0 {
        return Err(Error::EvenLength(n));
    }
    let half = ratio(1, 2);
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        let mu = d.sub(b, a);
        if d.element_order(mu) != 2 || !d.is_isotropic(mu) || !d.is_orthogonal(mu, a) {
            return Err(Error::NotACycle(format!(
                "no edge between {} and {}",
                d.label(a),
                d.label(b)
            )));
        }
        let c = if i % 2 == 0 { half.clone() } else { -half.clone() };
        terms.push(LiftTerm {
            subgroup: d.span(&[mu]),
            coset: a,
            coefficient: c,
        });
    }
    if evaluate_terms(d, &terms)? != unit_vector(d.order(), cycle[0]) {
        return Err(Error::Inconsistent("odd cycle expression does not sum to the unit vector".into()));
    }
    Ok(terms)
}

/// For `D = P ⊕ ⟨γ⟩` with `P ≅ p^{−4}` and `ord γ = q > p`, `q(γ) = j/q`, `p ∤ j`, the explicit
/// combination of lifts equal to `e^γ`.
pub fn rank5_expression(d: &DiscriminantForm, g: Elem) -> Result<Vec<LiftTerm>> {
    let fail = |s: String| Err(Error::HypothesisFailed(s));
    let p = prime_of(d)?;
    if p == 2 {
        return fail("the prime must be odd".into());
    }
    let q = d.element_order(g);
    if q <= p {
        return fail(format!("the element has order {q}, not larger than {p}"));
    }
    let qg = d.q(g);
    if q % qg.denom() != 0 {
        return fail("q(γ) is not of the form j/ord(γ)".into());
    }
    let j = qg.numer() * (q / qg.denom());
    if j % p == 0 {
        return fail(format!("q(γ) = {j}/{q} has numerator divisible by {p}"));
    }
    let perp = d.orthogonal_complement(&[g]);
    let pp = p as usize;
    if perp.order() != pp.pow(4) || perp.order() * q as usize != d.order() {
        return fail("the orthogonal complement of γ is not a rank-4 complement".into());
    }
    if perp.elements.iter().any(|&x| d.element_order(x) > p) {
        return fail("the orthogonal complement of γ does not have exponent p".into());
    }
    if contains_isotropic_plane(d, &perp.elements, p) {
        return fail("the orthogonal complement of γ contains an isotropic (Z/p)^2".into());
    }
    let ip: Vec<Elem> = perp.elements.iter().copied().filter(|&x| x != 0 && d.is_isotropic(x)).collect();
    let step = q / p;
    let b_target = |l: u64| RationalMod1::new(-2 * (l * j) as i128, p);
    let qp = |x: Elem| d.q(x);

    let mut v_terms = Vec::new();
    for &m in &ip {
        v_terms.push((d.span(&[m]), g));
    }
    let mut w_terms = Vec::new();
    for &m in &ip {
        for &b in &ip {
            if d.b(m, b) == b_target(1) {
                let h = d.add(d.mul(step as i64, g), b);
                w_terms.push((d.span(&[h]), d.add(g, m)));
            }
        }
    }
    let mut u_terms: Vec<Vec<(Subgroup, Elem)>> = vec![Vec::new(); pp];
    for l in 1..p {
        let shift = d.mul(1 + (l * step) as i64, g);
        for &m in &ip {
            for &b in &perp.elements {
                if d.is_orthogonal(m, b) && qp(b) == b_target(l) {
                    u_terms[l as usize].push((d.span(&[m]), d.add(shift, b)));
                }
            }
        }
    }
    let counts = |terms: &[(Subgroup, Elem)]| -> Result<Vec<i64>> {
        let mut c = vec![0i64; d.order()];
        for (h, coset) in terms {
            if !d.subgroup_is_isotropic(h) || h.generators.iter().any(|&x| !d.is_orthogonal(x, *coset)) {
                return Err(Error::Inconsistent("rank-five term is not a valid lift".into()));
            }
            for &m in &h.elements {
                c[d.add(*coset, m)] += 1;
            }
        }
        Ok(c)
    };
    let w = counts(&w_terms)?;
    let constant = |vals: Vec<i64>, what: &str| -> Result<i64> {
        match vals.first() {
            Some(&x) if vals.iter().all(|&y| y == x) && x > 0 => Ok(x),
            _ => Err(Error::Inconsistent(format!("count {what} is not a positive constant"))),
        }
    };
    let a0 = constant(ip.iter().map(|&a| w[d.add(g, a)]).collect(), "a_0")?;
    let mut al = vec![0i64; pp];
    let mut bl = vec![0i64; pp];
    for l in 1..p {
        let shift = d.mul(1 + (l * step) as i64, g);
        let alphas: Vec<Elem> = perp
            .elements
            .iter()
            .copied()
            .filter(|&a| a != 0 && qp(a) == b_target(l))
            .collect();
        let u = counts(&u_terms[l as usize])?;
        al[l as usize] = constant(alphas.iter().map(|&a| w[d.add(shift, a)]).collect(), "a_l")?;
        let pb = constant(alphas.iter().map(|&a| u[d.add(shift, a)]).collect(), "p·b_l")?;
        if pb % p as i64 != 0 {
            return Err(Error::Inconsistent("u_l coefficient is not divisible by p".into()));
        }
        bl[l as usize] = pb / p as i64;
    }
    let n_ip = ip.len() as i64;
    let pm1 = p as i64 - 1;
    let mut terms = Vec::new();
    let push = |list: &[(Subgroup, Elem)], c: BigRational, terms: &mut Vec<LiftTerm>| {
        for (h, coset) in list {
            terms.push(LiftTerm {
                subgroup: h.clone(),
                coset: *coset,
                coefficient: c.clone(),
            });
        }
    };
    push(&v_terms, ratio(1, n_ip), &mut terms);
    push(&w_terms, -ratio(pm1, a0 * n_ip), &mut terms);
    for l in 1..pp {
        let c = ratio(pm1 * al[l], a0 * p as i64 * bl[l] * n_ip);
        push(&u_terms[l], c, &mut terms);
    }
    if evaluate_terms(d, &terms)? != unit_vector(d.order(), g) {
        return Err(Error::Inconsistent("rank-five expression does not sum to the unit vector".into()));
    }
    Ok(terms)
}

/// Checks `↑_H ∘ ↑_{K/H} = ↑_K` and `↓_{K/H} ∘ ↓_H = ↓_K` for isotropic `H ⊆ K`, identifying
/// `(K/H)⊥/(K/H)` with `K⊥/K` through the quotient maps.
pub fn check_transitivity(d: &DiscriminantForm, h: &Subgroup, k: &Subgroup) -> Result<bool> {
    if !h.elements.iter().all(|&x| k.contains(x)) {
        return Err(Error::NotNested);
    }
    if !d.subgroup_is_isotropic(k) {
        return Err(Error::NotIsotropic);
    }
    let lift_h = build_lift(d, h)?;
    let d1 = lift_h.source().clone();
    let kh_elems: Vec<Elem> = k
        .elements
        .iter()
        .map(|&x| lift_h.quotient_map().project(x))
        .collect::<Option<_>>()
        .ok_or(Error::NotIsotropic)?;
    let kh = d1.subgroup_from_elements_unchecked(kh_elems);
    let lift_kh = build_lift(&d1, &kh)?;
    let lift_k = build_lift(d, k)?;
    let d2 = lift_kh.source();
    let d3 = lift_k.source();
    if d2.order() != d3.order() {
        return Ok(false);
    }
    // φ: K⊥/K → (K/H)⊥/(K/H)
    let mut phi = Vec::with_capacity(d3.order());
    for c in d3.elements() {
        let rep = lift_k.quotient_map().section(c);
        let Some(x) = lift_h.quotient_map().project(rep) else {
            return Ok(false);
        };
        let Some(y) = lift_kh.quotient_map().project(x) else {
            return Ok(false);
        };
        phi.push(y);
    }
    let mut hit = vec![false; d2.order()];
    for &y in &phi {
        if std::mem::replace(&mut hit[y], true) {
            return Ok(false);
        }
    }
    let unit = |n: usize, i: usize| -> Vec<i64> {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    for c in d3.elements() {
        let composed = lift_h.lift(&lift_kh.lift(&unit(d2.order(), phi[c])));
        if composed != lift_k.lift(&unit(d3.order(), c)) {
            return Ok(false);
        }
    }
    for g in d.elements() {
        let e = unit(d.order(), g);
        let composed = lift_kh.descend(&lift_h.descend(&e));
        let direct = lift_k.descend(&e);
        let mut mapped = vec![0i64; d2.order()];
        for (c, x) in direct.iter().enumerate() {
            mapped[phi[c]] += x;
        }
        if composed != mapped {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of isotropic subgroups of order `p` inside `γ⊥`.
pub fn count_prime_isotropic_in_perp(d: &DiscriminantForm, g: Elem, p: u64) -> usize {
    let perp = d.orthogonal_complement(&[g]);
    perp.elements
        .iter()
        .filter(|&&m| {
            m != 0 && d.is_isotropic(m) && d.element_order(m) == p && is_canonical_generator(d, m)
        })
        .count()
}
