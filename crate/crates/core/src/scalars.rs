//! The coefficient field `K = Q(params)(x_1..x_n)`: exact multivariate
//! polynomials with arbitrary-precision rational coefficients and normalized
//! fractions thereof.
//!
//! Normal form of a fraction: gcd(num, den) is a unit and the leading
//! coefficient of the denominator under degree-lexicographic order (base
//! variables first, then parameters) is 1. Two fractions are equal as field
//! elements iff their stored representations are identical.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{EngineError, Result};

/// Exponent vector over the full variable list (base variables then params).
pub type Exps = SmallVec<[u32; 8]>;

/// Ordered variable context: differentiation variables and parameters
/// (constants killed by all derivations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarContext {
    pub base_vars: Vec<String>,
    pub params: Vec<String>,
}

impl VarContext {
    pub fn new<S: Into<String>>(
        base_vars: Vec<S>,
        params: Vec<S>,
    ) -> Result<Arc<VarContext>> {
        let base_vars: Vec<String> = base_vars.into_iter().map(Into::into).collect();
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        if base_vars.is_empty() {
            return Err(EngineError::Input("need at least one base variable".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in base_vars.iter().chain(params.iter()) {
            if !seen.insert(v.clone()) {
                return Err(EngineError::Input(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(VarContext { base_vars, params }))
    }

    /// Number of differentiation variables.
    pub fn n(&self) -> usize {
        self.base_vars.len()
    }

    /// Total number of symbols (base variables + parameters).
    pub fn total(&self) -> usize {
        self.base_vars.len() + self.params.len()
    }

    /// Index of a symbol in the combined list, base variables first.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.base_vars.iter().position(|v| v == name) {
            return Some(i);
        }
        self.params
            .iter()
            .position(|v| v == name)
            .map(|i| i + self.base_vars.len())
    }

    pub fn name_of(&self, idx: usize) -> &str {
        if idx < self.base_vars.len() {
            &self.base_vars[idx]
        } else {
            &self.params[idx - self.base_vars.len()]
        }
    }

    pub fn zero_exps(&self) -> Exps {
        let mut e = Exps::new();
        e.resize(self.total(), 0);
        e
    }
}

pub fn same_ctx(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn deg(e: &Exps) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

/// Degree-lexicographic comparison (total degree, ties by exponents from the
/// first variable on). Used for leading-coefficient normalization.
pub fn deglex_cmp(a: &Exps, b: &Exps) -> std::cmp::Ordering {
    deg(a).cmp(&deg(b)).then_with(|| a.cmp(b))
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Multivariate polynomial with exact rational coefficients; no stored term
/// has a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub ctx: Arc<VarContext>,
    pub terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero(ctx: &Arc<VarContext>) -> Poly {
        Poly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: BigRational) -> Poly {
        let mut p = Poly::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(ctx.zero_exps(), c);
        }
        p
    }

    pub fn from_int(ctx: &Arc<VarContext>, c: i64) -> Poly {
        Poly::constant(ctx, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn one(ctx: &Arc<VarContext>) -> Poly {
        Poly::from_int(ctx, 1)
    }

    /// The symbol with combined index `idx`, raised to `pow`.
    pub fn var_pow(ctx: &Arc<VarContext>, idx: usize, pow: u32) -> Poly {
        let mut e = ctx.zero_exps();
        e[idx] = pow;
        let mut p = Poly::zero(ctx);
        if pow == 0 {
            return Poly::one(ctx);
        }
        p.terms.insert(e, BigRational::one());
        p
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> Poly {
        Poly::var_pow(ctx, idx, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one())
    }

    /// Some(c) iff the polynomial is the constant c (including 0).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn insert_term(terms: &mut BTreeMap<Exps, BigRational>, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(same_ctx(&self.ctx, &other.ctx));
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), c.clone());
        }
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(same_ctx(&self.ctx, &other.ctx));
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                for (x, y) in e.iter_mut().zip(eb.iter()) {
                    *x += *y;
                }
                Self::insert_term(&mut terms, e, ca * cb);
            }
        }
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    /// Partial derivative with respect to the symbol with combined index
    /// `idx`. Parameters differentiate to zero like any absent variable.
    pub fn derivative(&self, idx: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] = k - 1;
            Self::insert_term(
                &mut terms,
                e2,
                c * BigRational::from_integer(BigInt::from(k)),
            );
        }
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(deg).max()
    }

    /// Leading term under deglex.
    pub fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| deglex_cmp(a, b))
    }

    /// Replace the symbol `idx` (typically a parameter) by a rational value.
    pub fn specialize(&self, idx: usize, value: &BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[idx];
            let mut e2 = e.clone();
            e2[idx] = 0;
            let mut factor = c.clone();
            for _ in 0..k {
                factor *= value;
            }
            Self::insert_term(&mut terms, e2, factor);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Clear denominators: returns (integer coefficient map, scale) with
    /// self = scale * int_poly.
    fn to_integer(&self) -> (BTreeMap<Exps, BigInt>, BigRational) {
        if self.is_zero() {
            return (BTreeMap::new(), BigRational::one());
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: BTreeMap<Exps, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = c.numer() * (&lcm / c.denom());
            ints.insert(e.clone(), v);
        }
        // pull out integer content too
        let mut content = BigInt::zero();
        for v in ints.values() {
            content = content.gcd(v);
        }
        if !content.is_one() {
            for v in ints.values_mut() {
                *v = &*v / &content;
            }
        }
        let scale = BigRational::new(content, lcm);
        (ints, scale)
    }

    fn from_integer(ctx: &Arc<VarContext>, ints: &BTreeMap<Exps, BigInt>) -> Poly {
        Poly {
            ctx: ctx.clone(),
            terms: ints
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| deglex_cmp(b, a));
        let mut first = true;
        for (e, c) in items {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const_term = e.iter().all(|&x| x == 0);
            if !mag.is_one() || is_const_term {
                write!(f, "{mag}")?;
                if !is_const_term {
                    write!(f, "*")?;
                }
            }
            let mut printed = false;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                printed = true;
                write!(f, "{}", self.ctx.name_of(i))?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Integer multivariate gcd (primitive PRS)
// ---------------------------------------------------------------------------

type IPoly = BTreeMap<Exps, BigInt>;

fn ip_is_zero(p: &IPoly) -> bool {
    p.is_empty()
}

fn ip_is_constant(p: &IPoly) -> bool {
    p.keys().all(|e| e.iter().all(|&x| x == 0))
}

fn ip_content(p: &IPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p.values() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn ip_scale_div(p: &IPoly, d: &BigInt) -> IPoly {
    p.iter().map(|(e, c)| (e.clone(), c / d)).collect()
}

fn ip_mul(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out: IPoly = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = ea.clone();
            for (x, y) in e.iter_mut().zip(eb.iter()) {
                *x += *y;
            }
            let v = ca * cb;
            let entry = out.entry(e).or_insert_with(BigInt::zero);
            *entry += v;
            if entry.is_zero() {
                // cleanup done lazily below
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn ip_sub(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out = a.clone();
    for (e, c) in b {
        let entry = out.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn ip_leading(p: &IPoly) -> Option<(&Exps, &BigInt)> {
    p.iter().max_by(|(a, _), (b, _)| deglex_cmp(a, b))
}

/// Exact multivariate division; None if not divisible.
fn ip_div_exact(a: &IPoly, b: &IPoly) -> Option<IPoly> {
    if ip_is_zero(b) {
        return None;
    }
    if ip_is_zero(a) {
        return Some(BTreeMap::new());
    }
    let (lbe, lbc) = {
        let (e, c) = ip_leading(b).unwrap();
        (e.clone(), c.clone())
    };
    let mut rem = a.clone();
    let mut quot: IPoly = BTreeMap::new();
    while !ip_is_zero(&rem) {
        let (lre, lrc) = {
            let (e, c) = ip_leading(&rem).unwrap();
            (e.clone(), c.clone())
        };
        if lre.iter().zip(lbe.iter()).any(|(x, y)| x < y) {
            return None;
        }
        let (q, r) = lrc.div_rem(&lbc);
        if !r.is_zero() {
            return None;
        }
        let mut qe = lre.clone();
        for (x, y) in qe.iter_mut().zip(lbe.iter()) {
            *x -= *y;
        }
        let mut qterm: IPoly = BTreeMap::new();
        qterm.insert(qe.clone(), q.clone());
        rem = ip_sub(&rem, &ip_mul(&qterm, b));
        quot.insert(qe, q);
    }
    Some(quot)
}

fn ip_deg_in(p: &IPoly, v: usize) -> u32 {
    p.keys().map(|e| e[v]).max().unwrap_or(0)
}

/// Coefficient of v^k in p, as a polynomial with the v-exponent zeroed.
fn ip_coeff_in(p: &IPoly, v: usize, k: u32) -> IPoly {
    p.iter()
        .filter(|(e, _)| e[v] == k)
        .map(|(e, c)| {
            let mut e2 = e.clone();
            e2[v] = 0;
            (e2, c.clone())
        })
        .collect()
}

fn ip_shift_var(p: &IPoly, v: usize, k: u32) -> IPoly {
    p.iter()
        .map(|(e, c)| {
            let mut e2 = e.clone();
            e2[v] += k;
            (e2, c.clone())
        })
        .collect()
}

/// Pseudo-remainder of a by b in variable v.
fn ip_prem(a: &IPoly, b: &IPoly, v: usize) -> IPoly {
    let db = ip_deg_in(b, v);
    let lcb = ip_coeff_in(b, v, db);
    let mut r = a.clone();
    while !ip_is_zero(&r) {
        let dr = ip_deg_in(&r, v);
        if dr < db {
            break;
        }
        let lcr = ip_coeff_in(&r, v, dr);
        // r := lcb*r - lcr * v^(dr-db) * b
        let t = ip_shift_var(&ip_mul(&lcr, b), v, dr - db);
        r = ip_sub(&ip_mul(&lcb, &r), &t);
    }
    r
}

/// Content of p viewed as univariate in v (gcd of its v-coefficients).
fn ip_content_in(p: &IPoly, v: usize) -> IPoly {
    let d = ip_deg_in(p, v);
    let mut g: IPoly = BTreeMap::new();
    for k in 0..=d {
        let c = ip_coeff_in(p, v, k);
        if ip_is_zero(&c) {
            continue;
        }
        g = ip_gcd(&g, &c);
        if ip_is_constant(&g) && g.values().next().map_or(false, |c| c.is_one()) {
            break;
        }
    }
    g
}

fn ip_normalize_sign(mut p: IPoly) -> IPoly {
    if let Some((_, c)) = ip_leading(&p) {
        if c.is_negative() {
            for v in p.values_mut() {
                *v = -&*v;
            }
        }
    }
    p
}

fn ip_primitive(p: &IPoly) -> IPoly {
    if ip_is_zero(p) {
        return p.clone();
    }
    let c = ip_content(p);
    ip_normalize_sign(ip_scale_div(p, &c))
}

fn ip_is_monomial(p: &IPoly) -> bool {
    p.len() == 1
}

fn ip_common_monomial(p: &IPoly) -> Option<Exps> {
    let mut it = p.keys();
    let mut m = it.next()?.clone();
    for e in it {
        for (x, y) in m.iter_mut().zip(e.iter()) {
            *x = (*x).min(*y);
        }
    }
    Some(m)
}

/// gcd of integer multivariate polynomials, primitive with positive leading
/// coefficient.
fn ip_gcd(a: &IPoly, b: &IPoly) -> IPoly {
    if ip_is_zero(a) {
        return ip_primitive(b);
    }
    if ip_is_zero(b) {
        return ip_primitive(a);
    }
    let ca = ip_content(a);
    let cb = ip_content(b);
    let c = ca.gcd(&cb);
    let a = ip_scale_div(a, &ca);
    let b = ip_scale_div(b, &cb);
    let mut one_const: IPoly = BTreeMap::new();
    let nvars = a.keys().next().map(|e| e.len()).unwrap_or(0);
    let mut zero_e = Exps::new();
    zero_e.resize(nvars, 0);
    one_const.insert(zero_e, c.clone());
    if ip_is_constant(&a) || ip_is_constant(&b) {
        return one_const;
    }
    // monomial fast path
    if ip_is_monomial(&a) || ip_is_monomial(&b) {
        let ma = ip_common_monomial(&a).unwrap();
        let mb = ip_common_monomial(&b).unwrap();
        let mut m = ma;
        for (x, y) in m.iter_mut().zip(mb.iter()) {
            *x = (*x).min(*y);
        }
        let mut g: IPoly = BTreeMap::new();
        g.insert(m, c);
        return g;
    }
    // main variable: the highest-index variable occurring in both if any,
    // otherwise the highest occurring in either
    let occurs = |p: &IPoly, v: usize| p.keys().any(|e| e[v] > 0);
    let mut main = None;
    for v in (0..nvars).rev() {
        if occurs(&a, v) && occurs(&b, v) {
            main = Some(v);
            break;
        }
    }
    let main = match main {
        Some(v) => v,
        None => {
            // no common variable: gcd of primitive parts is a constant
            return one_const;
        }
    };
    let cont_a = ip_content_in(&a, main);
    let cont_b = ip_content_in(&b, main);
    let gc = ip_gcd(&cont_a, &cont_b);
    let pa = ip_div_exact(&a, &cont_a).expect("content divides");
    let pb = ip_div_exact(&b, &cont_b).expect("content divides");
    let (mut r0, mut r1) = if ip_deg_in(&pa, main) >= ip_deg_in(&pb, main) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r2 = ip_prem(&r0, &r1, main);
        if ip_is_zero(&r2) {
            break;
        }
        if ip_deg_in(&r2, main) == 0 {
            // gcd of the primitive parts is free of the main variable, hence
            // trivial (both are primitive in main); total gcd is c * gc
            let mut res = gc.clone();
            for v in res.values_mut() {
                *v = &*v * &c;
            }
            return ip_normalize_sign(res);
        }
        let cont = ip_content_in(&r2, main);
        r0 = r1;
        r1 = ip_div_exact(&r2, &cont).expect("content divides");
    }
    // r1 divides both primitive parts (up to content in main)
    let cont1 = ip_content_in(&r1, main);
    let pp1 = ip_div_exact(&r1, &cont1).expect("content divides");
    let mut g = ip_mul(&gc, &ip_primitive(&pp1));
    for v in g.values_mut() {
        *v = &*v * &c;
    }
    ip_normalize_sign(g)
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// Normalized fraction of polynomials: gcd-reduced, denominator monic under
/// deglex. Field element of `K = Q(params)(x_1..x_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        debug_assert!(same_ctx(&num.ctx, &den.ctx));
        let ctx = num.ctx.clone();
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Poly::one(&ctx),
            });
        }
        // fast path: constant denominator
        if let Some(dc) = den.as_constant() {
            let inv = BigRational::one() / dc;
            return Ok(RationalFunction {
                num: num.scale(&inv),
                den: Poly::one(&ctx),
            });
        }
        let (ni, ns) = num.to_integer();
        let (di, ds) = den.to_integer();
        let g = ip_gcd(&ni, &di);
        let (nr, dr) = if ip_is_constant(&g) {
            (ni, di)
        } else {
            (
                ip_div_exact(&ni, &g).expect("gcd divides"),
                ip_div_exact(&di, &g).expect("gcd divides"),
            )
        };
        let mut num = Poly::from_integer(&ctx, &nr).scale(&(ns / &ds * BigRational::one()));
        let mut den = Poly::from_integer(&ctx, &dr);
        // make the denominator monic under deglex
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if let Some(dc) = den.as_constant() {
            debug_assert!(dc.is_one());
            den = Poly::one(&ctx);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let one = Poly::one(&p.ctx);
        RationalFunction { num: p, den: one }
    }

    pub fn zero(ctx: &Arc<VarContext>) -> RationalFunction {
        RationalFunction::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &Arc<VarContext>) -> RationalFunction {
        RationalFunction::from_poly(Poly::one(ctx))
    }

    pub fn constant(ctx: &Arc<VarContext>, c: BigRational) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(ctx, c))
    }

    pub fn from_int(ctx: &Arc<VarContext>, c: i64) -> RationalFunction {
        RationalFunction::from_poly(Poly::from_int(ctx, c))
    }

    pub fn var(ctx: &Arc<VarContext>, idx: usize) -> RationalFunction {
        RationalFunction::from_poly(Poly::var(ctx, idx))
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.num.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// True if no differentiation variable occurs (constants and parameters
    /// only), so all derivations kill the value.
    pub fn is_base_constant(&self) -> bool {
        let n = self.ctx().n();
        self.num
            .terms
            .keys()
            .chain(self.den.terms.keys())
            .all(|e| e[..n].iter().all(|&x| x == 0))
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if let (Some(a), Some(b)) = (self.as_constant(), other.as_constant()) {
            return RationalFunction::constant(self.ctx(), a + b);
        }
        if self.den == other.den {
            return RationalFunction::new(self.num.add(&other.num), self.den.clone())
                .expect("den nonzero");
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFunction::new(num, den).expect("den nonzero")
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        if let (Some(a), Some(b)) = (self.as_constant(), other.as_constant()) {
            return RationalFunction::constant(self.ctx(), a * b);
        }
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("den nonzero")
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        if let (Some(a), Some(b)) = (self.as_constant(), other.as_constant()) {
            return Ok(RationalFunction::constant(self.ctx(), a / b));
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        RationalFunction::one(self.ctx()).div(self)
    }

    /// Exact partial derivative (quotient rule) by the base variable `idx`.
    pub fn derivative(&self, idx: usize) -> Result<RationalFunction> {
        if idx >= self.ctx().n() {
            return Err(EngineError::UnknownVariable(
                self.ctx().name_of(idx).to_string(),
            ));
        }
        if self.is_base_constant() {
            return Ok(RationalFunction::zero(self.ctx()));
        }
        let num = self
            .num
            .derivative(idx)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(idx)));
        let den = self.den.mul(&self.den);
        RationalFunction::new(num, den)
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<RationalFunction> {
        let idx = self
            .ctx()
            .index_of(name)
            .filter(|&i| i < self.ctx().n())
            .ok_or_else(|| EngineError::UnknownVariable(name.to_string()))?;
        self.derivative(idx)
    }

    pub fn specialize(&self, idx: usize, value: &BigRational) -> Result<RationalFunction> {
        RationalFunction::new(
            self.num.specialize(idx, value),
            self.den.specialize(idx, value),
        )
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<VarContext> {
        VarContext::new(vec!["x1", "x2"], vec!["g", "l1", "l2"]).unwrap()
    }

    fn x(ctx: &Arc<VarContext>, name: &str) -> RationalFunction {
        RationalFunction::var(ctx, ctx.index_of(name).unwrap())
    }

    #[test]
    fn common_denominator_add() {
        let ctx = VarContext::new(vec!["x"], vec![]).unwrap();
        let x2 = RationalFunction::from_poly(Poly::var_pow(&ctx, 0, 2));
        let inv = x2.inv().unwrap();
        let sum = x2.add(&inv);
        // (x^4 + 1)/x^2
        let x4 = Poly::var_pow(&ctx, 0, 4).add(&Poly::one(&ctx));
        let expect = RationalFunction::new(x4, Poly::var_pow(&ctx, 0, 2)).unwrap();
        assert_eq!(sum, expect);
    }

    #[test]
    fn gcd_cancellation_on_construction() {
        let ctx = VarContext::new(vec!["x"], vec![]).unwrap();
        let x = Poly::var(&ctx, 0);
        let num = x.sub(&Poly::one(&ctx)); // x - 1
        let den = x.mul(&x).sub(&Poly::one(&ctx)); // x^2 - 1
        let r = RationalFunction::new(num, den).unwrap();
        let expect =
            RationalFunction::new(Poly::one(&ctx), x.add(&Poly::one(&ctx))).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn generic_parameters_are_independent() {
        let ctx = ctx2();
        let l1 = x(&ctx, "l1");
        let l2 = x(&ctx, "l2");
        assert!(!l1.sub(&l2).is_zero());
    }

    #[test]
    fn derivative_examples() {
        let ctx = ctx2();
        let xv = x(&ctx, "x1");
        let x_sq = xv.mul(&xv);
        let two_x = xv.add(&xv);
        assert_eq!(x_sq.derivative(0).unwrap(), two_x);
        // parameters are constants
        let gl = x(&ctx, "g").mul(&x(&ctx, "l1"));
        assert!(gl.derivative(0).unwrap().is_zero());
        // quotient rule: d/dx (1/x) = -1/x^2
        let inv = xv.inv().unwrap();
        let d = inv.derivative(0).unwrap();
        let expect = RationalFunction::from_int(&ctx, -1)
            .div(&x_sq)
            .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn is_zero_by_normal_form() {
        let ctx = ctx2();
        let xv = x(&ctx, "x1");
        let one = RationalFunction::one(&ctx);
        let lhs = xv.add(&one).mul(&xv.sub(&one));
        let rhs = xv.mul(&xv).sub(&one);
        assert!(lhs.sub(&rhs).is_zero());
        assert!(!x(&ctx, "l1").sub(&x(&ctx, "l2")).is_zero());
        assert!(RationalFunction::zero(&ctx).is_zero());
    }

    #[test]
    fn unknown_variable_error() {
        let ctx = ctx2();
        let v = x(&ctx, "x1");
        assert!(matches!(
            v.derivative_by_name("g"),
            Err(EngineError::UnknownVariable(_))
        ));
    }

    #[test]
    fn multivariate_gcd_reduction() {
        // (x^2 - y^2)/(x + y) -> x - y
        let ctx = VarContext::new(vec!["x", "y"], vec![]).unwrap();
        let xv = Poly::var(&ctx, 0);
        let yv = Poly::var(&ctx, 1);
        let num = xv.mul(&xv).sub(&yv.mul(&yv));
        let den = xv.add(&yv);
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r, RationalFunction::from_poly(xv.sub(&yv)));
    }

    #[test]
    fn canonical_form_is_unique() {
        // same fraction reached along two routes has identical representation
        let ctx = ctx2();
        let a = x(&ctx, "x1").add(&x(&ctx, "x2"));
        let b = x(&ctx, "x1").sub(&x(&ctx, "x2"));
        let r1 = a.div(&b).unwrap();
        let r2 = a.mul(&a).div(&a.mul(&b)).unwrap();
        assert_eq!(r1, r2);
    }
}
