//! The operator ring `D = K[d_1..d_n]` with the Weyl commutation rule
//! `d_i * a = a * d_i + da/dx_i`, its formal adjoint, and rectangular
//! matrices of operators.
//!
//! Normal form: all coefficients written to the left of the derivative
//! monomials. Two operators are equal iff their term maps are identical.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use smallvec::SmallVec;

use crate::error::{EngineError, Result};
use crate::scalars::{same_ctx, RationalFunction, VarContext};

/// Derivative multi-index over the base variables.
pub type DerivExp = SmallVec<[u32; 8]>;

pub fn deriv_deg(e: &DerivExp) -> u32 {
    e.iter().sum()
}

/// Normal-form differential operator: sum of coefficient * d^mu terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    pub ctx: Arc<VarContext>,
    pub terms: BTreeMap<DerivExp, RationalFunction>,
}

impl DiffOp {
    pub fn zero(ctx: &Arc<VarContext>) -> DiffOp {
        DiffOp {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_deriv(ctx: &Arc<VarContext>) -> DerivExp {
        let mut e = DerivExp::new();
        e.resize(ctx.n(), 0);
        e
    }

    pub fn from_coeff(c: RationalFunction) -> DiffOp {
        let ctx = c.ctx().clone();
        let mut op = DiffOp::zero(&ctx);
        if !c.is_zero() {
            op.terms.insert(DiffOp::zero_deriv(&ctx), c);
        }
        op
    }

    pub fn one(ctx: &Arc<VarContext>) -> DiffOp {
        DiffOp::from_coeff(RationalFunction::one(ctx))
    }

    pub fn from_int(ctx: &Arc<VarContext>, c: i64) -> DiffOp {
        DiffOp::from_coeff(RationalFunction::from_int(ctx, c))
    }

    /// The derivative d_i.
    pub fn d(ctx: &Arc<VarContext>, i: usize) -> DiffOp {
        let mut e = DiffOp::zero_deriv(ctx);
        e[i] += 1;
        DiffOp::monomial(ctx, e)
    }

    /// The derivative monomial d^mu with coefficient 1.
    pub fn monomial(ctx: &Arc<VarContext>, mu: DerivExp) -> DiffOp {
        DiffOp::term(RationalFunction::one(ctx), mu)
    }

    /// A single term a * d^mu.
    pub fn term(coeff: RationalFunction, mu: DerivExp) -> DiffOp {
        let ctx = coeff.ctx().clone();
        let mut op = DiffOp::zero(&ctx);
        if !coeff.is_zero() {
            op.terms.insert(mu, coeff);
        }
        op
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max |mu| over stored terms; None is the zero-operator sentinel
    /// (printed as "-" in reports).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(deriv_deg).max()
    }

    /// True if every coefficient is free of the base variables, so Weyl
    /// commutation produces no correction terms.
    pub fn coeffs_base_constant(&self) -> bool {
        self.terms.values().all(|c| c.is_base_constant())
    }

    fn insert(terms: &mut BTreeMap<DerivExp, RationalFunction>, e: DerivExp, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        debug_assert!(same_ctx(&self.ctx, &other.ctx));
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert(&mut terms, e.clone(), c.clone());
        }
        DiffOp {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    /// Left multiplication by a field element: a * P (coefficients sit on
    /// the left, so this just rescales them).
    pub fn scale(&self, a: &RationalFunction) -> DiffOp {
        if a.is_zero() {
            return DiffOp::zero(&self.ctx);
        }
        DiffOp {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// d_i * P, normalized with the Weyl rule.
    fn d_times(&self, i: usize) -> DiffOp {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[i] += 1;
            Self::insert(&mut terms, e2, c.clone());
            let dc = c.derivative(i).expect("base variable");
            Self::insert(&mut terms, e.clone(), dc);
        }
        DiffOp {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// d^mu * P.
    pub fn monomial_times(&self, mu: &DerivExp) -> DiffOp {
        if self.coeffs_base_constant() {
            // pure exponent shift
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let mut e2 = e.clone();
                for (x, y) in e2.iter_mut().zip(mu.iter()) {
                    *x += *y;
                }
                terms.insert(e2, c.clone());
            }
            return DiffOp {
                ctx: self.ctx.clone(),
                terms,
            };
        }
        let mut acc = self.clone();
        for (i, &k) in mu.iter().enumerate() {
            for _ in 0..k {
                acc = acc.d_times(i);
            }
        }
        acc
    }

    /// Ring product P * Q in normal form.
    pub fn mul(&self, other: &DiffOp) -> DiffOp {
        debug_assert!(same_ctx(&self.ctx, &other.ctx));
        let mut out = DiffOp::zero(&self.ctx);
        for (mu, a) in &self.terms {
            let shifted = other.monomial_times(mu);
            out = out.add(&shifted.scale(a));
        }
        out
    }

    /// Formal adjoint: ad(a * d^mu) = (-1)^|mu| d^mu * a, normalized.
    pub fn adjoint(&self) -> DiffOp {
        let mut out = DiffOp::zero(&self.ctx);
        for (mu, a) in &self.terms {
            let base = DiffOp::from_coeff(a.clone()).monomial_times(mu);
            let signed = if deriv_deg(mu) % 2 == 1 {
                base.neg()
            } else {
                base
            };
            out = out.add(&signed);
        }
        out
    }

    /// The action of the operator on a field element.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut out = RationalFunction::zero(&self.ctx);
        for (mu, a) in &self.terms {
            let mut g = f.clone();
            for (i, &k) in mu.iter().enumerate() {
                for _ in 0..k {
                    g = g.derivative(i).expect("base variable");
                }
            }
            out = out.add(&a.mul(&g));
        }
        out
    }

    /// Specialize a parameter to a rational value in every coefficient.
    pub fn specialize(&self, idx: usize, value: &BigRational) -> Result<DiffOp> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            Self::insert(&mut terms, e.clone(), c.specialize(idx, value)?);
        }
        Ok(DiffOp {
            ctx: self.ctx.clone(),
            terms,
        })
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest order first, deterministic
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| {
            deriv_deg(b).cmp(&deriv_deg(a)).then_with(|| a.cmp(b))
        });
        let mut first = true;
        for (mu, c) in items {
            let (sign_neg, mag) = match c.as_constant() {
                Some(q) if q.is_negative() => (true, RationalFunction::constant(c.ctx(), q.abs())),
                _ => (false, c.clone()),
            };
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign_neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_id = mu.iter().all(|&x| x == 0);
            let coeff_is_one = mag.is_one();
            if !coeff_is_one || is_id {
                let simple = mag.den.is_one() && mag.num.terms.len() <= 1;
                if simple {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
                if !is_id {
                    write!(f, "*")?;
                }
            }
            if !is_id {
                write!(f, "d[")?;
                let mut firstv = true;
                for (i, &k) in mu.iter().enumerate() {
                    for _ in 0..k {
                        if !firstv {
                            write!(f, ",")?;
                        }
                        firstv = false;
                        write!(f, "{}", self.ctx.base_vars[i])?;
                    }
                }
                write!(f, "]")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Matrices of operators
// ---------------------------------------------------------------------------

/// Rectangular matrix over D; rows = equations, columns = unknowns.
/// Acts on columns: (A xi)_i = sum_k A[i][k] xi^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpMatrix {
    pub ctx: Arc<VarContext>,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<DiffOp>,
}

impl OpMatrix {
    pub fn zero(ctx: &Arc<VarContext>, rows: usize, cols: usize) -> OpMatrix {
        OpMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries: vec![DiffOp::zero(ctx); rows * cols],
        }
    }

    pub fn identity(ctx: &Arc<VarContext>, m: usize) -> OpMatrix {
        let mut a = OpMatrix::zero(ctx, m, m);
        for i in 0..m {
            *a.at_mut(i, i) = DiffOp::one(ctx);
        }
        a
    }

    pub fn from_rows(ctx: &Arc<VarContext>, rows: Vec<Vec<DiffOp>>, cols: usize) -> Result<OpMatrix> {
        let r = rows.len();
        for row in &rows {
            if row.len() != cols {
                return Err(EngineError::DimensionMismatch(format!(
                    "row length {} != {}",
                    row.len(),
                    cols
                )));
            }
        }
        Ok(OpMatrix {
            ctx: ctx.clone(),
            rows: r,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> &DiffOp {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut DiffOp {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[DiffOp] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<DiffOp> {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[DiffOp]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Max entry order, None if all entries are zero.
    pub fn order(&self) -> Option<u32> {
        self.entries.iter().filter_map(|e| e.order()).max()
    }

    /// Matrix composition A o B (requires cols(A) = rows(B)).
    pub fn compose(&self, other: &OpMatrix) -> Result<OpMatrix> {
        if self.cols != other.rows {
            return Err(EngineError::DimensionMismatch(format!(
                "compose: cols {} != rows {}",
                self.cols, other.rows
            )));
        }
        let mut out = OpMatrix::zero(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = DiffOp::zero(&self.ctx);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Formal adjoint of the matrix: transpose + entrywise adjoint.
    pub fn adjoint(&self) -> OpMatrix {
        let mut out = OpMatrix::zero(&self.ctx, self.cols, self.rows);
        for i in 0..self.cols {
            for j in 0..self.rows {
                *out.at_mut(i, j) = self.at(j, i).adjoint();
            }
        }
        out
    }

    /// A'[i][j] = row_weights[i] * A[i][j] * col_weights[j], all weights
    /// nonzero rationals.
    pub fn weight_rescale(
        &self,
        row_weights: &[BigRational],
        col_weights: &[BigRational],
    ) -> Result<OpMatrix> {
        if row_weights.len() != self.rows || col_weights.len() != self.cols {
            return Err(EngineError::DimensionMismatch(
                "weight list length".into(),
            ));
        }
        if row_weights.iter().chain(col_weights.iter()).any(|w| w.is_zero()) {
            return Err(EngineError::ZeroWeight);
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let w = RationalFunction::constant(
                    &self.ctx,
                    &row_weights[i] * &col_weights[j],
                );
                *out.at_mut(i, j) = self.at(i, j).scale(&w);
            }
        }
        Ok(out)
    }

    pub fn specialize(&self, idx: usize, value: &BigRational) -> Result<OpMatrix> {
        let mut out = OpMatrix::zero(&self.ctx, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(i, j) = self.at(i, j).specialize(idx, value)?;
            }
        }
        Ok(out)
    }

    /// Stack the rows of two matrices with equal column count.
    pub fn vstack(&self, other: &OpMatrix) -> Result<OpMatrix> {
        if self.cols != other.cols {
            return Err(EngineError::DimensionMismatch("vstack".into()));
        }
        let mut rows: Vec<Vec<DiffOp>> = self.rows_iter().map(|r| r.to_vec()).collect();
        rows.extend(other.rows_iter().map(|r| r.to_vec()));
        OpMatrix::from_rows(&self.ctx, rows, self.cols)
    }
}

impl fmt::Display for OpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[ ")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Multiply a row vector of operators by a matrix: (L * A)_j = sum_i L_i * A[i][j].
pub fn row_times_matrix(row: &[DiffOp], a: &OpMatrix) -> Result<Vec<DiffOp>> {
    if row.len() != a.rows {
        return Err(EngineError::DimensionMismatch(format!(
            "row length {} != rows {}",
            row.len(),
            a.rows
        )));
    }
    let mut out = vec![DiffOp::zero(&a.ctx); a.cols];
    for j in 0..a.cols {
        let mut acc = DiffOp::zero(&a.ctx);
        for i in 0..a.rows {
            acc = acc.add(&row[i].mul(a.at(i, j)));
        }
        out[j] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::scalars::Poly;
    use num_bigint::BigInt;

    fn ctx2() -> Arc<VarContext> {
        VarContext::new(vec!["x1", "x2"], vec!["c"]).unwrap()
    }

    fn x1(ctx: &Arc<VarContext>) -> RationalFunction {
        RationalFunction::var(ctx, 0)
    }

    fn x2(ctx: &Arc<VarContext>) -> RationalFunction {
        RationalFunction::var(ctx, 1)
    }

    #[test]
    fn weyl_commutator() {
        let ctx = ctx2();
        // d1 * x1 = x1*d1 + 1
        let d1 = DiffOp::d(&ctx, 0);
        let lhs = d1.mul(&DiffOp::from_coeff(x1(&ctx)));
        let expect = DiffOp::from_coeff(x1(&ctx))
            .mul(&d1)
            .add(&DiffOp::one(&ctx));
        assert_eq!(lhs, expect);
        // d1 * c = c * d1 for a parameter c
        let c = RationalFunction::var(&ctx, 2);
        let lhs = d1.mul(&DiffOp::from_coeff(c.clone()));
        let rhs = DiffOp::from_coeff(c).mul(&d1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derived_commutator_identity() {
        // d2*x2*d1 - x2*d1*d2 = d1
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let x2op = DiffOp::from_coeff(x2(&ctx));
        let lhs = d2.mul(&x2op).mul(&d1).sub(&x2op.mul(&d1).mul(&d2));
        assert_eq!(lhs, d1);
    }

    #[test]
    fn mul_examples() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        assert_eq!(d1.mul(&d2), d2.mul(&d1));
        // d1 * x1^2 = x1^2 d1 + 2 x1
        let x1sq = x1(&ctx).mul(&x1(&ctx));
        let lhs = d1.mul(&DiffOp::from_coeff(x1sq.clone()));
        let expect = DiffOp::from_coeff(x1sq)
            .mul(&d1)
            .add(&DiffOp::from_coeff(x1(&ctx).add(&x1(&ctx))));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn adjoint_basics() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        assert_eq!(d1.adjoint(), d1.neg());
        assert_eq!(d1.mul(&d2).adjoint(), d1.mul(&d2));
        // first-order with variable coefficient: ad(a d1) = -a d1 - da/dx1
        let a = x1(&ctx).mul(&x1(&ctx));
        let p = DiffOp::from_coeff(a.clone()).mul(&d1);
        let expect = DiffOp::from_coeff(a.clone())
            .mul(&d1)
            .neg()
            .sub(&DiffOp::from_coeff(a.derivative(0).unwrap()));
        assert_eq!(p.adjoint(), expect);
    }

    #[test]
    fn adjoint_involution_and_antihom() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let p = DiffOp::from_coeff(x2(&ctx)).mul(&d1).add(&d2.mul(&d2));
        let q = DiffOp::from_coeff(x1(&ctx)).mul(&d2).add(&DiffOp::one(&ctx));
        assert_eq!(p.adjoint().adjoint(), p);
        assert_eq!(p.mul(&q).adjoint(), q.adjoint().mul(&p.adjoint()));
    }

    #[test]
    fn apply_examples() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let f = x1(&ctx).mul(&x2(&ctx));
        assert_eq!(d1.apply(&f), x2(&ctx));
        let p = DiffOp::from_coeff(x2(&ctx)).mul(&d1).add(&DiffOp::one(&ctx));
        assert_eq!(p.apply(&x1(&ctx)), x2(&ctx).add(&x1(&ctx)));
    }

    #[test]
    fn apply_respects_mul() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let p = DiffOp::from_coeff(x1(&ctx)).mul(&d1).add(&d2);
        let q = d1.mul(&d2).add(&DiffOp::from_coeff(x2(&ctx)));
        let f = x1(&ctx)
            .mul(&x1(&ctx))
            .mul(&x2(&ctx))
            .add(&x2(&ctx).mul(&x2(&ctx)));
        assert_eq!(p.mul(&q).apply(&f), p.apply(&q.apply(&f)));
    }

    #[test]
    fn matrix_adjoint_involution_and_identity() {
        let ctx = ctx2();
        let id = OpMatrix::identity(&ctx, 3);
        assert_eq!(id.adjoint(), id);
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let a = OpMatrix::from_rows(
            &ctx,
            vec![
                vec![d1.clone(), DiffOp::from_coeff(x2(&ctx))],
                vec![d2.mul(&d1), DiffOp::from_coeff(x1(&ctx)).mul(&d2)],
            ],
            2,
        )
        .unwrap();
        assert_eq!(a.adjoint().adjoint(), a);
        let b = OpMatrix::from_rows(
            &ctx,
            vec![
                vec![d2.clone(), DiffOp::one(&ctx)],
                vec![DiffOp::from_coeff(x1(&ctx)), d1.clone()],
            ],
            2,
        )
        .unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.adjoint(), b.adjoint().compose(&a.adjoint()).unwrap());
    }

    #[test]
    fn weight_rescale_roundtrip() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let a = OpMatrix::from_rows(
            &ctx,
            vec![vec![d1.clone(), DiffOp::one(&ctx)]],
            2,
        )
        .unwrap();
        let one = BigRational::one();
        let two = BigRational::from_integer(BigInt::from(2));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let unit = a.weight_rescale(&[one.clone()], &[one.clone(), one.clone()]).unwrap();
        assert_eq!(unit, a);
        let doubled = a.weight_rescale(&[two], &[one.clone(), one.clone()]).unwrap();
        let back = doubled.weight_rescale(&[half], &[one.clone(), one]).unwrap();
        assert_eq!(back, a);
        assert!(matches!(
            a.weight_rescale(&[BigRational::zero()], &[BigRational::one(), BigRational::one()]),
            Err(EngineError::ZeroWeight)
        ));
    }

    #[test]
    fn zero_order_sentinel() {
        let ctx = ctx2();
        assert_eq!(DiffOp::zero(&ctx).order(), None);
        assert_eq!(DiffOp::one(&ctx).order(), Some(0));
        assert_eq!(DiffOp::d(&ctx, 0).order(), Some(1));
        let _ = Poly::one(&ctx);
    }
}
