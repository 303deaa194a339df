//! Left Groebner bases for finitely generated submodules of free modules
//! `D^(1xm)` over the operator ring, with reduction, membership (optionally
//! with cofactors) and module-equality decisions.
//!
//! Leading terms are taken in the associated graded (commutative) ring, so
//! S-vector theory applies verbatim to the Weyl relation; the Buchberger
//! product criterion is not used (it is not valid for modules), only the
//! chain criterion.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{EngineError, Result};
use crate::ops::{deriv_deg, DerivExp, DiffOp, OpMatrix};
use crate::scalars::{RationalFunction, VarContext};

/// Caps on basis size and total derivative degree; exceeding raises a clean
/// error instead of hanging.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_degree: u32,
    pub max_basis: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 12,
            max_basis: 10_000,
        }
    }
}

impl Budget {
    pub fn with_degree(max_degree: u32) -> Budget {
        Budget {
            max_degree,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    /// term-over-position: degrevlex on derivative exponents first
    Top,
    /// position-over-term
    Pot,
}

/// Module term order on monomials `e_pos * d^mu`, compatible with left
/// multiplication by derivative monomials. An optional elimination split
/// makes every monomial in positions `< split` larger than any in positions
/// `>= split` (used for syzygy computations).
#[derive(Debug, Clone)]
pub struct ModTermOrder {
    pub kind: OrderKind,
    pub elim_split: Option<usize>,
}

impl ModTermOrder {
    pub fn top() -> ModTermOrder {
        ModTermOrder {
            kind: OrderKind::Top,
            elim_split: None,
        }
    }

    pub fn pot() -> ModTermOrder {
        ModTermOrder {
            kind: OrderKind::Pot,
            elim_split: None,
        }
    }

    pub fn elim(split: usize) -> ModTermOrder {
        ModTermOrder {
            kind: OrderKind::Top,
            elim_split: Some(split),
        }
    }

    /// Greater = larger monomial.
    pub fn cmp(&self, a: (usize, &DerivExp), b: (usize, &DerivExp)) -> Ordering {
        if let Some(split) = self.elim_split {
            let ba = (a.0 >= split) as u8;
            let bb = (b.0 >= split) as u8;
            // block 0 (positions below split) is infinitely larger
            match bb.cmp(&ba) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match self.kind {
            OrderKind::Top => degrevlex(a.1, b.1).then_with(|| b.0.cmp(&a.0)),
            OrderKind::Pot => b.0.cmp(&a.0).then_with(|| degrevlex(a.1, b.1)),
        }
    }
}

/// Degree-reverse-lexicographic order on derivative exponents.
pub fn degrevlex(a: &DerivExp, b: &DerivExp) -> Ordering {
    match deriv_deg(a).cmp(&deriv_deg(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable = larger
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

pub type Row = Vec<DiffOp>;

#[derive(Debug, Clone)]
pub struct Lead {
    pub pos: usize,
    pub mu: DerivExp,
    pub coeff: RationalFunction,
}

pub fn row_is_zero(row: &[DiffOp]) -> bool {
    row.iter().all(|e| e.is_zero())
}

pub fn row_order(row: &[DiffOp]) -> Option<u32> {
    row.iter().filter_map(|e| e.order()).max()
}

pub fn row_sub(a: &[DiffOp], b: &[DiffOp]) -> Row {
    a.iter().zip(b.iter()).map(|(x, y)| x.sub(y)).collect()
}

pub fn row_scale(a: &[DiffOp], c: &RationalFunction) -> Row {
    a.iter().map(|x| x.scale(c)).collect()
}

/// Left multiplication of a whole row by d^mu.
pub fn row_mul_monomial(a: &[DiffOp], mu: &DerivExp) -> Row {
    a.iter().map(|x| x.monomial_times(mu)).collect()
}

/// Left multiplication of a row by an arbitrary scalar operator.
pub fn row_mul_op(p: &DiffOp, a: &[DiffOp]) -> Row {
    a.iter().map(|x| p.mul(x)).collect()
}

/// Leading term of a row under the order; None for the zero row.
pub fn leading_term(row: &[DiffOp], order: &ModTermOrder) -> Option<Lead> {
    let mut best: Option<Lead> = None;
    for (pos, entry) in row.iter().enumerate() {
        for (mu, c) in &entry.terms {
            let better = match &best {
                None => true,
                Some(l) => order.cmp((pos, mu), (l.pos, &l.mu)) == Ordering::Greater,
            };
            if better {
                best = Some(Lead {
                    pos,
                    mu: mu.clone(),
                    coeff: c.clone(),
                });
            }
        }
    }
    best
}

fn divides(a: &DerivExp, b: &DerivExp) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

fn exp_sub(a: &DerivExp, b: &DerivExp) -> DerivExp {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

fn exp_lcm(a: &DerivExp, b: &DerivExp) -> DerivExp {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

#[derive(Debug, Clone)]
struct BasisElem {
    row: Row,
    lead: Lead,
    /// expression of this element over the input generators, when tracked
    expr: Option<Row>,
}

/// A left Groebner basis of a submodule of D^(1xm).
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub ctx: Arc<VarContext>,
    pub cols: usize,
    pub order: ModTermOrder,
    pub gens: Vec<Row>,
    pub leads: Vec<Lead>,
    /// cofactor log: gens[k] = sum_i exprs[k][i] * input[i]
    pub exprs: Option<Vec<Row>>,
}

pub enum Membership {
    /// member; cofactors L with v = sum L_i * input_i when tracked
    Yes(Option<Row>),
    /// not a member; carries the normal form
    No(Row),
}

/// Full normal form of `v` modulo the basis elements. When `track` is set it
/// receives, per basis element, the accumulated left cofactor.
fn reduce_row(
    v: &Row,
    basis: &[BasisElem],
    order: &ModTermOrder,
    mut track: Option<&mut Vec<DiffOp>>,
) -> Row {
    let mut v = v.clone();
    loop {
        // largest reducible term of v
        let mut target: Option<(usize, DerivExp, RationalFunction, usize)> = None;
        for (pos, entry) in v.iter().enumerate() {
            for (mu, c) in &entry.terms {
                let Some(gi) = basis.iter().position(|g| {
                    g.lead.pos == pos && divides(&g.lead.mu, mu)
                }) else {
                    continue;
                };
                let better = match &target {
                    None => true,
                    Some((tp, tmu, _, _)) => {
                        order.cmp((pos, mu), (*tp, tmu)) == Ordering::Greater
                    }
                };
                if better {
                    target = Some((pos, mu.clone(), c.clone(), gi));
                }
            }
        }
        let Some((_pos, mu, c, gi)) = target else {
            return v;
        };
        let g = &basis[gi];
        let delta = exp_sub(&mu, &g.lead.mu);
        let shifted = row_mul_monomial(&g.row, &delta);
        // leading coefficient survives the shift (graded part commutes)
        let u = c.div(&g.lead.coeff).expect("leading coeff nonzero");
        v = row_sub(&v, &row_scale(&shifted, &u));
        if let Some(tr) = track.as_deref_mut() {
            let m = DiffOp::term(u, delta);
            tr[gi] = tr[gi].add(&m);
        }
    }
}

fn normalize_elem(mut row: Row, order: &ModTermOrder) -> Option<(Row, Lead)> {
    let lead = leading_term(&row, order)?;
    let inv = lead.coeff.inv().expect("nonzero");
    if !lead.coeff.is_one() {
        row = row_scale(&row, &inv);
    }
    let lead = Lead {
        coeff: RationalFunction::one(lead.coeff.ctx()),
        ..lead
    };
    Some((row, lead))
}

/// Buchberger's algorithm for the left submodule generated by `gens`.
pub fn buchberger(
    gens: &[Row],
    order: &ModTermOrder,
    budget: &Budget,
    track: bool,
) -> Result<GroebnerBasis> {
    let ctx = gens
        .iter()
        .flat_map(|r| r.iter())
        .map(|e| e.ctx.clone())
        .next()
        .ok_or_else(|| EngineError::Input("empty generator list".into()))?;
    let cols = gens[0].len();
    for g in gens {
        if g.len() != cols {
            return Err(EngineError::DimensionMismatch("generator row length".into()));
        }
    }
    let n_inputs = gens.len();
    let unit_expr = |i: usize| -> Row {
        let mut e = vec![DiffOp::zero(&ctx); n_inputs];
        e[i] = DiffOp::one(&ctx);
        e
    };

    let mut basis: Vec<BasisElem> = Vec::new();
    // (lcm degree, lcm, i, j) for deterministic normal-strategy selection
    let mut queue: BTreeSet<(u32, DerivExp, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push_elem = |basis: &mut Vec<BasisElem>,
                         queue: &mut BTreeSet<(u32, DerivExp, usize, usize)>,
                         row: Row,
                         expr: Option<Row>|
     -> Result<()> {
        let Some((row, lead)) = normalize_elem(row, order) else {
            return Ok(());
        };
        if deriv_deg(&lead.mu) > budget.max_degree {
            return Err(EngineError::ResourceBudgetExceeded(format!(
                "leading degree {} exceeds cap {}",
                deriv_deg(&lead.mu),
                budget.max_degree
            )));
        }
        if basis.len() + 1 > budget.max_basis {
            return Err(EngineError::ResourceBudgetExceeded(format!(
                "basis size cap {} reached",
                budget.max_basis
            )));
        }
        let idx = basis.len();
        for (k, other) in basis.iter().enumerate() {
            if other.lead.pos == lead.pos {
                let lcm = exp_lcm(&other.lead.mu, &lead.mu);
                queue.insert((deriv_deg(&lcm), lcm, k, idx));
            }
        }
        basis.push(BasisElem { row, lead, expr });
        Ok(())
    };

    for (i, g) in gens.iter().enumerate() {
        if row_is_zero(g) {
            continue;
        }
        // scale expression along with the generator
        let lead = leading_term(g, order).expect("nonzero");
        let inv = lead.coeff.inv().expect("nonzero");
        let expr = track.then(|| row_scale(&unit_expr(i), &inv));
        push_elem(&mut basis, &mut queue, g.clone(), expr)?;
    }

    while let Some(item) = queue.iter().next().cloned() {
        queue.remove(&item);
        let (_, lcm, i, j) = item;
        done.insert((i, j));
        // chain criterion
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            if g.lead.pos == basis[i].lead.pos && divides(&g.lead.mu, &lcm) {
                let a = (k.min(i), k.max(i));
                let b = (k.min(j), k.max(j));
                if done.contains(&a) && done.contains(&b) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        let (gi, gj) = (&basis[i], &basis[j]);
        let di = exp_sub(&lcm, &gi.lead.mu);
        let dj = exp_sub(&lcm, &gj.lead.mu);
        // both leading coefficients are 1 after normalization
        let si = row_mul_monomial(&gi.row, &di);
        let sj = row_mul_monomial(&gj.row, &dj);
        let s = row_sub(&si, &sj);
        let mut cof = track.then(|| vec![DiffOp::zero(&ctx); basis.len()]);
        let nf = reduce_row(&s, &basis, order, cof.as_mut());
        if row_is_zero(&nf) {
            continue;
        }
        let expr = if track {
            // nf = s - sum cof_k * basis_k ; s = d^di*g_i - d^dj*g_j
            let mut e = vec![DiffOp::zero(&ctx); n_inputs];
            let acc_from = |e: &mut Row, factor: &DiffOp, src: &Row| {
                for (t, s) in e.iter_mut().zip(src.iter()) {
                    *t = t.add(&factor.mul(s));
                }
            };
            let mi = DiffOp::monomial(&ctx, di.clone());
            let mj = DiffOp::monomial(&ctx, dj.clone());
            acc_from(&mut e, &mi, gi.expr.as_ref().unwrap());
            let mut neg = vec![DiffOp::zero(&ctx); n_inputs];
            acc_from(&mut neg, &mj, gj.expr.as_ref().unwrap());
            for (t, s) in e.iter_mut().zip(neg.iter()) {
                *t = t.sub(s);
            }
            for (k, c) in cof.as_ref().unwrap().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut sub = vec![DiffOp::zero(&ctx); n_inputs];
                acc_from(&mut sub, c, basis[k].expr.as_ref().unwrap());
                for (t, s) in e.iter_mut().zip(sub.iter()) {
                    *t = t.sub(s);
                }
            }
            // normalization scaling applied below
            Some(e)
        } else {
            None
        };
        let lead = leading_term(&nf, order).expect("nonzero");
        let scale = lead.coeff.inv().expect("nonzero");
        let expr = expr.map(|e| row_scale(&e, &scale));
        push_elem(&mut basis, &mut queue, nf, None)?;
        if let Some(last) = basis.last_mut() {
            last.expr = expr;
        }
    }

    // inter-reduction: drop elements whose leading monomial is divisible by
    // another's, then tail-reduce the survivors
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (li, lj) = (&basis[i].lead, &basis[j].lead);
            if li.pos == lj.pos && divides(&lj.mu, &li.mu) && !(lj.mu == li.mu && j > i) {
                keep[i] = false;
                break;
            }
        }
    }
    let kept: Vec<BasisElem> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect();
    let mut final_elems: Vec<BasisElem> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<BasisElem> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect();
        let mut cof = track.then(|| vec![DiffOp::zero(&ctx); others.len()]);
        let nf = reduce_row(&kept[i].row, &others, order, cof.as_mut());
        debug_assert!(!row_is_zero(&nf));
        let expr = if track {
            let mut e = kept[i].expr.clone().unwrap();
            for (k, c) in cof.as_ref().unwrap().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let oe = others[k].expr.as_ref().unwrap();
                for (t, s) in e.iter_mut().zip(oe.iter()) {
                    *t = t.sub(&c.mul(s));
                }
            }
            Some(e)
        } else {
            None
        };
        // tail reduction preserves the leading term, so no rescale is needed
        let (row, lead) = normalize_elem(nf, order).expect("nonzero");
        final_elems.push(BasisElem { row, lead, expr });
    }
    // deterministic output order: by leading monomial, ascending
    let ord = order.clone();
    final_elems.sort_by(|a, b| ord.cmp((a.lead.pos, &a.lead.mu), (b.lead.pos, &b.lead.mu)));

    Ok(GroebnerBasis {
        ctx,
        cols,
        order: ord,
        leads: final_elems.iter().map(|b| b.lead.clone()).collect(),
        exprs: track.then(|| {
            final_elems
                .iter()
                .map(|b| b.expr.clone().unwrap())
                .collect()
        }),
        gens: final_elems.into_iter().map(|b| b.row).collect(),
    })
}

impl GroebnerBasis {
    fn elems(&self) -> Vec<BasisElem> {
        self.gens
            .iter()
            .zip(self.leads.iter())
            .map(|(r, l)| BasisElem {
                row: r.clone(),
                lead: l.clone(),
                expr: None,
            })
            .collect()
    }

    /// Normal form of v modulo the module generated by this basis; zero iff
    /// v is a member.
    pub fn reduce(&self, v: &Row) -> Row {
        reduce_row(v, &self.elems(), &self.order, None)
    }

    /// Membership test; cofactors over the ORIGINAL input generators are
    /// returned when the basis was built with tracking.
    pub fn member(&self, v: &Row) -> Membership {
        let elems = self.elems();
        let mut cof = vec![DiffOp::zero(&self.ctx); elems.len()];
        let nf = reduce_row(v, &elems, &self.order, Some(&mut cof));
        if !row_is_zero(&nf) {
            return Membership::No(nf);
        }
        let Some(exprs) = &self.exprs else {
            return Membership::Yes(None);
        };
        let n_inputs = exprs.first().map_or(0, |e| e.len());
        let mut l = vec![DiffOp::zero(&self.ctx); n_inputs];
        for (k, c) in cof.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, s) in l.iter_mut().zip(exprs[k].iter()) {
                *t = t.add(&c.mul(s));
            }
        }
        Membership::Yes(Some(l))
    }

    pub fn contains_row(&self, v: &Row) -> bool {
        row_is_zero(&self.reduce(v))
    }
}

/// True iff every row of `a` lies in the row module of `b`.
pub fn submodule(a: &OpMatrix, b: &OpMatrix, budget: &Budget) -> Result<bool> {
    if a.cols != b.cols {
        return Err(EngineError::DimensionMismatch("column count".into()));
    }
    let rows_b: Vec<Row> = b.rows_iter().map(|r| r.to_vec()).collect();
    if rows_b.is_empty() || rows_b.iter().all(|r| row_is_zero(r)) {
        return Ok(a.rows_iter().all(row_is_zero));
    }
    let gb = buchberger(&rows_b, &ModTermOrder::top(), budget, false)?;
    Ok(a.rows_iter().all(|r| gb.contains_row(&r.to_vec())))
}

/// True iff row-module(a) = row-module(b).
pub fn module_equal(a: &OpMatrix, b: &OpMatrix, budget: &Budget) -> Result<bool> {
    Ok(submodule(a, b, budget)? && submodule(b, a, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::VarContext;

    fn ctx1() -> Arc<VarContext> {
        VarContext::new(vec!["x"], vec![]).unwrap()
    }

    fn ctx2() -> Arc<VarContext> {
        VarContext::new(vec!["x1", "x2"], vec!["c"]).unwrap()
    }

    #[test]
    fn unit_rows_full_module() {
        let ctx = ctx2();
        let e1 = vec![DiffOp::one(&ctx), DiffOp::zero(&ctx)];
        let e2 = vec![DiffOp::zero(&ctx), DiffOp::one(&ctx)];
        let gb = buchberger(&[e1.clone(), e2.clone()], &ModTermOrder::top(), &Budget::default(), false)
            .unwrap();
        assert_eq!(gb.gens.len(), 2);
        let v = vec![DiffOp::d(&ctx, 0), DiffOp::d(&ctx, 1).mul(&DiffOp::d(&ctx, 1))];
        assert!(gb.contains_row(&v));
    }

    #[test]
    fn single_row_already_reduced() {
        let ctx = ctx2();
        let row = vec![DiffOp::d(&ctx, 1), DiffOp::d(&ctx, 0).neg()];
        let gb = buchberger(&[row.clone()], &ModTermOrder::top(), &Budget::default(), false)
            .unwrap();
        assert_eq!(gb.gens.len(), 1);
        // normalized so the leading coefficient (of d1, the larger monomial
        // under degrevlex) is 1
        assert_eq!(gb.gens[0], row_scale(&row, &RationalFunction::from_int(&ctx, -1)));
    }

    #[test]
    fn membership_of_multiples_and_zero() {
        let ctx = ctx2();
        let row = vec![DiffOp::d(&ctx, 1), DiffOp::d(&ctx, 0).neg()];
        let gb =
            buchberger(&[row.clone()], &ModTermOrder::top(), &Budget::default(), false).unwrap();
        let mult = row_mul_op(&DiffOp::d(&ctx, 0), &row);
        assert!(gb.contains_row(&mult));
        let zero = vec![DiffOp::zero(&ctx), DiffOp::zero(&ctx)];
        assert!(gb.contains_row(&zero));
    }

    #[test]
    fn univariate_factorization_membership() {
        // over Q(x)[d], G = {(d-1)}: d^2 - 1 = (d+1)(d-1) is a member
        let ctx = ctx1();
        let d = DiffOp::d(&ctx, 0);
        let g = vec![d.sub(&DiffOp::one(&ctx))];
        let gb = buchberger(&[g], &ModTermOrder::top(), &Budget::default(), false).unwrap();
        let v = vec![d.mul(&d).sub(&DiffOp::one(&ctx))];
        assert!(gb.contains_row(&v));
        // d^2 + 1 is not
        let w = vec![d.mul(&d).add(&DiffOp::one(&ctx))];
        assert!(!gb.contains_row(&w));
    }

    #[test]
    fn reduce_is_idempotent() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let rows = vec![
            vec![d1.mul(&d1), d2.clone()],
            vec![d2.mul(&d2), DiffOp::one(&ctx)],
        ];
        let gb = buchberger(&rows, &ModTermOrder::top(), &Budget::default(), false).unwrap();
        let v = vec![d1.mul(&d2).mul(&d1), d1.clone()];
        let nf = gb.reduce(&v);
        assert_eq!(gb.reduce(&nf), nf);
    }

    #[test]
    fn cofactor_soundness() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let x2 = DiffOp::from_coeff(RationalFunction::var(&ctx, 1));
        let g1 = vec![d1.clone(), d2.clone()];
        let g2 = vec![x2.clone(), DiffOp::one(&ctx)];
        let inputs = vec![g1.clone(), g2.clone()];
        let gb = buchberger(&inputs, &ModTermOrder::top(), &Budget::default(), true).unwrap();
        // v = d1*g1 + x2*g2
        let v: Row = row_sub(
            &row_mul_op(&d1, &g1),
            &row_scale(&row_mul_op(&x2, &g2), &RationalFunction::from_int(&ctx, -1)),
        );
        match gb.member(&v) {
            Membership::Yes(Some(l)) => {
                let mut recon = vec![DiffOp::zero(&ctx); 2];
                for (c, g) in l.iter().zip(inputs.iter()) {
                    for (t, s) in recon.iter_mut().zip(g.iter()) {
                        *t = t.add(&c.mul(s));
                    }
                }
                assert_eq!(recon, v);
            }
            _ => panic!("expected membership with cofactors"),
        }
    }

    #[test]
    fn non_member_normal_form() {
        let ctx = ctx2();
        let g = vec![DiffOp::d(&ctx, 0), DiffOp::zero(&ctx)];
        let gb = buchberger(&[g], &ModTermOrder::top(), &Budget::default(), false).unwrap();
        let e1 = vec![DiffOp::one(&ctx), DiffOp::zero(&ctx)];
        match gb.member(&e1) {
            Membership::No(nf) => assert_eq!(nf, e1),
            _ => panic!("e1 must not be a member"),
        }
    }

    #[test]
    fn unit_appears_when_constant_present() {
        // rows of ad(D1) of the Vessiot family at c = 1, viewed in D^(1x1):
        // {d2, -d1, -1} generates the full ring
        let ctx = ctx2();
        let rows = vec![
            vec![DiffOp::d(&ctx, 1)],
            vec![DiffOp::d(&ctx, 0).neg()],
            vec![DiffOp::from_int(&ctx, -1)],
        ];
        let gb = buchberger(&rows, &ModTermOrder::top(), &Budget::default(), false).unwrap();
        let one = vec![DiffOp::one(&ctx)];
        assert!(gb.contains_row(&one));
    }

    #[test]
    fn module_equality_under_row_operations() {
        let ctx = ctx2();
        let d1 = DiffOp::d(&ctx, 0);
        let d2 = DiffOp::d(&ctx, 1);
        let a = OpMatrix::from_rows(
            &ctx,
            vec![
                vec![d1.clone(), d2.clone()],
                vec![d2.clone(), DiffOp::one(&ctx)],
            ],
            2,
        )
        .unwrap();
        // permute and rescale rows
        let b = OpMatrix::from_rows(
            &ctx,
            vec![
                vec![d2.scale(&RationalFunction::from_int(&ctx, 3)),
                     DiffOp::from_int(&ctx, 3)],
                vec![d1.clone(), d2.clone()],
            ],
            2,
        )
        .unwrap();
        assert!(module_equal(&a, &b, &Budget::default()).unwrap());
        // a strictly smaller module
        let c = OpMatrix::from_rows(&ctx, vec![vec![d1.clone(), d2.clone()]], 2).unwrap();
        assert!(submodule(&c, &a, &Budget::default()).unwrap());
        assert!(!module_equal(&a, &c, &Budget::default()).unwrap());
    }

    #[test]
    fn budget_exceeded_is_clean() {
        let ctx = ctx1();
        let d = DiffOp::d(&ctx, 0);
        let rows = vec![vec![d.mul(&d).mul(&d)]];
        let err = buchberger(&rows, &ModTermOrder::top(), &Budget::with_degree(1), false);
        assert!(matches!(err, Err(EngineError::ResourceBudgetExceeded(_))));
    }
}
