//! Degree-bounded brute-force syzygy oracle for constant-coefficient systems.
//!
//! Independent cross-check for the Groebner-based compatibility-condition
//! machinery: the space of left syzygies `L` with `L * D = 0` and
//! `order(L) <= cap` is computed as the kernel of an explicit Q-linear
//! system in the unknown coefficients of `L`, using only exact Gaussian
//! elimination.  The result is compared against the order-filtered slice of
//! the module generated by the computed compatibility conditions.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{EngineError, Result};
use crate::groebner::{row_order, Budget, Membership, Row};
use crate::homology::{member_of, monomials_up_to};
use crate::linalg::{kernel_basis, rank};
use crate::ops::{deriv_deg, DerivExp, DiffOp, OpMatrix};

/// Outcome of cross-checking computed compatibility conditions against the
/// brute-force syzygy space up to a fixed order.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub order_cap: u32,
    /// dim over Q of { L : L * D = 0, order(L) <= cap } (brute force)
    pub oracle_dim: usize,
    /// dim of the order-<=cap slice spanned by derivative multiples of the
    /// candidate compatibility conditions
    pub module_dim: usize,
    pub dims_match: bool,
    /// every candidate row composes to zero against D
    pub rows_are_syzygies: bool,
    /// every brute-force kernel vector lies in the candidate module
    pub kernel_in_module: bool,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.dims_match && self.rows_are_syzygies && self.kernel_in_module
    }
}

fn constant_entry(e: &DiffOp) -> Result<Vec<(DerivExp, BigRational)>> {
    let mut out = Vec::with_capacity(e.terms.len());
    for (mu, c) in &e.terms {
        let Some(q) = c.as_constant() else {
            return Err(EngineError::Input(
                "syzygy oracle requires constant coefficients".into(),
            ));
        };
        out.push((mu.clone(), q));
    }
    Ok(out)
}

/// Coordinates of a constant-coefficient row in the basis
/// { e_i * d^mu : i < width, deg mu <= cap } used by the oracle.
fn vectorize(row: &[DiffOp], mons: &[DerivExp], cap: u32) -> Result<Vec<BigRational>> {
    let per = mons.len();
    let pos = |mu: &DerivExp| mons.iter().position(|m| m == mu);
    let mut v = vec![BigRational::zero(); row.len() * per];
    for (i, e) in row.iter().enumerate() {
        for (mu, q) in constant_entry(e)? {
            if deriv_deg(&mu) > cap {
                return Err(EngineError::Input(format!(
                    "row order exceeds oracle cap {cap}"
                )));
            }
            let j = pos(&mu).expect("monomial within cap");
            v[i * per + j] = q;
        }
    }
    Ok(v)
}

/// Brute-force basis of { L in D^(1 x rows(d)) : L * d = 0, order(L) <= cap }
/// for a constant-coefficient matrix `d`.  Unknown coefficients of `L` are
/// solved for by exact linear algebra over Q; no Groebner machinery is used.
pub fn syzygy_basis_up_to(d: &OpMatrix, cap: u32) -> Result<Vec<Row>> {
    let n = d.ctx.n();
    let mons = monomials_up_to(n, cap);
    let per = mons.len();
    let nvars = d.rows * per;
    let d_ord = d.order().unwrap_or(0);
    let eq_mons = monomials_up_to(n, cap + d_ord);
    let eq_pos = |mu: &DerivExp| eq_mons.iter().position(|m| m == mu).expect("in range");

    // one equation per (output column, result monomial)
    let mut sys = vec![vec![BigRational::zero(); nvars]; d.cols * eq_mons.len()];
    for i in 0..d.rows {
        for j in 0..d.cols {
            let entry = constant_entry(d.at(i, j))?;
            for (nu, q) in &entry {
                for (mi, mu) in mons.iter().enumerate() {
                    // constant coefficients: d^mu * (q d^nu) = q d^(mu+nu)
                    let mut lam = mu.clone();
                    for (a, b) in lam.iter_mut().zip(nu.iter()) {
                        *a += *b;
                    }
                    let row = j * eq_mons.len() + eq_pos(&lam);
                    sys[row][i * per + mi] = &sys[row][i * per + mi] + q;
                }
            }
        }
    }

    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let ker = kernel_basis(&sys, &zero, &one);
    let mut rows = Vec::with_capacity(ker.len());
    for v in ker {
        let mut row: Row = Vec::with_capacity(d.rows);
        for i in 0..d.rows {
            let mut e = DiffOp::zero(&d.ctx);
            for (mi, mu) in mons.iter().enumerate() {
                let q = &v[i * per + mi];
                if !q.is_zero() {
                    let c = crate::scalars::RationalFunction::constant(&d.ctx, q.clone());
                    e = e.add(&DiffOp::term(c, mu.clone()));
                }
            }
            row.push(e);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Dimension of the order-<=cap slice of the module generated by `gens`
/// (constant coefficients): the Q-span of all d^nu * g with
/// deg(nu) + order(g) <= cap.
pub fn module_slice_dim(gens: &[Row], ctx_n: usize, cap: u32) -> Result<usize> {
    let mons = monomials_up_to(ctx_n, cap);
    let mut vecs = Vec::new();
    for g in gens {
        let g_ord = row_order(g).unwrap_or(0);
        if g_ord > cap {
            continue;
        }
        for nu in monomials_up_to(ctx_n, cap - g_ord) {
            let shifted: Row = g.iter().map(|e| e.monomial_times(&nu)).collect();
            vecs.push(vectorize(&shifted, &mons, cap)?);
        }
    }
    Ok(rank(&vecs))
}

/// Cross-check candidate compatibility conditions `cand` for `d` against the
/// brute-force syzygy space of order <= cap.
pub fn check_cc(d: &OpMatrix, cand: &OpMatrix, cap: u32, budget: &Budget) -> Result<OracleReport> {
    if cand.cols != d.rows {
        return Err(EngineError::DimensionMismatch(format!(
            "candidate width {} vs {} rows of system",
            cand.cols, d.rows
        )));
    }
    let rows_are_syzygies = cand.compose(d)?.is_zero();

    let oracle = syzygy_basis_up_to(d, cap)?;
    let oracle_dim = oracle.len();

    let gens: Vec<Row> = cand.rows_iter().map(|r| r.to_vec()).collect();
    let module_dim = module_slice_dim(&gens, d.ctx.n(), cap)?;

    let mut kernel_in_module = true;
    for v in &oracle {
        match member_of(v, &gens, budget)? {
            Membership::Yes(_) => {}
            Membership::No(_) => {
                kernel_in_module = false;
                break;
            }
        }
    }

    Ok(OracleReport {
        order_cap: cap,
        oracle_dim,
        module_dim,
        dims_match: oracle_dim == module_dim,
        rows_are_syzygies,
        kernel_in_module,
    })
}

/// Default oracle cap for a computed compatibility operator: its order plus
/// two, so the check sees strictly more than the generators themselves.
pub fn default_cap(cc: &OpMatrix) -> u32 {
    cc.order().unwrap_or(0) + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::cc;
    use crate::scalars::VarContext;

    fn grad2() -> OpMatrix {
        let ctx = VarContext::new(vec!["x1", "x2"], Vec::<&str>::new()).unwrap();
        OpMatrix::from_rows(
            &ctx,
            vec![vec![DiffOp::d(&ctx, 0)], vec![DiffOp::d(&ctx, 1)]],
            1,
        )
        .unwrap()
    }

    #[test]
    fn curl_is_the_full_syzygy_space_of_grad() {
        let d = grad2();
        let c = cc(&d, &Budget::default()).unwrap();
        assert_eq!(c.rows, 1);
        let rep = check_cc(&d, &c, default_cap(&c), &Budget::default()).unwrap();
        assert!(rep.agrees(), "{rep:?}");
        // order <= 3 syzygies of (d1, d2): d^nu (d2, -d1), deg nu <= 2 -> 6
        assert_eq!(rep.order_cap, 3);
        assert_eq!(rep.oracle_dim, 6);
    }

    #[test]
    fn dropping_a_generator_is_detected() {
        let ctx = VarContext::new(vec!["x1", "x2", "x3"], Vec::<&str>::new()).unwrap();
        let d = OpMatrix::from_rows(
            &ctx,
            vec![
                vec![DiffOp::d(&ctx, 0)],
                vec![DiffOp::d(&ctx, 1)],
                vec![DiffOp::d(&ctx, 2)],
            ],
            1,
        )
        .unwrap();
        let full = cc(&d, &Budget::default()).unwrap();
        assert_eq!(full.rows, 3);
        let partial =
            OpMatrix::from_rows(&ctx, vec![full.row_vec(0), full.row_vec(1)], 3).unwrap();
        let rep = check_cc(&d, &partial, default_cap(&partial), &Budget::default()).unwrap();
        assert!(rep.rows_are_syzygies);
        assert!(!rep.agrees());
        assert!(rep.oracle_dim > rep.module_dim);
    }

    #[test]
    fn wrong_candidate_rejected_by_composition() {
        let d = grad2();
        let ctx = d.ctx.clone();
        let bad = OpMatrix::from_rows(
            &ctx,
            vec![vec![DiffOp::d(&ctx, 0), DiffOp::d(&ctx, 1)]],
            2,
        )
        .unwrap();
        let rep = check_cc(&d, &bad, 3, &Budget::default()).unwrap();
        assert!(!rep.rows_are_syzygies);
        assert!(!rep.agrees());
    }

    #[test]
    fn nonconstant_coefficients_are_refused() {
        let ctx = VarContext::new(vec!["x1"], Vec::<&str>::new()).unwrap();
        let x = crate::scalars::RationalFunction::var(&ctx, 0);
        let d = OpMatrix::from_rows(&ctx, vec![vec![DiffOp::from_coeff(x)]], 1).unwrap();
        assert!(syzygy_basis_up_to(&d, 2).is_err());
    }
}
