//! The end-to-end verification suite: ten numbered checks covering the
//! adjoint laws, the classical isometry and conformal sequences, the stress
//! and gravitational parametrizations, the two-pendulum and plane pseudogroup
//! examples, symbol cohomology, the brute-force syzygy oracle, and parser
//! robustness.  Used both by the `check-all` subcommand and by the
//! integration test target.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{
    self, pairing_weights, sym_weights, weighted_adjoint, MetricSpec, SystemDef,
};
use crate::error::Result;
use crate::groebner::{module_equal, Budget};
use crate::homology::{
    cc, duality_test, euler_characteristic, ext_zero, left_invertible, resolve,
    verify_parametrization, Verdict,
};
use crate::ops::{DiffOp, OpMatrix};
use crate::oracle;
use crate::scalars::{RationalFunction, VarContext};
use crate::spencer;
use crate::sysdsl;

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    /// the failure was a resource budget stop, not a wrong result
    pub budget_exceeded: bool,
}

pub fn criterion_name(index: usize) -> &'static str {
    match index {
        1 => "adjoint involution and antihomomorphism",
        2 => "isometry sequences n=2,3,4",
        3 => "conformal sequences n=3,4,5",
        4 => "divergence/stress identities",
        5 => "Einstein operator results",
        6 => "two-pendulum controllability",
        7 => "plane pseudogroup family",
        8 => "symbol cohomology and potential space",
        9 => "brute-force syzygy oracle",
        10 => "parser robustness and round-trip",
        _ => "unknown",
    }
}

/// Run one criterion (1-based).  Engine errors are reported as failures.
pub fn run(index: usize, budget: &Budget) -> CriterionOutcome {
    let start = Instant::now();
    let res = match index {
        1 => criterion_adjoint(),
        2 => criterion_isometry(budget),
        3 => criterion_conformal(budget),
        4 => criterion_stress(budget),
        5 => criterion_einstein(budget),
        6 => criterion_pendulum(budget),
        7 => criterion_pseudogroup(budget),
        8 => criterion_spencer(budget),
        9 => criterion_oracle(budget),
        10 => criterion_parser(),
        _ => Ok((false, format!("no criterion {index}"))),
    };
    let (pass, detail, budget_exceeded) = match res {
        Ok((p, d)) => (p, d, false),
        Err(e) => {
            let budget = matches!(e, crate::error::EngineError::ResourceBudgetExceeded(_));
            (false, format!("error: {e}"), budget)
        }
    };
    CriterionOutcome {
        index,
        name: criterion_name(index),
        pass,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
        budget_exceeded,
    }
}

pub fn run_all(budget: &Budget) -> Vec<CriterionOutcome> {
    (1..=CRITERIA).map(|i| run(i, budget)).collect()
}

// ---------------------------------------------------------------------------
// 1: adjoint laws on random operators
// ---------------------------------------------------------------------------

fn rand_coeff(rng: &mut ChaCha8Rng, ctx: &std::sync::Arc<VarContext>) -> RationalFunction {
    let mut c = RationalFunction::constant(
        ctx,
        BigRational::new(
            BigInt::from(rng.gen_range(-3i64..=3)),
            BigInt::from(rng.gen_range(1i64..=3)),
        ),
    );
    for _ in 0..rng.gen_range(0..=2) {
        let v = rng.gen_range(0..ctx.total());
        c = c.mul(&RationalFunction::var(ctx, v));
    }
    c
}

fn rand_op(rng: &mut ChaCha8Rng, ctx: &std::sync::Arc<VarContext>) -> DiffOp {
    let mut op = DiffOp::zero(ctx);
    for _ in 0..rng.gen_range(1..=3) {
        let mut mu = DiffOp::zero_deriv(ctx);
        for _ in 0..rng.gen_range(0..=3u32) {
            mu[rng.gen_range(0..ctx.n())] += 1;
        }
        op = op.add(&DiffOp::term(rand_coeff(rng, ctx), mu));
    }
    op
}

fn rand_matrix(
    rng: &mut ChaCha8Rng,
    ctx: &std::sync::Arc<VarContext>,
    rows: usize,
    cols: usize,
) -> OpMatrix {
    let r = (0..rows)
        .map(|_| (0..cols).map(|_| rand_op(rng, ctx)).collect())
        .collect();
    OpMatrix::from_rows(ctx, r, cols).expect("well-shaped")
}

fn criterion_adjoint() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0usize;
    for _ in 0..500 {
        let n = rng.gen_range(1..=3usize);
        let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let ctx = VarContext::new(vars, vec!["a".to_string()])?;

        let a = rand_op(&mut rng, &ctx);
        if a.adjoint().adjoint() != a {
            return Ok((false, format!("ad(ad(.)) != id on {a}")));
        }
        let r = rng.gen_range(1..=2usize);
        let m = rng.gen_range(1..=2usize);
        let k = rng.gen_range(1..=2usize);
        let ma = rand_matrix(&mut rng, &ctx, r, m);
        let mb = rand_matrix(&mut rng, &ctx, m, k);
        if ma.adjoint().adjoint() != ma {
            return Ok((false, "matrix involution failed".into()));
        }
        let lhs = ma.compose(&mb)?.adjoint();
        let rhs = mb.adjoint().compose(&ma.adjoint())?;
        if lhs != rhs {
            return Ok((false, "ad(A o B) != ad(B) o ad(A)".into()));
        }
        checked += 1;
    }

    // involution with genuine denominators, at sizes where the quotient-rule
    // fraction reduction stays cheap
    let ctx = VarContext::new(vec!["x1".to_string(), "x2".to_string()], vec!["a".to_string()])?;
    let mut den_checked = 0usize;
    for _ in 0..100 {
        let i = rng.gen_range(0..2usize);
        let x = RationalFunction::var(&ctx, i);
        let den = RationalFunction::from_int(&ctx, 2).add(&x.mul(&x));
        let c = rand_coeff(&mut rng, &ctx)
            .div(&den)
            .expect("denominator is nonzero");
        let mut mu = DiffOp::zero_deriv(&ctx);
        for _ in 0..rng.gen_range(0..=2u32) {
            mu[rng.gen_range(0..2)] += 1;
        }
        let op = DiffOp::term(c, mu);
        if op.adjoint().adjoint() != op {
            return Ok((false, "involution failed on a rational coefficient".into()));
        }
        den_checked += 1;
    }
    Ok((
        true,
        format!(
            "{checked} random instances, n <= 3, order <= 3; \
             {den_checked} involutions with rational-function coefficients"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 2/3: the classical differential sequences
// ---------------------------------------------------------------------------

fn chain_matches(
    d: &OpMatrix,
    unknowns: usize,
    want_ranks: &[usize],
    want_orders: &[Option<u32>],
    budget: &Budget,
) -> Result<(bool, String)> {
    let res = resolve(d, want_ranks.len(), budget)?;
    let ranks = res.ranks();
    let orders = res.orders();
    let chi = if res.terminated {
        euler_characteristic(&res, unknowns as i64)?
    } else {
        i64::MIN
    };
    let orders_ok = want_orders.len() == orders.len()
        && want_orders
            .iter()
            .zip(orders.iter())
            .all(|(w, o)| w.map_or(true, |w| w == *o));
    let ok = ranks == want_ranks && orders_ok && chi == 0;
    Ok((
        ok,
        format!("ranks {ranks:?} orders {orders:?} euler {chi}"),
    ))
}

fn criterion_isometry(budget: &Budget) -> Result<(bool, String)> {
    let cases: [(usize, Vec<usize>, Vec<Option<u32>>); 3] = [
        (2, vec![3, 1, 0], vec![Some(1), Some(2)]),
        (3, vec![6, 6, 3, 0], vec![Some(1), Some(2), Some(1)]),
        (
            4,
            vec![10, 20, 20, 6, 0],
            vec![Some(1), Some(2), Some(1), Some(1)],
        ),
    ];
    let mut details = Vec::new();
    let mut all = true;
    for (n, ranks, orders) in cases {
        let k = catalog::killing(&MetricSpec::euclidean(n));
        let (ok, d) = chain_matches(&k.matrix, n, &ranks, &orders, budget)?;
        all &= ok;
        details.push(format!("n={n}: {d}"));
    }
    Ok((all, details.join("; ")))
}

fn criterion_conformal(budget: &Budget) -> Result<(bool, String)> {
    // the second-order steps at n=3 are printed with an open order in the
    // classical table; only the annotated entries are enforced
    let cases: [(usize, Vec<usize>, Vec<Option<u32>>); 3] = [
        (3, vec![5, 5, 3, 0], vec![Some(1), Some(3), None]),
        (
            4,
            vec![9, 10, 9, 4, 0],
            vec![Some(1), Some(2), Some(2), Some(1)],
        ),
        (
            5,
            vec![14, 35, 35, 14, 5, 0],
            vec![Some(1), Some(2), Some(1), Some(2), Some(1)],
        ),
    ];
    let mut details = Vec::new();
    let mut all = true;
    for (n, ranks, orders) in cases {
        let c = catalog::conformal_killing(&MetricSpec::euclidean(n))?;
        let (ok, d) = chain_matches(&c.matrix, n, &ranks, &orders, budget)?;
        all &= ok;
        details.push(format!("n={n}: {d}"));
    }
    Ok((all, details.join("; ")))
}

// ---------------------------------------------------------------------------
// 4: divergence / stress-function identities
// ---------------------------------------------------------------------------

fn ones(k: usize) -> Vec<BigRational> {
    vec![BigRational::from_integer(1.into()); k]
}

fn criterion_stress(budget: &Budget) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut all = true;

    for n in 2..=4 {
        let m = MetricSpec::euclidean(n);
        let k = catalog::killing(&m);
        let ad = weighted_adjoint(&k.matrix, &ones(n), &sym_weights(n))?;
        let c = catalog::cauchy(&m);
        let ok = module_equal(&ad, &c.matrix, budget)?;
        all &= ok;
        notes.push(format!("ad(isometry{n}) ~ div{n}: {ok}"));
    }

    // plane: the double-duality parametrization of the divergence operator is
    // the single stress function
    let c2 = catalog::cauchy(&MetricSpec::euclidean(2));
    let rep = duality_test(&c2.matrix, budget)?;
    let airy = catalog::airy();
    let p_ok = rep.verdict == Verdict::Parametrizable
        && rep.parametrization.cols == 1
        && module_equal(&rep.parametrization.adjoint(), &airy.matrix.adjoint(), budget)?;
    let vp = verify_parametrization(&c2.matrix, &airy.matrix, budget)?;
    let airy_ok = p_ok && vp.composes_to_zero && vp.generates_all_cc;
    all &= airy_ok;
    notes.push(format!("plane stress function: {airy_ok}"));

    // space: six potentials; basis-independent comparison with the adjoint
    // of the curvature operator by checking both parametrize the divergence
    let c3 = catalog::cauchy(&MetricSpec::euclidean(3));
    let rep3 = duality_test(&c3.matrix, budget)?;
    let r3 = catalog::riemann(&MetricSpec::euclidean(3), budget)?;
    // strain-weighted adjoint of the curvature operator: the inner pairing
    // weights cancel against ad(W * isometry) ~ divergence
    let ad_r3 = weighted_adjoint(&r3.matrix, &sym_weights(3), &ones(r3.matrix.rows))?;
    let vp3 = verify_parametrization(&c3.matrix, &ad_r3, budget)?;
    let six_ok = rep3.verdict == Verdict::Parametrizable
        && rep3.parametrization.cols == 6
        && vp3.composes_to_zero
        && vp3.generates_all_cc;
    all &= six_ok;
    notes.push(format!("six-potential spatial parametrization: {six_ok}"));

    let bw = catalog::beltrami(true);
    let sa = bw.matrix.adjoint() == bw.matrix;
    all &= sa;
    notes.push(format!("weighted stress parametrization self-adjoint: {sa}"));

    Ok((all, notes.join("; ")))
}

// ---------------------------------------------------------------------------
// 5: the Einstein operator
// ---------------------------------------------------------------------------

fn criterion_einstein(budget: &Budget) -> Result<(bool, String)> {
    let m = MetricSpec::euclidean(4);
    let e = catalog::einstein(&m);
    let w = pairing_weights(&m);
    let sa = weighted_adjoint(&e.matrix, &w, &w)? == e.matrix;
    let mk = MetricSpec::minkowski(4);
    let em = catalog::einstein(&mk);
    let wm = pairing_weights(&mk);
    let sa_mink = weighted_adjoint(&em.matrix, &wm, &wm)? == em.matrix;

    let rep = duality_test(&e.matrix, budget)?;
    let r4 = catalog::riemann(&m, budget)?;
    let not_param = rep.verdict == Verdict::NotParametrizable;
    let back_ok = rep.cc_back.rows == 20 && module_equal(&rep.cc_back, &r4.matrix, budget)?;

    let c = catalog::trace_flip(&m);
    let r = catalog::ricci(&m);
    let factors = e.matrix == c.matrix.compose(&r.matrix)?;

    let cinv = catalog::trace_flip_inverse(&m)?;
    let x = e.matrix.compose(&cinv.matrix)?;
    let sw = sym_weights(4);
    let adx_ok = module_equal(&weighted_adjoint(&x, &sw, &sw)?, &r.matrix, budget)?;

    let all = sa && sa_mink && not_param && back_ok && factors && adx_ok;
    Ok((
        all,
        format!(
            "self-adjoint {sa}/{sa_mink}; not parametrizable {not_param}; \
             recomputed system = curvature with {} generators: {back_ok}; \
             trace-flip factorization {factors}; ad of wave factor ~ ricci {adx_ok}",
            rep.cc_back.rows
        ),
    ))
}

// ---------------------------------------------------------------------------
// 6: the two-pendulum example
// ---------------------------------------------------------------------------

fn criterion_pendulum(budget: &Budget) -> Result<(bool, String)> {
    let gen = catalog::double_pendulum(false);
    let rep = duality_test(&gen.matrix, budget)?;
    let par = rep.verdict == Verdict::Parametrizable;
    let phi = catalog::pendulum_parametrization();
    let vp = verify_parametrization(&gen.matrix, &phi.matrix, budget)?;
    let phi_ok = vp.composes_to_zero && vp.generates_all_cc;
    let li = left_invertible(&gen.matrix.adjoint(), budget)?;

    let eq = catalog::double_pendulum(true);
    let rep2 = duality_test(&eq.matrix, budget)?;
    let not_par = rep2.verdict == Verdict::NotParametrizable;
    let ctx = &eq.ctx;
    // d^2 + g/l, the normalized lowest-order annihilator
    let g_over_l = RationalFunction::var(ctx, 1)
        .div(&RationalFunction::var(ctx, 2))
        .expect("l != 0");
    let mut mu = DiffOp::zero_deriv(ctx);
    mu[0] = 2;
    let expect = DiffOp::monomial(ctx, mu).add(&DiffOp::from_coeff(g_over_l));
    let ann_ok = rep2
        .torsion
        .iter()
        .any(|t| t.annihilator.as_ref() == Some(&expect));

    let all = par && phi_ok && li && not_par && ann_ok;
    Ok((
        all,
        format!(
            "generic parametrizable {par}; potential verified {phi_ok}; \
             adjoint left-invertible {li}; equal lengths torsion {not_par} \
             with annihilator d^2 + g/l: {ann_ok}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 7: the plane pseudogroup family
// ---------------------------------------------------------------------------

fn criterion_pseudogroup(budget: &Budget) -> Result<(bool, String)> {
    // symbolic structure constant: one compatibility row, d1 eta2 - d2 eta1 - c eta3
    let v = catalog::vessiot(None);
    let c = cc(&v.matrix, budget)?;
    let ctx = &v.ctx;
    let expected = OpMatrix::from_rows(
        ctx,
        vec![vec![
            DiffOp::d(ctx, 1).neg(),
            DiffOp::d(ctx, 0),
            DiffOp::from_coeff(RationalFunction::var(ctx, 2).neg()),
        ]],
        3,
    )?;
    let cc_ok = c.rows == 1 && module_equal(&c, &expected, budget)?;

    let at = |k: i64| catalog::vessiot(Some(BigRational::from_integer(BigInt::from(k))));
    // injectivity of the adjoint of the compatibility operator decides
    // whether the structure constant vanishes
    let li1 = left_invertible(&cc(&at(1).matrix, budget)?.adjoint(), budget)?;
    let li0 = left_invertible(&cc(&at(0).matrix, budget)?.adjoint(), budget)?;
    let inj_ok = li1 && !li0;

    let e1_c0 = ext_zero(&at(0).matrix, 1, 4, budget)?;
    let e1_c1 = ext_zero(&at(1).matrix, 1, 4, budget)?;
    let ext1_ok = !e1_c0.is_zero
        && e1_c0.witness.is_some()
        && !e1_c1.is_zero
        && e1_c1.witness.is_some();

    let e2_c0 = ext_zero(&at(0).matrix, 2, 4, budget)?;
    let e2_c1 = ext_zero(&at(1).matrix, 2, 4, budget)?;
    let ext2_ok = !e2_c0.is_zero && e2_c1.is_zero;

    let all = cc_ok && inj_ok && ext1_ok && ext2_ok;
    Ok((
        all,
        format!(
            "structure equation CC {cc_ok}; adjoint injective iff c != 0: {inj_ok}; \
             ext1 nonzero both cases {ext1_ok}; ext2 zero only at c=1: {ext2_ok}"
        ),
    ))
}

// ---------------------------------------------------------------------------
// 8: symbol cohomology and the n=4 potential space
// ---------------------------------------------------------------------------

fn criterion_spencer(budget: &Budget) -> Result<(bool, String)> {
    let mut all = true;
    let mut notes = Vec::new();

    for n in 2..=5usize {
        let sig = vec![1i64; n];
        let g1 = spencer::killing_symbol(n, &sig);
        let g2 = spencer::prolong(&g1);
        let smax = 3usize.min(n);
        let rep = spencer::delta_complex(&g1, smax);
        let want_h2 = n * n * (n * n - 1) / 12;
        let want_h3 = n * n * (n * n - 1) * (n - 2) / 24;
        let h2 = rep.cohomology.get(2).copied();
        let h3 = rep.cohomology.get(3).copied();
        let ok = g2.dim == 0
            && h2 == Some(want_h2)
            && (n < 3 || h3 == Some(want_h3));
        all &= ok;
        notes.push(format!("n={n}: H2 {h2:?} H3 {h3:?} ({ok})"));
    }

    for n in 3..=5usize {
        let sig = vec![1i64; n];
        let g1 = spencer::conformal_symbol(n, &sig);
        let g2 = spencer::prolong(&g1);
        let g3 = spencer::prolong(&g2);
        let ok = g2.dim == n && g3.dim == 0;
        all &= ok;
        notes.push(format!("conformal n={n}: g2 {} g3 {} ({ok})", g2.dim, g3.dim));
    }

    let rep = catalog::lanczos_check(budget)?;
    let lz = rep.bianchi_rows == 20
        && rep.bianchi_order == 1
        && rep.sequence_dims == (20, 24, 4)
        && rep.sequence_exact
        && rep.adjoint_parametrization_ok;
    all &= lz;
    notes.push(format!(
        "potential space dims {:?} exact {} adjoint parametrization {} ({lz})",
        rep.sequence_dims, rep.sequence_exact, rep.adjoint_parametrization_ok
    ));

    Ok((all, notes.join("; ")))
}

// ---------------------------------------------------------------------------
// 9: brute-force syzygy oracle
// ---------------------------------------------------------------------------

fn criterion_oracle(budget: &Budget) -> Result<(bool, String)> {
    let mut pairs: Vec<(String, OpMatrix, OpMatrix)> = Vec::new();

    for n in 2..=4usize {
        let k = catalog::killing(&MetricSpec::euclidean(n));
        let res = resolve(&k.matrix, 6, budget)?;
        for w in res.steps.windows(2) {
            pairs.push((format!("isometry{n}"), w[0].clone(), w[1].clone()));
        }
    }
    {
        let c = catalog::conformal_killing(&MetricSpec::euclidean(3))?;
        let res = resolve(&c.matrix, 6, budget)?;
        for w in res.steps.windows(2) {
            pairs.push(("conformal3".into(), w[0].clone(), w[1].clone()));
        }
    }
    for n in 2..=3usize {
        let c = catalog::cauchy(&MetricSpec::euclidean(n));
        let ad = c.matrix.adjoint();
        let k = cc(&ad, budget)?;
        pairs.push((format!("ad(div{n})"), ad, k));
    }
    {
        let e = catalog::einstein(&MetricSpec::euclidean(4));
        let ad = e.matrix.adjoint();
        let k = cc(&ad, budget)?;
        pairs.push(("ad(einstein4)".into(), ad, k));
    }

    let mut all = true;
    let mut notes = Vec::new();
    for (name, d, cand) in &pairs {
        let cap = oracle::default_cap(cand);
        let rep = oracle::check_cc(d, cand, cap, budget)?;
        let ok = rep.agrees();
        all &= ok;
        notes.push(format!(
            "{name}: dim {} = {} at cap {cap} ({ok})",
            rep.oracle_dim, rep.module_dim
        ));
    }
    Ok((all, notes.join("; ")))
}

// ---------------------------------------------------------------------------
// 10: parser robustness + round trip
// ---------------------------------------------------------------------------

/// The systems used for the round-trip check; shared with the CLI catalog.
pub fn roundtrip_systems(budget: &Budget) -> Result<Vec<SystemDef>> {
    let mut v = vec![
        catalog::killing(&MetricSpec::euclidean(2)),
        catalog::killing(&MetricSpec::euclidean(3)),
        catalog::killing(&MetricSpec::euclidean(4)),
        catalog::conformal_killing(&MetricSpec::euclidean(3))?,
        catalog::conformal_killing(&MetricSpec::euclidean(4))?,
        catalog::cauchy(&MetricSpec::euclidean(2)),
        catalog::cauchy(&MetricSpec::euclidean(3)),
        catalog::ricci(&MetricSpec::euclidean(4)),
        catalog::ricci(&MetricSpec::minkowski(4)),
        catalog::einstein(&MetricSpec::euclidean(4)),
        catalog::einstein(&MetricSpec::minkowski(4)),
        catalog::airy(),
        catalog::beltrami(false),
        catalog::beltrami(true),
        catalog::double_pendulum(false),
        catalog::double_pendulum(true),
        catalog::pendulum_parametrization(),
        catalog::vessiot(None),
        catalog::vessiot(Some(BigRational::from_integer(BigInt::from(0)))),
        catalog::vessiot(Some(BigRational::from_integer(BigInt::from(1)))),
    ];
    v.push(catalog::riemann(&MetricSpec::euclidean(2), budget)?);
    v.push(catalog::riemann(&MetricSpec::euclidean(3), budget)?);
    Ok(v)
}

fn criterion_parser() -> Result<(bool, String)> {
    let parsed_ok = sysdsl::fuzz_parse(10_000, 2024);

    let budget = Budget::default();
    let systems = roundtrip_systems(&budget)?;
    let mut rt_fail = Vec::new();
    for s in &systems {
        let text = sysdsl::print_dsl(s);
        match sysdsl::parse(&text) {
            Ok(back) if back.len() == 1 && back[0].matrix == s.matrix => {}
            _ => rt_fail.push(s.name.clone()),
        }
    }
    let ok = rt_fail.is_empty();
    Ok((
        ok,
        format!(
            "10000 fuzzed inputs without crash ({parsed_ok} parsed clean); \
             round trip on {} systems{}",
            systems.len(),
            if ok {
                String::new()
            } else {
                format!("; failed: {rt_fail:?}")
            }
        ),
    ))
}
