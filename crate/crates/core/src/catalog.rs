//! Constructors for the classical operator families in explicit flat
//! coordinates: isometry (Killing) and conformal systems, curvature and
//! stress operators, the plane Airy and spatial Beltrami potentials, the
//! two-pendulum control system, and the Medolaghi family with a structure
//! constant.
//!
//! Symmetric 2-tensors are stored as the independent component list
//! (i, j) with i <= j in lexicographic order; the natural pairing carries
//! weight 1 on diagonal and 2 on off-diagonal components, which matters for
//! every adjoint computation on these spaces.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::sync::Arc;

use crate::error::{EngineError, Result};
use crate::groebner::Budget;
use crate::homology::{cc, verify_parametrization};
use crate::linalg;
use crate::ops::{DiffOp, OpMatrix};
use crate::scalars::{RationalFunction, VarContext};
use crate::spencer::{self, LanczosSpace};

/// Flat diagonal metric: entries +1/-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpec {
    pub n: usize,
    pub signature: Vec<i64>,
}

impl MetricSpec {
    pub fn new(signature: Vec<i64>) -> Result<MetricSpec> {
        if signature.is_empty() || signature.iter().any(|&s| s != 1 && s != -1) {
            return Err(EngineError::Input(
                "metric signature must be a nonempty list of +1/-1".into(),
            ));
        }
        Ok(MetricSpec {
            n: signature.len(),
            signature,
        })
    }

    pub fn euclidean(n: usize) -> MetricSpec {
        MetricSpec {
            n,
            signature: vec![1; n],
        }
    }

    pub fn minkowski(n: usize) -> MetricSpec {
        let mut signature = vec![1; n];
        signature[n - 1] = -1;
        MetricSpec { n, signature }
    }
}

/// A named operator matrix together with its coordinate context and the
/// unknowns it acts on.
#[derive(Debug, Clone)]
pub struct SystemDef {
    pub name: String,
    pub ctx: Arc<VarContext>,
    pub unknowns: Vec<String>,
    pub matrix: OpMatrix,
    pub note: String,
}

/// Independent components (i, j), i <= j, of a symmetric 2-tensor.
pub fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect()
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (i, j) = if a <= b { (a, b) } else { (b, a) };
    // offset of row i in the i <= j listing
    i * n - i * (i + 1) / 2 + j
}

/// Pairing weights on symmetric components: 1 diagonal, 2 off-diagonal.
pub fn sym_weights(n: usize) -> Vec<BigRational> {
    sym_pairs(n)
        .iter()
        .map(|(i, j)| BigRational::from_integer(BigInt::from(if i == j { 1 } else { 2 })))
        .collect()
}

/// Weights of the full metric pairing lambda^{ij} Omega_{ij} on independent
/// components, with both indices raised by the diagonal metric: the
/// multiplicity factor times s_i s_j.
pub fn pairing_weights(m: &MetricSpec) -> Vec<BigRational> {
    sym_pairs(m.n)
        .iter()
        .map(|(i, j)| {
            let mult = if i == j { 1 } else { 2 };
            BigRational::from_integer(BigInt::from(
                mult * m.signature[*i] * m.signature[*j],
            ))
        })
        .collect()
}

/// Adjoint with respect to weighted pairings on source and target
/// coordinates: inverse source weights applied after the plain adjoint of
/// the target-weighted matrix.
pub fn weighted_adjoint(
    m: &OpMatrix,
    src_weights: &[BigRational],
    tgt_weights: &[BigRational],
) -> Result<OpMatrix> {
    let ones_c = vec![BigRational::from_integer(1.into()); m.cols];
    let weighted = m.weight_rescale(tgt_weights, &ones_c)?;
    let ad = weighted.adjoint();
    let inv: Vec<BigRational> = src_weights.iter().map(|w| w.recip()).collect();
    let ones_r = vec![BigRational::from_integer(1.into()); ad.cols];
    ad.weight_rescale(&inv, &ones_r)
}

fn geo_ctx(n: usize) -> Arc<VarContext> {
    let vars: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
    VarContext::new(vars, Vec::new()).unwrap()
}

fn vec_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{}{}", prefix, i)).collect()
}

fn sym_names(prefix: &str, n: usize) -> Vec<String> {
    sym_pairs(n)
        .iter()
        .map(|(i, j)| format!("{}{}{}", prefix, i + 1, j + 1))
        .collect()
}

fn sig_rf(ctx: &Arc<VarContext>, s: i64) -> RationalFunction {
    RationalFunction::from_int(ctx, s)
}

/// First-order isometry system: row (i, j) is s_j d_i xi^j + s_i d_j xi^i
/// (doubled on the diagonal).
pub fn killing(m: &MetricSpec) -> SystemDef {
    let n = m.n;
    let ctx = geo_ctx(n);
    let mut rows = Vec::new();
    for (i, j) in sym_pairs(n) {
        let mut row = vec![DiffOp::zero(&ctx); n];
        row[j] = row[j].add(&DiffOp::d(&ctx, i).scale(&sig_rf(&ctx, m.signature[j])));
        row[i] = row[i].add(&DiffOp::d(&ctx, j).scale(&sig_rf(&ctx, m.signature[i])));
        rows.push(row);
    }
    SystemDef {
        name: format!("killing{}", n),
        ctx: ctx.clone(),
        unknowns: vec_names("xi", n),
        matrix: OpMatrix::from_rows(&ctx, rows, n).unwrap(),
        note: "flat isometry system".into(),
    }
}

/// Trace-free part of the isometry system; the dependent last diagonal row
/// is dropped, leaving n(n+1)/2 - 1 generators.
pub fn conformal_killing(m: &MetricSpec) -> Result<SystemDef> {
    let n = m.n;
    if n < 3 {
        return Err(EngineError::UnsupportedDimension(
            "conformal system needs n >= 3".into(),
        ));
    }
    let ctx = geo_ctx(n);
    let k = killing(m);
    let frac_2n = RationalFunction::constant(
        &ctx,
        BigRational::new(BigInt::from(2), BigInt::from(n as i64)),
    );
    let mut rows = Vec::new();
    for (ri, (i, j)) in sym_pairs(n).iter().enumerate() {
        if (*i, *j) == (n - 1, n - 1) {
            continue;
        }
        let mut row = k.matrix.row_vec(ri);
        if i == j {
            // subtract (1/n) omega_ii times the weighted trace 2 sum_r d_r xi^r
            let w = sig_rf(&ctx, m.signature[*i]);
            for r in 0..n {
                row[r] = row[r].sub(&DiffOp::d(&ctx, r).scale(&frac_2n.mul(&w)));
            }
        }
        rows.push(row);
    }
    Ok(SystemDef {
        name: format!("conformal{}", n),
        ctx: ctx.clone(),
        unknowns: vec_names("xi", n),
        matrix: OpMatrix::from_rows(&ctx, rows, n)?,
        note: "trace-free isometry system".into(),
    })
}

/// Divergence-type first-order operator on symmetric 2-tensors: row i is
/// sum_r s_r d_r sigma^(i,r); equals the adjoint of the isometry operator
/// under the symmetric pairing weights.
pub fn cauchy(m: &MetricSpec) -> SystemDef {
    let n = m.n;
    let ctx = geo_ctx(n);
    let pairs = sym_pairs(n);
    let mut rows = Vec::new();
    for i in 0..n {
        let mut row = vec![DiffOp::zero(&ctx); pairs.len()];
        for r in 0..n {
            let col = pair_index(n, i, r);
            row[col] = row[col].add(&DiffOp::d(&ctx, r).scale(&sig_rf(&ctx, m.signature[r])));
        }
        rows.push(row);
    }
    SystemDef {
        name: format!("cauchy{}", n),
        ctx: ctx.clone(),
        unknowns: sym_names("sigma", n),
        matrix: OpMatrix::from_rows(&ctx, rows, pairs.len()).unwrap(),
        note: "stress equilibrium operator".into(),
    }
}

/// Linearized curvature trace at a flat background, acting on the metric
/// perturbation Omega: 2 rho_ij = sum_r s_r (d_ri Omega_rj + d_rj Omega_ri
/// - d_rr Omega_ij) - d_ij sum_r s_r Omega_rr.
pub fn ricci(m: &MetricSpec) -> SystemDef {
    let n = m.n;
    let ctx = geo_ctx(n);
    let pairs = sym_pairs(n);
    let half = RationalFunction::constant(&ctx, BigRational::new(1.into(), 2.into()));
    let dd = |a: usize, b: usize| DiffOp::d(&ctx, a).mul(&DiffOp::d(&ctx, b));
    let mut rows = Vec::new();
    for (i, j) in &pairs {
        let mut row = vec![DiffOp::zero(&ctx); pairs.len()];
        for r in 0..n {
            let s = sig_rf(&ctx, m.signature[r]);
            let c1 = pair_index(n, r, *j);
            row[c1] = row[c1].add(&dd(r, *i).scale(&s).scale(&half));
            let c2 = pair_index(n, r, *i);
            row[c2] = row[c2].add(&dd(r, *j).scale(&s).scale(&half));
            let c3 = pair_index(n, *i, *j);
            row[c3] = row[c3].sub(&dd(r, r).scale(&s).scale(&half));
            let c4 = pair_index(n, r, r);
            row[c4] = row[c4].sub(&dd(*i, *j).scale(&s).scale(&half));
        }
        rows.push(row);
    }
    SystemDef {
        name: format!("ricci{}", n),
        ctx: ctx.clone(),
        unknowns: sym_names("Omega", n),
        matrix: OpMatrix::from_rows(&ctx, rows, pairs.len()).unwrap(),
        note: "linearized curvature trace at a flat background".into(),
    }
}

/// Zeroth-order trace flip C: Omega - (1/2) omega tr(Omega).
pub fn trace_flip(m: &MetricSpec) -> SystemDef {
    let n = m.n;
    let ctx = geo_ctx(n);
    let pairs = sym_pairs(n);
    let half = RationalFunction::constant(&ctx, BigRational::new(1.into(), 2.into()));
    let mut rows = Vec::new();
    for (i, j) in &pairs {
        let mut row = vec![DiffOp::zero(&ctx); pairs.len()];
        let c = pair_index(n, *i, *j);
        row[c] = row[c].add(&DiffOp::one(&ctx));
        if i == j {
            let w = sig_rf(&ctx, m.signature[*i]);
            for r in 0..n {
                let cr = pair_index(n, r, r);
                row[cr] = row[cr]
                    .sub(&DiffOp::from_coeff(half.mul(&w).mul(&sig_rf(&ctx, m.signature[r]))));
            }
        }
        rows.push(row);
    }
    SystemDef {
        name: format!("traceflip{}", n),
        ctx: ctx.clone(),
        unknowns: sym_names("Omega", n),
        matrix: OpMatrix::from_rows(&ctx, rows, pairs.len()).unwrap(),
        note: "algebraic trace flip".into(),
    }
}

/// Inverse of the trace flip (n != 2): Psi - (1/(n-2)) omega tr(Psi).
pub fn trace_flip_inverse(m: &MetricSpec) -> Result<SystemDef> {
    let n = m.n;
    if n == 2 {
        return Err(EngineError::UnsupportedDimension(
            "trace flip is not invertible at n = 2".into(),
        ));
    }
    let ctx = geo_ctx(n);
    let pairs = sym_pairs(n);
    let f = RationalFunction::constant(
        &ctx,
        BigRational::new(1.into(), BigInt::from(n as i64 - 2)),
    );
    let mut rows = Vec::new();
    for (i, j) in &pairs {
        let mut row = vec![DiffOp::zero(&ctx); pairs.len()];
        let c = pair_index(n, *i, *j);
        row[c] = row[c].add(&DiffOp::one(&ctx));
        if i == j {
            let w = sig_rf(&ctx, m.signature[*i]);
            for r in 0..n {
                let cr = pair_index(n, r, r);
                row[cr] = row[cr]
                    .sub(&DiffOp::from_coeff(f.mul(&w).mul(&sig_rf(&ctx, m.signature[r]))));
            }
        }
        rows.push(row);
    }
    Ok(SystemDef {
        name: format!("traceflipinv{}", n),
        ctx: ctx.clone(),
        unknowns: sym_names("Psi", n),
        matrix: OpMatrix::from_rows(&ctx, rows, pairs.len())?,
        note: "inverse trace flip".into(),
    })
}

/// Einstein operator E = C o R; construction asserts the contracted
/// divergence identity and weighted self-adjointness.
pub fn einstein(m: &MetricSpec) -> SystemDef {
    let r = ricci(m);
    let c = trace_flip(m);
    let e = c.matrix.compose(&r.matrix).unwrap();
    // div o E = 0
    let div = cauchy(m);
    assert!(
        div.matrix.compose(&e).unwrap().is_zero(),
        "divergence of the Einstein operator must vanish"
    );
    // weighted self-adjointness: W E symmetric under the plain adjoint
    let w = pairing_weights(m);
    let ones = vec![BigRational::from_integer(1.into()); e.cols];
    let we = e.weight_rescale(&w, &ones).unwrap();
    assert_eq!(we.adjoint(), we, "Einstein operator must be self-adjoint");
    SystemDef {
        name: format!("einstein{}", m.n),
        ctx: r.ctx.clone(),
        unknowns: r.unknowns.clone(),
        matrix: e,
        note: "trace-flipped linearized curvature trace".into(),
    }
}

/// Second-order curvature operator, DEFINED as the compatibility conditions
/// of the isometry system so its component count is computed, not
/// transcribed.
pub fn riemann(m: &MetricSpec, budget: &Budget) -> Result<SystemDef> {
    let k = killing(m);
    let r = cc(&k.matrix, budget)?;
    Ok(SystemDef {
        name: format!("riemann{}", m.n),
        ctx: k.ctx.clone(),
        unknowns: sym_names("Omega", m.n),
        matrix: r,
        note: "compatibility conditions of the isometry system".into(),
    })
}

/// First-order operator on curvature candidates: the compatibility
/// conditions of the curvature operator.
pub fn bianchi(m: &MetricSpec, budget: &Budget) -> Result<SystemDef> {
    let r = riemann(m, budget)?;
    let b = cc(&r.matrix, budget)?;
    Ok(SystemDef {
        name: format!("bianchi{}", m.n),
        ctx: r.ctx.clone(),
        unknowns: (1..=r.matrix.rows).map(|i| format!("R{}", i)).collect(),
        matrix: b,
        note: "compatibility conditions of the curvature operator".into(),
    })
}

/// Plane stress-function parametrization: sigma = (d22, -d12, d11) phi.
pub fn airy() -> SystemDef {
    let ctx = geo_ctx(2);
    let d1 = DiffOp::d(&ctx, 0);
    let d2 = DiffOp::d(&ctx, 1);
    let rows = vec![
        vec![d2.mul(&d2)],
        vec![d1.mul(&d2).neg()],
        vec![d1.mul(&d1)],
    ];
    SystemDef {
        name: "airy".into(),
        ctx: ctx.clone(),
        unknowns: vec!["lambda".into()],
        matrix: OpMatrix::from_rows(&ctx, rows, 1).unwrap(),
        note: "plane stress-function parametrization".into(),
    }
}

/// The classical 6x6 stress parametrization at n = 3, with or without the
/// row weights (1,2,2,1,2,1) that make it literally self-adjoint.
pub fn beltrami(weighted: bool) -> SystemDef {
    let ctx = geo_ctx(3);
    let z = || DiffOp::zero(&ctx);
    let d = |a: usize, b: usize| DiffOp::d(&ctx, a - 1).mul(&DiffOp::d(&ctx, b - 1));
    let dm = |a: usize, b: usize| d(a, b).neg();
    let dk = |k: i64, a: usize, b: usize| d(a, b).scale(&RationalFunction::from_int(&ctx, k));
    // rows sigma^11, sigma^12, sigma^13, sigma^22, sigma^23, sigma^33;
    // columns phi_11, phi_12, phi_13, phi_22, phi_23, phi_33
    let rows = vec![
        vec![z(), z(), z(), d(3, 3), dk(-2, 2, 3), d(2, 2)],
        vec![z(), dm(3, 3), d(2, 3), z(), d(1, 3), dm(1, 2)],
        vec![z(), d(2, 3), dm(2, 2), dm(1, 3), d(1, 2), z()],
        vec![d(3, 3), z(), dk(-2, 1, 3), z(), z(), d(1, 1)],
        // the (sigma^23, phi_23) entry must be -d11 for the divergence
        // identity d_r sigma^ir = 0 to hold (classical double-curl form)
        vec![dm(2, 3), d(1, 3), d(1, 2), z(), dm(1, 1), z()],
        vec![d(2, 2), dk(-2, 1, 2), z(), d(1, 1), z(), z()],
    ];
    let mut matrix = OpMatrix::from_rows(&ctx, rows, 6).unwrap();
    if weighted {
        let w: Vec<BigRational> = [1, 2, 2, 1, 2, 1]
            .iter()
            .map(|&k| BigRational::from_integer(BigInt::from(k)))
            .collect();
        let ones = vec![BigRational::from_integer(1.into()); 6];
        matrix = matrix.weight_rescale(&w, &ones).unwrap();
        assert_eq!(matrix.adjoint(), matrix, "weighted form must be self-adjoint");
    }
    SystemDef {
        name: if weighted {
            "beltrami_weighted".into()
        } else {
            "beltrami".into()
        },
        ctx: ctx.clone(),
        unknowns: sym_names("phi", 3),
        matrix,
        note: "spatial stress parametrization".into(),
    }
}

/// Medolaghi system of the plane Lie pseudogroup family with geometric
/// object omega = (alpha, beta), alpha = (1 - c x^2) dx^1, beta = dx^1 ^
/// dx^2, so that d alpha = c beta. The compatibility condition is
/// d1 eta^2 - d2 eta^1 - c eta^3, and c = 0 recovers the translation case
/// alpha = dx^1.
pub fn vessiot(c: Option<BigRational>) -> SystemDef {
    let (ctx, c_rf) = match &c {
        Some(v) => {
            let ctx = VarContext::new(vec!["x1", "x2"], vec![]).unwrap();
            let c_rf = RationalFunction::constant(&ctx, v.clone());
            (ctx, c_rf)
        }
        None => {
            let ctx = VarContext::new(vec!["x1", "x2"], vec!["c"]).unwrap();
            let c_rf = RationalFunction::var(&ctx, 2);
            (ctx, c_rf)
        }
    };
    let d1 = DiffOp::d(&ctx, 0);
    let d2 = DiffOp::d(&ctx, 1);
    // alpha_1 = 1 - c x^2
    let alpha1 = RationalFunction::one(&ctx)
        .sub(&c_rf.mul(&RationalFunction::var(&ctx, 1)));
    let rows = vec![
        // alpha_r d_1 xi^r + xi^r d_r alpha_1
        vec![d1.scale(&alpha1), DiffOp::from_coeff(c_rf.neg())],
        // alpha_r d_2 xi^r
        vec![d2.scale(&alpha1), DiffOp::zero(&ctx)],
        // beta d_r xi^r (beta = 1, constant)
        vec![d1.clone(), d2.clone()],
    ];
    SystemDef {
        name: match &c {
            Some(v) => format!("vessiot_c{}", v),
            None => "vessiot".into(),
        },
        ctx: ctx.clone(),
        unknowns: vec!["xi1".into(), "xi2".into()],
        matrix: OpMatrix::from_rows(&ctx, rows, 2).unwrap(),
        note: "plane Medolaghi system with structure constant c".into(),
    }
}

/// Two coupled pendulums on a sliding bar: x'' + l_i theta_i'' + g theta_i.
pub fn double_pendulum(equal: bool) -> SystemDef {
    let params = if equal {
        vec!["g", "l"]
    } else {
        vec!["g", "l1", "l2"]
    };
    let ctx = VarContext::new(vec!["t"], params).unwrap();
    let d = DiffOp::d(&ctx, 0);
    let dd = d.mul(&d);
    let g = RationalFunction::var(&ctx, 1);
    let (l1, l2) = if equal {
        let l = RationalFunction::var(&ctx, 2);
        (l.clone(), l)
    } else {
        (RationalFunction::var(&ctx, 2), RationalFunction::var(&ctx, 3))
    };
    let spring = |l: &RationalFunction| dd.scale(l).add(&DiffOp::from_coeff(g.clone()));
    let rows = vec![
        vec![dd.clone(), spring(&l1), DiffOp::zero(&ctx)],
        vec![dd.clone(), DiffOp::zero(&ctx), spring(&l2)],
    ];
    SystemDef {
        name: if equal {
            "pendulum_equal".into()
        } else {
            "pendulum".into()
        },
        ctx: ctx.clone(),
        unknowns: vec!["x".into(), "th1".into(), "th2".into()],
        matrix: OpMatrix::from_rows(&ctx, rows, 3).unwrap(),
        note: "two pendulums on a sliding bar".into(),
    }
}

/// The classical 4th-order single-potential parametrization of the generic
/// two-pendulum system: phi -> (x, theta_1, theta_2).
pub fn pendulum_parametrization() -> SystemDef {
    let sys = double_pendulum(false);
    let ctx = &sys.ctx;
    let d = DiffOp::d(ctx, 0);
    let d2 = d.mul(&d);
    let d4 = d2.mul(&d2);
    let g = RationalFunction::var(ctx, 1);
    let l1 = RationalFunction::var(ctx, 2);
    let l2 = RationalFunction::var(ctx, 3);
    let g2 = g.mul(&g);
    let rows = vec![
        vec![d4
            .scale(&l1.mul(&l2))
            .neg()
            .sub(&d2.scale(&g.mul(&l1.add(&l2))))
            .sub(&DiffOp::from_coeff(g2))],
        vec![d4.scale(&l2).add(&d2.scale(&g))],
        vec![d4.scale(&l1).add(&d2.scale(&g))],
    ];
    SystemDef {
        name: "pendulum_phi".into(),
        ctx: ctx.clone(),
        unknowns: vec!["phi".into()],
        matrix: OpMatrix::from_rows(ctx, rows, 1).unwrap(),
        note: "single-potential parametrization of the generic pendulum pair".into(),
    }
}

#[derive(Debug, Clone)]
pub struct LanczosReport {
    pub bianchi_rows: usize,
    pub bianchi_order: u32,
    pub potential_space: LanczosSpace,
    /// dims of the short exact sequence 0 -> L -> Lambda^2 (x) T* -> Lambda^3 -> 0
    pub sequence_dims: (usize, usize, usize),
    pub sequence_exact: bool,
    /// the first-order CC operator is parametrized by the adjoint of its own
    /// syzygy operator (module-level check)
    pub adjoint_parametrization_ok: bool,
}

/// Dimension bookkeeping of the n = 4 potential space for the adjoint of the
/// first-order curvature identities, plus the module-level parametrization
/// check ad(Riemann) = cc-image of ad(Bianchi).
pub fn lanczos_check(budget: &Budget) -> Result<LanczosReport> {
    let m = MetricSpec::euclidean(4);
    let r = riemann(&m, budget)?;
    let b = cc(&r.matrix, budget)?;
    let ls = spencer::lanczos_space(4);
    let lam3 = spencer::binom(4, 3);
    let exact = ls.dim + lam3 == ls.ambient
        && linalg::rank(&ls.constraints) == lam3;
    // ad(Riemann) is parametrized by ad(Bianchi): composition vanishes and
    // the adjoint of the curvature operator generates all CC of ad(Bianchi)
    let check = verify_parametrization(&r.matrix.adjoint(), &b.adjoint(), budget)?;
    Ok(LanczosReport {
        bianchi_rows: b.rows,
        bianchi_order: b.order().unwrap_or(0),
        sequence_dims: (ls.dim, ls.ambient, lam3),
        sequence_exact: exact,
        potential_space: ls,
        adjoint_parametrization_ok: check.composes_to_zero && check.generates_all_cc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::module_equal;

    #[test]
    fn isometry_system_shapes() {
        for n in 2..=4 {
            let k = killing(&MetricSpec::euclidean(n));
            assert_eq!(k.matrix.rows, n * (n + 1) / 2);
            assert_eq!(k.matrix.cols, n);
            assert_eq!(k.matrix.order(), Some(1));
        }
        assert!(conformal_killing(&MetricSpec::euclidean(2)).is_err());
        for n in 3..=5 {
            let c = conformal_killing(&MetricSpec::euclidean(n)).unwrap();
            assert_eq!(c.matrix.rows, n * (n + 1) / 2 - 1);
        }
    }

    #[test]
    fn adjoint_of_isometry_is_divergence() {
        for n in 2..=4 {
            let m = MetricSpec::euclidean(n);
            let k = killing(&m);
            let ones = vec![BigRational::from_integer(1.into()); n];
            let ad = weighted_adjoint(&k.matrix, &ones, &sym_weights(n)).unwrap();
            let c = cauchy(&m);
            assert!(
                module_equal(&ad, &c.matrix, &Budget::default()).unwrap(),
                "n = {}",
                n
            );
        }
    }

    #[test]
    fn einstein_identities_hold() {
        // construction asserts div o E = 0 and weighted self-adjointness
        for n in 3..=4 {
            let m = MetricSpec::euclidean(n);
            let e = einstein(&m);
            let c = trace_flip(&m);
            let r = ricci(&m);
            assert_eq!(e.matrix, c.matrix.compose(&r.matrix).unwrap());
            // trace flip is an involution up to the inverse formula
            let cinv = trace_flip_inverse(&m).unwrap();
            let id = OpMatrix::identity(&e.ctx, e.matrix.rows);
            assert_eq!(c.matrix.compose(&cinv.matrix).unwrap(), id);
        }
        // Minkowski signature as well
        einstein(&MetricSpec::minkowski(4));
    }

    #[test]
    fn wave_factor_adjoint_is_ricci() {
        let m = MetricSpec::euclidean(4);
        let e = einstein(&m);
        let cinv = trace_flip_inverse(&m).unwrap();
        let x = e.matrix.compose(&cinv.matrix).unwrap();
        let w = sym_weights(4);
        let adx = weighted_adjoint(&x, &w, &w).unwrap();
        let r = ricci(&m);
        assert!(module_equal(&adx, &r.matrix, &Budget::default()).unwrap());
    }

    #[test]
    fn plane_curvature_is_computed() {
        let r = riemann(&MetricSpec::euclidean(2), &Budget::default()).unwrap();
        assert_eq!(r.matrix.rows, 1);
        assert_eq!(r.matrix.order(), Some(2));
        let a = airy();
        // ad(curvature) equals the stress-function column up to module equality
        let w = sym_weights(2);
        let ones = vec![BigRational::from_integer(1.into()); 1];
        let ad = weighted_adjoint(&r.matrix, &w, &ones).unwrap();
        // compare as column modules: transpose both to row form
        assert_eq!(ad.rows, 3);
        assert_eq!(ad.cols, 1);
        assert!(module_equal(&ad, &a.matrix, &Budget::default()).unwrap());
    }

    #[test]
    fn spatial_parametrization_matches_adjoint_curvature() {
        // the computed curvature generators carry an arbitrary basis, so the
        // basis-independent comparison goes through the strain coordinates:
        // ad of the (stress-weighted) parametrization generates the same row
        // module as the curvature operator
        let b = beltrami(false);
        let r = riemann(&MetricSpec::euclidean(3), &Budget::default()).unwrap();
        assert_eq!(r.matrix.rows, 6);
        let ones = vec![BigRational::from_integer(1.into()); 6];
        let ad_b = weighted_adjoint(&b.matrix, &ones, &sym_weights(3)).unwrap();
        assert!(module_equal(&ad_b, &r.matrix, &Budget::default()).unwrap());
        // the weighted variant is literally self-adjoint (asserted inside)
        beltrami(true);
    }

    #[test]
    fn medolaghi_cc_matches_display() {
        // symbolic c: CC is one row, (-d2, d1, -c) up to a unit
        let v = vessiot(None);
        let c = cc(&v.matrix, &Budget::default()).unwrap();
        assert_eq!(c.rows, 1);
        let ctx = &v.ctx;
        let expected = OpMatrix::from_rows(
            ctx,
            vec![vec![
                DiffOp::d(ctx, 1).neg(),
                DiffOp::d(ctx, 0),
                DiffOp::from_coeff(RationalFunction::var(ctx, 2).neg()),
            ]],
            3,
        )
        .unwrap();
        assert!(module_equal(&c, &expected, &Budget::default()).unwrap());
    }

    #[test]
    fn pendulum_parametrization_composes_to_zero() {
        let sys = double_pendulum(false);
        let p = pendulum_parametrization();
        assert!(sys.matrix.compose(&p.matrix).unwrap().is_zero());
    }

    #[test]
    fn potential_space_bookkeeping() {
        let rep = lanczos_check(&Budget::default()).unwrap();
        assert_eq!(rep.bianchi_rows, 20);
        assert_eq!(rep.bianchi_order, 1);
        assert_eq!(rep.sequence_dims, (20, 24, 4));
        assert!(rep.sequence_exact);
        assert!(rep.adjoint_parametrization_ok);
    }
}
