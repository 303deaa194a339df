//! Finite-dimensional exact linear algebra on symbol spaces: prolongations,
//! delta-maps on wedge products, and delta-cohomology dimensions.
//!
//! Symmetric multi-indices are stored sorted without multiplicity weights;
//! the combinatorial factors of the delta-maps are carried explicitly in the
//! matrix entries.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::homology::monomials_of_degree;
use crate::linalg;
use crate::ops::DerivExp;

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![vec![]];
    }
    if s > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..s).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic s-subset of {0..n-1}
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (s - i) {
                cur[i] += 1;
                for j in i + 1..s {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A subspace g_q of S_q T* (x) T cut by exact rational constraints on the
/// ambient coordinates (k, mu) with |mu| = q, k the T-index.
#[derive(Debug, Clone)]
pub struct SymbolSpace {
    pub n: usize,
    pub q: u32,
    /// rows over the ambient coordinate list `coords(n, q)`
    pub constraints: Vec<Vec<BigRational>>,
    pub dim: usize,
}

/// Ambient coordinate list of S_q T* (x) T: (k, mu), k-major.
pub fn sym_coords(n: usize, q: u32) -> Vec<(usize, DerivExp)> {
    let mus = monomials_of_degree(n, q);
    (0..n)
        .flat_map(|k| mus.iter().map(move |m| (k, m.clone())))
        .collect()
}

impl SymbolSpace {
    pub fn new(n: usize, q: u32, constraints: Vec<Vec<BigRational>>) -> SymbolSpace {
        let ambient = n * binom(n + q as usize - 1, q as usize);
        for c in &constraints {
            assert_eq!(c.len(), ambient, "constraint length");
        }
        let dim = ambient - linalg::rank(&constraints);
        SymbolSpace {
            n,
            q,
            constraints,
            dim,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n * binom(self.n + self.q as usize - 1, self.q as usize)
    }
}

/// First-order symbol of the isometry system for a diagonal metric with the
/// given signature: s_j v^j_i + s_i v^i_j = 0 for i <= j.
pub fn killing_symbol(n: usize, sig: &[i64]) -> SymbolSpace {
    assert_eq!(sig.len(), n);
    let coords = sym_coords(n, 1);
    let idx: BTreeMap<_, _> = coords.iter().cloned().zip(0..).collect();
    let e = |i: usize| -> DerivExp {
        let mut m: DerivExp = std::iter::repeat(0).take(n).collect();
        m[i] = 1;
        m
    };
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = vec![BigRational::zero(); coords.len()];
            row[idx[&(j, e(i))]] += BigRational::from_integer(sig[j].into());
            row[idx[&(i, e(j))]] += BigRational::from_integer(sig[i].into());
            rows.push(row);
        }
    }
    SymbolSpace::new(n, 1, rows)
}

/// Trace-free part of the isometry symbol (conformal case).
pub fn conformal_symbol(n: usize, sig: &[i64]) -> SymbolSpace {
    assert_eq!(sig.len(), n);
    let coords = sym_coords(n, 1);
    let idx: BTreeMap<_, _> = coords.iter().cloned().zip(0..).collect();
    let e = |i: usize| -> DerivExp {
        let mut m: DerivExp = std::iter::repeat(0).take(n).collect();
        m[i] = 1;
        m
    };
    let nn = BigRational::from_integer((n as i64).into());
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = vec![BigRational::zero(); coords.len()];
            row[idx[&(j, e(i))]] += BigRational::from_integer(sig[j].into());
            row[idx[&(i, e(j))]] += BigRational::from_integer(sig[i].into());
            if i == j {
                // subtract (1/n) * omega_ii * trace; with omega^rr = s_r the
                // weighted trace of Omega is 2 sum_r v^r_r for any signature
                let w = BigRational::from_integer(sig[i].into());
                for r in 0..n {
                    row[idx[&(r, e(r))]] -=
                        BigRational::from_integer(2.into()) * &w / &nn;
                }
            }
            rows.push(row);
        }
    }
    SymbolSpace::new(n, 1, rows)
}

/// Unconstrained symbol S_q T* (x) T.
pub fn full_symbol(n: usize, q: u32) -> SymbolSpace {
    SymbolSpace::new(n, q, vec![])
}

/// g_{q+1} = {w : all formal derivatives of w lie in g_q}.
pub fn prolong(g: &SymbolSpace) -> SymbolSpace {
    let n = g.n;
    let q = g.q;
    let src = sym_coords(n, q);
    let tgt = sym_coords(n, q + 1);
    let tgt_idx: BTreeMap<_, _> = tgt.iter().cloned().zip(0..).collect();
    let mut rows = Vec::new();
    for c in &g.constraints {
        for i in 0..n {
            let mut row = vec![BigRational::zero(); tgt.len()];
            for (ci, (k, mu)) in src.iter().enumerate() {
                if c[ci].is_zero() {
                    continue;
                }
                let mut nu = mu.clone();
                nu[i] += 1;
                row[tgt_idx[&(*k, nu)]] += &c[ci];
            }
            rows.push(row);
        }
    }
    SymbolSpace::new(n, q + 1, rows)
}

/// Coordinates of Lambda^s T* (x) S_q T* (x) T, J-major.
fn wedge_coords(n: usize, s: usize, q: u32) -> Vec<(Vec<usize>, usize, DerivExp)> {
    let inner = sym_coords(n, q);
    subsets(n, s)
        .into_iter()
        .flat_map(|j| {
            inner
                .iter()
                .map(move |(k, mu)| (j.clone(), *k, mu.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Ambient delta-map Lambda^s (x) S_q (x) T -> Lambda^{s+1} (x) S_{q-1} (x) T:
/// (delta u)^k_{J', nu} = sum_t (-1)^t u^k_{J' \ j_t, nu + e_{j_t}}.
pub fn delta_matrix(n: usize, s: usize, q: u32) -> Vec<Vec<BigRational>> {
    assert!(q >= 1);
    let src = wedge_coords(n, s, q);
    let tgt = wedge_coords(n, s + 1, q - 1);
    let src_idx: BTreeMap<_, _> = src.iter().cloned().zip(0..).collect();
    let mut mat = vec![vec![BigRational::zero(); src.len()]; tgt.len()];
    for (ri, (jset, k, nu)) in tgt.iter().enumerate() {
        for (t, jt) in jset.iter().enumerate() {
            let mut jrest = jset.clone();
            jrest.remove(t);
            let mut mu = nu.clone();
            mu[*jt] += 1;
            let ci = src_idx[&(jrest, *k, mu)];
            let sign = if t % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            mat[ri][ci] += sign;
        }
    }
    mat
}

/// Constraints of g replicated over each wedge factor, in the layout of
/// `wedge_coords(n, s, g.q)`.
fn wedge_constraints(g: &SymbolSpace, s: usize) -> Vec<Vec<BigRational>> {
    let n = g.n;
    let inner = g.ambient_dim();
    let nsub = binom(n, s);
    let total = nsub * inner;
    let mut rows = Vec::new();
    for b in 0..nsub {
        for c in &g.constraints {
            let mut row = vec![BigRational::zero(); total];
            row[b * inner..(b + 1) * inner].clone_from_slice(c);
            rows.push(row);
        }
    }
    rows
}

/// Basis of the solution space of the constraints in the given ambient
/// dimension.
fn subspace_basis(constraints: &[Vec<BigRational>], ambient: usize) -> Vec<Vec<BigRational>> {
    if constraints.is_empty() {
        return (0..ambient)
            .map(|i| {
                let mut v = vec![BigRational::zero(); ambient];
                v[i] = BigRational::one();
                v
            })
            .collect();
    }
    linalg::kernel_basis(constraints, &BigRational::zero(), &BigRational::one())
}

fn mat_mul_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v.iter())
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|arow| {
            let mut out = vec![BigRational::zero(); cols];
            for (c, brow) in arow.iter().zip(b.iter()) {
                if c.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(brow.iter()) {
                    *o += c * x;
                }
            }
            out
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DeltaComplexReport {
    pub n: usize,
    /// dim Lambda^s (x) g for s = 0..=s_max
    pub dims: Vec<usize>,
    /// rank of delta restricted to Lambda^s (x) g
    pub ranks: Vec<usize>,
    /// H^s(g) for s = 0..=s_max
    pub cohomology: Vec<usize>,
}

/// Delta-cohomology dims H^s(g1) for s = 0..=s_max, for a first-order symbol
/// g1 (with g0 the full tangent space): kernels of
/// delta: Lambda^s (x) g1 -> Lambda^{s+1} (x) g0 modulo images of
/// delta: Lambda^{s-1} (x) g2 -> Lambda^s (x) g1, with g2 = prolong(g1).
pub fn delta_complex(g1: &SymbolSpace, s_max: usize) -> DeltaComplexReport {
    assert_eq!(g1.q, 1, "first-order symbol expected");
    let n = g1.n;
    assert!(s_max <= n);
    let g2 = prolong(g1);
    let mut dims = Vec::new();
    let mut ranks = Vec::new();
    let mut cohomology = Vec::new();
    for s in 0..=s_max {
        let ambient1 = binom(n, s) * g1.ambient_dim();
        let c1 = wedge_constraints(g1, s);
        let dim_s = ambient1 - linalg::rank(&c1);
        assert_eq!(dim_s, binom(n, s) * g1.dim);
        let d1 = delta_matrix(n, s, 1);
        // kernel inside the subspace: stack constraints over delta
        let mut stacked = c1;
        stacked.extend(d1.iter().cloned());
        let ker = linalg::nullity(&stacked, ambient1);
        ranks.push(dim_s - ker);
        let im = if s == 0 {
            0
        } else {
            let d2 = delta_matrix(n, s - 1, 2);
            // delta o delta = 0 on the ambient spaces
            let comp = mat_mul(&d1, &d2);
            assert!(
                comp.iter().all(|r| r.iter().all(|x| x.is_zero())),
                "delta squared must vanish"
            );
            let c2 = wedge_constraints(&g2, s - 1);
            let b2 = subspace_basis(&c2, binom(n, s - 1) * g2.ambient_dim());
            let image: Vec<Vec<BigRational>> =
                b2.iter().map(|v| mat_mul_vec(&d2, v)).collect();
            linalg::rank(&image)
        };
        assert!(ker >= im);
        dims.push(dim_s);
        cohomology.push(ker - im);
    }
    DeltaComplexReport {
        n,
        dims,
        ranks,
        cohomology,
    }
}

#[derive(Debug, Clone)]
pub struct LanczosSpace {
    pub n: usize,
    /// ambient dim of Lambda^2 T* (x) T*
    pub ambient: usize,
    /// cyclic-sum rows, one per triple i < j < k (also the map to Lambda^3)
    pub constraints: Vec<Vec<BigRational>>,
    pub dim: usize,
}

/// The subspace of Lambda^2 T* (x) T* cut by the cyclic condition
/// L_{ij,k} + L_{jk,i} + L_{ki,j} = 0; coordinates L_{ij,k} with i < j.
pub fn lanczos_space(n: usize) -> LanczosSpace {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let idx: BTreeMap<_, _> = pairs
        .iter()
        .enumerate()
        .flat_map(|(pi, p)| (0..n).map(move |k| ((p.0, p.1, k), pi * n + k)))
        .collect();
    let ambient = pairs.len() * n;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut row = vec![BigRational::zero(); ambient];
                // L_{ki,j} = -L_{ik,j} by antisymmetry in the first pair
                row[idx[&(i, j, k)]] += BigRational::one();
                row[idx[&(j, k, i)]] += BigRational::one();
                row[idx[&(i, k, j)]] -= BigRational::one();
                rows.push(row);
            }
        }
    }
    let dim = ambient - linalg::rank(&rows);
    LanczosSpace {
        n,
        ambient,
        constraints: rows,
        dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(n: usize) -> Vec<i64> {
        vec![1; n]
    }

    fn minkowski(n: usize) -> Vec<i64> {
        let mut s = vec![1; n];
        s[n - 1] = -1;
        s
    }

    #[test]
    fn isometry_symbol_dims_and_prolongation() {
        for n in 2..=5 {
            let g1 = killing_symbol(n, &euclid(n));
            assert_eq!(g1.dim, n * (n - 1) / 2);
            let g2 = prolong(&g1);
            assert_eq!(g2.dim, 0, "g2 = 0 at n = {}", n);
        }
    }

    #[test]
    fn free_symbol_prolongs_freely() {
        let g1 = full_symbol(3, 1);
        assert_eq!(g1.dim, 9);
        let g2 = prolong(&g1);
        // S_2 T* (x) T at n = 3
        assert_eq!(g2.dim, 3 * 6);
    }

    #[test]
    fn isometry_cohomology_closed_forms() {
        for n in 2..=5 {
            let g1 = killing_symbol(n, &euclid(n));
            let rep = delta_complex(&g1, n.min(3));
            let h2 = n * n * (n * n - 1) / 12;
            let h3 = n * n * (n * n - 1) * (n - 2) / 24;
            assert_eq!(rep.cohomology[0], 0);
            assert_eq!(rep.cohomology[1], 0);
            assert_eq!(rep.cohomology[2], h2, "H^2 at n = {}", n);
            if n >= 3 {
                assert_eq!(rep.cohomology[3], h3, "H^3 at n = {}", n);
            }
        }
    }

    #[test]
    fn free_symbol_is_involutive() {
        let g1 = full_symbol(3, 1);
        let rep = delta_complex(&g1, 3);
        for s in 1..=3 {
            assert_eq!(rep.cohomology[s], 0);
        }
    }

    #[test]
    fn conformal_prolongations() {
        for n in 3..=5 {
            let g1 = conformal_symbol(n, &euclid(n));
            assert_eq!(g1.dim, n * (n - 1) / 2 + 1);
            let g2 = prolong(&g1);
            assert_eq!(g2.dim, n, "conformal g2 at n = {}", n);
            let g3 = prolong(&g2);
            assert_eq!(g3.dim, 0, "conformal g3 at n = {}", n);
        }
    }

    #[test]
    fn signature_does_not_change_dimensions() {
        let n = 4;
        let (e, m) = (euclid(n), minkowski(n));
        assert_eq!(killing_symbol(n, &e).dim, killing_symbol(n, &m).dim);
        assert_eq!(conformal_symbol(n, &e).dim, conformal_symbol(n, &m).dim);
        let re = delta_complex(&killing_symbol(n, &e), 3);
        let rm = delta_complex(&killing_symbol(n, &m), 3);
        assert_eq!(re.cohomology, rm.cohomology);
        assert_eq!(
            prolong(&conformal_symbol(n, &e)).dim,
            prolong(&conformal_symbol(n, &m)).dim
        );
    }

    #[test]
    fn cyclic_potential_space_dims() {
        // ambient - independent cyclic constraints; at n = 2 the cyclic sum
        // imposes nothing (it needs three distinct indices)
        assert_eq!(lanczos_space(2).dim, 2);
        assert_eq!(lanczos_space(3).dim, 8);
        let l4 = lanczos_space(4);
        assert_eq!(l4.ambient, 24);
        assert_eq!(l4.dim, 20);
        // the cyclic map onto Lambda^3 is surjective: 20 - 24 + 4 = 0
        assert_eq!(linalg::rank(&l4.constraints), 4);
    }
}
