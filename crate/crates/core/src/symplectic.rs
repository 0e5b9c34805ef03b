//! The invariant pairing on Λ²S^{2n+1}U, its weight spaces, and the symplectic form f_W
//! attached to a hyperplane of the top weight space.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// z_{p,q} = x^{2n+1−p}y^p ∧ x^{2n+1−q}y^q with p < q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Wedge {
    pub p: usize,
    pub q: usize,
}

impl Wedge {
    pub fn new(n: usize, p: usize, q: usize) -> Result<Wedge> {
        let top = 2 * n + 1;
        if q > top {
            return Err(Error::IndexOutOfRange { index: q, bound: top });
        }
        if p >= q {
            return Err(Error::InvalidParams(format!("z_{{{p},{q}}} needs p < q")));
        }
        Ok(Wedge { p, q })
    }
}

/// A linear combination of wedge basis elements.
pub type WedgeVector = BTreeMap<Wedge, BigRational>;

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// ⟨z_{i,j}, z_{s,t}⟩ = (−1)^{i+j+1} i! t! j! s! if j + s = 2n+1 and i + t = 2n+1, else 0.
pub fn pairing_basis(n: usize, a: Wedge, b: Wedge) -> BigInt {
    let top = 2 * n + 1;
    let (i, j, s, t) = (a.p, a.q, b.p, b.q);
    if j + s != top || i + t != top {
        return BigInt::zero();
    }
    let v = factorial(i) * factorial(t) * factorial(j) * factorial(s);
    if (i + j + 1) % 2 == 0 {
        v
    } else {
        -v
    }
}

pub fn pairing(n: usize, a: &WedgeVector, b: &WedgeVector) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (wa, ca) in a {
        Wedge::new(n, wa.p, wa.q)?;
        for (wb, cb) in b {
            Wedge::new(n, wb.p, wb.q)?;
            let v = pairing_basis(n, *wa, *wb);
            if !v.is_zero() {
                acc += ca * cb * BigRational::from_integer(v);
            }
        }
    }
    Ok(acc)
}

pub fn wedge_basis(n: usize) -> Vec<Wedge> {
    let top = 2 * n + 1;
    (0..=top).flat_map(|p| (p + 1..=top).map(move |q| Wedge { p, q })).collect()
}

/// E_k spanned by z_{p,q} with p + q = k, for k = 1..=4n+1.
pub fn weight_decomposition(n: usize) -> BTreeMap<usize, Vec<Wedge>> {
    let mut out: BTreeMap<usize, Vec<Wedge>> = (1..=4 * n + 1).map(|k| (k, Vec::new())).collect();
    for w in wedge_basis(n) {
        out.get_mut(&(w.p + w.q)).expect("weight in range").push(w);
    }
    out
}

/// Top weight basis z_{p, 2n+1−p}, p = 0..=n.
pub fn top_basis(n: usize) -> Vec<Wedge> {
    (0..=n).map(|p| Wedge { p, q: 2 * n + 1 - p }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FwResult {
    pub n: usize,
    /// Coefficients f_p of f = Σ f_p z_{p,2n+1−p}.
    pub coefficients: Vec<String>,
    /// Def-style antidiagonal entries: row p, column 2n+1−p holds −r_p.
    pub r: Vec<String>,
    /// (2n+2)×(2n+2) antisymmetric matrix with entry (p, 2n+1−p) = f_p.
    pub matrix: Vec<Vec<String>>,
    /// Basis of the hyperplane used for the orthogonality check.
    pub hyperplane_basis: Vec<Vec<String>>,
    pub orthogonal: bool,
    pub nondegenerate: bool,
    pub self_pairing: String,
    #[serde(skip)]
    pub f: Vec<BigRational>,
    #[serde(skip)]
    pub f_matrix: Vec<Vec<BigRational>>,
}

fn top_vector(n: usize, coeffs: &[BigRational]) -> WedgeVector {
    top_basis(n).into_iter().zip(coeffs.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect()
}

/// Basis of ker λ inside E_{2n+1}, pivoting on the first nonzero coordinate k:
/// one vector λ_k e_j − λ_j e_k per j ≠ k.
pub fn hyperplane_basis(functional: &[BigRational]) -> Vec<Vec<BigRational>> {
    let k = functional.len();
    let Some(piv) = functional.iter().position(|c| !c.is_zero()) else {
        return Vec::new();
    };
    (0..k)
        .filter(|&j| j != piv)
        .map(|j| {
            let mut v = vec![BigRational::zero(); k];
            v[j] = functional[piv].clone();
            v[piv] = -functional[j].clone();
            v
        })
        .collect()
}

/// f orthogonal to W_{2n+1} = ker λ. Since the pairing is diagonal on E_{2n+1} with
/// D_p = (p!(2n+1−p)!)², f_p = λ_p / D_p.
pub fn build_fw(n: usize, functional: &[BigRational]) -> Result<FwResult> {
    if functional.len() != n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "functional has {} coordinates, expected {}",
            functional.len(),
            n + 1
        )));
    }
    if functional.iter().all(Zero::is_zero) {
        return Err(Error::InvalidParams("zero functional does not define a hyperplane".into()));
    }
    let basis = top_basis(n);
    let f: Vec<BigRational> = basis
        .iter()
        .zip(functional)
        .map(|(w, l)| l / BigRational::from_integer(pairing_basis(n, *w, *w)))
        .collect();
    if let Some(p) = f.iter().position(Zero::is_zero) {
        return Err(Error::DegenerateW(p));
    }
    let fv = top_vector(n, &f);
    let hb = hyperplane_basis(functional);
    let mut orthogonal = true;
    for w in &hb {
        if !pairing(n, &fv, &top_vector(n, w))?.is_zero() {
            orthogonal = false;
        }
    }
    let size = 2 * n + 2;
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for (p, c) in f.iter().enumerate() {
        m[p][size - 1 - p] = c.clone();
        m[size - 1 - p][p] = -c.clone();
    }
    let self_pairing = pairing(n, &fv, &fv)?;
    let show = |v: &[BigRational]| v.iter().map(|c| Scalar::Q(c.clone()).to_string()).collect();
    Ok(FwResult {
        n,
        coefficients: show(&f),
        r: show(&f.iter().map(|c| -c).collect::<Vec<_>>()),
        matrix: m.iter().map(|r| show(r)).collect(),
        hyperplane_basis: hb.iter().map(|v| show(v)).collect(),
        orthogonal,
        nondegenerate: true,
        self_pairing: Scalar::Q(self_pairing).to_string(),
        f,
        f_matrix: m,
    })
}

/// If every nonzero f_ij has the same weight sum a_i + a_j, returns (true, Some(d)).
/// The zero matrix is vacuously invariant with no exponent.
pub fn check_sigma_invariance(f: &[Vec<BigRational>], weights: &[i64]) -> (bool, Option<i64>) {
    let mut d = None;
    for (i, row) in f.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let s = weights[i] + weights[j];
            match d {
                None => d = Some(s),
                Some(x) if x != s => return (false, None),
                _ => {}
            }
        }
    }
    (true, d)
}

/// σ-weights (2n+1−p)α + pβ of e_p = x^{2n+1−p}y^p.
pub fn sigma_weights(n: usize, alpha: i64, beta: i64) -> Vec<i64> {
    let top = 2 * n as i64 + 1;
    (0..=top).map(|p| (top - p) * alpha + p * beta).collect()
}

/// A 2-vector w ∈ Λ²K^m (given as an antisymmetric matrix) is decomposable iff all its
/// 4×4 pfaffians vanish. Evidence only: used as a probe on sampled elements over F_p.
pub fn is_decomposable(field: Field, w: &[Vec<Scalar>]) -> bool {
    let m = w.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let t1 = field.mul(&w[a][b], &w[c][d]);
                    let t2 = field.mul(&w[a][c], &w[b][d]);
                    let t3 = field.mul(&w[a][d], &w[b][c]);
                    let pf = field.add(&field.sub(&t1, &t2), &t3);
                    if !field.is_zero(&pf) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
