//! Null-correlation monad data and finite-field zero-locus certificates.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::form::Form;
use crate::weights::DegreeLedger;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// The column g = (g_0..g_{2n+1}) and the constant antisymmetric f of a monad
/// O(−1) → V⊗O → O(1).
#[derive(Clone, Debug)]
pub struct MonadData {
    pub g: Vec<Form>,
    pub f: Vec<Vec<Scalar>>,
    pub ledger: DegreeLedger,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeFailure {
    pub index: usize,
    pub expected: i64,
    pub found: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonadReport {
    /// False when the degree check fails, since gᵀfg is then not computed.
    pub composition_zero: bool,
    pub residual_terms: usize,
    pub degree_failures: Vec<DegreeFailure>,
    pub antisymmetric: bool,
    pub nondegenerate: bool,
    pub quotient_rank: usize,
    pub null_correlation_rank: usize,
    pub ok: bool,
}

/// Antidiagonal matrix with −r_p at (p, 2n+1−p) and r_p at the mirror position.
pub fn antidiagonal_f(field: Field, r: &[Scalar]) -> Vec<Vec<Scalar>> {
    let size = 2 * r.len();
    let mut f = vec![vec![field.zero(); size]; size];
    for (p, rp) in r.iter().enumerate() {
        f[p][size - 1 - p] = field.neg(rp);
        f[size - 1 - p][p] = rp.clone();
    }
    f
}

/// gᵀ·f·g computed symbolically.
pub fn composition(g: &[Form], f: &[Vec<Scalar>]) -> Result<Form> {
    let first = g.first().ok_or_else(|| Error::ShapeMismatch("empty g".into()))?;
    if f.len() != g.len() || f.iter().any(|r| r.len() != g.len()) {
        return Err(Error::ShapeMismatch("f must be square of the size of g".into()));
    }
    let mut acc = Form::zero(first.field(), first.nvars(), 0);
    for (i, gi) in g.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            if first.field().is_zero(&f[i][j]) {
                continue;
            }
            acc = acc.add(&gi.mul(gj)?.scale(&f[i][j]))?;
        }
    }
    Ok(acc)
}

pub fn verify_monad(m: &MonadData) -> Result<MonadReport> {
    let size = m.g.len();
    let n = m.ledger.n() as usize;
    if size != 2 * n + 2 {
        return Err(Error::ShapeMismatch(format!("g has {size} entries, expected {}", 2 * n + 2)));
    }
    let field = m.g[0].field();
    let degree_failures: Vec<DegreeFailure> = m
        .g
        .iter()
        .zip(&m.ledger.g_degrees)
        .enumerate()
        .filter(|(_, (g, &d))| !g.is_zero() && g.degree() as i64 != d)
        .map(|(index, (g, &expected))| DegreeFailure { index, expected, found: g.degree() })
        .collect();
    // gᵀfg is only a form when the g_i have the prescribed degrees.
    let comp = if degree_failures.is_empty() { Some(composition(&m.g, &m.f)?) } else { None };
    let composition_zero = comp.as_ref().is_some_and(Form::is_zero);
    let antisymmetric = (0..size).all(|i| {
        (0..size).all(|j| field.add(&m.f[i][j], &m.f[j][i]) == field.zero())
    });
    let nondegenerate = (0..size).all(|p| !field.is_zero(&m.f[p][size - 1 - p]))
        && (0..size).all(|i| (0..size).all(|j| j == size - 1 - i || field.is_zero(&m.f[i][j])));
    let ok = composition_zero && antisymmetric && nondegenerate;
    Ok(MonadReport {
        composition_zero,
        residual_terms: comp.as_ref().map_or(0, Form::num_terms),
        degree_failures,
        antisymmetric,
        nondegenerate,
        quotient_rank: 2 * n + 1,
        null_correlation_rank: 2 * n,
        ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub prime: u32,
    pub points_checked: u64,
    /// First common zero in enumeration order, if any.
    pub witness: Option<Vec<u32>>,
}

impl Certificate {
    pub fn is_empty(&self) -> bool {
        self.witness.is_none()
    }
}

/// Number of points of P^{v−1}(F_p): (p^v − 1)/(p − 1).
pub fn projective_point_count(p: u32, v: usize) -> u64 {
    let p = p as u64;
    (0..v).map(|k| p.pow(k as u32)).sum()
}

/// The idx-th normalized point of P^{v−1}(F_p) in increasing lexicographic order of
/// coordinate tuples (first nonzero coordinate equal to 1).
pub fn projective_point(p: u32, v: usize, mut idx: u64) -> Vec<u32> {
    let p64 = p as u64;
    // Points whose leading 1 sits at position k form a block of p^{v−1−k} tuples; the
    // block with the largest k comes first.
    for k in (0..v).rev() {
        let block = p64.pow((v - 1 - k) as u32);
        if idx < block {
            let mut pt = vec![0u32; v];
            pt[k] = 1;
            for pos in (k + 1..v).rev() {
                pt[pos] = (idx % p64) as u32;
                idx /= p64;
            }
            return pt;
        }
        idx -= block;
    }
    unreachable!("index beyond the point count")
}

struct ModForm {
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModForm {
    fn eval(&self, pt: &[u32], p: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (x, &k) in pt.iter().zip(e) {
                for _ in 0..k {
                    t = t * (*x as u64) % p;
                }
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

/// Exhaustive search of P^{v−1}(F_p) for a common zero of `forms` (rational forms are
/// reduced mod p). Points are scanned in parallel; the reported witness is the first
/// one in enumeration order.
pub fn zero_locus_certificate(forms: &[Form], p: u32) -> Result<Certificate> {
    let field = Field::prime(p as u64)?;
    let v = match forms.first() {
        Some(f) => f.nvars(),
        None => return Err(Error::ShapeMismatch("no forms".into())),
    };
    let mut reduced = Vec::with_capacity(forms.len());
    for f in forms {
        if f.nvars() != v {
            return Err(Error::ArityMismatch { expected: v, got: f.nvars() });
        }
        let r = f.to_field(field)?;
        let terms = r
            .terms()
            .map(|(e, c)| (e.clone(), c.to_bigint().expect("residue").try_into().expect("small")))
            .collect();
        reduced.push(ModForm { terms });
    }
    let count = projective_point_count(p, v);
    let p64 = p as u64;
    let witness = (0..count)
        .into_par_iter()
        .find_first(|&i| {
            let pt = projective_point(p, v, i);
            reduced.iter().all(|f| f.eval(&pt, p64) == 0)
        })
        .map(|i| projective_point(p, v, i));
    Ok(Certificate { prime: p, points_checked: count, witness })
}

pub fn certificates(forms: &[Form], primes: &[u32]) -> Result<Vec<Certificate>> {
    primes.iter().map(|&p| zero_locus_certificate(forms, p)).collect()
}
