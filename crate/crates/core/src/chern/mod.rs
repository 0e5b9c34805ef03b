//! Truncated characteristic-class calculus on P^N: total Chern classes in Q[h]/(h^{N+1}),
//! Chern character, Todd class, Euler characteristic polynomials, and the Chern classes
//! of sheaves pushed forward from a thickened hyperplane.

mod report;

pub use report::{
    binet_cauchy_twists, bundle_invariants_report, Construction, InvariantRecord, InvariantsReport,
};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub type Series = Vec<BigRational>;

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn ratb(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

pub fn series_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a series with nonzero constant term, truncated at degree n.
pub fn series_inv(a: &[BigRational], n: usize) -> Series {
    let a0 = a[0].clone();
    assert!(!a0.is_zero(), "series is not invertible");
    let mut out = vec![BigRational::zero(); n + 1];
    out[0] = a0.recip();
    for k in 1..=n {
        let mut s = BigRational::zero();
        for i in 1..=k.min(a.len() - 1) {
            s += &a[i] * &out[k - i];
        }
        out[k] = -s / &a0;
    }
    out
}

fn factorial(k: usize) -> BigRational {
    (1..=k).fold(BigRational::one(), |acc, i| acc * rat(i as i64))
}

/// Rank plus total Chern class 1 + c₁h + … + c_N h^N on P^N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernData {
    pub ambient_dim: usize,
    pub rank: i64,
    #[serde(serialize_with = "ser_series")]
    pub total: Series,
}

fn ser_series<S: serde::Serializer>(s: &Series, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(s.len()))?;
    for c in s {
        seq.serialize_element(&fmt_rat(c))?;
    }
    seq.end()
}

pub fn fmt_rat(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl ChernData {
    /// Classes c₁, c₂, … (missing ones are zero, extra ones are truncated).
    pub fn new(ambient_dim: usize, rank: i64, classes: &[BigRational]) -> ChernData {
        let mut total = vec![BigRational::zero(); ambient_dim + 1];
        total[0] = BigRational::one();
        for (i, c) in classes.iter().enumerate().take(ambient_dim) {
            total[i + 1] = c.clone();
        }
        ChernData { ambient_dim, rank, total }
    }

    pub fn from_ints(ambient_dim: usize, rank: i64, classes: &[i64]) -> ChernData {
        let cs: Vec<_> = classes.iter().map(|&c| rat(c)).collect();
        ChernData::new(ambient_dim, rank, &cs)
    }

    pub fn c(&self, i: usize) -> BigRational {
        self.total.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Integer classes c₁..c_N, or IntegralityViolation.
    pub fn integral_classes(&self) -> Result<Vec<BigInt>> {
        self.total[1..]
            .iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::IntegralityViolation(fmt_rat(c)))
                }
            })
            .collect()
    }

    /// c(E*): c_i ↦ (−1)^i c_i.
    pub fn dual(&self) -> ChernData {
        let total = self
            .total
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        ChernData { total, ..self.clone() }
    }

    /// c(E(k)) = Σ_i c_i (1 + kh)^{r−i} h^i.
    pub fn twist(&self, k: i64) -> ChernData {
        let n = self.ambient_dim;
        let r = self.rank;
        let mut out = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            let ci = self.c(i);
            if ci.is_zero() {
                continue;
            }
            // (1 + kh)^{r−i} as a truncated series; negative exponents are fine.
            let base = vec![BigRational::one(), rat(k)];
            let e = r - i as i64;
            let mut pw = vec![BigRational::one()];
            let factor = if e >= 0 { base } else { series_inv(&base, n) };
            for _ in 0..e.unsigned_abs() {
                pw = series_mul(&pw, &factor, n);
            }
            for (j, v) in pw.iter().enumerate() {
                if i + j <= n {
                    out[i + j] += &ci * v;
                }
            }
        }
        ChernData { total: out, ..self.clone() }
    }

    /// "1 - 2h + 4h^2" style rendering without trailing zero classes.
    pub fn polynomial_string(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.total.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coef = fmt_rat(&a);
            match i {
                0 => s.push_str(&coef),
                _ => {
                    if !a.is_one() {
                        s.push_str(&coef);
                    }
                    s.push('h');
                    if i > 1 {
                        s.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// c(⊕O(a_i)) = Π(1 + a_i h).
pub fn chern_of_twist_sum(twists: &[i64], n: usize) -> ChernData {
    let mut total = vec![BigRational::zero(); n + 1];
    total[0] = BigRational::one();
    for &a in twists {
        total = series_mul(&total, &[BigRational::one(), rat(a)], n);
    }
    ChernData { ambient_dim: n, rank: twists.len() as i64, total }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Position {
    Sub,
    Quot,
}

/// Given the middle term of 0 → S → M → Q → 0 and one of the ends, returns the other:
/// c = c(M)/c(known), rank = rank(M) − rank(known).
pub fn exact_seq_solve(mid: &ChernData, known: &ChernData, _known_is: Position) -> Result<ChernData> {
    if mid.ambient_dim != known.ambient_dim {
        return Err(Error::ShapeMismatch(format!(
            "ambient dimensions {} and {}",
            mid.ambient_dim, known.ambient_dim
        )));
    }
    let n = mid.ambient_dim;
    let total = series_mul(&mid.total, &series_inv(&known.total, n), n);
    Ok(ChernData { ambient_dim: n, rank: mid.rank - known.rank, total })
}

/// Power sums of the Chern roots from the elementary symmetric functions (Newton).
fn power_sums(c: &ChernData) -> Series {
    let n = c.ambient_dim;
    let mut p = vec![BigRational::zero(); n + 1];
    p[0] = rat(c.rank);
    for k in 1..=n {
        let mut s = rat(k as i64) * c.c(k) * if k % 2 == 1 { rat(1) } else { rat(-1) };
        for i in 1..k {
            let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
            s += sign * c.c(i) * &p[k - i];
        }
        p[k] = s;
    }
    p
}

/// ch(E) = r + Σ p_k/k! h^k.
pub fn chern_character(c: &ChernData) -> Series {
    power_sums(c).iter().enumerate().map(|(k, pk)| pk / factorial(k)).collect()
}

/// Chern classes from a Chern character (inverse Newton identities).
pub fn chern_from_character(ch: &[BigRational], rank: i64) -> ChernData {
    let n = ch.len() - 1;
    let p: Vec<BigRational> = ch.iter().enumerate().map(|(k, x)| x * factorial(k)).collect();
    let mut e = vec![BigRational::zero(); n + 1];
    e[0] = BigRational::one();
    for k in 1..=n {
        let mut s = BigRational::zero();
        for i in 1..=k {
            let sign = if i % 2 == 1 { rat(1) } else { rat(-1) };
            s += sign * &e[k - i] * &p[i];
        }
        e[k] = s / rat(k as i64);
    }
    ChernData { ambient_dim: n, rank, total: e }
}

/// td(P^N) = (h/(1 − e^{−h}))^{N+1}, truncated at h^N.
pub fn todd_pn(n: usize) -> Series {
    // (1 − e^{−h})/h = Σ_k (−1)^k h^k/(k+1)!
    let denom: Series = (0..=n)
        .map(|k| {
            let s = if k % 2 == 0 { rat(1) } else { rat(-1) };
            s / factorial(k + 1)
        })
        .collect();
    let base = series_inv(&denom, n);
    let mut out = vec![BigRational::one()];
    for _ in 0..=n {
        out = series_mul(&out, &base, n);
    }
    out
}

/// t ↦ χ(P^N, E(t)), coefficients in increasing powers of t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiPolynomial {
    pub ambient_dim: usize,
    #[serde(serialize_with = "ser_series")]
    pub coeffs: Series,
}

impl ChiPolynomial {
    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    /// p(t − k) as a new polynomial.
    pub fn shifted(&self, k: i64) -> ChiPolynomial {
        let d = self.coeffs.len();
        let mut out = vec![BigRational::zero(); d];
        for (m, c) in self.coeffs.iter().enumerate() {
            // (t − k)^m = Σ_j C(m, j) t^j (−k)^{m−j}
            let mut binom = BigRational::one();
            for j in 0..=m {
                if j > 0 {
                    binom = binom * rat((m - j + 1) as i64) / rat(j as i64);
                }
                let pw = (0..m - j).fold(BigRational::one(), |acc, _| acc * rat(-k));
                out[j] += c * &binom * pw;
            }
        }
        ChiPolynomial { ambient_dim: self.ambient_dim, coeffs: out }
    }
}

/// χ(E(t)) as the h^N coefficient of ch(E)·e^{th}·td(P^N).
pub fn chi_polynomial(e: &ChernData) -> ChiPolynomial {
    let n = e.ambient_dim;
    let chtd = series_mul(&chern_character(e), &todd_pn(n), n);
    let coeffs = (0..=n).map(|k| &chtd[n - k] / factorial(k)).collect();
    ChiPolynomial { ambient_dim: n, coeffs }
}

fn truncate_push(v: Vec<BigRational>, n: usize) -> Result<Vec<BigInt>> {
    v.into_iter()
        .take(n.min(4))
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::IntegralityViolation(fmt_rat(&c)))
            }
        })
        .collect()
}

/// Closed-form c'_1..c'_4 of the rank-0 pushforward to P^N of a rank-r bundle with classes
/// c₁, c₂, c₃ living on the ε-thickened hyperplane. Truncated to N classes when N < 4.
pub fn pushforward_chern(r: i64, c1: i64, c2: i64, c3: i64, eps: i64, n: usize) -> Result<Vec<BigInt>> {
    if eps < 1 {
        return Err(Error::InvalidParams("epsilon >= 1".into()));
    }
    let (r, c1, c2, c3, e) = (rat(r), rat(c1), rat(c2), rat(c3), rat(eps));
    let one = rat(1);
    let two = rat(2);
    let three = rat(3);
    let e2 = &e * &e;
    let e3 = &e2 * &e;
    let e4 = &e3 * &e;
    let p1 = &r * &e;
    let p2 = &e2 * &r * (&r + &one) / &two - &e * &c1;
    let p3 = &e3 * &r * (&r + &one) * (&r + &two) / rat(6) - &e2 * (&r + &one) * &c1
        + &e * (&c1 * &c1 - &two * &c2);
    let p4 = &e4 * &r * (&r + &one) * (&r + &two) * (&r + &three) / rat(24)
        - &e3 * (&r + &two) * (&r + &one) / &two * &c1
        + &e2 * ((&r + &two) * &c1 * &c1 - (&two * &r + &three) * &c2)
        + &e * (-(&c1 * &c1 * &c1) + &three * &c1 * &c2 - &three * &c3);
    truncate_push(vec![p1, p2, p3, p4], n)
}

/// Solves A·x = b over the rationals by Gaussian elimination.
pub fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(c, p);
        b.swap(c, p);
        let piv = a[c][c].clone();
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
            let t = &f * &b[c];
            b[r] -= t;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Independent route to the pushforward classes: χ_{P^N}(F(t)) must equal
/// Σ_{k=0}^{ε−1} χ_{P^{N−1}}(F₁(t−k)). Solving this linear system for ch(F) (rank 0) and
/// converting back to Chern classes gives c'_1..c'_4.
pub fn pushforward_chern_oracle(
    r: i64,
    c1: i64,
    c2: i64,
    c3: i64,
    eps: i64,
    n: usize,
) -> Result<Vec<BigInt>> {
    if eps < 1 || n < 2 {
        return Err(Error::InvalidParams("epsilon >= 1 and N >= 2".into()));
    }
    let f1 = ChernData::from_ints(n - 1, r, &[c1, c2, c3]);
    let base = chi_polynomial(&f1);
    let mut rhs = vec![BigRational::zero(); n];
    for k in 0..eps {
        for (acc, c) in rhs.iter_mut().zip(base.shifted(k).coeffs) {
            *acc += c;
        }
    }
    // χ_{P^N}(F(t)) coefficient of t^k is (1/k!) Σ_i x_i td_{N−k−i}, x_i = ch_i(F).
    let td = todd_pn(n);
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|k| {
            (1..=n)
                .map(|i| if k + i <= n { &td[n - k - i] / factorial(k) } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let x = solve_linear(a, rhs)?;
    let mut ch = vec![BigRational::zero()];
    ch.extend(x);
    let c = chern_from_character(&ch, 0);
    truncate_push(c.total[1..].to_vec(), n)
}

/// Chern classes of the pushforward as a ChernData on P^N (classes beyond c'_4 are
/// unknown and left zero).
pub fn pushforward_data(r: i64, c1: i64, c2: i64, c3: i64, eps: i64, n: usize) -> Result<ChernData> {
    let cs: Vec<BigRational> = pushforward_chern(r, c1, c2, c3, eps, n)?.iter().map(ratb).collect();
    Ok(ChernData::new(n, 0, &cs))
}

/// 1 + c₁h + c₂h² of a rank-2 bundle is reducible iff it splits as (1+ah)(1+bh) over the
/// integers, i.e. iff c₁² − 4c₂ is a perfect square.
pub fn chern_poly_irreducible(c: &ChernData) -> Result<bool> {
    if c.rank != 2 {
        return Err(Error::RankNotTwo(c.rank));
    }
    let cs = c.integral_classes()?;
    let c1 = cs.first().cloned().unwrap_or_default();
    let c2 = cs.get(1).cloned().unwrap_or_default();
    let disc = &c1 * &c1 - BigInt::from(4) * &c2;
    if disc.is_negative() {
        return Ok(true);
    }
    let s = disc.sqrt();
    Ok(&s * &s != disc)
}
