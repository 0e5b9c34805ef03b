//! Invariant reports: every stated Chern invariant is computed twice, once from its closed
//! form and once by chaining twist sums, pushforwards and exact sequences, and the two
//! values are compared.

use super::{
    chern_of_twist_sum, chern_poly_irreducible, exact_seq_solve, pushforward_data, rat, ChernData,
    Position,
};
use crate::error::{Error, Result};
use crate::weights::{build_ledger, WeightParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Parameters of the constructions whose invariants are reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// Weighted KPR bundles 𝒢, ℰ, 𝒦 on P^{2n+1}; `b` are the 1-based column indices
    /// (defaults to 1..=2n−1).
    WeightedKpr { params: WeightParams, b: Option<Vec<usize>> },
    /// The rank-2 pair A, B on P³ cut out by the Binet–Cauchy matrices M, N.
    BinetCauchyPair { w1: i64, w2: i64, v2: i64, a1: i64 },
    /// The rank-3 bundle E₂ on P⁴ obtained from B on the ε-thickened hyperplane.
    ThickenedRankThree { w1: i64, w2: i64, v2: i64 },
    /// The diagonal family w₁ = w₂ = v₂ = n, ε = 2n, whose E₂ carries a rank-2 summand L₂.
    DiagonalFamily { n: i64 },
}

impl Construction {
    /// CLI token of the construction.
    pub fn token(&self) -> &'static str {
        match self {
            Construction::WeightedKpr { .. } => "thm327",
            Construction::BinetCauchyPair { .. } => "prop415",
            Construction::ThickenedRankThree { .. } => "prop424",
            Construction::DiagonalFamily { .. } => "thm425",
        }
    }
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One invariant computed by its closed form and by the Chern chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantRecord {
    pub name: String,
    #[serde(serialize_with = "ser_big")]
    pub closed_form: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub chain: BigInt,
    pub agree: bool,
    /// chain − closed form.
    #[serde(serialize_with = "ser_big")]
    pub difference: BigInt,
}

impl InvariantRecord {
    pub fn new(name: impl Into<String>, closed_form: BigInt, chain: BigInt) -> InvariantRecord {
        let difference = &chain - &closed_form;
        InvariantRecord { name: name.into(), agree: difference.is_zero(), closed_form, chain, difference }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub construction: Construction,
    pub records: Vec<InvariantRecord>,
    /// Records whose chain value differs from the closed form.
    pub discrepancies: Vec<InvariantRecord>,
    /// Rendered total Chern classes of the bundles in the chain.
    pub chern_polynomials: BTreeMap<String, String>,
    pub flags: BTreeMap<String, bool>,
    /// Whether every record agrees.
    pub all_agree: bool,
}

struct Builder {
    records: Vec<InvariantRecord>,
    polys: BTreeMap<String, String>,
    flags: BTreeMap<String, bool>,
}

impl Builder {
    fn new() -> Builder {
        Builder { records: Vec::new(), polys: BTreeMap::new(), flags: BTreeMap::new() }
    }

    fn record(&mut self, name: &str, closed: i64, chain: BigInt) {
        self.records.push(InvariantRecord::new(name, BigInt::from(closed), chain));
    }

    fn poly(&mut self, name: &str, c: &ChernData) {
        self.polys.insert(name.to_string(), c.polynomial_string());
    }

    fn flag(&mut self, name: &str, v: bool) {
        self.flags.insert(name.to_string(), v);
    }

    fn finish(self, construction: Construction) -> InvariantsReport {
        let discrepancies: Vec<_> = self.records.iter().filter(|r| !r.agree).cloned().collect();
        InvariantsReport {
            construction,
            all_agree: discrepancies.is_empty(),
            records: self.records,
            discrepancies,
            chern_polynomials: self.polys,
            flags: self.flags,
        }
    }
}

fn class(c: &ChernData, i: usize) -> Result<BigInt> {
    let v = c.c(i);
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::IntegralityViolation(super::fmt_rat(&v)))
    }
}

pub fn bundle_invariants_report(construction: &Construction) -> Result<InvariantsReport> {
    let mut b = Builder::new();
    match construction {
        Construction::WeightedKpr { params, b: idx } => weighted_kpr(&mut b, params, idx.as_deref())?,
        Construction::BinetCauchyPair { w1, w2, v2, a1 } => binet_cauchy_pair(&mut b, *w1, *w2, *v2, *a1)?,
        Construction::ThickenedRankThree { w1, w2, v2 } => {
            thickened_rank_three(&mut b, *w1, *w2, *v2)?;
        }
        Construction::DiagonalFamily { n } => diagonal_family(&mut b, *n)?,
    }
    Ok(b.finish(construction.clone()))
}

fn weighted_kpr(b: &mut Builder, p: &WeightParams, idx: Option<&[usize]>) -> Result<()> {
    let p = WeightParams::new(p.n, p.alpha, p.beta, p.gamma)?;
    let l = build_ledger(p);
    let (n, s, g) = (p.n, p.sum(), p.gamma);
    let dim = (2 * n + 1) as usize;
    let default: Vec<usize> = (1..=(2 * n - 1) as usize).collect();
    let idx = idx.unwrap_or(&default);
    if idx.len() != (2 * n - 1) as usize || idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(format!("b must be {} strictly increasing indices", 2 * n - 1)));
    }
    let zb: Vec<i64> = idx.iter().map(|&i| l.zeta(i)).collect::<Result<_>>()?;
    let sum_zb: i64 = zb.iter().sum();

    // 0 → 𝒢 → ⊕O(ζ_i) → (pushforward of a rank-2n bundle from Y_(ε)) → 0. Only c₁ of the
    // pushforward (= 2n·ε) enters, and it does not depend on the classes on Y.
    let outer = chern_of_twist_sum(&l.zetas, dim);
    let g_of = |eps: i64| -> Result<ChernData> {
        let push = pushforward_data(2 * n, 0, 0, 0, eps, dim)?;
        exact_seq_solve(&outer, &push, Position::Quot)
    };
    let g1 = g_of(l.epsilon1)?;
    let g2 = g_of(l.epsilon2)?;
    let c1g1 = class(&g1, 1)?;
    let c1g2 = class(&g2, 1)?;
    b.record("c1(G), epsilon_1", -4 * n * g, c1g1.clone());
    b.record("c1(G), epsilon_2", -4 * n * g, c1g2.clone());

    // ℰ: cokernel of Γ(−ε₁) = ⊕_b O(ζ_b − ε₁) → 𝒢.
    let shifted: Vec<i64> = zb.iter().map(|z| z - l.epsilon1).collect();
    let e = exact_seq_solve(&g1, &chern_of_twist_sum(&shifted, dim), Position::Sub)?;
    b.record("c1(E)", (4 * n * n - 1) * s - 2 * g - sum_zb, class(&e, 1)?);
    // 𝒦: kernel of 𝒢 → ⊕_b O(ζ_b).
    let k = exact_seq_solve(&g2, &chern_of_twist_sum(&zb, dim), Position::Quot)?;
    b.record("c1(K)", -4 * n * g - sum_zb, class(&k, 1)?);
    b.poly("G, epsilon_1", &g1);
    b.poly("G, epsilon_2", &g2);

    // Null-correlation bundle 𝒩: 0 → O(−γ) → S^{2n+1}U → O(γ + (2n+1)(α+β)) → 0 on the
    // level of Chern classes.
    let sym: Vec<i64> = (0..=2 * n + 1).map(|i| (2 * n + 1 - i) * p.alpha + i * p.beta).collect();
    let mid = chern_of_twist_sum(&sym, dim);
    let ends = chern_of_twist_sum(&[-g, g + (2 * n + 1) * s], dim);
    let nc = exact_seq_solve(&mid, &ends, Position::Sub)?;
    b.record("c1(N)", n * (2 * n + 1) * s, class(&nc, 1)?);
    let dual_twist = nc.dual().twist((2 * n + 1) * s);
    b.record("c1(N*((2n+1)(alpha+beta)))", n * (2 * n + 1) * s, class(&dual_twist, 1)?);
    b.flag("N is self-dual up to twist", dual_twist == nc);
    b.poly("N", &nc);
    b.flag("strong bound on gamma", p.strong_bound());
    Ok(())
}

fn check_region(w1: i64, w2: i64, v2: i64) -> Result<()> {
    if w2 <= 0 || v2 <= 0 || w2 - v2 < 0 || w1 < w2 - v2 || w1 > w2 + v2 {
        return Err(Error::DegreeConstraintViolated(format!(
            "need w2, v2 > 0 and 0 <= w2 - v2 <= w1 <= w2 + v2, got (w1, w2, v2) = ({w1}, {w2}, {v2})"
        )));
    }
    Ok(())
}

/// Source twists a of M together with c = a_i + b_i and d = 2c − Σa.
pub fn binet_cauchy_twists(w1: i64, w2: i64, v2: i64, a1: i64) -> (Vec<i64>, i64, i64) {
    let a = vec![a1, a1 + 2 * w2 - w1 - v2, a1 + w2 - w1, a1 + w2 - v2];
    let c = 2 * a1 + 3 * w2 - w1;
    let d = 2 * c - a.iter().sum::<i64>();
    (a, c, d)
}

fn binet_cauchy_pair(b: &mut Builder, w1: i64, w2: i64, v2: i64, a1: i64) -> Result<()> {
    check_region(w1, w2, v2)?;
    let (a, c, d) = binet_cauchy_twists(w1, w2, v2, a1);
    let n = 3;
    let total = chern_of_twist_sum(&a, n);
    let e1 = class(&total, 1)?;
    let e2 = class(&total, 2)?;
    let e3 = class(&total, 3)?;
    // Chain: c₁(B) = c, c₁(A) = e₁ − c, then c₂(A), c₂(B) from the h² and h³ parts of
    // c(A)·c(B) = Π(1 + a_i h).
    let c1b = BigInt::from(c);
    let c1a = &e1 - &c1b;
    let ra = |x: &BigInt| BigRational::from_integer(x.clone());
    let sys = vec![vec![rat(1), rat(1)], vec![ra(&c1b), ra(&c1a)]];
    let rhs = vec![ra(&e2) - ra(&c1a) * ra(&c1b), ra(&e3)];
    let sol = super::solve_linear(sys, rhs)?;
    let to_int = |x: &BigRational| -> Result<BigInt> {
        if x.is_integer() {
            Ok(x.to_integer())
        } else {
            Err(Error::IntegralityViolation(super::fmt_rat(x)))
        }
    };
    let (c2a, c2b) = (to_int(&sol[0])?, to_int(&sol[1])?);

    // Closed forms in terms of c, d and the elementary symmetric functions of a.
    let (ci, di) = (BigInt::from(c), BigInt::from(d));
    let inner = &e2 - &ci * (&ci - &di);
    let c2b_closed = -(&e3 - &ci * &inner) / &di;
    let c2a_closed = (&e3 - (&ci - &di) * &inner) / &di;
    let push = |b: &mut Builder, name: &str, closed: BigInt, chain: &BigInt| {
        b.records.push(InvariantRecord::new(name, closed, chain.clone()));
    };
    push(b, "c1(B)", BigInt::from(c), &c1b);
    push(b, "c2(B)", c2b_closed, &c2b);
    push(b, "c1(A)", BigInt::from(c - d), &c1a);
    push(b, "c2(A)", c2a_closed, &c2a);
    if a1 == 0 {
        b.record("c1(B), normalized a1 = 0", 3 * w2 - w1, c1b.clone());
        b.record("c2(B), normalized a1 = 0", w2 * (2 * w2 - w1 + v2), c2b.clone());
        b.record("c1(A), normalized a1 = 0", w2 - w1 - 2 * v2, c1a.clone());
        b.record("c2(A), normalized a1 = 0", v2 * (w1 + v2), c2a.clone());
    }
    let ca = ChernData::new(n, 2, &[ra(&c1a), ra(&c2a)]);
    let cb = ChernData::new(n, 2, &[ra(&c1b), ra(&c2b)]);
    let prod = super::series_mul(&ca.total, &cb.total, n);
    b.flag("Whitney identity mod h^4", prod == total.total);
    b.poly("A", &ca);
    b.poly("B", &cb);
    b.poly("sum of O(a_i)", &total);
    Ok(())
}

/// Returns c(E₂) from the chain F̂ → (pushforward of B) and G → E₂.
fn thickened_rank_three(b: &mut Builder, w1: i64, w2: i64, v2: i64) -> Result<ChernData> {
    check_region(w1, w2, v2)?;
    let eps = w1 - w2 + 2 * v2;
    if eps < 1 {
        return Err(Error::InvalidParams(format!("epsilon = w1 - w2 + 2 v2 = {eps} must be >= 1")));
    }
    let n = 4;
    let (a, c, _) = binet_cauchy_twists(w1, w2, v2, 0);
    let fhat = chern_of_twist_sum(&a, n);
    let push = pushforward_data(2, c, w2 * (2 * w2 - w1 + v2), 0, eps, n)?;
    let g = exact_seq_solve(&fhat, &push, Position::Quot)?;
    let e = exact_seq_solve(&g, &chern_of_twist_sum(&[-eps], n), Position::Sub)?;
    b.record("c1(E2)", 2 * (w2 + v2) - 3 * eps, class(&e, 1)?);
    b.record(
        "c2(E2)",
        2 * eps * eps - eps * (3 * w2 + v2) + w2 * w2 - v2 * v2 + 4 * w2 * v2,
        class(&e, 2)?,
    );
    b.record("c3(E2)", 2 * v2 * (-eps * eps + 2 * v2 * eps + w2 * w2 - v2 * v2), class(&e, 3)?);
    b.flag("epsilon >= 1", true);
    b.flag(
        "epsilon window when v2 >= w2",
        v2 >= w2 && 2 * v2 - w2 <= eps && eps <= 2 * v2 + w2,
    );
    b.flag("epsilon window when v2 <= w2", v2 <= w2 && v2 <= eps && eps <= 3 * v2);
    b.poly("pushforward of B", &push);
    b.poly("G2", &g);
    b.poly("E2", &e);
    Ok(e)
}

fn diagonal_family(b: &mut Builder, n: i64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParams("n >= 1".into()));
    }
    let e = thickened_rank_three(b, n, n, n)?;
    // With c₃(E₂) = 0 the rank-3 bundle splits off a trivial factor and the rank-2 summand
    // L₂ carries the whole Chern polynomial.
    let c3_zero = e.c(3).is_zero();
    b.flag("c3(E2) = 0", c3_zero);
    let l2 = ChernData { rank: 2, ..e.clone() };
    b.record("c1(L2)", -2 * n, class(&l2, 1)?);
    b.record("c2(L2)", 4 * n * n, class(&l2, 2)?);
    b.record("c3(L2)", 0, class(&l2, 3)?);
    b.record("c4(L2)", 0, class(&l2, 4)?);
    b.flag("c_h(L2) irreducible", chern_poly_irreducible(&l2)?);
    b.poly("L2", &l2);
    Ok(())
}
