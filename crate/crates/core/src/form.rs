//! Homogeneous multivariate forms with exact coefficients.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial, one entry per variable.
pub type Exp = Vec<u32>;

/// A homogeneous form. Terms are kept in a sorted map without zero coefficients, so
/// comparing terms is mathematical equality. The zero form keeps a nominal degree that
/// equality and every check ignore.
#[derive(Clone, Debug)]
pub struct Form {
    field: Field,
    nvars: usize,
    deg: u32,
    terms: BTreeMap<Exp, Scalar>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Form) -> bool {
        self.field == other.field
            && self.nvars == other.nvars
            && self.terms == other.terms
            && (self.deg == other.deg || self.terms.is_empty())
    }
}

impl Eq for Form {}

/// All exponent vectors of total degree `deg` in `nvars` variables, in increasing order.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Exp> {
    fn rec(i: usize, left: u32, cur: &mut Exp, out: &mut Vec<Exp>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

impl Form {
    pub fn zero(field: Field, nvars: usize, deg: u32) -> Form {
        Form { field, nvars, deg, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Form {
        Form::monomial(field, vec![0; nvars], c)
    }

    pub fn one(field: Field, nvars: usize) -> Form {
        Form::constant(field, nvars, field.one())
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Form {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Form::monomial(field, e, field.one())
    }

    pub fn monomial(field: Field, exp: Exp, c: Scalar) -> Form {
        let deg = exp.iter().sum();
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(exp, c);
        }
        Form { field, nvars, deg, terms }
    }

    /// Builds a form from a term list, merging repeated monomials. `deg` is required
    /// only to give an empty list its nominal degree.
    pub fn from_terms(
        field: Field,
        nvars: usize,
        deg: Option<u32>,
        terms: impl IntoIterator<Item = (Exp, Scalar)>,
    ) -> Result<Form> {
        let mut map: BTreeMap<Exp, Scalar> = BTreeMap::new();
        let mut seen_deg = deg;
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, got: e.len() });
            }
            let d: u32 = e.iter().sum();
            match seen_deg {
                Some(sd) if sd != d => return Err(Error::DegreeMismatch(sd, d)),
                _ => seen_deg = Some(d),
            }
            let slot = map.entry(e).or_insert_with(|| field.zero());
            *slot = field.add(slot, &c);
        }
        map.retain(|_, c| !field.is_zero(c));
        Ok(Form { field, nvars, deg: seen_deg.unwrap_or(0), terms: map })
    }

    /// Random homogeneous form. With `max_terms = None` every monomial gets a random
    /// coefficient; otherwise at most that many randomly chosen monomials are used.
    pub fn random<R: Rng + ?Sized>(
        field: Field,
        nvars: usize,
        deg: u32,
        max_terms: Option<usize>,
        rng: &mut R,
    ) -> Form {
        let mons = monomials(nvars, deg);
        let picked: Vec<Exp> = match max_terms {
            None => mons,
            Some(k) => (0..k).map(|_| mons[rng.gen_range(0..mons.len())].clone()).collect(),
        };
        let terms = picked.into_iter().map(|e| (e, field.random(rng, 3)));
        Form::from_terms(field, nvars, Some(deg), terms).expect("monomials are homogeneous")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The zero form with a different nominal degree.
    pub fn with_nominal_degree(mut self, deg: u32) -> Form {
        if self.is_zero() {
            self.deg = deg;
        }
        self
    }

    fn compatible(&self, other: &Form) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.deg != other.deg {
            return Err(Error::DegreeMismatch(self.deg, other.deg));
        }
        let f = self.field;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(slot) => {
                    *slot = f.add(slot, c);
                    if f.is_zero(slot) {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Form { field: f, nvars: self.nvars, deg: self.deg, terms })
    }

    pub fn neg(&self) -> Form {
        let f = self.field;
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f.neg(c))).collect();
        Form { terms, ..self.clone() }
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        let f = self.field;
        if f.is_zero(c) {
            return Form::zero(f, self.nvars, self.deg);
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), f.mul(v, c))).collect();
        Form { terms, ..self.clone() }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        self.compatible(other)?;
        let f = self.field;
        let deg = self.deg + other.deg;
        let mut terms: BTreeMap<Exp, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exp = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = f.mul(ca, cb);
                match terms.get_mut(&e) {
                    Some(slot) => *slot = f.add(slot, &c),
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !f.is_zero(c));
        Ok(Form { field: f, nvars: self.nvars, deg, terms })
    }

    pub fn pow(&self, k: u32) -> Form {
        let mut acc = Form::one(self.field, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let f = self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// The same form in `k` additional trailing variables.
    pub fn adjoin_vars(&self, k: usize) -> Form {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.extend(std::iter::repeat(0).take(k));
                (e, c.clone())
            })
            .collect();
        Form { field: self.field, nvars: self.nvars + k, deg: self.deg, terms }
    }

    /// Reduces a rational form into another field (identity if already there).
    pub fn to_field(&self, target: Field) -> Result<Form> {
        if target == self.field {
            return Ok(self.clone());
        }
        if self.field != Field::Rationals {
            return Err(Error::FieldMismatch(self.field.to_string(), target.to_string()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((e.clone(), target.from_rational(&c.to_rational())?));
        }
        Form::from_terms(target, self.nvars, Some(self.deg), terms)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { self.field.neg(c) } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("x{j}") } else { format!("x{j}^{k}") })
                .collect();
            let unit = abs == self.field.one();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if unit {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
