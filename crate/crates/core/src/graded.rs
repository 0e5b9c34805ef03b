//! Graded matrices between twisted free modules ⊕O(a_j) → ⊕O(b_i).

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::form::Form;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Matrix of forms; rows follow `target`, columns follow `source`. Entry (i, j) should be
/// zero or of degree `target[i] - source[j]`; `validate` reports entries that are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    field: Field,
    nvars: usize,
    source: Vec<i64>,
    target: Vec<i64>,
    entries: Vec<Vec<Form>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub expected: i64,
    pub found: u32,
}

impl GradedMatrix {
    pub fn new(
        field: Field,
        nvars: usize,
        source: Vec<i64>,
        target: Vec<i64>,
        entries: Vec<Vec<Form>>,
    ) -> Result<GradedMatrix> {
        if entries.len() != target.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} rows for {} target twists",
                entries.len(),
                target.len()
            )));
        }
        for row in &entries {
            if row.len() != source.len() {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} for {} source twists",
                    row.len(),
                    source.len()
                )));
            }
            for e in row {
                if e.field() != field {
                    return Err(Error::FieldMismatch(field.to_string(), e.field().to_string()));
                }
                if e.nvars() != nvars {
                    return Err(Error::ArityMismatch { expected: nvars, got: e.nvars() });
                }
            }
        }
        Ok(GradedMatrix { field, nvars, source, target, entries })
    }

    /// Builds entries from a closure; zero entries get the expected nominal degree.
    pub fn from_fn(
        field: Field,
        nvars: usize,
        source: Vec<i64>,
        target: Vec<i64>,
        mut f: impl FnMut(usize, usize) -> Form,
    ) -> Result<GradedMatrix> {
        let entries = (0..target.len())
            .map(|i| (0..source.len()).map(|j| f(i, j)).collect())
            .collect();
        let mut m = GradedMatrix::new(field, nvars, source, target, entries)?;
        m.normalize_zero_degrees();
        Ok(m)
    }

    pub fn zeros(field: Field, nvars: usize, source: Vec<i64>, target: Vec<i64>) -> GradedMatrix {
        GradedMatrix::from_fn(field, nvars, source, target, |_, _| Form::zero(field, nvars, 0))
            .expect("shape is consistent")
    }

    pub fn identity(field: Field, nvars: usize, twists: Vec<i64>) -> GradedMatrix {
        GradedMatrix::from_fn(field, nvars, twists.clone(), twists, |i, j| {
            if i == j {
                Form::one(field, nvars)
            } else {
                Form::zero(field, nvars, 0)
            }
        })
        .expect("shape is consistent")
    }

    fn normalize_zero_degrees(&mut self) {
        for (i, row) in self.entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                if e.is_zero() {
                    let d = (self.target[i] - self.source[j]).max(0) as u32;
                    *e = std::mem::replace(e, Form::zero(self.field, self.nvars, 0))
                        .with_nominal_degree(d);
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn source(&self) -> &[i64] {
        &self.source
    }
    pub fn target(&self) -> &[i64] {
        &self.target
    }
    pub fn rows(&self) -> usize {
        self.target.len()
    }
    pub fn cols(&self) -> usize {
        self.source.len()
    }
    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }
    pub fn entries(&self) -> &[Vec<Form>] {
        &self.entries
    }
    pub fn row(&self, i: usize) -> &[Form] {
        &self.entries[i]
    }
    pub fn column(&self, j: usize) -> Vec<Form> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Form::is_zero)
    }

    /// Every entry that is nonzero with the wrong degree (or where a negative degree is
    /// required).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let expected = self.target[i] - self.source[j];
                if !e.is_zero() && (expected < 0 || e.degree() as i64 != expected) {
                    out.push(Violation { row: i, col: j, expected, found: e.degree() });
                }
            }
        }
        out
    }

    /// `self ∘ f`: requires `f.target == self.source`.
    pub fn compose(&self, f: &GradedMatrix) -> Result<GradedMatrix> {
        if f.target != self.source {
            return Err(Error::TwistMismatch(f.target.clone(), self.source.clone()));
        }
        if f.field != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), f.field.to_string()));
        }
        if f.nvars != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: f.nvars });
        }
        let mut entries = Vec::with_capacity(self.rows());
        for i in 0..self.rows() {
            let mut row = Vec::with_capacity(f.cols());
            for j in 0..f.cols() {
                let mut acc = Form::zero(self.field, self.nvars, 0);
                for k in 0..self.cols() {
                    let (a, b) = (&self.entries[i][k], &f.entries[k][j]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        let mut m =
            GradedMatrix::new(self.field, self.nvars, f.source.clone(), self.target.clone(), entries)?;
        m.normalize_zero_degrees();
        Ok(m)
    }

    pub fn neg(&self) -> GradedMatrix {
        self.map(|_, _, e| e.neg())
    }

    pub fn transpose_with(&self, source: Vec<i64>, target: Vec<i64>) -> Result<GradedMatrix> {
        let entries = (0..self.cols()).map(|j| self.column(j)).collect();
        let mut m = GradedMatrix::new(self.field, self.nvars, source, target, entries)?;
        m.normalize_zero_degrees();
        Ok(m)
    }

    /// Same entries, with every source and target twist moved by `k`.
    pub fn shifted(&self, k: i64) -> GradedMatrix {
        GradedMatrix {
            source: self.source.iter().map(|a| a + k).collect(),
            target: self.target.iter().map(|b| b + k).collect(),
            ..self.clone()
        }
    }

    pub fn with_twists(&self, source: Vec<i64>, target: Vec<i64>) -> Result<GradedMatrix> {
        let mut m = GradedMatrix::new(self.field, self.nvars, source, target, self.entries.clone())?;
        m.normalize_zero_degrees();
        Ok(m)
    }

    pub fn map(&self, mut f: impl FnMut(usize, usize, &Form) -> Form) -> GradedMatrix {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, e)| f(i, j, e)).collect())
            .collect();
        GradedMatrix { entries, ..self.clone() }
    }

    /// The same matrix in `k` additional trailing variables.
    pub fn adjoin_vars(&self, k: usize) -> GradedMatrix {
        let mut m = self.map(|_, _, e| e.adjoin_vars(k));
        m.nvars += k;
        m
    }

    pub fn to_field(&self, target: Field) -> Result<GradedMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.to_field(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        GradedMatrix::new(target, self.nvars, self.source.clone(), self.target.clone(), entries)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| e.eval(point)).collect())
            .collect()
    }

    /// Rank of the scalar matrix obtained by evaluating at `point`.
    pub fn rank_at_point(&self, point: &[Scalar]) -> Result<usize> {
        let m = self.eval(point)?;
        Ok(scalar_rank(self.field, &m))
    }

    /// Largest pointwise rank over `trials` seeded random points. Probabilistic evidence.
    pub fn generic_rank(&self, trials: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = 0;
        for _ in 0..trials {
            let p: Vec<Scalar> = (0..self.nvars).map(|_| self.field.random(&mut rng, 20)).collect();
            best = best.max(self.rank_at_point(&p).expect("point has the right arity"));
            if best == self.rows().min(self.cols()) {
                break;
            }
        }
        best
    }
}

/// Exact rank of a scalar matrix: plain elimination over F_p, fraction-free (Bareiss)
/// elimination on cleared denominators over the rationals.
pub fn scalar_rank(field: Field, m: &[Vec<Scalar>]) -> usize {
    match field {
        Field::Prime(_) => {
            let mut a: Vec<Vec<Scalar>> = m.to_vec();
            let rows = a.len();
            let cols = a.first().map_or(0, Vec::len);
            let mut rank = 0;
            for c in 0..cols {
                let Some(p) = (rank..rows).find(|&r| !field.is_zero(&a[r][c])) else {
                    continue;
                };
                a.swap(rank, p);
                let inv = field.inv(&a[rank][c]).expect("pivot is nonzero");
                for r in rank + 1..rows {
                    if field.is_zero(&a[r][c]) {
                        continue;
                    }
                    let factor = field.mul(&a[r][c], &inv);
                    for k in c..cols {
                        let t = field.mul(&factor, &a[rank][k]);
                        a[r][k] = field.sub(&a[r][k], &t);
                    }
                }
                rank += 1;
            }
            rank
        }
        Field::Rationals => {
            let ints: Vec<Vec<BigInt>> = m
                .iter()
                .map(|row| {
                    let rats: Vec<_> = row.iter().map(Scalar::to_rational).collect();
                    let l = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                    rats.iter().map(|r| r.numer() * (&l / r.denom())).collect()
                })
                .collect();
            bareiss_rank(ints)
        }
    }
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k];
                a[r][k] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_known_ranks() {
        let q = Field::Rationals;
        let m = |v: &[&[i64]]| -> Vec<Vec<Scalar>> {
            v.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect()
        };
        assert_eq!(scalar_rank(q, &m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(scalar_rank(q, &m(&[&[0, 1, 2], &[1, 0, 3], &[1, 1, 5]])), 2);
        assert_eq!(scalar_rank(q, &m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])), 3);
        let half = q.parse("1/2").unwrap();
        assert_eq!(scalar_rank(q, &[vec![half.clone(), q.one()], vec![q.one(), q.from_i64(2)]]), 1);
    }

    #[test]
    fn compose_checks_twists() {
        let q = Field::Rationals;
        let x0 = Form::var(q, 2, 0);
        let x1 = Form::var(q, 2, 1);
        let a = GradedMatrix::new(q, 2, vec![0], vec![1], vec![vec![x0.clone()]]).unwrap();
        let b = GradedMatrix::new(q, 2, vec![1], vec![2], vec![vec![x1.clone()]]).unwrap();
        let ba = b.compose(&a).unwrap();
        assert_eq!(ba.entry(0, 0), &x0.mul(&x1).unwrap());
        assert!(matches!(a.compose(&b), Err(Error::TwistMismatch(..))));
    }

    #[test]
    fn validate_flags_bad_degree() {
        let q = Field::Rationals;
        let sq = Form::var(q, 2, 0).pow(2);
        let m = GradedMatrix::new(q, 2, vec![0], vec![1], vec![vec![sq]]).unwrap();
        assert_eq!(m.validate(), vec![Violation { row: 0, col: 0, expected: 1, found: 2 }]);
        assert!(GradedMatrix::zeros(q, 2, vec![5, -3], vec![0]).validate().is_empty());
    }
}
