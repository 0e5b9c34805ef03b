//! Pfaffians and sub-pfaffians of antisymmetric form matrices, the rank-2n matrices
//! φ = ΣᵀJΣ and their pfaffian adjugates ψ with ψ·φ = 0.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::form::Form;
use crate::graded::GradedMatrix;
use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Mutex;

/// A square graded matrix with entry (i, j) = −entry (j, i) and zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntisymMatrix {
    m: GradedMatrix,
}

impl AntisymMatrix {
    pub fn new(m: GradedMatrix) -> Result<AntisymMatrix> {
        if m.rows() != m.cols() {
            return Err(Error::ShapeMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        if m.rows() > 64 {
            return Err(Error::ShapeMismatch("pfaffian engine is limited to 64x64".into()));
        }
        for i in 0..m.rows() {
            if !m.entry(i, i).is_zero() {
                return Err(Error::NotAntisymmetric(i, i));
            }
            for j in i + 1..m.rows() {
                if m.entry(i, j).add(m.entry(j, i))?.is_zero() {
                    continue;
                }
                return Err(Error::NotAntisymmetric(i, j));
            }
        }
        Ok(AntisymMatrix { m })
    }

    /// Builds the antisymmetric matrix whose strict upper triangle is `upper(i, j)`.
    pub fn from_upper(
        field: Field,
        nvars: usize,
        source: Vec<i64>,
        target: Vec<i64>,
        mut upper: impl FnMut(usize, usize) -> Form,
    ) -> Result<AntisymMatrix> {
        let k = target.len();
        let mut entries = vec![vec![Form::zero(field, nvars, 0); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let f = upper(i, j);
                entries[j][i] = f.neg();
                entries[i][j] = f;
            }
        }
        let m = GradedMatrix::new(field, nvars, source.clone(), target.clone(), entries)?;
        AntisymMatrix::new(m.with_twists(source, target)?)
    }

    pub fn matrix(&self) -> &GradedMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> GradedMatrix {
        self.m
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        self.m.entry(i, j)
    }

    /// The constant κ with target_i + source_i = κ for every i, which makes all
    /// pfaffians homogeneous. `None` if the twists do not have this shape.
    pub fn kappa(&self) -> Option<i64> {
        let k = self.m.target()[0] + self.m.source()[0];
        (0..self.size())
            .all(|i| self.m.target()[i] + self.m.source()[i] == k)
            .then_some(k)
    }

    pub fn neg(&self) -> AntisymMatrix {
        AntisymMatrix { m: self.m.neg() }
    }

    /// Simultaneous row/column permutation: new index i takes old index perm[i].
    pub fn permuted(&self, perm: &[usize]) -> Result<AntisymMatrix> {
        let m = &self.m;
        let src = perm.iter().map(|&p| m.source()[p]).collect();
        let tgt = perm.iter().map(|&p| m.target()[p]).collect();
        let g = GradedMatrix::from_fn(m.field(), m.nvars(), src, tgt, |i, j| {
            m.entry(perm[i], perm[j]).clone()
        })?;
        AntisymMatrix::new(g)
    }

    /// Evaluates every entry at a point, giving a constant antisymmetric matrix.
    pub fn eval(&self, point: &[Scalar]) -> Result<AntisymMatrix> {
        let vals = self.m.eval(point)?;
        let f = self.m.field();
        let nv = self.m.nvars();
        let g = GradedMatrix::from_fn(f, nv, vec![0; self.size()], vec![0; self.size()], |i, j| {
            Form::constant(f, nv, vals[i][j].clone())
        })?;
        Ok(AntisymMatrix { m: g })
    }

    pub fn table(&self) -> PfaffianTable<'_> {
        PfaffianTable { m: self, memo: Mutex::new(HashMap::new()) }
    }

    pub fn pfaffian(&self) -> Result<Form> {
        self.table().sub_pfaffian(&[])
    }

    /// Pfaffian of the submatrix with the rows and columns in `removed` (0-based) deleted.
    pub fn sub_pfaffian(&self, removed: &[usize]) -> Result<Form> {
        self.table().sub_pfaffian(removed)
    }
}

/// Memo table of pfaffians of principal submatrices, keyed by index bitmask. Safe to
/// share across threads; racing inserts store identical values.
pub struct PfaffianTable<'a> {
    m: &'a AntisymMatrix,
    memo: Mutex<HashMap<u64, Form>>,
}

impl PfaffianTable<'_> {
    pub fn sub_pfaffian(&self, removed: &[usize]) -> Result<Form> {
        let k = self.m.size();
        let mut mask: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        for &r in removed {
            if r >= k || mask & (1 << r) == 0 {
                return Err(Error::IndexOutOfRange { index: r + 1, bound: k });
            }
            mask &= !(1 << r);
        }
        if mask.count_ones() % 2 == 1 {
            return Err(Error::OddSize(mask.count_ones() as usize));
        }
        self.pf_mask(mask)
    }

    fn pf_mask(&self, mask: u64) -> Result<Form> {
        let g = &self.m.m;
        if mask == 0 {
            return Ok(Form::one(g.field(), g.nvars()));
        }
        if let Some(f) = self.memo.lock().expect("memo lock").get(&mask) {
            return Ok(f.clone());
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = Form::zero(g.field(), g.nvars(), 0);
        let mut bits = rest;
        let mut k = 0;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = g.entry(i, j);
            if !a.is_zero() {
                let minor = self.pf_mask(rest & !(1 << j))?;
                let term = a.mul(&minor)?;
                acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            k += 1;
        }
        self.memo.lock().expect("memo lock").insert(mask, acc.clone());
        Ok(acc)
    }
}

/// Sign of the permutation taking the concatenated sequence to sorted order.
pub fn permutation_sign(seq: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The standard symplectic pairing Σ_iᵀ J Σ_j for columns of a 2n-row section matrix.
fn symplectic_product(sigma: &[Vec<Form>], n: usize, i: usize, j: usize) -> Result<Form> {
    let f = &sigma[0][0];
    let mut acc = Form::zero(f.field(), f.nvars(), 0);
    for k in 0..n {
        acc = acc.add(&sigma[k][i].mul(&sigma[n + k][j])?)?;
        acc = acc.sub(&sigma[n + k][i].mul(&sigma[k][j])?)?;
    }
    Ok(acc)
}

/// φ = ΣᵀJΣ from an explicit 2n×4n section matrix whose column j has degree
/// `section_degrees[j]`. Twists: target sd_i, source −sd_j.
pub fn phi_from_sections(sigma: &[Vec<Form>], section_degrees: &[i64]) -> Result<AntisymMatrix> {
    let rows = sigma.len();
    if rows == 0 || rows % 2 == 1 {
        return Err(Error::ShapeMismatch(format!("section matrix has {rows} rows")));
    }
    let n = rows / 2;
    let cols = 4 * n;
    if section_degrees.len() != cols || sigma.iter().any(|r| r.len() != cols) {
        return Err(Error::ShapeMismatch(format!("section matrix must be {rows}x{cols}")));
    }
    for (j, &d) in section_degrees.iter().enumerate() {
        if d < 0 {
            return Err(Error::DegreeInfeasible(format!("section degree {d} in column {}", j + 1)));
        }
        for row in sigma {
            if !row[j].is_zero() && row[j].degree() as i64 != d {
                return Err(Error::DegreeInfeasible(format!(
                    "entry of degree {} in column {} of degree {d}",
                    row[j].degree(),
                    j + 1
                )));
            }
        }
    }
    let f0 = &sigma[0][0];
    let target = section_degrees.to_vec();
    let source = section_degrees.iter().map(|d| -d).collect();
    let mut err = None;
    let phi = AntisymMatrix::from_upper(f0.field(), f0.nvars(), source, target, |i, j| {
        symplectic_product(sigma, n, i, j).unwrap_or_else(|e| {
            err = Some(e);
            Form::zero(f0.field(), f0.nvars(), 0)
        })
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(phi),
    }
}

/// Seeded random 2n×4n section matrix; `max_terms` bounds the support of each entry.
pub fn random_sections(
    n: usize,
    section_degrees: &[i64],
    field: Field,
    nvars: usize,
    max_terms: Option<usize>,
    seed: u64,
) -> Result<Vec<Vec<Form>>> {
    if section_degrees.len() != 4 * n {
        return Err(Error::ShapeMismatch(format!(
            "{} section degrees for n = {n}",
            section_degrees.len()
        )));
    }
    if let Some(d) = section_degrees.iter().find(|d| **d < 0) {
        return Err(Error::DegreeInfeasible(format!("negative section degree {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..2 * n)
        .map(|_| {
            section_degrees
                .iter()
                .map(|&d| Form::random(field, nvars, d as u32, max_terms, &mut rng))
                .collect()
        })
        .collect())
}

/// Seeded pseudorandom antisymmetric φ = ΣᵀJΣ of rank at most 2n everywhere.
pub fn make_rank2n_phi(
    n: usize,
    section_degrees: &[i64],
    field: Field,
    nvars: usize,
    seed: u64,
) -> Result<AntisymMatrix> {
    let sigma = random_sections(n, section_degrees, field, nvars, None, seed)?;
    phi_from_sections(&sigma, section_degrees)
}

/// Checks that every (2n+2)-pfaffian of the 4n×4n matrix φ vanishes: symbolically up to
/// 12×12, by evaluation at seeded random points above that.
pub fn check_rank_prereq(phi: &AntisymMatrix, n: usize, seed: u64) -> Result<()> {
    let k = phi.size();
    let check = |m: &AntisymMatrix| -> Result<()> {
        let table = m.table();
        for removed in (0..k).combinations(2 * n - 2) {
            if !table.sub_pfaffian(&removed)?.is_zero() {
                return Err(Error::RankPrereqViolated(removed.iter().map(|r| r + 1).collect()));
            }
        }
        Ok(())
    };
    if k <= 12 {
        return check(phi);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = phi.matrix().field();
    for _ in 0..3 {
        let p: Vec<Scalar> = (0..phi.matrix().nvars()).map(|_| f.random(&mut rng, 20)).collect();
        check(&phi.eval(&p)?)?;
    }
    Ok(())
}

/// Rows of ψ: the (2n−1)-subsets of {0..4n−1} in lexicographic order.
pub fn psi_row_index(n: usize) -> Vec<Vec<usize>> {
    (0..4 * n).combinations(2 * n - 1).collect()
}

/// The pfaffian adjugate ψ of a 4n×4n φ whose (2n+2)-pfaffians vanish. Entry (L, j) is
/// zero for j ∈ L and otherwise sign(L, j, rest)·Pf(φ without L ∪ {j}). ψ's source is
/// φ's target and row L has twist Σt − Σ_{l∈L} t_l − nκ.
pub fn make_psi(phi: &AntisymMatrix, n: usize) -> Result<GradedMatrix> {
    if n == 0 || phi.size() != 4 * n {
        return Err(Error::ShapeMismatch(format!("φ is {0}x{0}, expected {1}x{1}", phi.size(), 4 * n)));
    }
    let kappa = phi
        .kappa()
        .ok_or_else(|| Error::DegreeInfeasible("φ twists are not of the form t_i + s_i = κ".into()))?;
    check_rank_prereq(phi, n, 0x5eed)?;
    let g = phi.matrix();
    let t = g.target().to_vec();
    let total: i64 = t.iter().sum();
    let rows = psi_row_index(n);
    let table = phi.table();
    let k = phi.size();
    let entries: Vec<Vec<Form>> = rows
        .par_iter()
        .map(|l| {
            (0..k)
                .map(|j| {
                    if l.contains(&j) {
                        return Ok(Form::zero(g.field(), g.nvars(), 0));
                    }
                    let mut removed = l.clone();
                    removed.push(j);
                    let mut seq = removed.clone();
                    seq.extend((0..k).filter(|x| !removed.contains(x)));
                    let pf = table.sub_pfaffian(&removed)?;
                    Ok(if permutation_sign(&seq) == 1 { pf } else { pf.neg() })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let target = rows
        .iter()
        .map(|l| total - l.iter().map(|&i| t[i]).sum::<i64>() - n as i64 * kappa)
        .collect();
    let m = GradedMatrix::new(g.field(), g.nvars(), t.clone(), target, entries)?;
    m.with_twists(t, m.target().to_vec())
}

/// Σ_k (−1)^k φ_{i,j_k}·Pf(φ without `lset` ∪ {i, j_k}), j_k running over the complement
/// of `lset` ∪ {i}. Vanishes identically when the (2n+2)-pfaffians of φ vanish.
pub fn expansion_identity(phi: &AntisymMatrix, lset: &[usize], i: usize) -> Result<Form> {
    let k = phi.size();
    if i >= k {
        return Err(Error::IndexOutOfRange { index: i + 1, bound: k });
    }
    let g = phi.matrix();
    let table = phi.table();
    let mut acc = Form::zero(g.field(), g.nvars(), 0);
    let comp: Vec<usize> = (0..k).filter(|x| *x != i && !lset.contains(x)).collect();
    for (pos, &j) in comp.iter().enumerate() {
        let mut removed = lset.to_vec();
        removed.extend([i, j]);
        let term = g.entry(i, j).mul(&table.sub_pfaffian(&removed)?)?;
        acc = if pos % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}
