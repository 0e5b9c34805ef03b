//! Block-matrix (KPR) constructions: assembly of Δ = [[z^ε I, Φ], [Ψ, 0]], the
//! Binet–Cauchy family of 4×4 matrices, extraction of summed columns (μ̄) and summed rows
//! (μ), and finite-field zero-locus certificates for their entries.

use crate::chern::{
    bundle_invariants_report, chern_of_twist_sum, exact_seq_solve, pushforward_data, Construction,
    InvariantRecord, Position,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::form::Form;
use crate::graded::{GradedMatrix, Violation};
use crate::monad::{certificates, zero_locus_certificate, Certificate};
use crate::pfaffian::{make_psi, phi_from_sections, psi_row_index, random_sections, AntisymMatrix};
use crate::weights::{build_ledger, DegreeLedger, WeightParams};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Φ (4n×4n antisymmetric), Ψ (its pfaffian adjugate or any matrix with ΨΦ = 0) and the
/// exponent ε of the hyperplane variable z, which is adjoined as the last variable.
#[derive(Clone, Debug)]
pub struct KprInput {
    pub phi: AntisymMatrix,
    pub psi: GradedMatrix,
    pub epsilon: i64,
}

/// The assembled Δ together with its block size k = 4n.
#[derive(Clone, Debug)]
pub struct Delta {
    pub matrix: GradedMatrix,
    pub k: usize,
    pub epsilon: i64,
}

impl Delta {
    pub fn n(&self) -> usize {
        self.k / 4
    }

    /// Row of Δ holding the Ψ-row indexed by the (2n−1)-subset `lset` (0-based).
    pub fn psi_row(&self, lset: &[usize]) -> Option<usize> {
        psi_row_index(self.n()).iter().position(|l| l == lset).map(|p| self.k + p)
    }
}

/// Δ = [[z^ε I, Φ], [Ψ, 0]] with source twists (t_Φ − ε, s_Φ) and target twists
/// (t_Φ, t_Ψ − ε).
pub fn assemble_delta(inp: &KprInput) -> Result<Delta> {
    if inp.epsilon < 1 {
        return Err(Error::DegreeInfeasible(format!("epsilon = {} must be >= 1", inp.epsilon)));
    }
    let phi = inp.phi.matrix();
    let psi = &inp.psi;
    let k = phi.rows();
    if psi.cols() != k {
        return Err(Error::ShapeMismatch(format!("Ψ has {} columns, Φ is {k}x{k}", psi.cols())));
    }
    if !psi.compose(phi)?.is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let eps = inp.epsilon;
    let (field, nv) = (phi.field(), phi.nvars() + 1);
    let z_eps = Form::var(field, nv, nv - 1).pow(eps as u32);
    let phi_z = phi.adjoin_vars(1);
    let psi_z = psi.adjoin_vars(1);
    let source: Vec<i64> = phi.target().iter().map(|t| t - eps).chain(phi.source().iter().copied()).collect();
    let target: Vec<i64> = phi.target().iter().copied().chain(psi.target().iter().map(|t| t - eps)).collect();
    let matrix = GradedMatrix::from_fn(field, nv, source, target, |i, j| match (i < k, j < k) {
        (true, true) if i == j => z_eps.clone(),
        (true, true) => Form::zero(field, nv, 0),
        (true, false) => phi_z.entry(i, j - k).clone(),
        (false, true) => psi_z.entry(i - k, j).clone(),
        (false, false) => Form::zero(field, nv, 0),
    })?;
    let bad = matrix.validate();
    if let Some(v) = bad.first() {
        return Err(Error::DegreeInfeasible(format!(
            "entry ({}, {}) has degree {}, expected {}",
            v.row + 1,
            v.col + 1,
            v.found,
            v.expected
        )));
    }
    Ok(Delta { matrix, k, epsilon: eps })
}

/// Re-checks on an assembled Δ: the lower-left block times the upper-right block is zero.
pub fn delta_composition_zero(delta: &Delta) -> Result<bool> {
    let m = &delta.matrix;
    let k = delta.k;
    let rows = m.rows() - k;
    let lower_left = GradedMatrix::from_fn(
        m.field(),
        m.nvars(),
        m.source()[..k].to_vec(),
        m.target()[k..].to_vec(),
        |i, j| m.entry(k + i, j).clone(),
    )?;
    let upper_right = GradedMatrix::from_fn(
        m.field(),
        m.nvars(),
        m.source()[k..].to_vec(),
        m.target()[..k].iter().map(|t| t - delta.epsilon).collect(),
        |i, j| m.entry(i, k + j).clone(),
    )?;
    debug_assert_eq!(lower_left.rows(), rows);
    Ok(lower_left.compose(&upper_right)?.is_zero())
}

/// The six forms S₁₂, S₁₃, S₁₄, S₂₃, S₂₄, S₃₄ and the matrices M and N built from them.
#[derive(Clone, Debug)]
pub struct BinetCauchy {
    pub s12: Form,
    pub s13: Form,
    pub s14: Form,
    pub s23: Form,
    pub s24: Form,
    pub s34: Form,
    pub m: AntisymMatrix,
    /// N = pfaffian adjugate of M; its target twists are a_i + d.
    pub n: GradedMatrix,
    /// d = 2c − Σa, the shift that makes M∘N composable.
    pub d: i64,
}

impl BinetCauchy {
    pub fn forms(&self) -> Vec<Form> {
        vec![
            self.s12.clone(),
            self.s13.clone(),
            self.s14.clone(),
            self.s23.clone(),
            self.s24.clone(),
            self.s34.clone(),
        ]
    }

    pub fn pfaffian_zero(&self) -> Result<bool> {
        Ok(self.m.pfaffian()?.is_zero())
    }

    /// M·N = 0 (after shifting N by −d) and N·M = 0.
    pub fn products_zero(&self) -> Result<(bool, bool)> {
        let mn = self.m.matrix().compose(&self.n.shifted(-self.d))?.is_zero();
        let nm = self.n.compose(self.m.matrix())?.is_zero();
        Ok((mn, nm))
    }
}

/// Degrees (w₁, w₂, v₂) of the family; all other degrees follow from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDegrees {
    pub w1: i64,
    pub w2: i64,
    pub v2: i64,
}

impl FamilyDegrees {
    /// (t₁, t₂, u₁, u₂, v₁, v₂, w₁, w₂).
    pub fn all(&self) -> [i64; 8] {
        let FamilyDegrees { w1, w2, v2 } = *self;
        [2 * w2 - w1, w2, w1 - w2 + v2, v2, -w1 + w2 + v2, v2, w1, w2]
    }

    pub fn in_region(&self) -> bool {
        let FamilyDegrees { w1, w2, v2 } = *self;
        w2 > 0 && v2 > 0 && w2 - v2 >= 0 && w2 - v2 <= w1 && w1 <= w2 + v2
    }
}

/// Pairs T, W, V, U (each `[first, second]`).
#[derive(Clone, Debug)]
pub struct FamilyForms {
    pub t: [Form; 2],
    pub w: [Form; 2],
    pub v: [Form; 2],
    pub u: [Form; 2],
}

/// Builds S_ij, M and N after checking the degree region and the degree of every form.
pub fn binet_cauchy_family(forms: &FamilyForms, deg: FamilyDegrees, a1: i64) -> Result<BinetCauchy> {
    if !deg.in_region() {
        return Err(Error::DegreeConstraintViolated(format!(
            "(w1, w2, v2) = ({}, {}, {}) is outside 0 <= w2 - v2 <= w1 <= w2 + v2 with w2, v2 > 0",
            deg.w1, deg.w2, deg.v2
        )));
    }
    binet_cauchy_family_unchecked(forms, deg, a1)
}

/// Like [`binet_cauchy_family`] but without the region check, so that degenerate data such
/// as constant forms (all degrees 0) can be used.
pub fn binet_cauchy_family_unchecked(
    forms: &FamilyForms,
    deg: FamilyDegrees,
    a1: i64,
) -> Result<BinetCauchy> {
    let names = ["T1", "T2", "U1", "U2", "V1", "V2", "W1", "W2"];
    let given = [
        &forms.t[0], &forms.t[1], &forms.u[0], &forms.u[1], &forms.v[0], &forms.v[1], &forms.w[0],
        &forms.w[1],
    ];
    for ((name, f), want) in names.iter().zip(given).zip(deg.all()) {
        if want < 0 {
            return Err(Error::DegreeConstraintViolated(format!("{name} would need degree {want}")));
        }
        if !f.is_zero() && f.degree() as i64 != want {
            return Err(Error::DegreeConstraintViolated(format!(
                "{name} has degree {}, expected {want}",
                f.degree()
            )));
        }
    }
    let [t1, t2] = &forms.t;
    let [w1, w2] = &forms.w;
    let [v1, v2] = &forms.v;
    let [u1, u2] = &forms.u;
    let s13 = t1.mul(w1)?.add(&t2.mul(w2)?)?;
    let s24 = u1.mul(v1)?.add(&u2.mul(v2)?)?;
    let s12 = t1.mul(u1)?.add(&t2.mul(u2)?)?;
    let s34 = v1.mul(w1)?.add(&v2.mul(w2)?)?;
    let s14 = t1.mul(v2)?.sub(&t2.mul(v1)?)?;
    let s23 = u2.mul(w1)?.sub(&u1.mul(w2)?)?;
    let (a, c, d) = crate::chern::binet_cauchy_twists(deg.w1, deg.w2, deg.v2, a1);
    let target: Vec<i64> = a.iter().map(|x| c - x).collect();
    let upper = [
        [None, Some(&s12), Some(&s13), Some(&s14)],
        [None, None, Some(&s23), Some(&s24)],
        [None, None, None, Some(&s34)],
    ];
    let f0 = &forms.t[0];
    let m = AntisymMatrix::from_upper(f0.field(), f0.nvars(), a, target, |i, j| {
        upper[i][j].expect("strict upper triangle").clone()
    })?;
    let n = make_psi(&m, 1)?;
    Ok(BinetCauchy { s12, s13, s14, s23, s24, s34, m, n, d })
}

/// Seeded random forms of the family degrees.
pub fn random_family_forms(deg: FamilyDegrees, field: Field, nvars: usize, seed: u64) -> Result<FamilyForms> {
    let all = deg.all();
    if let Some(d) = all.iter().find(|d| **d < 0) {
        return Err(Error::DegreeConstraintViolated(format!("negative degree {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = |d: i64| Form::random(field, nvars, d as u32, None, &mut rng);
    let (t1, t2, u1, u2, v1, v2, w1, w2) =
        (next(all[0]), next(all[1]), next(all[2]), next(all[3]), next(all[4]), next(all[5]), next(all[6]), next(all[7]));
    Ok(FamilyForms { t: [t1, t2], w: [w1, w2], v: [v1, v2], u: [u1, u2] })
}

pub fn random_binet_cauchy(
    deg: FamilyDegrees,
    a1: i64,
    field: Field,
    nvars: usize,
    seed: u64,
) -> Result<BinetCauchy> {
    binet_cauchy_family(&random_family_forms(deg, field, nvars, seed)?, deg, a1)
}

/// First seed ≥ `seed` whose random linear family (w₁ = w₂ = v₂ = 1) over F_p in four
/// variables has S_ij without common zero on P³(F_p).
pub fn find_zero_free_family(p: u32, seed: u64, max_tries: u64) -> Result<(u64, BinetCauchy)> {
    let field = Field::prime(p as u64)?;
    let deg = FamilyDegrees { w1: 1, w2: 1, v2: 1 };
    for s in seed..seed.saturating_add(max_tries) {
        let bc = random_binet_cauchy(deg, 0, field, 4, s)?;
        if zero_locus_certificate(&bc.forms(), p)?.is_empty() {
            return Ok((s, bc));
        }
    }
    Err(Error::InvalidParams(format!("no zero-free family among {max_tries} seeds from {seed}")))
}

/// How the columns of Δ are paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRule {
    /// Column b with column 8n+1−b.
    Mirror,
    /// Column c with column 4n+c.
    Shift,
}

/// How the rows of Δ are paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowRule {
    /// Row b with a Ψ-row whose zero pattern contains 4n+1−b and otherwise consists of
    /// complementary pairs {l, 4n+1−l}; the smallest such row in lexicographic order wins.
    Mirror,
    /// Row r with Ψ-row {r} (n = 1 only), i.e. row 4+r of Δ.
    Shift,
}

/// Zero-locus certificates for one summed column or row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCertificate {
    /// 1-based Δ indices that were summed.
    pub pair: (usize, usize),
    pub forms: usize,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extraction {
    #[serde(skip)]
    pub matrix: GradedMatrix,
    pub pairs: Vec<(usize, usize)>,
    /// Twist of each summed column (source) or row (target).
    pub twists: Vec<i64>,
    /// Entries rendered column by column (μ̄) or row by row (μ).
    pub entries: Vec<Vec<String>>,
    pub certificates: Vec<GroupCertificate>,
    /// What the certificates cover: entries of each summed line, which for a single line
    /// are exactly its maximal minors.
    pub scope: String,
    pub certified: bool,
}

fn check_indices(b: &[usize], bound: usize) -> Result<()> {
    if b.is_empty() {
        return Err(Error::InvalidParams("no indices given".into()));
    }
    if b.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(format!("indices {b:?} are not strictly increasing")));
    }
    if let Some(&x) = b.iter().find(|&&x| x == 0 || x > bound) {
        return Err(Error::IndexOutOfRange { index: x, bound });
    }
    Ok(())
}

/// Primes at which forms over `field` can be certified: all of `primes` over the
/// rationals, only the characteristic over F_p.
pub fn effective_primes(field: Field, primes: &[u32]) -> Vec<u32> {
    match field {
        Field::Rationals => primes.to_vec(),
        Field::Prime(p) => vec![p],
    }
}

fn certify(groups: &[(usize, usize, Vec<Form>)], primes: &[u32]) -> Result<Vec<GroupCertificate>> {
    let primes = &effective_primes(groups[0].2[0].field(), primes);
    groups
        .iter()
        .map(|(p, q, forms)| {
            Ok(GroupCertificate {
                pair: (p + 1, q + 1),
                forms: forms.iter().filter(|f| !f.is_zero()).count(),
                certificates: certificates(forms, primes)?,
            })
        })
        .collect()
}

fn scope(lines: usize) -> String {
    if lines == 1 {
        "entries of the single summed line (its maximal minors)".into()
    } else {
        "entries of each summed line separately, not maximal minors".into()
    }
}

/// Summed columns μ̄ of Δ for the given 1-based indices. With a ledger, the ε₁
/// homogeneity identity is also required for every index (Mirror rule).
pub fn extract_mu_bar(
    delta: &Delta,
    rule: ColumnRule,
    b: &[usize],
    ledger: Option<&DegreeLedger>,
    primes: &[u32],
) -> Result<Extraction> {
    let k = delta.k;
    check_indices(b, k)?;
    let m = &delta.matrix;
    let pairs: Vec<(usize, usize)> = b
        .iter()
        .map(|&x| match rule {
            ColumnRule::Mirror => (x - 1, 2 * k - x),
            ColumnRule::Shift => (x - 1, k + x - 1),
        })
        .collect();
    for (&x, &(p, q)) in b.iter().zip(&pairs) {
        if m.source()[p] != m.source()[q] {
            return Err(Error::HomogeneityViolated(format!(
                "columns {} and {} have twists {} and {}",
                p + 1,
                q + 1,
                m.source()[p],
                m.source()[q]
            )));
        }
        if let (ColumnRule::Mirror, Some(l)) = (rule, ledger) {
            if !l.homogeneity_eps1_with(x, delta.epsilon)? {
                return Err(Error::HomogeneityViolated(format!("ledger identity fails for b = {x}")));
            }
        }
    }
    let columns: Vec<Vec<Form>> = pairs
        .iter()
        .map(|&(p, q)| (0..m.rows()).map(|i| m.entry(i, p).add(m.entry(i, q))).collect())
        .collect::<Result<_>>()?;
    let twists: Vec<i64> = pairs.iter().map(|&(p, _)| m.source()[p]).collect();
    let matrix = GradedMatrix::from_fn(m.field(), m.nvars(), twists.clone(), m.target().to_vec(), |i, j| {
        columns[j][i].clone()
    })?;
    let groups: Vec<_> = pairs.iter().zip(&columns).map(|(&(p, q), c)| (p, q, c.clone())).collect();
    let certs = certify(&groups, primes)?;
    let certified = certs.iter().all(|g| g.certificates.iter().all(Certificate::is_empty));
    Ok(Extraction {
        entries: columns.iter().map(|c| c.iter().map(Form::to_string).collect()).collect(),
        matrix,
        pairs: pairs.iter().map(|&(p, q)| (p + 1, q + 1)).collect(),
        twists,
        certificates: certs,
        scope: scope(b.len()),
        certified,
    })
}

/// Admissible Ψ-rows (0-based subsets) for row b under the Mirror rule, in lexicographic order.
pub fn mirror_row_candidates(n: usize, b: usize) -> Vec<Vec<usize>> {
    let k = 4 * n;
    let mirror = k - b;
    psi_row_index(n)
        .into_iter()
        .filter(|l| {
            l.contains(&mirror)
                && l.iter().filter(|&&x| x != mirror).all(|&x| x != b - 1 && l.contains(&(k - 1 - x)))
        })
        .collect()
}

/// Ψ-rows for the Mirror rule: the first two rows are the lexicographically smallest pair
/// of candidates with disjoint zero patterns, later rows take their smallest candidate.
fn select_mirror_rows(n: usize, b: &[usize]) -> Result<Vec<Vec<usize>>> {
    let cands: Vec<Vec<Vec<usize>>> = b.iter().map(|&x| mirror_row_candidates(n, x)).collect();
    if let Some(pos) = cands.iter().position(Vec::is_empty) {
        return Err(Error::NoCompatibleRow(b[pos]));
    }
    let mut out: Vec<Vec<usize>> = cands.iter().map(|c| c[0].clone()).collect();
    if b.len() >= 2 {
        let (l1, l2) = cands[0]
            .iter()
            .flat_map(|l1| cands[1].iter().map(move |l2| (l1, l2)))
            .find(|(l1, l2)| l1.iter().all(|i| !l2.contains(i)))
            .ok_or(Error::NoCompatibleRow(b[1]))?;
        out[0] = l1.clone();
        out[1] = l2.clone();
    }
    Ok(out)
}

/// Summed rows μ of Δ for the given 1-based indices. Under the Mirror rule the zero
/// patterns of the first two selected Ψ-rows must be disjoint; with a ledger the ε₂
/// homogeneity identity is required for every index.
pub fn extract_mu(
    delta: &Delta,
    rule: RowRule,
    b: &[usize],
    ledger: Option<&DegreeLedger>,
    primes: &[u32],
) -> Result<Extraction> {
    let k = delta.k;
    let n = delta.n();
    check_indices(b, k)?;
    let m = &delta.matrix;
    let selected: Vec<Vec<usize>> = match rule {
        RowRule::Shift => {
            if n != 1 {
                return Err(Error::InvalidParams("the shifted row rule needs n = 1".into()));
            }
            b.iter().map(|&x| vec![x - 1]).collect()
        }
        RowRule::Mirror => select_mirror_rows(n, b)?,
    };
    let mut pairs = Vec::with_capacity(b.len());
    for (&x, l) in b.iter().zip(&selected) {
        let q = delta.psi_row(l).expect("Ψ-row exists");
        let p = x - 1;
        if m.target()[p] != m.target()[q] {
            return Err(Error::HomogeneityViolated(format!(
                "rows {} and {} have twists {} and {}",
                p + 1,
                q + 1,
                m.target()[p],
                m.target()[q]
            )));
        }
        if let (RowRule::Mirror, Some(l)) = (rule, ledger) {
            if !l.homogeneity_eps2_with(x, delta.epsilon)? {
                return Err(Error::HomogeneityViolated(format!("ledger identity fails for b = {x}")));
            }
        }
        pairs.push((p, q));
    }
    let rows: Vec<Vec<Form>> = pairs
        .iter()
        .map(|&(p, q)| (0..m.cols()).map(|j| m.entry(p, j).add(m.entry(q, j))).collect())
        .collect::<Result<_>>()?;
    let twists: Vec<i64> = pairs.iter().map(|&(p, _)| m.target()[p]).collect();
    let matrix = GradedMatrix::from_fn(m.field(), m.nvars(), m.source().to_vec(), twists.clone(), |i, j| {
        rows[i][j].clone()
    })?;
    let groups: Vec<_> = pairs.iter().zip(&rows).map(|(&(p, q), r)| (p, q, r.clone())).collect();
    let certs = certify(&groups, primes)?;
    let certified = certs.iter().all(|g| g.certificates.iter().all(Certificate::is_empty));
    Ok(Extraction {
        entries: rows.iter().map(|r| r.iter().map(Form::to_string).collect()).collect(),
        matrix,
        pairs: pairs.iter().map(|&(p, q)| (p + 1, q + 1)).collect(),
        twists,
        certificates: certs,
        scope: scope(b.len()),
        certified,
    })
}

/// Φ on P^{2n+1} from the ledger: φ = ΣᵀJΣ with column degrees ζ_i + ħ₁/2, re-twisted to
/// target ζ_i and source −ζ_j − ħ₁; Ψ its pfaffian adjugate.
pub fn weighted_instance(
    ledger: &DegreeLedger,
    field: Field,
    seed: u64,
    max_terms: Option<usize>,
) -> Result<(AntisymMatrix, GradedMatrix)> {
    let n = ledger.n() as usize;
    if ledger.hbar1 % 2 != 0 {
        return Err(Error::DegreeInfeasible(format!(
            "hbar1 = {} is odd, so the section degrees zeta_i + hbar1/2 are not integers",
            ledger.hbar1
        )));
    }
    let sd: Vec<i64> = ledger.zetas.iter().map(|z| z + ledger.hbar1 / 2).collect();
    let nvars = 2 * n + 2;
    let sigma = random_sections(n, &sd, field, nvars, max_terms, seed)?;
    let phi = phi_from_sections(&sigma, &sd)?;
    let source = ledger.zetas.iter().map(|z| -z - ledger.hbar1).collect();
    let phi = AntisymMatrix::new(phi.into_matrix().with_twists(source, ledger.zetas.clone())?)?;
    let psi = make_psi(&phi, n)?;
    Ok((phi, psi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// Every symbolic and degree check passed.
    pub passed: bool,
    /// Additionally every zero-locus certificate is empty.
    pub certified: bool,
    pub label: String,
}

impl Verdict {
    fn new(passed: bool, certified: bool, primes: &[u32]) -> Verdict {
        let label = match (passed, certified) {
            (true, true) => format!("certified at primes {primes:?} (finite-field evidence)"),
            (true, false) => "checks pass, but a certificate found a common zero".into(),
            _ => "failed".into(),
        };
        Verdict { passed, certified: passed && certified, label }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KprReport {
    pub construction: String,
    pub ledger: DegreeLedger,
    pub field: Field,
    pub seed: u64,
    pub primes: Vec<u32>,
    pub epsilon: i64,
    pub delta_shape: (usize, usize),
    pub degree_violations: Vec<Violation>,
    pub composition_zero: bool,
    pub column_extraction: Option<Extraction>,
    pub row_extraction: Option<Extraction>,
    pub invariants: Vec<InvariantRecord>,
    pub verdict: Verdict,
}

/// Settings shared by the weighted drivers.
#[derive(Clone, Debug)]
pub struct InstanceConfig {
    pub field: Field,
    pub seed: u64,
    pub max_terms: Option<usize>,
    pub primes: Vec<u32>,
}

fn weighted_delta(ledger: &DegreeLedger, eps: i64, cfg: &InstanceConfig) -> Result<(Delta, bool)> {
    let (phi, psi) = weighted_instance(ledger, cfg.field, cfg.seed, cfg.max_terms)?;
    let delta = assemble_delta(&KprInput { phi, psi, epsilon: eps })?;
    let comp = delta_composition_zero(&delta)?;
    Ok((delta, comp))
}

/// Weighted construction on P^{2n+1}: part 1 sums columns b with 8n+1−b at ε = ε₁, part
/// 2 sums rows at ε = ε₂. `b` defaults to 1..=2n−1.
pub fn weighted_kpr(
    params: WeightParams,
    part: u8,
    b: Option<Vec<usize>>,
    cfg: &InstanceConfig,
) -> Result<KprReport> {
    let params = WeightParams::new(params.n, params.alpha, params.beta, params.gamma)?;
    let ledger = build_ledger(params);
    let n = params.n as usize;
    let b = b.unwrap_or_else(|| (1..=2 * n - 1).collect());
    if b.len() != 2 * n - 1 {
        return Err(Error::InvalidParams(format!("expected {} indices b, got {}", 2 * n - 1, b.len())));
    }
    let eps = match part {
        1 => ledger.epsilon1,
        2 => ledger.epsilon2,
        _ => return Err(Error::InvalidParams(format!("part must be 1 or 2, got {part}"))),
    };
    let (delta, comp) = weighted_delta(&ledger, eps, cfg)?;
    let (col, row) = if part == 1 {
        (Some(extract_mu_bar(&delta, ColumnRule::Mirror, &b, Some(&ledger), &cfg.primes)?), None)
    } else {
        (None, Some(extract_mu(&delta, RowRule::Mirror, &b, Some(&ledger), &cfg.primes)?))
    };
    let inv = bundle_invariants_report(&Construction::WeightedKpr { params, b: Some(b) })?;
    let wanted: &[&str] = if part == 1 { &["c1(G), epsilon_1", "c1(E)"] } else { &["c1(G), epsilon_2", "c1(K)"] };
    let invariants = inv.records.into_iter().filter(|r| wanted.contains(&r.name.as_str())).collect();
    let violations = delta.matrix.validate();
    let certified = col.iter().chain(&row).all(|e| e.certified);
    let passed = comp && violations.is_empty();
    Ok(KprReport {
        construction: format!("weighted KPR bundle, part {part}"),
        ledger,
        field: cfg.field,
        seed: cfg.seed,
        primes: effective_primes(cfg.field, &cfg.primes),
        epsilon: eps,
        delta_shape: (delta.matrix.rows(), delta.matrix.cols()),
        degree_violations: violations,
        composition_zero: comp,
        column_extraction: col,
        row_extraction: row,
        invariants,
        verdict: Verdict::new(passed, certified, &effective_primes(cfg.field, &cfg.primes)),
    })
}

/// The n = 1 constructions at ε = ε_w, w ∈ 3..=6: column w−2 with column w+2 and row 7−w
/// with row 11−w, with c₁ of the resulting rank-3 bundles from the Chern chain.
pub fn p4_epsilon_constructions(params: WeightParams, which: usize, cfg: &InstanceConfig) -> Result<KprReport> {
    let params = WeightParams::new(params.n, params.alpha, params.beta, params.gamma)?;
    let ledger = build_ledger(params);
    let eps = ledger.epsilon_p4(which)?;
    if eps < 1 {
        return Err(Error::InvalidParams(format!("epsilon_{which} = {eps} must be >= 1")));
    }
    let (c, r) = (which - 2, 7 - which);
    let (delta, comp) = weighted_delta(&ledger, eps, cfg)?;
    let col = extract_mu_bar(&delta, ColumnRule::Shift, &[c], None, &cfg.primes)?;
    let row = extract_mu(&delta, RowRule::Shift, &[r], None, &cfg.primes)?;
    // 0 → 𝒢 → ⊕O(ζ_i) → (pushforward, c₁ = 2ε) → 0, then ℰ = 𝒢/O(ζ_c − ε) and
    // 𝒦 = ker(𝒢 → O(ζ_r)).
    let sum: i64 = ledger.zetas.iter().sum();
    let (zc, zr) = (ledger.zeta(c)?, ledger.zeta(r)?);
    let g = exact_seq_solve(
        &chern_of_twist_sum(&ledger.zetas, 3),
        &pushforward_data(2, 0, 0, 0, eps, 3)?,
        Position::Quot,
    )?;
    let c1e = exact_seq_solve(&g, &chern_of_twist_sum(&[zc - eps], 3), Position::Sub)?.c(1).to_integer();
    let c1k = exact_seq_solve(&g, &chern_of_twist_sum(&[zr], 3), Position::Quot)?.c(1).to_integer();
    let mut invariants = vec![
        InvariantRecord::new(format!("c1(E_{c}) = sum(zeta) - eps - zeta_{c}"), BigInt::from(sum - eps - zc), c1e.clone()),
        InvariantRecord::new(format!("c1(K_{r}) = sum(zeta) - 2 eps - zeta_{r}"), BigInt::from(sum - 2 * eps - zr), c1k.clone()),
    ];
    if which == 3 {
        let (a, b, g) = (params.alpha, params.beta, params.gamma);
        invariants.push(InvariantRecord::new("c1(E_1), printed -2 gamma + 12 beta", BigInt::from(-2 * g + 12 * b), c1e));
        invariants.push(InvariantRecord::new(
            "c1(K_4), printed 3(3 beta - alpha) - 4 gamma",
            BigInt::from(3 * (3 * b - a) - 4 * g),
            c1k,
        ));
    }
    let violations = delta.matrix.validate();
    let passed = comp && violations.is_empty() && invariants.iter().all(|r| r.agree);
    let certified = col.certified && row.certified;
    Ok(KprReport {
        construction: format!("P^3 construction at epsilon_{which}"),
        ledger,
        field: cfg.field,
        seed: cfg.seed,
        primes: effective_primes(cfg.field, &cfg.primes),
        epsilon: eps,
        delta_shape: (delta.matrix.rows(), delta.matrix.cols()),
        degree_violations: violations,
        composition_zero: comp,
        column_extraction: Some(col),
        row_extraction: Some(row),
        invariants,
        verdict: Verdict::new(passed, certified, &effective_primes(cfg.field, &cfg.primes)),
    })
}
