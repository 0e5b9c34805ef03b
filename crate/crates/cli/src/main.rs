//! `bundlecalc` command-line front end. Every command prints one deterministic report
//! document (JSON or flattened text) with a version stamp, an echo of the input, and one
//! section per check. Exit code 0 means every check passed (and every certificate is
//! empty), 1 means a check failed, 2 means malformed input or invalid parameters.

use bundlecalc::chern::{
    bundle_invariants_report, pushforward_chern, pushforward_chern_oracle, Construction,
};
use bundlecalc::error::Error;
use bundlecalc::field::Field;
use bundlecalc::form::Form;
use bundlecalc::json::{parse_forms, parse_graded, FormLiteral, GradedLiteral};
use bundlecalc::kpr::{
    assemble_delta, binet_cauchy_family, delta_composition_zero, effective_primes,
    p4_epsilon_constructions, random_binet_cauchy, weighted_kpr, FamilyDegrees, FamilyForms,
    InstanceConfig, KprInput, KprReport,
};
use bundlecalc::monad::{antidiagonal_f, certificates, verify_monad, Certificate, MonadData};
use bundlecalc::pfaffian::{make_psi, AntisymMatrix};
use bundlecalc::symplectic::{build_fw, check_sigma_invariance, sigma_weights};
use bundlecalc::weights::{build_ledger, WeightParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Serialize)]
#[command(name = "bundlecalc", version, about = "Exact checks for monads and KPR bundles on projective space")]
struct Cli {
    /// Primes for zero-locus certificates.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,5,7")]
    primes: Vec<u32>,
    /// Seed for every randomized instance.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel kernels (defaults to all cores).
    #[arg(long, global = true)]
    #[serde(skip)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Degree ledger ζ, ħ, ε for weights (α, β) and twist γ.
    Weights(ParamArgs),
    /// Symplectic form f orthogonal to the hyperplane ker λ of the top weight space.
    Fw(FwArgs),
    /// Exhaustive search for a common projective zero of forms over F_p.
    Zerocheck(ZerocheckArgs),
    /// Null-correlation monad checks.
    Monad(MonadArgs),
    /// Pfaffian of an antisymmetric graded matrix, optionally with its adjugate ψ.
    Pfaffian(PfaffianArgs),
    /// Block-matrix (KPR) constructions.
    #[command(subcommand)]
    Kpr(KprCommand),
    /// Chern class calculus.
    #[command(subcommand)]
    Chern(ChernCommand),
}

#[derive(Args, Serialize, Clone, Copy)]
struct ParamArgs {
    #[arg(long, default_value_t = 1)]
    n: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    beta: i64,
    #[arg(long, default_value_t = 1)]
    gamma: i64,
}

impl ParamArgs {
    fn params(&self) -> Result<WeightParams, Error> {
        WeightParams::new(self.n, self.alpha, self.beta, self.gamma)
    }
}

#[derive(Args, Serialize)]
struct FwArgs {
    #[arg(long)]
    n: usize,
    /// JSON array of the n+1 coordinates of λ (integers or "a/b"), or @file.
    #[arg(long)]
    functional: String,
    /// Weights used for the σ-invariance check.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    beta: i64,
}

#[derive(Args, Serialize)]
struct ZerocheckArgs {
    /// Certificate prime; defaults to --primes.
    #[arg(long)]
    prime: Option<u32>,
    /// JSON list of form literals, or @file.
    #[arg(long)]
    forms: String,
}

#[derive(Args, Serialize)]
struct MonadArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// JSON list of the 2n+2 forms g_i, or @file; defaults to g_i = x_i^deg(g_i).
    #[arg(long)]
    g: Option<String>,
    /// JSON list of the n+1 antidiagonal values r_p; defaults to all 1.
    #[arg(long)]
    r: Option<String>,
    /// Work over F_p instead of the rationals.
    #[arg(long)]
    prime: Option<u32>,
}

#[derive(Args, Serialize)]
struct PfaffianArgs {
    /// Graded-matrix literal, or @file.
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    prime: Option<u32>,
    /// Also build ψ for a 4n×4n input with this n.
    #[arg(long)]
    psi: Option<usize>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KprCommand {
    /// Assemble Δ = [[z^ε I, Φ], [Ψ, 0]] from Φ (and Ψ, defaulting to the adjugate of Φ).
    Assemble(AssembleArgs),
    /// Binet–Cauchy matrices M, N with Pf(M) = 0 and MN = NM = 0.
    BinetCauchy(BinetCauchyArgs),
    /// Weighted construction on P^{2n+1}: summed columns (part 1) or rows (part 2).
    Thm327(Thm327Args),
    /// n = 1 constructions at ε₃..ε₆.
    P4(P4Args),
}

#[derive(Args, Serialize)]
struct AssembleArgs {
    #[arg(long)]
    phi: String,
    #[arg(long)]
    psi: Option<String>,
    #[arg(long)]
    epsilon: i64,
    #[arg(long)]
    prime: Option<u32>,
}

#[derive(Args, Serialize)]
struct BinetCauchyArgs {
    /// Draw T, W, V, U at random from --seed.
    #[arg(long)]
    random: bool,
    /// JSON object {"t": [f, f], "w": [..], "v": [..], "u": [..]} of form literals, or @file.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 1)]
    w1: i64,
    #[arg(long, default_value_t = 1)]
    w2: i64,
    #[arg(long, default_value_t = 1)]
    v2: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    a1: i64,
    #[arg(long, default_value_t = 4)]
    nvars: usize,
    #[arg(long)]
    prime: Option<u32>,
}

#[derive(Args, Serialize)]
struct InstanceArgs {
    /// Coefficient field F_p of the random instance; the rationals if omitted.
    #[arg(long)]
    prime: Option<u32>,
    /// Bound on the number of terms of each random section.
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Args, Serialize)]
struct Thm327Args {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    part: u8,
    /// 2n−1 strictly increasing 1-based indices; defaults to 1..=2n−1.
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<usize>>,
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Args, Serialize)]
struct P4Args {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    eps: usize,
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ChernCommand {
    /// Chern classes of a pushforward from the ε-thickened hyperplane, by closed form and
    /// by the Euler characteristic oracle.
    Push(PushArgs),
    /// Every stated invariant of a construction, by closed form and by Chern chain.
    Report(ReportArgs),
}

#[derive(Args, Serialize)]
struct PushArgs {
    #[arg(long)]
    r: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    c1: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    c2: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    c3: i64,
    #[arg(long)]
    eps: i64,
    /// Dimension N of the ambient P^N.
    #[arg(long = "ambient", default_value_t = 4)]
    ambient: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ConstructionName {
    Thm327,
    Prop415,
    Prop424,
    Thm425,
}

#[derive(Args, Serialize)]
struct ReportArgs {
    #[arg(long, value_enum)]
    construction: ConstructionName,
    #[arg(long, default_value_t = 1)]
    n: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    beta: i64,
    #[arg(long, default_value_t = 1)]
    gamma: i64,
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    w1: i64,
    #[arg(long, default_value_t = 1)]
    w2: i64,
    #[arg(long, default_value_t = 1)]
    v2: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    a1: i64,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::CompositionNonzero
            | Error::HomogeneityViolated(_)
            | Error::NoCompatibleRow(_)
            | Error::RankPrereqViolated(_)
            | Error::IntegralityViolation(_)
            | Error::SingularSystem => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

type Sections = Vec<(String, Value)>;
type Outcome = Result<(Sections, bool), Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Inline JSON, or the contents of a file when the argument starts with '@'.
fn read_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| malformed(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn field_of(prime: Option<u32>) -> Result<Field, Failure> {
    match prime {
        Some(p) => Ok(Field::prime(p as u64)?),
        None => Ok(Field::Rationals),
    }
}

fn check_primes(primes: &[u32]) -> Result<(), Failure> {
    for &p in primes {
        Field::prime(p as u64)?;
    }
    Ok(())
}

fn all_empty(certs: &[Certificate]) -> bool {
    certs.iter().all(Certificate::is_empty)
}

fn run_weights(a: &ParamArgs) -> Outcome {
    let l = build_ledger(a.params()?);
    let k = l.zetas.len();
    let eps1 = (1..=k).map(|b| l.homogeneity_check_eps1(b)).collect::<Result<Vec<_>, _>>()?;
    let eps2 = (1..=k).map(|b| l.homogeneity_check_eps2(b)).collect::<Result<Vec<_>, _>>()?;
    let ok = l.pair_identity() && l.sum_identity() && eps1.iter().chain(&eps2).all(|x| *x);
    Ok((
        vec![
            ("weight ledger".into(), to_value(&l)),
            (
                "zeta identities".into(),
                json!({ "mirror_pairs_sum": l.pair_identity(), "total_sum": l.sum_identity() }),
            ),
            (
                "homogeneity of summed columns and rows".into(),
                json!({ "epsilon_1": eps1, "epsilon_2": eps2 }),
            ),
            (
                "degree conditions".into(),
                json!({ "strong_bound": l.params.strong_bound(), "hbar1_positive": l.hbar1 > 0 }),
            ),
        ],
        ok,
    ))
}

fn run_fw(a: &FwArgs) -> Outcome {
    let text = read_arg(&a.functional)?;
    let raw: Vec<Value> = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    let functional = raw
        .iter()
        .map(|v| {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(malformed("functional entries must be numbers or strings")),
            };
            Ok(Field::Rationals.parse(&s)?.to_rational())
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let fw = build_fw(a.n, &functional)?;
    let (invariant, d) = check_sigma_invariance(&fw.f_matrix, &sigma_weights(a.n, a.alpha, a.beta));
    let ok = fw.orthogonal && fw.nondegenerate && invariant;
    Ok((
        vec![
            ("symplectic form on the top weight space".into(), to_value(&fw)),
            ("sigma invariance".into(), json!({ "invariant": invariant, "exponent": d })),
        ],
        ok,
    ))
}

fn run_zerocheck(a: &ZerocheckArgs, primes: &[u32]) -> Outcome {
    let forms = parse_forms(&read_arg(&a.forms)?, Field::Rationals)?;
    let primes = a.prime.map(|p| vec![p]).unwrap_or_else(|| primes.to_vec());
    check_primes(&primes)?;
    let certs = certificates(&forms, &primes)?;
    let ok = all_empty(&certs);
    Ok((vec![("common zero search".into(), to_value(&certs))], ok))
}

fn parse_scalars(text: &str, field: Field) -> Result<Vec<bundlecalc::field::Scalar>, Failure> {
    let raw: Vec<Value> = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    raw.iter()
        .map(|v| match v {
            Value::String(s) => Ok(field.parse(s)?),
            Value::Number(n) => Ok(field.parse(&n.to_string())?),
            _ => Err(malformed("expected numbers or strings")),
        })
        .collect()
}

fn run_monad(a: &MonadArgs, primes: &[u32]) -> Outcome {
    let field = field_of(a.prime)?;
    let ledger = build_ledger(a.params.params()?);
    let size = ledger.g_degrees.len();
    let g = match &a.g {
        Some(text) => parse_forms(&read_arg(text)?, field)?,
        None => ledger
            .g_degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                if d < 0 {
                    return Err(malformed(format!("deg(g_{i}) = {d} is negative")));
                }
                Ok(Form::var(field, size, i).pow(d as u32))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let r = match &a.r {
        Some(text) => parse_scalars(&read_arg(text)?, field)?,
        None => vec![field.one(); size / 2],
    };
    if r.len() != size / 2 {
        return Err(malformed(format!("expected {} values r_p, got {}", size / 2, r.len())));
    }
    let f = antidiagonal_f(field, &r);
    let report = verify_monad(&MonadData { g: g.clone(), f, ledger })?;
    let primes = effective_primes(field, primes);
    check_primes(&primes)?;
    let certs = certificates(&g, &primes)?;
    let ok = report.ok && all_empty(&certs);
    Ok((
        vec![
            ("null-correlation monad".into(), to_value(&report)),
            ("common zeros of the g_i".into(), to_value(&certs)),
        ],
        ok,
    ))
}

fn run_pfaffian(a: &PfaffianArgs) -> Outcome {
    let field = field_of(a.prime)?;
    let m = AntisymMatrix::new(parse_graded(&read_arg(&a.matrix)?, field, None)?)?;
    let pf = m.pfaffian()?;
    let mut sections = vec![(
        "pfaffian".into(),
        json!({ "form": pf.to_string(), "literal": FormLiteral::from_form(&pf) }),
    )];
    let mut ok = true;
    if let Some(n) = a.psi {
        let psi = make_psi(&m, n)?;
        let zero = psi.compose(m.matrix())?.is_zero();
        ok &= zero;
        sections.push((
            "pfaffian adjugate".into(),
            json!({ "psi": GradedLiteral::from_matrix(&psi), "psi_phi_zero": zero }),
        ));
    }
    Ok((sections, ok))
}

fn run_assemble(a: &AssembleArgs) -> Outcome {
    let field = field_of(a.prime)?;
    let phi = AntisymMatrix::new(parse_graded(&read_arg(&a.phi)?, field, None)?)?;
    let psi = match &a.psi {
        Some(text) => parse_graded(&read_arg(text)?, field, Some(phi.matrix().nvars()))?,
        None => make_psi(&phi, phi.size() / 4)?,
    };
    let delta = assemble_delta(&KprInput { phi, psi, epsilon: a.epsilon })?;
    let comp = delta_composition_zero(&delta)?;
    let violations = delta.matrix.validate();
    let ok = comp && violations.is_empty();
    Ok((
        vec![(
            "block matrix Delta".into(),
            json!({
                "shape": [delta.matrix.rows(), delta.matrix.cols()],
                "degree_violations": violations,
                "psi_phi_zero": comp,
                "delta": GradedLiteral::from_matrix(&delta.matrix),
            }),
        )],
        ok,
    ))
}

#[derive(serde::Deserialize)]
struct FamilyLiteral {
    t: [FormLiteral; 2],
    w: [FormLiteral; 2],
    v: [FormLiteral; 2],
    u: [FormLiteral; 2],
}

fn run_binet_cauchy(a: &BinetCauchyArgs, seed: u64, primes: &[u32]) -> Outcome {
    let field = field_of(a.prime)?;
    let deg = FamilyDegrees { w1: a.w1, w2: a.w2, v2: a.v2 };
    let bc = match (&a.input, a.random) {
        (Some(text), false) => {
            let lit: FamilyLiteral =
                serde_json::from_str(&read_arg(text)?).map_err(|e| malformed(e.to_string()))?;
            let pair = |p: &[FormLiteral; 2]| -> Result<[Form; 2], Failure> {
                Ok([p[0].to_form(field)?, p[1].to_form(field)?])
            };
            let forms = FamilyForms { t: pair(&lit.t)?, w: pair(&lit.w)?, v: pair(&lit.v)?, u: pair(&lit.u)? };
            binet_cauchy_family(&forms, deg, a.a1)?
        }
        (None, true) => random_binet_cauchy(deg, a.a1, field, a.nvars, seed)?,
        _ => return Err(malformed("give exactly one of --random and --input")),
    };
    let pf_zero = bc.pfaffian_zero()?;
    let (mn, nm) = bc.products_zero()?;
    let primes = effective_primes(field, primes);
    check_primes(&primes)?;
    let certs = certificates(&bc.forms(), &primes)?;
    let names = ["S12", "S13", "S14", "S23", "S24", "S34"];
    let forms: serde_json::Map<String, Value> =
        names.iter().zip(bc.forms()).map(|(n, f)| (n.to_string(), Value::String(f.to_string()))).collect();
    let ok = pf_zero && mn && nm && all_empty(&certs);
    Ok((
        vec![
            ("Binet-Cauchy forms".into(), Value::Object(forms)),
            (
                "Plucker relation and adjugate products".into(),
                json!({ "pfaffian_zero": pf_zero, "mn_zero": mn, "nm_zero": nm, "d": bc.d }),
            ),
            ("common zeros of the S_ij".into(), to_value(&certs)),
            (
                "matrices".into(),
                json!({
                    "m": GradedLiteral::from_matrix(bc.m.matrix()),
                    "n": GradedLiteral::from_matrix(&bc.n),
                }),
            ),
        ],
        ok,
    ))
}

fn kpr_sections(r: KprReport) -> (Sections, bool) {
    let ok = r.verdict.certified;
    (vec![("block-matrix construction".into(), to_value(&r))], ok)
}

fn instance_config(a: &InstanceArgs, seed: u64, primes: &[u32]) -> Result<InstanceConfig, Failure> {
    check_primes(primes)?;
    Ok(InstanceConfig { field: field_of(a.prime)?, seed, max_terms: a.max_terms, primes: primes.to_vec() })
}

fn run_chern_push(a: &PushArgs) -> Outcome {
    let closed = pushforward_chern(a.r, a.c1, a.c2, a.c3, a.eps, a.ambient)?;
    let oracle = pushforward_chern_oracle(a.r, a.c1, a.c2, a.c3, a.eps, a.ambient)?;
    let agree = closed == oracle;
    fn show<T: ToString>(v: &[T]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }
    Ok((
        vec![(
            "pushforward from the thickened hyperplane".into(),
            json!({
                "closed_form": show(&closed),
                "oracle": show(&oracle),
                "agree": agree,
            }),
        )],
        agree,
    ))
}

fn run_chern_report(a: &ReportArgs) -> Outcome {
    let c = match a.construction {
        ConstructionName::Thm327 => Construction::WeightedKpr {
            params: WeightParams::new(a.n, a.alpha, a.beta, a.gamma)?,
            b: a.b.clone(),
        },
        ConstructionName::Prop415 => Construction::BinetCauchyPair { w1: a.w1, w2: a.w2, v2: a.v2, a1: a.a1 },
        ConstructionName::Prop424 => Construction::ThickenedRankThree { w1: a.w1, w2: a.w2, v2: a.v2 },
        ConstructionName::Thm425 => Construction::DiagonalFamily { n: a.n },
    };
    let r = bundle_invariants_report(&c)?;
    // Discrepancies against printed values are data; the command fails only if a flag that
    // states a structural fact (Whitney identity, self-duality) is false.
    let structural = ["Whitney identity mod h^4", "N is self-dual up to twist", "c3(E2) = 0", "c_h(L2) irreducible"];
    let ok = structural.iter().all(|k| r.flags.get(*k).copied().unwrap_or(true));
    Ok((vec![("Chern invariants".into(), to_value(&r))], ok))
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Weights(a) => run_weights(a),
        Command::Fw(a) => run_fw(a),
        Command::Zerocheck(a) => run_zerocheck(a, &cli.primes),
        Command::Monad(a) => run_monad(a, &cli.primes),
        Command::Pfaffian(a) => run_pfaffian(a),
        Command::Kpr(KprCommand::Assemble(a)) => run_assemble(a),
        Command::Kpr(KprCommand::BinetCauchy(a)) => run_binet_cauchy(a, cli.seed, &cli.primes),
        Command::Kpr(KprCommand::Thm327(a)) => {
            let cfg = instance_config(&a.instance, cli.seed, &cli.primes)?;
            Ok(kpr_sections(weighted_kpr(a.params.params()?, a.part, a.b.clone(), &cfg)?))
        }
        Command::Kpr(KprCommand::P4(a)) => {
            let cfg = instance_config(&a.instance, cli.seed, &cli.primes)?;
            Ok(kpr_sections(p4_epsilon_constructions(a.params.params()?, a.eps, &cfg)?))
        }
        Command::Chern(ChernCommand::Push(a)) => run_chern_push(a),
        Command::Chern(ChernCommand::Report(a)) => run_chern_report(a),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix} = {v}")),
    }
}

fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("value serializes") + "\n",
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", doc, &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("bundlecalc: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = dispatch(&cli);
    let mut doc = json!({
        "tool": "bundlecalc",
        "version": env!("CARGO_PKG_VERSION"),
        "input": to_value(&cli),
    });
    let code = match outcome {
        Ok((sections, ok)) => {
            doc["sections"] = Value::Array(
                sections.into_iter().map(|(name, result)| json!({ "name": name, "result": result })).collect(),
            );
            doc["ok"] = Value::Bool(ok);
            u8::from(!ok)
        }
        Err(f) => {
            eprintln!("bundlecalc: {}", f.message);
            doc["ok"] = Value::Bool(false);
            doc["error"] = Value::String(f.message);
            f.code
        }
    };
    let text = render(&doc, cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("bundlecalc: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
