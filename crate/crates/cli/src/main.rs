//! `quintics` — exact computations for dual elliptic quintics and elliptic
//! K3 lattices: Grothendieck-ring classes, Schubert degrees, lattice
//! classification, Mukai-vector quotients, and finite-field counting
//! oracles.
//!
//! Every subcommand recomputes its own cross-checks and reports them; exit
//! code 0 means all checks passed, 1 means a check failed, 2 is a usage
//! error. `--json` switches stdout to a single machine-readable object.

mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use quintics::ff::FiniteField;
use quintics::ffcount::{
    count_grassmannian, count_hyperplane_section, count_universal_hyperplane,
    count_universal_section, form_space_from_json, form_space_to_json, random_form_of_rank,
    random_smooth_form_space, seeded_rng, torsor_count_test, FormSpace,
};
use quintics::lattice::{
    self, discriminant_form, index_is_odd_prime, isometry_group, isotropic_lines, lambda_gram,
    signature,
};
use quintics::motivic::{
    class_grassmannian, class_hyperplane_section, class_projective_space,
    class_universal_hyperplane, verify_quintic_duality, MotivicExpression,
};
use quintics::mukai::{self, jac2_isomorphism_verdict, jacobian_ns};
use quintics::poly::LPoly;
use quintics::schubert::{degree, Partition, SchubertCycle};
use report::RunReport;

const DEFAULT_SEED: u64 = 20;

#[derive(Parser)]
#[command(name = "quintics", version, about)]
struct Cli {
    /// Emit one JSON report object on stdout instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classes in the Grothendieck ring as polynomials in L
    Motivic {
        #[command(subcommand)]
        cmd: MotivicCmd,
    },
    /// Pieri-rule Schubert calculus on Gr(k,n)
    Schubert {
        #[command(subcommand)]
        cmd: SchubertCmd,
    },
    /// Rank-2 even lattices Λ_{t,d}
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Extended Néron–Severi lattice and Jacobian quotients
    Mukai {
        #[command(subcommand)]
        cmd: MukaiCmd,
    },
    /// Finite-field enumeration oracles
    Count {
        #[command(subcommand)]
        cmd: CountCmd,
    },
}

#[derive(Subcommand)]
enum MotivicCmd {
    /// Compute the class of a named variety
    Class(ClassArgs),
    /// Double count of the universal hyperplane section over P(A)
    VerifyDuality,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variety {
    Pn,
    Gr,
    Section,
    Universal,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long, value_enum)]
    variety: Variety,
    /// Dimension for pn, ambient dimension for gr
    #[arg(long)]
    n: Option<usize>,
    /// Subspace dimension for gr
    #[arg(long)]
    k: Option<usize>,
    /// Kernel dimension (1 = smooth, 3 = singular) for section
    #[arg(long)]
    kernel_dim: Option<u32>,
    /// Family class for universal: pn:<n>, gr:<k>,<n>, x, y or zero
    #[arg(long)]
    s: Option<String>,
    /// Class of S ∩ Gr(2,V∨) for universal (same syntax)
    #[arg(long)]
    s_dual: Option<String>,
    /// Also evaluate the scalar part at L = q
    #[arg(long)]
    eval: Option<u64>,
}

#[derive(Subcommand)]
enum SchubertCmd {
    /// Degree of a Schubert cycle: coefficient of the point class in
    /// σ_λ · σ₁^(k(n−k)−|λ|)
    Degree(PartitionArgs),
    /// One Pieri step: σ_λ · σ₁
    Pieri(PartitionArgs),
}

#[derive(Args)]
struct PartitionArgs {
    /// Comma-separated weakly decreasing parts, e.g. 2,0
    #[arg(long)]
    partition: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Gram matrix of Λ_{t,d}
    Gram(TdArgs),
    /// Discriminant group and quadratic form
    Disc(TdArgs),
    /// Isomorphism test between Λ_{t,d} and Λ_{t,d2}
    Isom(TdPairArgs),
    /// Genus comparison between Λ_{t,d} and Λ_{t,d2}
    Genus(TdPairArgs),
    /// Full isometry group
    Autgroup(TdArgs),
    /// The two primitive isotropic classes
    Isotropic(TdArgs),
}

#[derive(Args)]
struct TdArgs {
    #[arg(long)]
    t: i64,
    #[arg(long)]
    d: i64,
}

#[derive(Args)]
struct TdPairArgs {
    #[arg(long)]
    t: i64,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    d2: i64,
}

#[derive(Subcommand)]
enum MukaiCmd {
    /// NS of the degree-k Jacobian via the Mukai-vector quotient v⊥/v
    Jac {
        #[arg(long)]
        t: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
    },
    /// Is an elliptic K3 with NS = Λ_{5,d} isomorphic to its Jac²?
    Verdict {
        #[arg(long)]
        d: i64,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Count k-subspaces of an n-space by echelon enumeration
    Grassmannian {
        #[arg(long)]
        q: u64,
        /// Extension degree: count over F_{q^ext}
        #[arg(long, default_value_t = 1)]
        ext: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
    /// Count a hyperplane section of Gr(2,5) for a random form of given rank
    Section {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        ext: u64,
        /// Rank of the 2-form: 4 (smooth section) or 2 (singular section)
        #[arg(long, default_value_t = 4)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Double count of the universal hyperplane section
    Universal {
        #[arg(long)]
        q: u64,
        /// Restrict to S = P(A) for a fixture file (five 5×5 matrices)
        #[arg(long)]
        fixture: Option<String>,
        /// Seeded random S = P(A) instead of the full form space
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dual-section point counts and the incidence pairing check
    Torsor {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Fixture file overrides the seeded random form space
        #[arg(long)]
        fixture: Option<String>,
        /// Screen extension degree (reliability needs 2)
        #[arg(long, default_value_t = 2)]
        ext: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                report.print_human();
            }
            std::process::exit(if report.all_passed() { 0 } else { 1 });
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn expr_to_value(e: &MotivicExpression) -> Value {
    serde_json::to_value(e).expect("expression serializes")
}

fn bigint_value(x: &BigInt) -> Value {
    // counts here fit i64 comfortably; fall back to a string if not
    match i64::try_from(x.clone()) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

/// Parse a family class: `pn:<n>`, `gr:<k>,<n>`, `x`, `y` or `zero`.
fn parse_class_spec(spec: &str) -> Result<MotivicExpression> {
    if let Some(rest) = spec.strip_prefix("pn:") {
        let n: usize = rest.parse().context("pn:<n> needs an integer")?;
        return Ok(class_projective_space(n));
    }
    if let Some(rest) = spec.strip_prefix("gr:") {
        let (k, n) = rest
            .split_once(',')
            .ok_or_else(|| anyhow!("gr:<k>,<n> needs two integers"))?;
        return Ok(class_grassmannian(k.trim().parse()?, n.trim().parse()?));
    }
    match spec {
        "x" => Ok(MotivicExpression::symbol_x()),
        "y" => Ok(MotivicExpression::symbol_y()),
        "zero" | "0" => Ok(MotivicExpression::zero()),
        other => bail!("unknown class spec '{other}' (use pn:<n>, gr:<k>,<n>, x, y, zero)"),
    }
}

fn parse_partition(text: &str) -> Result<Partition> {
    let parts: Vec<u32> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().context("partition parts must be integers"))
        .collect::<Result<_>>()?;
    Partition::new(parts).map_err(|e| anyhow!(e.to_string()))
}

fn field_for(q: u64, ext: u64) -> Result<FiniteField> {
    // accept prime powers directly when ext is 1 (e.g. --q 4)
    let f = if ext == 1 {
        FiniteField::of_order(q)
    } else {
        FiniteField::new(q, ext)
    };
    f.map_err(|e| anyhow!(e.to_string()))
}

fn load_or_generate_space(
    field: &FiniteField,
    fixture: &Option<String>,
    seed: u64,
) -> Result<(FormSpace, Option<u64>, u64)> {
    if let Some(path) = fixture {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let a = form_space_from_json(&text, field).map_err(|e| anyhow!(e.to_string()))?;
        Ok((a, None, 0))
    } else {
        let (a, attempts) =
            random_smooth_form_space(field, seed, 64).map_err(|e| anyhow!(e.to_string()))?;
        Ok((a, Some(seed), attempts))
    }
}

fn run(command: Command) -> Result<RunReport> {
    match command {
        Command::Motivic { cmd } => run_motivic(cmd),
        Command::Schubert { cmd } => run_schubert(cmd),
        Command::Lattice { cmd } => run_lattice(cmd),
        Command::Mukai { cmd } => run_mukai(cmd),
        Command::Count { cmd } => run_count(cmd),
    }
}

fn run_motivic(cmd: MotivicCmd) -> Result<RunReport> {
    match cmd {
        MotivicCmd::Class(args) => run_motivic_class(args),
        MotivicCmd::VerifyDuality => {
            let mut report = RunReport::new("motivic verify-duality", Value::Null);
            let r = verify_quintic_duality();
            report.outputs = json!({
                "lhs": expr_to_value(&r.lhs),
                "rhs": expr_to_value(&r.rhs),
                "difference": expr_to_value(&r.difference),
                "identity_holds": r.identity_holds,
                "shared_scalar": r.lhs.scalar_part.to_string(),
            });
            report.check_bool("identity_holds", r.identity_holds);
            report.check(
                "difference_is_l4_times_y_minus_x",
                expr_to_value(&r.difference),
                json!({"scalar": [], "x": [0,0,0,0,-1], "y": [0,0,0,0,1]}),
            );
            Ok(report)
        }
    }
}

fn run_motivic_class(args: ClassArgs) -> Result<RunReport> {
    let (name, inputs, expr) = match args.variety {
        Variety::Pn => {
            let n = args.n.ok_or_else(|| anyhow!("--variety pn needs --n"))?;
            (format!("P^{n}"), json!({"n": n}), class_projective_space(n))
        }
        Variety::Gr => {
            let n = args.n.ok_or_else(|| anyhow!("--variety gr needs --n"))?;
            let k = args.k.ok_or_else(|| anyhow!("--variety gr needs --k"))?;
            if k > n {
                bail!("need k <= n");
            }
            (format!("Gr({k},{n})"), json!({"k": k, "n": n}), class_grassmannian(k, n))
        }
        Variety::Section => {
            let kd = args
                .kernel_dim
                .ok_or_else(|| anyhow!("--variety section needs --kernel-dim 1|3"))?;
            let expr = class_hyperplane_section(kd).map_err(|e| anyhow!(e.to_string()))?;
            (
                format!("section(kernel_dim={kd})"),
                json!({"kernel_dim": kd}),
                expr,
            )
        }
        Variety::Universal => {
            let s_spec = args
                .s
                .as_deref()
                .ok_or_else(|| anyhow!("--variety universal needs --s"))?;
            let dual_spec = args
                .s_dual
                .as_deref()
                .ok_or_else(|| anyhow!("--variety universal needs --s-dual"))?;
            let s = parse_class_spec(s_spec)?;
            let dual = parse_class_spec(dual_spec)?;
            let expr =
                class_universal_hyperplane(&s, &dual).map_err(|e| anyhow!(e.to_string()))?;
            (
                format!("universal(S={s_spec}, dual={dual_spec})"),
                json!({"s": s_spec, "s_dual": dual_spec}),
                expr,
            )
        }
    };
    let mut report = RunReport::new("motivic class", inputs);
    let mut outputs = json!({
        "variety": name,
        "class": expr_to_value(&expr),
        "display": expr.to_string(),
    });
    if let Some(q) = args.eval {
        outputs["eval_at"] = json!(q);
        outputs["eval"] = bigint_value(&expr.scalar_part.eval_u64(q));
    }
    report.outputs = outputs;

    match args.variety {
        Variety::Pn => {
            let n = args.n.unwrap();
            report.check(
                "cell_count_at_l_equals_one",
                bigint_value(&expr.scalar_part.eval_u64(1)),
                json!((n + 1) as u64),
            );
        }
        Variety::Gr => {
            let (k, n) = (args.k.unwrap(), args.n.unwrap());
            report.check(
                "duality_symmetry",
                expr_to_value(&expr),
                expr_to_value(&class_grassmannian(n - k, n)),
            );
            report.check_bool("palindromic", expr.scalar_part.is_palindromic());
        }
        Variety::Section => {
            let smooth = class_hyperplane_section(1).unwrap().scalar_part;
            let singular = class_hyperplane_section(3).unwrap().scalar_part;
            report.check(
                "smooth_plus_l4_is_singular",
                serde_json::to_value(&(&smooth + &LPoly::monomial(4)))?,
                serde_json::to_value(&singular)?,
            );
        }
        Variety::Universal => {
            // independent integer route at L = 2
            let s = parse_class_spec(args.s.as_deref().unwrap())?;
            let dual = parse_class_spec(args.s_dual.as_deref().unwrap())?;
            let lhs = expr.substitute_symbols(&LPoly::one(), &LPoly::one()).eval_u64(2);
            let s2 = s.substitute_symbols(&LPoly::one(), &LPoly::one()).eval_u64(2);
            let d2 = dual.substitute_symbols(&LPoly::one(), &LPoly::one()).eval_u64(2);
            report.check(
                "formula_at_l_equals_two",
                bigint_value(&lhs),
                bigint_value(&(s2 * BigInt::from(75) + BigInt::from(16) * d2)),
            );
        }
    }
    Ok(report)
}

fn run_schubert(cmd: SchubertCmd) -> Result<RunReport> {
    match cmd {
        SchubertCmd::Degree(args) => {
            let lambda = parse_partition(&args.partition)?;
            let (k, n) = (args.k, args.n);
            let deg = degree(&lambda, k, n).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new(
                "schubert degree",
                json!({"partition": lambda.parts(), "k": k, "n": n}),
            );
            report.outputs = json!({"degree": deg});
            let transposed = degree(&lambda.transpose(), n - k, n)
                .map_err(|e| anyhow!(e.to_string()))?;
            report.check("transpose_duality", json!(deg), json!(transposed));
            Ok(report)
        }
        SchubertCmd::Pieri(args) => {
            let lambda = parse_partition(&args.partition)?;
            let cycle = SchubertCycle::single(lambda.clone(), args.k, args.n)
                .map_err(|e| anyhow!(e.to_string()))?;
            let product = cycle.pieri_multiply();
            let mut report = RunReport::new(
                "schubert pieri",
                json!({"partition": lambda.parts(), "k": args.k, "n": args.n}),
            );
            report.outputs = json!({
                "product": serde_json::to_value(&product)?,
                "display": product.to_string(),
            });
            // each μ adds exactly one box
            let weights_ok = product
                .terms()
                .all(|(mu, _)| mu.weight() == lambda.weight() + 1);
            report.check_bool("adds_one_box", weights_ok);
            Ok(report)
        }
    }
}

fn run_lattice(cmd: LatticeCmd) -> Result<RunReport> {
    let gram_of = |t: i64, d: i64| lambda_gram(t, d).map_err(|e| anyhow!(e.to_string()));
    match cmd {
        LatticeCmd::Gram(a) => {
            let g = gram_of(a.t, a.d)?;
            let mut report =
                RunReport::new("lattice gram", json!({"t": a.t, "d": a.d}));
            let (pos, neg) = signature(&g);
            report.outputs = json!({
                "gram": serde_json::to_value(&g)?,
                "det": g.det() as i64,
                "signature": [pos, neg],
            });
            report.check("det_is_minus_t_squared", json!(g.det() as i64), json!(-a.t * a.t));
            Ok(report)
        }
        LatticeCmd::Disc(a) => {
            let g = gram_of(a.t, a.d)?;
            let form = discriminant_form(&g);
            let mut report =
                RunReport::new("lattice disc", json!({"t": a.t, "d": a.d}));
            report.outputs = json!({
                "discriminant_form": serde_json::to_value(&form)?,
                "group_order": form.group_order() as u64,
            });
            report.check(
                "group_order_is_t_squared",
                json!(form.group_order() as u64),
                json!((a.t * a.t) as u64),
            );
            Ok(report)
        }
        LatticeCmd::Isom(a) => {
            let g1 = gram_of(a.t, a.d)?;
            let g2 = gram_of(a.t, a.d2)?;
            let isomorphic =
                lattice::is_isomorphic(&g1, &g2).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new(
                "lattice isom",
                json!({"t": a.t, "d": a.d, "d2": a.d2}),
            );
            let validated = index_is_odd_prime(a.t);
            report.outputs = json!({
                "isomorphic": isomorphic,
                "paper_validated_index": validated,
            });
            report.check(
                "symmetric",
                json!(isomorphic),
                json!(lattice::is_isomorphic(&g2, &g1).map_err(|e| anyhow!(e.to_string()))?),
            );
            if validated {
                let criterion =
                    (a.d - a.d2).rem_euclid(a.t) == 0 || (a.d * a.d2 - 1).rem_euclid(a.t) == 0;
                report.check("congruence_criterion", json!(isomorphic), json!(criterion));
            }
            Ok(report)
        }
        LatticeCmd::Genus(a) => {
            let g1 = gram_of(a.t, a.d)?;
            let g2 = gram_of(a.t, a.d2)?;
            let same = lattice::same_genus(&g1, &g2).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new(
                "lattice genus",
                json!({"t": a.t, "d": a.d, "d2": a.d2}),
            );
            let validated = index_is_odd_prime(a.t);
            report.outputs = json!({
                "same_genus": same,
                "paper_validated_index": validated,
            });
            report.check(
                "symmetric",
                json!(same),
                json!(lattice::same_genus(&g2, &g1).map_err(|e| anyhow!(e.to_string()))?),
            );
            if validated {
                // d2 ≡ k²·d mod t for k coprime to t
                let criterion = (1..a.t)
                    .filter(|k| gcd(*k, a.t) == 1)
                    .any(|k| (a.d2 - k * k * a.d).rem_euclid(a.t) == 0);
                report.check("square_class_criterion", json!(same), json!(criterion));
            }
            Ok(report)
        }
        LatticeCmd::Autgroup(a) => {
            let g = gram_of(a.t, a.d)?;
            let group = isometry_group(&g).map_err(|e| anyhow!(e.to_string()))?;
            let mut report =
                RunReport::new("lattice autgroup", json!({"t": a.t, "d": a.d}));
            report.outputs = json!({
                "order": group.len(),
                "elements": serde_json::to_value(&group)?,
            });
            // closed under composition
            let mut closed = true;
            for x in &group {
                for y in &group {
                    let xy = x.compose(y, &g).map_err(|e| anyhow!(e.to_string()))?;
                    if !group.contains(&xy) {
                        closed = false;
                    }
                }
            }
            report.check_bool("closed_under_composition", closed);
            Ok(report)
        }
        LatticeCmd::Isotropic(a) => {
            let g = gram_of(a.t, a.d)?;
            let lines = isotropic_lines(&g).map_err(|e| anyhow!(e.to_string()))?;
            let mut report =
                RunReport::new("lattice isotropic", json!({"t": a.t, "d": a.d}));
            report.outputs = json!({"lines": lines});
            let all_isotropic = lines.iter().all(|v| g.pair(v, v) == 0);
            report.check_bool("vectors_are_isotropic", all_isotropic);
            report.check("two_classes", json!(lines.len()), json!(2));
            Ok(report)
        }
    }
}

fn run_mukai(cmd: MukaiCmd) -> Result<RunReport> {
    match cmd {
        MukaiCmd::Jac { t, d, k } => {
            let jac = jacobian_ns(t, d, k).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new("mukai jac", json!({"t": t, "d": d, "k": k}));
            let target_d = (d * k * k).rem_euclid(t);
            let target = lambda_gram(t, target_d).map_err(|e| anyhow!(e.to_string()))?;
            let isomorphic =
                lattice::is_isomorphic(&jac, &target).map_err(|e| anyhow!(e.to_string()))?;
            report.outputs = json!({
                "jacobian_gram": serde_json::to_value(&jac)?,
                "expected_class": format!("Lambda_{{{t},{target_d}}}"),
            });
            report.check_bool("isomorphic_to_lambda_t_dk2", isomorphic);
            Ok(report)
        }
        MukaiCmd::Verdict { d } => {
            let r = jac2_isomorphism_verdict(d).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new("mukai verdict", json!({"d": d}));
            report.outputs = serde_json::to_value(&r)?;
            let expected = match r.d {
                2 | 3 => mukai::Jac2Verdict::Isomorphic,
                1 | 4 => mukai::Jac2Verdict::NotIsomorphic,
                _ => mukai::Jac2Verdict::NotIsomorphicIfVeryGeneral,
            };
            report.check(
                "verdict_matches_residue_case",
                serde_json::to_value(r.verdict)?,
                serde_json::to_value(expected)?,
            );
            Ok(report)
        }
    }
}

fn run_count(cmd: CountCmd) -> Result<RunReport> {
    match cmd {
        CountCmd::Grassmannian { q, ext, k, n } => {
            let field = field_for(q, ext)?;
            let count = count_grassmannian(k, n, &field).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new(
                "count grassmannian",
                json!({"q": q, "ext": ext, "k": k, "n": n}),
            );
            report.outputs = json!({"count": count, "field_size": field.size()});
            let class = class_grassmannian(k.min(n), n);
            report.check(
                "matches_motivic_class",
                json!(count),
                bigint_value(&class.scalar_part.eval_u64(field.size())),
            );
            Ok(report)
        }
        CountCmd::Section { q, ext, rank, seed } => {
            let field = field_for(q, ext)?;
            let mut rng = seeded_rng(seed);
            let theta = random_form_of_rank(&field, rank, &mut rng)
                .map_err(|e| anyhow!(e.to_string()))?;
            let count =
                count_hyperplane_section(&theta, &field).map_err(|e| anyhow!(e.to_string()))?;
            let mut report = RunReport::new(
                "count section",
                json!({"q": q, "ext": ext, "rank": rank}),
            );
            report.seed = Some(seed);
            let kernel_dim = theta.kernel(&field).dim();
            report.outputs = json!({
                "count": count,
                "kernel_dim": kernel_dim,
                "form": serde_json::to_value(&theta)?,
            });
            report.check("kernel_dim", json!(kernel_dim), json!(5 - rank));
            let class = class_hyperplane_section(5 - rank as u32 as u32)
                .map_err(|e| anyhow!(e.to_string()))?;
            report.check(
                "matches_motivic_class",
                json!(count),
                bigint_value(&class.scalar_part.eval_u64(field.size())),
            );
            Ok(report)
        }
        CountCmd::Universal { q, fixture, seed } => {
            let field = field_for(q, 1)?;
            let mut report =
                RunReport::new("count universal", json!({"q": q, "restricted": fixture.is_some() || seed.is_some()}));
            if fixture.is_none() && seed.is_none() {
                let r = count_universal_hyperplane(&field).map_err(|e| anyhow!(e.to_string()))?;
                report.outputs = serde_json::to_value(&r)?;
                report.check(
                    "fibrations_agree",
                    json!(r.by_form_fibers),
                    json!(r.by_subspace_fibers),
                );
                let class = class_universal_hyperplane(
                    &class_projective_space(9),
                    &class_grassmannian(2, 5),
                )
                .map_err(|e| anyhow!(e.to_string()))?;
                report.check(
                    "matches_motivic_class",
                    json!(r.by_form_fibers),
                    bigint_value(&class.scalar_part.eval_u64(field.size())),
                );
            } else {
                let (a, used_seed, _) =
                    load_or_generate_space(&field, &fixture, seed.unwrap_or(DEFAULT_SEED))?;
                report.seed = used_seed;
                let r = count_universal_section(&a, &field).map_err(|e| anyhow!(e.to_string()))?;
                report.outputs = json!({
                    "report": serde_json::to_value(&r)?,
                    "fixture": form_space_to_json(&a),
                });
                report.check(
                    "fibrations_agree",
                    json!(r.by_form_fibers),
                    json!(r.by_subspace_fibers),
                );
                // scalar bookkeeping: both fibrations minus the q⁴-weighted
                // section points give the shared double-count polynomial
                let qq = field.size();
                let shared = verify_quintic_duality().lhs.scalar_part.eval_u64(qq);
                let q4 = qq.pow(4);
                report.check(
                    "form_side_scalar_part",
                    bigint_value(&BigInt::from(r.by_form_fibers - q4 * r.count_y)),
                    bigint_value(&shared),
                );
                report.check(
                    "subspace_side_scalar_part",
                    bigint_value(&BigInt::from(r.by_subspace_fibers - q4 * r.count_x)),
                    bigint_value(&shared),
                );
            }
            Ok(report)
        }
        CountCmd::Torsor { q, seed, fixture, ext } => {
            let field = field_for(q, 1)?;
            let mut report = RunReport::new("count torsor", json!({"q": q, "ext": ext}));
            let (a, used_seed, attempts) = load_or_generate_space(&field, &fixture, seed)?;
            report.seed = used_seed;
            let r = torsor_count_test(&a, &field).map_err(|e| anyhow!(e.to_string()))?;
            let mut outputs = serde_json::to_value(&r)?;
            outputs["fixture"] = json!(form_space_to_json(&a));
            if attempts > 0 {
                outputs["note"] = json!(format!(
                    "fixture regenerated {attempts} time(s) before passing the smoothness screen"
                ));
            }
            report.outputs = outputs;
            if r.reliable {
                report.check("counts_equal", json!(r.count_x), json!(r.count_y));
                report.check_bool("pairing_dimension_one", r.pairing_ok);
            }
            // unreliable fixtures report their screen without asserting
            Ok(report)
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
