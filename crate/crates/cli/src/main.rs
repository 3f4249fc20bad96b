//! Batch reports over the exact engine: normal-monomial bases, Hilbert
//! coefficients, Betti tables, verification of the closed-form complexes,
//! Koszul certificates, and the iterated-Ore structure check.
//!
//! Every subcommand reads one input (a JSON document or the built-in family
//! with a parameter), writes one report to stdout, and is deterministic:
//! identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 invalid input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dorex::presentation::{X1, X2, Y1, Y2};
use dorex::{
    build_double_extension, cyclic_module_resolution_x, cyclic_module_resolution_y,
    degreewise_exactness, family_k, golden_resolution_k, iterated_ore_check, koszulness_check,
    make_rewrite_system, minimal_resolution, parse_presentation, poincare_series, quadratic_data,
    sigma_matrix, verify_complex, Complex, DEData, Field, ModuleMap, NcPolynomial, OreVerdict,
    RewriteSystem, Scalar, Word,
};

const SCHEMA_VERSION: u64 = 1;
const MAX_HOMOLOGICAL: usize = 6;

#[derive(Parser)]
#[command(name = "dorex", version, about = "Exact reports for a trimmed graded double Ore extension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normal-monomial basis per degree
    Basis(BasisArgs),
    /// Hilbert coefficients of the algebra
    Hilbert(HilbertArgs),
    /// Betti table and Poincare series of a cyclic quotient module
    Betti(BettiArgs),
    /// Verify the closed-form complexes (complex, minimal, exact)
    Verify(VerifyArgs),
    /// Koszul space dimensions and both Koszulness certificates
    Koszul(KoszulArgs),
    /// Iterated-Ore eligibility of both adjunction orders
    Orecheck(OrecheckArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// JSON input document describing the extension
    #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "alpha", "field"])]
    input: Option<PathBuf>,
    /// Built-in family (only K)
    #[arg(long, value_name = "NAME")]
    family: Option<String>,
    /// Parameter for --family, e.g. 2 or 3/5
    #[arg(long, value_name = "RAT", requires = "family")]
    alpha: Option<String>,
    /// Scalar field for --family: rational or p<PRIME>
    #[arg(long, value_name = "FIELD", default_value = "rational")]
    field: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct BasisArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    /// Also list the monomials of each degree
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModuleChoice {
    /// B modulo all four generators
    Trivial,
    /// B modulo the right ideal on x1, x2
    XCyclic,
    /// B modulo the right ideal on y1, y2
    YCyclic,
}

impl ModuleChoice {
    fn label(self) -> &'static str {
        match self {
            ModuleChoice::Trivial => "trivial",
            ModuleChoice::XCyclic => "x-cyclic",
            ModuleChoice::YCyclic => "y-cyclic",
        }
    }
}

#[derive(Args)]
struct BettiArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value_t = ModuleChoice::Trivial, conflicts_with = "ideal")]
    module: ModuleChoice,
    /// Degree-1 ideal generators, comma separated, e.g. "x1, x2-2*y1"
    #[arg(long, value_name = "EXPRS")]
    ideal: Option<String>,
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    /// Test fixture: flip one sign in the length-4 complex before checking
    #[arg(long, hide = true)]
    inject_sign_error: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct KoszulArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct OrecheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

/// Input problems exit 2, failed mathematical checks exit 1. A math failure
/// still prints its report first; the message goes to stderr.
enum Failure {
    Input(String),
    Math(String),
}

type CliResult<T> = Result<T, Failure>;

fn input_err(e: dorex::Error) -> Failure {
    match e {
        dorex::Error::Uncertified { .. } => Failure::Math(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Basis(args) => cmd_basis(args),
        Command::Hilbert(args) => cmd_hilbert(args),
        Command::Betti(args) => cmd_betti(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Koszul(args) => cmd_koszul(args),
        Command::Orecheck(args) => cmd_orecheck(args),
    };
    match outcome {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure::Math(message)) => {
            eprintln!("check failed: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("invalid input: {message}");
            ExitCode::from(2)
        }
    }
}

struct Resolved {
    data: DEData,
    /// Known only in --family mode; the closed-form complexes need it.
    alpha: Option<Scalar>,
}

fn resolve(source: &SourceArgs) -> CliResult<Resolved> {
    match (&source.input, &source.family) {
        (Some(path), None) => {
            let doc = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            let data = parse_presentation(&doc).map_err(input_err)?;
            Ok(Resolved { data, alpha: None })
        }
        (None, Some(name)) => {
            if name != "K" {
                return Err(Failure::Input(format!(
                    "unknown family '{name}'; only K is built in"
                )));
            }
            let field = parse_field(&source.field)?;
            let text = source
                .alpha
                .as_deref()
                .ok_or_else(|| Failure::Input("--family K needs --alpha".into()))?;
            let alpha = field.parse(text).map_err(input_err)?;
            let data = family_k(&alpha).map_err(input_err)?;
            Ok(Resolved {
                data,
                alpha: Some(alpha),
            })
        }
        _ => Err(Failure::Input(
            "provide exactly one of --input FILE or --family K".into(),
        )),
    }
}

fn parse_field(text: &str) -> CliResult<Field> {
    if text == "rational" {
        return Ok(Field::Rational);
    }
    if let Some(digits) = text.strip_prefix('p') {
        let p: u64 = digits
            .parse()
            .map_err(|_| Failure::Input(format!("bad field '{text}'")))?;
        return Field::prime(p).map_err(input_err);
    }
    Err(Failure::Input(format!(
        "bad field '{text}': expected rational or p<PRIME>"
    )))
}

fn certified(data: &DEData) -> CliResult<RewriteSystem> {
    let rs = make_rewrite_system(&build_double_extension(data)).map_err(input_err)?;
    rs.require_certified().map_err(input_err)?;
    Ok(rs)
}

fn cmd_basis(args: BasisArgs) -> CliResult<String> {
    let resolved = resolve(&args.source)?;
    let rs = certified(&resolved.data)?;
    let names = rs.names();
    let mut out = String::new();
    match args.format {
        Format::Tsv => {
            if args.list {
                writeln!(out, "degree\tcount\tmonomials").unwrap();
            } else {
                writeln!(out, "degree\tcount").unwrap();
            }
            for d in 0..=args.max_degree {
                let words = rs.normal_monomials(d);
                if args.list {
                    let listing: Vec<String> = words.iter().map(|w| w.render(names)).collect();
                    writeln!(out, "{d}\t{}\t{}", words.len(), listing.join(" ")).unwrap();
                } else {
                    writeln!(out, "{d}\t{}", words.len()).unwrap();
                }
            }
        }
        Format::Json => {
            let degrees: Vec<Value> = (0..=args.max_degree)
                .map(|d| {
                    let words = rs.normal_monomials(d);
                    if args.list {
                        let listing: Vec<String> =
                            words.iter().map(|w| w.render(names)).collect();
                        json!({"degree": d, "count": words.len(), "monomials": listing})
                    } else {
                        json!({"degree": d, "count": words.len()})
                    }
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "basis",
                "order": rs.order_description(),
                "degrees": degrees,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(out)
}

fn cmd_hilbert(args: HilbertArgs) -> CliResult<String> {
    let resolved = resolve(&args.source)?;
    let rs = certified(&resolved.data)?;
    let coefficients = rs.hilbert_coefficients(args.max_degree);
    let mut out = String::new();
    match args.format {
        Format::Tsv => {
            writeln!(out, "degree\tdim").unwrap();
            for (d, c) in coefficients.iter().enumerate() {
                writeln!(out, "{d}\t{c}").unwrap();
            }
        }
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "hilbert",
                "coefficients": coefficients,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(out)
}

fn generator_poly(g: u8, field: Field) -> NcPolynomial {
    NcPolynomial::generator(g, field)
}

/// Degree-1 generators: comma-separated sums of `[coef*]gen` terms.
fn parse_ideal(text: &str, field: Field) -> CliResult<Vec<NcPolynomial>> {
    text.split(',')
        .map(|expr| parse_linear(expr, field))
        .collect()
}

fn parse_linear(expr: &str, field: Field) -> CliResult<NcPolynomial> {
    let cleaned: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Failure::Input("empty ideal generator".into()));
    }
    let mut p = NcPolynomial::zero();
    for chunk in cleaned.replace('-', "+-").split('+') {
        if chunk.is_empty() {
            continue;
        }
        let (coef_text, gen_text) = match chunk.rsplit_once('*') {
            Some(split) => split,
            None => match chunk.strip_prefix('-') {
                Some(gen) => ("-1", gen),
                None => ("1", chunk),
            },
        };
        let gen = match gen_text {
            "x1" => X1,
            "x2" => X2,
            "y1" => Y1,
            "y2" => Y2,
            other => {
                return Err(Failure::Input(format!(
                    "unknown generator '{other}' in ideal expression '{expr}'"
                )))
            }
        };
        let coef = field.parse(coef_text).map_err(input_err)?;
        p.add_assign_term(Word::single(gen), coef);
    }
    if p.is_zero() {
        return Err(Failure::Input(format!("ideal generator '{expr}' is zero")));
    }
    Ok(p)
}

fn cmd_betti(args: BettiArgs) -> CliResult<String> {
    let resolved = resolve(&args.source)?;
    let rs = certified(&resolved.data)?;
    let field = rs.field();
    let (label, generators) = match &args.ideal {
        Some(text) => ("ideal".to_string(), parse_ideal(text, field)?),
        None => {
            let gens: Vec<NcPolynomial> = match args.module {
                ModuleChoice::Trivial => [X1, X2, Y1, Y2]
                    .iter()
                    .map(|&g| generator_poly(g, field))
                    .collect(),
                ModuleChoice::XCyclic => {
                    vec![generator_poly(X1, field), generator_poly(X2, field)]
                }
                ModuleChoice::YCyclic => {
                    vec![generator_poly(Y1, field), generator_poly(Y2, field)]
                }
            };
            (args.module.label().to_string(), gens)
        }
    };
    let (_, betti) = minimal_resolution(&rs, &generators, MAX_HOMOLOGICAL, args.max_degree)
        .map_err(input_err)?;
    let series = poincare_series(&betti);
    let mut out = String::new();
    match args.format {
        Format::Tsv => {
            writeln!(out, "i\tj\tbeta").unwrap();
            for (&(i, j), &beta) in betti.iter() {
                writeln!(out, "{i}\t{j}\t{beta}").unwrap();
            }
            writeln!(out, "# module\t{label}").unwrap();
            writeln!(out, "# poincare\t{}", series.bivariate_string()).unwrap();
            writeln!(out, "# poincare_z\t{}", series.single_variable_string()).unwrap();
        }
        Format::Json => {
            let entries: Vec<Value> = betti
                .iter()
                .map(|(&(i, j), &beta)| json!({"i": i, "j": j, "beta": beta}))
                .collect();
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "betti",
                "module": label,
                "betti": entries,
                "poincare": {
                    "bivariate": series.bivariate_string(),
                    "single": series.single_variable_string(),
                },
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(out)
}

/// Flip the sign of one d2 entry; the perturbation fixture for verify.
fn flip_one_sign(complex: &Complex) -> Complex {
    let d2 = &complex.maps()[1];
    let mut entries: Vec<Vec<NcPolynomial>> = (0..d2.target().rank())
        .map(|i| {
            (0..d2.source().rank())
                .map(|k| d2.entry(i, k).clone())
                .collect()
        })
        .collect();
    entries[0][2] = -&entries[0][2];
    let bad = ModuleMap::new(
        d2.source().clone(),
        d2.target().clone(),
        entries,
        complex.field(),
    )
    .expect("flipped entry stays homogeneous");
    let maps: Vec<ModuleMap> = complex
        .maps()
        .iter()
        .enumerate()
        .map(|(p, m)| if p == 1 { bad.clone() } else { m.clone() })
        .collect();
    Complex::new(complex.modules()[0].clone(), maps, complex.field())
        .expect("same shapes as the source complex")
}

fn render_complex(complex: &Complex, names: &[String]) -> Value {
    let shifts: Vec<Vec<i64>> = complex
        .modules()
        .iter()
        .map(|m| m.shifts().to_vec())
        .collect();
    let maps: Vec<Value> = complex
        .maps()
        .iter()
        .map(|m| {
            let rows: Vec<Vec<String>> = (0..m.target().rank())
                .map(|i| {
                    (0..m.source().rank())
                        .map(|k| m.entry(i, k).render(names))
                        .collect()
                })
                .collect();
            json!(rows)
        })
        .collect();
    json!({"shifts": shifts, "maps": maps})
}

fn cmd_verify(args: VerifyArgs) -> CliResult<String> {
    let resolved = resolve(&args.source)?;
    let alpha = resolved.alpha.clone().ok_or_else(|| {
        Failure::Input("verify checks the built-in family complexes; use --family K --alpha".into())
    })?;
    let rs = certified(&resolved.data)?;
    let field = rs.field();
    let names: Vec<String> = rs.names().to_vec();

    let mut trivial = golden_resolution_k(&alpha).map_err(input_err)?;
    if args.inject_sign_error {
        trivial = flip_one_sign(&trivial);
    }
    let mut trivial_coker = vec![0usize; args.max_degree + 1];
    trivial_coker[0] = 1;
    let cyclic_coker: Vec<usize> = (0..=args.max_degree).map(|d| d + 1).collect();
    let cases = [
        ("trivial", trivial, trivial_coker),
        (
            "x-cyclic",
            cyclic_module_resolution_x(field).map_err(input_err)?,
            cyclic_coker.clone(),
        ),
        (
            "y-cyclic",
            cyclic_module_resolution_y(field).map_err(input_err)?,
            cyclic_coker,
        ),
    ];

    let mut out = String::new();
    let mut all_pass = true;
    let mut json_cases: Vec<Value> = Vec::new();
    if args.format == Format::Tsv {
        writeln!(out, "complex\tcheck\tverdict\tdetail").unwrap();
    }
    for (label, complex, expected_coker) in &cases {
        let report = verify_complex(&rs, complex).map_err(input_err)?;
        let exact = degreewise_exactness(&rs, complex, args.max_degree).map_err(input_err)?;
        let resolves = exact.is_resolution_of(expected_coker);
        all_pass &= report.is_complex() && report.is_minimal() && resolves;
        match args.format {
            Format::Tsv => {
                let verdict = |ok: bool| if ok { "pass" } else { "fail" };
                writeln!(
                    out,
                    "{label}\tis_complex\t{}\t{}",
                    verdict(report.is_complex()),
                    if report.is_complex() {
                        "-".to_string()
                    } else {
                        let f = &report.composite_failures[0];
                        format!(
                            "d{}*d{} entry ({},{}) -> {}",
                            f.after_map,
                            f.after_map + 1,
                            f.row,
                            f.col,
                            f.residue.render(&names)
                        )
                    }
                )
                .unwrap();
                writeln!(
                    out,
                    "{label}\tis_minimal\t{}\t-",
                    verdict(report.is_minimal())
                )
                .unwrap();
                writeln!(
                    out,
                    "{label}\texact\t{}\tdegrees 0..{}",
                    verdict(resolves),
                    args.max_degree
                )
                .unwrap();
            }
            Format::Json => {
                let failures: Vec<Value> = report
                    .composite_failures
                    .iter()
                    .map(|f| {
                        json!({
                            "after_map": f.after_map,
                            "row": f.row,
                            "col": f.col,
                            "residue": f.residue.render(&names),
                        })
                    })
                    .collect();
                json_cases.push(json!({
                    "name": label,
                    "complex": render_complex(complex, &names),
                    "is_complex": report.is_complex(),
                    "is_minimal": report.is_minimal(),
                    "exact": resolves,
                    "coker": exact.coker_dims(),
                    "composite_failures": failures,
                }));
            }
        }
    }
    match args.format {
        Format::Tsv => {
            writeln!(out, "# overall\t{}", if all_pass { "pass" } else { "fail" }).unwrap();
        }
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "verify",
                "max_degree": args.max_degree,
                "complexes": json_cases,
                "pass": all_pass,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    if all_pass {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Math("a complex failed verification".into()))
    }
}

fn cmd_koszul(args: KoszulArgs) -> CliResult<String> {
    let resolved = resolve(&args.source)?;
    let rs = certified(&resolved.data)?;
    let qd = quadratic_data(&build_double_extension(&resolved.data)).map_err(input_err)?;
    let report = koszulness_check(&qd, &rs, args.max_n).map_err(input_err)?;
    let mut out = String::new();
    match args.format {
        Format::Tsv => {
            writeln!(out, "n\tdim").unwrap();
            for (n, dim) in report.w_dims.iter().enumerate() {
                writeln!(out, "{n}\t{dim}").unwrap();
            }
            writeln!(
                out,
                "# euler\t{}",
                if report.euler_ok() { "pass" } else { "fail" }
            )
            .unwrap();
            writeln!(
                out,
                "# exactness\t{}",
                if report.exact_ok() { "pass" } else { "fail" }
            )
            .unwrap();
        }
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "koszul",
                "dims": report.w_dims,
                "euler_ok": report.euler_ok(),
                "exact_ok": report.exact_ok(),
                "koszul_certified": report.koszul_certified(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    if report.koszul_certified() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Math("a Koszulness certificate failed".into()))
    }
}

fn cmd_orecheck(args: OrecheckArgs) -> CliResult<String> {
    let resolved = resolve(&args.source)?;
    let report = iterated_ore_check(&resolved.data);
    let sigma = sigma_matrix(&resolved.data);
    let describe = |verdict: &OreVerdict| match verdict {
        OreVerdict::Eligible => ("eligible", "-".to_string(), "-".to_string()),
        OreVerdict::Blocked { witness, value } => {
            ("blocked", witness.clone(), value.to_string())
        }
    };
    let mut out = String::new();
    match args.format {
        Format::Tsv => {
            writeln!(out, "order\tverdict\twitness\tvalue").unwrap();
            let (v, w, c) = describe(&report.order_y1_then_y2);
            writeln!(out, "y1-then-y2\t{v}\t{w}\t{c}").unwrap();
            let (v, w, c) = describe(&report.order_y2_then_y1);
            writeln!(out, "y2-then-y1\t{v}\t{w}\t{c}").unwrap();
            writeln!(out, "# sigma11_invertible\t{}", report.sigma11_invertible).unwrap();
            writeln!(out, "# sigma22_invertible\t{}", report.sigma22_invertible).unwrap();
            writeln!(out, "# det_sigma\t{}", sigma.det).unwrap();
        }
        Format::Json => {
            let order = |verdict: &OreVerdict| {
                let (v, w, c) = describe(verdict);
                match verdict {
                    OreVerdict::Eligible => json!({"verdict": v}),
                    OreVerdict::Blocked { .. } => {
                        json!({"verdict": v, "witness": w, "value": c})
                    }
                }
            };
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "orecheck",
                "y1_then_y2": order(&report.order_y1_then_y2),
                "y2_then_y1": order(&report.order_y2_then_y1),
                "sigma11_invertible": report.sigma11_invertible,
                "sigma22_invertible": report.sigma22_invertible,
                "det_sigma": sigma.det.to_string(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(out)
}
