//! Batch command-line front end: every verifier and builder of the library
//! behind one subcommand each, with JSON input and output.
//!
//! Exit codes: 0 = constructed or verified, 1 = a negative mathematical
//! verdict on well-formed input, 2 = input or usage error, 3 = internal
//! invariant failure (never expected).

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use realcover::abelian::{FinAbGroup, GroupHom, Subgroup};
use realcover::building::{
    abelian_building_data_verify, epsilon, epsilon_identities, lchi_all,
    verify_real_building_data, AbelianBuildingData, CyclicBuildingData, DivisorEntry, PicModel,
    TauAction,
};
use realcover::error::{Error, ErrorKind};
use realcover::extension::{
    build_dihedral_like, build_esoteric, build_standard, build_twisted, check_power_criterion,
    decompose_to_basic, fibre_product, ExtensionData, FactoredRatFunc,
};
use realcover::gauss::GaussRational;
use realcover::involution::{
    analyze_involution, classify_cyclic_involution, enumerate_compatible_involutions,
    enumerate_cyclic_involutions,
};
use realcover::ratfunc::parse_ratfunc;
use realcover::semidirect::basic_case_type;

#[derive(Parser)]
#[command(
    name = "realcover",
    about = "Exact calculators for real cyclic coverings: involution classification, \
             field-extension builders, and building-data verification",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct InputArg {
    /// Path to a JSON file, '-' for stdin, or literal JSON starting with '{'.
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an involution m on Z/n into its CRT parts.
    ClassifyInvolution {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
    },
    /// List every m with m^2 = 1 mod n.
    EnumerateInvolutions {
        #[arg(long)]
        n: i64,
    },
    /// Eigenspace analysis of an involution on a finite abelian group.
    /// Input: {"group":{"invariant_factors":[...]},"M":{"matrix":[[...]]}}.
    AnalyzeAbelian(InputArg),
    /// All involutions with prescribed exact eigenspaces.
    /// Input: {"group":...,"g_plus":[[...]],"g_minus":[[...]]}.
    EnumerateCompatible(InputArg),
    /// Basic-case typing of the pair (n, m), with its factor decomposition.
    CaseType {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
    },
    /// Build one of the four basic extensions and verify its identities.
    BuildExtension {
        #[arg(long)]
        case: CaseArg,
        #[arg(long)]
        n: i64,
        /// Real defining function (standard case).
        #[arg(long)]
        f: Option<String>,
        /// First free real function (dihedral-like and twisted cases).
        #[arg(long)]
        p: Option<String>,
        /// Second free real function (dihedral-like and twisted cases).
        #[arg(long)]
        q: Option<String>,
        /// Non-real parameter (esoteric case).
        #[arg(long)]
        theta: Option<String>,
        /// Factored form like "s1^2*s2^4/t1^2" (standard case).
        #[arg(long)]
        factors: Option<String>,
        /// Constant of the factored form, default 1.
        #[arg(long)]
        constant: Option<String>,
    },
    /// Reducibility of z^n - f for a formally factored f.
    CheckPower {
        #[arg(long)]
        n: i64,
        /// Factored form like "s1^2*s2^4/t1^2".
        #[arg(long)]
        factors: String,
        #[arg(long)]
        constant: Option<String>,
    },
    /// Compositum of two coprime-degree extensions.
    /// Input: {"left":{"case":"standard","n":2,"f":"t"},"right":{...}}.
    FibreProduct(InputArg),
    /// Carry coefficients eps^i_{j,h} for a modulus n, optionally filtered.
    EpsilonTable {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        i: Option<i64>,
        #[arg(long)]
        j: Option<i64>,
        #[arg(long)]
        h: Option<i64>,
    },
    /// Character classes L_0..L_{n-1} of cyclic building data.
    Lchi(InputArg),
    /// Full reality verification of cyclic building data.
    VerifyBuildingData(InputArg),
    /// Relation and reality verification of an abelian datum.
    VerifyAbelianData(InputArg),
    /// Exhaustive equivariance and cocycle scan of the carries.
    EpsilonIdentities {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Standard,
    DihedralLike,
    Twisted,
    Esoteric,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((value, code)) => {
            match cli.output {
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("serializable report")
                ),
                OutputFormat::Text => {
                    let mut out = String::new();
                    render_text(&value, 0, &mut out);
                    print!("{out}");
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Domain => 1u8,
                ErrorKind::Input => 2,
                ErrorKind::Internal => 3,
            })
        }
    }
}

fn run(command: &Command) -> realcover::Result<(Value, u8)> {
    match command {
        Command::ClassifyInvolution { n, m } => {
            let class = classify_cyclic_involution(*n, *m)?;
            Ok((to_value(&class), 0))
        }
        Command::EnumerateInvolutions { n } => {
            let ms = enumerate_cyclic_involutions(*n)?;
            Ok((json!({ "n": n, "involutions": ms }), 0))
        }
        Command::AnalyzeAbelian(input) => {
            let parsed: AnalyzeInput = read_input(&input.input)?;
            let group = FinAbGroup::new(parsed.group.invariant_factors)?;
            let hom = GroupHom::new(group.clone(), group.clone(), parsed.m.matrix)?;
            let analysis = analyze_involution(&group, &hom)?;
            Ok((to_value(&analysis), 0))
        }
        Command::EnumerateCompatible(input) => {
            let parsed: CompatibleInput = read_input(&input.input)?;
            let group = FinAbGroup::new(parsed.group.invariant_factors)?;
            let to_sub = |gens: &[Vec<i64>]| -> realcover::Result<Subgroup> {
                let elems = gens
                    .iter()
                    .map(|c| group.element(c))
                    .collect::<realcover::Result<Vec<_>>>()?;
                Subgroup::from_generators(&group, &elems)
            };
            let g_plus = to_sub(&parsed.g_plus)?;
            let g_minus = to_sub(&parsed.g_minus)?;
            let found = enumerate_compatible_involutions(&group, &g_plus, &g_minus)?;
            Ok((
                json!({
                    "count": found.len(),
                    "involutions": found.iter().map(to_value).collect::<Vec<_>>(),
                }),
                0,
            ))
        }
        Command::CaseType { n, m } => {
            let case = basic_case_type(*n, *m)?;
            let factors = decompose_to_basic(*n, *m)?;
            Ok((
                json!({
                    "n": n,
                    "m": m.rem_euclid(*n),
                    "type": to_value(&case),
                    "basic_factors": to_value(&factors),
                }),
                0,
            ))
        }
        Command::BuildExtension {
            case,
            n,
            f,
            p,
            q,
            theta,
            factors,
            constant,
        } => {
            let data = match case {
                CaseArg::Standard => {
                    let f = parse_ratfunc(required(f, "--f")?)?;
                    let fac = factors
                        .as_deref()
                        .map(|s| parse_factored(s, constant.as_deref()))
                        .transpose()?;
                    ExtensionData::Standard(build_standard(*n, f, fac.as_ref())?)
                }
                CaseArg::DihedralLike => ExtensionData::DihedralLike(build_dihedral_like(
                    *n,
                    parse_ratfunc(required(p, "--p")?)?,
                    parse_ratfunc(required(q, "--q")?)?,
                )?),
                CaseArg::Twisted => ExtensionData::Twisted(build_twisted(
                    *n,
                    parse_ratfunc(required(p, "--p")?)?,
                    parse_ratfunc(required(q, "--q")?)?,
                )?),
                CaseArg::Esoteric => ExtensionData::Esoteric(build_esoteric(
                    *n,
                    parse_ratfunc(required(theta, "--theta")?)?,
                )?),
            };
            Ok((to_value(&data), 0))
        }
        Command::CheckPower {
            n,
            factors,
            constant,
        } => {
            let fac = parse_factored(factors, constant.as_deref())?;
            let verdict = check_power_criterion(&fac, *n)?;
            Ok((json!({ "n": n, "result": to_value(&verdict) }), 0))
        }
        Command::FibreProduct(input) => {
            let parsed: FibreInput = read_input(&input.input)?;
            let left = build_from_spec(&parsed.left)?;
            let right = build_from_spec(&parsed.right)?;
            let product = fibre_product(&left, &right)?;
            Ok((to_value(&product), 0))
        }
        Command::EpsilonTable { n, i, j, h } => {
            if *n < 2 {
                return Err(Error::Input(format!("modulus must be >= 2, got {n}")));
            }
            if *n > 128 && (i.is_none() || j.is_none() || h.is_none()) {
                return Err(Error::SizeLimit(
                    "full tables are limited to n <= 128; filter with --i/--j/--h".into(),
                ));
            }
            let range = |v: &Option<i64>| -> Vec<i64> {
                match v {
                    Some(x) => vec![x.rem_euclid(*n)],
                    None => (0..*n).collect(),
                }
            };
            let mut entries = Vec::new();
            for i in range(i) {
                for j in range(j) {
                    for h in range(h) {
                        entries.push(json!({
                            "i": i, "j": j, "h": h,
                            "eps": epsilon(*n, i, j, h),
                        }));
                    }
                }
            }
            Ok((json!({ "n": n, "entries": entries }), 0))
        }
        Command::Lchi(input) => {
            let bd = parse_building_data(&read_input::<BuildingInput>(&input.input)?)?;
            let classes = lchi_all(&bd)?;
            Ok((
                json!({
                    "n": bd.n,
                    "classes": classes.iter().map(to_value).collect::<Vec<_>>(),
                }),
                0,
            ))
        }
        Command::VerifyBuildingData(input) => {
            let bd = parse_building_data(&read_input::<BuildingInput>(&input.input)?)?;
            let report = verify_real_building_data(&bd)?;
            let code = u8::from(!report.verdict);
            Ok((to_value(&report), code))
        }
        Command::VerifyAbelianData(input) => {
            let data = parse_abelian_data(&read_input::<AbelianInput>(&input.input)?)?;
            let report = abelian_building_data_verify(&data)?;
            let code = u8::from(!report.verdict);
            Ok((to_value(&report), code))
        }
        Command::EpsilonIdentities { n, m } => {
            let report = epsilon_identities(*n, *m)?;
            Ok((to_value(&report), 0))
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn required<'a>(opt: &'a Option<String>, flag: &str) -> realcover::Result<&'a str> {
    opt.as_deref()
        .ok_or_else(|| Error::Input(format!("this case needs {flag}")))
}

fn read_input<T: for<'de> Deserialize<'de>>(spec: &str) -> realcover::Result<T> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else if spec == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Input(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| Error::Input(format!("reading {spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON input: {e}")))
}

// ---------------------------------------------------------------------------
// input schemas

#[derive(Deserialize)]
struct GroupInput {
    invariant_factors: Vec<i64>,
}

#[derive(Deserialize)]
struct MatrixInput {
    matrix: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct AnalyzeInput {
    group: GroupInput,
    #[serde(rename = "M")]
    m: MatrixInput,
}

#[derive(Deserialize)]
struct CompatibleInput {
    group: GroupInput,
    g_plus: Vec<Vec<i64>>,
    g_minus: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct PicInput {
    #[serde(default)]
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<i64>,
}

#[derive(Deserialize)]
struct DivisorInput {
    present: bool,
    #[serde(default)]
    class: Option<Vec<i64>>,
}

#[derive(Deserialize)]
struct BuildingInput {
    n: i64,
    m: i64,
    pic: PicInput,
    #[serde(rename = "L")]
    l: Vec<i64>,
    #[serde(rename = "D", default)]
    d: BTreeMap<String, DivisorInput>,
    tau: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct BuilderSpec {
    case: String,
    n: i64,
    f: Option<String>,
    p: Option<String>,
    q: Option<String>,
    theta: Option<String>,
}

#[derive(Deserialize)]
struct FibreInput {
    left: BuilderSpec,
    right: BuilderSpec,
}

#[derive(Deserialize)]
struct AbelianInput {
    group: GroupInput,
    #[serde(rename = "M")]
    m: MatrixInput,
    pic: PicInput,
    #[serde(rename = "D", default)]
    d: BTreeMap<String, DivisorInput>,
    #[serde(rename = "L")]
    l: BTreeMap<String, Vec<i64>>,
    tau: Vec<Vec<i64>>,
}

fn parse_building_data(input: &BuildingInput) -> realcover::Result<CyclicBuildingData> {
    let pic = PicModel::new(input.pic.free_rank, input.pic.torsion.clone())?;
    let l = pic.element(&input.l)?;
    if input.n < 2 {
        return Err(Error::Input(format!(
            "cover degree must be >= 2, got {}",
            input.n
        )));
    }
    let mut divisors = vec![
        DivisorEntry {
            present: false,
            class: pic.zero(),
        };
        (input.n - 1) as usize
    ];
    for (key, entry) in &input.d {
        let idx: i64 = key
            .parse()
            .map_err(|_| Error::Input(format!("divisor key {key:?} is not an index")))?;
        if !(1..input.n).contains(&idx) {
            return Err(Error::Input(format!(
                "divisor index {idx} outside 1..{}",
                input.n - 1
            )));
        }
        let class = match &entry.class {
            Some(coords) => pic.element(coords)?,
            None => pic.zero(),
        };
        divisors[(idx - 1) as usize] = DivisorEntry {
            present: entry.present,
            class,
        };
    }
    CyclicBuildingData::new(
        input.n,
        input.m,
        pic,
        l,
        divisors,
        TauAction {
            matrix: input.tau.clone(),
        },
    )
}

fn parse_element_key(group: &FinAbGroup, key: &str) -> realcover::Result<realcover::GroupElement> {
    let coords = key
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::Input(format!("bad element key {key:?}")))
        })
        .collect::<realcover::Result<Vec<i64>>>()?;
    group.element(&coords)
}

fn parse_abelian_data(input: &AbelianInput) -> realcover::Result<AbelianBuildingData> {
    let group = FinAbGroup::new(input.group.invariant_factors.clone())?;
    let involution = GroupHom::new(group.clone(), group.clone(), input.m.matrix.clone())?;
    let pic = PicModel::new(input.pic.free_rank, input.pic.torsion.clone())?;
    let mut divisors = BTreeMap::new();
    for (key, entry) in &input.d {
        let g = parse_element_key(&group, key)?;
        let class = match &entry.class {
            Some(coords) => pic.element(coords)?,
            None => pic.zero(),
        };
        divisors.insert(
            g,
            DivisorEntry {
                present: entry.present,
                class,
            },
        );
    }
    let mut l_family = BTreeMap::new();
    for (key, coords) in &input.l {
        l_family.insert(parse_element_key(&group, key)?, pic.element(coords)?);
    }
    Ok(AbelianBuildingData {
        group,
        involution,
        pic,
        divisors,
        l_family,
        tau: TauAction {
            matrix: input.tau.clone(),
        },
    })
}

fn build_from_spec(spec: &BuilderSpec) -> realcover::Result<ExtensionData> {
    let need = |o: &Option<String>, what: &str| -> realcover::Result<String> {
        o.clone()
            .ok_or_else(|| Error::Input(format!("case {} needs {what}", spec.case)))
    };
    match spec.case.as_str() {
        "standard" => Ok(ExtensionData::Standard(build_standard(
            spec.n,
            parse_ratfunc(&need(&spec.f, "f")?)?,
            None,
        )?)),
        "dihedral-like" => Ok(ExtensionData::DihedralLike(build_dihedral_like(
            spec.n,
            parse_ratfunc(&need(&spec.p, "p")?)?,
            parse_ratfunc(&need(&spec.q, "q")?)?,
        )?)),
        "twisted" => Ok(ExtensionData::Twisted(build_twisted(
            spec.n,
            parse_ratfunc(&need(&spec.p, "p")?)?,
            parse_ratfunc(&need(&spec.q, "q")?)?,
        )?)),
        "esoteric" => Ok(ExtensionData::Esoteric(build_esoteric(
            spec.n,
            parse_ratfunc(&need(&spec.theta, "theta")?)?,
        )?)),
        other => Err(Error::Input(format!("unknown case {other:?}"))),
    }
}

/// Parses a factored form "s1^2*s2^4/t1^2" into labels and exponents.
fn parse_factored(spec: &str, constant: Option<&str>) -> realcover::Result<FactoredRatFunc> {
    let constant = match constant {
        Some(c) => realcover::ratfunc::parse_constant(c)?,
        None => GaussRational::one(),
    };
    let mut factors: Vec<(String, i64)> = Vec::new();
    let mut sides = spec.splitn(2, '/');
    let numerator = sides.next().unwrap_or("");
    let denominator = sides.next();
    for (side, sign) in [(Some(numerator), 1i64), (denominator, -1)] {
        let Some(side) = side else { continue };
        for piece in side.split('*') {
            let piece = piece.trim();
            if piece.is_empty() || piece == "1" {
                continue;
            }
            let (label, exp) = match piece.split_once('^') {
                Some((l, e)) => (
                    l.trim().to_string(),
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {piece:?}")))?,
                ),
                None => (piece.to_string(), 1),
            };
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("bad prime label {label:?}")));
            }
            factors.push((label, sign * exp));
        }
    }
    FactoredRatFunc::new(constant, factors)
}

/// Minimal indented text rendering of a JSON value.
fn render_text(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {v}\n")),
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {v}\n")),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{value}\n")),
    }
}
