//! Command-line front end: variety expressions in, JSON documents out.

pub mod dsl;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::Zero;
use serde::Serialize;

use toddkit::bordism::{
    birational_ideal_span, decompose_functional, is_invariant, partitions, todd_functional,
    todd_of_partition, GeneratorBasis, GenusFunctional, PiModel,
};
use toddkit::genera::{char_number, chern_to_pontrjagin, genus_class, higher_genus_of};
use toddkit::varieties::{verify_blowup_invariance, VarietyModel, Verdict};
use toddkit::{AlgebraElement, GenusSpec, Rational};

use dsl::{ParseError, ParseErrorKind, VarietyExpr};
use output::{q, ClassEntry, Document, ErrorBody, ErrorDocument, Inputs, NumberEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "toddkit",
    version,
    about = "Exact characteristic numbers and higher Todd genera"
)]
pub struct Cli {
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Series order for genus computations, instead of the dimension.
    #[arg(long, global = true, value_name = "N")]
    trunc: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpecName {
    Todd,
    L,
    Ahat,
}

impl SpecName {
    fn genus(self) -> GenusSpec {
        match self {
            SpecName::Todd => GenusSpec::todd(),
            SpecName::L => GenusSpec::l_genus(),
            SpecName::Ahat => GenusSpec::ahat(),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoryName {
    Unitary,
    Oriented,
}

#[derive(Args, Debug)]
struct VarietyArg {
    /// Variety expression, e.g. "blowup(E x P(1))".
    variety: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Todd genus and Todd class.
    Todd(VarietyArg),
    /// Genus and characteristic class of a named genus.
    Genus {
        #[arg(long, value_enum)]
        spec: SpecName,
        #[command(flatten)]
        v: VarietyArg,
    },
    /// Chern classes and Chern numbers.
    Chern(VarietyArg),
    /// Pontrjagin classes and Pontrjagin numbers.
    Pontrjagin(VarietyArg),
    /// Euler characteristic, Betti numbers and top Chern number.
    Euler(VarietyArg),
    /// Signature, as the L-genus.
    Signature(VarietyArg),
    /// Higher Todd genus of a pi-class.
    HigherTodd {
        /// Pi-class label, e.g. "x1*x2".
        #[arg(long = "x", value_name = "LABEL")]
        x: String,
        #[command(flatten)]
        v: VarietyArg,
    },
    /// Characteristic number of a polynomial in c_i, p_i and pi-classes.
    CharNumber {
        #[arg(long, value_name = "POLY")]
        expr: String,
        #[command(flatten)]
        v: VarietyArg,
    },
    /// Compares every higher genus of a blow-up with its base.
    VerifyInvariance {
        #[arg(long, value_enum, default_value = "todd")]
        spec: SpecName,
        #[command(flatten)]
        v: VarietyArg,
    },
    /// Partition basis of complex bordism in complex dimension k.
    BordismBasis {
        #[arg(long)]
        k: u32,
    },
    /// Birational ideal and the quotient it leaves in complex dimension k.
    BordismQuotient {
        #[arg(long)]
        k: u32,
    },
    /// Writes a fiber-invariant functional on bordism of the torus as a
    /// higher genus.
    Decompose {
        /// Group, as Z^<2g>.
        #[arg(long)]
        pi: String,
        #[arg(long)]
        k: u32,
        /// JSON file of functional values.
        #[arg(long)]
        values: PathBuf,
        #[arg(long, value_enum, default_value = "unitary")]
        theory: TheoryName,
    },
}

/// A failure with its exit code and machine-readable kind.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
    pub position: Option<(usize, usize)>,
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: kind.into(),
            message: message.into(),
            position: None,
        }
    }
}

impl From<toddkit::Error> for Failure {
    fn from(e: toddkit::Error) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            kind: e.kind().into(),
            message: e.to_string(),
            position: None,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: match e.kind {
                ParseErrorKind::Syntax => "SyntaxError",
                ParseErrorKind::IntegerOverflow => "IntegerOverflow",
            }
            .into(),
            message: e.to_string(),
            position: Some((e.line, e.column)),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses and runs a command line (program name first).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => failure_outcome(Failure::usage("UsageError", text.trim_end()), false),
            };
        }
    };
    let pretty = cli.pretty;
    match execute(&cli) {
        Ok((code, doc)) => Outcome {
            code,
            stdout: output::render(&doc, pretty),
            stderr: String::new(),
        },
        Err(f) => failure_outcome(f, pretty),
    }
}

fn failure_outcome(f: Failure, pretty: bool) -> Outcome {
    let doc = ErrorDocument {
        error: ErrorBody {
            kind: f.kind,
            message: f.message,
            exit_code: f.code,
            line: f.position.map(|p| p.0),
            column: f.position.map(|p| p.1),
        },
    };
    Outcome {
        code: f.code,
        stdout: String::new(),
        stderr: output::render(&doc, pretty),
    }
}

fn variety(text: &str) -> Result<(VarietyExpr, VarietyModel), Failure> {
    let e = dsl::parse(text)?;
    let m = dsl::elaborate(&e)?;
    Ok((e, m))
}

fn inputs_for(e: &VarietyExpr) -> Inputs {
    Inputs {
        variety: Some(e.to_string()),
        ..Inputs::default()
    }
}

fn classes(
    prefix: &str,
    items: impl IntoIterator<Item = (u32, AlgebraElement)>,
) -> Vec<ClassEntry> {
    items
        .into_iter()
        .map(|(i, c)| ClassEntry {
            name: format!("{prefix}{i}"),
            class: c.to_string(),
        })
        .collect()
}

/// Monomials in `prefix1, prefix2, ...` of total weight `weight`.
fn weighted_monomials(prefix: &str, weight: u32) -> Vec<String> {
    partitions(weight)
        .into_iter()
        .map(|p| {
            let mut parts: Vec<String> = Vec::new();
            let mut rest = p.parts();
            while let Some(&first) = rest.first() {
                let run = rest.iter().take_while(|&&x| x == first).count();
                parts.push(if run == 1 {
                    format!("{prefix}{first}")
                } else {
                    format!("{prefix}{first}^{run}")
                });
                rest = &rest[run..];
            }
            parts.join("*")
        })
        .collect()
}

fn genus_with(spec: GenusSpec, trunc: Option<usize>) -> GenusSpec {
    match trunc {
        Some(n) => spec.with_truncation(n),
        None => spec,
    }
}

#[derive(Serialize)]
struct GenusResult {
    genus: String,
    value: String,
    class: String,
}

#[derive(Serialize)]
struct ChernResult {
    dim_c: u32,
    total: String,
    classes: Vec<ClassEntry>,
    numbers: Vec<NumberEntry>,
}

#[derive(Serialize)]
struct EulerResult {
    value: String,
    betti: Vec<usize>,
    top_chern_number: String,
}

#[derive(Serialize)]
struct ValueResult {
    value: String,
}

#[derive(Serialize)]
struct InvarianceRowOut {
    base_label: String,
    blown_label: String,
    base: String,
    blown: String,
    equal: bool,
}

#[derive(Serialize)]
struct InvarianceResult {
    base: String,
    genus: String,
    verdict: String,
    rows: Vec<InvarianceRowOut>,
}

#[derive(Serialize)]
struct PartitionEntry {
    partition: Vec<u32>,
    todd: String,
}

#[derive(Serialize)]
struct BasisResult {
    dimension: usize,
    basis: Vec<PartitionEntry>,
}

#[derive(Serialize)]
struct Term {
    partition: Vec<u32>,
    coefficient: String,
}

#[derive(Serialize)]
struct QuotientResult {
    dimension: usize,
    ideal_dimension: usize,
    codimension: usize,
    ideal_basis: Vec<Vec<Term>>,
    todd_vanishes_on_ideal: bool,
    quotient_generator: Vec<u32>,
    todd_on_quotient: String,
}

#[derive(Serialize)]
struct CoefficientEntry {
    label: String,
    value: String,
}

#[derive(Serialize)]
struct DecomposeResult {
    generators: usize,
    class: String,
    coefficients: Vec<CoefficientEntry>,
    reproduces: bool,
}

fn document<R: Serialize>(command: &str, inputs: Inputs, result: R) -> Document<R> {
    Document {
        command: command.to_string(),
        inputs,
        result,
    }
}

type Executed = (i32, serde_json::Value);

fn ok<R: Serialize>(doc: Document<R>) -> Result<Executed, Failure> {
    Ok((
        EXIT_OK,
        serde_json::to_value(doc).expect("documents serialize"),
    ))
}

fn execute(cli: &Cli) -> Result<Executed, Failure> {
    let trunc = cli.trunc;
    let with_trunc = |mut i: Inputs| {
        i.trunc = trunc;
        i
    };
    match &cli.command {
        Command::Todd(v) => genus_command(
            "todd",
            &v.variety,
            genus_with(GenusSpec::todd(), trunc),
            None,
            trunc,
        ),
        Command::Genus { spec, v } => {
            let name = format!("{spec:?}").to_lowercase();
            genus_command(
                "genus",
                &v.variety,
                genus_with(spec.genus(), trunc),
                Some(name),
                trunc,
            )
        }
        Command::Signature(v) => genus_command(
            "signature",
            &v.variety,
            genus_with(GenusSpec::l_genus(), trunc),
            None,
            trunc,
        ),
        Command::Chern(v) => {
            let (e, m) = variety(&v.variety)?;
            let n = m.dim_c();
            let numbers = weighted_monomials("c", n)
                .into_iter()
                .map(|mono| {
                    Ok(NumberEntry {
                        value: q(&char_number(&m, &mono)?),
                        monomial: mono,
                    })
                })
                .collect::<Result<Vec<_>, toddkit::Error>>()?;
            ok(document(
                "chern",
                inputs_for(&e),
                ChernResult {
                    dim_c: n,
                    total: m.total_chern().to_string(),
                    classes: classes("c", (1..=n).map(|i| (i, m.chern_class(i)))),
                    numbers,
                },
            ))
        }
        Command::Pontrjagin(v) => {
            let (e, m) = variety(&v.variety)?;
            let n = m.dim_c();
            let total = chern_to_pontrjagin(m.total_chern(), n)?;
            let numbers = if n % 2 == 0 {
                weighted_monomials("p", n / 2)
                    .into_iter()
                    .map(|mono| {
                        Ok(NumberEntry {
                            value: q(&char_number(&m, &mono)?),
                            monomial: mono,
                        })
                    })
                    .collect::<Result<Vec<_>, toddkit::Error>>()?
            } else {
                Vec::new()
            };
            let list = (1..=n / 2)
                .map(|i| Ok((i, m.pontrjagin_class(i)?)))
                .collect::<Result<Vec<_>, toddkit::Error>>()?;
            ok(document(
                "pontrjagin",
                inputs_for(&e),
                ChernResult {
                    dim_c: n,
                    total: total.to_string(),
                    classes: classes("p", list),
                    numbers,
                },
            ))
        }
        Command::Euler(v) => {
            let (e, m) = variety(&v.variety)?;
            ok(document(
                "euler",
                inputs_for(&e),
                EulerResult {
                    value: q(&Rational::from_integer(m.euler_characteristic().into())),
                    betti: m.algebra().betti_numbers(),
                    top_chern_number: q(&m.euler_number()),
                },
            ))
        }
        Command::HigherTodd { x, v } => {
            let (e, m) = variety(&v.variety)?;
            let class = m.pi_class(x)?.clone();
            let genus = genus_with(GenusSpec::todd(), trunc);
            let value = higher_genus_of(&m, &genus, &class)?;
            let mut inputs = with_trunc(inputs_for(&e));
            inputs.x = Some(x.clone());
            ok(document(
                "higher-todd",
                inputs,
                ValueResult { value: q(&value) },
            ))
        }
        Command::CharNumber { expr, v } => {
            let (e, m) = variety(&v.variety)?;
            let value = char_number(&m, expr)?;
            let mut inputs = inputs_for(&e);
            inputs.expr = Some(expr.clone());
            ok(document(
                "char-number",
                inputs,
                ValueResult { value: q(&value) },
            ))
        }
        Command::VerifyInvariance { spec, v } => {
            let e = dsl::parse(&v.variety)?;
            let pair = dsl::elaborate_blowup(&e).ok_or_else(|| {
                Failure::usage(
                    "NotABlowup",
                    "verify-invariance needs a blowup(...) expression",
                )
            })??;
            let genus = genus_with(spec.genus(), trunc);
            let report = verify_blowup_invariance(&pair, &genus)?;
            let code = if report.verdict == Verdict::Pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            };
            let mut inputs = with_trunc(inputs_for(&e));
            inputs.spec = Some(format!("{spec:?}").to_lowercase());
            let result = InvarianceResult {
                base: pair.base.name().to_string(),
                genus: report.genus.clone(),
                verdict: report.verdict.to_string(),
                rows: report
                    .rows
                    .iter()
                    .map(|r| InvarianceRowOut {
                        base_label: r.base_label.clone(),
                        blown_label: r.blown_label.clone(),
                        base: q(&r.base_value),
                        blown: q(&r.blown_value),
                        equal: r.equal,
                    })
                    .collect(),
            };
            let (_, value) = ok(document("verify-invariance", inputs, result))?;
            Ok((code, value))
        }
        Command::BordismBasis { k } => {
            let basis = partitions(*k)
                .into_iter()
                .map(|p| {
                    Ok(PartitionEntry {
                        todd: q(&todd_of_partition(&p)?),
                        partition: p.parts().to_vec(),
                    })
                })
                .collect::<Result<Vec<_>, toddkit::Error>>()?;
            let inputs = Inputs {
                k: Some(*k),
                ..Inputs::default()
            };
            ok(document(
                "bordism-basis",
                inputs,
                BasisResult {
                    dimension: basis.len(),
                    basis,
                },
            ))
        }
        Command::BordismQuotient { k } => {
            let span = birational_ideal_span(*k)?;
            let elements = span.basis_elements();
            let mut vanishes = true;
            for el in &elements {
                vanishes &= todd_functional(el)? == Rational::from_integer(0.into());
            }
            let top = span.partitions[0].clone();
            let ideal_basis = span
                .basis
                .iter()
                .map(|row| {
                    span.partitions
                        .iter()
                        .zip(row)
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(p, c)| Term {
                            partition: p.parts().to_vec(),
                            coefficient: q(c),
                        })
                        .collect()
                })
                .collect();
            let inputs = Inputs {
                k: Some(*k),
                ..Inputs::default()
            };
            ok(document(
                "bordism-quotient",
                inputs,
                QuotientResult {
                    dimension: span.partitions.len(),
                    ideal_dimension: span.dimension(),
                    codimension: span.codimension(),
                    ideal_basis,
                    todd_vanishes_on_ideal: vanishes,
                    todd_on_quotient: q(&todd_of_partition(&top)?),
                    quotient_generator: top.parts().to_vec(),
                },
            ))
        }
        Command::Decompose {
            pi,
            k,
            values,
            theory,
        } => {
            let pi_model =
                PiModel::parse(pi).map_err(|e| Failure::usage("UsageError", e.to_string()))?;
            let basis = match theory {
                TheoryName::Unitary => GeneratorBasis::unitary(pi_model, *k),
                TheoryName::Oriented => GeneratorBasis::oriented(pi_model, *k),
            };
            let text = std::fs::read_to_string(values).map_err(|e| Failure {
                code: EXIT_IO,
                kind: "IoError".into(),
                message: format!("{}: {e}", values.display()),
                position: None,
            })?;
            let xi = output::parse_values(&text, &basis)
                .map_err(|m| Failure::usage("ValuesError", m))?;
            let x = decompose_functional(&basis, &xi)?;
            let reproduces = GenusFunctional::from_class(&basis, &x)? == xi;
            debug_assert!(is_invariant(&basis, &xi)?.is_none());
            let alg = x.algebra().clone();
            let coefficients = x
                .coefficients()
                .iter()
                .map(|(i, c)| CoefficientEntry {
                    label: alg.render_basis(*i),
                    value: q(c),
                })
                .collect();
            let inputs = Inputs {
                pi: Some(pi.trim().to_string()),
                k: Some(*k),
                theory: Some(format!("{theory:?}").to_lowercase()),
                values: Some(values.display().to_string()),
                ..Inputs::default()
            };
            ok(document(
                "decompose",
                inputs,
                DecomposeResult {
                    generators: basis.len(),
                    class: x.to_string(),
                    coefficients,
                    reproduces,
                },
            ))
        }
    }
}

fn genus_command(
    command: &str,
    text: &str,
    genus: GenusSpec,
    spec: Option<String>,
    trunc: Option<usize>,
) -> Result<Executed, Failure> {
    let (e, m) = variety(text)?;
    let class = genus_class(&m, &genus)?;
    let value = class.pair_top()?;
    let mut inputs = inputs_for(&e);
    inputs.spec = spec;
    inputs.trunc = trunc;
    ok(document(
        command,
        inputs,
        GenusResult {
            genus: genus.name().to_string(),
            value: q(&value),
            class: class.to_string(),
        },
    ))
}
