//! JSON documents. Field order is fixed by the structs; rationals are
//! always `"num/den"` strings.

use serde::{Deserialize, Serialize};

use toddkit::bordism::{BordismGenerator, GeneratorBasis, GenusFunctional, Partition};
use toddkit::rational::{fmt_rational, parse_rational};
use toddkit::Rational;

pub fn q(value: &Rational) -> String {
    fmt_rational(value)
}

#[derive(Serialize, Default, Debug)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variety: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
}

#[derive(Serialize, Debug)]
pub struct Document<R> {
    pub command: String,
    pub inputs: Inputs,
    #[serde(flatten)]
    pub result: R,
}

#[derive(Serialize, Debug)]
pub struct ClassEntry {
    pub name: String,
    pub class: String,
}

#[derive(Serialize, Debug)]
pub struct NumberEntry {
    pub monomial: String,
    pub value: String,
}

#[derive(Serialize, Debug)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

#[derive(Serialize, Debug)]
pub struct ErrorDocument {
    pub error: ErrorBody,
}

pub fn render<T: Serialize>(doc: &T, pretty: bool) -> String {
    let mut text = if pretty {
        serde_json::to_string_pretty(doc)
    } else {
        serde_json::to_string(doc)
    }
    .expect("documents serialize");
    text.push('\n');
    text
}

/// One entry of a values file.
#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct ValueEntry {
    label: String,
    partition: Vec<u32>,
    value: ValueText,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum ValueText {
    Text(String),
    Integer(i64),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct ValuesFile {
    values: Vec<ValueEntry>,
}

/// Reads `{"values": [{"label": "x1*x2", "partition": [1], "value": "1/2"}, ...]}`.
/// Every generator must be given exactly once.
pub fn parse_values(text: &str, basis: &GeneratorBasis) -> Result<GenusFunctional, String> {
    let file: ValuesFile = serde_json::from_str(text).map_err(|e| format!("values file: {e}"))?;
    let mut values: Vec<Option<Rational>> = vec![None; basis.len()];
    for entry in file.values {
        let fiber = Partition::new(entry.partition.clone()).map_err(|e| e.to_string())?;
        let label: String = entry.label.chars().filter(|c| !c.is_whitespace()).collect();
        let g = BordismGenerator { label, fiber };
        let i = basis
            .position(&g)
            .ok_or_else(|| format!("{g} is not a generator in this degree"))?;
        let value = match &entry.value {
            ValueText::Text(t) => {
                parse_rational(t).ok_or_else(|| format!("bad rational `{t}` for {g}"))?
            }
            ValueText::Integer(n) => Rational::from_integer((*n).into()),
        };
        if values[i].replace(value).is_some() {
            return Err(format!("{g} is given twice"));
        }
    }
    let missing: Vec<String> = basis
        .generators
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_none())
        .map(|(g, _)| g.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(format!("missing values for {}", missing.join(", ")));
    }
    Ok(GenusFunctional::new(
        values.into_iter().map(Option::unwrap).collect(),
    ))
}
