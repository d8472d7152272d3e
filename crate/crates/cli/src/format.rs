//! Reading and writing systems, witnesses and form data as TOML documents
//! with exact rational entries. The grammar is described in `FORMAT.md`.

use daeforms_core::linalg::{Mat, Rational};
use daeforms_core::pdfeedback::{PDTransform, QpdffSizes};
use daeforms_core::pfeedback::{PTransform, QpffSizes};
use daeforms_core::templates::{PdffData, PffData};
use daeforms_core::SystemTriple;
use num_bigint::BigInt;
use toml::{Table, Value};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct FormatError(pub String);

type Result<T> = std::result::Result<T, FormatError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(FormatError(msg.into()))
}

/// Parses `p`, `-p` or `p/q` with decimal digits and `q > 0`.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits(unsigned) {
        return Err(format!("invalid rational {s:?}: expected p, -p or p/q"));
    }
    let p: BigInt = num.parse().expect("validated digits");
    let q: BigInt = match den {
        None => BigInt::from(1),
        Some(d) if digits(d) => d.parse().expect("validated digits"),
        Some(_) => return Err(format!("invalid rational {s:?}: denominator must be unsigned digits")),
    };
    if q == BigInt::from(0) {
        return Err(format!("invalid rational {s:?}: zero denominator"));
    }
    Ok(Rational::new(p, q))
}

pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

fn entry(key: &str, i: usize, j: usize, v: &Value) -> Result<Rational> {
    let at = || format!("{key} row {} column {}", i + 1, j + 1);
    match v {
        Value::String(s) => parse_rational(s).or_else(|e| err(format!("{}: {e}", at()))),
        Value::Integer(n) => Ok(Rational::from_integer(BigInt::from(*n))),
        other => err(format!("{}: expected a rational string, found {}", at(), other.type_str())),
    }
}

fn rows_of(key: &str, v: &Value) -> Result<Vec<Vec<Rational>>> {
    let Value::Array(rows) = v else {
        return err(format!("{key}: expected an array of rows"));
    };
    rows.iter()
        .enumerate()
        .map(|(i, row)| match row {
            Value::Array(cells) => cells.iter().enumerate().map(|(j, c)| entry(key, i, j, c)).collect(),
            _ => err(format!("{key} row {}: expected an array of entries", i + 1)),
        })
        .collect()
}

fn count(key: &str, t: &Table, field: &str) -> Result<usize> {
    match t.get(field) {
        Some(Value::Integer(n)) if *n >= 0 => Ok(*n as usize),
        Some(_) => err(format!("{key}.{field}: expected a non-negative integer")),
        None => err(format!("{key}: missing {field}")),
    }
}

pub fn matrix(key: &str, v: &Value) -> Result<Mat> {
    let (rows, cols, data) = match v {
        Value::Table(t) => {
            if let Some(extra) = t.keys().find(|k| !["rows", "cols", "data"].contains(&k.as_str())) {
                return err(format!("{key}: unknown field {extra:?}"));
            }
            let (r, c) = (count(key, t, "rows")?, count(key, t, "cols")?);
            let data = match t.get("data") {
                Some(d) => rows_of(key, d)?,
                None if r * c == 0 => vec![vec![]; r],
                None => return err(format!("{key}: a nonempty matrix needs data")),
            };
            (r, c, data)
        }
        Value::Array(a) if a.is_empty() => {
            return err(format!("{key}: empty array; write {{ rows = .., cols = .. }} for a matrix without entries"))
        }
        _ => {
            let data = rows_of(key, v)?;
            let c = data[0].len();
            (data.len(), c, data)
        }
    };
    if data.len() != rows {
        return err(format!("{key}: expected {rows} rows, found {}", data.len()));
    }
    if let Some((i, r)) = data.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return err(format!("{key} row {}: expected {cols} entries, found {}", i + 1, r.len()));
    }
    Ok(Mat::from_fn(rows, cols, |i, j| data[i][j].clone()))
}

pub fn matrix_value(m: &Mat) -> Value {
    if m.rows() == 0 || m.cols() == 0 {
        let mut t = Table::new();
        t.insert("rows".into(), Value::Integer(m.rows() as i64));
        t.insert("cols".into(), Value::Integer(m.cols() as i64));
        return Value::Table(t);
    }
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_rational(x))).collect()))
            .collect(),
    )
}

fn parse_doc(text: &str) -> Result<Table> {
    text.parse::<Table>().or_else(|e| err(format!("TOML syntax: {e}")))
}

fn required<'a>(t: &'a Table, key: &str, ctx: &str) -> Result<&'a Value> {
    t.get(key).ok_or_else(|| FormatError(format!("{ctx}missing key {key}")))
}

fn check_keys(t: &Table, allowed: &[&str], ctx: &str) -> Result<()> {
    match t.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => err(format!("{ctx}unknown key {k:?}")),
        None => Ok(()),
    }
}

/// A system with its optional metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub name: Option<String>,
    pub description: Option<String>,
    pub system: SystemTriple,
}

/// Sections written by the commands; a system file may carry them along.
const OUTPUT_SECTIONS: [&str; 5] = ["blocks", "witness", "decoupled", "decoupling_witness", "wong"];

fn system_from_table(t: &Table, ctx: &str) -> Result<SystemTriple> {
    let e = matrix("E", required(t, "E", ctx)?)?;
    let a = matrix("A", required(t, "A", ctx)?)?;
    let b = matrix("B", required(t, "B", ctx)?)?;
    SystemTriple::new(e, a, b).or_else(|e| err(format!("{ctx}{e}")))
}

pub fn parse_system(text: &str) -> Result<SystemFile> {
    let doc = parse_doc(text)?;
    let mut allowed = vec!["name", "description", "E", "A", "B"];
    allowed.extend(OUTPUT_SECTIONS);
    check_keys(&doc, &allowed, "")?;
    let text_field = |k: &str| match doc.get(k) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => err(format!("{k}: expected a string")),
    };
    Ok(SystemFile {
        name: text_field("name")?,
        description: text_field("description")?,
        system: system_from_table(&doc, "")?,
    })
}

/// The system stored under `[section]`, e.g. the decoupled triple of an output file.
pub fn parse_system_section(text: &str, section: &str) -> Result<SystemTriple> {
    let doc = parse_doc(text)?;
    match doc.get(section) {
        Some(Value::Table(t)) => system_from_table(t, &format!("[{section}] ")),
        _ => err(format!("missing section [{section}]")),
    }
}

pub fn system_table(sys: &SystemTriple) -> Table {
    let mut t = Table::new();
    t.insert("E".into(), matrix_value(sys.e()));
    t.insert("A".into(), matrix_value(sys.a()));
    t.insert("B".into(), matrix_value(sys.b()));
    t
}

pub fn write_system(file: &SystemFile) -> String {
    let mut t = Table::new();
    if let Some(n) = &file.name {
        t.insert("name".into(), Value::String(n.clone()));
    }
    if let Some(d) = &file.description {
        t.insert("description".into(), Value::String(d.clone()));
    }
    t.extend(system_table(&file.system));
    to_text(&t)
}

fn is_matrix_table(t: &Table) -> bool {
    t.keys().all(|k| ["rows", "cols", "data"].contains(&k.as_str()))
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Table(t) => {
            let fields: Vec<String> = t.iter().map(|(k, v)| format!("{k} = {}", inline(v))).collect();
            format!("{{ {} }}", fields.join(", "))
        }
        other => other.to_string(),
    }
}

fn emit_entries(out: &mut String, t: &Table) {
    for (k, v) in t {
        match v {
            Value::Array(rows) if rows.iter().any(|r| matches!(r, Value::Array(_))) => {
                out.push_str(&format!("{k} = [\n"));
                for r in rows {
                    out.push_str(&format!("  {},\n", inline(r)));
                }
                out.push_str("]\n");
            }
            Value::Table(s) if !is_matrix_table(s) => {}
            _ => out.push_str(&format!("{k} = {}\n", inline(v))),
        }
    }
}

/// Writes one matrix row per line; top-level tables other than empty
/// matrices become `[sections]`.
pub fn to_text(t: &Table) -> String {
    let mut out = String::new();
    emit_entries(&mut out, t);
    for (k, v) in t {
        if let Value::Table(s) = v {
            if !is_matrix_table(s) {
                out.push_str(&format!("\n[{k}]\n"));
                emit_entries(&mut out, s);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    P(PTransform),
    PD(PDTransform),
}

impl Witness {
    pub fn apply(&self, sys: &SystemTriple) -> daeforms_core::Result<SystemTriple> {
        match self {
            Witness::P(w) => w.apply(sys),
            Witness::PD(w) => w.apply(sys),
        }
    }
}

pub fn witness_table(w: &Witness) -> Table {
    let mut t = Table::new();
    let (kind, s, tt, v, f_p, f_d) = match w {
        Witness::P(w) => ("P", w.s(), w.t(), w.v(), w.f_p(), None),
        Witness::PD(w) => ("PD", w.s(), w.t(), w.v(), w.f_p(), Some(w.f_d())),
    };
    t.insert("kind".into(), Value::String(kind.into()));
    for (k, m) in [("S", s), ("T", tt), ("V", v), ("F_P", f_p)] {
        t.insert(k.into(), matrix_value(m));
    }
    if let Some(f) = f_d {
        t.insert("F_D".into(), matrix_value(f));
    }
    t
}

/// Reads a witness from the top level of the document or from its `[witness]` table.
pub fn parse_witness(text: &str) -> Result<Witness> {
    let doc = parse_doc(text)?;
    match doc.get("witness") {
        Some(Value::Table(t)) if !doc.contains_key("kind") => witness_from_table(t, "[witness] "),
        _ => witness_from_table(&doc, ""),
    }
}

/// The witness stored under `[section]`, e.g. `decoupling_witness`.
pub fn parse_witness_section(text: &str, section: &str) -> Result<Witness> {
    let doc = parse_doc(text)?;
    match doc.get(section) {
        Some(Value::Table(t)) => witness_from_table(t, &format!("[{section}] ")),
        _ => err(format!("missing section [{section}]")),
    }
}

fn witness_from_table(t: &Table, ctx: &str) -> Result<Witness> {
    check_keys(t, &["kind", "S", "T", "V", "F_P", "F_D"], ctx)?;
    let kind = match required(t, "kind", ctx)? {
        Value::String(k) if k == "P" || k == "PD" => k.as_str(),
        _ => return err(format!("{ctx}kind must be \"P\" or \"PD\"")),
    };
    let get = |k: &str| matrix(k, required(t, k, ctx)?);
    let shape_err = |e: daeforms_core::Error| FormatError(format!("{ctx}{e}"));
    match (kind, t.contains_key("F_D")) {
        ("P", false) => Ok(Witness::P(
            PTransform::new(get("S")?, get("T")?, get("V")?, get("F_P")?).map_err(shape_err)?,
        )),
        ("PD", true) => Ok(Witness::PD(
            PDTransform::new(get("S")?, get("T")?, get("V")?, get("F_P")?, get("F_D")?).map_err(shape_err)?,
        )),
        ("P", true) => err(format!("{ctx}kind \"P\" must not have F_D")),
        _ => err(format!("{ctx}kind \"PD\" requires F_D")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Form {
    Pff,
    Pdff,
    Qpff,
    Qpdff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormData {
    Pff(PffData),
    Pdff(PdffData),
    Qpff(QpffSizes),
    Qpdff(QpdffSizes),
}

fn index_list(t: &Table, key: &str, positive: bool) -> Result<Vec<usize>> {
    let Some(v) = t.get(key) else {
        return Ok(Vec::new());
    };
    let Value::Array(items) = v else {
        return err(format!("{key}: expected an array of integers"));
    };
    items
        .iter()
        .enumerate()
        .map(|(i, x)| match x {
            Value::Integer(n) if *n > 0 || (!positive && *n == 0) => Ok(*n as usize),
            _ => err(format!(
                "{key}[{i}]: expected a {} integer",
                if positive { "positive" } else { "non-negative" }
            )),
        })
        .collect()
}

fn fixed<const K: usize>(t: &Table, key: &str) -> Result<[usize; K]> {
    if !t.contains_key(key) {
        return err(format!("missing key {key}"));
    }
    let v = index_list(t, key, false)?;
    v.try_into()
        .or_else(|v: Vec<usize>| err(format!("{key}: expected {K} entries, found {}", v.len())))
}

fn scalar(t: &Table, key: &str, default: Option<usize>) -> Result<usize> {
    match (t.get(key), default) {
        (Some(Value::Integer(n)), _) if *n >= 0 => Ok(*n as usize),
        (Some(_), _) => err(format!("{key}: expected a non-negative integer")),
        (None, Some(d)) => Ok(d),
        (None, None) => err(format!("missing key {key}")),
    }
}

fn a_cbar(t: &Table) -> Result<Mat> {
    match t.get("A_cbar") {
        Some(v) => matrix("A_cbar", v),
        None => Ok(Mat::zeros(0, 0)),
    }
}

/// Reads the data of `form`, from the top level or from a `[blocks]` table.
pub fn parse_data(text: &str, form: Form) -> Result<FormData> {
    let doc = parse_doc(text)?;
    let t = match doc.get("blocks") {
        Some(Value::Table(b)) => b,
        _ => &doc,
    };
    let allowed: &[&str] = match form {
        Form::Pff => &["alpha", "beta", "gamma", "delta", "kappa", "A_cbar", "zero_inputs"],
        Form::Pdff => &["alpha", "beta", "gamma", "A_cbar", "r", "zero_inputs"],
        Form::Qpff | Form::Qpdff => &["l", "n", "m"],
    };
    if std::ptr::eq(t, &doc) {
        check_keys(t, allowed, "")?;
    }
    Ok(match form {
        Form::Pff => FormData::Pff(PffData {
            alpha: index_list(t, "alpha", true)?,
            beta: index_list(t, "beta", true)?,
            gamma: index_list(t, "gamma", true)?,
            delta: index_list(t, "delta", true)?,
            kappa: index_list(t, "kappa", true)?,
            a_cbar: a_cbar(t)?,
            zero_inputs: scalar(t, "zero_inputs", Some(0))?,
        }),
        Form::Pdff => FormData::Pdff(PdffData {
            alpha: index_list(t, "alpha", true)?,
            beta: index_list(t, "beta", true)?,
            gamma: index_list(t, "gamma", true)?,
            a_cbar: a_cbar(t)?,
            r: scalar(t, "r", None)?,
            zero_inputs: scalar(t, "zero_inputs", Some(0))?,
        }),
        Form::Qpff => FormData::Qpff(QpffSizes {
            l: fixed(t, "l")?,
            n: fixed(t, "n")?,
            m: fixed(t, "m")?,
        }),
        Form::Qpdff => FormData::Qpdff(QpdffSizes {
            l: fixed(t, "l")?,
            n: fixed(t, "n")?,
            m: fixed(t, "m")?,
        }),
    })
}

fn ints(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|&x| Value::Integer(x as i64)).collect())
}

pub fn qpff_blocks(s: &QpffSizes) -> Table {
    let mut t = Table::new();
    t.insert("l".into(), ints(&s.l));
    t.insert("n".into(), ints(&s.n));
    t.insert("m".into(), ints(&s.m));
    t
}

pub fn qpdff_blocks(s: &QpdffSizes) -> Table {
    let mut t = Table::new();
    t.insert("l".into(), ints(&s.l));
    t.insert("n".into(), ints(&s.n));
    t.insert("m".into(), ints(&s.m));
    t
}
