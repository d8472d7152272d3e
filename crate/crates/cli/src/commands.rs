use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use daeforms_core::linalg::{Mat, Subspace};
use daeforms_core::pdfeedback::{
    check_pdff, compute_qpdff, decouple_qpdff, decoupled_qpdff_identities, verify_qpdff,
};
use daeforms_core::pfeedback::{check_pff, classify_controllability, compute_qpff, decouple_qpff, verify_qpff};
use daeforms_core::wong::{augmented_projection_check, check_limit_identities, wong_limits};
use daeforms_core::{Error, SystemTriple};
use toml::{Table, Value};

use crate::format::{self, Form, FormData, SystemFile, Witness};

#[derive(Debug, Parser)]
#[command(name = "daeforms", version, about = "Feedback forms of linear DAE control systems in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the augmented Wong sequences and their limits.
    Wong {
        input: PathBuf,
        /// Check the identities satisfied by the limits.
        #[arg(long)]
        check_identities: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Compute a quasi P-feedback form.
    Qpff {
        input: PathBuf,
        /// Also remove the off-diagonal blocks.
        #[arg(long)]
        decouple: bool,
        /// Describe the controllability meaning of the blocks.
        #[arg(long)]
        classify: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Compute a quasi PD-feedback form.
    Qpdff {
        input: PathBuf,
        /// Also remove the off-diagonal blocks.
        #[arg(long)]
        decouple: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Apply a witness and check the resulting system against a claimed form.
    Verify {
        input: PathBuf,
        /// Transformation to apply first; without it the input is checked as is.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
        #[arg(long, value_enum)]
        form: Form,
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("input error: {0}")]
    Input(String),
    /// A mathematical check failed.
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

fn core(e: Error) -> CliError {
    match e {
        Error::Dimension(_) => CliError::Input(e.to_string()),
        _ => CliError::Check(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn located(path: &Path) -> impl Fn(format::FormatError) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn write_output(path: &Path, doc: &Table) -> Result<(), CliError> {
    std::fs::write(path, format::to_text(doc)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<SystemFile, CliError> {
    format::parse_system(&read(path)?).map_err(located(path))
}

fn header(out: &mut String, file: &SystemFile) {
    let (l, n, m) = file.system.dims();
    if let Some(name) = &file.name {
        writeln!(out, "system: {name}").unwrap();
    }
    writeln!(out, "{l} equations, {n} states, {m} inputs").unwrap();
}

fn matrix(out: &mut String, name: &str, m: &Mat) {
    writeln!(out, "{name} =").unwrap();
    writeln!(out, "{m}").unwrap();
}

fn subspace(out: &mut String, name: &str, s: &Subspace) {
    writeln!(out, "{name}: dim {}", s.dim()).unwrap();
    if !s.is_zero() {
        writeln!(out, "{}", s.basis()).unwrap();
    }
}

fn triple(out: &mut String, sys: &SystemTriple) {
    matrix(out, "E", sys.e());
    matrix(out, "A", sys.a());
    matrix(out, "B", sys.b());
}

fn witness(out: &mut String, w: &Witness) {
    let (s, t, v, f_p, f_d) = match w {
        Witness::P(w) => (w.s(), w.t(), w.v(), w.f_p(), None),
        Witness::PD(w) => (w.s(), w.t(), w.v(), w.f_p(), Some(w.f_d())),
    };
    for (k, m) in [("S", s), ("T", t), ("V", v), ("F_P", f_p)] {
        matrix(out, k, m);
    }
    if let Some(f) = f_d {
        matrix(out, "F_D", f);
    }
}

fn checked_apply(w: &Witness, sys: &SystemTriple, expected: &SystemTriple) -> Result<(), CliError> {
    if &w.apply(sys).map_err(core)? != expected {
        return Err(CliError::Check("internal error: witness does not reproduce the computed system".into()));
    }
    Ok(())
}

fn section(doc: &mut Table, key: &str, t: Table) {
    doc.insert(key.into(), Value::Table(t));
}

fn output_doc(file: &SystemFile, sys: &SystemTriple) -> Table {
    let mut doc = Table::new();
    if let Some(n) = &file.name {
        doc.insert("name".into(), Value::String(n.clone()));
    }
    doc.extend(format::system_table(sys));
    doc
}

pub fn cmd_wong(input: &Path, check_identities: bool, output: Option<&Path>) -> Result<String, CliError> {
    let file = load_system(input)?;
    let sys = &file.system;
    let r = wong_limits(sys);
    let mut out = String::new();
    header(&mut out, &file);
    for (name, chain) in [("V", &r.v_chain), ("W", &r.w_chain)] {
        writeln!(out).unwrap();
        let dims: Vec<String> = chain.iter().map(|s| s.dim().to_string()).collect();
        writeln!(out, "{name} chain dimensions: {}", dims.join(" > ")).unwrap();
        for (i, s) in chain.iter().enumerate() {
            subspace(&mut out, &format!("{name}^{i}"), s);
        }
    }
    writeln!(out).unwrap();
    writeln!(out, "i* = {}, j* = {}", r.i_star, r.j_star).unwrap();
    subspace(&mut out, "V*", &r.v_limit);
    subspace(&mut out, "W*", &r.w_limit);

    let mut failed = Vec::new();
    if check_identities {
        writeln!(out).unwrap();
        let report = check_limit_identities(sys);
        let mut checks: Vec<(String, bool)> = report.checks.iter().map(|c| (c.name.to_string(), c.holds)).collect();
        checks.push(("limits equal projections of the augmented limits".into(), augmented_projection_check(sys)));
        for (name, holds) in checks {
            writeln!(out, "{} {name}", if holds { "holds" } else { "FAILS" }).unwrap();
            if !holds {
                failed.push(name);
            }
        }
    }

    if let Some(path) = output {
        let mut doc = output_doc(&file, sys);
        let mut w = Table::new();
        let dims = |c: &[Subspace]| Value::Array(c.iter().map(|s| Value::Integer(s.dim() as i64)).collect());
        w.insert("i_star".into(), Value::Integer(r.i_star as i64));
        w.insert("j_star".into(), Value::Integer(r.j_star as i64));
        w.insert("v_dims".into(), dims(&r.v_chain));
        w.insert("w_dims".into(), dims(&r.w_chain));
        w.insert("V_star".into(), format::matrix_value(r.v_limit.basis()));
        w.insert("W_star".into(), format::matrix_value(r.w_limit.basis()));
        section(&mut doc, "wong", w);
        write_output(path, &doc)?;
    }
    if !failed.is_empty() {
        return Err(CliError::Check(format!("{out}identity check failed: {}", failed.join("; "))));
    }
    Ok(out)
}

pub fn cmd_qpff(input: &Path, decouple: bool, classify: bool, output: Option<&Path>) -> Result<String, CliError> {
    let file = load_system(input)?;
    let sys = &file.system;
    let q = compute_qpff(sys).map_err(core)?;
    let sizes = q.block_sizes;
    let report = verify_qpff(&q.transformed, &sizes);
    if !report.passed() {
        return Err(CliError::Check(format!("internal error: {}", report.failures.join("; "))));
    }
    let w = Witness::P(q.witness.clone());
    checked_apply(&w, sys, &q.transformed)?;

    let mut out = String::new();
    header(&mut out, &file);
    writeln!(out, "block signature: {sizes}").unwrap();
    writeln!(out, "l = {:?}, n = {:?}, m = {:?}", sizes.l, sizes.n, sizes.m).unwrap();
    writeln!(out, "\ntransformed system:").unwrap();
    triple(&mut out, &q.transformed);
    writeln!(out, "\nwitness:").unwrap();
    witness(&mut out, &w);
    if classify {
        let c = classify_controllability(sys).map_err(core)?;
        writeln!(out, "\nclassification:\n{c}").unwrap();
    }

    let mut doc = output_doc(&file, &q.transformed);
    section(&mut doc, "blocks", format::qpff_blocks(&sizes));
    section(&mut doc, "witness", format::witness_table(&w));
    if decouple {
        let (dec, step) = decouple_qpff(&q.transformed, &sizes).map_err(core)?;
        if !verify_qpff(&dec, &sizes).passed() {
            return Err(CliError::Check("internal error: decoupled system lost its block structure".into()));
        }
        let total = Witness::P(q.witness.followed_by(&step));
        checked_apply(&total, sys, &dec)?;
        writeln!(out, "\ndecoupled system:").unwrap();
        triple(&mut out, &dec);
        writeln!(out, "\nwitness from the input to the decoupled system:").unwrap();
        witness(&mut out, &total);
        section(&mut doc, "decoupled", format::system_table(&dec));
        section(&mut doc, "decoupling_witness", format::witness_table(&total));
    }
    writeln!(out, "\ncheck: passed").unwrap();
    if let Some(path) = output {
        write_output(path, &doc)?;
    }
    Ok(out)
}

pub fn cmd_qpdff(input: &Path, decouple: bool, output: Option<&Path>) -> Result<String, CliError> {
    let file = load_system(input)?;
    let sys = &file.system;
    let q = compute_qpdff(sys).map_err(core)?;
    let sizes = q.block_sizes;
    let report = verify_qpdff(&q.transformed, &sizes);
    if !report.passed() {
        return Err(CliError::Check(format!("internal error: {}", report.failures.join("; "))));
    }
    let w = Witness::PD(q.witness.clone());
    checked_apply(&w, sys, &q.transformed)?;

    let mut out = String::new();
    header(&mut out, &file);
    writeln!(out, "block signature: {sizes}").unwrap();
    writeln!(out, "\ntransformed system:").unwrap();
    triple(&mut out, &q.transformed);
    writeln!(out, "\nwitness:").unwrap();
    witness(&mut out, &w);

    let mut doc = output_doc(&file, &q.transformed);
    section(&mut doc, "blocks", format::qpdff_blocks(&sizes));
    section(&mut doc, "witness", format::witness_table(&w));
    if decouple {
        let (dec, step) = decouple_qpdff(&q.transformed, &sizes).map_err(core)?;
        let identities = decoupled_qpdff_identities(&dec, &sizes);
        if !identities.passed() {
            return Err(CliError::Check(format!("internal error: {}", identities.failures.join("; "))));
        }
        let total = Witness::PD(q.witness.followed_by(&step));
        checked_apply(&total, sys, &dec)?;
        writeln!(out, "\ndecoupled system:").unwrap();
        triple(&mut out, &dec);
        writeln!(out, "\nwitness from the input to the decoupled system:").unwrap();
        witness(&mut out, &total);
        writeln!(out, "\nlimit identities of the decoupled system: hold").unwrap();
        section(&mut doc, "decoupled", format::system_table(&dec));
        section(&mut doc, "decoupling_witness", format::witness_table(&total));
    }
    writeln!(out, "\ncheck: passed").unwrap();
    if let Some(path) = output {
        write_output(path, &doc)?;
    }
    Ok(out)
}

pub fn cmd_verify(input: &Path, witness: Option<&Path>, form: Form, data: &Path) -> Result<String, CliError> {
    let file = load_system(input)?;
    let claimed = format::parse_data(&read(data)?, form).map_err(located(data))?;
    let sys = match witness {
        Some(path) => {
            let w = format::parse_witness(&read(path)?).map_err(located(path))?;
            w.apply(&file.system).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        None => file.system.clone(),
    };
    let outcome = match &claimed {
        FormData::Pff(d) => check_pff(&sys, d),
        FormData::Pdff(d) => check_pdff(&sys, d),
        FormData::Qpff(s) => report_result("QPFF", verify_qpff(&sys, s).failures),
        FormData::Qpdff(s) => report_result("QPDFF", verify_qpdff(&sys, s).failures),
    };
    match outcome {
        Ok(()) => Ok(format!("PASS {}\n", form_name(form))),
        Err(Error::NotInForm { reason, .. }) => Err(CliError::Check(format!("FAIL {}: {reason}", form_name(form)))),
        Err(e) => Err(core(e)),
    }
}

fn report_result(form: &'static str, failures: Vec<String>) -> daeforms_core::Result<()> {
    match failures.into_iter().next() {
        None => Ok(()),
        Some(reason) => Err(Error::NotInForm { form, reason }),
    }
}

fn form_name(form: Form) -> &'static str {
    match form {
        Form::Pff => "PFF",
        Form::Pdff => "PDFF",
        Form::Qpff => "QPFF",
        Form::Qpdff => "QPDFF",
    }
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Wong { input, check_identities, output } => cmd_wong(input, *check_identities, output.as_deref()),
        Command::Qpff { input, decouple, classify, output } => cmd_qpff(input, *decouple, *classify, output.as_deref()),
        Command::Qpdff { input, decouple, output } => cmd_qpdff(input, *decouple, output.as_deref()),
        Command::Verify { input, witness, form, data } => cmd_verify(input, witness.as_deref(), *form, data),
    }
}
