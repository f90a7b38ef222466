mod args;
mod render;
mod suite;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;

use porosity_core::blowup::{blow_up_chain, cc1_components, find_covering_blowup};
use porosity_core::ideal::{check_maximal_ideal_cover, check_prime_iff_maximal, check_theorem_istar_eq_ihat};
use porosity_core::membership::{analyze, decompose_csp, reproduce_example, SCHEMA};
use porosity_core::rational::{int, Rational};
use porosity_core::{analysis, Error, TailFamily};

use args::{Cli, Command, Format};

/// How a run ended, mapped to the exit status.
enum Failure {
    /// Malformed input or out-of-range parameters (status 1).
    Input(String),
    /// A mathematical hypothesis does not hold for the input (status 2).
    Hypothesis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(m) | Error::Hypothesis(m) => Failure::Hypothesis(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn emit<T: Serialize>(command: &str, format: Format, report: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => {
            let mut value = json!({ "schema": SCHEMA, "command": command });
            if let (Some(obj), serde_json::Value::Object(body)) =
                (value.as_object_mut(), serde_json::to_value(report).expect("serializable report"))
            {
                obj.extend(body);
            }
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
        Format::Text => print!("{}", text()),
    }
}

fn load_family(arg: &str) -> Result<TailFamily, Failure> {
    let source = args::family_source(arg).map_err(|e| Failure::Input(format!("cannot read `{arg}`: {e}")))?;
    let family: TailFamily =
        serde_json::from_str(&source).map_err(|e| Failure::Input(format!("bad family descriptor: {e}")))?;
    family.validate()?;
    Ok(family)
}

fn check_common(depth: usize, qs: &[Rational]) -> Result<(), Failure> {
    if depth == 0 {
        return Err(Failure::Input("depth must be at least 1".into()));
    }
    if let Some(q) = qs.iter().find(|q| **q <= int(1)) {
        return Err(Failure::Input(format!("blow-up factor {q} must exceed 1")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze(a) => {
            let qs = if a.q.is_empty() { vec![int(2)] } else { a.q.clone() };
            check_common(a.depth, &qs)?;
            let family = load_family(&a.family)?;
            let report = analyze(&family, &qs, a.depth, a.m_max)?;
            emit("analyze", a.output.format, &report, || render::analysis(&report));
        }
        Command::Blowup(b) => {
            check_common(b.depth, &b.q)?;
            match &b.family {
                None => {
                    let report = suite::run(b.seed, b.trials)?;
                    emit("blowup", b.output.format, &report, || render::suite(&report));
                    if report.violations() > 0 {
                        return Err(Failure::Hypothesis(format!("{} law violations", report.violations())));
                    }
                }
                Some(arg) => {
                    let family = load_family(arg)?;
                    let qs = if b.q.is_empty() { vec![int(2)] } else { b.q.clone() };
                    let chain = family.expand(b.depth)?;
                    let mut per_q = Vec::new();
                    for q in &qs {
                        let blown = blow_up_chain(&chain, q)?;
                        let cc1 = cc1_components(&blown);
                        per_q.push(render::BlownChain {
                            q: q.clone(),
                            chain: blown,
                            cc1: cc1.len(),
                            certificate: analysis::certificate(&family.clone().blowup(q.clone())?),
                        });
                    }
                    let covering = find_covering_blowup(&family, b.depth)?;
                    let report = render::BlowupReport { family, depth: b.depth, per_q, covering };
                    emit("blowup", b.output.format, &report, || render::blowup(&report));
                }
            }
        }
        Command::Decompose(d) => {
            check_common(d.depth, std::slice::from_ref(&d.q))?;
            let family = load_family(&d.family)?;
            let report = decompose_csp(&family, d.n, &d.q, d.depth)?;
            emit("decompose", d.output.format, &report, || render::decomposition(&report));
        }
        Command::VerifyFoundations(v) => {
            if !(1..=4).contains(&v.n) {
                return Err(Failure::Input("--n must be between 1 and 4".into()));
            }
            let report = render::Foundations {
                theorem: check_theorem_istar_eq_ihat(v.n)?,
                maximal_cover: check_maximal_ideal_cover(v.n)?,
                prime: check_prime_iff_maximal(v.n)?,
            };
            emit("verify-foundations", v.output.format, &report, || render::foundations(&report));
        }
        Command::ReproduceExample(e) => {
            let qs = if e.q.is_empty() { vec![int(3)] } else { e.q.clone() };
            check_common(e.depth, &qs)?;
            let report = reproduce_example(&e.alpha, e.depth, &qs, e.m_max)?;
            emit("reproduce-example", e.output.format, &report, || render::example(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Hypothesis(m)) => {
            eprintln!("hypothesis failed: {m}");
            ExitCode::from(2)
        }
    }
}
