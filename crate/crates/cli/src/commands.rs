//! Command implementations. Each returns the text to print and an exit code
//! so the binary stays a thin shell around them.

use std::fmt::Write as _;

use qtm_core::conditions::{
    check, conventional_label, evaluated_condition_count, generate_ktape_conditions, Checker, ConditionId,
    KTapeCondition,
};
use qtm_core::evolution::{estimate_norm_seeded, run, Guard, Superposition};
use qtm_core::model::{Configuration, TuringFrame};
use qtm_core::oracle::{column_oracle, row_oracle, ConfigurationWindow, OracleOutcome};
use qtm_core::table::{norm_bound, TransitionTable};
use qtm_core::QtmError;
use serde_json::json;
use thiserror::Error;

use crate::document::ParseError;
use crate::initial::{parse_initial, InitialError};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("[{}] {0}", .0.code())]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Initial(#[from] InitialError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] QtmError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(QtmError::InvalidTable(_)) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

pub fn checker_name(c: Checker) -> &'static str {
    match c {
        Checker::Column => "column",
        Checker::Row => "row",
        Checker::Hirvensalo => "hirvensalo",
        Checker::TwoTape => "two-tape",
        Checker::KTape => "ktape",
        Checker::Auto => "auto",
    }
}

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn fixed(x: f64) -> String {
    format!("{x:.12}")
}

fn code_for(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn validate(
    table: &TransitionTable,
    checker: Checker,
    tolerance: f64,
    format: Format,
) -> Result<Outcome, CliError> {
    let report = check(table, checker, tolerance)?;
    let stdout = match format {
        Format::Json => {
            let residuals: Vec<_> = report
                .residuals
                .iter()
                .map(|r| {
                    json!({
                        "condition": r.id.to_string(),
                        "residual": r.residual,
                        "witness": r.witness.as_ref().map(|w| w.to_string()),
                    })
                })
                .collect();
            let doc = json!({
                "checker": checker_name(checker),
                "tolerance": tolerance,
                "residuals": residuals,
                "verdict": if report.passed() { "pass" } else { "fail" },
            });
            serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "checker {}", checker_name(checker)).unwrap();
            writeln!(s, "tolerance {}", num(tolerance)).unwrap();
            for r in &report.residuals {
                let witness = r.witness.as_ref().map_or_else(|| "-".to_string(), |w| w.to_string());
                let mark = if r.residual <= tolerance { "ok" } else { "FAIL" };
                writeln!(
                    s,
                    "{:<16} {:<4} residual={}  witness: {}",
                    r.id.to_string(),
                    mark,
                    num(r.residual),
                    witness
                )
                .unwrap();
            }
            writeln!(s, "verdict {}", if report.passed() { "pass" } else { "fail" }).unwrap();
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: code_for(report.passed()),
    })
}

fn render_configuration(frame: &TuringFrame, c: &Configuration) -> (String, String, String) {
    let state = frame.states()[c.state].clone();
    let heads = c.heads.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(",");
    let tapes = c
        .tapes
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let cells: Vec<String> = t
                .cells()
                .map(|(cell, s)| format!("{cell}:{}", frame.alphabet(i).symbols()[s]))
                .collect();
            format!("{{{}}}", cells.join(","))
        })
        .collect::<Vec<_>>()
        .join(";");
    (state, heads, tapes)
}

pub fn run_machine(
    table: &TransitionTable,
    initial: &[String],
    steps: usize,
    unchecked: bool,
    tolerance: f64,
    format: Format,
) -> Result<Outcome, CliError> {
    let frame = table.frame();
    let psi: Superposition = parse_initial(frame, initial)?;
    if !unchecked && (psi.norm() - 1.0).abs() > 1e-9 {
        return Err(CliError::Usage(format!(
            "initial state has norm {}; pass --unchecked to run it anyway",
            psi.norm()
        )));
    }
    let guard = if unchecked {
        Guard::Unchecked
    } else {
        Guard::Validate { tolerance }
    };
    let out = run(table, &psi, steps, guard)?;
    let stdout = match format {
        Format::Json => {
            let terms: Vec<_> = out
                .state
                .iter()
                .map(|(c, a)| {
                    let (state, _, tapes) = render_configuration(frame, c);
                    json!({
                        "state": state,
                        "heads": c.heads,
                        "tapes": tapes,
                        "amp": [a.re, a.im],
                        "probability": a.norm_sqr(),
                    })
                })
                .collect();
            let doc = json!({ "steps": steps, "norms": out.norms, "terms": terms });
            serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for (i, n) in out.norms.iter().enumerate() {
                writeln!(s, "step {i} norm {}", fixed(*n)).unwrap();
            }
            writeln!(s, "terms {}", out.state.len()).unwrap();
            for (c, a) in out.state.iter() {
                let (state, heads, tapes) = render_configuration(frame, c);
                writeln!(
                    s,
                    "state={state} heads={heads} tape={tapes} amp={},{} prob={}",
                    fixed(a.re),
                    fixed(a.im),
                    fixed(a.norm_sqr())
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: EXIT_PASS,
    })
}

pub fn norm(
    table: &TransitionTable,
    radius: usize,
    iterations: usize,
    seed: u64,
    format: Format,
) -> Result<Outcome, CliError> {
    let stats = table.statistics();
    let bound = norm_bound(&stats, table.frame())?;
    let estimate = estimate_norm_seeded(table, radius, iterations, seed)?;
    let stdout = match format {
        Format::Json => {
            let doc = json!({
                "K": stats.k,
                "bound": bound,
                "estimate": estimate,
                "radius": radius,
                "iterations": iterations,
                "seed": seed,
            });
            serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
        }
        Format::Text => format!(
            "K {}\nbound {}\nestimate {}\nradius {radius} iterations {iterations} seed {seed}\n",
            fixed(stats.k),
            fixed(bound),
            fixed(estimate)
        ),
    };
    Ok(Outcome {
        stdout,
        code: EXIT_PASS,
    })
}

pub fn conditions(k: usize, format: Format) -> Result<Outcome, CliError> {
    if !(1..=6).contains(&k) {
        return Err(CliError::Usage(format!("k must be between 1 and 6, got {k}")));
    }
    let ids = generate_ktape_conditions(k);
    let label = |id: &ConditionId| match id {
        ConditionId::KTape(c) => conventional_label(k, c),
        _ => None,
    };
    let stdout = match format {
        Format::Json => {
            let list: Vec<_> = ids
                .iter()
                .map(|id| {
                    let displacement = match id {
                        ConditionId::KTape(KTapeCondition::Displacement(d)) => Some(d.clone()),
                        _ => None,
                    };
                    json!({ "id": id.to_string(), "displacement": displacement, "label": label(id) })
                })
                .collect();
            let doc = json!({ "k": k, "conditions": list, "total": evaluated_condition_count(k) });
            serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "k {k}").unwrap();
            for id in &ids {
                match label(id) {
                    Some(l) => writeln!(s, "{id} {l}").unwrap(),
                    None => writeln!(s, "{id}").unwrap(),
                }
            }
            writeln!(s, "total {}", evaluated_condition_count(k)).unwrap();
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: EXIT_PASS,
    })
}

fn outcome_json(o: &OracleOutcome, frame: &TuringFrame) -> serde_json::Value {
    let worst = o.worst_pair.as_ref().map(|(a, b)| {
        let (sa, ha, ta) = render_configuration(frame, a);
        let (sb, hb, tb) = render_configuration(frame, b);
        [
            format!("state={sa} heads={ha} tape={ta}"),
            format!("state={sb} heads={hb} tape={tb}"),
        ]
    });
    json!({ "max_deviation": o.max_deviation, "pairs": o.pairs_checked, "worst_pair": worst })
}

pub fn gram(table: &TransitionTable, n: usize, d: i8, tolerance: f64, format: Format) -> Result<Outcome, CliError> {
    let frame = table.frame();
    let window = ConfigurationWindow::new(frame, n, d)?;
    let columns = column_oracle(table, &window)?;
    let rows = if frame.tape_count() == 1 {
        Some(row_oracle(table, &window)?)
    } else {
        None
    };
    let pass = columns.is_identity(tolerance) && rows.as_ref().is_none_or(|r| r.is_identity(tolerance));
    let stdout = match format {
        Format::Json => {
            let doc = json!({
                "window": { "n": n, "d": d, "configurations": window.len() },
                "columns": outcome_json(&columns, frame),
                "rows": rows.as_ref().map(|r| outcome_json(r, frame)),
                "tolerance": tolerance,
                "verdict": if pass { "pass" } else { "fail" },
            });
            serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "window n={n} d={d} configurations={}", window.len()).unwrap();
            let mut side = |name: &str, o: &OracleOutcome| {
                writeln!(
                    s,
                    "{name} pairs={} max_deviation={}",
                    o.pairs_checked,
                    num(o.max_deviation)
                )
                .unwrap();
                if let Some((a, b)) = &o.worst_pair {
                    let (sa, ha, ta) = render_configuration(frame, a);
                    let (sb, hb, tb) = render_configuration(frame, b);
                    writeln!(
                        s,
                        "  worst: state={sa} heads={ha} tape={ta} / state={sb} heads={hb} tape={tb}"
                    )
                    .unwrap();
                }
            };
            side("columns", &columns);
            match &rows {
                Some(r) => side("rows", r),
                None => writeln!(s, "rows skipped (multi-tape)").unwrap(),
            }
            writeln!(s, "verdict {}", if pass { "pass" } else { "fail" }).unwrap();
            s
        }
    };
    Ok(Outcome {
        stdout,
        code: code_for(pass),
    })
}
