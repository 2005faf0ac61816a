//! Unitarity conditions on local transition functions.
//!
//! Every checker reports one [`ConditionResidual`] per condition family: the
//! maximum over the family's parameter tuples of `|sum - 1|` for
//! normalization conditions and `|sum|` for orthogonality conditions. The
//! verdict passes iff every residual is within the tolerance.
//!
//! * [`check_column`]: orthonormal columns of the evolution operator, single tape.
//! * [`check_row`]: orthonormal rows, single tape.
//! * [`check_hirvensalo`]: a sufficient but not necessary set, single tape.
//! * [`check_two_tape`]: the fourteen two-tape conditions, written out.
//! * [`check_ktape`]: conditions generated from head-displacement vectors for
//!   any number of tapes.

mod column;
mod hirvensalo;
mod ktape;
mod row;
mod two_tape;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use column::check_column;
pub use hirvensalo::check_hirvensalo;
pub use ktape::{
    check_ktape, conventional_label, displacement_vectors, evaluate_ktape_condition, evaluated_condition_count,
    generate_ktape_conditions,
};
pub use row::check_row;
pub use two_tape::check_two_tape;

use crate::error::{QtmError, Result};
use crate::exec;
use crate::model::Move;
use crate::table::TransitionTable;

/// Default verdict threshold.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Head-displacement vector `Δ⃗ = d⃗ - d⃗'` with entries in `{0, ±1, ±2}`.
pub type Displacement = Vec<i8>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KTapeCondition {
    /// Outgoing amplitude vectors have unit norm.
    Normalization,
    /// Cross terms between configurations whose heads differ by the vector.
    /// The zero vector is the pairwise orthogonality condition.
    Displacement(Displacement),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    /// `'a'..='d'`
    Column(char),
    /// `'a'..='f'`
    Row(char),
    /// `'a'..='d'`
    Hirvensalo(char),
    /// `1..=14`
    TwoTape(u8),
    KTape(KTapeCondition),
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionId::Column(c) => write!(f, "column-{c}"),
            ConditionId::Row(c) => write!(f, "row-{c}"),
            ConditionId::Hirvensalo(c) => write!(f, "hirvensalo-{c}"),
            ConditionId::TwoTape(n) => write!(f, "two-tape-{n}"),
            ConditionId::KTape(KTapeCondition::Normalization) => write!(f, "ktape-norm"),
            ConditionId::KTape(KTapeCondition::Displacement(d)) => {
                write!(f, "ktape-(")?;
                for (i, x) in d.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessValue {
    State(usize),
    Symbol(usize),
    Symbols(Vec<usize>),
    Move(Move),
}

/// Parameter tuple attaining a residual, as named fields.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Witness {
    pub fields: Vec<(String, WitnessValue)>,
}

impl Witness {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn state(mut self, name: &str, q: usize) -> Self {
        self.fields.push((name.to_string(), WitnessValue::State(q)));
        self
    }

    pub(crate) fn symbol(mut self, name: &str, s: usize) -> Self {
        self.fields.push((name.to_string(), WitnessValue::Symbol(s)));
        self
    }

    pub(crate) fn symbols(mut self, name: &str, s: Vec<usize>) -> Self {
        self.fields.push((name.to_string(), WitnessValue::Symbols(s)));
        self
    }

    pub(crate) fn movement(mut self, name: &str, d: Move) -> Self {
        self.fields.push((name.to_string(), WitnessValue::Move(d)));
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match v {
                WitnessValue::State(x) | WitnessValue::Symbol(x) => write!(f, "{name}={x}")?,
                WitnessValue::Move(x) => write!(f, "{name}={x}")?,
                WitnessValue::Symbols(xs) => {
                    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                    write!(f, "{name}=({})", parts.join(","))?
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResidual {
    pub id: ConditionId,
    pub residual: f64,
    /// `None` when the condition quantifies over an empty set.
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub residuals: Vec<ConditionResidual>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ValidationReport {
    pub fn new(residuals: Vec<ConditionResidual>, tolerance: f64) -> Self {
        let verdict = if residuals.iter().all(|r| r.residual <= tolerance) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            residuals,
            tolerance,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn get(&self, id: &ConditionId) -> Option<&ConditionResidual> {
        self.residuals.iter().find(|r| &r.id == id)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |acc, r| acc.max(r.residual))
    }
}

/// Which checker to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Checker {
    Column,
    Row,
    Hirvensalo,
    TwoTape,
    KTape,
    /// Column for one tape, two-tape for two, generated otherwise.
    Auto,
}

pub fn check(table: &TransitionTable, checker: Checker, tolerance: f64) -> Result<ValidationReport> {
    match checker {
        Checker::Column => check_column(table, tolerance),
        Checker::Row => check_row(table, tolerance),
        Checker::Hirvensalo => check_hirvensalo(table, tolerance),
        Checker::TwoTape => check_two_tape(table, tolerance),
        Checker::KTape => check_ktape(table, tolerance),
        Checker::Auto => match table.frame().tape_count() {
            1 => check_column(table, tolerance),
            2 => check_two_tape(table, tolerance),
            _ => check_ktape(table, tolerance),
        },
    }
}

pub(crate) fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_finite() && tolerance >= 0.0 {
        Ok(())
    } else {
        Err(QtmError::InvalidArgument(format!(
            "tolerance {tolerance} must be finite and nonnegative"
        )))
    }
}

pub(crate) fn require_tapes(table: &TransitionTable, k: usize, required: &'static str) -> Result<()> {
    let actual = table.frame().tape_count();
    if actual == k {
        Ok(())
    } else {
        Err(QtmError::UnsupportedTapeCount { required, actual })
    }
}

/// Maximum of `residual(i)` over `0..n` with the witness of the first
/// maximizing index; excluded tuples return `None`.
pub(crate) fn evaluate<R, W>(id: ConditionId, n: usize, residual: R, witness: W) -> ConditionResidual
where
    R: Fn(usize) -> Option<f64> + Sync + Send,
    W: Fn(usize) -> Witness,
{
    match exec::argmax(n, residual) {
        Some((r, i)) => ConditionResidual {
            id,
            residual: r,
            witness: Some(witness(i)),
        },
        None => ConditionResidual {
            id,
            residual: 0.0,
            witness: None,
        },
    }
}

/// Splits `index` into digits of the given radices, most significant first.
pub(crate) fn digits<const N: usize>(mut index: usize, radices: [usize; N]) -> [usize; N] {
    let mut out = [0; N];
    for i in (0..N).rev() {
        out[i] = index % radices[i];
        index /= radices[i];
    }
    out
}

#[inline]
pub(crate) fn cross(a: Complex64, b: Complex64) -> Complex64 {
    a.conj() * b
}
