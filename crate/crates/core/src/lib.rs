//! Quantum Turing machines: configurations, local transition functions,
//! unitarity checkers, a sparse simulator and a brute-force Gram oracle.

pub mod conditions;
pub mod error;
pub mod evolution;
pub mod exec;
pub mod machines;
pub mod model;
pub mod oracle;
pub mod table;

pub use conditions::{check, Checker, ConditionId, ConditionResidual, ValidationReport, Verdict, DEFAULT_TOLERANCE};
pub use error::{QtmError, Result};
pub use evolution::{apply, apply_adjoint, run, Guard, RunOutput, Superposition};
pub use model::{Alphabet, Configuration, Move, Tape, TuringFrame};
pub use table::{Transition, TransitionTable};
