//! Turing frames, tapes and configurations.
//!
//! A configuration is a processor state together with one finite-support tape
//! and one head position per tape. Single-tape machines are the `k = 1` case
//! of the same generic types.
//!
//! The two one-step maps used everywhere else live here:
//!
//! * [`alpha`] enters state `p`, writes `τ` under each head and then moves
//!   each head by `d`;
//! * [`beta`] enters state `p`, moves each head by `-d` and then writes `σ`.
//!
//! Restricted to the right classes they are mutually inverse, and the
//! "precedes" relation is exactly the image of `alpha`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QtmError, Result};

/// Head displacement on one tape, always one of `-1`, `0`, `1`.
pub type Move = i8;

pub const MOVES: [Move; 3] = [-1, 0, 1];

pub(crate) fn check_move(d: i64) -> Result<Move> {
    match d {
        -1..=1 => Ok(d as Move),
        _ => Err(QtmError::MoveOutOfRange(d)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<String>,
    blank: usize,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: Vec<S>, blank: usize) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(QtmError::InvalidFrame("alphabet is empty".into()));
        }
        if blank >= symbols.len() {
            return Err(QtmError::InvalidFrame(format!(
                "blank index {blank} outside alphabet of size {}",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(QtmError::InvalidFrame(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Self { symbols, blank })
    }

    /// Alphabet `{B, s1, .., s(n-1)}` with blank `B` at index 0.
    pub fn with_size(n: usize) -> Result<Self> {
        let symbols = (0..n)
            .map(|i| if i == 0 { "B".to_string() } else { format!("s{i}") })
            .collect();
        Self::new(symbols, 0)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }
}

/// The processor states and one alphabet per tape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuringFrame {
    states: Vec<String>,
    alphabets: Vec<Alphabet>,
}

impl TuringFrame {
    pub fn new<S: Into<String>>(states: Vec<S>, alphabets: Vec<Alphabet>) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(QtmError::InvalidFrame("no states".into()));
        }
        if alphabets.is_empty() {
            return Err(QtmError::InvalidFrame("at least one tape is required".into()));
        }
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(QtmError::InvalidFrame(format!("duplicate state {s:?}")));
            }
        }
        Ok(Self { states, alphabets })
    }

    /// Frame with states `0..n_states` and tapes of the given alphabet sizes.
    pub fn with_sizes(n_states: usize, alphabet_sizes: &[usize]) -> Result<Self> {
        let alphabets = alphabet_sizes
            .iter()
            .map(|&n| Alphabet::with_size(n))
            .collect::<Result<Vec<_>>>()?;
        Self::new((0..n_states).map(|i| i.to_string()).collect(), alphabets)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    pub fn alphabet(&self, tape: usize) -> &Alphabet {
        &self.alphabets[tape]
    }

    /// Number of tapes `k`.
    pub fn tape_count(&self) -> usize {
        self.alphabets.len()
    }

    /// `|Σ₁| · … · |Σ_k|`
    pub fn symbol_vector_count(&self) -> usize {
        self.alphabets.iter().map(Alphabet::len).product()
    }

    /// `3^k`
    pub fn move_vector_count(&self) -> usize {
        3usize.pow(self.tape_count() as u32)
    }

    pub fn blanks(&self) -> Vec<usize> {
        self.alphabets.iter().map(Alphabet::blank).collect()
    }

    pub fn check_state(&self, state: usize) -> Result<()> {
        if state < self.state_count() {
            Ok(())
        } else {
            Err(QtmError::StateOutOfRange {
                state,
                count: self.state_count(),
            })
        }
    }

    pub fn check_symbols(&self, symbols: &[usize]) -> Result<()> {
        self.check_len(symbols.len())?;
        for (tape, (&s, a)) in symbols.iter().zip(&self.alphabets).enumerate() {
            if s >= a.len() {
                return Err(QtmError::SymbolOutOfRange {
                    tape,
                    symbol: s,
                    size: a.len(),
                });
            }
        }
        Ok(())
    }

    pub fn check_moves(&self, moves: &[Move]) -> Result<()> {
        self.check_len(moves.len())?;
        for &d in moves {
            check_move(d as i64)?;
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.tape_count() {
            Ok(())
        } else {
            Err(QtmError::DimensionMismatch {
                expected: self.tape_count(),
                actual: len,
            })
        }
    }

    /// Mixed-radix index of a symbol vector, tape 0 most significant.
    pub fn encode_symbols(&self, symbols: &[usize]) -> usize {
        symbols
            .iter()
            .zip(&self.alphabets)
            .fold(0, |acc, (&s, a)| acc * a.len() + s)
    }

    pub fn decode_symbols(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.tape_count()];
        for (slot, a) in out.iter_mut().zip(&self.alphabets).rev() {
            *slot = index % a.len();
            index /= a.len();
        }
        out
    }

    /// Base-3 index of a move vector (digit `d + 1`), tape 0 most significant.
    pub fn encode_moves(&self, moves: &[Move]) -> usize {
        moves.iter().fold(0, |acc, &d| acc * 3 + (d + 1) as usize)
    }

    pub fn decode_moves(&self, mut index: usize) -> Vec<Move> {
        let mut out = vec![0; self.tape_count()];
        for slot in out.iter_mut().rev() {
            *slot = (index % 3) as Move - 1;
            index /= 3;
        }
        out
    }

    /// Checks that `c` lives in this frame's configuration space.
    pub fn check_configuration(&self, c: &Configuration) -> Result<()> {
        self.check_state(c.state)?;
        self.check_len(c.tapes.len())?;
        self.check_len(c.heads.len())?;
        for (tape, a) in c.tapes.iter().zip(&self.alphabets) {
            if tape.blank != a.blank() || tape.size != a.len() {
                return Err(QtmError::FrameMismatch);
            }
        }
        Ok(())
    }

    /// The all-blank configuration with the given state and heads.
    pub fn blank_configuration(&self, state: usize, heads: Vec<i64>) -> Result<Configuration> {
        self.check_state(state)?;
        self.check_len(heads.len())?;
        Ok(Configuration {
            state,
            heads,
            tapes: self.alphabets.iter().map(|a| Tape::blank(a.blank(), a.len())).collect(),
        })
    }
}

/// Tape content with finitely many non-blank cells.
///
/// Blank cells are never stored, so two tapes are equal iff their stored
/// maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tape {
    cells: BTreeMap<i64, usize>,
    blank: usize,
    size: usize,
}

impl Tape {
    pub fn blank(blank: usize, size: usize) -> Self {
        Self {
            cells: BTreeMap::new(),
            blank,
            size,
        }
    }

    pub fn read(&self, cell: i64) -> usize {
        self.cells.get(&cell).copied().unwrap_or(self.blank)
    }

    pub fn blank_symbol(&self) -> usize {
        self.blank
    }

    pub fn alphabet_size(&self) -> usize {
        self.size
    }

    /// Non-blank cells in increasing cell order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.cells.iter().map(|(&c, &s)| (c, s))
    }

    pub fn support_len(&self) -> usize {
        self.cells.len()
    }

    /// Tape reading `symbol` at `cell` and agreeing with `self` elsewhere.
    pub fn write_at(&self, cell: i64, symbol: usize) -> Result<Tape> {
        if symbol >= self.size {
            return Err(QtmError::SymbolOutOfRange {
                tape: 0,
                symbol,
                size: self.size,
            });
        }
        let mut out = self.clone();
        out.set(cell, symbol);
        Ok(out)
    }

    pub(crate) fn set(&mut self, cell: i64, symbol: usize) {
        if symbol == self.blank {
            self.cells.remove(&cell);
        } else {
            self.cells.insert(cell, symbol);
        }
    }

    /// True iff the two tapes agree on every cell except possibly `except`.
    pub fn agrees_off(&self, other: &Tape, except: &[i64]) -> bool {
        let keys = self.cells.keys().chain(other.cells.keys());
        keys.filter(|m| !except.contains(m))
            .all(|&m| self.read(m) == other.read(m))
    }

    /// Cells at which the two tapes differ.
    pub fn differing_cells(&self, other: &Tape) -> Vec<i64> {
        let mut cells: Vec<i64> = self
            .cells
            .keys()
            .chain(other.cells.keys())
            .copied()
            .filter(|&m| self.read(m) != other.read(m))
            .collect();
        cells.sort_unstable();
        cells.dedup();
        cells
    }

    /// Same content moved `offset` cells to the right.
    pub fn translated(&self, offset: i64) -> Tape {
        Tape {
            cells: self.cells.iter().map(|(&c, &s)| (c + offset, s)).collect(),
            blank: self.blank,
            size: self.size,
        }
    }

    fn same_alphabet(&self, other: &Tape) -> bool {
        self.blank == other.blank && self.size == other.size
    }
}

/// `(q, T⃗, ξ⃗)`: processor state, one tape and one head position per tape.
///
/// Ordering is lexicographic on state, then head vector, then tape contents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub state: usize,
    pub heads: Vec<i64>,
    pub tapes: Vec<Tape>,
}

impl Configuration {
    pub fn tape_count(&self) -> usize {
        self.tapes.len()
    }

    /// Symbols currently under the heads, `T⃗(ξ⃗)`.
    pub fn scanned(&self) -> Vec<usize> {
        self.tapes.iter().zip(&self.heads).map(|(t, &h)| t.read(h)).collect()
    }

    /// Membership in the class of configurations with state `p` whose tape
    /// `i` holds `tau[i]` at cell `ξᵢ - dᵢ`.
    pub fn in_class(&self, p: usize, tau: &[usize], d: &[Move]) -> bool {
        self.state == p
            && self
                .tapes
                .iter()
                .zip(&self.heads)
                .zip(tau.iter().zip(d))
                .all(|((t, &h), (&s, &m))| t.read(h - m as i64) == s)
    }

    /// Shifts every tape and head on tape `i` by `offsets[i]`.
    pub fn translated(&self, offsets: &[i64]) -> Configuration {
        Configuration {
            state: self.state,
            heads: self.heads.iter().zip(offsets).map(|(h, o)| h + o).collect(),
            tapes: self.tapes.iter().zip(offsets).map(|(t, &o)| t.translated(o)).collect(),
        }
    }

    fn check_compatible(&self, other: &Configuration) -> Result<()> {
        if self.tapes.len() != other.tapes.len()
            || self.heads.len() != other.heads.len()
            || self.tapes.iter().zip(&other.tapes).any(|(a, b)| !a.same_alphabet(b))
        {
            return Err(QtmError::FrameMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.state)?;
        for (i, (t, h)) in self.tapes.iter().zip(&self.heads).enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "@{h} {{")?;
            for (j, (c, s)) in t.cells().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}:{s}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

fn check_step_args(frame: &TuringFrame, p: usize, symbols: &[usize], d: &[Move], c: &Configuration) -> Result<()> {
    frame.check_state(p)?;
    frame.check_symbols(symbols)?;
    frame.check_moves(d)?;
    frame.check_configuration(c)
}

/// `α(p, τ⃗, d⃗)`: enter `p`, write `τᵢ` under head `i`, then move it by `dᵢ`.
pub fn alpha(frame: &TuringFrame, p: usize, tau: &[usize], d: &[Move], c: &Configuration) -> Result<Configuration> {
    check_step_args(frame, p, tau, d, c)?;
    Ok(alpha_unchecked(p, tau, d, c))
}

pub(crate) fn alpha_unchecked(p: usize, tau: &[usize], d: &[Move], c: &Configuration) -> Configuration {
    let mut tapes = c.tapes.clone();
    let mut heads = c.heads.clone();
    for i in 0..tapes.len() {
        tapes[i].set(heads[i], tau[i]);
        heads[i] += d[i] as i64;
    }
    Configuration { state: p, heads, tapes }
}

/// `β(p, σ⃗, d⃗)`: enter `p`, move head `i` by `-dᵢ`, then write `σᵢ` there.
pub fn beta(frame: &TuringFrame, p: usize, sigma: &[usize], d: &[Move], c: &Configuration) -> Result<Configuration> {
    check_step_args(frame, p, sigma, d, c)?;
    Ok(beta_unchecked(p, sigma, d, c))
}

pub(crate) fn beta_unchecked(p: usize, sigma: &[usize], d: &[Move], c: &Configuration) -> Configuration {
    let mut tapes = c.tapes.clone();
    let mut heads = c.heads.clone();
    for i in 0..tapes.len() {
        heads[i] -= d[i] as i64;
        tapes[i].set(heads[i], sigma[i]);
    }
    Configuration { state: p, heads, tapes }
}

/// One-step reachability: on every tape the content agrees off the old head
/// cell and the head moved by at most one.
pub fn precedes(c: &Configuration, c_prime: &Configuration) -> Result<bool> {
    c.check_compatible(c_prime)?;
    Ok(c.tapes
        .iter()
        .zip(&c.heads)
        .zip(c_prime.tapes.iter().zip(&c_prime.heads))
        .all(|((t, &h), (t2, &h2))| (h2 - h).abs() <= 1 && t.agrees_off(t2, &[h])))
}

/// Same state and the same three symbols around the head. Single tape only.
pub fn locally_like(c: &Configuration, c_prime: &Configuration) -> Result<bool> {
    c.check_compatible(c_prime)?;
    if c.tape_count() != 1 {
        return Err(QtmError::UnsupportedTapeCount {
            required: "exactly one tape",
            actual: c.tape_count(),
        });
    }
    let (t, h) = (&c.tapes[0], c.heads[0]);
    let (t2, h2) = (&c_prime.tapes[0], c_prime.heads[0]);
    Ok(c.state == c_prime.state && (-1..=1).all(|d| t.read(h + d) == t2.read(h2 + d)))
}
