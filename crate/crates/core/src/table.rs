//! Dense amplitude tables for local transition functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QtmError, Result};
use crate::model::{Move, TuringFrame};

/// One argument tuple `(q, σ⃗, p, τ⃗, d⃗)` of the transition function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub q: usize,
    pub read: Vec<usize>,
    pub p: usize,
    pub write: Vec<usize>,
    pub moves: Vec<Move>,
}

impl Transition {
    pub fn new(q: usize, read: Vec<usize>, p: usize, write: Vec<usize>, moves: Vec<Move>) -> Self {
        Self {
            q,
            read,
            p,
            write,
            moves,
        }
    }
}

/// `δ` stored densely over `Q × Σ⃗ × Q × Σ⃗ × {-1,0,1}^k`; unset entries are 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionTable {
    frame: TuringFrame,
    amplitudes: Vec<Complex64>,
}

impl TransitionTable {
    pub fn zeros(frame: TuringFrame) -> Self {
        let n = frame.state_count();
        let s = frame.symbol_vector_count();
        let m = frame.move_vector_count();
        Self {
            amplitudes: vec![Complex64::new(0.0, 0.0); n * s * n * s * m],
            frame,
        }
    }

    /// Builds a table from `(transition, amplitude)` pairs; later pairs
    /// overwrite earlier ones.
    pub fn from_entries<I>(frame: TuringFrame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Transition, Complex64)>,
    {
        let mut table = Self::zeros(frame);
        for (t, a) in entries {
            table.set(&t, a)?;
        }
        Ok(table)
    }

    /// `δ(q, σ⃗, q, σ⃗, 0⃗) = 1`, everything else 0.
    pub fn identity(frame: TuringFrame) -> Self {
        let mut table = Self::zeros(frame);
        let stay = table.frame.encode_moves(&vec![0; table.frame.tape_count()]);
        for q in 0..table.frame.state_count() {
            for s in 0..table.frame.symbol_vector_count() {
                let i = table.flat(q, s, q, s, stay);
                table.amplitudes[i] = Complex64::new(1.0, 0.0);
            }
        }
        table
    }

    pub fn frame(&self) -> &TuringFrame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub(crate) fn flat(&self, q: usize, s: usize, p: usize, t: usize, m: usize) -> usize {
        let nq = self.frame.state_count();
        let ns = self.frame.symbol_vector_count();
        let nm = self.frame.move_vector_count();
        (((q * ns + s) * nq + p) * ns + t) * nm + m
    }

    /// Lookup by encoded symbol and move vectors; no bounds checks beyond the
    /// slice index.
    #[inline]
    pub fn at(&self, q: usize, s: usize, p: usize, t: usize, m: usize) -> Complex64 {
        self.amplitudes[self.flat(q, s, p, t, m)]
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Contiguous block `δ(q, s, ·, ·, ·)` laid out as `(p, t, m)`.
    pub(crate) fn row(&self, q: usize, s: usize) -> &[Complex64] {
        let width = self.frame.state_count() * self.frame.symbol_vector_count() * self.frame.move_vector_count();
        let start = self.flat(q, s, 0, 0, 0);
        &self.amplitudes[start..start + width]
    }

    fn check_transition(&self, t: &Transition) -> Result<()> {
        self.frame.check_state(t.q)?;
        self.frame.check_state(t.p)?;
        self.frame.check_symbols(&t.read)?;
        self.frame.check_symbols(&t.write)?;
        self.frame.check_moves(&t.moves)
    }

    pub(crate) fn flat_of(&self, t: &Transition) -> usize {
        self.flat(
            t.q,
            self.frame.encode_symbols(&t.read),
            t.p,
            self.frame.encode_symbols(&t.write),
            self.frame.encode_moves(&t.moves),
        )
    }

    pub fn amplitude(&self, q: usize, read: &[usize], p: usize, write: &[usize], moves: &[Move]) -> Result<Complex64> {
        let t = Transition::new(q, read.to_vec(), p, write.to_vec(), moves.to_vec());
        self.get(&t)
    }

    pub fn get(&self, t: &Transition) -> Result<Complex64> {
        self.check_transition(t)?;
        Ok(self.amplitudes[self.flat_of(t)])
    }

    pub fn set(&mut self, t: &Transition, amplitude: Complex64) -> Result<()> {
        self.check_transition(t)?;
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(QtmError::NonFiniteAmplitude);
        }
        let i = self.flat_of(t);
        self.amplitudes[i] = amplitude;
        Ok(())
    }

    pub fn transition_at(&self, flat: usize) -> Transition {
        let nq = self.frame.state_count();
        let ns = self.frame.symbol_vector_count();
        let nm = self.frame.move_vector_count();
        let m = flat % nm;
        let rest = flat / nm;
        let t = rest % ns;
        let rest = rest / ns;
        let p = rest % nq;
        let rest = rest / nq;
        let s = rest % ns;
        let q = rest / ns;
        Transition::new(
            q,
            self.frame.decode_symbols(s),
            p,
            self.frame.decode_symbols(t),
            self.frame.decode_moves(m),
        )
    }

    /// Nonzero entries in index order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Transition, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
            .map(|(i, &a)| (self.transition_at(i), a))
    }

    pub fn statistics(&self) -> AmplitudeStatistics {
        compute_statistics(self)
    }
}

/// Outgoing squared norms per `(q, σ⃗)` and their maximal square root `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeStatistics {
    pub k: f64,
    /// Indexed by `q * |Σ⃗| + σ⃗`.
    pub row_sums: Vec<f64>,
}

pub fn compute_statistics(table: &TransitionTable) -> AmplitudeStatistics {
    let frame = table.frame();
    let row_sums: Vec<f64> = (0..frame.state_count())
        .flat_map(|q| (0..frame.symbol_vector_count()).map(move |s| (q, s)))
        .map(|(q, s)| table.row(q, s).iter().fold(0.0, |acc, a| acc + a.norm_sqr()))
        .collect();
    let k = row_sums.iter().fold(0.0f64, |acc, &r| acc.max(r.sqrt()));
    AmplitudeStatistics { k, row_sums }
}

/// `√5 · K · |Q| · |Σ|²`, the operator-norm bound for single-tape tables.
pub fn norm_bound(stats: &AmplitudeStatistics, frame: &TuringFrame) -> Result<f64> {
    if frame.tape_count() != 1 {
        return Err(QtmError::UnsupportedTapeCount {
            required: "exactly one tape",
            actual: frame.tape_count(),
        });
    }
    let sigma = frame.alphabet(0).len() as f64;
    Ok(5f64.sqrt() * stats.k * frame.state_count() as f64 * sigma * sigma)
}

/// True iff every entered state `p` is reached with a single move vector
/// across all nonzero amplitudes.
pub fn is_unidirectional(table: &TransitionTable) -> bool {
    let frame = table.frame();
    let (nq, ns, nm) = (
        frame.state_count(),
        frame.symbol_vector_count(),
        frame.move_vector_count(),
    );
    (0..nq).all(|p| {
        let mut seen: Option<usize> = None;
        for q in 0..nq {
            for s in 0..ns {
                for t in 0..ns {
                    for m in 0..nm {
                        if table.at(q, s, p, t, m) != Complex64::new(0.0, 0.0) {
                            match seen {
                                None => seen = Some(m),
                                Some(prev) if prev != m => return false,
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::counterexample;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn counterexample_lookups() {
        let t = counterexample();
        assert_eq!(t.amplitude(0, &[0], 0, &[0], &[0]).unwrap(), c(0.5));
        assert_eq!(t.amplitude(0, &[0], 0, &[0], &[-1]).unwrap(), c(0.0));
        assert_eq!(t.amplitude(1, &[0], 1, &[0], &[0]).unwrap(), c(-0.5));
    }

    #[test]
    fn unset_entries_are_zero_and_bad_indices_fail() {
        let t = TransitionTable::zeros(TuringFrame::with_sizes(2, &[2]).unwrap());
        assert_eq!(t.amplitude(1, &[1], 0, &[1], &[1]).unwrap(), c(0.0));
        assert!(t.amplitude(2, &[0], 0, &[0], &[0]).is_err());
        assert!(t.amplitude(0, &[2], 0, &[0], &[0]).is_err());
        assert!(t.amplitude(0, &[0], 0, &[0], &[2]).is_err());
        assert!(t.amplitude(0, &[0, 0], 0, &[0], &[0]).is_err());
    }

    #[test]
    fn set_rejects_non_finite() {
        let mut t = TransitionTable::zeros(TuringFrame::with_sizes(1, &[1]).unwrap());
        let tr = Transition::new(0, vec![0], 0, vec![0], vec![0]);
        assert_eq!(
            t.set(&tr, Complex64::new(f64::NAN, 0.0)),
            Err(QtmError::NonFiniteAmplitude)
        );
        assert_eq!(
            t.set(&tr, Complex64::new(0.0, f64::INFINITY)),
            Err(QtmError::NonFiniteAmplitude)
        );
    }

    #[test]
    fn transition_index_roundtrip() {
        let t = TransitionTable::zeros(TuringFrame::with_sizes(2, &[2, 3]).unwrap());
        for i in (0..t.len()).step_by(7) {
            assert_eq!(t.flat_of(&t.transition_at(i)), i);
        }
    }

    #[test]
    fn statistics_cases() {
        assert!((compute_statistics(&counterexample()).k - 1.0).abs() < 1e-12);
        let zero = TransitionTable::zeros(TuringFrame::with_sizes(2, &[2]).unwrap());
        assert_eq!(compute_statistics(&zero).k, 0.0);

        let mut single = zero.clone();
        single
            .set(&Transition::new(1, vec![0], 0, vec![1], vec![1]), c(2.0))
            .unwrap();
        let stats = compute_statistics(&single);
        assert_eq!(stats.k, 2.0);
        assert_eq!(stats.row_sums, vec![0.0, 0.0, 4.0, 0.0]);
    }

    #[test]
    fn norm_bound_cases() {
        let id = TransitionTable::identity(TuringFrame::with_sizes(1, &[1]).unwrap());
        let b = norm_bound(&id.statistics(), id.frame()).unwrap();
        assert!((b - 5f64.sqrt()).abs() < 1e-15);

        let ce = counterexample();
        let b = norm_bound(&ce.statistics(), ce.frame()).unwrap();
        assert!((b - 2.0 * 5f64.sqrt()).abs() < 1e-12);

        let zero = TransitionTable::zeros(TuringFrame::with_sizes(3, &[2]).unwrap());
        assert_eq!(norm_bound(&zero.statistics(), zero.frame()).unwrap(), 0.0);

        let two = TransitionTable::identity(TuringFrame::with_sizes(1, &[1, 1]).unwrap());
        assert!(norm_bound(&two.statistics(), two.frame()).is_err());
    }

    #[test]
    fn unidirectional_cases() {
        assert!(!is_unidirectional(&counterexample()));
        assert!(is_unidirectional(&TransitionTable::identity(
            TuringFrame::with_sizes(2, &[3]).unwrap()
        )));
        assert!(is_unidirectional(&TransitionTable::identity(
            TuringFrame::with_sizes(2, &[2, 2]).unwrap()
        )));
    }
}
