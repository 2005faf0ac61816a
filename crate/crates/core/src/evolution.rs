//! Sparse simulation of the evolution operator and its adjoint.
//!
//! A basis configuration `|q, T⃗, ξ⃗⟩` maps to
//! `Σ_{p,τ⃗,d⃗} δ(q, T⃗(ξ⃗), p, τ⃗, d⃗) |p, T⃗ with τ⃗ written at ξ⃗, ξ⃗ + d⃗⟩`,
//! and the adjoint maps `|p, T⃗, ξ⃗⟩` to
//! `Σ_{q,σ⃗,d⃗} δ(q, σ⃗, p, T⃗(ξ⃗ − d⃗), d⃗)* |q, T⃗ with σ⃗ written at ξ⃗ − d⃗, ξ⃗ − d⃗⟩`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditions::{check, Checker};
use crate::error::{QtmError, Result};
use crate::exec;
use crate::model::{alpha_unchecked, beta_unchecked, precedes, Configuration, Move, TuringFrame};
use crate::table::TransitionTable;

/// Amplitudes below this modulus are dropped after accumulation.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Finite superposition of configurations, kept in configuration order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Superposition {
    terms: BTreeMap<Configuration, Complex64>,
}

impl Superposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(c: Configuration) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(c, Complex64::new(1.0, 0.0));
        Self { terms }
    }

    /// Sums amplitudes of repeated configurations, then prunes.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Configuration, Complex64)>,
    {
        let mut out = BTreeMap::new();
        for (c, a) in terms {
            *out.entry(c).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        out.retain(|_, a: &mut Complex64| a.norm() >= PRUNE_THRESHOLD);
        Self { terms: out }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, c: &Configuration) -> Complex64 {
        self.terms.get(c).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &Complex64)> {
        self.terms.iter()
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, a| acc + a.norm_sqr()).sqrt()
    }

    /// `⟨self | other⟩`
    pub fn inner(&self, other: &Superposition) -> Complex64 {
        let (small, large, flip) = if self.len() <= other.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        small
            .terms
            .iter()
            .filter_map(|(c, &a)| {
                large
                    .terms
                    .get(c)
                    .map(|&b| if flip { b.conj() * a } else { a.conj() * b })
            })
            .sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Superposition {
        Self::from_terms(self.terms.iter().map(|(c, &a)| (c.clone(), a * factor)))
    }

    pub fn plus(&self, other: &Superposition) -> Superposition {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(c, &a)| (c.clone(), a)),
        )
    }

    /// Largest termwise difference `max_C |self(C) − other(C)|`.
    pub fn max_difference(&self, other: &Superposition) -> f64 {
        let keys = self.terms.keys().chain(other.terms.keys());
        keys.map(|c| (self.amplitude(c) - other.amplitude(c)).norm())
            .fold(0.0, f64::max)
    }

    fn check_frame(&self, frame: &TuringFrame) -> Result<()> {
        self.terms.keys().try_for_each(|c| frame.check_configuration(c))
    }
}

impl FromIterator<(Configuration, Complex64)> for Superposition {
    fn from_iter<I: IntoIterator<Item = (Configuration, Complex64)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

/// Decoded symbol and move vectors, indexed by their encodings.
struct Codebook {
    symbols: Vec<Vec<usize>>,
    moves: Vec<Vec<Move>>,
}

impl Codebook {
    fn new(frame: &TuringFrame) -> Self {
        Self {
            symbols: (0..frame.symbol_vector_count())
                .map(|i| frame.decode_symbols(i))
                .collect(),
            moves: (0..frame.move_vector_count()).map(|i| frame.decode_moves(i)).collect(),
        }
    }
}

fn forward_terms(
    table: &TransitionTable,
    book: &Codebook,
    c: &Configuration,
    coef: Complex64,
) -> Vec<(Configuration, Complex64)> {
    let f = table.frame();
    let s = f.encode_symbols(&c.scanned());
    let mut out = Vec::new();
    for p in 0..f.state_count() {
        for (t, tau) in book.symbols.iter().enumerate() {
            for (m, d) in book.moves.iter().enumerate() {
                let a = table.at(c.state, s, p, t, m);
                if a != Complex64::new(0.0, 0.0) {
                    out.push((alpha_unchecked(p, tau, d, c), a * coef));
                }
            }
        }
    }
    out
}

fn adjoint_terms(
    table: &TransitionTable,
    book: &Codebook,
    c: &Configuration,
    coef: Complex64,
) -> Vec<(Configuration, Complex64)> {
    let f = table.frame();
    let mut out = Vec::new();
    for (m, d) in book.moves.iter().enumerate() {
        let back: Vec<usize> = c
            .tapes
            .iter()
            .zip(&c.heads)
            .zip(d)
            .map(|((tape, &h), &di)| tape.read(h - di as i64))
            .collect();
        let t = f.encode_symbols(&back);
        for q in 0..f.state_count() {
            for (s, sigma) in book.symbols.iter().enumerate() {
                let a = table.at(q, s, c.state, t, m);
                if a != Complex64::new(0.0, 0.0) {
                    out.push((beta_unchecked(q, sigma, d, c), a.conj() * coef));
                }
            }
        }
    }
    out
}

/// Expands every input term independently, then merges in input order so
/// the accumulation order does not depend on scheduling.
fn expand<F>(psi: &Superposition, f: F) -> Superposition
where
    F: Fn(&Configuration, Complex64) -> Vec<(Configuration, Complex64)> + Sync + Send,
{
    let inputs: Vec<(&Configuration, Complex64)> = psi.terms.iter().map(|(c, &a)| (c, a)).collect();
    let parts = exec::map_slice(&inputs, |&(c, a)| f(c, a));
    Superposition::from_terms(parts.into_iter().flatten())
}

/// `M_δ |ψ⟩`
pub fn apply(table: &TransitionTable, psi: &Superposition) -> Result<Superposition> {
    psi.check_frame(table.frame())?;
    let book = Codebook::new(table.frame());
    Ok(expand(psi, |c, a| forward_terms(table, &book, c, a)))
}

/// `M_δ† |ψ⟩` for single-tape tables.
pub fn apply_adjoint(table: &TransitionTable, psi: &Superposition) -> Result<Superposition> {
    if table.frame().tape_count() != 1 {
        return Err(QtmError::UnsupportedTapeCount {
            required: "exactly one tape (use apply_adjoint_multi_tape)",
            actual: table.frame().tape_count(),
        });
    }
    apply_adjoint_multi_tape(table, psi)
}

/// The adjoint expansion applied componentwise to any number of tapes.
pub fn apply_adjoint_multi_tape(table: &TransitionTable, psi: &Superposition) -> Result<Superposition> {
    psi.check_frame(table.frame())?;
    let book = Codebook::new(table.frame());
    Ok(expand(psi, |c, a| adjoint_terms(table, &book, c, a)))
}

/// `⟨c' | M_δ | c⟩`
pub fn matrix_element(table: &TransitionTable, c: &Configuration, c_prime: &Configuration) -> Result<Complex64> {
    let f = table.frame();
    f.check_configuration(c)?;
    f.check_configuration(c_prime)?;
    if !precedes(c, c_prime)? {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let read = c.scanned();
    let written: Vec<usize> = c_prime.tapes.iter().zip(&c.heads).map(|(t, &h)| t.read(h)).collect();
    let moves: Vec<Move> = c_prime
        .heads
        .iter()
        .zip(&c.heads)
        .map(|(a, b)| (a - b) as Move)
        .collect();
    table.amplitude(c.state, &read, c_prime.state, &written, &moves)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Guard {
    /// Refuse to run tables that fail the default checker for their tape count.
    Validate {
        tolerance: f64,
    },
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub state: Superposition,
    /// Norm before the first step and after each step.
    pub norms: Vec<f64>,
}

/// `steps`-fold application of the evolution operator. Norms are recorded,
/// never corrected.
pub fn run(table: &TransitionTable, initial: &Superposition, steps: usize, guard: Guard) -> Result<RunOutput> {
    if let Guard::Validate { tolerance } = guard {
        let report = check(table, Checker::Auto, tolerance)?;
        if !report.passed() {
            return Err(QtmError::InvalidTable(report.max_residual()));
        }
    }
    initial.check_frame(table.frame())?;
    let book = Codebook::new(table.frame());
    let mut state = initial.clone();
    let mut norms = Vec::with_capacity(steps + 1);
    norms.push(state.norm());
    for _ in 0..steps {
        state = expand(&state, |c, a| forward_terms(table, &book, c, a));
        norms.push(state.norm());
    }
    Ok(RunOutput { state, norms })
}

/// Single-tape configurations with every non-blank cell and the head inside
/// `[-radius, radius]`, in configuration order.
pub fn radius_window(frame: &TuringFrame, radius: i64) -> Result<Vec<Configuration>> {
    if frame.tape_count() != 1 {
        return Err(QtmError::UnsupportedTapeCount {
            required: "exactly one tape",
            actual: frame.tape_count(),
        });
    }
    let width = (2 * radius + 1) as u32;
    let sigma = frame.alphabet(0).len();
    let tapes = sigma.pow(width);
    let mut out = Vec::with_capacity(frame.state_count() * width as usize * tapes);
    for q in 0..frame.state_count() {
        for h in -radius..=radius {
            let base = frame.blank_configuration(q, vec![h])?;
            for mut code in 0..tapes {
                let mut c = base.clone();
                for cell in -radius..=radius {
                    c.tapes[0].set(cell, code % sigma);
                    code /= sigma;
                }
                out.push(c);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Power-iteration estimate of the norm of the evolution operator
/// compressed to [`radius_window`]. The estimate never exceeds the true
/// operator norm.
pub fn estimate_norm(table: &TransitionTable, window_radius: usize, iterations: usize) -> Result<f64> {
    estimate_norm_seeded(table, window_radius, iterations, 0)
}

pub fn estimate_norm_seeded(
    table: &TransitionTable,
    window_radius: usize,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    if window_radius == 0 || iterations == 0 {
        return Err(QtmError::InvalidArgument(
            "window radius and iteration count must be positive".into(),
        ));
    }
    let window = radius_window(table.frame(), window_radius as i64)?;
    let index: HashMap<&Configuration, usize> = window.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let n = window.len();
    let book = Codebook::new(table.frame());

    // columns[j]: image of window[j] restricted to the window
    let columns: Vec<Vec<(usize, Complex64)>> = exec::map_slice(&window, |c| {
        let mut col: Vec<(usize, Complex64)> = forward_terms(table, &book, c, Complex64::new(1.0, 0.0))
            .into_iter()
            .filter_map(|(img, a)| index.get(&img).map(|&i| (i, a)))
            .collect();
        col.sort_by_key(|&(i, _)| i);
        col
    });
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); n];
    for (j, col) in columns.iter().enumerate() {
        for &(i, a) in col {
            rows[i].push((j, a));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(0.5..1.5), rng.gen_range(-0.5..0.5)))
        .collect();
    let mut best = 0.0f64;
    for _ in 0..iterations {
        let len = l2(&v);
        if len == 0.0 {
            break;
        }
        v.iter_mut().for_each(|x| *x /= len);
        let image = exec::map_slice(&rows, |row| row.iter().map(|&(j, a)| a * v[j]).sum::<Complex64>());
        best = best.max(l2(&image));
        v = exec::map_slice(&columns, |col| {
            col.iter().map(|&(i, a)| a.conj() * image[i]).sum::<Complex64>()
        });
    }
    Ok(best)
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |acc, a| acc + a.norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::counterexample;
    use crate::model::TuringFrame;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn blank(frame: &TuringFrame, q: usize, h: i64) -> Configuration {
        frame.blank_configuration(q, vec![h]).unwrap()
    }

    #[test]
    fn counterexample_one_step() {
        let t = counterexample();
        let f = t.frame().clone();
        let out = apply(&t, &Superposition::basis(blank(&f, 0, 0))).unwrap();
        let expected = Superposition::from_terms([
            (blank(&f, 0, 0), c(0.5)),
            (blank(&f, 0, 1), c(-0.5)),
            (blank(&f, 1, -1), c(0.5)),
            (blank(&f, 1, 0), c(0.5)),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn counterexample_adjoint_one_step() {
        let t = counterexample();
        let f = t.frame().clone();
        let out = apply_adjoint(&t, &Superposition::basis(blank(&f, 0, 0))).unwrap();
        // δ(q,B,0,B,d)* at head −d: d=0 gives (0,0):1/2 and (1,0):1/2,
        // d=1 gives (0,−1):−1/2 and (1,−1):1/2
        let expected = Superposition::from_terms([
            (blank(&f, 0, 0), c(0.5)),
            (blank(&f, 1, 0), c(0.5)),
            (blank(&f, 0, -1), c(-0.5)),
            (blank(&f, 1, -1), c(0.5)),
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn matrix_element_cases() {
        let t = counterexample();
        let f = t.frame().clone();
        assert_eq!(matrix_element(&t, &blank(&f, 0, 0), &blank(&f, 1, -1)).unwrap(), c(0.5));
        assert_eq!(matrix_element(&t, &blank(&f, 0, 0), &blank(&f, 1, 2)).unwrap(), c(0.0));
    }

    #[test]
    fn identity_run_is_stationary() {
        let f = TuringFrame::with_sizes(2, &[2]).unwrap();
        let t = TransitionTable::identity(f.clone());
        let start = Superposition::from_terms([
            (blank(&f, 0, 0), Complex64::new(0.6, 0.0)),
            (blank(&f, 1, 3), Complex64::new(0.0, 0.8)),
        ]);
        let out = run(&t, &start, 7, Guard::Validate { tolerance: 1e-9 }).unwrap();
        assert_eq!(out.state, start);
        assert_eq!(out.norms.len(), 8);
        assert_eq!(run(&t, &start, 0, Guard::Unchecked).unwrap().state, start);
    }

    #[test]
    fn run_refuses_invalid_table_unless_unchecked() {
        let f = TuringFrame::with_sizes(1, &[1]).unwrap();
        let zero = TransitionTable::zeros(f.clone());
        let start = Superposition::basis(blank(&f, 0, 0));
        assert!(matches!(
            run(&zero, &start, 1, Guard::Validate { tolerance: 1e-9 }),
            Err(QtmError::InvalidTable(_))
        ));
        let out = run(&zero, &start, 1, Guard::Unchecked).unwrap();
        assert!(out.state.is_empty());
        assert_eq!(out.norms, vec![1.0, 0.0]);
    }

    #[test]
    fn adjoint_requires_single_tape() {
        let f = TuringFrame::with_sizes(1, &[1, 1]).unwrap();
        let t = TransitionTable::identity(f.clone());
        let psi = Superposition::basis(f.blank_configuration(0, vec![0, 0]).unwrap());
        assert!(apply_adjoint(&t, &psi).is_err());
        assert_eq!(apply_adjoint_multi_tape(&t, &psi).unwrap(), psi);
    }

    #[test]
    fn frame_mismatch_is_reported() {
        let t = counterexample();
        let other = TuringFrame::with_sizes(2, &[2]).unwrap();
        let psi = Superposition::basis(blank(&other, 0, 0));
        assert!(apply(&t, &psi).is_err());
    }

    #[test]
    fn window_cardinality() {
        let f = TuringFrame::with_sizes(2, &[2]).unwrap();
        assert_eq!(radius_window(&f, 1).unwrap().len(), 2 * 3 * 8);
    }

    #[test]
    fn norm_estimates() {
        let id = TransitionTable::identity(TuringFrame::with_sizes(1, &[2]).unwrap());
        assert!((estimate_norm(&id, 2, 20).unwrap() - 1.0).abs() < 1e-9);
        let zero = TransitionTable::zeros(TuringFrame::with_sizes(1, &[2]).unwrap());
        assert_eq!(estimate_norm(&zero, 2, 20).unwrap(), 0.0);
        assert!(estimate_norm(&zero, 0, 20).is_err());
        let ce = estimate_norm(&counterexample(), 3, 200).unwrap();
        assert!((ce - 1.0).abs() < 1e-6, "{ce}");
    }
}
