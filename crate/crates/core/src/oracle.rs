//! Brute-force unitarity oracle and table generators.
//!
//! The oracle never looks at the unitarity conditions. It expands images of
//! basis configurations with the simulator and takes inner products:
//!
//! * columns: `⟨C'| M† M |C⟩ = ⟨M C', M C⟩`
//! * rows: `⟨C| M M† |C'⟩ = ⟨M† C, M† C'⟩`
//!
//! Both are exact finite sums. A Gram entry between distinct configurations
//! can only be nonzero when their heads are at most two cells apart on every
//! tape and their tapes agree away from the head cells (columns) or differ
//! in at most one cell (rows). Windows of three cells per tape with one
//! extra head position on each side realize every local pattern the
//! conditions quantify over, so checking those pairs inside such a window
//! decides isometry (resp. co-isometry) of the full operator. Upgrading
//! either to unitarity relies on the known fact that an isometric (or
//! co-isometric) evolution operator of a local transition function is
//! unitary; no attempt is made to brute-force surjectivity.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QtmError, Result};
use crate::evolution::{apply, apply_adjoint, Superposition};
use crate::exec;
use crate::model::{Configuration, Move, TuringFrame, MOVES};
use crate::table::{Transition, TransitionTable};

/// Configurations whose tapes are blank outside cells `1..=n` and whose
/// heads lie in `1-d ..= n+d`, on every tape.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationWindow {
    pub n: usize,
    pub d: i8,
    configurations: Vec<Configuration>,
}

impl ConfigurationWindow {
    pub fn new(frame: &TuringFrame, n: usize, d: i8) -> Result<Self> {
        if n == 0 || !(-1..=1).contains(&d) || (n as i64 + 2 * d as i64) <= 0 {
            return Err(QtmError::InvalidArgument(format!(
                "window n={n}, d={d} is empty or malformed"
            )));
        }
        let heads: Vec<i64> = (1 - d as i64..=n as i64 + d as i64).collect();

        // per tape: every (head, content) pair
        let per_tape: Vec<Vec<(i64, Vec<usize>)>> = frame
            .alphabets()
            .iter()
            .map(|a| {
                let contents = a.len().pow(n as u32);
                heads
                    .iter()
                    .flat_map(|&h| {
                        (0..contents).map(move |mut code| {
                            let mut cells = Vec::with_capacity(n);
                            for _ in 0..n {
                                cells.push(code % a.len());
                                code /= a.len();
                            }
                            (h, cells)
                        })
                    })
                    .collect()
            })
            .collect();

        let mut configurations = Vec::new();
        for q in 0..frame.state_count() {
            let base = frame.blank_configuration(q, vec![0; frame.tape_count()])?;
            let mut partial = vec![base];
            for (tape, options) in per_tape.iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for c in &partial {
                    for (h, cells) in options {
                        let mut c = c.clone();
                        c.heads[tape] = *h;
                        for (offset, &s) in cells.iter().enumerate() {
                            c.tapes[tape].set(1 + offset as i64, s);
                        }
                        next.push(c);
                    }
                }
                partial = next;
            }
            configurations.extend(partial);
        }
        configurations.sort();
        Ok(Self { n, d, configurations })
    }

    pub fn configurations(&self) -> &[Configuration] {
        &self.configurations
    }

    pub fn len(&self) -> usize {
        self.configurations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configurations.is_empty()
    }

    /// Column-Gram candidates: heads within two cells on each tape and tapes
    /// agreeing off the two head cells. Includes `C = C'`.
    pub fn column_pairs(&self) -> Vec<(Configuration, Configuration)> {
        self.pairs(|a, b| {
            a.heads.iter().zip(&b.heads).all(|(x, y)| (x - y).abs() <= 2)
                && a.tapes
                    .iter()
                    .zip(&b.tapes)
                    .zip(a.heads.iter().zip(&b.heads))
                    .all(|((t, t2), (&h, &h2))| t.agrees_off(t2, &[h, h2]))
        })
    }

    /// Row-Gram candidates: heads within two cells on each tape and each
    /// tape differing in at most one cell. Includes `C = C'`.
    pub fn row_pairs(&self) -> Vec<(Configuration, Configuration)> {
        self.pairs(|a, b| {
            a.heads.iter().zip(&b.heads).all(|(x, y)| (x - y).abs() <= 2)
                && a.tapes
                    .iter()
                    .zip(&b.tapes)
                    .all(|(t, t2)| t.differing_cells(t2).len() <= 1)
        })
    }

    fn pairs<F>(&self, keep: F) -> Vec<(Configuration, Configuration)>
    where
        F: Fn(&Configuration, &Configuration) -> bool,
    {
        let cs = &self.configurations;
        let mut out = Vec::new();
        for a in cs {
            for b in cs {
                if keep(a, b) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }
}

/// `⟨C'| M† M |C⟩` for each `(C, C')`, by direct expansion.
pub fn gram_columns(table: &TransitionTable, pairs: &[(Configuration, Configuration)]) -> Result<Vec<Complex64>> {
    pairs
        .iter()
        .map(|(c, c2)| {
            let img = apply(table, &Superposition::basis(c.clone()))?;
            let img2 = apply(table, &Superposition::basis(c2.clone()))?;
            Ok(img2.inner(&img))
        })
        .collect()
}

/// `⟨C| M M† |C'⟩` for each `(C, C')`, by direct expansion. Single tape.
pub fn gram_rows(table: &TransitionTable, pairs: &[(Configuration, Configuration)]) -> Result<Vec<Complex64>> {
    pairs
        .iter()
        .map(|(c, c2)| {
            let img = apply_adjoint(table, &Superposition::basis(c.clone()))?;
            let img2 = apply_adjoint(table, &Superposition::basis(c2.clone()))?;
            Ok(img.inner(&img2))
        })
        .collect()
}

/// Largest deviation of a Gram matrix from the identity over a pair set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub max_deviation: f64,
    pub pairs_checked: usize,
    pub worst_pair: Option<(Configuration, Configuration)>,
}

impl OracleOutcome {
    pub fn is_identity(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Columns,
    Rows,
}

fn gram_deviation(table: &TransitionTable, window: &ConfigurationWindow, side: Side) -> Result<OracleOutcome> {
    if side == Side::Rows && table.frame().tape_count() != 1 {
        return Err(QtmError::UnsupportedTapeCount {
            required: "exactly one tape",
            actual: table.frame().tape_count(),
        });
    }
    let cs = window.configurations();
    let images: Vec<Superposition> = exec::map_slice(cs, |c| {
        let basis = Superposition::basis(c.clone());
        match side {
            Side::Columns => apply(table, &basis),
            Side::Rows => apply_adjoint(table, &basis),
        }
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let index: HashMap<&Configuration, usize> = cs.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let pairs = match side {
        Side::Columns => window.column_pairs(),
        Side::Rows => window.row_pairs(),
    };
    let ids: Vec<(usize, usize)> = pairs.iter().map(|(a, b)| (index[a], index[b])).collect();
    let worst = exec::argmax(ids.len(), |k| {
        let (i, j) = ids[k];
        let g = images[j].inner(&images[i]);
        let target = if i == j { 1.0 } else { 0.0 };
        Some((g - target).norm())
    });
    Ok(match worst {
        Some((dev, k)) => OracleOutcome {
            max_deviation: dev,
            pairs_checked: ids.len(),
            worst_pair: Some(pairs[k].clone()),
        },
        None => OracleOutcome {
            max_deviation: 0.0,
            pairs_checked: 0,
            worst_pair: None,
        },
    })
}

/// Deviation of `M† M` from the identity on the window's column pairs.
pub fn column_oracle(table: &TransitionTable, window: &ConfigurationWindow) -> Result<OracleOutcome> {
    gram_deviation(table, window, Side::Columns)
}

/// Deviation of `M M†` from the identity on the window's row pairs.
pub fn row_oracle(table: &TransitionTable, window: &ConfigurationWindow) -> Result<OracleOutcome> {
    gram_deviation(table, window, Side::Rows)
}

/// Window with three cells per tape and one extra head position per side.
pub fn default_window(frame: &TuringFrame) -> Result<ConfigurationWindow> {
    ConfigurationWindow::new(frame, 3, 1)
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(QtmError::InvalidArgument("matrix is not square".into()));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, data }
    }

    /// Gram–Schmidt orthonormalization of a matrix with random entries.
    pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> Self {
        loop {
            let mut cols: Vec<Vec<Complex64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            let mut ok = true;
            for j in 0..n {
                for i in 0..j {
                    let proj: Complex64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                    let prev = cols[i].clone();
                    for (x, p) in cols[j].iter_mut().zip(prev) {
                        *x -= proj * p;
                    }
                }
                let len = cols[j].iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
                if len < 1e-6 {
                    ok = false;
                    break;
                }
                cols[j].iter_mut().for_each(|x| *x /= len);
            }
            if ok {
                let mut data = vec![Complex64::new(0.0, 0.0); n * n];
                for (j, col) in cols.iter().enumerate() {
                    for (i, &x) in col.iter().enumerate() {
                        data[i * n + j] = x;
                    }
                }
                return Self { n, data };
            }
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    /// `max |U† U − I|` entrywise.
    pub fn orthonormality_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let g: Complex64 = (0..n).map(|i| self.get(i, a).conj() * self.get(i, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

/// `δ(q,σ⃗,p,τ⃗,d⃗) = U[(p,τ⃗),(q,σ⃗)]` when `d⃗ = directions[p]`, else 0.
///
/// The head move depends only on the entered state, so the result is
/// unidirectional and, given orthonormal columns, always unitary.
pub fn pair_unitary_machine(
    frame: TuringFrame,
    unitary: &SquareMatrix,
    directions: &[Vec<Move>],
) -> Result<TransitionTable> {
    let nq = frame.state_count();
    let ns = frame.symbol_vector_count();
    if unitary.size() != nq * ns {
        return Err(QtmError::InvalidArgument(format!(
            "matrix has size {}, frame needs {}",
            unitary.size(),
            nq * ns
        )));
    }
    if directions.len() != nq {
        return Err(QtmError::InvalidArgument(format!(
            "{} directions given for {nq} states",
            directions.len()
        )));
    }
    for d in directions {
        frame.check_moves(d)?;
    }
    let deviation = unitary.orthonormality_deviation();
    if deviation > 1e-12 {
        return Err(QtmError::NotUnitary(deviation));
    }
    let mut table = TransitionTable::zeros(frame);
    let f = table.frame().clone();
    for q in 0..nq {
        for s in 0..ns {
            for (p, dir) in directions.iter().enumerate() {
                let m = f.encode_moves(dir);
                for t in 0..ns {
                    let i = table.flat(q, s, p, t, m);
                    table.amplitudes_mut()[i] = unitary.get(p * ns + t, q * ns + s);
                }
            }
        }
    }
    Ok(table)
}

/// Copy of `table` with the real part of one entry shifted by `epsilon`.
pub fn perturb(table: &TransitionTable, entry: &Transition, epsilon: f64) -> Result<TransitionTable> {
    if epsilon == 0.0 || !epsilon.is_finite() {
        return Err(QtmError::InvalidArgument(format!(
            "perturbation {epsilon} must be finite and nonzero"
        )));
    }
    let mut out = table.clone();
    let a = out.get(entry)?;
    out.set(entry, a + Complex64::new(epsilon, 0.0))?;
    Ok(out)
}

/// Table whose entries are independently nonzero with probability
/// `density`, with components uniform in `[-1, 1]`.
pub fn random_table<R: Rng>(frame: TuringFrame, density: f64, rng: &mut R) -> TransitionTable {
    let mut table = TransitionTable::zeros(frame);
    for a in table.amplitudes_mut() {
        if rng.gen_bool(density) {
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    table
}

pub fn random_directions<R: Rng>(frame: &TuringFrame, rng: &mut R) -> Vec<Vec<Move>> {
    (0..frame.state_count())
        .map(|_| (0..frame.tape_count()).map(|_| MOVES[rng.gen_range(0..3)]).collect())
        .collect()
}

/// Random configuration with heads in `[-span, span]` and random tape
/// content on `[-span - 1, span + 1]`.
pub fn random_configuration<R: Rng>(frame: &TuringFrame, span: i64, rng: &mut R) -> Configuration {
    let q = rng.gen_range(0..frame.state_count());
    let heads = (0..frame.tape_count()).map(|_| rng.gen_range(-span..=span)).collect();
    let mut c = frame.blank_configuration(q, heads).expect("valid by construction");
    for (tape, a) in frame.alphabets().iter().enumerate() {
        for cell in -span - 1..=span + 1 {
            c.tapes[tape].set(cell, rng.gen_range(0..a.len()));
        }
    }
    c
}

/// Normalized superposition of `terms` random configurations.
pub fn random_superposition<R: Rng>(frame: &TuringFrame, terms: usize, span: i64, rng: &mut R) -> Superposition {
    let psi = Superposition::from_terms((0..terms).map(|_| {
        (
            random_configuration(frame, span, rng),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )
    }));
    let len = psi.norm();
    psi.scaled(Complex64::new(1.0 / len, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub table: TransitionTable,
    /// True for generator output known to be unitary.
    pub valid: bool,
}

/// Seeded single-tape corpus: `valid` unidirectional tables built from
/// random unitaries, then `invalid` copies of fresh ones with one entry
/// perturbed. Frames have one to three states and one or two symbols.
pub fn single_tape_corpus(seed: u64, valid: usize, invalid: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(valid + invalid);
    for i in 0..valid + invalid {
        let nq = rng.gen_range(1..=3);
        let sigma = rng.gen_range(1..=2);
        let frame = TuringFrame::with_sizes(nq, &[sigma]).expect("nonempty frame");
        let u = SquareMatrix::random_unitary(nq * sigma, &mut rng);
        let dirs = random_directions(&frame, &mut rng);
        let table = pair_unitary_machine(frame, &u, &dirs).expect("orthonormal by construction");
        if i < valid {
            out.push(CorpusEntry { table, valid: true });
        } else {
            let entry = table.transition_at(rng.gen_range(0..table.len()));
            let magnitude = rng.gen_range(0.05..0.5);
            let eps = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
            let table = perturb(&table, &entry, eps).expect("nonzero epsilon");
            out.push(CorpusEntry { table, valid: false });
        }
    }
    out
}
