//! Conditions for `k` tapes, generated from head-displacement vectors.
//!
//! Two configurations can share a successor only if, on every tape, their
//! heads differ by `Δᵢ ∈ {0, ±1, ±2}`. Each such `Δ⃗` (up to overall sign)
//! gives one orthogonality condition: the write symbols on tapes with
//! `Δᵢ ≠ 0` are fixed independently on both sides, those on tapes with
//! `Δᵢ = 0` are shared and summed, and the sum runs over every pair of move
//! vectors with `d⃗ − d⃗' = Δ⃗`. Keeping only vectors whose first nonzero
//! entry is positive gives `(5^k − 1) / 2` of them; with `Δ⃗ = 0` and the
//! normalization condition the total is `1 + (5^k + 1) / 2`.

use num_complex::Complex64;

use super::{
    check_tolerance, cross, evaluate, ConditionId, ConditionResidual, Displacement, KTapeCondition, ValidationReport,
    Witness,
};
use crate::error::{QtmError, Result};
use crate::model::TuringFrame;
use crate::table::TransitionTable;

/// Every `Δ⃗ ∈ {0,±1,±2}^k` that is zero or has a positive first nonzero
/// entry, in lexicographic order.
pub fn displacement_vectors(k: usize) -> Vec<Displacement> {
    let total = 5usize.pow(k as u32);
    (0..total)
        .map(|mut i| {
            let mut v = vec![0i8; k];
            for slot in v.iter_mut().rev() {
                *slot = (i % 5) as i8 - 2;
                i /= 5;
            }
            v
        })
        .filter(|v| v.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0))
        .collect()
}

/// Normalization followed by every displacement condition.
pub fn generate_ktape_conditions(k: usize) -> Vec<ConditionId> {
    std::iter::once(ConditionId::KTape(KTapeCondition::Normalization))
        .chain(
            displacement_vectors(k)
                .into_iter()
                .map(|d| ConditionId::KTape(KTapeCondition::Displacement(d))),
        )
        .collect()
}

/// `1 + (5^k + 1) / 2`
pub fn evaluated_condition_count(k: usize) -> usize {
    1 + (5usize.pow(k as u32) + 1) / 2
}

/// Customary label of a generated condition: letters `(a)`–`(d)` for one
/// tape, numbers `(1)`–`(14)` for two tapes (`Δ⃗ = (k₁, k₂)` is number
/// `5k₁ + k₂ + 2`).
pub fn conventional_label(k: usize, condition: &KTapeCondition) -> Option<String> {
    match (k, condition) {
        (1, KTapeCondition::Normalization) => Some("(a)".into()),
        (1, KTapeCondition::Displacement(d)) => match d.as_slice() {
            [0] => Some("(b)".into()),
            [1] => Some("(c)".into()),
            [2] => Some("(d)".into()),
            _ => None,
        },
        (2, KTapeCondition::Normalization) => Some("(1)".into()),
        (2, KTapeCondition::Displacement(d)) => match d.as_slice() {
            &[k1, k2] => Some(format!("({})", 5 * k1 + k2 + 2)),
            _ => None,
        },
        _ => None,
    }
}

fn check_displacement(frame: &TuringFrame, d: &[i8]) -> Result<()> {
    if d.len() != frame.tape_count() {
        return Err(QtmError::InvalidArgument(format!(
            "displacement has {} components for a {}-tape frame",
            d.len(),
            frame.tape_count()
        )));
    }
    if d.iter().any(|x| !(-2..=2).contains(x)) {
        return Err(QtmError::InvalidArgument(
            "displacement entries must lie in {0, ±1, ±2}".into(),
        ));
    }
    if d.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        return Err(QtmError::InvalidArgument(
            "first nonzero displacement entry must be positive".into(),
        ));
    }
    Ok(())
}

pub fn evaluate_ktape_condition(table: &TransitionTable, condition: &KTapeCondition) -> Result<ConditionResidual> {
    match condition {
        KTapeCondition::Normalization => Ok(normalization(table)),
        KTapeCondition::Displacement(d) => {
            check_displacement(table.frame(), d)?;
            Ok(displacement(table, d))
        }
    }
}

pub fn check_ktape(table: &TransitionTable, tolerance: f64) -> Result<ValidationReport> {
    check_tolerance(tolerance)?;
    let residuals = generate_ktape_conditions(table.frame().tape_count())
        .iter()
        .map(|id| match id {
            ConditionId::KTape(c) => evaluate_ktape_condition(table, c),
            _ => unreachable!("generator only yields k-tape ids"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport::new(residuals, tolerance))
}

fn normalization(table: &TransitionTable) -> ConditionResidual {
    let f = table.frame();
    let (nq, ns, nm) = (f.state_count(), f.symbol_vector_count(), f.move_vector_count());
    evaluate(
        ConditionId::KTape(KTapeCondition::Normalization),
        nq * ns,
        |i| {
            let (q, s) = (i / ns, i % ns);
            let mut sum = 0.0;
            for p in 0..nq {
                for t in 0..ns {
                    for m in 0..nm {
                        sum += table.at(q, s, p, t, m).norm_sqr();
                    }
                }
            }
            Some((sum - 1.0).abs())
        },
        |i| {
            Witness::new()
                .state("q", i / ns)
                .symbols("sigma", f.decode_symbols(i % ns))
        },
    )
}

/// Index bookkeeping for one displacement vector.
struct Layout {
    /// Tapes with `Δᵢ ≠ 0`.
    fixed: Vec<usize>,
    fixed_count: usize,
    shared_count: usize,
    /// `compose[a * shared_count + b]` is the encoded write vector built from
    /// fixed symbols `a` and shared symbols `b`.
    compose: Vec<usize>,
    /// Encoded `(d⃗, d⃗')` with `d⃗ − d⃗' = Δ⃗`.
    move_pairs: Vec<(usize, usize)>,
}

fn mixed_radix(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

impl Layout {
    fn new(frame: &TuringFrame, delta: &[i8]) -> Self {
        let k = frame.tape_count();
        let fixed: Vec<usize> = (0..k).filter(|&i| delta[i] != 0).collect();
        let shared: Vec<usize> = (0..k).filter(|&i| delta[i] == 0).collect();
        let fixed_radices: Vec<usize> = fixed.iter().map(|&i| frame.alphabet(i).len()).collect();
        let shared_radices: Vec<usize> = shared.iter().map(|&i| frame.alphabet(i).len()).collect();
        let fixed_count: usize = fixed_radices.iter().product();
        let shared_count: usize = shared_radices.iter().product();

        let mut compose = Vec::with_capacity(fixed_count * shared_count);
        for a in 0..fixed_count {
            let fa = mixed_radix(a, &fixed_radices);
            for b in 0..shared_count {
                let sb = mixed_radix(b, &shared_radices);
                let mut tau = vec![0; k];
                for (&tape, &x) in fixed.iter().zip(&fa) {
                    tau[tape] = x;
                }
                for (&tape, &x) in shared.iter().zip(&sb) {
                    tau[tape] = x;
                }
                compose.push(frame.encode_symbols(&tau));
            }
        }

        let mut move_pairs = vec![(Vec::new(), Vec::new())];
        for &di in delta {
            let mut next = Vec::new();
            for (d, d2) in &move_pairs {
                for x in -1i8..=1 {
                    let y = x - di;
                    if (-1..=1).contains(&y) {
                        let (mut d, mut d2) = (d.clone(), d2.clone());
                        d.push(x);
                        d2.push(y);
                        next.push((d, d2));
                    }
                }
            }
            move_pairs = next;
        }
        let move_pairs = move_pairs
            .iter()
            .map(|(d, d2)| (frame.encode_moves(d), frame.encode_moves(d2)))
            .collect();

        Self {
            fixed,
            fixed_count,
            shared_count,
            compose,
            move_pairs,
        }
    }

    fn fixed_symbols(&self, frame: &TuringFrame, a: usize) -> Vec<usize> {
        let radices: Vec<usize> = self.fixed.iter().map(|&i| frame.alphabet(i).len()).collect();
        mixed_radix(a, &radices)
    }
}

fn displacement(table: &TransitionTable, delta: &[i8]) -> ConditionResidual {
    let f = table.frame();
    let (nq, ns) = (f.state_count(), f.symbol_vector_count());
    let layout = Layout::new(f, delta);
    let na = layout.fixed_count;
    let nb = layout.shared_count;
    let side = nq * ns * na;
    let orthogonality = layout.fixed.is_empty();
    let split = |i: usize| {
        let (one, two) = (i / side, i % side);
        let unpack = |x: usize| (x / (ns * na), (x / na) % ns, x % na);
        (unpack(one), unpack(two))
    };
    evaluate(
        ConditionId::KTape(KTapeCondition::Displacement(delta.to_vec())),
        side * side,
        |i| {
            let ((q, s, a), (q2, s2, a2)) = split(i);
            if orthogonality && (q, s) == (q2, s2) {
                return None;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for p in 0..nq {
                for b in 0..nb {
                    let t = layout.compose[a * nb + b];
                    let t2 = layout.compose[a2 * nb + b];
                    for &(m, m2) in &layout.move_pairs {
                        sum += cross(table.at(q2, s2, p, t2, m2), table.at(q, s, p, t, m));
                    }
                }
            }
            Some(sum.norm())
        },
        |i| {
            let ((q, s, a), (q2, s2, a2)) = split(i);
            let mut w = Witness::new().state("q", q).symbols("sigma", f.decode_symbols(s));
            if !orthogonality {
                w = w.symbols("tau[S]", layout.fixed_symbols(f, a));
            }
            w = w.state("q'", q2).symbols("sigma'", f.decode_symbols(s2));
            if !orthogonality {
                w = w.symbols("tau'[S]", layout.fixed_symbols(f, a2));
            }
            w
        },
    )
}
