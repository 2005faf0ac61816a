//! Row conditions (a)–(f) for single-tape tables.
//!
//! Parameters `τ_d` name the symbol the target configuration holds at cell
//! `ξ − d`, so a sum over `d` picks a different read-back symbol per move.

use num_complex::Complex64;

use super::column::mv;
use super::{
    check_tolerance, cross, digits, evaluate, require_tapes, ConditionId, ConditionResidual, ValidationReport, Witness,
};
use crate::error::Result;
use crate::table::TransitionTable;

pub fn check_row(table: &TransitionTable, tolerance: f64) -> Result<ValidationReport> {
    check_tolerance(tolerance)?;
    require_tapes(table, 1, "exactly one tape")?;
    let residuals = vec![
        normalization(table),
        same_window(table),
        shifted_window(table),
        same_move(table),
        adjacent_moves(table),
        opposite_moves(table),
    ];
    Ok(ValidationReport::new(residuals, tolerance))
}

fn sizes(table: &TransitionTable) -> (usize, usize) {
    (table.frame().state_count(), table.frame().symbol_vector_count())
}

/// (a): `Σ_{q,σ,d} |δ(q,σ,p,τ_d,d)|² = 1` for all `(p, τ₋₁, τ₀, τ₁)`.
fn normalization(table: &TransitionTable) -> ConditionResidual {
    let (nq, ns) = sizes(table);
    let radices = [nq, ns, ns, ns];
    evaluate(
        ConditionId::Row('a'),
        nq * ns * ns * ns,
        |i| {
            let [p, tm, t0, tp] = digits(i, radices);
            let taus = [tm, t0, tp];
            let mut sum = 0.0;
            for q in 0..nq {
                for s in 0..ns {
                    for (k, &t) in taus.iter().enumerate() {
                        sum += table.at(q, s, p, t, k).norm_sqr();
                    }
                }
            }
            Some((sum - 1.0).abs())
        },
        |i| {
            let [p, tm, t0, tp] = digits(i, radices);
            Witness::new()
                .state("p", p)
                .symbol("tau_-1", tm)
                .symbol("tau_0", t0)
                .symbol("tau_1", tp)
        },
    )
}

/// (b): distinct `p ≠ p'` over a common window `(τ₋₁, τ₀, τ₁)`.
fn same_window(table: &TransitionTable) -> ConditionResidual {
    let (nq, ns) = sizes(table);
    let radices = [nq, nq, ns, ns, ns];
    evaluate(
        ConditionId::Row('b'),
        nq * nq * ns * ns * ns,
        |i| {
            let [p, p2, tm, t0, tp] = digits(i, radices);
            if p == p2 {
                return None;
            }
            let taus = [tm, t0, tp];
            let mut sum = Complex64::new(0.0, 0.0);
            for q in 0..nq {
                for s in 0..ns {
                    for (k, &t) in taus.iter().enumerate() {
                        sum += cross(table.at(q, s, p2, t, k), table.at(q, s, p, t, k));
                    }
                }
            }
            Some(sum.norm())
        },
        |i| {
            let [p, p2, tm, t0, tp] = digits(i, radices);
            Witness::new()
                .state("p", p)
                .state("p'", p2)
                .symbol("tau_-1", tm)
                .symbol("tau_0", t0)
                .symbol("tau_1", tp)
        },
    )
}

/// (c): `Σ_{q,σ,d∈{0,1}} δ(q,σ,p',τ_d,d−1)* δ(q,σ,p,τ_d,d)`.
fn shifted_window(table: &TransitionTable) -> ConditionResidual {
    let (nq, ns) = sizes(table);
    let radices = [nq, nq, ns, ns];
    evaluate(
        ConditionId::Row('c'),
        nq * nq * ns * ns,
        |i| {
            let [p, p2, t0, t1] = digits(i, radices);
            let mut sum = Complex64::new(0.0, 0.0);
            for q in 0..nq {
                for s in 0..ns {
                    sum += cross(table.at(q, s, p2, t0, mv(-1)), table.at(q, s, p, t0, mv(0)));
                    sum += cross(table.at(q, s, p2, t1, mv(0)), table.at(q, s, p, t1, mv(1)));
                }
            }
            Some(sum.norm())
        },
        |i| {
            let [p, p2, t0, t1] = digits(i, radices);
            Witness::new()
                .state("p", p)
                .state("p'", p2)
                .symbol("tau_0", t0)
                .symbol("tau_1", t1)
        },
    )
}

/// Shared shape of (d), (e), (f): a sum over `(q, σ)` of
/// `δ(q,σ,p',τ',d')* δ(q,σ,p,τ,d)` for one or more move pairs `(d, d')`.
fn symbol_pair(
    table: &TransitionTable,
    id: ConditionId,
    move_pairs: &[(i8, i8)],
    require_distinct: bool,
) -> ConditionResidual {
    let (nq, ns) = sizes(table);
    let radices = [nq, ns, nq, ns];
    evaluate(
        id,
        nq * ns * nq * ns,
        |i| {
            let [p, t, p2, t2] = digits(i, radices);
            if require_distinct && t == t2 {
                return None;
            }
            // worst case over the move pairs the condition quantifies over
            let worst = move_pairs
                .iter()
                .map(|&(d, d2)| {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for q in 0..nq {
                        for s in 0..ns {
                            sum += cross(table.at(q, s, p2, t2, mv(d2)), table.at(q, s, p, t, mv(d)));
                        }
                    }
                    sum.norm()
                })
                .fold(0.0, f64::max);
            Some(worst)
        },
        |i| {
            let [p, t, p2, t2] = digits(i, radices);
            Witness::new()
                .state("p", p)
                .symbol("tau", t)
                .state("p'", p2)
                .symbol("tau'", t2)
        },
    )
}

/// (d): `τ ≠ τ'`, same move `d` on both sides, for every `d`.
fn same_move(table: &TransitionTable) -> ConditionResidual {
    symbol_pair(table, ConditionId::Row('d'), &[(-1, -1), (0, 0), (1, 1)], true)
}

/// (e): `τ ≠ τ'`, moves `(d, d − 1)` for `d ∈ {0, 1}`.
fn adjacent_moves(table: &TransitionTable) -> ConditionResidual {
    symbol_pair(table, ConditionId::Row('e'), &[(0, -1), (1, 0)], true)
}

/// (f): moves `(1, −1)`, any symbols.
fn opposite_moves(table: &TransitionTable) -> ConditionResidual {
    symbol_pair(table, ConditionId::Row('f'), &[(1, -1)], false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::counterexample;
    use crate::model::TuringFrame;

    #[test]
    fn counterexample_passes() {
        let r = check_row(&counterexample(), 1e-9).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.max_residual() < 1e-12);
    }

    #[test]
    fn identity_is_exact() {
        let t = TransitionTable::identity(TuringFrame::with_sizes(2, &[3]).unwrap());
        let r = check_row(&t, 0.0).unwrap();
        assert!(r.residuals.iter().all(|c| c.residual == 0.0));
        assert_eq!(r.residuals.len(), 6);
    }

    #[test]
    fn zero_table_fails_normalization_only() {
        let t = TransitionTable::zeros(TuringFrame::with_sizes(2, &[2]).unwrap());
        let r = check_row(&t, 1e-9).unwrap();
        assert_eq!(r.get(&ConditionId::Row('a')).unwrap().residual, 1.0);
        assert!(r.residuals[1..].iter().all(|c| c.residual == 0.0));
    }
}
