//! The sufficient-only condition set (H-a)–(H-d), single tape.
//!
//! (H-a) and (H-b) coincide with column conditions (a) and (b); (H-c) asks
//! for orthogonal rows of the `(q,σ) → (p,τ,d)` block matrix and (H-d)
//! separates every pair of distinct moves. The pair is strictly stronger
//! than column conditions (c) and (d).

use num_complex::Complex64;

use super::column::{normalization, orthogonality};
use super::{
    check_tolerance, cross, digits, evaluate, require_tapes, ConditionId, ConditionResidual, ValidationReport, Witness,
};
use crate::error::Result;
use crate::model::MOVES;
use crate::table::TransitionTable;

pub fn check_hirvensalo(table: &TransitionTable, tolerance: f64) -> Result<ValidationReport> {
    check_tolerance(tolerance)?;
    require_tapes(table, 1, "exactly one tape")?;
    let residuals = vec![
        normalization(table, ConditionId::Hirvensalo('a')),
        orthogonality(table, ConditionId::Hirvensalo('b')),
        target_orthogonality(table),
        move_separation(table),
    ];
    Ok(ValidationReport::new(residuals, tolerance))
}

/// (H-c): `Σ_{q,σ} δ(q,σ,p,τ,d)* δ(q,σ,p',τ',d')` for `(p,τ,d) ≠ (p',τ',d')`.
fn target_orthogonality(table: &TransitionTable) -> ConditionResidual {
    let nq = table.frame().state_count();
    let ns = table.frame().symbol_vector_count();
    let radices = [nq, ns, 3, nq, ns, 3];
    evaluate(
        ConditionId::Hirvensalo('c'),
        (nq * ns * 3).pow(2),
        |i| {
            let [p, t, m, p2, t2, m2] = digits(i, radices);
            if (p, t, m) == (p2, t2, m2) {
                return None;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for q in 0..nq {
                for s in 0..ns {
                    sum += cross(table.at(q, s, p, t, m), table.at(q, s, p2, t2, m2));
                }
            }
            Some(sum.norm())
        },
        |i| {
            let [p, t, m, p2, t2, m2] = digits(i, radices);
            Witness::new()
                .state("p", p)
                .symbol("tau", t)
                .movement("d", MOVES[m])
                .state("p'", p2)
                .symbol("tau'", t2)
                .movement("d'", MOVES[m2])
        },
    )
}

/// (H-d): `Σ_p δ(q,σ,p,τ,d)* δ(q',σ',p,τ',d')` for `d ≠ d'`.
fn move_separation(table: &TransitionTable) -> ConditionResidual {
    let nq = table.frame().state_count();
    let ns = table.frame().symbol_vector_count();
    let radices = [nq, ns, ns, 3, nq, ns, ns, 3];
    evaluate(
        ConditionId::Hirvensalo('d'),
        (nq * ns * ns * 3).pow(2),
        |i| {
            let [q, s, t, m, q2, s2, t2, m2] = digits(i, radices);
            if m == m2 {
                return None;
            }
            let sum: Complex64 = (0..nq)
                .map(|p| cross(table.at(q, s, p, t, m), table.at(q2, s2, p, t2, m2)))
                .sum();
            Some(sum.norm())
        },
        |i| {
            let [q, s, t, m, q2, s2, t2, m2] = digits(i, radices);
            Witness::new()
                .state("q", q)
                .symbol("sigma", s)
                .symbol("tau", t)
                .movement("d", MOVES[m])
                .state("q'", q2)
                .symbol("sigma'", s2)
                .symbol("tau'", t2)
                .movement("d'", MOVES[m2])
        },
    )
}
