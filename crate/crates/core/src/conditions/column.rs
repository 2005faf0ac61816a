//! Column conditions (a)–(d) for single-tape tables.

use num_complex::Complex64;

use super::{
    check_tolerance, cross, digits, evaluate, require_tapes, ConditionId, ConditionResidual, ValidationReport, Witness,
};
use crate::error::Result;
use crate::table::TransitionTable;

#[inline]
pub(super) fn mv(d: i8) -> usize {
    (d + 1) as usize
}

pub fn check_column(table: &TransitionTable, tolerance: f64) -> Result<ValidationReport> {
    check_tolerance(tolerance)?;
    require_tapes(table, 1, "exactly one tape")?;
    let residuals = vec![
        normalization(table, ConditionId::Column('a')),
        orthogonality(table, ConditionId::Column('b')),
        adjacent(table),
        two_apart(table),
    ];
    Ok(ValidationReport::new(residuals, tolerance))
}

/// `max |Σ_{p,τ,d} |δ(q,σ,p,τ,d)|² − 1|` over `(q, σ)`.
pub(super) fn normalization(table: &TransitionTable, id: ConditionId) -> ConditionResidual {
    let ns = table.frame().symbol_vector_count();
    let n = table.frame().state_count() * ns;
    evaluate(
        id,
        n,
        |i| {
            let [q, s] = digits(i, [n / ns, ns]);
            let sum: f64 = table.row(q, s).iter().map(Complex64::norm_sqr).sum();
            Some((sum - 1.0).abs())
        },
        |i| {
            let [q, s] = digits(i, [n / ns, ns]);
            Witness::new()
                .state("q", q)
                .symbols("sigma", table.frame().decode_symbols(s))
        },
    )
}

/// `max |Σ_{p,τ,d} δ(q',σ',p,τ,d)* δ(q,σ,p,τ,d)|` over `(q,σ) ≠ (q',σ')`.
pub(super) fn orthogonality(table: &TransitionTable, id: ConditionId) -> ConditionResidual {
    let ns = table.frame().symbol_vector_count();
    let n = table.frame().state_count() * ns;
    evaluate(
        id,
        n * n,
        |i| {
            let [a, b] = digits(i, [n, n]);
            if a == b {
                return None;
            }
            let (ra, rb) = (table.row(a / ns, a % ns), table.row(b / ns, b % ns));
            let sum: Complex64 = rb.iter().zip(ra).map(|(&x, &y)| cross(x, y)).sum();
            Some(sum.norm())
        },
        |i| {
            let [a, b] = digits(i, [n, n]);
            let f = table.frame();
            Witness::new()
                .state("q", a / ns)
                .symbols("sigma", f.decode_symbols(a % ns))
                .state("q'", b / ns)
                .symbols("sigma'", f.decode_symbols(b % ns))
        },
    )
}

fn pair_witness(i: usize, nq: usize, ns: usize) -> Witness {
    let [q, s, t, q2, s2, t2] = digits(i, [nq, ns, ns, nq, ns, ns]);
    Witness::new()
        .state("q", q)
        .symbol("sigma", s)
        .symbol("tau", t)
        .state("q'", q2)
        .symbol("sigma'", s2)
        .symbol("tau'", t2)
}

/// (c): `Σ_{p, d∈{0,1}} δ(q',σ',p,τ',d−1)* δ(q,σ,p,τ,d)`.
fn adjacent(table: &TransitionTable) -> ConditionResidual {
    let nq = table.frame().state_count();
    let ns = table.frame().symbol_vector_count();
    evaluate(
        ConditionId::Column('c'),
        (nq * ns * ns).pow(2),
        |i| {
            let [q, s, t, q2, s2, t2] = digits(i, [nq, ns, ns, nq, ns, ns]);
            let mut sum = Complex64::new(0.0, 0.0);
            for p in 0..nq {
                for d in 0..=1i8 {
                    sum += cross(table.at(q2, s2, p, t2, mv(d - 1)), table.at(q, s, p, t, mv(d)));
                }
            }
            Some(sum.norm())
        },
        |i| pair_witness(i, nq, ns),
    )
}

/// (d): `Σ_p δ(q',σ',p,τ',−1)* δ(q,σ,p,τ,1)`.
fn two_apart(table: &TransitionTable) -> ConditionResidual {
    let nq = table.frame().state_count();
    let ns = table.frame().symbol_vector_count();
    evaluate(
        ConditionId::Column('d'),
        (nq * ns * ns).pow(2),
        |i| {
            let [q, s, t, q2, s2, t2] = digits(i, [nq, ns, ns, nq, ns, ns]);
            let sum: Complex64 = (0..nq)
                .map(|p| cross(table.at(q2, s2, p, t2, mv(-1)), table.at(q, s, p, t, mv(1))))
                .sum();
            Some(sum.norm())
        },
        |i| pair_witness(i, nq, ns),
    )
}
