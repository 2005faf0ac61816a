//! The fourteen two-tape conditions, each written out term by term.
//!
//! This is an independent route to the same characterization that
//! [`check_ktape`](super::check_ktape) generates from displacement vectors;
//! tests compare the two.

use num_complex::Complex64;

use super::{
    check_tolerance, cross, digits, evaluate, require_tapes, ConditionId, ConditionResidual, ValidationReport, Witness,
};
use crate::error::Result;
use crate::table::TransitionTable;

struct Two<'a> {
    table: &'a TransitionTable,
    nq: usize,
    ns: usize,
    n1: usize,
    n2: usize,
}

impl<'a> Two<'a> {
    fn new(table: &'a TransitionTable) -> Self {
        let f = table.frame();
        Self {
            table,
            nq: f.state_count(),
            ns: f.symbol_vector_count(),
            n1: f.alphabet(0).len(),
            n2: f.alphabet(1).len(),
        }
    }

    /// `δ(q, σ⃗, p, (τ₁, τ₂), (d₁, d₂))` with `σ⃗` already encoded.
    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn at(&self, q: usize, s: usize, p: usize, t1: usize, t2: usize, d1: i8, d2: i8) -> Complex64 {
        let m = (d1 + 1) as usize * 3 + (d2 + 1) as usize;
        self.table.at(q, s, p, t1 * self.n2 + t2, m)
    }

    fn split(&self, t: usize) -> (usize, usize) {
        (t / self.n2, t % self.n2)
    }
}

/// Which write symbols are fixed per side (the rest are shared and summed).
#[derive(Clone, Copy)]
enum Outer {
    /// `τ₂` fixed per side, `τ₁` summed.
    Second,
    /// `τ₁` fixed per side, `τ₂` summed.
    First,
    /// Both write symbols fixed per side.
    Both,
}

fn outer_condition<F>(two: &Two, number: u8, outer: Outer, sum: F) -> ConditionResidual
where
    F: Fn(usize, usize, usize, usize, usize, usize) -> Complex64 + Sync + Send,
{
    let na = match outer {
        Outer::Second => two.n2,
        Outer::First => two.n1,
        Outer::Both => two.ns,
    };
    let radices = [two.nq, two.ns, na, two.nq, two.ns, na];
    let f = two.table.frame();
    evaluate(
        ConditionId::TwoTape(number),
        (two.nq * two.ns * na).pow(2),
        |i| {
            let [q, s, a, q2, s2, a2] = digits(i, radices);
            Some(sum(q, s, a, q2, s2, a2).norm())
        },
        |i| {
            let [q, s, a, q2, s2, a2] = digits(i, radices);
            let (name, name2) = match outer {
                Outer::Second => ("tau_2", "tau_2'"),
                Outer::First => ("tau_1", "tau_1'"),
                Outer::Both => ("tau", "tau'"),
            };
            let w = Witness::new().state("q", q).symbols("sigma", f.decode_symbols(s));
            let w = match outer {
                Outer::Both => w.symbols(name, f.decode_symbols(a)),
                _ => w.symbol(name, a),
            };
            let w = w.state("q'", q2).symbols("sigma'", f.decode_symbols(s2));
            match outer {
                Outer::Both => w.symbols(name2, f.decode_symbols(a2)),
                _ => w.symbol(name2, a2),
            }
        },
    )
}

pub fn check_two_tape(table: &TransitionTable, tolerance: f64) -> Result<ValidationReport> {
    check_tolerance(tolerance)?;
    require_tapes(table, 2, "exactly two tapes")?;
    let t = Two::new(table);
    let (nq, ns, n1, n2) = (t.nq, t.ns, t.n1, t.n2);
    let c0 = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(14);

    // (1)
    out.push(evaluate(
        ConditionId::TwoTape(1),
        nq * ns,
        |i| {
            let [q, s] = digits(i, [nq, ns]);
            let mut sum = 0.0;
            for p in 0..nq {
                for tau in 0..ns {
                    let (t1, t2) = t.split(tau);
                    for d1 in -1..=1 {
                        for d2 in -1..=1 {
                            sum += t.at(q, s, p, t1, t2, d1, d2).norm_sqr();
                        }
                    }
                }
            }
            Some((sum - 1.0).abs())
        },
        |i| {
            let [q, s] = digits(i, [nq, ns]);
            Witness::new()
                .state("q", q)
                .symbols("sigma", table.frame().decode_symbols(s))
        },
    ));

    // (2)
    out.push(evaluate(
        ConditionId::TwoTape(2),
        (nq * ns).pow(2),
        |i| {
            let [q, s, q2, s2] = digits(i, [nq, ns, nq, ns]);
            if (q, s) == (q2, s2) {
                return None;
            }
            let mut sum = c0;
            for p in 0..nq {
                for tau in 0..ns {
                    let (t1, t2) = t.split(tau);
                    for d1 in -1..=1 {
                        for d2 in -1..=1 {
                            sum += cross(t.at(q2, s2, p, t1, t2, d1, d2), t.at(q, s, p, t1, t2, d1, d2));
                        }
                    }
                }
            }
            Some(sum.norm())
        },
        |i| {
            let [q, s, q2, s2] = digits(i, [nq, ns, nq, ns]);
            let f = table.frame();
            Witness::new()
                .state("q", q)
                .symbols("sigma", f.decode_symbols(s))
                .state("q'", q2)
                .symbols("sigma'", f.decode_symbols(s2))
        },
    ));

    // (3)
    out.push(outer_condition(&t, 3, Outer::Second, |q, s, a, q2, s2, a2| {
        let mut sum = c0;
        for p in 0..nq {
            for t1 in 0..n1 {
                for d1 in -1..=1 {
                    for d2 in 0..=1 {
                        sum += cross(t.at(q2, s2, p, t1, a2, d1, d2 - 1), t.at(q, s, p, t1, a, d1, d2));
                    }
                }
            }
        }
        sum
    }));

    // (4)
    out.push(outer_condition(&t, 4, Outer::Second, |q, s, a, q2, s2, a2| {
        let mut sum = c0;
        for p in 0..nq {
            for t1 in 0..n1 {
                for d1 in -1..=1 {
                    sum += cross(t.at(q2, s2, p, t1, a2, d1, -1), t.at(q, s, p, t1, a, d1, 1));
                }
            }
        }
        sum
    }));

    // (5)
    out.push(outer_condition(&t, 5, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        let mut sum = c0;
        for p in 0..nq {
            for d1 in 0..=1 {
                sum += cross(t.at(q2, s2, p, y1, y2, d1 - 1, 1), t.at(q, s, p, x1, x2, d1, -1));
            }
        }
        sum
    }));

    // (6)
    out.push(outer_condition(&t, 6, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        let mut sum = c0;
        for p in 0..nq {
            for d1 in 0..=1 {
                for d2 in 0..=1 {
                    sum += cross(t.at(q2, s2, p, y1, y2, d1 - 1, d2), t.at(q, s, p, x1, x2, d1, d2 - 1));
                }
            }
        }
        sum
    }));

    // (7)
    out.push(outer_condition(&t, 7, Outer::First, |q, s, a, q2, s2, a2| {
        let mut sum = c0;
        for p in 0..nq {
            for t2 in 0..n2 {
                for d1 in 0..=1 {
                    for d2 in -1..=1 {
                        sum += cross(t.at(q2, s2, p, a2, t2, d1 - 1, d2), t.at(q, s, p, a, t2, d1, d2));
                    }
                }
            }
        }
        sum
    }));

    // (8)
    out.push(outer_condition(&t, 8, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        let mut sum = c0;
        for p in 0..nq {
            for d1 in 0..=1 {
                for d2 in 0..=1 {
                    sum += cross(t.at(q2, s2, p, y1, y2, d1 - 1, d2 - 1), t.at(q, s, p, x1, x2, d1, d2));
                }
            }
        }
        sum
    }));

    // (9)
    out.push(outer_condition(&t, 9, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        let mut sum = c0;
        for p in 0..nq {
            for d1 in 0..=1 {
                sum += cross(t.at(q2, s2, p, y1, y2, d1 - 1, -1), t.at(q, s, p, x1, x2, d1, 1));
            }
        }
        sum
    }));

    // (10)
    out.push(outer_condition(&t, 10, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        (0..nq)
            .map(|p| cross(t.at(q2, s2, p, y1, y2, -1, 1), t.at(q, s, p, x1, x2, 1, -1)))
            .sum()
    }));

    // (11)
    out.push(outer_condition(&t, 11, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        let mut sum = c0;
        for p in 0..nq {
            for d2 in 0..=1 {
                sum += cross(t.at(q2, s2, p, y1, y2, -1, d2), t.at(q, s, p, x1, x2, 1, d2 - 1));
            }
        }
        sum
    }));

    // (12)
    out.push(outer_condition(&t, 12, Outer::First, |q, s, a, q2, s2, a2| {
        let mut sum = c0;
        for p in 0..nq {
            for t2 in 0..n2 {
                for d2 in -1..=1 {
                    sum += cross(t.at(q2, s2, p, a2, t2, -1, d2), t.at(q, s, p, a, t2, 1, d2));
                }
            }
        }
        sum
    }));

    // (13)
    out.push(outer_condition(&t, 13, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        let mut sum = c0;
        for p in 0..nq {
            for d2 in 0..=1 {
                sum += cross(t.at(q2, s2, p, y1, y2, -1, d2 - 1), t.at(q, s, p, x1, x2, 1, d2));
            }
        }
        sum
    }));

    // (14)
    out.push(outer_condition(&t, 14, Outer::Both, |q, s, a, q2, s2, a2| {
        let ((x1, x2), (y1, y2)) = (t.split(a), t.split(a2));
        (0..nq)
            .map(|p| cross(t.at(q2, s2, p, y1, y2, -1, -1), t.at(q, s, p, x1, x2, 1, 1)))
            .sum()
    }));

    Ok(ValidationReport::new(out, tolerance))
}
