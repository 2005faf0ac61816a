//! Small reference machines.

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{Alphabet, TuringFrame};
use crate::table::{Transition, TransitionTable};

/// Two states `{0, 1}`, one blank-only tape. Satisfies the column conditions
/// (so it is unitary) while violating the mixed row/column sufficient set.
pub fn counterexample() -> TransitionTable {
    let frame = TuringFrame::new(vec!["0", "1"], vec![Alphabet::new(vec!["B"], 0).unwrap()]).unwrap();
    #[rustfmt::skip]
    let rows: [(usize, usize, i8, f64); 12] = [
        (0, 0, -1, 0.0), (0, 0, 0, 0.5), (0, 0, 1, -0.5),
        (0, 1, -1, 0.5), (0, 1, 0, 0.5), (0, 1, 1, 0.0),
        (1, 0, -1, 0.0), (1, 0, 0, 0.5), (1, 0, 1, 0.5),
        (1, 1, -1, 0.5), (1, 1, 0, -0.5), (1, 1, 1, 0.0),
    ];
    TransitionTable::from_entries(
        frame,
        rows.iter()
            .map(|&(q, p, d, a)| (Transition::new(q, vec![0], p, vec![0], vec![d]), Complex64::new(a, 0.0))),
    )
    .unwrap()
}

/// Machine running `a` and `b` side by side: states are pairs, tapes of `a`
/// come first, and amplitudes multiply.
pub fn tensor_product(a: &TransitionTable, b: &TransitionTable) -> Result<TransitionTable> {
    let (fa, fb) = (a.frame(), b.frame());
    let states: Vec<String> = fa
        .states()
        .iter()
        .flat_map(|x| fb.states().iter().map(move |y| format!("{x}.{y}")))
        .collect();
    let alphabets: Vec<Alphabet> = fa.alphabets().iter().chain(fb.alphabets()).cloned().collect();
    let frame = TuringFrame::new(states, alphabets)?;
    let mut out = TransitionTable::zeros(frame);

    let nqb = fb.state_count();
    let nsb = fb.symbol_vector_count();
    let nmb = fb.move_vector_count();
    for (ta, x) in a.nonzero_entries() {
        let sa = fa.encode_symbols(&ta.read);
        let wa = fa.encode_symbols(&ta.write);
        let ma = fa.encode_moves(&ta.moves);
        for (tb, y) in b.nonzero_entries() {
            let sb = fb.encode_symbols(&tb.read);
            let wb = fb.encode_symbols(&tb.write);
            let mb = fb.encode_moves(&tb.moves);
            let i = out.flat(
                ta.q * nqb + tb.q,
                sa * nsb + sb,
                ta.p * nqb + tb.p,
                wa * nsb + wb,
                ma * nmb + mb,
            );
            out.amplitudes_mut()[i] = x * y;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_has_eight_nonzero_entries() {
        assert_eq!(counterexample().nonzero_entries().count(), 8);
    }

    #[test]
    fn tensor_with_trivial_identity_keeps_amplitudes() {
        let ce = counterexample();
        let id = TransitionTable::identity(TuringFrame::with_sizes(1, &[2]).unwrap());
        let prod = tensor_product(&ce, &id).unwrap();
        assert_eq!(prod.frame().tape_count(), 2);
        assert_eq!(prod.frame().state_count(), 2);
        assert_eq!(
            prod.amplitude(0, &[0, 1], 1, &[0, 1], &[-1, 0]).unwrap(),
            Complex64::new(0.5, 0.0)
        );
        assert_eq!(
            prod.amplitude(0, &[0, 1], 1, &[0, 0], &[-1, 0]).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(prod.nonzero_entries().count(), 16);
    }
}
