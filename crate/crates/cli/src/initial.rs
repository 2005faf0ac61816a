//! Initial-state specs for `qtm run`.
//!
//! One spec is a whitespace-separated list of `key=value` pairs:
//!
//! * `state=NAME` (a state name, or its index if no name matches)
//! * `heads=H` or `heads=H1,H2,...`, one per tape (default all 0)
//! * `tape=blank` or `tape=CELL:SYM,...` with tapes separated by `;`
//! * `amp=RE,IM` (default `1,0`)
//!
//! e.g. `state=0 heads=0 tape=1:a,2:b amp=0.6,0`.

use num_complex::Complex64;
use qtm_core::model::{Configuration, TuringFrame};
use qtm_core::Superposition;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("invalid initial state `{spec}`: {reason}")]
pub struct InitialError {
    pub spec: String,
    pub reason: String,
}

pub fn parse_term(frame: &TuringFrame, spec: &str) -> Result<(Configuration, Complex64), InitialError> {
    let fail = |reason: String| InitialError {
        spec: spec.to_string(),
        reason,
    };
    let k = frame.tape_count();
    let mut state = 0;
    let mut heads = vec![0i64; k];
    let mut cells: Vec<Vec<(i64, usize)>> = vec![Vec::new(); k];
    let mut amp = Complex64::new(1.0, 0.0);

    for pair in spec.split_whitespace() {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| fail(format!("`{pair}` is not key=value")))?;
        match key {
            "state" => {
                state = match frame.state_index(value) {
                    Some(q) => q,
                    None => value
                        .parse::<usize>()
                        .ok()
                        .filter(|&q| q < frame.state_count())
                        .ok_or_else(|| fail(format!("unknown state `{value}`")))?,
                }
            }
            "heads" => {
                let hs = value
                    .split(',')
                    .map(|h| h.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| fail(format!("bad head position: {e}")))?;
                if hs.len() != k {
                    return Err(fail(format!("{} head positions for {k} tapes", hs.len())));
                }
                heads = hs;
            }
            "tape" => {
                if value == "blank" {
                    cells.iter_mut().for_each(Vec::clear);
                    continue;
                }
                let per_tape: Vec<&str> = value.split(';').collect();
                if per_tape.len() != k {
                    return Err(fail(format!("{} tape contents for {k} tapes", per_tape.len())));
                }
                for (tape, content) in per_tape.into_iter().enumerate() {
                    cells[tape].clear();
                    if content == "blank" || content.is_empty() {
                        continue;
                    }
                    for item in content.split(',') {
                        let (cell, sym) = item
                            .split_once(':')
                            .ok_or_else(|| fail(format!("`{item}` is not CELL:SYMBOL")))?;
                        let cell = cell
                            .parse::<i64>()
                            .map_err(|e| fail(format!("bad cell `{cell}`: {e}")))?;
                        let sym = frame
                            .alphabet(tape)
                            .index_of(sym)
                            .ok_or_else(|| fail(format!("unknown symbol `{sym}` on tape {tape}")))?;
                        cells[tape].push((cell, sym));
                    }
                }
            }
            "amp" => {
                let parts: Vec<&str> = value.split(',').collect();
                let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| fail(format!("bad amplitude: {e}")));
                amp = match parts.as_slice() {
                    [re] => Complex64::new(parse(re)?, 0.0),
                    [re, im] => Complex64::new(parse(re)?, parse(im)?),
                    _ => return Err(fail("amplitude must be RE or RE,IM".into())),
                };
                if !amp.re.is_finite() || !amp.im.is_finite() {
                    return Err(fail("amplitude must be finite".into()));
                }
            }
            other => return Err(fail(format!("unknown key `{other}`"))),
        }
    }

    let mut c = frame
        .blank_configuration(state, heads)
        .map_err(|e| fail(e.to_string()))?;
    for (tape, list) in cells.into_iter().enumerate() {
        for (cell, sym) in list {
            c.tapes[tape] = c.tapes[tape].write_at(cell, sym).map_err(|e| fail(e.to_string()))?;
        }
    }
    Ok((c, amp))
}

/// Superposition of the given terms; an empty list means the blank
/// configuration in the first state with heads at 0.
pub fn parse_initial(frame: &TuringFrame, specs: &[String]) -> Result<Superposition, InitialError> {
    if specs.is_empty() {
        return parse_term(frame, "").map(|(c, _)| Superposition::basis(c));
    }
    let terms = specs
        .iter()
        .map(|s| parse_term(frame, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Superposition::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qtm_core::model::Alphabet;

    fn frame() -> TuringFrame {
        TuringFrame::new(vec!["s", "t"], vec![Alphabet::new(vec!["B", "a", "b"], 0).unwrap()]).unwrap()
    }

    #[test]
    fn blank_default() {
        let (c, a) = parse_term(&frame(), "").unwrap();
        assert_eq!(c, frame().blank_configuration(0, vec![0]).unwrap());
        assert_eq!(a, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn full_spec() {
        let (c, a) = parse_term(&frame(), "state=t heads=-2 tape=1:a,3:b amp=0.6,0.8").unwrap();
        assert_eq!(c.state, 1);
        assert_eq!(c.heads, vec![-2]);
        assert_eq!(c.tapes[0].read(1), 1);
        assert_eq!(c.tapes[0].read(3), 2);
        assert_eq!(c.tapes[0].read(2), 0);
        assert_eq!(a, Complex64::new(0.6, 0.8));
        assert_eq!(parse_term(&frame(), "state=1").unwrap().0.state, 1);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "state=x",
            "heads=0,1",
            "tape=1:z",
            "tape=q",
            "amp=a",
            "color=red",
            "state",
        ] {
            assert!(parse_term(&frame(), bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn writing_blank_keeps_canonical_form() {
        let (c, _) = parse_term(&frame(), "tape=1:B").unwrap();
        assert_eq!(c, frame().blank_configuration(0, vec![0]).unwrap());
    }
}
