//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each; exits nonzero if any criterion fails.
//!
//!     cargo test -p qtm-cli --test acceptance

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use qtm_cli::document::parse_machine;
use qtm_core::conditions::{
    check_column, check_hirvensalo, check_ktape, check_row, check_two_tape, conventional_label,
    evaluated_condition_count, generate_ktape_conditions, ConditionId, ValidationReport,
};
use qtm_core::evolution::{apply, apply_adjoint, estimate_norm, run, Guard};
use qtm_core::machines::counterexample;
use qtm_core::model::{locally_like, TuringFrame};
use qtm_core::oracle::{
    column_oracle, default_window, gram_rows, pair_unitary_machine, perturb, random_configuration, random_directions,
    random_superposition, random_table, row_oracle, single_tape_corpus, ConfigurationWindow, CorpusEntry, SquareMatrix,
};
use qtm_core::table::{is_unidirectional, norm_bound, TransitionTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const CORPUS_SEED: u64 = 2024;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn corpus() -> Vec<CorpusEntry> {
    single_tape_corpus(CORPUS_SEED, 50, 50)
}

fn machine_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../machines")
        .join(name)
}

fn residual(r: &ValidationReport, id: ConditionId) -> Result<f64, String> {
    r.get(&id)
        .map(|x| x.residual)
        .ok_or_else(|| format!("report lacks {id}"))
}

fn counterexample_reproduction() -> Outcome {
    let t = counterexample();
    let text = std::fs::read_to_string(machine_path("counterexample.qtm")).map_err(|e| e.to_string())?;
    let parsed = parse_machine(&text).map_err(|e| e.to_string())?;
    ensure!(parsed == t, "bundled document differs from the built-in table");
    ensure!(t.nonzero_entries().count() == 8, "expected 8 nonzero entries");
    let col = check_column(&t, TOL).map_err(|e| e.to_string())?;
    ensure!(col.passed(), "column check failed");
    for r in &col.residuals {
        ensure!(r.residual < 1e-12, "{} residual {}", r.id, r.residual);
    }
    let h = check_hirvensalo(&t, TOL).map_err(|e| e.to_string())?;
    ensure!(!h.passed(), "sufficient set unexpectedly passed");
    let hc = residual(&h, ConditionId::Hirvensalo('c'))?;
    let hd = residual(&h, ConditionId::Hirvensalo('d'))?;
    ensure!((hc - 0.5).abs() <= 1e-12, "H-c residual {hc}");
    ensure!((hd - 0.25).abs() <= 1e-12, "H-d residual {hd}");
    Ok(format!("column max {:.1e}; H-c {hc}; H-d {hd}", col.max_residual()))
}

fn condition_count_law() -> Outcome {
    let expected = [4, 14, 64, 314];
    for (i, &n) in expected.iter().enumerate() {
        let k = i + 1;
        let got = generate_ktape_conditions(k).len();
        let formula = 1 + (5usize.pow(k as u32) + 1) / 2;
        ensure!(
            got == n && formula == n && evaluated_condition_count(k) == n,
            "k={k}: {got} generated, {formula} by formula"
        );
    }
    Ok("4, 14, 64, 314".into())
}

/// Unitary, unitary with one entry nudged, or random noise, in equal shares.
fn mixed_table<R: Rng>(frame: TuringFrame, rng: &mut R) -> TransitionTable {
    let n = frame.state_count() * frame.symbol_vector_count();
    let u = SquareMatrix::random_unitary(n, rng);
    let dirs = random_directions(&frame, rng);
    let valid = pair_unitary_machine(frame.clone(), &u, &dirs).expect("orthonormal");
    match rng.gen_range(0..3) {
        0 => valid,
        1 => {
            let e = valid.transition_at(rng.gen_range(0..valid.len()));
            perturb(&valid, &e, rng.gen_range(0.01..0.3)).expect("nonzero")
        }
        _ => random_table(frame, rng.gen_range(0.05..0.6), rng),
    }
}

fn compare_specialization(k: usize, generated: &ValidationReport, explicit: &ValidationReport) -> Result<f64, String> {
    ensure!(generated.verdict == explicit.verdict, "verdicts differ for k={k}");
    let mut worst = 0.0f64;
    for r in &generated.residuals {
        let ConditionId::KTape(c) = &r.id else {
            return Err(format!("unexpected id {}", r.id));
        };
        let label = conventional_label(k, c).ok_or_else(|| format!("no label for {}", r.id))?;
        let inner = label.trim_matches(|c| c == '(' || c == ')');
        let id = if k == 1 {
            ConditionId::Column(inner.chars().next().unwrap())
        } else {
            ConditionId::TwoTape(inner.parse().map_err(|_| label.clone())?)
        };
        let diff = (r.residual - residual(explicit, id.clone())?).abs();
        ensure!(diff <= 1e-12, "{} vs {id}: differ by {diff}", r.id);
        worst = worst.max(diff);
    }
    Ok(worst)
}

fn checker_specialization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut passes = [0usize; 2];
    for _ in 0..100 {
        let f = TuringFrame::with_sizes(rng.gen_range(1..=3), &[rng.gen_range(1..=3)]).unwrap();
        let t = mixed_table(f, &mut rng);
        let explicit = check_column(&t, TOL).map_err(|e| e.to_string())?;
        passes[0] += explicit.passed() as usize;
        worst = worst.max(compare_specialization(
            1,
            &check_ktape(&t, TOL).map_err(|e| e.to_string())?,
            &explicit,
        )?);
    }
    for _ in 0..100 {
        let f = TuringFrame::with_sizes(rng.gen_range(1..=2), &[rng.gen_range(1..=2), rng.gen_range(1..=2)]).unwrap();
        let t = mixed_table(f, &mut rng);
        let explicit = check_two_tape(&t, TOL).map_err(|e| e.to_string())?;
        passes[1] += explicit.passed() as usize;
        worst = worst.max(compare_specialization(
            2,
            &check_ktape(&t, TOL).map_err(|e| e.to_string())?,
            &explicit,
        )?);
    }
    Ok(format!(
        "200 tables ({} / {} valid for k=1 / k=2), max difference {worst:.1e}",
        passes[0], passes[1]
    ))
}

fn oracle_equivalence(corpus: &[CorpusEntry]) -> Outcome {
    for (i, e) in corpus.iter().enumerate() {
        let w = default_window(e.table.frame()).map_err(|e| e.to_string())?;
        let col = check_column(&e.table, TOL).map_err(|e| e.to_string())?.passed();
        let gc = column_oracle(&e.table, &w).map_err(|e| e.to_string())?;
        ensure!(
            col == gc.is_identity(TOL),
            "table {i}: column checker {col}, oracle deviation {}",
            gc.max_deviation
        );
        let row = check_row(&e.table, TOL).map_err(|e| e.to_string())?.passed();
        let gr = row_oracle(&e.table, &w).map_err(|e| e.to_string())?;
        ensure!(
            row == gr.is_identity(TOL),
            "table {i}: row checker {row}, oracle deviation {}",
            gr.max_deviation
        );
        ensure!(
            col == e.valid,
            "table {i}: verdict {col} but generated as valid={}",
            e.valid
        );
    }
    Ok(format!("{} tables, verdicts identical", corpus.len()))
}

fn column_row_agreement(corpus: &[CorpusEntry]) -> Outcome {
    for (i, e) in corpus.iter().enumerate() {
        let c = check_column(&e.table, TOL).map_err(|e| e.to_string())?.verdict;
        let r = check_row(&e.table, TOL).map_err(|e| e.to_string())?.verdict;
        ensure!(c == r, "table {i}: column {c:?}, row {r:?}");
    }
    Ok(format!("{} tables agree", corpus.len()))
}

fn unidirectional_exactness(corpus: &[CorpusEntry]) -> Outcome {
    let mut n = 0;
    for (i, e) in corpus.iter().filter(|e| e.valid).enumerate() {
        ensure!(is_unidirectional(&e.table), "table {i} not unidirectional");
        let r = check_column(&e.table, TOL).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "table {i} fails validation");
        let (c, d) = (
            residual(&r, ConditionId::Column('c'))?,
            residual(&r, ConditionId::Column('d'))?,
        );
        ensure!(c == 0.0 && d == 0.0, "table {i}: (c)={c:e} (d)={d:e}");
        n += 1;
    }
    Ok(format!("{n} generated machines, (c) = (d) = 0.0"))
}

fn simulation_unitarity(corpus: &[CorpusEntry]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut drift, mut round_trip) = (0.0f64, 0.0f64);
    for (i, e) in corpus.iter().filter(|e| e.valid).enumerate() {
        let f = e.table.frame();
        for _ in 0..20 {
            let psi = random_superposition(f, 3, 2, &mut rng);
            let out = run(&e.table, &psi, 10, Guard::Validate { tolerance: TOL }).map_err(|e| e.to_string())?;
            let d = (out.norms[10] - 1.0).abs();
            ensure!(d <= 1e-9, "table {i}: norm after 10 steps off by {d}");
            let back = apply_adjoint(&e.table, &apply(&e.table, &psi).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let r = back.max_difference(&psi);
            ensure!(r <= 1e-9, "table {i}: adjoint round trip off by {r}");
            drift = drift.max(d);
            round_trip = round_trip.max(r);
        }
    }
    Ok(format!(
        "max norm drift {drift:.1e}, max round-trip error {round_trip:.1e}"
    ))
}

fn norm_bound_check(corpus: &[CorpusEntry]) -> Outcome {
    let mut worst_valid = 0.0f64;
    for (i, e) in corpus.iter().enumerate() {
        let bound = norm_bound(&e.table.statistics(), e.table.frame()).map_err(|e| e.to_string())?;
        let est = estimate_norm(&e.table, 3, 200).map_err(|e| e.to_string())?;
        ensure!(est <= bound + 1e-9, "table {i}: estimate {est} exceeds bound {bound}");
        if e.valid {
            ensure!((est - 1.0).abs() <= 1e-6, "table {i}: valid table estimate {est}");
            worst_valid = worst_valid.max((est - 1.0).abs());
        }
    }
    Ok(format!(
        "{} tables within bound; valid estimates within {worst_valid:.1e} of 1",
        corpus.len()
    ))
}

fn locally_alike_gram_rows() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f = TuringFrame::with_sizes(rng.gen_range(1..=3), &[rng.gen_range(1..=3)]).unwrap();
        let t = random_table(f.clone(), rng.gen_range(0.2..1.0), &mut rng);
        let a = random_configuration(&f, 3, &mut rng);
        // copy the state and the three cells around the head somewhere else
        let mut b = random_configuration(&f, 3, &mut rng);
        b.state = a.state;
        let shift = rng.gen_range(-10..=10);
        b.heads[0] = a.heads[0] + shift;
        for d in -1..=1 {
            b.tapes[0] = b.tapes[0]
                .write_at(b.heads[0] + d, a.tapes[0].read(a.heads[0] + d))
                .unwrap();
        }
        ensure!(locally_like(&a, &b).unwrap(), "fixture is not locally alike");
        let g = gram_rows(&t, &[(a.clone(), a), (b.clone(), b)]).map_err(|e| e.to_string())?;
        let diff = (g[0] - g[1]).norm();
        ensure!(diff <= 1e-12, "diagonal entries {} vs {}", g[0], g[1]);
        worst = worst.max(diff);
    }
    for f in [
        TuringFrame::with_sizes(2, &[2]).unwrap(),
        TuringFrame::with_sizes(3, &[3]).unwrap(),
    ] {
        for n in [3usize, 4] {
            for d in [-1i8, 0, 1] {
                let w = ConfigurationWindow::new(&f, n, d).map_err(|e| e.to_string())?;
                let expected = (n as i64 + 2 * d as i64) as usize * f.state_count() * f.alphabet(0).len().pow(n as u32);
                ensure!(w.len() == expected, "|S({n},{d})| = {} expected {expected}", w.len());
            }
        }
    }
    Ok(format!("100 pairs, max difference {worst:.1e}; window sizes match"))
}

fn qtm(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qtm"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot launch qtm: {e}"))?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn cli_contract() -> Outcome {
    let path = machine_path("counterexample.qtm");
    let path = path.to_str().unwrap();
    let (code, _) = qtm(&["validate", path, "--checker", "column"])?;
    ensure!(code == 0, "validate --checker column exited {code}");
    let (code, report) = qtm(&["validate", path, "--checker", "hirvensalo"])?;
    ensure!(code == 1, "validate --checker hirvensalo exited {code}");
    let line = |id: &str| report.lines().find(|l| l.starts_with(id)).unwrap_or("").to_string();
    ensure!(
        line("hirvensalo-c").contains("residual=5.000000000000e-1"),
        "H-c line: {}",
        line("hirvensalo-c")
    );
    ensure!(
        line("hirvensalo-d").contains("residual=2.500000000000e-1"),
        "H-d line: {}",
        line("hirvensalo-d")
    );
    let (code, out) = qtm(&["run", path, "--initial", "state=0 heads=0 tape=blank", "--steps", "1"])?;
    ensure!(code == 0, "run exited {code}");
    let expected = [
        "state=0 heads=0 tape={} amp=0.500000000000,0.000000000000",
        "state=0 heads=1 tape={} amp=-0.500000000000,0.000000000000",
        "state=1 heads=-1 tape={} amp=0.500000000000,0.000000000000",
        "state=1 heads=0 tape={} amp=0.500000000000,0.000000000000",
    ];
    let terms: Vec<&str> = out.lines().filter(|l| l.starts_with("state=")).collect();
    ensure!(terms.len() == 4, "run printed {} terms", terms.len());
    for (got, want) in terms.iter().zip(expected) {
        ensure!(got.starts_with(want), "term `{got}` expected `{want}`");
    }
    Ok("exit codes 0/1, residuals reported, four ±1/2 terms".into())
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("counterexample reproduction", Box::new(counterexample_reproduction)),
        ("condition-count law", Box::new(condition_count_law)),
        ("checker specialization", Box::new(checker_specialization)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&corpus))),
        ("column/row agreement", Box::new(|| column_row_agreement(&corpus))),
        (
            "unidirectional exactness",
            Box::new(|| unidirectional_exactness(&corpus)),
        ),
        ("simulation unitarity", Box::new(|| simulation_unitarity(&corpus))),
        ("norm bound", Box::new(|| norm_bound_check(&corpus))),
        ("locally-alike Gram rows", Box::new(locally_alike_gram_rows)),
        ("CLI contract", Box::new(cli_contract)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
