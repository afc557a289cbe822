//! Acceptance suite: one PASS/FAIL line per criterion. Spans over GF(32003)
//! and ℚ are built once and shared by the criteria that need them.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use moufang::algebra::{AlgebraElement, Field, LoopAlgebra};
use moufang::error::WordError;
use moufang::finite_loop::{load_cayley, omega_h, verify_lemma1, FiniteLoop, Subloop};
use moufang::free_loop::{random_word, FreeMoufangLoop};
use moufang::ideal::{
    c_aug, check_alternative, check_c_vanishing, check_embedding, check_lemma5_identity, circle_product, circle_word_eval,
    generate_ideal_span, membership, phi_iso, v1, SpanBasis, SpanParams,
};
use moufang::rewrite::{explore_reductions, Limits};
use moufang::verify::{sample_element, sample_sparse};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: u64 = 32003;

struct Spans {
    free: Arc<FreeMoufangLoop>,
    gf: OnceLock<(Arc<SpanBasis>, Duration)>,
    q: OnceLock<(Arc<SpanBasis>, Duration)>,
}

impl Spans {
    fn alg(&self, field: Field) -> LoopAlgebra {
        LoopAlgebra::new(field, self.free.clone())
    }

    fn build(&self, field: Field) -> (Arc<SpanBasis>, Duration) {
        let start = Instant::now();
        let b = generate_ideal_span(&self.alg(field), &SpanParams::new(3, 6, 2)).expect("span");
        (Arc::new(b), start.elapsed())
    }

    fn gf(&self) -> &(Arc<SpanBasis>, Duration) {
        self.gf.get_or_init(|| self.build(Field::Prime(P)))
    }

    fn q(&self) -> &(Arc<SpanBasis>, Duration) {
        self.q.get_or_init(|| self.build(Field::Rational))
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn confluence_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut violations, mut refusals) = (Vec::new(), 0);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=8);
        let w = random_word(&mut rng, 3, len);
        match explore_reductions(&w, Limits::default()) {
            Ok(o) if o.is_confluent() => {}
            Ok(o) => violations.push(format!("{w} ({} classes)", o.terminals.len())),
            Err(e) if e.is_resource_limit() => refusals += 1,
            Err(e) => violations.push(format!("{w}: {e}")),
        }
    }
    let t = start.elapsed();
    let pass = violations.is_empty() && refusals <= 10 && t <= Duration::from_secs(300);
    let mut detail = format!("1000 words: {} non-confluent, {refusals} cap refusals, {t:.1?}", violations.len());
    if let Some(v) = violations.first() {
        detail.push_str(&format!("; e.g. {v}"));
    }
    outcome(pass, detail)
}

fn law_suite() -> Outcome {
    let free = FreeMoufangLoop::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    let mut refusals = 0;
    let mut note = |r: Result<bool, WordError>, case: String, failures: &mut Vec<String>| match r {
        Ok(true) => {}
        Ok(false) => failures.push(case),
        Err(e) => {
            if e.is_resource_limit() {
                refusals += 1;
            }
            failures.push(format!("{case}: {e}"));
        }
    };
    let sample = |rng: &mut ChaCha8Rng| sample_element(&free, rng, 3, 4);
    for _ in 0..500 {
        let (x, y, z) = (sample(&mut rng).unwrap(), sample(&mut rng).unwrap(), sample(&mut rng).unwrap());
        note(free.check_moufang(&x, &y, &z), format!("moufang({x}, {y}, {z})"), &mut failures);
    }
    for _ in 0..500 {
        let (x, y) = (sample(&mut rng).unwrap(), sample(&mut rng).unwrap());
        note(free.check_ip(&x, &y), format!("ip({x}, {y})"), &mut failures);
    }
    let mut detail = format!("500 triples + 500 pairs: {} failures ({refusals} of them cap refusals)", failures.len());
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; e.g. {f}"));
    }
    outcome(failures.is_empty(), detail)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    match oracle::check_all(5) {
        Ok(n) => outcome(true, format!("{n} leaf sequences, every bracketing matches, {:.1?}", start.elapsed())),
        Err(e) => outcome(false, e),
    }
}

fn alternativity(spans: &Spans) -> Outcome {
    let (gf, t_gf) = spans.gf();
    let start = Instant::now();
    let alg = spans.alg(Field::Prime(P));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pairs: Vec<(AlgebraElement, AlgebraElement)> = (0..200)
        .map(|_| (sample_sparse(&alg, &mut rng, 3, 2, 3).unwrap(), sample_sparse(&alg, &mut rng, 3, 2, 3).unwrap()))
        .collect();
    let verdicts: Vec<bool> = pairs.iter().map(|(x, y)| check_alternative(&alg, x, y, gf).unwrap()).collect();
    let failures = verdicts.iter().filter(|v| !**v).count();
    let x1 = |i| spans.free.generator(i).unwrap();
    let (a, b, c) = (x1(1), x1(2), x1(3));
    let sum = alg.basis(a.clone()).add(&alg.basis(b.clone())).unwrap();
    let assoc = alg.associator(&sum, &sum, &alg.basis(c.clone())).unwrap();
    let structured = assoc == v1(&alg, &a, &b, &c).unwrap() && membership(&assoc, gf).unwrap().member;
    let t = *t_gf + start.elapsed();

    // same verdicts over ℚ on the first 20 pairs, coefficients carried over as integers
    let (q, _) = spans.q();
    let qalg = spans.alg(Field::Rational);
    let lift = |x: &AlgebraElement| {
        let mut out = qalg.zero();
        for (u, s) in x.coeffs() {
            let v = s.to_string().parse::<i64>().unwrap();
            let v = if v > (P / 2) as i64 { v - P as i64 } else { v };
            out = out.add(&AlgebraElement::monomial(qalg.scalar(v), u.clone())).unwrap();
        }
        out
    };
    let same = pairs[..20]
        .iter()
        .zip(&verdicts)
        .all(|((x, y), v)| check_alternative(&qalg, &lift(x), &lift(y), q).unwrap() == *v);
    let pass = failures == 0 && structured && same && t <= Duration::from_secs(600);
    outcome(
        pass,
        format!("200 pairs over GF({P}): {failures} failures; structured case {structured}; ℚ subsample agrees {same}; {t:.1?}"),
    )
}

fn lemma5(spans: &Spans) -> Outcome {
    let alg = spans.alg(Field::Prime(P));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut identity_fail = 0;
    for _ in 0..100 {
        let t: Vec<_> = (0..3).map(|_| sample_element(&spans.free, &mut rng, 3, 3).unwrap()).collect();
        if !check_lemma5_identity(&alg, &t[0], &t[1], &t[2]).unwrap() {
            identity_fail += 1;
        }
    }
    let qalg = spans.alg(Field::Rational);
    let mut transport_fail = 0;
    for k in 0..100 {
        let a = if k % 2 == 0 { &alg } else { &qalg };
        let x = sample_sparse(a, &mut rng, 3, 4, 5).unwrap();
        if x.augmentation() != c_aug(&phi_iso(&x)) {
            transport_fail += 1;
        }
    }
    let small = generate_ideal_span(&alg, &SpanParams::new(3, 4, 2)).unwrap();
    let bases = [&spans.gf().0, &spans.q().0, &Arc::new(small)];
    let vanishing = bases.iter().all(|b| check_c_vanishing(b));
    outcome(
        identity_fail == 0 && transport_fail == 0 && vanishing,
        format!(
            "circle associator identity: {identity_fail}/100 failures; 𝔠 transport: {transport_fail}/100 failures; c vanishes on {} spans: {vanishing}",
            bases.len()
        ),
    )
}

fn lemma4(spans: &Spans) -> Outcome {
    let alg = spans.alg(Field::Rational);
    let assignment: BTreeMap<u32, AlgebraElement> =
        (1..=2).map(|i| (i, alg.one_minus(&spans.free.generator(i).unwrap()))).collect();
    let all = spans.free.enumerate_universe(2, 5).unwrap();
    let eval_fail = all
        .iter()
        .filter(|u| circle_word_eval(&alg, u.word(), &assignment).unwrap() != alg.one_minus(u))
        .count();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut product_fail = 0;
    for _ in 0..100 {
        let x = sample_sparse(&alg, &mut rng, 3, 3, 3).unwrap();
        let y = sample_sparse(&alg, &mut rng, 3, 3, 3).unwrap();
        if phi_iso(&alg.mul(&x, &y).unwrap()) != circle_product(&alg, &phi_iso(&x), &phi_iso(&y)).unwrap() {
            product_fail += 1;
        }
    }
    outcome(
        eval_fail == 0 && product_fail == 0,
        format!("circle_word_eval on {} elements: {eval_fail} failures; φ products: {product_fail}/100 failures", all.len()),
    )
}

fn theorem1(spans: &Spans) -> Outcome {
    let (gf, t_gf) = spans.gf();
    let (q, t_q) = spans.q();
    let start = Instant::now();
    let (alg, qalg) = (spans.alg(Field::Prime(P)), spans.alg(Field::Rational));
    let elements = spans.free.enumerate_universe(3, 4).unwrap();
    let mut members = Vec::new();
    let mut tested = 0;
    for u in elements.iter().filter(|u| !u.is_identity()) {
        tested += 1;
        if check_embedding(&alg, u, gf).unwrap().member || check_embedding(&qalg, u, q).unwrap().member {
            members.push(u.to_string());
        }
    }
    let t = *t_gf + *t_q + start.elapsed();
    let ranks = (gf.rank(), q.rank());
    let pass = members.is_empty() && ranks.0 == ranks.1 && t <= Duration::from_secs(900);
    let mut detail = format!(
        "{tested} elements, {} members; rank GF({P}) {} vs ℚ {}; {t:.1?}",
        members.len(),
        ranks.0,
        ranks.1
    );
    if let Some(m) = members.first() {
        detail.push_str(&format!("; e.g. 1 - {m}"));
    }
    outcome(pass, detail)
}

fn fixture(name: &str) -> FiniteLoop {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    load_cayley(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn lemma1() -> Outcome {
    let s3 = fixture("s3.json");
    let z6 = fixture("z6.json");
    let a3 = s3.subloop_from_spec(&["(123)"]).unwrap();
    let cases: Vec<(&str, &FiniteLoop, Subloop, Option<Subloop>)> = vec![
        ("S3/A3", &s3, a3, Some(s3.trivial())),
        ("Z6/<2>", &z6, z6.subloop(&[2]), Some(z6.subloop(&[3]))),
        ("Z6/<3>", &z6, z6.subloop(&[3]), Some(z6.subloop(&[2]))),
    ];
    let mut bad = Vec::new();
    let mut runs = 0;
    for (name, l, h, h2) in &cases {
        let index = l.order() / h.len();
        for field in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
            runs += 1;
            let items = verify_lemma1(l, h, field, h2.as_ref()).unwrap();
            let dim = omega_h(l, h, field).dim;
            if items.len() != 6 || items.iter().any(|i| !i.passed) || dim != l.order() - index {
                bad.push(format!("{name} over {field}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{runs} runs (index 2 and 3, fields Q, GF(2), GF(3)): {} failing {}", bad.len(), bad.join(", ")),
    )
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_moufang")).args(args).output().expect("run binary");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn mask_timing(s: &str) -> String {
    let re = |line: &str| match line.find("\"timing_ms\":") {
        Some(i) => format!("{}\"timing_ms\": 0{}", &line[..i], if line.trim_end().ends_with(',') { "," } else { "" }),
        None => line.to_string(),
    };
    s.lines().map(re).collect::<Vec<_>>().join("\n")
}

fn cli_determinism() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let s3 = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/s3.json");
    let s3 = s3.to_str().unwrap();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("verify_lemma1_s3.json", vec!["--json", "verify", "lemma1", "--cayley", s3, "--subloop", "(123)", "--field", "Q"]),
        ("verify_lemma4.json", vec!["--json", "verify", "lemma4", "--gens", "2", "--max-word-len", "3", "--samples", "20", "--seed", "9"]),
    ];
    let mut problems = Vec::new();
    for (file, args) in &runs {
        let (c1, a) = cli(args);
        let (c2, b) = cli(args);
        let expected = std::fs::read_to_string(golden.join(file)).unwrap_or_default();
        let normalize = |s: &str| mask_timing(s).trim_end().to_string();
        if c1 != 0 || c2 != 0 || normalize(&a) != normalize(&b) {
            problems.push(format!("{file}: runs differ or fail"));
        } else if normalize(&a) != normalize(&expected) {
            problems.push(format!("{file}: differs from golden file"));
        }
    }
    let cases: [(i32, Vec<&str>); 4] = [
        (0, vec!["nf", "x1^-1*(x1*x2)"]),
        (1, vec!["verify", "lemma1", "--cayley", s3, "--subloop", "(12)"]),
        (2, vec!["nf", "x1*"]),
        (3, vec!["--closure-cap", "1", "nf", "((x1*x2)*x1)*x3"]),
    ];
    for (code, args) in &cases {
        let (got, _) = cli(args);
        if got != *code {
            problems.push(format!("{args:?} exited {got}, expected {code}"));
        }
    }
    outcome(problems.is_empty(), format!("{} golden reports, 4 exit codes: {}", runs.len(), if problems.is_empty() { "ok".into() } else { problems.join("; ") }))
}

fn main() {
    let spans = Spans { free: Arc::new(FreeMoufangLoop::default()), gf: OnceLock::new(), q: OnceLock::new() };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("confluence of reductions", Box::new(confluence_suite)),
        ("Moufang and inverse-property laws", Box::new(law_suite)),
        ("closure matches brute-force oracle", Box::new(oracle_equivalence)),
        ("alternativity modulo the ideal", Box::new(|| alternativity(&spans))),
        ("circle associator and augmentation", Box::new(|| lemma5(&spans))),
        ("circle evaluation and φ products", Box::new(|| lemma4(&spans))),
        ("embedding grid", Box::new(|| theorem1(&spans))),
        ("finite ideal suite", Box::new(lemma1)),
        ("CLI determinism and exit codes", Box::new(cli_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} [{}] {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
