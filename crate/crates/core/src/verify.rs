//! Verification suites behind a common [`Verifier`] trait, looked up by
//! name in a [`Registry`].

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, Field, LoopAlgebra};
use crate::error::{AlgebraError, IdealError, WordError};
use crate::finite_loop::{omega_h, verify_lemma1, FiniteLoop};
use crate::free_loop::{random_word, FreeMoufangLoop, LoopElement};
use crate::ideal::{
    c_aug, check_alternative, check_c_vanishing, check_embedding, check_lemma5_identity, circle_product, circle_word_eval,
    generate_ideal_span, membership, phi_iso, v1, SpanBasis, SpanParams,
};
use crate::rewrite::{explore_reductions, Limits, DEFAULT_CLOSURE_CAP, DEFAULT_PATH_BUDGET};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Failures shown in a report before the rest are elided.
const MAX_WITNESSES: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

/// Everything a suite run depends on besides its input files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub field: Field,
    pub n_gens: u32,
    pub max_word_len: usize,
    pub universe_len: usize,
    pub seed_len: usize,
    pub closure_cap: usize,
    pub path_budget: usize,
    pub rng_seed: u64,
    /// Number of random cases drawn by the sampling suites.
    pub samples: usize,
    pub output: OutputMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: Field::Prime(32003),
            n_gens: 3,
            max_word_len: 4,
            universe_len: 6,
            seed_len: 2,
            closure_cap: DEFAULT_CLOSURE_CAP,
            path_budget: DEFAULT_PATH_BUDGET,
            rng_seed: 7,
            samples: 100,
            output: OutputMode::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if let Field::Prime(p) = self.field {
            Field::prime(p).map_err(|e| VerifyError::Input(e.to_string()))?;
        }
        let bounds = [
            ("n_gens", self.n_gens as usize),
            ("max_word_len", self.max_word_len),
            ("universe_len", self.universe_len),
            ("seed_len", self.seed_len),
            ("closure_cap", self.closure_cap),
            ("path_budget", self.path_budget),
            ("samples", self.samples),
        ];
        for (name, v) in bounds {
            if v == 0 {
                return Err(VerifyError::Input(format!("{name} must be positive")));
            }
        }
        if self.n_gens > crate::word::MAX_GENERATOR {
            return Err(VerifyError::Input(format!("n_gens {} exceeds {}", self.n_gens, crate::word::MAX_GENERATOR)));
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits { closure_cap: self.closure_cap, path_budget: self.path_budget }
    }

    pub fn span_params(&self) -> SpanParams {
        SpanParams::new(self.n_gens, self.universe_len, self.seed_len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown verification target {0:?}")]
    UnknownTarget(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A closure cap or search budget stopped the check.
    ResourceLimit,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ResourceLimit => "CAP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub timing_ms: u64,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckRecord { name: name.into(), status, detail: detail.into(), witness: None, timing_ms: 0 }
    }

    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(name, Status::Pass, detail)
    }

    pub fn with_witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_millis() as u64;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub records: Vec<CheckRecord>,
    pub status: Status,
    pub timing_ms: u64,
}

impl VerificationReport {
    pub fn new(command: String, config: RunConfig, records: Vec<CheckRecord>, timing_ms: u64) -> Self {
        let status = if records.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else if records.iter().any(|r| r.status == Status::ResourceLimit) {
            Status::ResourceLimit
        } else {
            Status::Pass
        };
        VerificationReport { schema_version: REPORT_SCHEMA_VERSION, command, config, records, status, timing_ms }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{} {}: {}\n", r.status.label(), r.name, r.detail));
            if let Some(w) = &r.witness {
                out.push_str(&format!("     witness: {w}\n"));
            }
        }
        let passed = self.records.iter().filter(|r| r.status == Status::Pass).count();
        out.push_str(&format!("{}: {passed}/{} checks passed\n", self.command, self.records.len()));
        out
    }
}

/// Extra inputs for suites that do not run on the free loop alone.
#[derive(Clone, Debug, Default)]
pub struct VerifyInputs {
    pub cayley: Option<FiniteLoop>,
    /// Generators of the subloop `H`, as labels or indices.
    pub subloop: Vec<String>,
    /// Generators of a second subloop for the comparison statements.
    pub second_subloop: Option<Vec<String>>,
}

/// Shared state for one run; the truncated span is built at most once.
pub struct VerifyContext {
    pub config: RunConfig,
    pub inputs: VerifyInputs,
    pub alg: LoopAlgebra,
    span: OnceLock<Result<Arc<SpanBasis>, IdealError>>,
}

impl VerifyContext {
    pub fn new(config: RunConfig, inputs: VerifyInputs) -> Self {
        let free = Arc::new(FreeMoufangLoop::new(config.limits()));
        let alg = LoopAlgebra::new(config.field, free);
        VerifyContext { config, inputs, alg, span: OnceLock::new() }
    }

    /// Reuses an already generated span; it must match the config's grid.
    pub fn with_span(config: RunConfig, inputs: VerifyInputs, span: Arc<SpanBasis>) -> Self {
        let ctx = Self::new(config, inputs);
        let _ = ctx.span.set(Ok(span));
        ctx
    }

    pub fn free(&self) -> &FreeMoufangLoop {
        self.alg.free_loop()
    }

    pub fn span(&self) -> Result<Arc<SpanBasis>, IdealError> {
        self.span.get_or_init(|| generate_ideal_span(&self.alg, &self.config.span_params()).map(Arc::new)).clone()
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.config.rng_seed)
    }
}

pub trait Verifier: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError>;
}

pub struct Registry {
    verifiers: BTreeMap<&'static str, Box<dyn Verifier>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { verifiers: BTreeMap::new() };
        r.register(Box::new(IpSuite));
        r.register(Box::new(MoufangSuite));
        r.register(Box::new(ConfluenceSuite));
        r.register(Box::new(FiniteIdealSuite));
        r.register(Box::new(CircleSuite));
        r.register(Box::new(AugmentationSuite));
        r.register(Box::new(EmbeddingSuite));
        r.register(Box::new(AlternativitySuite));
        r
    }
}

impl Registry {
    pub fn register(&mut self, v: Box<dyn Verifier>) {
        self.verifiers.insert(v.name(), v);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.verifiers.keys().copied()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Verifier> {
        self.verifiers.get(name).map(|b| b.as_ref())
    }

    pub fn run(&self, name: &str, ctx: &VerifyContext) -> Result<VerificationReport, VerifyError> {
        let v = self.get(name).ok_or_else(|| VerifyError::UnknownTarget(name.to_string()))?;
        ctx.config.validate()?;
        let start = Instant::now();
        let records = v.run(ctx)?;
        let ms = start.elapsed().as_millis() as u64;
        Ok(VerificationReport::new(format!("verify {name}"), ctx.config.clone(), records, ms))
    }
}

/// A canonical element of length at most `max_len`, uniform in length.
pub fn sample_element<R: Rng>(free: &FreeMoufangLoop, rng: &mut R, n_gens: u32, max_len: usize) -> Result<LoopElement, WordError> {
    let len = rng.gen_range(0..=max_len);
    free.element(&random_word(rng, n_gens, len))
}

/// One to `max_terms` terms with small nonzero integer coefficients.
pub fn sample_sparse<R: Rng>(
    alg: &LoopAlgebra,
    rng: &mut R,
    n_gens: u32,
    max_len: usize,
    max_terms: usize,
) -> Result<AlgebraElement, AlgebraError> {
    let mut x = alg.zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let u = sample_element(alg.free_loop(), rng, n_gens, max_len)?;
        let mut c = rng.gen_range(-3i64..=2);
        if c >= 0 {
            c += 1;
        }
        x = x.add(&AlgebraElement::monomial(alg.scalar(c), u))?;
    }
    Ok(x)
}

/// Tallies a batch of boolean checks into one record.
struct Tally {
    total: usize,
    failures: Vec<String>,
    refusals: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { total: 0, failures: Vec::new(), refusals: Vec::new() }
    }

    fn add(&mut self, case: impl FnOnce() -> String, outcome: Result<bool, String>, resource: bool) {
        self.total += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(case()),
            Err(e) if resource => self.refusals.push(format!("{}: {e}", case())),
            Err(e) => self.failures.push(format!("{}: {e}", case())),
        }
    }

    fn record(self, name: &str, unit: &str, start: Instant) -> CheckRecord {
        let status = if !self.failures.is_empty() {
            Status::Fail
        } else if !self.refusals.is_empty() {
            Status::ResourceLimit
        } else {
            Status::Pass
        };
        let detail = format!("{} {unit}, {} failures, {} refusals", self.total, self.failures.len(), self.refusals.len());
        let shown: Vec<&String> = self.failures.iter().chain(&self.refusals).take(MAX_WITNESSES).collect();
        let witness = (!shown.is_empty()).then(|| shown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("; "));
        CheckRecord::new(name, status, detail).with_witness(witness).timed(start)
    }
}

fn word_outcome(r: Result<bool, WordError>) -> (Result<bool, String>, bool) {
    match r {
        Ok(b) => (Ok(b), false),
        Err(e) => {
            let resource = e.is_resource_limit();
            (Err(e.to_string()), resource)
        }
    }
}

fn ideal_resource(e: &IdealError) -> bool {
    match e {
        IdealError::DimensionOverflow { .. } => true,
        IdealError::Algebra(AlgebraError::Word(w)) => w.is_resource_limit(),
        _ => false,
    }
}

fn algebra_resource(e: &AlgebraError) -> bool {
    matches!(e, AlgebraError::Word(w) if w.is_resource_limit())
}

/// The span, or a record explaining why it could not be built.
fn span_or_record(ctx: &VerifyContext) -> Result<Arc<SpanBasis>, CheckRecord> {
    let start = Instant::now();
    ctx.span().map_err(|e| {
        let status = if ideal_resource(&e) { Status::ResourceLimit } else { Status::Fail };
        CheckRecord::new("span_generation", status, e.to_string()).timed(start)
    })
}

fn span_record(basis: &SpanBasis, start: Instant) -> CheckRecord {
    let p = basis.params();
    let status = if check_c_vanishing(basis) { Status::Pass } else { Status::Fail };
    CheckRecord::new(
        "span_augmentation_vanishes",
        status,
        format!(
            "span over {} at universe length {}, seed length {}, {} generators: rank {}, {} support elements",
            basis.field(),
            p.max_len,
            p.seed_len,
            p.n_gens,
            basis.rank(),
            basis.universe().len()
        ),
    )
    .timed(start)
}

struct IpSuite;

impl Verifier for IpSuite {
    fn name(&self) -> &'static str {
        "ip"
    }
    fn summary(&self) -> &'static str {
        "inverse property x⁻¹(xy) = y = (yx)x⁻¹ on random pairs"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, free, start) = (&ctx.config, ctx.free(), Instant::now());
        let mut rng = ctx.rng();
        let mut tally = Tally::new();
        for _ in 0..cfg.samples {
            let pair = sample_element(free, &mut rng, cfg.n_gens, cfg.max_word_len)
                .and_then(|x| Ok((x, sample_element(free, &mut rng, cfg.n_gens, cfg.max_word_len)?)));
            let (out, res) = match &pair {
                Ok((x, y)) => word_outcome(free.check_ip(x, y)),
                Err(e) => word_outcome(Err(e.clone())),
            };
            tally.add(|| pair.as_ref().map(|(x, y)| format!("x = {x}, y = {y}")).unwrap_or_default(), out, res);
        }
        Ok(vec![tally.record("inverse_property", "pairs", start)])
    }
}

struct MoufangSuite;

impl Verifier for MoufangSuite {
    fn name(&self) -> &'static str {
        "moufang"
    }
    fn summary(&self) -> &'static str {
        "Moufang identity x(y·zy) = (xy·z)y on random triples"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, free, start) = (&ctx.config, ctx.free(), Instant::now());
        let mut rng = ctx.rng();
        let mut tally = Tally::new();
        for _ in 0..cfg.samples {
            let triple: Result<Vec<LoopElement>, WordError> =
                (0..3).map(|_| sample_element(free, &mut rng, cfg.n_gens, cfg.max_word_len)).collect();
            let (out, res) = match &triple {
                Ok(t) => word_outcome(free.check_moufang(&t[0], &t[1], &t[2])),
                Err(e) => word_outcome(Err(e.clone())),
            };
            let case = || triple.as_ref().map(|t| format!("x = {}, y = {}, z = {}", t[0], t[1], t[2])).unwrap_or_default();
            tally.add(case, out, res);
        }
        Ok(vec![tally.record("moufang_identity", "triples", start)])
    }
}

/// Every maximal reduction path of a random word ends in one class.
struct ConfluenceSuite;

impl Verifier for ConfluenceSuite {
    fn name(&self) -> &'static str {
        "lemma3"
    }
    fn summary(&self) -> &'static str {
        "all reduction paths of random words end in a single Moufang class"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, start) = (&ctx.config, Instant::now());
        let mut rng = ctx.rng();
        let mut violations = Vec::new();
        let mut refusals = 0usize;
        let mut explored = 0usize;
        for _ in 0..cfg.samples {
            let len = rng.gen_range(0..=cfg.max_word_len);
            let w = random_word(&mut rng, cfg.n_gens, len);
            match explore_reductions(&w, cfg.limits()) {
                Ok(o) if o.is_confluent() => explored += o.explored,
                Ok(o) => violations.push(format!(
                    "{w} -> {}",
                    o.terminals.iter().map(|c| c.canonical().to_string()).collect::<Vec<_>>().join(" | ")
                )),
                Err(e) if e.is_resource_limit() => refusals += 1,
                Err(e) => violations.push(format!("{w}: {e}")),
            }
        }
        // up to 1% of the corpus may be refused by the caps
        let status = if !violations.is_empty() {
            Status::Fail
        } else if refusals * 100 > cfg.samples {
            Status::ResourceLimit
        } else {
            Status::Pass
        };
        let detail = format!(
            "{} words, {} non-confluent, {refusals} refused by caps, {explored} classes explored",
            cfg.samples,
            violations.len()
        );
        let witness = (!violations.is_empty()).then(|| violations.iter().take(MAX_WITNESSES).cloned().collect::<Vec<_>>().join("; "));
        Ok(vec![CheckRecord::new("confluence", status, detail).with_witness(witness).timed(start)])
    }
}

/// The ideal/kernel lemma on a Cayley table.
struct FiniteIdealSuite;

impl Verifier for FiniteIdealSuite {
    fn name(&self) -> &'static str {
        "lemma1"
    }
    fn summary(&self) -> &'static str {
        "ωH = ker φ and its companions on a Cayley-table loop"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let l = ctx.inputs.cayley.as_ref().ok_or_else(|| VerifyError::Input("lemma1 needs a Cayley table".into()))?;
        let field = ctx.config.field;
        let input = |e: crate::error::FiniteLoopError| VerifyError::Input(e.to_string());
        let h = l.subloop_from_spec(&ctx.inputs.subloop).map_err(input)?;
        let h2 = match &ctx.inputs.second_subloop {
            Some(spec) => Some(l.subloop_from_spec(spec).map_err(input)?),
            None => None,
        };
        let names = |s: &crate::finite_loop::Subloop| {
            s.members().iter().map(|&i| l.labels()[i].as_str()).collect::<Vec<_>>().join(",")
        };
        let start = Instant::now();
        let mut records = Vec::new();
        for (tag, sub) in std::iter::once(("subloop", &h)).chain(h2.iter().map(|s| ("second_subloop", s))) {
            let rec = match l.normality_violation(sub) {
                None => CheckRecord::pass(format!("{tag}_normal"), format!("{{{}}} is normal", names(sub))),
                Some(v) => CheckRecord::new(format!("{tag}_normal"), Status::Fail, format!("{{{}}}: {v}", names(sub))),
            };
            records.push(rec.timed(start));
        }
        if records.iter().any(|r| r.status != Status::Pass) {
            return Ok(records);
        }
        let start = Instant::now();
        let (quot, _) = l.quotient_loop(&h).map_err(input)?;
        let moufang_ok = !l.is_moufang() || quot.is_moufang();
        records.push(
            CheckRecord::new(
                "quotient_loop",
                if moufang_ok { Status::Pass } else { Status::Fail },
                format!("|L/H| = {}, Latin square with identity, Moufang inherited: {moufang_ok}", quot.order()),
            )
            .timed(start),
        );
        let start = Instant::now();
        let dim = omega_h(l, &h, field).dim;
        let expected = l.order() - quot.order();
        records.push(
            CheckRecord::new(
                "omega_h_dimension",
                if dim == expected { Status::Pass } else { Status::Fail },
                format!("dim ωH = {dim}, |L| - |L/H| = {expected}"),
            )
            .timed(start),
        );
        let start = Instant::now();
        for item in verify_lemma1(l, &h, field, h2.as_ref()).map_err(input)? {
            let status = if item.passed { Status::Pass } else { Status::Fail };
            records.push(CheckRecord::new(format!("item{}_{}", item.item, item.name), status, item.detail).timed(start));
        }
        Ok(records)
    }
}

/// Circle-operation evaluation and the barred-basis isomorphism.
struct CircleSuite;

impl Verifier for CircleSuite {
    fn name(&self) -> &'static str {
        "lemma4"
    }
    fn summary(&self) -> &'static str {
        "u ↦ 1 - u turns words into circle products; φ respects products"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, alg) = (&ctx.config, &ctx.alg);
        let mut records = Vec::new();

        let start = Instant::now();
        let assignment: BTreeMap<u32, AlgebraElement> = (1..=cfg.n_gens)
            .map(|i| (i, alg.one_minus(&alg.free_loop().generator(i).expect("generator in range"))))
            .collect();
        let mut tally = Tally::new();
        match alg.free_loop().enumerate_universe(cfg.n_gens, cfg.max_word_len) {
            Ok(all) => {
                for u in &all {
                    let got = circle_word_eval(alg, u.word(), &assignment);
                    let res = got.as_ref().err().is_some_and(algebra_resource);
                    tally.add(|| u.to_string(), got.map(|x| x == alg.one_minus(u)).map_err(|e| e.to_string()), res);
                }
            }
            Err(e) => {
                let (out, res) = word_outcome(Err(e));
                tally.add(|| "enumeration".into(), out, res);
            }
        }
        records.push(tally.record("circle_word_eval", "elements", start));

        let start = Instant::now();
        let mut rng = ctx.rng();
        let mut tally = Tally::new();
        for _ in 0..cfg.samples {
            let pair = sample_sparse(alg, &mut rng, cfg.n_gens, cfg.max_word_len, 3)
                .and_then(|x| Ok((x.clone(), sample_sparse(alg, &mut rng, cfg.n_gens, cfg.max_word_len, 3)?)));
            let out = pair.as_ref().map_err(|e| e.clone()).and_then(|(x, y)| {
                Ok(phi_iso(&alg.mul(x, y)?) == circle_product(alg, &phi_iso(x), &phi_iso(y))?)
            });
            let res = out.as_ref().err().is_some_and(algebra_resource);
            let case = || pair.as_ref().map(|(x, y)| format!("x = {x}, y = {y}")).unwrap_or_default();
            tally.add(case, out.map_err(|e| e.to_string()), res);
        }
        records.push(tally.record("phi_iso_product", "pairs", start));
        Ok(records)
    }
}

/// Circle associators and the barred augmentation.
struct AugmentationSuite;

impl Verifier for AugmentationSuite {
    fn name(&self) -> &'static str {
        "lemma5"
    }
    fn summary(&self) -> &'static str {
        "circle associator identity and vanishing of the barred augmentation on the span"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, alg) = (&ctx.config, &ctx.alg);
        let mut rng = ctx.rng();
        let mut records = Vec::new();
        let len = cfg.max_word_len.min(3);

        let start = Instant::now();
        let mut tally = Tally::new();
        for _ in 0..cfg.samples {
            let t: Result<Vec<LoopElement>, WordError> =
                (0..3).map(|_| sample_element(alg.free_loop(), &mut rng, cfg.n_gens, len)).collect();
            let out = t.as_ref().map_err(|e| AlgebraError::Word(e.clone())).and_then(|t| check_lemma5_identity(alg, &t[0], &t[1], &t[2]));
            let res = out.as_ref().err().is_some_and(algebra_resource);
            let case = || t.as_ref().map(|t| format!("a = {}, b = {}, c = {}", t[0], t[1], t[2])).unwrap_or_default();
            tally.add(case, out.map_err(|e| e.to_string()), res);
        }
        records.push(tally.record("circle_associator", "triples", start));

        let start = Instant::now();
        let mut tally = Tally::new();
        for _ in 0..cfg.samples {
            let x = sample_sparse(alg, &mut rng, cfg.n_gens, cfg.max_word_len, 4);
            let out = x.as_ref().map(|x| x.augmentation() == c_aug(&phi_iso(x))).map_err(|e| e.clone());
            let res = out.as_ref().err().is_some_and(algebra_resource);
            let case = || x.as_ref().map(|x| x.to_string()).unwrap_or_default();
            tally.add(case, out.map_err(|e| e.to_string()), res);
        }
        records.push(tally.record("augmentation_transport", "elements", start));

        let start = Instant::now();
        match span_or_record(ctx) {
            Ok(basis) => records.push(span_record(&basis, start)),
            Err(r) => records.push(r),
        }
        Ok(records)
    }
}

/// `1 - u` stays outside the truncated span for every nontrivial `u`.
struct EmbeddingSuite;

impl Verifier for EmbeddingSuite {
    fn name(&self) -> &'static str {
        "theorem1"
    }
    fn summary(&self) -> &'static str {
        "no nontrivial 1 - u lies in the truncated ideal span"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, alg) = (&ctx.config, &ctx.alg);
        let start = Instant::now();
        let basis = match span_or_record(ctx) {
            Ok(b) => b,
            Err(r) => return Ok(vec![r]),
        };
        let mut records = vec![span_record(&basis, start)];
        let elements = match alg.free_loop().enumerate_universe(cfg.n_gens, cfg.max_word_len) {
            Ok(e) => e,
            Err(e) => {
                let status = if e.is_resource_limit() { Status::ResourceLimit } else { Status::Fail };
                records.push(CheckRecord::new("enumeration", status, e.to_string()));
                return Ok(records);
            }
        };
        for u in elements.iter().filter(|u| !u.is_identity()) {
            let start = Instant::now();
            let rec = match check_embedding(alg, u, &basis) {
                Ok(v) if !v.member => CheckRecord::pass(format!("embedding {u}"), format!("1 - {u} is a non-member ({})", v.caveat())),
                Ok(_) => CheckRecord::new(format!("embedding {u}"), Status::Fail, format!("1 - {u} lies in the span")),
                Err(e) => {
                    let status = if ideal_resource(&e) { Status::ResourceLimit } else { Status::Fail };
                    CheckRecord::new(format!("embedding {u}"), status, e.to_string())
                }
            };
            records.push(rec.timed(start));
        }
        Ok(records)
    }
}

/// `(x,x,y)` and `(y,x,x)` vanish modulo the span.
struct AlternativitySuite;

impl Verifier for AlternativitySuite {
    fn name(&self) -> &'static str {
        "alternativity"
    }
    fn summary(&self) -> &'static str {
        "the quotient by the ideal span is alternative on random sparse pairs"
    }
    fn run(&self, ctx: &VerifyContext) -> Result<Vec<CheckRecord>, VerifyError> {
        let (cfg, alg) = (&ctx.config, &ctx.alg);
        let start = Instant::now();
        let basis = match span_or_record(ctx) {
            Ok(b) => b,
            Err(r) => return Ok(vec![r]),
        };
        let mut records = vec![span_record(&basis, start)];
        // associators of terms of length ≤ L/3 stay inside the truncation
        let len = (cfg.universe_len / 3).max(1);
        let start = Instant::now();
        let mut rng = ctx.rng();
        let mut tally = Tally::new();
        for _ in 0..cfg.samples {
            let pair = sample_sparse(alg, &mut rng, cfg.n_gens, len, 3)
                .and_then(|x| Ok((x.clone(), sample_sparse(alg, &mut rng, cfg.n_gens, len, 3)?)));
            let out = pair.as_ref().map_err(|e| IdealError::Algebra(e.clone())).and_then(|(x, y)| check_alternative(alg, x, y, &basis));
            let res = out.as_ref().err().is_some_and(ideal_resource);
            let case = || pair.as_ref().map(|(x, y)| format!("x = {x}, y = {y}")).unwrap_or_default();
            tally.add(case, out.map_err(|e| e.to_string()), res);
        }
        records.push(tally.record("random_pairs", "pairs", start));

        let start = Instant::now();
        records.push(structured_case(alg, &basis).timed(start));
        Ok(records)
    }
}

/// `(a+b, a+b, c)` collapses to the generator `v1(a, b, c)`.
fn structured_case(alg: &LoopAlgebra, basis: &SpanBasis) -> CheckRecord {
    let n = basis.params().n_gens;
    let run = || -> Result<(bool, String), IdealError> {
        let free = alg.free_loop();
        let g = |i: u32| free.generator(((i - 1) % n) + 1).map_err(IdealError::from);
        let (a, b, c) = (g(1)?, g(2)?, g(3)?);
        let x = alg.basis(a.clone()).add(&alg.basis(b.clone()))?;
        let assoc = alg.associator(&x, &x, &alg.basis(c.clone()))?;
        let gen = v1(alg, &a, &b, &c)?;
        let member = membership(&assoc, basis)?.member;
        Ok((assoc == gen && member, format!("(a+b, a+b, c) = {assoc} for a = {a}, b = {b}, c = {c}; member: {member}")))
    };
    match run() {
        Ok((true, d)) => CheckRecord::pass("structured_case", d),
        Ok((false, d)) => CheckRecord::new("structured_case", Status::Fail, d),
        Err(e) => CheckRecord::new("structured_case", Status::Fail, e.to_string()),
    }
}
