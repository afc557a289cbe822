use std::io::Write;
use std::sync::Arc;

use moufang::algebra::{Field, LoopAlgebra};
use moufang::error::{AlgebraError, IdealError, WordError};
use moufang::finite_loop::load_cayley;
use moufang::free_loop::FreeMoufangLoop;
use moufang::ideal::{generate_ideal_span, membership, SpanBasis};
use moufang::parse::parse_word;
use moufang::verify::{OutputMode, Registry, RunConfig, Status, VerifyContext, VerifyInputs};
use serde_json::{json, Value};

use crate::{Cli, Command, ConfigFlags, IdealCommand, VerifyArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

/// A command that could not produce its result.
enum Failure {
    Usage(String),
    Resource(String),
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        if e.is_resource_limit() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Word(w) => w.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<IdealError> for Failure {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::Algebra(a) => a.into(),
            IdealError::DimensionOverflow { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Runs one command, writing its result to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> u8 {
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli.command, &config, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RESOURCE
        }
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut c = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    let ConfigFlags { field, n_gens, max_word_len, universe_len, seed_len, closure_cap, path_budget, rng_seed, samples } =
        &cli.overrides;
    if let Some(f) = field {
        c.field = Field::parse(f).map_err(|e| e.to_string())?;
    }
    macro_rules! set {
        ($($name:ident),*) => { $( if let Some(v) = $name { c.$name = *v; } )* };
    }
    set!(n_gens, max_word_len, universe_len, seed_len, closure_cap, path_budget, rng_seed, samples);
    if cli.json {
        c.output = OutputMode::Json;
    }
    c.validate().map_err(|e| e.to_string())?;
    Ok(c)
}

fn emit(out: &mut dyn Write, config: &RunConfig, text: &str, value: Value) {
    let _ = match config.output {
        OutputMode::Text => writeln!(out, "{text}"),
        OutputMode::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json")),
    };
}

fn dispatch(command: &Command, config: &RunConfig, out: &mut dyn Write) -> Result<u8, Failure> {
    let free = Arc::new(FreeMoufangLoop::new(config.limits()));
    let element = |s: &str| -> Result<_, Failure> { Ok(free.element(&parse_word(s)?)?) };
    match command {
        Command::Nf { expr } => {
            let u = element(expr)?;
            emit(out, config, &u.to_string(), json!({"command": "nf", "input": expr, "result": u.to_string()}));
        }
        Command::Eq { left, right } => {
            let equal = free.eq(&element(left)?, &element(right)?);
            emit(out, config, &equal.to_string(), json!({"command": "eq", "input": [left, right], "result": equal}));
        }
        Command::Mul { left, right } => {
            let p = free.mul(&element(left)?, &element(right)?)?;
            emit(out, config, &p.to_string(), json!({"command": "mul", "input": [left, right], "result": p.to_string()}));
        }
        Command::Inv { expr } => {
            let i = free.inv(&element(expr)?);
            emit(out, config, &i.to_string(), json!({"command": "inv", "input": expr, "result": i.to_string()}));
        }
        Command::Assoc { a, b, c } => {
            let alg = LoopAlgebra::new(config.field, free.clone());
            let r = alg.associator(&alg.parse(a)?, &alg.parse(b)?, &alg.parse(c)?)?;
            let value = json!({"command": "assoc", "input": [a, b, c], "field": config.field.to_string(), "result": r.to_string()});
            emit(out, config, &r.to_string(), value);
        }
        Command::Verify(args) => return verify(args, config, out),
        Command::Ideal(IdealCommand::Span { out: path }) => {
            let alg = LoopAlgebra::new(config.field, free.clone());
            let basis = generate_ideal_span(&alg, &config.span_params())?;
            std::fs::write(path, basis.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let text = format!(
                "wrote span of rank {} over {} ({} support elements) to {}",
                basis.rank(),
                basis.field(),
                basis.universe().len(),
                path.display()
            );
            let value = json!({
                "command": "ideal span",
                "field": basis.field().to_string(),
                "rank": basis.rank(),
                "support": basis.universe().len(),
                "params": basis.params(),
            });
            emit(out, config, &text, value);
        }
        Command::Ideal(IdealCommand::Member { basis, elem }) => {
            let text = std::fs::read_to_string(basis).map_err(|e| Failure::Usage(format!("{}: {e}", basis.display())))?;
            let span = SpanBasis::from_json(&text, &free)?;
            let alg = LoopAlgebra::new(span.field(), free.clone());
            let v = membership(&alg.parse(elem)?, &span)?;
            let verdict = if v.member { "member" } else { "non-member (bounded)" };
            let caveat = v.caveat();
            let value = json!({
                "command": "ideal member",
                "input": elem,
                "member": v.member,
                "residue": v.residue.to_string(),
                "rank": v.rank,
                "support": v.universe_len,
                "params": v.params,
                "caveat": caveat,
            });
            emit(out, config, &format!("{verdict}\nresidue: {}\n{caveat}", v.residue), value);
        }
    }
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, config: &RunConfig, out: &mut dyn Write) -> Result<u8, Failure> {
    let registry = Registry::default();
    if registry.get(&args.target).is_none() {
        let names: Vec<&str> = registry.names().collect();
        return Err(Failure::Usage(format!("unknown target {:?}; expected one of {}", args.target, names.join(", "))));
    }
    let cayley = match &args.cayley {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Some(load_cayley(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let inputs = VerifyInputs { cayley, subloop: args.subloop.clone(), second_subloop: args.second_subloop.clone() };
    let ctx = VerifyContext::new(config.clone(), inputs);
    let report = registry.run(&args.target, &ctx).map_err(|e| Failure::Usage(e.to_string()))?;
    let _ = match config.output {
        OutputMode::Text => write!(out, "{}", report.to_text()),
        OutputMode::Json => writeln!(out, "{}", report.to_json()),
    };
    Ok(match report.status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_CHECK_FAILED,
        Status::ResourceLimit => EXIT_RESOURCE,
    })
}
