use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use k0pn::exceptional::{ExceptionalTuple, MutationWord};
use k0pn::isometry::{self, GeneratorSet, IsometryDescriptor, DEFAULT_SEARCH_BUDGET};
use k0pn::json::{
    format_rational, ClassJson, DescriptorJson, GeneratorSetJson, IsometryInput, MatrixJson,
    PartialTableJson, TupleJson,
};
use k0pn::{tensor, Basis, Error, K0Class, Matrix, ProjectiveContext};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;
const EXIT_BUDGET: u8 = 4;

const UNDO_DEPTH: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

/// Exact computations in K0 of projective space.
///
/// JSON arguments are given inline (`'{"n":2,...}'`), as a file path, or as
/// `-` for standard input.
#[derive(Debug, Parser)]
#[command(name = "k0pn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Dimension of the projective space.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Basis: line_bundle, structure_sheaf or hilbert.
    #[arg(long, global = true)]
    basis: Option<Basis>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Candidate budget for the generator search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Source for JSON arguments that are not given on the command line.
    #[arg(long, global = true, value_name = "FILE|-")]
    input: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gram matrix of the Euler form (line-bundle basis by default).
    Gram,
    /// Euler pairing chi(E, F).
    Chi {
        e: Option<String>,
        f: Option<String>,
    },
    /// Re-express a class in the basis given by --basis.
    Convert { e: Option<String> },
    /// Tensor product E (x) F, in the basis of E.
    Tensor {
        e: Option<String>,
        f: Option<String>,
    },
    /// Test a descriptor or matrix for being a lattice isometry.
    IsomCheck { isometry: Option<String> },
    /// Generators of the identity component of the lattice isometry group.
    Generators,
    /// Apply a braid word such as "g0 g1' g0" to a tuple (default: O, ..., O(n)).
    Mutate { word: String, tuple: Option<String> },
    /// Interactive mutation session on stdin.
    Repl,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
    payload: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
            payload: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => EXIT_USAGE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_SEMANTIC,
        };
        Failure {
            code,
            message: e.to_string(),
            payload: None,
        }
    }
}

type CmdResult = Result<Output, Failure>;

/// What a command prints: JSON and pretty renderings of the same values.
struct Output {
    json: Value,
    pretty: String,
    code: u8,
}

impl Output {
    fn ok(json: impl Serialize, pretty: String) -> Self {
        Output {
            json: serde_json::to_value(json).expect("serializable"),
            pretty,
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Repl => run_repl(&cli),
        _ => run(&cli),
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Json if out.json.is_null() => {}
                Format::Json => println!("{}", out.json),
                Format::Pretty => print!("{}", out.pretty),
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            if let Some(p) = &f.payload {
                println!("{p}");
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let mut inputs = Inputs::new(cli.input.as_deref());
    match &cli.command {
        Command::Gram => cmd_gram(require_n(cli)?, cli.basis.unwrap_or(Basis::LineBundle)),
        Command::Chi { e, f } => {
            let e = inputs.class(e.as_deref())?;
            let f = inputs.class(f.as_deref())?;
            cmd_chi(&e, &f)
        }
        Command::Convert { e } => {
            let e = inputs.class(e.as_deref())?;
            let basis = cli
                .basis
                .ok_or_else(|| Failure::usage("convert needs --basis"))?;
            cmd_convert(&e, basis)
        }
        Command::Tensor { e, f } => {
            let e = inputs.class(e.as_deref())?;
            let f = inputs.class(f.as_deref())?;
            cmd_tensor(&e, &f)
        }
        Command::IsomCheck { isometry } => {
            let v = inputs.value(isometry.as_deref())?;
            let input: IsometryInput = from_value(v)?;
            cmd_isom_check(&input, cli.n)
        }
        Command::Generators => cmd_generators(require_n(cli)?, cli.budget),
        Command::Mutate { word, tuple } => {
            let word: MutationWord = word.parse().map_err(Failure::from)?;
            let tuple = match (tuple.as_deref(), cli.input.is_some()) {
                (None, false) => None,
                (src, _) => Some(from_value::<TupleJson>(inputs.value(src)?)?),
            };
            cmd_mutate(tuple, &word, cli.n)
        }
        Command::Repl => unreachable!("handled in main"),
    }
}

fn require_n(cli: &Cli) -> Result<usize, Failure> {
    cli.n.ok_or_else(|| Failure::usage("missing --n"))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::usage(format!("malformed JSON: {e}")))
}

/// Resolves JSON arguments. Arguments missing on the command line are taken
/// in order from `--input`, which then holds a single value or an array.
struct Inputs<'a> {
    source: Option<&'a str>,
    pending: Option<Vec<Value>>,
}

impl<'a> Inputs<'a> {
    fn new(source: Option<&'a str>) -> Self {
        Inputs {
            source,
            pending: None,
        }
    }

    fn value(&mut self, arg: Option<&str>) -> Result<Value, Failure> {
        if let Some(a) = arg {
            return parse_json(&read_source(a)?);
        }
        if self.pending.is_none() {
            let src = self.source.ok_or_else(|| {
                Failure::usage("missing JSON argument (give it inline, as a file, or via --input)")
            })?;
            let v = parse_json(&read_source(src)?)?;
            let mut items = match v {
                Value::Array(items) => items,
                other => vec![other],
            };
            items.reverse();
            self.pending = Some(items);
        }
        self.pending
            .as_mut()
            .and_then(Vec::pop)
            .ok_or_else(|| Failure::usage("--input holds too few values"))
    }

    fn class(&mut self, arg: Option<&str>) -> Result<K0Class, Failure> {
        let j: ClassJson = from_value(self.value(arg)?)?;
        Ok(j.to_class()?)
    }
}

fn read_source(src: &str) -> Result<String, Failure> {
    let t = src.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(src).map_err(|e| Failure::usage(format!("reading {src}: {e}")))
}

fn parse_json(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::usage(format!("malformed JSON: {e}")))
}

fn cmd_gram(n: usize, basis: Basis) -> CmdResult {
    let ctx = ProjectiveContext::new(n);
    let g = ctx.gram(basis);
    Ok(Output::ok(
        MatrixJson::new(n, basis, &g.entries),
        format!("{}\n", g.entries),
    ))
}

fn context_for(e: &K0Class, f: &K0Class) -> Result<ProjectiveContext, Failure> {
    if e.n() != f.n() {
        return Err(Error::DimensionMismatch {
            left: e.n(),
            right: f.n(),
        }
        .into());
    }
    Ok(ProjectiveContext::new(e.n()))
}

fn cmd_chi(e: &K0Class, f: &K0Class) -> CmdResult {
    let ctx = context_for(e, f)?;
    let v = format_rational(&ctx.chi(e, f)?);
    Ok(Output::ok(&v, format!("{v}\n")))
}

fn pretty_class(e: &K0Class) -> String {
    let coeffs: Vec<String> = e.coeffs().iter().map(format_rational).collect();
    format!("{} [{}]\n{e}\n", e.basis(), coeffs.join(", "))
}

fn cmd_convert(e: &K0Class, basis: Basis) -> CmdResult {
    let ctx = ProjectiveContext::new(e.n());
    let out = ctx.convert(e, basis)?;
    Ok(Output::ok(ClassJson::from(&out), pretty_class(&out)))
}

fn cmd_tensor(e: &K0Class, f: &K0Class) -> CmdResult {
    let ctx = context_for(e, f)?;
    let out = tensor::tensor(&ctx, e, f)?;
    Ok(Output::ok(ClassJson::from(&out), pretty_class(&out)))
}

fn cmd_isom_check(input: &IsometryInput, n_flag: Option<usize>) -> CmdResult {
    let (ctx, desc, matrix_lattice) = match input {
        IsometryInput::Descriptor(d) => {
            let d = d.to_descriptor(n_flag)?;
            (ProjectiveContext::new(d.n()), d, None)
        }
        IsometryInput::Operator(op) => {
            let ctx = ProjectiveContext::new(op.n()?);
            let m = op.to_matrix(&ctx, Basis::LineBundle)?;
            let d = isometry::classify_isometry(&ctx, &m)?;
            let integral = m.in_basis(&ctx, Basis::LineBundle).entries().is_integral();
            (ctx, d, Some(integral))
        }
    };
    let obstruction = isometry::lattice_obstruction(&ctx, &desc);
    let lattice = obstruction.is_none();
    if let Some(m) = matrix_lattice {
        if m != lattice {
            return Err(Error::VerificationFailed(
                "matrix and descriptor lattice tests disagree".into(),
            )
            .into());
        }
    }
    let tensor_class = isometry::tensoring_class(&ctx, &desc);
    let json = json!({
        "n": ctx.n(),
        "lattice": lattice,
        "reason": obstruction,
        "classification": DescriptorJson::without_n(&desc),
        "tensor_class": ClassJson::from(&tensor_class),
    });
    let mut pretty = format!(
        "lattice: {lattice}\nsign: {}\nisometry: {desc}\ntensor class: {tensor_class}\n",
        desc.sign().to_i64()
    );
    if let Some(r) = &obstruction {
        pretty.push_str(&format!("reason: {r}\n"));
    }
    Ok(Output {
        json,
        pretty,
        code: if lattice { 0 } else { EXIT_NEGATIVE },
    })
}

fn pretty_generators(ctx: &ProjectiveContext, g: &GeneratorSet) -> String {
    let mut s = format!("n = {}, rank {}\n", g.n, g.rank());
    for (i, d) in g.generators.iter().enumerate() {
        let odd: Vec<String> = d.odd_coeffs().iter().map(format_rational).collect();
        s.push_str(&format!(
            "g{i}: ({})  {d}\n    tensor class: {}\n",
            odd.join(", "),
            isometry::tensoring_class(ctx, d)
        ));
    }
    s.push_str(&format!("hnf (denominator {}):\n", g.denominator));
    for row in &g.hnf {
        let r: Vec<String> = row.iter().map(ToString::to_string).collect();
        s.push_str(&format!("    [{}]\n", r.join(", ")));
    }
    s
}

fn cmd_generators(n: usize, budget: u64) -> CmdResult {
    let ctx = ProjectiveContext::new(n);
    match isometry::compute_generators(&ctx, budget) {
        Ok(g) => Ok(Output::ok(
            GeneratorSetJson::new(&ctx, &g),
            pretty_generators(&ctx, &g),
        )),
        Err(Error::BudgetExceeded {
            budget,
            visited,
            partial,
        }) => {
            let p = PartialTableJson::new(n, budget, visited, &partial);
            Err(Failure {
                code: EXIT_BUDGET,
                message: format!(
                    "search budget of {budget} candidates exhausted after {visited}; {} residues found so far",
                    partial.len()
                ),
                payload: Some(serde_json::to_value(p).expect("serializable")),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn pretty_tuple(ctx: &ProjectiveContext, t: &ExceptionalTuple) -> String {
    let mut s = String::new();
    for (i, e) in t.classes().iter().enumerate() {
        s.push_str(&format!("E{i} = {e}\n"));
    }
    match t.gram(ctx) {
        Ok(g) => s.push_str(&format!("gram: {g}\n")),
        Err(e) => s.push_str(&format!("gram: error: {e}\n")),
    }
    s.push_str(&format!(
        "exceptional: {}\ndeterminant: {}\n",
        t.is_exceptional(ctx),
        t.determinant()
    ));
    s
}

fn cmd_mutate(tuple: Option<TupleJson>, word: &MutationWord, n_flag: Option<usize>) -> CmdResult {
    let (ctx, t) = match tuple {
        Some(j) => {
            let ctx = ProjectiveContext::new(j.n);
            let t = j.to_tuple(&ctx)?;
            (ctx, t)
        }
        None => {
            let n = n_flag.ok_or_else(|| Failure::usage("mutate needs a tuple or --n"))?;
            let ctx = ProjectiveContext::new(n);
            let t = ExceptionalTuple::standard(&ctx, 0);
            (ctx, t)
        }
    };
    let out = t.apply_word(&ctx, word)?;
    Ok(Output::ok(
        TupleJson::with_report(&ctx, &out),
        pretty_tuple(&ctx, &out),
    ))
}

struct Repl {
    ctx: ProjectiveContext,
    current: ExceptionalTuple,
    history: Vec<ExceptionalTuple>,
    generators: Option<GeneratorSet>,
    budget: u64,
    format: Format,
}

enum Step {
    Show,
    Gram,
    Quit,
}

impl Repl {
    fn push(&mut self, next: ExceptionalTuple) {
        if self.history.len() == UNDO_DEPTH {
            self.history.remove(0);
        }
        self.history
            .push(std::mem::replace(&mut self.current, next));
    }

    fn generator(&mut self, index: usize) -> Result<IsometryDescriptor, String> {
        if self.generators.is_none() {
            let g =
                isometry::compute_generators(&self.ctx, self.budget).map_err(|e| e.to_string())?;
            self.generators = Some(g);
        }
        let gens = &self.generators.as_ref().expect("just set").generators;
        gens.get(index)
            .cloned()
            .ok_or_else(|| format!("generator index {index} out of range (0..{})", gens.len()))
    }

    fn step(&mut self, line: &str) -> Result<Step, String> {
        let mut parts = line.split_whitespace();
        match parts.next() {
            None => Ok(Step::Show),
            Some("quit" | "exit") => Ok(Step::Quit),
            Some("gram") => Ok(Step::Gram),
            Some("undo") => {
                let prev = self.history.pop().ok_or("nothing to undo")?;
                self.current = prev;
                Ok(Step::Show)
            }
            Some("isom") => {
                let arg = parts.next().ok_or("usage: isom <index>")?;
                if parts.next().is_some() {
                    return Err("usage: isom <index>".into());
                }
                let index: usize = arg
                    .parse()
                    .map_err(|_| format!("bad generator index {arg:?}"))?;
                let d = self.generator(index)?;
                let next = self
                    .current
                    .apply_isometry(&self.ctx, &d)
                    .map_err(|e| e.to_string())?;
                self.push(next);
                Ok(Step::Show)
            }
            Some(_) => {
                let word: MutationWord = line.parse().map_err(|e: Error| e.to_string())?;
                let next = self
                    .current
                    .apply_word(&self.ctx, &word)
                    .map_err(|e| e.to_string())?;
                self.push(next);
                Ok(Step::Show)
            }
        }
    }

    fn render(&self, out: &mut impl Write, gram_only: bool) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let v = if gram_only {
                    let g = self
                        .current
                        .gram(&self.ctx)
                        .unwrap_or_else(|_| Matrix::zeros(0, 0));
                    serde_json::to_value(MatrixJson::new(self.ctx.n(), Basis::LineBundle, &g))
                } else {
                    serde_json::to_value(TupleJson::with_report(&self.ctx, &self.current))
                };
                writeln!(out, "{}", v.expect("serializable"))
            }
            Format::Pretty if gram_only => match self.current.gram(&self.ctx) {
                Ok(g) => writeln!(out, "{g}"),
                Err(e) => writeln!(out, "error: {e}"),
            },
            Format::Pretty => write!(out, "{}", pretty_tuple(&self.ctx, &self.current)),
        }
    }
}

fn run_repl(cli: &Cli) -> CmdResult {
    let n = require_n(cli)?;
    let ctx = ProjectiveContext::new(n);
    let current = ExceptionalTuple::standard(&ctx, 0);
    let mut repl = Repl {
        ctx,
        current,
        history: Vec::new(),
        generators: None,
        budget: cli.budget,
        format: cli.format,
    };
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: io::Error| Failure {
        code: EXIT_SEMANTIC,
        message: e.to_string(),
        payload: None,
    };
    repl.render(&mut out, false).map_err(io_err)?;
    for line in stdin.lock().lines() {
        let line = line.map_err(io_err)?;
        match repl.step(line.trim()) {
            Ok(Step::Quit) => break,
            Ok(Step::Gram) => repl.render(&mut out, true).map_err(io_err)?,
            Ok(Step::Show) => repl.render(&mut out, false).map_err(io_err)?,
            Err(msg) => writeln!(out, "error: {msg}").map_err(io_err)?,
        }
        out.flush().map_err(io_err)?;
    }
    Ok(Output {
        json: Value::Null,
        pretty: String::new(),
        code: 0,
    })
}
