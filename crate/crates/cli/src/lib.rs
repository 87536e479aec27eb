//! The `chainform` command: check, transform, solve, repl and stats.

use std::fmt;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use chainform::chainir::{compile_to_registry, ChainProgram, Registry, TransformMode};
use chainform::engines::{EngineError, Interp, Outcome, Unification, DEFAULT_BUDGET};
use chainform::forms::{check, check_moded, Form};
use chainform::syntax::{parse_goal, parse_program, print_program, Goal, SourceProgram};
use chainform::transform::{compile_goal, format_bindings, transform_definite, transform_moded, Bindings, GoalPlan};
use clap::{Parser, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "chainform",
    version,
    about = "Transform logic programs into chain form and evaluate goals against it"
)]
pub struct Cli {
    pub command: Command,
    /// Program file; for `stats`, a file or a directory of `.pl` files.
    pub file: PathBuf,
    /// Forms to check (comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub form: Vec<FormArg>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = EngineArg::Abcde)]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value_t = UniArg::Auto)]
    pub uni: UniArg,
    /// Goal to solve, e.g. `s([a,b],Y,Z)`.
    #[arg(short = 'g', long = "goal")]
    pub goal: Option<String>,
    /// Maximum number of composition steps per evaluation.
    #[arg(long, env = "CHAINFORM_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Transform,
    Solve,
    Repl,
    Stats,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormArg {
    Moded,
    Chain,
    Gchain,
    Prechain,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Form {
        match f {
            FormArg::Moded => Form::Moded,
            FormArg::Chain => Form::Chain,
            FormArg::Gchain => Form::GChain,
            FormArg::Prechain => Form::Prechain,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Moded,
    Definite,
    Auto,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineArg {
    Abcde,
    Continuation,
    Stream,
    Bounded,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniArg {
    Match,
    Unify,
    Auto,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Jsonl,
}

/// Why a command did not succeed; each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or unparsable input, or a bad goal.
    Input(String),
    /// A check or a precondition failed.
    Check(String),
    Budget(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Check(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        match e {
            EngineError::BudgetExhausted(_) => Failure::Budget(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// Runs one command. Returns the process exit status; diagnostics go to
/// `err`.
pub fn run(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.output {
        Some(path) => match fs::File::create(path) {
            Ok(mut f) => dispatch(cli, input, &mut f, out),
            Err(e) => Err(Failure::Input(format!("{}: {e}", path.display()))),
        },
        None => {
            let mut sink = Vec::new();
            let r = dispatch(cli, input, out, &mut sink);
            let _ = err.write_all(&sink);
            r
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

/// `out` receives the command's output; `side` the transform summary.
fn dispatch(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write, side: &mut dyn Write) -> Res<i32> {
    match cli.command {
        Command::Check => cmd_check(cli, out),
        Command::Transform => cmd_transform(cli, out, side),
        Command::Solve => cmd_solve(cli, out),
        Command::Repl => cmd_repl(cli, input, out),
        Command::Stats => cmd_stats(cli, out),
    }
}

pub fn load_program(path: &Path) -> Res<SourceProgram> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut p = parse_program(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    p.name = stem(path);
    Ok(p)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn cmd_check(cli: &Cli, out: &mut dyn Write) -> Res<i32> {
    let p = load_program(&cli.file)?;
    let forms: Vec<Form> = if cli.form.is_empty() {
        vec![if p.modes.is_empty() { Form::Chain } else { Form::Moded }]
    } else {
        cli.form.iter().map(|f| Form::from(*f)).collect()
    };
    let mut ok = true;
    for form in forms {
        match check(&p, form) {
            Ok(report) => {
                ok &= report.holds;
                writeln!(out, "{report}")?;
            }
            Err(e) => {
                ok = false;
                writeln!(out, "{form}: fails\n  {e}")?;
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

/// The transformation `--mode` asks for. `auto` picks the moded one when
/// every predicate has a mode directive and the moded conditions hold.
pub fn choose_mode(p: &SourceProgram, mode: ModeArg) -> TransformMode {
    match mode {
        ModeArg::Moded => TransformMode::Moded,
        ModeArg::Definite => TransformMode::Definite,
        ModeArg::Auto => match check_moded(p) {
            Ok(r) if r.holds => TransformMode::Moded,
            _ => TransformMode::Definite,
        },
    }
}

pub fn transform(p: &SourceProgram, mode: TransformMode) -> Res<ChainProgram> {
    match mode {
        TransformMode::Moded => transform_moded(p).map_err(|e| Failure::Check(e.to_string())),
        TransformMode::Definite => Ok(transform_definite(p)),
    }
}

fn cmd_transform(cli: &Cli, out: &mut dyn Write, side: &mut dyn Write) -> Res<i32> {
    let p = load_program(&cli.file)?;
    let chain = transform(&p, choose_mode(&p, cli.mode))?;
    out.write_all(print_program(&chain).as_bytes())?;
    writeln!(side, "{} → {}", p.clauses.len(), chain.len())?;
    Ok(0)
}

/// A transformed program ready for goals.
pub struct Session {
    pub source: SourceProgram,
    pub chain: ChainProgram,
    pub registry: Registry,
    pub mode: TransformMode,
}

impl Session {
    pub fn open(cli: &Cli) -> Res<Session> {
        let source = load_program(&cli.file)?;
        let mode = choose_mode(&source, cli.mode);
        let chain = transform(&source, mode)?;
        let registry = compile_to_registry(&chain).map_err(|e| Failure::Check(e.to_string()))?;
        Ok(Session {
            source,
            chain,
            registry,
            mode,
        })
    }

    pub fn plan(&self, goal: &str) -> Res<(Goal, GoalPlan)> {
        let g = parse_goal(goal).map_err(|e| Failure::Input(format!("goal: {e}")))?;
        let plan = compile_goal(&g, &self.chain, self.mode).map_err(|e| Failure::Input(e.to_string()))?;
        Ok((g, plan))
    }

    /// `auto` matches iff the registry is G-chain and the start term ground.
    pub fn unification(&self, plan: &GoalPlan, uni: UniArg) -> Res<Unification> {
        let matchable = self.registry.is_gchain() && plan.initial.is_ground();
        match uni {
            UniArg::Unify => Ok(Unification::Unify),
            UniArg::Auto if matchable => Ok(Unification::Match),
            UniArg::Auto => Ok(Unification::Unify),
            UniArg::Match if matchable => Ok(Unification::Match),
            UniArg::Match => Err(Failure::Check(
                "matching needs a G-chain program and a ground goal input; use --uni unify".into(),
            )),
        }
    }

    fn decode(&self, plan: &GoalPlan, answers: &[chainform::terms::Term]) -> Res<Vec<Bindings>> {
        plan.decode_all(answers).map_err(|e| Failure::Check(e.to_string()))
    }
}

fn bindings_json(b: &Bindings) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> =
        b.iter().map(|(v, t)| (v.to_string(), json!(t.to_string()))).collect();
    serde_json::Value::Object(map)
}

fn cmd_solve(cli: &Cli, out: &mut dyn Write) -> Res<i32> {
    let goal = cli
        .goal
        .as_deref()
        .ok_or_else(|| Failure::Input("solve needs a goal (-g)".into()))?;
    let s = Session::open(cli)?;
    let (_, plan) = s.plan(goal)?;
    let uni = s.unification(&plan, cli.uni)?;
    let interp = Interp::new(&s.registry, uni).with_budget(cli.budget);
    let (x, qs) = (&plan.initial, plan.continuations.as_slice());
    if cli.engine == EngineArg::Bounded {
        let r = interp.bounded(x, qs)?;
        let answer = match &r.outcome {
            Outcome::Ans(t) => s.decode(&plan, std::slice::from_ref(t))?.pop(),
            Outcome::NoAns => None,
        };
        match cli.format {
            Format::Text => {
                writeln!(
                    out,
                    "{}",
                    answer
                        .as_ref()
                        .map(format_bindings)
                        .unwrap_or_else(|| "no answers".into())
                )?;
                writeln!(out, "resource={}", r.resource)?;
            }
            Format::Jsonl => {
                let a = answer.as_ref().map(bindings_json).unwrap_or(serde_json::Value::Null);
                writeln!(out, "{}", json!({"answer": a, "resource": r.resource}))?;
            }
        }
        return Ok(0);
    }
    let raw = match cli.engine {
        EngineArg::Abcde => interp.abcde(x, qs)?,
        EngineArg::Continuation => interp.continuation(x, qs)?,
        EngineArg::Stream => interp.stream_term(x, qs)?,
        EngineArg::Bounded => unreachable!(),
    };
    let answers = s.decode(&plan, &raw)?;
    match cli.format {
        Format::Text if answers.is_empty() => writeln!(out, "no answers")?,
        Format::Text => {
            for a in &answers {
                writeln!(out, "{}", format_bindings(a))?;
            }
        }
        Format::Jsonl => {
            for a in &answers {
                writeln!(out, "{}", json!({"answer": bindings_json(a)}))?;
            }
        }
    }
    Ok(0)
}

fn read_line(input: &mut dyn BufRead) -> Res<Option<String>> {
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}

/// Reads goals; after each answer asks whether to search on.
fn cmd_repl(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Res<i32> {
    let s = Session::open(cli)?;
    let mut pending = cli.goal.clone();
    loop {
        let goal = match pending.take() {
            Some(g) => g,
            None => {
                write!(out, "?- ")?;
                out.flush()?;
                match read_line(input)? {
                    None => {
                        writeln!(out)?;
                        return Ok(0);
                    }
                    Some(l) if l.is_empty() => continue,
                    Some(l) => l,
                }
            }
        };
        let goal = goal.trim_end_matches('.');
        if let Err(f) = query(&s, cli, goal, input, out) {
            writeln!(out, "error: {f}")?;
        }
    }
}

fn query(s: &Session, cli: &Cli, goal: &str, input: &mut dyn BufRead, out: &mut dyn Write) -> Res<()> {
    let (_, plan) = s.plan(goal)?;
    let uni = s.unification(&plan, cli.uni)?;
    let mut e = Interp::new(&s.registry, uni)
        .with_budget(cli.budget)
        .prolog(&plan.initial, &plan.continuations);
    loop {
        let Some(raw) = e.resume()? else {
            writeln!(out, "no more answers")?;
            return Ok(());
        };
        let Some(b) = s.decode(&plan, std::slice::from_ref(&raw))?.pop() else {
            continue;
        };
        writeln!(out, "{}", format_bindings(&b))?;
        write!(out, "more? (y/n) ")?;
        out.flush()?;
        match read_line(input)?.as_deref() {
            Some("y") | Some("yes") | Some(";") => {}
            _ => {
                e.halt();
                return Ok(());
            }
        }
    }
}

/// One row of the clause-count table.
pub struct StatsRow {
    pub name: String,
    pub source: Option<usize>,
    pub transformed: Option<usize>,
    pub flag: String,
}

fn stats_row(path: &Path, mode: ModeArg) -> StatsRow {
    let name = stem(path);
    let counts = load_program(path).and_then(|p| {
        let chain = transform(&p, choose_mode(&p, mode))?;
        Ok((p.clauses.len(), chain.len()))
    });
    let (source, transformed, flag) = match counts {
        Err(f) => (
            None,
            None,
            format!("error: {}", f.to_string().lines().next().unwrap_or("")),
        ),
        Ok((a, b)) => {
            let flag = match name.as_str() {
                "split" | "append" if (a, b) == (2, 4) => "matches paper",
                "split" | "append" => "differs from paper",
                n if n.contains("quicksort") || n.contains("qsort") => "paper source unknown",
                _ => "-",
            };
            (Some(a), Some(b), flag.to_string())
        }
    };
    StatsRow {
        name,
        source,
        transformed,
        flag,
    }
}

fn cmd_stats(cli: &Cli, out: &mut dyn Write) -> Res<i32> {
    let files: Vec<PathBuf> = if cli.file.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(&cli.file)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "pl"))
            .collect();
        v.sort();
        v
    } else if cli.file.exists() {
        vec![cli.file.clone()]
    } else {
        return Err(Failure::Input(format!(
            "{}: no such file or directory",
            cli.file.display()
        )));
    };
    let rows: Vec<StatsRow> = files.iter().map(|f| stats_row(f, cli.mode)).collect();
    let count = |n: Option<usize>| n.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
    match cli.format {
        Format::Text => {
            writeln!(out, "name | src | dst | flag")?;
            for r in &rows {
                writeln!(
                    out,
                    "{} | {} | {} | {}",
                    r.name,
                    count(r.source),
                    count(r.transformed),
                    r.flag
                )?;
            }
        }
        Format::Jsonl => {
            for r in &rows {
                writeln!(
                    out,
                    "{}",
                    json!({"name": r.name, "src": r.source, "dst": r.transformed, "flag": r.flag})
                )?;
            }
        }
    }
    Ok(0)
}
