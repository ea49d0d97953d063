use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use centering::discourse::{
    derive_text, enumerate_readings, parse_discourse, CenteringPolicy, Derivation, DeriveError,
    DeriveMode, DeriveOptions, Reading, ReadingsError, Site,
};
use centering::drt::text::register_from_str;
use centering::golden::{run_golden, Mutation};
use centering::modeleval::{first_order, load_model, satisfiable, EvalState, Evaluator, Model};
use centering::trace::Trace;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Derives box programs for annotated discourses and checks them against
/// models.
#[derive(Debug, Parser)]
#[command(name = "centering", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Show composed and resolved terms for every utterance.
    #[arg(long, global = true)]
    trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Whether centering violations are reported or fatal.
    #[arg(long, global = true, value_enum, default_value_t = Policy::Warn)]
    centering: Policy,
    /// How genitives are read.
    #[arg(long, global = true, value_enum, default_value_t = Mode::AsAnnotated)]
    mode: Mode,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive a discourse file and print its trace and program.
    Derive { file: PathBuf },
    /// Print the sloppy and strict readings at a proform or ellipsis site.
    Readings {
        file: PathBuf,
        /// Token address, utterance and token numbered from 1.
        #[arg(long, value_name = "U:T")]
        site: Site,
    },
    /// Evaluate a discourse's program in a model.
    Eval {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Initial assignment, e.g. `u_1=smith,u_2=jones`.
        #[arg(long, value_name = "k=v,...", value_delimiter = ',')]
        input_state: Vec<String>,
    },
    /// Replay the bundled example corpus against its expectations.
    Golden {
        /// Run with a deliberately broken engine.
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Policy {
    Warn,
    Strict,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    AsAnnotated,
    StrictAnnotations,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MutationArg {
    DropCenterEquation,
    IgnoreReassignment,
}

/// A failed run and its exit status.
#[derive(Debug)]
enum Failure {
    /// Unreadable file, parse or resolution error: exit 2.
    Input(String),
    /// Golden mismatch or strict centering violation: exit 3.
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Check(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Check(m) => m,
        }
    }
}

/// Output of a run; `failed` carries the status when the output is a
/// report of a failed check.
struct Outcome {
    output: String,
    failed: Option<Failure>,
}

impl From<String> for Outcome {
    fn from(output: String) -> Outcome {
        Outcome {
            output,
            failed: None,
        }
    }
}

fn options(cli: &Cli) -> DeriveOptions {
    DeriveOptions {
        mode: match cli.mode {
            Mode::AsAnnotated => DeriveMode::AsAnnotated,
            Mode::StrictAnnotations => DeriveMode::StrictAnnotations,
        },
        policy: match cli.centering {
            Policy::Warn => CenteringPolicy::Warn,
            Policy::Strict => CenteringPolicy::Strict,
        },
        ..DeriveOptions::default()
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn derive_failure(path: &Path, e: DeriveError) -> Failure {
    let message = format!("{}: {e}", path.display());
    match e {
        DeriveError::Constraint { .. } => Failure::Check(message),
        _ => Failure::Input(message),
    }
}

fn derive_file(cli: &Cli, path: &Path) -> Result<Derivation, Failure> {
    derive_text(&read(path)?, &options(cli)).map_err(|e| derive_failure(path, e))
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn run_derive(cli: &Cli, path: &Path) -> Result<Outcome, Failure> {
    let trace = Trace::new(&derive_file(cli, path)?);
    Ok(match cli.format {
        Format::Text => trace.to_text(cli.trace),
        Format::Structured => {
            let mut s = trace.to_json();
            s.push('\n');
            s
        }
    }
    .into())
}

#[derive(Serialize)]
struct ReadingOut {
    annotation: String,
    program: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Trace>,
}

#[derive(Serialize)]
struct ReadingsOut {
    site: String,
    variable: String,
    controller: Option<String>,
    trivial: bool,
    strict_only: bool,
    sloppy: ReadingOut,
    strict: ReadingOut,
}

fn run_readings(cli: &Cli, path: &Path, site: Site) -> Result<Outcome, Failure> {
    let utterances = parse_discourse(&read(path)?).map_err(|e| derive_failure(path, e))?;
    let r = enumerate_readings(&utterances, site, &options(cli)).map_err(|e| match e {
        ReadingsError::Derive(e) => derive_failure(path, e),
        other => Failure::Input(format!("{}: {other}", path.display())),
    })?;
    let reading = |x: &Reading| ReadingOut {
        annotation: x.annotation.clone(),
        program: x.derivation.program.to_string(),
        trace: cli.trace.then(|| Trace::new(&x.derivation)),
    };
    let out = ReadingsOut {
        site: r.site.to_string(),
        variable: r.variable.to_string(),
        controller: r.controller.map(|c| c.to_string()),
        trivial: r.trivial,
        strict_only: r.strict_only,
        sloppy: reading(&r.sloppy),
        strict: reading(&r.strict),
    };
    if cli.format == Format::Structured {
        return Ok(json(&out).into());
    }
    let mut s = String::new();
    let controller = out.controller.as_deref().unwrap_or("none");
    let _ = writeln!(
        s,
        "site {}: variable at {}, controlled by {controller}",
        out.site, out.variable
    );
    if out.trivial {
        let _ = writeln!(
            s,
            "no proform or ellipsis here: both readings are the discourse itself"
        );
    }
    if out.strict_only {
        let _ = writeln!(s, "strict only: the antecedent is a plain individual");
    }
    for (label, x) in [("sloppy", &out.sloppy), ("strict", &out.strict)] {
        let _ = writeln!(s, "{label} ({}): {}", x.annotation, x.program);
        if let Some(t) = &x.trace {
            for line in t.to_text(false).lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
    }
    Ok(s.into())
}

fn input_state(pairs: &[String], model: &Model) -> Result<Option<EvalState>, Failure> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let mut state = EvalState::default();
    for pair in pairs {
        let bad = || {
            Failure::Input(format!(
                "bad input state `{pair}`: expected register=entity"
            ))
        };
        let (r, e) = pair.split_once('=').ok_or_else(bad)?;
        let r = register_from_str(r.trim()).ok_or_else(bad)?;
        let e = e.trim();
        let entity = model
            .entity(e)
            .or_else(|| model.constant(e))
            .ok_or_else(|| {
                Failure::Input(format!("`{e}` is not an entity or constant of the model"))
            })?;
        state.set(r, entity);
    }
    Ok(Some(state))
}

#[derive(Serialize)]
struct EvalOut {
    program: String,
    satisfiable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<String>>,
}

fn run_eval(
    cli: &Cli,
    path: &Path,
    model_path: &Path,
    pairs: &[String],
) -> Result<Outcome, Failure> {
    let d = derive_file(cli, path)?;
    let model = load_model(&read(model_path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", model_path.display())))?;
    let eval_err = |e| Failure::Input(format!("{}: {e}", path.display()));
    let program = first_order(&d.program).map_err(eval_err)?;
    let sat = satisfiable(&program, &model).map_err(eval_err)?;
    let input = input_state(pairs, &model)?;
    let outputs = match &input {
        Some(i) => Some(
            Evaluator::new(&model)
                .eval(&program, i)
                .map_err(eval_err)?
                .iter()
                .map(|j| j.display(&model).to_string())
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    let out = EvalOut {
        program: program.to_string(),
        satisfiable: sat,
        input: input.map(|i| i.display(&model).to_string()),
        outputs,
    };
    if cli.format == Format::Structured {
        return Ok(json(&out).into());
    }
    let mut s = String::new();
    if cli.trace {
        s.push_str(&Trace::new(&d).to_text(true));
    }
    let _ = writeln!(s, "first-order program: {}", out.program);
    let _ = writeln!(s, "satisfiable: {}", out.satisfiable);
    if let (Some(i), Some(outputs)) = (&out.input, &out.outputs) {
        let _ = writeln!(s, "input: {i}");
        let _ = writeln!(s, "outputs: {}", outputs.len());
        for o in outputs {
            let _ = writeln!(s, "  {o}");
        }
    }
    Ok(s.into())
}

fn run_golden_suite(cli: &Cli, mutate: Option<MutationArg>) -> Outcome {
    let mutation = match mutate {
        None => Mutation::None,
        Some(MutationArg::DropCenterEquation) => Mutation::DropCenterEquation,
        Some(MutationArg::IgnoreReassignment) => Mutation::IgnoreReassignment,
    };
    let report = run_golden(mutation);
    let output = match cli.format {
        Format::Text => format!("{report}\n"),
        Format::Structured => json(&report),
    };
    let failing = report.cases.iter().filter(|c| !c.passed()).count();
    Outcome {
        output,
        failed: (failing > 0)
            .then(|| Failure::Check(format!("{failing} golden derivations do not match"))),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Derive { file } => run_derive(cli, file),
        Command::Readings { file, site } => run_readings(cli, file, *site),
        Command::Eval {
            file,
            model,
            input_state,
        } => run_eval(cli, file, model, input_state),
        Command::Golden { mutate } => Ok(run_golden_suite(cli, *mutate)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let failure = match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            outcome.failed
        }
        Err(f) => Some(f),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
