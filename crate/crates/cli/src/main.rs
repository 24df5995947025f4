//! `qybt`: build, check, twist and count R-matrices from the command line.

mod render;

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qybt_core::families::{
    build_f, build_f_unconstrained, build_r, build_r_constrained, family_constraints, FFamily,
    Family, FamilySpec, RFamily,
};
use qybt_core::lattice::{
    count_parameters, reduce_by_constraints, ConstraintFileJson, LatticeError,
    MonomialConstraintSystem, SolutionLattice,
};
use qybt_core::oracle::stochastic_check;
use qybt_core::suite::{run_criterion, SuiteOptions, CRITERIA};
use qybt_core::tensor::MatrixJson;
use qybt_core::twist::{check_system, twist, untwist, ConditionSystem};
use qybt_core::{Matrix, Scalar, Variable};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "qybt",
    version,
    about = "Exact workbench for R-matrices and twisting cocycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an R-matrix of a named family.
    BuildR {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build a twisting matrix of a named family.
    BuildF {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the QYBE, the Reshetikhin system or the new cocycle system.
    Check {
        #[arg(long)]
        system: ConditionSystem,
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        inputs: MatrixInputs,
        /// Check at this many seeded rational points instead of symbolically.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, env = "QYBT_SEED", default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compute F21 R F^-1 (or F21^-1 R F with --inverse).
    Twist {
        #[command(flatten)]
        fam: FamilyArgs,
        #[command(flatten)]
        inputs: MatrixInputs,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve a monomial constraint system.
    Solve {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Constraint file; otherwise the constraints of --family.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Count the independent parameters of an R-matrix.
    Count {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Matrix file; otherwise the constrained display of --family.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every acceptance criterion.
    VerifyPaper {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "QYBT_SEED", default_value_t = 1)]
        seed: u64,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Inject a fault, to check that the suite notices.
        #[arg(long, hide = true)]
        fault: Option<Fault>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    PerturbClosedForm,
}

#[derive(Args, Default)]
struct FamilyArgs {
    /// Family name (the R family for check and twist).
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "family-r")]
    family_r: Option<String>,
    #[arg(long = "family-f")]
    family_f: Option<String>,
    /// Size: n, or N for the FG families.
    #[arg(long = "n", visible_alias = "N")]
    n: Option<usize>,
    /// Size of the F family when it differs from the R dimension.
    #[arg(long = "n-f")]
    n_f: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    eta: Option<usize>,
    /// Parameter binding `name=expr`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, Scalar)>,
    /// Skip the family constraints.
    #[arg(long = "no-constraints")]
    no_constraints: bool,
}

#[derive(Args)]
struct MatrixInputs {
    /// R-matrix file (JSON matrix format).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// F-matrix file.
    #[arg(long = "in-f")]
    input_f: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_param(text: &str) -> Result<(String, Scalar), String> {
    let (name, expr) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=expr, got {text:?}"))?;
    let value = expr.trim().parse::<Scalar>().map_err(|e| e.to_string())?;
    Ok((name.trim().to_string(), value))
}

/// A usage or input error, reported with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<(String, bool), UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out_args, result) = dispatch(cli.command);
    match result {
        Ok((text, ok)) => {
            let text = if text.ends_with('\n') {
                text
            } else {
                text + "\n"
            };
            match &out_args.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> (OutputArgs, Run) {
    match command {
        Command::BuildR { fam, out } => {
            let r =
                build_r_cmd(&fam).map(|m| (render::matrix(&m, out.format == Format::Text), true));
            (out, r)
        }
        Command::BuildF { fam, out } => {
            let r =
                build_f_cmd(&fam).map(|m| (render::matrix(&m, out.format == Format::Text), true));
            (out, r)
        }
        Command::Check {
            system,
            fam,
            inputs,
            trials,
            seed,
            out,
        } => {
            let r = check_cmd(system, &fam, &inputs, trials, seed, out.format);
            (out, r)
        }
        Command::Twist {
            fam,
            inputs,
            inverse,
            out,
        } => {
            let r = twist_cmd(&fam, &inputs, inverse)
                .map(|m| (render::matrix(&m, out.format == Format::Text), true));
            (out, r)
        }
        Command::Solve { fam, input, out } => {
            let r = solve_cmd(&fam, input.as_ref(), out.format);
            (out, r)
        }
        Command::Count { fam, input, out } => {
            let r = count_cmd(&fam, input.as_ref(), out.format);
            (out, r)
        }
        Command::VerifyPaper {
            trials,
            seed,
            only,
            fault,
            out,
        } => {
            let r = verify_cmd(trials, seed, &only, fault, out.format);
            (out, r)
        }
    }
}

fn size(fam: &FamilyArgs) -> Result<usize, UsageError> {
    fam.n.ok_or_else(|| UsageError("--n is required".into()))
}

/// Binds every `--param` that names a parameter of one of `specs`.
fn bind_all(specs: &mut [&mut FamilySpec], params: &[(String, Scalar)]) -> Result<(), UsageError> {
    for (name, value) in params {
        let mut used = false;
        for spec in specs.iter_mut() {
            if let Ok(bound) = spec.clone().bind(name, value.clone()) {
                **spec = bound;
                used = true;
            }
        }
        if !used {
            return Err(UsageError(format!(
                "no family has a parameter named {name}"
            )));
        }
    }
    Ok(())
}

fn r_spec(name: &str, fam: &FamilyArgs, n: usize) -> Result<FamilySpec, UsageError> {
    Ok(FamilySpec::r(RFamily::parse(name, fam.eta)?, n)?)
}

fn f_spec(name: &str, fam: &FamilyArgs, n: usize) -> Result<FamilySpec, UsageError> {
    Ok(FamilySpec::f(
        FFamily::parse(name, fam.k, fam.l, fam.eta)?,
        n,
    )?)
}

fn build_r_cmd(fam: &FamilyArgs) -> Result<Matrix, UsageError> {
    let name = fam
        .family
        .as_deref()
        .or(fam.family_r.as_deref())
        .ok_or_else(|| UsageError("--family is required".into()))?;
    let mut spec = r_spec(name, fam, size(fam)?)?;
    bind_all(&mut [&mut spec], &fam.params)?;
    Ok(if fam.no_constraints {
        build_r(&spec)?
    } else {
        build_r_constrained(&spec)?
    })
}

fn build_f_cmd(fam: &FamilyArgs) -> Result<Matrix, UsageError> {
    let name = fam
        .family
        .as_deref()
        .or(fam.family_f.as_deref())
        .ok_or_else(|| UsageError("--family is required".into()))?;
    let mut spec = f_spec(
        name,
        fam,
        fam.n_f
            .or(fam.n)
            .ok_or_else(|| UsageError("--n is required".into()))?,
    )?;
    bind_all(&mut [&mut spec], &fam.params)?;
    Ok(if fam.no_constraints {
        build_f_unconstrained(&spec)?
    } else {
        build_f(&spec)?
    })
}

fn read_matrix(path: &PathBuf) -> Result<Matrix, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let json: MatrixJson = serde_json::from_str(&text)?;
    Ok(Matrix::from_json(&json)?)
}

/// Resolves R and (optionally) F from families and files. With family
/// constraints on, R is reduced by its own constraints and by those of F.
fn load_pair(
    fam: &FamilyArgs,
    inputs: &MatrixInputs,
    need_f: bool,
) -> Result<(Matrix, Option<Matrix>), UsageError> {
    let r_name = fam.family_r.as_deref().or(fam.family.as_deref());
    let mut r_spec_opt = match (r_name, &inputs.input) {
        (Some(_), Some(_)) => {
            return Err(UsageError(
                "give either an R family or --in, not both".into(),
            ))
        }
        (Some(name), None) => Some(r_spec(name, fam, size(fam)?)?),
        (None, Some(_)) => None,
        (None, None) => {
            return Err(UsageError(
                "an R family (--family-r) or --in is required".into(),
            ))
        }
    };
    let r_file = inputs.input.as_ref().map(read_matrix).transpose()?;
    let dim = match (&r_spec_opt, &r_file) {
        (Some(spec), _) => spec.dim(),
        (_, Some(m)) => m.dim(),
        _ => unreachable!(),
    };
    let mut f_spec_opt = match (fam.family_f.as_deref(), &inputs.input_f) {
        (Some(_), Some(_)) => {
            return Err(UsageError(
                "give either an F family or --in-f, not both".into(),
            ))
        }
        (Some(name), None) => {
            let default = if name == "fg-cocycle" {
                dim.div_ceil(2)
            } else {
                dim
            };
            Some(f_spec(name, fam, fam.n_f.unwrap_or(default))?)
        }
        _ => None,
    };
    let f_file = inputs.input_f.as_ref().map(read_matrix).transpose()?;
    if need_f && f_spec_opt.is_none() && f_file.is_none() {
        return Err(UsageError(
            "an F family (--family-f) or --in-f is required".into(),
        ));
    }
    {
        let mut specs: Vec<&mut FamilySpec> = Vec::new();
        specs.extend(r_spec_opt.as_mut());
        specs.extend(f_spec_opt.as_mut());
        bind_all(&mut specs, &fam.params)?;
    }
    let mut r = match (&r_spec_opt, r_file) {
        (Some(spec), _) if fam.no_constraints => build_r(spec)?,
        (Some(spec), _) => build_r_constrained(spec)?,
        (None, Some(m)) => m,
        _ => unreachable!(),
    };
    let f = match (&f_spec_opt, f_file) {
        (Some(spec), _) if fam.no_constraints => Some(build_f_unconstrained(spec)?),
        (Some(spec), _) => {
            r = reduce_by_constraints(&r, &spec.lattice()?)?;
            Some(build_f(spec)?)
        }
        (None, m) => m,
    };
    Ok((r, f))
}

fn check_cmd(
    system: ConditionSystem,
    fam: &FamilyArgs,
    inputs: &MatrixInputs,
    trials: Option<usize>,
    seed: u64,
    format: Format,
) -> Run {
    let need_f = system != ConditionSystem::Qybe;
    let (r, f) = load_pair(fam, inputs, need_f)?;
    let f = if need_f { f } else { None };
    if let Some(trials) = trials {
        let rep = stochastic_check(system, &r, f.as_ref(), None, trials, seed)?;
        let text = match format {
            Format::Json => rep.to_json(),
            Format::Text => render::oracle(&rep),
        };
        return Ok((text, rep.passed));
    }
    let f = f.unwrap_or_else(|| Matrix::identity(r.dim(), 2));
    let rep = check_system(system, &r, &f)?;
    let text = match format {
        Format::Json => rep.to_json(),
        Format::Text => rep.to_string(),
    };
    Ok((text, rep.passed))
}

fn twist_cmd(fam: &FamilyArgs, inputs: &MatrixInputs, inverse: bool) -> Result<Matrix, UsageError> {
    let (r, f) = load_pair(fam, inputs, true)?;
    let f = f.expect("F is required");
    Ok(if inverse {
        untwist(&r, &f)?
    } else {
        twist(&r, &f)?
    })
}

fn solve_cmd(fam: &FamilyArgs, input: Option<&PathBuf>, format: Format) -> Run {
    let sys = match input {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let json: ConstraintFileJson = serde_json::from_str(&text)?;
            MonomialConstraintSystem::from_json(&json)?
        }
        None => family_constraints(&any_spec(fam)?)?,
    };
    match sys.solve() {
        Ok(lat) => Ok((render_lattice(&lat, format), true)),
        Err(e @ (LatticeError::Inconsistent(_) | LatticeError::Torsion { .. })) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&json!({ "error": e.to_string() }))?,
                Format::Text => format!("no solution: {e}"),
            };
            Ok((text, false))
        }
        Err(e) => Err(e.into()),
    }
}

/// A spec for `--family`, whichever kind it names.
fn any_spec(fam: &FamilyArgs) -> Result<FamilySpec, UsageError> {
    let name = fam
        .family
        .as_deref()
        .or(fam.family_r.as_deref())
        .or(fam.family_f.as_deref())
        .ok_or_else(|| UsageError("--family or --in is required".into()))?;
    let n = size(fam)?;
    match RFamily::parse(name, fam.eta) {
        Ok(r) => Ok(FamilySpec::new(Family::R(r), n)?),
        Err(_) => f_spec(name, fam, n),
    }
}

fn render_lattice(lat: &SolutionLattice, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&lat.to_json()).expect("lattice serializes"),
        Format::Text => render::lattice(lat),
    }
}

fn count_cmd(fam: &FamilyArgs, input: Option<&PathBuf>, format: Format) -> Run {
    let m = match input {
        Some(path) => read_matrix(path)?,
        None => build_r_cmd(fam)?,
    };
    let base: BTreeSet<Variable> = m
        .iter()
        .flat_map(|(_, _, s)| s.variables())
        .filter(|v| v.name() != "q" && v.name() != "qr")
        .collect();
    let base: Vec<Variable> = base.into_iter().collect();
    let count = count_parameters(&m, &base)?;
    let names: Vec<&str> = base.iter().map(Variable::name).collect();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({ "count": count, "base": names }))?,
        Format::Text => format!("{count}\nbase: q {}", names.join(" ")),
    };
    Ok((text, true))
}

fn verify_cmd(
    trials: usize,
    seed: u64,
    only: &[String],
    fault: Option<Fault>,
    format: Format,
) -> Run {
    for id in only {
        if !CRITERIA.iter().any(|(c, _)| c == id) {
            return Err(UsageError(format!("unknown criterion {id:?}")));
        }
    }
    let opts = SuiteOptions {
        perturb_closed_form: matches!(fault, Some(Fault::PerturbClosedForm)),
        trials,
        seed,
    };
    let mut results = Vec::new();
    let mut text = String::new();
    for (id, _) in CRITERIA {
        if !only.is_empty() && !only.iter().any(|o| o == id) {
            continue;
        }
        let r = run_criterion(id, &opts).expect("listed criterion");
        if format == Format::Text {
            text.push_str(&format!("{r}\n"));
        }
        results.push(r);
    }
    let first_fail = results.iter().find(|r| !r.passed).map(|r| r.id.clone());
    match format {
        Format::Json => text = serde_json::to_string_pretty(&results)?,
        Format::Text => match &first_fail {
            Some(id) => text.push_str(&format!("first failing criterion: {id}\n")),
            None => text.push_str("all criteria pass\n"),
        },
    }
    if let Some(id) = &first_fail {
        eprintln!("first failing criterion: {id}");
    }
    Ok((text, first_fail.is_none()))
}
