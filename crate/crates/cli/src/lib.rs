//! Front end for lattice-valued subgroup computations: text fixture
//! formats, a named workspace, command dispatch, and report rendering.

pub mod cli;
pub mod dispatch;
pub mod error;
pub mod formats;
pub mod report;
pub mod workspace;

use std::time::Instant;

use cli::{Cli, Command};
use error::CliError;
use report::{InputRef, Outcome};
use workspace::Workspace;

/// Executes a parsed command line, returning the command label, the input
/// references and the outcome; the caller renders and exits.
pub fn run(args: &Cli) -> Result<(String, Vec<InputRef>, Outcome), CliError> {
    let mut ws = Workspace::new();
    for path in &args.load {
        ws.load_path(path)?;
    }
    let mut inputs: Vec<InputRef> = args
        .load
        .iter()
        .map(|p| InputRef {
            role: "load".into(),
            source: p.clone(),
        })
        .collect();
    let push = |inputs: &mut Vec<InputRef>, role: &str, source: &str| {
        inputs.push(InputRef {
            role: role.into(),
            source: source.into(),
        });
    };
    match &args.command {
        Command::Check(check) => {
            push(&mut inputs, "eta", &check.eta);
            if let Some(mu) = &check.mu {
                push(&mut inputs, "mu", mu);
            }
            let kind = match check.kind {
                cli::CheckKind::Lsubgroup => "lsubgroup",
                cli::CheckKind::Normal => "normal",
                cli::CheckKind::Pronormal => "pronormal",
                cli::CheckKind::Subnormal => "subnormal",
                cli::CheckKind::Nilpotent => "nilpotent",
                cli::CheckKind::Maximal => "maximal",
                cli::CheckKind::SupProperty => "sup-property",
            };
            let outcome = dispatch::run_check(&mut ws, check)?;
            Ok((format!("check {kind}"), inputs, outcome))
        }
        Command::Compute(compute) => {
            push(&mut inputs, "eta", &compute.eta);
            for (role, value) in [
                ("mu", &compute.mu),
                ("nu", &compute.nu),
                ("theta", &compute.theta),
                ("point", &compute.point),
                ("hom", &compute.hom),
            ] {
                if let Some(v) = value {
                    push(&mut inputs, role, v);
                }
            }
            let op = match compute.op {
                cli::ComputeOp::Generate => "generate",
                cli::ComputeOp::Conjugate => "conjugate",
                cli::ComputeOp::Normalizer => "normalizer",
                cli::ComputeOp::ClosureSeries => "closure-series",
                cli::ComputeOp::CentralChain => "central-chain",
                cli::ComputeOp::NormalizerChain => "normalizer-chain",
                cli::ComputeOp::SetProduct => "set-product",
                cli::ComputeOp::Image => "image",
                cli::ComputeOp::Commutator => "commutator",
            };
            let outcome = dispatch::run_compute(&mut ws, compute)?;
            Ok((format!("compute {op}"), inputs, outcome))
        }
        Command::Verify(verify) => {
            for (role, value) in [
                ("seed", verify.seed.to_string()),
                ("cases", verify.cases.to_string()),
                ("max-group", verify.max_group.to_string()),
                ("max-lattice", verify.max_lattice.to_string()),
            ] {
                push(&mut inputs, role, &value);
            }
            let outcome = dispatch::run_verify(verify)?;
            Ok(("verify".into(), inputs, outcome))
        }
        Command::Builtin { list } => {
            if !*list {
                return Err(CliError::Domain("use `builtin --list`".into()));
            }
            Ok(("builtin".into(), inputs, dispatch::run_builtin_list()))
        }
        Command::Diag { what } => {
            let cli::DiagKind::Lattice { lattice } = what;
            push(&mut inputs, "lattice", lattice);
            let outcome = dispatch::run_diag(&mut ws, what)?;
            Ok(("diag lattice".into(), inputs, outcome))
        }
    }
}

/// Renders and prints one outcome, returning the process exit code.
pub fn emit(
    json: bool,
    command: String,
    inputs: Vec<InputRef>,
    outcome: &Outcome,
    started: Instant,
) -> i32 {
    if json {
        let report = report::to_report(command, inputs, outcome, started.elapsed().as_millis());
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print!("{}", report::render_text(&command, outcome));
    }
    outcome.exit
}
