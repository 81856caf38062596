//! Command execution: loads inputs through the workspace, runs the core
//! operation, and shapes the outcome for reporting.

use lfgt_core::group::GROUP_CATALOG;
use lfgt_core::lattice::{Lattice, LATTICE_CATALOG};
use lfgt_core::lsubgroup::{
    central_chain, closure_series, conjugate, generate, is_lsubgroup, is_lsubgroup_of, is_maximal,
    is_maximal_with_budget, is_normal, is_pronormal_with, is_subnormal, normalizer,
    normalizer_chain, SeriesReport,
};
use lfgt_core::lsubset::{LPoint, LSubset};
use lfgt_core::verify::{run_suite, InstanceSpec};
use lfgt_core::FiniteGroup;

use crate::cli::{CheckArgs, CheckKind, ComputeArgs, ComputeOp, DiagKind, VerifyArgs};
use crate::error::CliError;
use crate::formats::instance_to_text;
use crate::report::{Outcome, WitnessStyle};
use crate::workspace::Workspace;

fn table_of(subset: &LSubset) -> Vec<(String, String)> {
    (0..subset.group().len())
        .map(|x| {
            (
                subset.group().name(x).to_string(),
                subset.lattice().name(subset.value(x)).to_string(),
            )
        })
        .collect()
}

fn point_label(subset: &LSubset, p: LPoint) -> String {
    format!(
        "{}@{}",
        subset.lattice().name(p.value),
        subset.group().name(p.support)
    )
}

fn pair_label(group: &FiniteGroup, pair: (usize, usize)) -> String {
    format!("({}, {})", group.name(pair.0), group.name(pair.1))
}

fn parse_point(text: &str, subset: &LSubset) -> Result<LPoint, CliError> {
    let (value, support) = text.split_once('@').ok_or_else(|| {
        CliError::Domain(format!("point `{text}` is not of the form value@element"))
    })?;
    Ok(LPoint {
        value: subset.lattice().element(value.trim())?,
        support: subset.group().element(support.trim())?,
    })
}

fn bool_verdict(holds: bool) -> Outcome {
    Outcome::new(if holds { "true" } else { "false" }, i32::from(!holds))
}

fn series_outcome(report: &SeriesReport, target_label: &str) -> Outcome {
    let mut outcome = Outcome::new("done", 0);
    outcome.witness = vec![
        ("stabilized_at".into(), report.stabilized_at.to_string()),
        (
            format!("reached_{target_label}"),
            report.reached_target.to_string(),
        ),
        (
            "defect_or_class".into(),
            report
                .defect_or_class
                .map(|d| d.to_string())
                .unwrap_or_else(|| "-".into()),
        ),
    ];
    outcome.series = report.stages.iter().map(table_of).collect();
    outcome
}

fn env_budget() -> Option<usize> {
    std::env::var("LFGT_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn env_strict_bottom() -> bool {
    std::env::var("LFGT_STRICT_BOTTOM").is_ok_and(|v| v != "0" && !v.is_empty())
}

pub fn run_check(ws: &mut Workspace, args: &CheckArgs) -> Result<Outcome, CliError> {
    let eta = ws.subset_from_path(&args.eta)?;
    let mu = args
        .mu
        .as_deref()
        .map(|p| ws.subset_from_path(p))
        .transpose()?;
    let need_mu = || -> Result<&LSubset, CliError> {
        mu.as_ref()
            .ok_or_else(|| CliError::Domain("this check needs `--mu`".into()))
    };
    match args.kind {
        CheckKind::Lsubgroup => {
            let verdict = match &mu {
                Some(mu) => is_lsubgroup_of(&eta, mu)?,
                None => is_lsubgroup(&eta),
            };
            let mut outcome = bool_verdict(verdict.holds);
            if let Some((pair, note)) = verdict.counterexample {
                outcome.counterexample = Some((pair_label(eta.group(), pair), note));
            }
            Ok(outcome)
        }
        CheckKind::Normal => {
            let verdict = is_normal(&eta, need_mu()?)?;
            let mut outcome = bool_verdict(verdict.holds);
            if let Some((pair, note)) = verdict.counterexample {
                outcome.counterexample = Some((pair_label(eta.group(), pair), note));
            }
            Ok(outcome)
        }
        CheckKind::Pronormal => {
            let verdict = is_pronormal_with(&eta, need_mu()?, env_strict_bottom())?;
            let mut outcome = bool_verdict(verdict.holds);
            outcome.style = WitnessStyle::Certificates;
            outcome.witness = verdict
                .witness
                .iter()
                .map(|&(c, w)| (point_label(&eta, c), point_label(&eta, w)))
                .collect();
            if let Some((p, note)) = verdict.counterexample {
                outcome.counterexample = Some((point_label(&eta, p), note));
            }
            Ok(outcome)
        }
        CheckKind::Subnormal => {
            let verdict = is_subnormal(&eta, need_mu()?)?;
            let mut outcome = bool_verdict(verdict.holds);
            if let Some((_, report)) = verdict.witness.into_iter().next() {
                outcome.witness = vec![(
                    "defect".into(),
                    report
                        .defect_or_class
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "-".into()),
                )];
                outcome.series = report.stages.iter().map(table_of).collect();
            }
            if let Some((stage, note)) = verdict.counterexample {
                outcome.counterexample = Some((format!("stable stage {stage}"), note));
            }
            Ok(outcome)
        }
        CheckKind::Nilpotent => {
            let report = central_chain(&eta, need_mu()?)?;
            let mut outcome = bool_verdict(report.reached_target);
            outcome.witness = vec![(
                "class".into(),
                report
                    .defect_or_class
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "-".into()),
            )];
            outcome.series = report.stages.iter().map(table_of).collect();
            Ok(outcome)
        }
        CheckKind::Maximal => {
            let mu = need_mu()?;
            let verdict = match env_budget() {
                Some(budget) => is_maximal_with_budget(&eta, mu, budget)?,
                None => is_maximal(&eta, mu)?,
            };
            let mut outcome = bool_verdict(verdict.holds);
            if let Some((theta, note)) = verdict.counterexample {
                outcome.counterexample = Some((format!("{theta}"), note));
                outcome.series = vec![table_of(&theta)];
            }
            Ok(outcome)
        }
        CheckKind::SupProperty => Ok(bool_verdict(eta.has_sup_property())),
    }
}

pub fn run_compute(ws: &mut Workspace, args: &ComputeArgs) -> Result<Outcome, CliError> {
    let eta = ws.subset_from_path(&args.eta)?;
    let mu = args
        .mu
        .as_deref()
        .map(|p| ws.subset_from_path(p))
        .transpose()?;
    let need_mu = || -> Result<&LSubset, CliError> {
        mu.as_ref()
            .ok_or_else(|| CliError::Domain("this computation needs `--mu`".into()))
    };
    let single = |subset: LSubset| -> Outcome {
        let mut outcome = Outcome::new("done", 0);
        outcome.series = vec![table_of(&subset)];
        outcome
    };
    match args.op {
        ComputeOp::Generate => Ok(single(generate(&eta, need_mu()?)?)),
        ComputeOp::Conjugate => {
            let mu = need_mu()?;
            let point_text = args.point.as_deref().ok_or_else(|| {
                CliError::Domain("conjugation needs `--point value@element`".into())
            })?;
            let point = parse_point(point_text, mu)?;
            Ok(single(conjugate(&eta, point, mu)?))
        }
        ComputeOp::Normalizer => Ok(single(normalizer(&eta, need_mu()?)?)),
        ComputeOp::ClosureSeries => Ok(series_outcome(
            &closure_series(&eta, need_mu()?)?,
            "subgroup",
        )),
        ComputeOp::CentralChain => Ok(series_outcome(&central_chain(&eta, need_mu()?)?, "trivial")),
        ComputeOp::NormalizerChain => Ok(series_outcome(
            &normalizer_chain(&eta, need_mu()?)?,
            "ambient",
        )),
        ComputeOp::SetProduct => {
            let nu_path = args
                .nu
                .as_deref()
                .ok_or_else(|| CliError::Domain("set product needs `--nu`".into()))?;
            let nu = ws.subset_from_path(nu_path)?;
            Ok(single(eta.set_product(&nu)?))
        }
        ComputeOp::Image => {
            let hom_path = args
                .hom
                .as_deref()
                .ok_or_else(|| CliError::Domain("image needs `--hom`".into()))?;
            let hom = ws.hom(hom_path)?;
            Ok(single(eta.image(&hom)?))
        }
        ComputeOp::Commutator => {
            let theta_path = args
                .theta
                .as_deref()
                .ok_or_else(|| CliError::Domain("commutator needs `--theta`".into()))?;
            let theta = ws.subset_from_path(theta_path)?;
            let (seed, generated) = lfgt_core::lsubgroup::commutator(&eta, &theta, need_mu()?)?;
            let mut outcome = Outcome::new("done", 0);
            outcome.witness = vec![("stages".into(), "seed, generated".into())];
            outcome.series = vec![table_of(&seed), table_of(&generated)];
            Ok(outcome)
        }
    }
}

pub fn run_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let spec = InstanceSpec {
        seed: args.seed,
        max_group_order: args.max_group,
        max_lattice_size: args.max_lattice,
        chain_only: args.chain_only,
        with_hom: args.with_hom,
        nilpotent_ambient: args.nilpotent_ambient,
    };
    let report = run_suite(&spec, args.cases)?;
    let failures = report.total_failures();
    let mut outcome = Outcome::new(
        if failures == 0 { "pass" } else { "fail" },
        i32::from(failures > 0),
    );
    outcome.witness = report
        .entries
        .iter()
        .map(|e| {
            (
                e.name.clone(),
                format!(
                    "checked={} skipped={} failures={}",
                    e.checked, e.skipped, e.failures
                ),
            )
        })
        .collect();
    outcome
        .witness
        .push(("cases".into(), report.cases.to_string()));
    outcome
        .witness
        .push(("total_failures".into(), failures.to_string()));
    if let Some(first) = report.failures.first() {
        outcome.counterexample = Some((
            format!("{} in case {}", first.theorem, first.case),
            first.detail.clone(),
        ));
    }
    for failure in &report.failures {
        outcome.text_appendix.push(format!(
            "failure: {} in case {} (seed {})\n  {}\nserialized instance:\n{}",
            failure.theorem,
            failure.case,
            failure.spec.seed,
            failure.detail,
            instance_to_text(&failure.instance)
        ));
    }
    Ok(outcome)
}

pub fn run_builtin_list() -> Outcome {
    let mut outcome = Outcome::new("ok", 0);
    for key in GROUP_CATALOG {
        outcome.witness.push(("group".into(), key.to_string()));
    }
    for key in LATTICE_CATALOG {
        outcome.witness.push(("lattice".into(), key.to_string()));
    }
    outcome
}

pub fn run_diag(ws: &mut Workspace, what: &DiagKind) -> Result<Outcome, CliError> {
    match what {
        DiagKind::Lattice { lattice } => {
            let l = ws.lattice(lattice)?;
            Ok(diag_lattice_outcome(lattice, &l))
        }
    }
}

fn diag_lattice_outcome(reference: &str, lattice: &Lattice) -> Outcome {
    let mut outcome = Outcome::new("report", 0);
    outcome.witness = vec![
        (
            "lattice".into(),
            format!("{reference} ({} elements)", lattice.len()),
        ),
        ("distributive".into(), lattice.is_distributive().to_string()),
        (
            "upper well ordered".into(),
            lattice.is_upper_well_ordered().to_string(),
        ),
        ("bottom".into(), lattice.name(lattice.bottom()).to_string()),
        ("top".into(), lattice.name(lattice.top()).to_string()),
    ];
    outcome
}
