use serde_json::json;

use super::commands::{self, kappa};
use super::{CliError, Report, RunConfig};
use crate::fock::verify_screening_identities;
use crate::liesuper::LieSuperData;
use crate::vacalc::{check_axioms, susy_affine, Algebra, Mode, SampleSpec};
use crate::wfinder::{factorization_report, kernels_up_to, miura_cross_check, sample_points, FreeField, WfError};

/// Seed for the ν specializations.
pub const SPECIALIZATION_SEED: u64 = 7;
/// Depth of the mode-level screening identities.
pub const SCREENING_DEPTH: usize = 2;

fn axioms(rep: &mut Report, label: &str, alg: &Algebra) {
    let r = check_axioms(alg, &SampleSpec::default());
    let total: usize = r.checked.values().sum();
    let detail = match r.failures.first() {
        Some(f) => format!("{} identities, {} failed, first: {} {}", total, r.failures.len(), f.axiom, f.witness),
        None => format!("{} identities", total),
    };
    rep.check("axioms", label, r.passed(), detail);
}

fn axiom_section(rep: &mut Report, l: &LieSuperData, mode: Mode) -> Result<(), CliError> {
    axioms(rep, &format!("affine {}", l.name), &susy_affine(l, &kappa(mode), mode));
    let cx = commands::complex(l, mode, false)?;
    axioms(rep, &format!("fermions {}", l.name), &cx.fermion_algebra()?);
    Ok(())
}

fn screening_section(rep: &mut Report, ff: &FreeField) {
    for op in &ff.screenings {
        let r = verify_screening_identities(op, &ff.heis, SCREENING_DEPTH);
        let detail = match r.failures.first() {
            Some(f) => format!("{} identities, first failure {}", r.checked, f),
            None => format!("{} identities", r.checked),
        };
        rep.check("screening", &format!("superfield identities for {} to depth {}", op.root, SCREENING_DEPTH), r.passed(), detail);
    }
}

/// Axioms, BRST structure, conformal vectors, screening identities, the kernel ledger with its
/// NS, Miura and specialization checks, and the factorization.
pub fn run_suite(rep: &mut Report, cfg: &RunConfig) -> Result<(), CliError> {
    let l = super::load(&cfg.algebra)?;
    let mode_name = if cfg.mode == Mode::Classical { "classical" } else { "quantum" };
    rep.record(
        "suite",
        json!({"algebra": l.name, "mode": mode_name, "max_weight": cfg.max_weight.to_string()}),
        format!("suite {} ({}) max weight {}", l.name, mode_name, cfg.max_weight),
    );
    axiom_section(rep, &l, cfg.mode)?;
    let cx = commands::brst_checks(rep, &l, cfg.mode)?;
    if cfg.mode == Mode::Quantum {
        commands::kac_todorov_cmd(rep, &l)?;
        if let Some(cx) = &cx {
            let m = commands::m_values(cx, &cfg.m)?;
            commands::w_vector_checks(rep, cx, &m)?;
        }
        match FreeField::new(&l) {
            Ok(ff) => {
                screening_section(rep, &ff);
                let res = kernels_up_to(&ff, &cfg.max_weight)?;
                let mut pts = sample_points(&res, 5, SPECIALIZATION_SEED);
                pts.extend(cfg.nu_eval.iter().cloned());
                let led = commands::kernel_report(rep, &ff, &res, &[]);
                if ff.heis.rank() == 1 && cfg.max_weight >= crate::scalars::rat(3, 2) {
                    commands::ns_checks(rep, &ff, &led, cx.as_ref())?;
                }
                if let Some(cx) = &cx {
                    let mr = miura_cross_check(&ff, cx, &res)?;
                    let detail = format!("{} residues {}", mr.checked, mr.obstructions.join("; "));
                    rep.check("miura", "kernel vectors are closed in the E1 model", mr.passed(), detail.trim());
                }
                let mut unstable = Vec::new();
                for r in &res {
                    for q in &pts {
                        if r.dim_kernel_at(q).map(|d| d != r.dim_kernel()).unwrap_or(true) {
                            unstable.push(format!("{} at v={}", r.weight(), q));
                        }
                    }
                }
                let shown: Vec<String> = pts.iter().map(|q| q.to_string()).collect();
                rep.check(
                    "specialization",
                    "kernel dimensions stable (evidence only)",
                    unstable.is_empty(),
                    format!("v in {{{}}} {}", shown.join(", "), unstable.join("; ")).trim().to_string(),
                );
            }
            Err(WfError::NotCartanLevi(extra)) => {
                rep.record("skip", json!({"section": "kernel", "reason": extra}), format!("skip kernel: grade-zero part beyond the cartan ({})", extra));
            }
            Err(e) => return Err(e.into()),
        }
        match factorization_report(&l) {
            Ok(_) => commands::factorize(rep, &l)?,
            Err(e) => rep.record("skip", json!({"section": "factorization", "reason": e.to_string()}), format!("skip factorization: {}", e)),
        }
    }
    let pass = rep.passed();
    rep.record(
        "summary",
        json!({"algebra": l.name, "checks": rep.checks, "failed": rep.failed, "pass": pass}),
        format!("{} {}: {} checks, {} failed", if pass { "PASS" } else { "FAIL" }, l.name, rep.checks, rep.failed),
    );
    Ok(())
}
