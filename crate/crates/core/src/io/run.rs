use crate::error::{Error, Result};
use crate::indices::{inertia_index, leray, signature_report, LerayRoute};
use crate::lagrangian::{intersection_dim, LagrangianFrame, Plane};
use crate::monodromy::{analyze, change_origin_report, tangent_loop, MonodromyAnalysis};
use crate::paths::{loop_winding_index, maslov_index, maslov_index_rel, IdentityCheck, MaslovResult, Settings};

use super::job::{Command, JobSpec, PlaneDoc, VerifyDoc};
use super::report::Report;
use super::verify::run_suite;

/// Process exit code for a finished job.
pub fn exit_code(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => 0,
        Ok(_) | Err(Error::IdentityViolated { .. }) => 2,
        Err(_) => 1,
    }
}

fn route_name(route: LerayRoute) -> &'static str {
    match route {
        LerayRoute::Transversal => "transversal",
        LerayRoute::Cocycle => "cocycle",
    }
}

fn planes(docs: &[PlaneDoc], settings: &Settings) -> Result<Vec<LagrangianFrame>> {
    docs.iter().enumerate().map(|(i, p)| p.to_frame(&format!("planes[{i}]"), &settings.tol)).collect()
}

/// Runs a validated job. The report depends only on the job document.
pub fn run_job(job: &JobSpec) -> Result<Report> {
    job.validate()?;
    let settings = Settings { tol: job.tolerances, seed: job.seed };
    let inputs = serde_json::to_value(job).expect("jobs serialize");
    let mut report = Report::new(job.command.name(), job.seed, inputs);
    match job.command {
        Command::Leray => run_leray(job, &settings, &mut report)?,
        Command::Signature => {
            let [a, b, c]: [LagrangianFrame; 3] =
                planes(job.planes.as_deref().unwrap_or_default(), &settings)?.try_into().expect("validated");
            let rep = signature_report(&a, &b, &c, &settings.tol)?;
            report.integer("tau", rep.tau, 0.0);
            report.diagnostic("epsilon", rep.epsilon);
            report.diagnostic("margin", rep.margin);
            if rep.near_threshold {
                report.note("an eigenvalue of the triple form lies close to the zero threshold");
            }
        }
        Command::Inert => {
            let [a, b, c]: [LagrangianFrame; 3] =
                planes(job.planes.as_deref().unwrap_or_default(), &settings)?.try_into().expect("validated");
            let rep = inertia_index(&a, &b, &c, &settings.tol)?;
            report.integer("inert", rep.inert, 0.0);
            report.integer("tau", rep.tau, 0.0);
            report.integer("ddim", rep.ddim, 0.0);
            report.diagnostic("margin", rep.signature.margin);
        }
        Command::MaslovPath => run_maslov_path(job, &settings, &mut report)?,
        Command::Monodromy => run_monodromy(job, &settings, &mut report)?,
        Command::ChangeOrigin => {
            let spec = job.hamiltonian.as_ref().expect("validated");
            let r = change_origin_report(spec, job.t_prime.expect("validated"), job.steps(), &settings)?;
            report.maslov("mu_z", &r.mu_z);
            report.maslov("mu_z_prime", &r.mu_z_prime);
            report.maslov("mu_rel", &r.mu_rel);
            report.integer("inert_a", r.inert_terms.0, 0.0);
            report.integer("inert_b", r.inert_terms.1, 0.0);
            report.integer("k_z", r.k_z, 0.0);
            report.integer("k_z_prime", r.k_z_prime, 0.0);
            report.diagnostic("conjugacy_residual", r.conjugacy_residual);
            report.diagnostic("cocycle_residual", r.cocycle_residual);
            report.diagnostic("steps_per_period", r.steps_per_period as f64);
            report.identity(&IdentityCheck::new(
                "conjugacy residual within tolerance",
                i64::from(r.conjugacy_residual <= settings.tol.relation),
                1,
            ));
            report.identity(&IdentityCheck::new(
                "cocycle residual within tolerance",
                i64::from(r.cocycle_residual <= settings.tol.relation),
                1,
            ));
            for c in &r.checks {
                report.identity(c);
            }
        }
        Command::Verify => {
            let doc = job.verify.unwrap_or_default();
            run_verify(&doc, &settings, &mut report);
        }
    }
    Ok(report)
}

fn run_leray(job: &JobSpec, settings: &Settings, report: &mut Report) -> Result<()> {
    let lifts = job.lifts.as_deref().unwrap_or_default();
    let a = lifts[0].to_lift("lifts[0]", &settings.tol)?;
    let b = lifts[1].to_lift("lifts[1]", &settings.tol)?;
    let v = leray(&a, &b, settings.seed, &settings.tol)?;
    report.integer("m", v.value, v.residual);
    report.integer("dim_intersection", intersection_dim(a.point(), b.point(), &settings.tol)? as i64, 0.0);
    report.note(format!("route: {}", route_name(v.route)));
    Ok(())
}

fn run_maslov_path(job: &JobSpec, settings: &Settings, report: &mut Report) -> Result<()> {
    let path = job.path.as_ref().expect("validated").to_path(&settings.tol)?;
    let mu: MaslovResult = match &job.reference_plane {
        Some(doc) => maslov_index_rel(&path, &doc.to_frame("reference_plane", &settings.tol)?, settings)?,
        None => maslov_index(&path, settings)?,
    };
    report.maslov("mu", &mu);
    report.diagnostic("samples", path.len() as f64);
    report.note(format!("route: {}", route_name(mu.route)));
    if job.reference_plane.is_none() {
        match loop_winding_index(&path, settings) {
            Ok(w) => {
                report.integer("k", w.k, w.residual);
                report.identity(&IdentityCheck::new("unitary loop index", mu.index, 2 * w.k));
            }
            Err(Error::NotClosed { .. } | Error::NotUnitaryPath { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn record_analysis(a: &MonodromyAnalysis, report: &mut Report) {
    let t = &a.theorem1;
    report.maslov("mu_s_t", &t.mu_s_t);
    report.maslov("mu_s_2t", &t.mu_s_2t);
    report.maslov("mu_p_2t", &t.mu_p_2t);
    report.maslov("mu_u_2t", &t.mu_u_2t);
    report.maslov("mu_exp_tx", &t.mu_exp_tx);
    report.maslov("mu_exp_2tx", &t.mu_exp_2tx);
    report.integer("k", t.k, a.decomposition.k_residual);
    report.integer("inert_s", t.inert_s, 0.0);
    report.integer("inert_x", t.inert_x, 0.0);
    report.diagnostic("period", a.period);
    report.diagnostic("steps_per_period", a.steps_per_period as f64);
    report.diagnostic("refinement_depth", a.refinement_depth as f64);
    report.diagnostic("corrections", a.corrections as f64);
    report.diagnostic("drift", a.drift);
    report.diagnostic("projection_residual", a.decomposition.projection_residual);
    report.diagnostic("generator_root_residual", t.generator_root_residual);
    for c in t.checks.iter().chain(&a.repetitions) {
        report.identity(c);
    }
}

fn run_monodromy(job: &JobSpec, settings: &Settings, report: &mut Report) -> Result<()> {
    let spec = job.hamiltonian.as_ref().expect("validated");
    let repetitions = job.repetitions.clone().unwrap_or_else(|| vec![2, 3]);
    let a = analyze(spec, job.steps(), &repetitions, settings)?;
    record_analysis(&a, report);
    if let Some(doc) = &job.invariant_plane {
        let plane = doc.to_frame("invariant_plane", &settings.tol)?;
        let dim = a.decomposition.path.dim();
        if plane.plane_dim() != dim {
            return Err(Error::Schema {
                path: "invariant_plane".into(),
                message: format!("plane has dimension {}, system has n = {dim}", plane.plane_dim()),
            });
        }
        let tl = tangent_loop(&a.decomposition.path, a.period, &plane, settings)?;
        report.maslov("xi_tentative", &tl.xi);
        if let Some(m) = &tl.loop_index {
            report.maslov("loop_index", m);
        }
        report.note("xi_tentative is a candidate value for the Gutzwiller index; the identification is conjectural");
    }
    Ok(())
}

fn run_verify(doc: &VerifyDoc, settings: &Settings, report: &mut Report) {
    for p in run_suite(doc, settings) {
        report.identity(&IdentityCheck::new(
            format!("{} ({} cases)", p.name, p.cases),
            (p.cases - p.failures) as i64,
            p.cases as i64,
        ));
        if let Some(f) = p.first_failure {
            report.note(format!("{}: {f}", p.name));
        }
    }
}
