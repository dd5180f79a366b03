//! Randomized property suite behind the `verify` command.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::indices::{inert, inertia_index, leray, signature};
use crate::kernel::symplectic_j;
use crate::lagrangian::{intersection_dim, LagrangianLift};
use crate::monodromy::{analyze, HamiltonianSpec};
use crate::paths::{loop_winding_index, maslov_product_check, Settings, SymplecticPath};
use crate::sampling::{
    lift_on_random_sheet, random_frame, random_frame_meeting, random_lift, random_quadratic_hamiltonian,
    random_symmetric, random_symplectic_matrix, random_unitary_loop, rng, NormalForm, SeededRng,
};

use super::job::VerifyDoc;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Case = fn(&mut SeededRng, usize, &Settings) -> Result<Option<String>>;

const PROPERTIES: [(&str, Case); 10] = [
    ("leray index vanishes on the diagonal", diagonal),
    ("leray index antisymmetry", antisymmetry),
    ("leray cochain property", cochain),
    ("signature cocycle", signature_cocycle),
    ("inertia cocycle", inertia_cocycle),
    ("signature parity", parity),
    ("signature symplectic invariance", invariance),
    ("unitary loop index is twice the winding", unitary_loop),
    ("product formula", product),
    ("monodromy splitting identities", monodromy),
];

fn mismatch(what: &str, lhs: i64, rhs: i64) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: {lhs} != {rhs}"))
}

fn diagonal(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let a = random_lift(rng, n, 3);
    Ok(mismatch("m(a, a)", leray(&a, &a, s.seed, &s.tol)?.value, 0))
}

fn antisymmetry(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let a = random_lift(rng, n, 3);
    let shared = rng.random_range(0..=n);
    let frame = random_frame_meeting(rng, &a.point().to_frame(&s.tol)?, shared);
    let b = lift_on_random_sheet(rng, &frame, 3);
    let lhs = leray(&a, &b, s.seed, &s.tol)?.value + leray(&b, &a, s.seed, &s.tol)?.value;
    let rhs = n as i64 - intersection_dim(a.point(), b.point(), &s.tol)? as i64;
    Ok(mismatch("m(a,b) + m(b,a) vs n - dim", lhs, rhs))
}

fn cochain(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let [a, b, c] = [0; 3].map(|_| random_lift(rng, n, 3));
    let m = |x: &LagrangianLift, y: &LagrangianLift| leray(x, y, s.seed, &s.tol).map(|v| v.value);
    let lhs = m(&a, &b)? - m(&a, &c)? + m(&b, &c)?;
    Ok(mismatch("coboundary of m vs Inert", lhs, inert(&a, &b, &c, &s.tol)?))
}

fn signature_cocycle(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let l = [0; 4].map(|_| random_frame(rng, n));
    let t = |i: usize, j: usize, k: usize| signature(&l[i], &l[j], &l[k], &s.tol);
    let d = t(1, 2, 3)? - t(0, 2, 3)? + t(0, 1, 3)? - t(0, 1, 2)?;
    Ok(mismatch("coboundary of tau", d, 0))
}

fn inertia_cocycle(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let l = [0; 4].map(|_| random_frame(rng, n));
    let r = |i: usize, j: usize, k: usize| inert(&l[i], &l[j], &l[k], &s.tol);
    let d = r(1, 2, 3)? - r(0, 2, 3)? + r(0, 1, 3)? - r(0, 1, 2)?;
    Ok(mismatch("coboundary of Inert", d, 0))
}

fn parity(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let a = random_frame(rng, n);
    let shared = rng.random_range(0..=n);
    let b = random_frame_meeting(rng, &a, shared);
    let shared = rng.random_range(0..=n);
    let c = random_frame_meeting(rng, &b, shared);
    let rep = inertia_index(&a, &b, &c, &s.tol)?;
    Ok(mismatch("tau - n - ddim mod 2", (rep.tau - rep.ddim - n as i64).rem_euclid(2), 0))
}

fn invariance(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let [a, b, c] = [0; 3].map(|_| random_frame(rng, n));
    let m = random_symplectic_matrix(rng, n, 1.0);
    let moved = signature(&a.transformed(&m)?, &b.transformed(&m)?, &c.transformed(&m)?, &s.tol)?;
    Ok(mismatch("tau(Sa, Sb, Sc) vs tau(a, b, c)", moved, signature(&a, &b, &c, &s.tol)?))
}

fn unitary_loop(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let k = rng.random_range(-2..=3);
    let path = random_unitary_loop(rng, n, k, 128 * (k.unsigned_abs() as usize + 1));
    let w = loop_winding_index(&path, s)?;
    Ok(mismatch("winding", w.k, k).or_else(|| mismatch("mu vs 2k", w.cross_check.index, 2 * k)))
}

fn product(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let x1 = symplectic_j(n) * random_symmetric(rng, 2 * n, 1.0);
    let x2 = symplectic_j(n) * random_symmetric(rng, 2 * n, 1.0);
    let p = SymplecticPath::from_generator(&x1, 2.0, 256, &s.tol)?;
    let q = SymplecticPath::from_generator(&x2, 2.0, 256, &s.tol)?;
    let c = maslov_product_check(&p, &q, s)?;
    Ok(mismatch(&c.name, c.lhs, c.rhs))
}

fn monodromy(rng: &mut SeededRng, n: usize, s: &Settings) -> Result<Option<String>> {
    let form = [NormalForm::Elliptic, NormalForm::Hyperbolic, NormalForm::Mixed][rng.random_range(0..3)];
    let (h, period) = random_quadratic_hamiltonian(rng, n, form);
    let a = analyze(&HamiltonianSpec::constant(&h, period), 64, &[2, 3], s)?;
    let failed = a.theorem1.checks.iter().chain(&a.repetitions).find(|c| !c.holds());
    Ok(failed.map(|c| format!("{}: {} != {}", c.name, c.lhs, c.rhs)))
}

/// Runs every property `cases` times for each `n ≤ max_dim`.
pub fn run_suite(doc: &VerifyDoc, settings: &Settings) -> Vec<PropertyOutcome> {
    PROPERTIES
        .iter()
        .enumerate()
        .map(|(index, (name, case))| {
            let mut outcome = PropertyOutcome { name: name.to_string(), cases: 0, failures: 0, first_failure: None };
            for n in 1..=doc.max_dim {
                let mut rng = rng(settings.seed.wrapping_mul(1_000_003).wrapping_add((index * 100 + n) as u64));
                // the monodromy property integrates a flow per case; fewer cases keep the suite quick
                let cases = if index == PROPERTIES.len() - 1 { doc.cases.div_ceil(4) } else { doc.cases };
                for i in 0..cases {
                    outcome.cases += 1;
                    let failure = match case(&mut rng, n, settings) {
                        Ok(None) => continue,
                        Ok(Some(msg)) => msg,
                        Err(e) => format!("error: {e}"),
                    };
                    outcome.failures += 1;
                    outcome.first_failure.get_or_insert(format!("n={n} case {i}: {failure}"));
                }
            }
            outcome
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let doc = VerifyDoc { max_dim: 2, cases: 3 };
        let a = run_suite(&doc, &Settings::default());
        assert!(a.iter().all(PropertyOutcome::passed), "{a:?}");
        assert_eq!(a, run_suite(&doc, &Settings::default()));
        assert_eq!(a[0].cases, 6);
    }
}
