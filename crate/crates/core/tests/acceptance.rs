//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use maslov::indices::{inert, inertia_index, leray, signature};
use maslov::lagrangian::intersection_dim;
use maslov::monodromy::{
    analyze, change_origin_report, integrate_variational, repetition_index, HamiltonianSpec, BUILTINS,
};
use maslov::paths::{
    arnold_maslov_loop_index, arnold_maslov_loop_index_with_reference, lift_lagrangian_path, maslov_index, Settings,
    SymplecticPath,
};
use maslov::sampling::{
    lift_on_random_sheet, random_frame, random_frame_meeting, random_lift, random_quadratic_hamiltonian,
    random_unitary_loop, rng, NormalForm,
};
use maslov::{Error, LagrangianFrame, LagrangianLift, Tolerances};
use rand::Rng;

/// Distance of a pre-rounding index value from its integer.
const INTEGER_TOL: f64 = 1e-6;
/// Conjugacy residual bound for the change of origin.
const CONJUGACY_TOL: f64 = 1e-8;
/// Base steps per period for integrated flows.
const STEPS: usize = 64;

#[derive(Clone, Copy)]
struct Ctx {
    seed: u64,
    refine: usize,
}

impl Ctx {
    fn settings(&self) -> Settings {
        Settings { tol: Tolerances::default(), seed: self.seed }
    }
}

#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    checked: usize,
    integers: Vec<i64>,
    info: Option<String>,
}

impl Outcome {
    fn expect(&mut self, what: impl FnOnce() -> String, got: i64, want: i64) {
        self.checked += 1;
        self.integers.push(got);
        if got != want {
            self.failures.push(format!("{}: got {got}, expected {want}", what()));
        }
    }

    fn require(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn residual(&mut self, what: &str, r: f64) {
        self.require(|| format!("{what}: residual {r:e} exceeds {INTEGER_TOL:e}"), r < INTEGER_TOL);
    }

    fn error(&mut self, what: &str, e: Error) {
        self.checked += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn closed_form_leray(theta: f64, theta_prime: f64) -> Option<i64> {
    let d = theta - theta_prime;
    let halves = d / PI;
    if (halves - halves.round()).abs() < 1e-9 {
        let h = halves.round() as i64;
        return (h % 2 == 0).then_some(h);
    }
    Some((d / (2.0 * PI)).floor() as i64 + 1)
}

fn c1_leray_closed_form(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let tol = Tolerances::default();
    let grid: Vec<f64> = (-12..=12).map(|k| k as f64 * PI / 4.0).collect();
    let mut pairs = Vec::new();
    for (i, &a) in grid.iter().enumerate() {
        for (j, &b) in grid.iter().enumerate() {
            if (i * 25 + j) % 2 == 0 && closed_form_leray(a, b).is_some() {
                pairs.push((a, b));
            }
        }
    }
    pairs.truncate(200);
    let mut by_half_turns = 0;
    for &(t, tp) in &pairs {
        let want = closed_form_leray(t, tp).unwrap();
        match leray(&LagrangianLift::scalar(2.0 * t), &LagrangianLift::scalar(2.0 * tp), ctx.seed, &tol) {
            Ok(v) => {
                out.residual("leray", v.residual);
                // ⌊(θ − θ')/π⌋ + 1 off the lattice, (θ − θ')/π on it
                let h = (t - tp) / PI;
                let alt = if (h - h.round()).abs() < 1e-9 { h.round() as i64 } else { h.floor() as i64 + 1 };
                by_half_turns += usize::from(v.value == alt);
                out.expect(|| format!("m(l({:.2}π), l({:.2}π))", t / PI, tp / PI), v.value, want);
            }
            Err(e) => out.error("leray", e),
        }
    }
    out.info = Some(format!("{} pairs, {by_half_turns} match floor((θ-θ')/π)+1", pairs.len()));
    out
}

fn c2_rotation_paths(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let s = ctx.settings();
    for alpha in [PI / 4.0, PI / 2.0, PI, 1.5 * PI, 2.0 * PI, 3.0 * PI, 4.0 * PI] {
        let turns = alpha / (2.0 * PI);
        let want =
            if (turns - turns.round()).abs() < 1e-12 { 2 * turns.round() as i64 } else { turns.floor() as i64 + 1 };
        let intervals = 64 * ctx.refine * (alpha / PI).ceil() as usize;
        let mu = SymplecticPath::rotation(1, alpha, intervals, &s.tol).and_then(|p| maslov_index(&p, &s));
        match mu {
            Ok(m) => {
                out.residual("rotation", m.residual);
                out.expect(|| format!("alpha = {:.2}π", alpha / PI), m.index, want);
            }
            Err(e) => out.error("rotation", e),
        }
    }
    out
}

fn c3_unitary_loops(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let s = ctx.settings();
    for n in 1..=3 {
        let mut r = rng(300 + n as u64);
        for k in -2i64..=3 {
            let path = random_unitary_loop(&mut r, n, k, 128 * (k.unsigned_abs() as usize + 1) * ctx.refine);
            match maslov_index(&path, &s) {
                Ok(m) => {
                    out.residual("loop", m.residual);
                    out.expect(|| format!("n={n}, k={k}"), m.index, 2 * k);
                }
                Err(e) => out.error("loop", e),
            }
        }
    }
    out
}

fn c4_leray_symmetry(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let tol = Tolerances::default();
    let mut r = rng(400);
    for i in 0..100 {
        let n = 1 + i % 3;
        let a = random_lift(&mut r, n, 3);
        let shared = r.random_range(0..=n);
        let frame = random_frame_meeting(&mut r, &a.point().to_frame(&tol).unwrap(), shared);
        let b = lift_on_random_sheet(&mut r, &frame, 3);
        let run = || -> Result<(i64, i64, i64, i64), Error> {
            let aa = leray(&a, &a, ctx.seed, &tol)?.value;
            let ab = leray(&a, &b, ctx.seed, &tol)?.value;
            let ba = leray(&b, &a, ctx.seed, &tol)?.value;
            let dim = intersection_dim(a.point(), b.point(), &tol)? as i64;
            Ok((aa, ab, ba, dim))
        };
        match run() {
            Ok((aa, ab, ba, dim)) => {
                out.expect(|| format!("pair {i}: m(a, a)"), aa, 0);
                out.expect(|| format!("pair {i}: m(a,b) + m(b,a)"), ab + ba, n as i64 - dim);
            }
            Err(e) => out.error("leray", e),
        }
    }
    out
}

fn c5_cocycles(_ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let tol = Tolerances::default();
    let mut r = rng(500);
    for i in 0..200 {
        let n = 1 + i % 4;
        let a = random_frame(&mut r, n);
        // every other tuple shares directions so that ∂dim varies
        let l = if i % 2 == 0 {
            [a, random_frame(&mut r, n), random_frame(&mut r, n), random_frame(&mut r, n)]
        } else {
            let s1 = r.random_range(0..=n);
            let b = random_frame_meeting(&mut r, &a, s1);
            let s2 = r.random_range(0..=n);
            let c = random_frame_meeting(&mut r, &b, s2);
            let s3 = r.random_range(0..=n);
            let d = random_frame_meeting(&mut r, &a, s3);
            [a, b, c, d]
        };
        let run = || -> Result<(i64, i64, Vec<i64>), Error> {
            let t = |i: usize, j: usize, k: usize| signature(&l[i], &l[j], &l[k], &tol);
            let m = |i: usize, j: usize, k: usize| inert(&l[i], &l[j], &l[k], &tol);
            let dt = t(1, 2, 3)? - t(0, 2, 3)? + t(0, 1, 3)? - t(0, 1, 2)?;
            let dm = m(1, 2, 3)? - m(0, 2, 3)? + m(0, 1, 3)? - m(0, 1, 2)?;
            let mut parity = Vec::new();
            for (x, y, z) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
                let rep = inertia_index(&l[x], &l[y], &l[z], &tol)?;
                parity.push((rep.tau - rep.ddim - n as i64).rem_euclid(2));
            }
            Ok((dt, dm, parity))
        };
        match run() {
            Ok((dt, dm, parity)) => {
                out.expect(|| format!("tuple {i}: coboundary of tau"), dt, 0);
                out.expect(|| format!("tuple {i}: coboundary of Inert"), dm, 0);
                for p in parity {
                    out.expect(|| format!("tuple {i}: tau - n - ddim mod 2"), p, 0);
                }
            }
            Err(e) => out.error("cocycle", e),
        }
    }
    out
}

fn c6_cochain(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let tol = Tolerances::default();
    let mut r = rng(600);
    for i in 0..100 {
        let n = 1 + i % 3;
        let [a, b, c] = [0; 3].map(|_| random_lift(&mut r, n, 3));
        let run = || -> Result<(i64, i64), Error> {
            let m = |x: &LagrangianLift, y: &LagrangianLift| leray(x, y, ctx.seed, &tol).map(|v| v.value);
            Ok((m(&a, &b)? - m(&a, &c)? + m(&b, &c)?, inert(&a, &b, &c, &tol)?))
        };
        match run() {
            Ok((lhs, rhs)) => out.expect(|| format!("triple {i}"), lhs, rhs),
            Err(e) => out.error("cochain", e),
        }
    }
    out
}

fn record_analysis(
    out: &mut Outcome,
    label: &str,
    spec: &HamiltonianSpec,
    ctx: &Ctx,
) -> Option<maslov::monodromy::MonodromyAnalysis> {
    match analyze(spec, STEPS * ctx.refine, &[], &ctx.settings()) {
        Ok(a) => {
            let t = &a.theorem1;
            for m in [&t.mu_s_t, &t.mu_s_2t, &t.mu_p_2t, &t.mu_u_2t, &t.mu_exp_tx, &t.mu_exp_2tx] {
                out.residual(label, m.residual);
            }
            out.residual(label, a.decomposition.k_residual);
            for c in &t.checks {
                out.expect(|| format!("{label}: {}", c.name), c.lhs, c.rhs);
            }
            Some(a)
        }
        Err(e) => {
            out.error(label, e);
            None
        }
    }
}

fn c7_theorem1(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    if let Some(a) = record_analysis(&mut out, "harmonic oscillator", &HamiltonianSpec::harmonic_oscillator(1.0), ctx) {
        out.expect(|| "harmonic oscillator mu(S_T)".into(), a.theorem1.mu_s_t.index, 2);
        out.expect(|| "harmonic oscillator k".into(), a.theorem1.k, 2);
    }
    let hyperbolic = HamiltonianSpec::builtin("inverted_oscillator", &[]);
    if let Some(a) = record_analysis(&mut out, "hyperbolic", &hyperbolic, ctx) {
        let t = &a.theorem1;
        for (name, v) in [
            ("mu(S_T)", t.mu_s_t.index),
            ("mu(P_2T)", t.mu_p_2t.index),
            ("mu(e^2TX)", t.mu_exp_2tx.index),
            ("mu(e^TX)", t.mu_exp_tx.index),
            ("Inert", t.inert_s),
            ("k", t.k),
        ] {
            out.expect(|| format!("hyperbolic {name}"), v, 0);
        }
    }
    let mut r = rng(700);
    let forms = [NormalForm::Elliptic, NormalForm::Hyperbolic, NormalForm::Mixed];
    for i in 0..50 {
        let n = 1 + i % 3;
        let (h, period) = random_quadratic_hamiltonian(&mut r, n, forms[i % 3]);
        record_analysis(&mut out, &format!("random spec {i} (n={n})"), &HamiltonianSpec::constant(&h, period), ctx);
    }
    let imaginary = HamiltonianSpec::constant(&maslov::kernel::RealMatrix::identity(2, 2), PI / 2.0);
    let raised =
        matches!(analyze(&imaginary, STEPS * ctx.refine, &[], &ctx.settings()), Err(Error::NonGenericMonodromy));
    out.require(|| "S_T with eigenvalues ±i did not raise NonGenericMonodromy".into(), raised);
    out
}

fn c8_repetition(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let s = ctx.settings();
    for name in BUILTINS {
        let run = || -> Result<Vec<maslov::paths::IdentityCheck>, Error> {
            let schedule = HamiltonianSpec::builtin(name, &[]).schedule(&s.tol)?;
            let path = integrate_variational(&schedule, 3.0 * schedule.period(), STEPS * ctx.refine, &s.tol)?.path;
            [2, 3].iter().map(|&r| repetition_index(&path, schedule.period(), r, &s)).collect()
        };
        match run() {
            Ok(checks) => {
                for c in checks {
                    out.expect(|| format!("{name}: {}", c.name), c.lhs, c.rhs);
                }
            }
            Err(e) => out.error(name, e),
        }
    }
    out
}

fn c9_change_origin(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let s = ctx.settings();
    let spec = HamiltonianSpec::builtin("driven_oscillator", &[]);
    let period = spec.period(&s.tol).unwrap();
    for (label, t_prime) in [("T/4", period / 4.0), ("T/2", period / 2.0)] {
        match change_origin_report(&spec, t_prime, STEPS * ctx.refine, &s) {
            Ok(r) => {
                out.require(
                    || format!("t' = {label}: conjugacy residual {:e}", r.conjugacy_residual),
                    r.conjugacy_residual <= CONJUGACY_TOL,
                );
                out.require(
                    || format!("t' = {label}: cocycle residual {:e}", r.cocycle_residual),
                    r.cocycle_residual <= s.tol.relation,
                );
                for m in [&r.mu_z, &r.mu_z_prime, &r.mu_rel] {
                    out.residual(label, m.residual);
                }
                for c in &r.checks {
                    out.expect(|| format!("t' = {label}: {}", c.name), c.lhs, c.rhs);
                }
            }
            Err(e) => out.error(label, e),
        }
    }
    out
}

fn c10_tangent_loop(ctx: &Ctx) -> Outcome {
    let mut out = Outcome::default();
    let s = ctx.settings();
    let run = || -> Result<(i64, Vec<i64>), Error> {
        let schedule = HamiltonianSpec::harmonic_oscillator(1.0).schedule(&s.tol)?;
        let path = integrate_variational(&schedule, schedule.period(), STEPS * ctx.refine, &s.tol)?.path;
        let lam = lift_lagrangian_path(&path, &LagrangianFrame::momentum(1), &s.tol)?;
        let mas = arnold_maslov_loop_index(&lam, &s)?.index;
        let mut r = rng(1000);
        let others = (0..10)
            .map(|_| arnold_maslov_loop_index_with_reference(&lam, &random_lift(&mut r, 1, 3), &s).map(|m| m.index))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((mas, others))
    };
    match run() {
        Ok((mas, others)) => {
            out.expect(|| "Mas of the oscillator tangent loop".into(), mas, 2);
            for (i, m) in others.into_iter().enumerate() {
                out.expect(|| format!("reference {i}"), m, mas);
            }
        }
        Err(e) => out.error("tangent loop", e),
    }
    out
}

type Criterion = fn(&Ctx) -> Outcome;

const CRITERIA: [(&str, Criterion); 10] = [
    ("Leray index of two lines, closed form on a 200-pair grid", c1_leray_closed_form),
    ("rotation path indices", c2_rotation_paths),
    ("unitary loops have index 2k", c3_unitary_loops),
    ("m(l, l) = 0 and m(a,b) + m(b,a) = n - dim on 100 pairs", c4_leray_symmetry),
    ("signature and inertia cocycles, parity, 200 tuples", c5_cocycles),
    ("Leray cochain property on 100 triples", c6_cochain),
    ("splitting identities: oscillator, hyperbolic, 50 random specs, non-generic case", c7_theorem1),
    ("repetition index r = 2, 3 on every builtin", c8_repetition),
    ("change of origin on the driven oscillator", c9_change_origin),
    ("oscillator tangent loop index and reference independence", c10_tangent_loop),
];

fn line(pass: bool, id: usize, name: &str, detail: &str) {
    println!("{} criterion {id:>2}: {name} [{detail}]", if pass { "PASS" } else { "FAIL" });
}

fn main() {
    let start = Instant::now();
    let base = Ctx { seed: 0, refine: 1 };
    let results: Vec<Outcome> = CRITERIA.iter().map(|(_, f)| f(&base)).collect();
    let mut all = true;
    for (i, ((name, _), out)) in CRITERIA.iter().zip(&results).enumerate() {
        let mut detail = if out.passed() {
            format!("{} checks", out.checked)
        } else {
            let shown: Vec<&str> = out.failures.iter().take(4).map(String::as_str).collect();
            format!("{} of {} checks failed; {}", out.failures.len(), out.checked, shown.join("; "))
        };
        if let Some(info) = &out.info {
            detail = format!("{info}; {detail}");
        }
        line(out.passed(), i + 1, name, &detail);
        all &= out.passed();
    }

    // determinism: doubled sampling and five witness seeds
    let variants = [
        Ctx { seed: 0, refine: 2 },
        Ctx { seed: 11, refine: 1 },
        Ctx { seed: 12, refine: 1 },
        Ctx { seed: 13, refine: 1 },
        Ctx { seed: 14, refine: 1 },
        Ctx { seed: 15, refine: 1 },
    ];
    let mut problems = Vec::new();
    for v in variants {
        for (i, (name, f)) in CRITERIA.iter().enumerate() {
            let again = f(&v);
            if again.integers != results[i].integers {
                problems.push(format!(
                    "criterion {} changed integers (seed {}, x{} sampling)",
                    i + 1,
                    v.seed,
                    v.refine
                ));
            }
            if results[i].passed() && !again.passed() {
                problems.push(format!("{name} no longer passes (seed {}, x{} sampling)", v.seed, v.refine));
            }
        }
    }
    let red: Vec<String> =
        results.iter().enumerate().filter(|(_, r)| !r.passed()).map(|(i, _)| (i + 1).to_string()).collect();
    let detail = match (problems.is_empty(), red.is_empty()) {
        (true, true) => "identical integers under x2 sampling and 5 seeds".to_string(),
        (true, false) => format!(
            "identical integers under x2 sampling and 5 seeds; criteria {} do not pass in the first place",
            red.join(", ")
        ),
        (false, _) => problems.join("; "),
    };
    let pass11 = problems.is_empty() && red.is_empty();
    line(pass11, 11, "determinism and refinement", &detail);
    all &= pass11;

    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
