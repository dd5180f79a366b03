//! Leray index of two lines in the phase plane.
//!
//! The line `ℓ(θ)` is `w = e^{2iθ}`; its lifts are `(e^{2iθ}, 2θ + 2πk)`.
//! For n = 1 the index has the closed form `⌊(α − β)/2π⌋ + 1` off the
//! lattice `α − β ∈ 2πZ` and `(α − β)/2π` on it.

use std::f64::consts::PI;

use maslov::indices::leray;
use maslov::{LagrangianLift, Tolerances};

fn closed_form(alpha: f64, beta: f64) -> i64 {
    let turns = (alpha - beta) / (2.0 * PI);
    if (turns - turns.round()).abs() < 1e-12 {
        turns.round() as i64
    } else {
        turns.floor() as i64 + 1
    }
}

fn main() {
    let tol = Tolerances::default();
    println!("{:>8} {:>8} {:>6} {:>6}  route", "theta", "theta'", "m", "form");
    for (t, tp) in [(PI / 2.0, 0.0), (0.3, 1.1), (2.0, -2.5), (PI, 0.0), (0.0, 0.0), (-1.0, 4.0)] {
        let a = LagrangianLift::scalar(2.0 * t);
        let b = LagrangianLift::scalar(2.0 * tp);
        let m = leray(&a, &b, 0, &tol).expect("leray index");
        println!("{t:>8.3} {tp:>8.3} {:>6} {:>6}  {:?}", m.value, closed_form(2.0 * t, 2.0 * tp), m.route);
    }

    // moving one argument up a sheet adds one
    let a = LagrangianLift::scalar(0.4);
    let b = LagrangianLift::scalar(-0.9);
    for k in -2..=2 {
        let m = leray(&a.on_sheet(k), &b, 0, &tol).unwrap().value;
        println!("m(a + {k} sheets, b) = {m}");
    }
}
