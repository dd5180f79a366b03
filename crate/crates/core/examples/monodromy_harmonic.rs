//! Floquet splitting `S_t = P_t e^{tX}` for the shipped quadratic systems.
//!
//! `cargo run --example monodromy_harmonic -- driven_oscillator`

use maslov::monodromy::{analyze, HamiltonianSpec, BUILTINS};
use maslov::paths::Settings;

fn main() {
    let names: Vec<String> = match std::env::args().nth(1) {
        Some(name) => vec![name],
        None => BUILTINS.iter().map(|s| s.to_string()).collect(),
    };
    let settings = Settings::default();
    for name in names {
        let spec = HamiltonianSpec::builtin(&name, &[]);
        let a = match analyze(&spec, 128, &[2, 3], &settings) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("{name}: {e}");
                continue;
            }
        };
        let t = &a.theorem1;
        println!(
            "{name}: T = {:.4}, mu(S_T) = {}, mu(e^TX) = {}, k = {}, Inert = {}",
            a.period, t.mu_s_t.index, t.mu_exp_tx.index, t.k, t.inert_s
        );
        for c in t.checks.iter().chain(&a.repetitions) {
            println!("    {:<45} {:>3} {:>3} {}", c.name, c.lhs, c.rhs, if c.holds() { "ok" } else { "FAILED" });
        }
    }
}
