//! Moving the origin of a periodic orbit along itself.

use maslov::monodromy::{change_origin_report, HamiltonianSpec};
use maslov::paths::Settings;

fn main() -> Result<(), maslov::Error> {
    let settings = Settings::default();
    let spec = HamiltonianSpec::builtin("driven_oscillator", &[("epsilon", 0.4)]);
    let period = spec.period(&settings.tol)?;
    for fraction in [0.125, 0.25, 0.5, 0.75] {
        let r = change_origin_report(&spec, fraction * period, 128, &settings)?;
        println!(
            "t' = {fraction:.3}T: mu(z) = {}, mu(z') = {}, Inert terms = {:?}, k = {}/{}, conjugacy {:.1e}",
            r.mu_z.index, r.mu_z_prime.index, r.inert_terms, r.k_z, r.k_z_prime, r.conjugacy_residual
        );
        for c in r.checks.iter().filter(|c| !c.holds()) {
            println!("    violated: {} ({} vs {})", c.name, c.lhs, c.rhs);
        }
    }
    Ok(())
}
