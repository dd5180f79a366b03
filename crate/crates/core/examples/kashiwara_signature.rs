//! Kashiwara signature and inertia index of Lagrangian triples.

use maslov::indices::{inertia_index, signature};
use maslov::sampling::{random_frame, random_frame_meeting, random_symplectic_matrix, rng};
use maslov::{LagrangianFrame, Tolerances};

fn main() -> Result<(), maslov::Error> {
    let tol = Tolerances::default();
    let (lp, lx) = (LagrangianFrame::momentum(1), LagrangianFrame::position(1));
    let diag = LagrangianFrame::line(std::f64::consts::FRAC_PI_4);
    println!("tau(l_p, l_x, diagonal) = {}", signature(&lp, &lx, &diag, &tol)?);
    println!("tau(l_x, l_p, diagonal) = {}", signature(&lx, &lp, &diag, &tol)?);

    let mut rng = rng(7);
    for n in 1..=3 {
        let a = random_frame(&mut rng, n);
        let b = random_frame_meeting(&mut rng, &a, 1);
        let c = random_frame(&mut rng, n);
        let rep = inertia_index(&a, &b, &c, &tol)?;
        let s = random_symplectic_matrix(&mut rng, n, 1.0);
        let moved = signature(&a.transformed(&s)?, &b.transformed(&s)?, &c.transformed(&s)?, &tol)?;
        println!("n={n}: tau={} ddim={} inert={} (tau after a symplectic map: {moved})", rep.tau, rep.ddim, rep.inert);
    }
    Ok(())
}
