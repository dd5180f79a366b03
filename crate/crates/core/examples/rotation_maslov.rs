//! Maslov index of the rotation path `t ↦ R(t)`, `0 ≤ t ≤ α`.

use std::f64::consts::PI;

use maslov::paths::{maslov_index, maslov_product_check, rotation_matrix, Settings, SymplecticPath};

fn main() {
    let settings = Settings::default();
    for quarters in 1..=16 {
        let alpha = quarters as f64 * PI / 4.0;
        let path = SymplecticPath::rotation_auto(1, alpha, &settings.tol).unwrap();
        let mu = maslov_index(&path, &settings).unwrap();
        println!("alpha = {quarters:>2}π/4  mu = {:>2}  ({:?}, residual {:.1e})", mu.index, mu.route, mu.residual);
    }

    let p = SymplecticPath::uniform(1.0, 64, |t| rotation_matrix(2, 1.3 * t), &settings.tol).unwrap();
    let q = SymplecticPath::uniform(1.0, 64, |t| rotation_matrix(2, 2.4 * t), &settings.tol).unwrap();
    let check = maslov_product_check(&p, &q, &settings).unwrap();
    println!("product formula in n = 2: {} = {}", check.lhs, check.rhs);
}
