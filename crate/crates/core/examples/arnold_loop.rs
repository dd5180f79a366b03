//! Arnol'd–Maslov index of a loop of Lagrangian planes from the Leray index.

use std::f64::consts::PI;

use maslov::paths::{
    arnold_maslov_loop_index, arnold_maslov_loop_index_with_reference, LiftedLagrangianPath, Settings,
};
use maslov::sampling::{random_lift, rng};
use maslov::LagrangianFrame;

fn main() {
    let settings = Settings::default();
    for turns in 1..=3 {
        let times: Vec<f64> = (0..=64 * turns).map(|i| i as f64 * PI / 64.0).collect();
        let frames: Vec<_> = times.iter().map(|&t| LagrangianFrame::line(t)).collect();
        let lam = LiftedLagrangianPath::from_frames(times, &frames, &settings.tol).unwrap();
        let mas = arnold_maslov_loop_index(&lam, &settings).unwrap();
        let mut rng = rng(turns as u64);
        let others: Vec<i64> = (0..4)
            .map(|_| {
                arnold_maslov_loop_index_with_reference(&lam, &random_lift(&mut rng, 1, 2), &settings).unwrap().index
            })
            .collect();
        println!("line turned {turns} × π: Mas = {}, with random references {others:?}", mas.index);
    }
}
