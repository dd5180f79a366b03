//! Loops in U(n) ⊂ Sp(n): the Maslov index is twice the winding of `det u_t`.

use maslov::paths::{loop_winding_index, Settings};
use maslov::sampling::{random_unitary_loop, rng};

fn main() {
    let settings = Settings::default();
    let mut rng = rng(3);
    for n in 1..=3 {
        for k in [-2, 0, 1, 3] {
            let path = random_unitary_loop(&mut rng, n, k, 512);
            let w = loop_winding_index(&path, &settings).expect("closed unitary loop");
            println!("n={n} k={k:>2}: winding {:>2}, mu {:>2}", w.k, w.cross_check.index);
        }
    }
}
