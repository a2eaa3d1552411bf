use erw_core::walk::{ensemble_terminals, WalkParams};
use std::time::Instant;
fn main() {
    let params = WalkParams::new(0.85, 0.5, 100_000, 1).unwrap();
    let t = Instant::now();
    let v = ensemble_terminals(&params, 2000).unwrap();
    let dt = t.elapsed().as_secs_f64();
    println!("{} steps/s  ({} ns/step) sum {}", 2e8 / dt, dt / 2e8 * 1e9, v.iter().sum::<i64>());
}
