//! Ground-state magnetization and Néel temperature of the hyper-bcc antiferromagnet.

use watson_lattice::physics::{curie_temperature, ground_state, magnetization, neel_temperature, SpinSystem};
use watson_lattice::TruncationControl;

fn main() -> watson_lattice::Result<()> {
    let control = TruncationControl::tolerance(1e-12);
    let spin = 2.5;

    println!("S = {spin}");
    println!("{:>6} {:>12} {:>12} {:>12} {:>14}", "d", "P(eta=1)", "<S>/S", "<S>/S 1.005", "k T_N / J");
    for d in [1.5, 2.0, 2.01, 2.5, 3.0, 4.0, 6.0, 10.0] {
        let iso = SpinSystem::new(spin, 1.0, d, 1.0)?;
        let aniso = SpinSystem::new(spin, 1.0, d, 1.005)?;
        let g = ground_state(&iso, &control)?;
        let g_aniso = ground_state(&aniso, &control)?;
        let t = neel_temperature(&iso, &control)?;
        println!("{d:>6} {:>12.6} {:>12.8} {:>12.8} {:>14.6}", g.p_s, g.relative, g_aniso.relative, t.value());
    }

    let cubic = SpinSystem::new(spin, 1.0, 3.0, 1.0)?;
    println!("\nsimple check at d = 3: T_N = {:.6}, T_C = {:.6}", neel_temperature(&cubic, &control)?.value(), curie_temperature(&cubic, &control)?.value());

    println!("\nmagnetization(S, P):");
    for p in [0.0, 0.1, 1.0, 10.0, 1e4] {
        let row: Vec<String> = [0.5, 1.0, 2.5].iter().map(|&s| format!("{:.6e}", magnetization(s, p).unwrap())).collect();
        println!("  P = {p:<7} {}", row.join("  "));
    }
    Ok(())
}
