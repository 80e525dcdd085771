//! Simple-cubic companions: square-lattice Green function, cosine powers and the
//! Maradudin double integrals.

use watson_lattice::lattice::{a4_integral, g_sc2, maradudin_sc, summation_formula_check, MaradudinConfig, MaradudinForm};
use watson_lattice::TruncationControl;

fn main() -> watson_lattice::Result<()> {
    let control = TruncationControl::tolerance(1e-13);

    for eta in [1.1, 1.5, 2.0] {
        let c = summation_formula_check(eta)?;
        println!("eta = {eta}: G_sc2 = {:.15}, double sum {:.15} vs 2F1 {:.15} ({:.1e})", g_sc2(eta, &control)?.value, c.lhs, c.rhs, c.abs_diff);
    }

    println!();
    for k in 1..=3 {
        println!("(1/pi) int (1 - cos x / 2)^-{k} dx = {:.15}", a4_integral(k, 2.0, &control)?.value);
    }

    println!("\nMaradudin forms at eta = 1.5 over real d:");
    let config = MaradudinConfig::default();
    for d in [1.0, 1.5, 2.0, 2.5, 3.0] {
        let sqrt = maradudin_sc(d, 1.5, MaradudinForm::Sqrt, &config)?;
        let sq = maradudin_sc(d, 1.5, MaradudinForm::Sq, &config)?;
        println!("  d = {d}: sqrt form {:.12}, square form {:.12} ({} evaluations)", sqrt.value, sq.value, sqrt.evaluations);
    }
    Ok(())
}
