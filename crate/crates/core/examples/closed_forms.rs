//! Hypergeometric closed forms of the hyper-bcc integrals.

use watson_lattice::lattice::{i_bcc, i_tilde, j_bcc, j_tilde, JtildeForm, LatticeFamily, LatticeQuery};
use watson_lattice::special::{elliptic_e, elliptic_k, EllipticModulus};
use watson_lattice::TruncationControl;

fn main() -> watson_lattice::Result<()> {
    let control = TruncationControl::tolerance(1e-13);

    println!("{:<8} {:>3} {:>6} {:>22} {:>10} {:>8}", "family", "d", "eta", "value", "bound", "terms");
    for family in LatticeFamily::BCC {
        for d in [1.0, 2.0, 3.0] {
            for eta in [1.1, 2.0] {
                let v = LatticeQuery::new(family, d, eta)?.evaluate(&control)?;
                println!("{:<8} {:>3} {:>6} {:>22.16} {:>10.1e} {:>8}", family, d, eta, v.value, v.error_bound, v.work);
            }
        }
    }

    // The isotropic square lattice: Watson's constant.
    let i2 = i_bcc(2, 1.0, &control)?;
    println!("\nI_2(1) = {:.15}  ({} terms, tail correction {:.2e})", i2.value, i2.terms_used, i2.tail_correction);
    match j_bcc(2, 1.0, &control) {
        Err(e) => println!("J_2(1): {e}"),
        Ok(v) => println!("J_2(1) = {}", v.value),
    }

    // d = 1 reduces to complete elliptic integrals.
    let eta: f64 = 2.0;
    let k = EllipticModulus::new(1.0 / eta)?;
    println!("\nI_1(2)      = {:.15}  (2/pi) K     = {:.15}", i_bcc(1, eta, &control)?.value, 2.0 / std::f64::consts::PI * elliptic_k(k)?);
    println!("Itilde_1(2) = {:.15}  (2 eta/pi) E = {:.15}", i_tilde(1, eta, &control)?.value, 2.0 * eta / std::f64::consts::PI * elliptic_e(k)?);

    // Two independent series for Jtilde.
    let a = j_tilde(3, 1.5, JtildeForm::Difference, &control)?.value;
    let b = j_tilde(3, 1.5, JtildeForm::Shifted, &control)?.value;
    println!("\nJtilde_3(1.5): eta*I - Itilde = {a:.15}, shifted series = {b:.15}");
    Ok(())
}
