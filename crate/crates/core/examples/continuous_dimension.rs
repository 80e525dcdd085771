//! I(d, η) for real d through β(d, m) = [(½)_m/m!]^{d+1}.

use watson_lattice::lattice::{asymptotic_i, continuous_j};
use watson_lattice::{beta_coefficient, classify_continuous, continuous_i, continuous_i_dd, TruncationControl};

fn main() -> watson_lattice::Result<()> {
    let control = TruncationControl::tolerance(1e-12);

    println!("{:>6} {:>18} {:>18} {:>14}", "d", "I(d,1)", "I(d,1.005)", "dI/dd at 1.005");
    for d in [1.01, 1.1, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0] {
        let at_one = continuous_i(d, 1.0, &control)?.value;
        let aniso = continuous_i(d, 1.005, &control)?.value;
        let slope = continuous_i_dd(d, 1.005, &control)?.value;
        println!("{d:>6} {at_one:>18.12} {aniso:>18.12} {slope:>14.6e}");
    }

    println!("\nconvergence at eta = 1:");
    for d in [0.5, 1.0, 1.001, 3.0] {
        println!("  d = {d:<6} {:?}", classify_continuous(d, 1.0)?);
    }

    // What a fixed M = 10^4 leaves out near the divergent point.
    let fixed = TruncationControl::fixed(10_000);
    for eta in [1.0, 1.005] {
        let e = continuous_i(1.01, eta, &fixed)?;
        println!("\nM = 1e4, d = 1.01, eta = {eta}: last term {:.3e}, tail bound {:.3e}", e.last_term, e.tail_bound);
    }
    println!("beta(1.01, 1e4) = {:.4e}", beta_coefficient(1.01, 10_000));

    println!("\nlarge d:");
    for d in [10.0, 15.0, 25.0] {
        let full = continuous_i(d, 1.0, &TruncationControl::tolerance(1e-15))?.value;
        let eight = asymptotic_i(d, 1.0, 8)?;
        println!("  d = {d:>4}: I - 1 = {:.3e}, full - 8 terms = {:.3e}, J(d,1) = {:.12}", full - 1.0, full - eight, continuous_j(d, 1.0, &control)?.value);
    }
    Ok(())
}
