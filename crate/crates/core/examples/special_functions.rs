//! Building blocks: general pFq sums, elliptic integrals, Bessel I0, Stirling numbers.

use watson_lattice::special::{bessel_i0, elliptic_e, elliptic_k, EllipticModulus, StirlingTable};
use watson_lattice::{ghgf_eval, HypergeometricSpec};

fn main() -> watson_lattice::Result<()> {
    // 2F1(1, 1; 2; x) = −ln(1 − x)/x
    let spec = HypergeometricSpec::new(vec![1.0, 1.0], vec![2.0], 0.5)?;
    let e = ghgf_eval(&spec, 1e-15, 10_000)?;
    println!("2F1(1,1;2;1/2) = {:.16}  (2 ln 2 = {:.16}, {} terms)", e.value, 2.0 * 2f64.ln(), e.terms_used);

    // Saalschützian at unit argument: Gauss gives Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)).
    let spec = HypergeometricSpec::new(vec![0.5, 0.5], vec![2.0], 1.0)?;
    let e = ghgf_eval(&spec, 1e-12, 10_000_000)?;
    println!("2F1(1/2,1/2;2;1) = {:.14}  (4/pi = {:.14}, {} terms)", e.value, 4.0 / std::f64::consts::PI, e.terms_used);

    for k in [0.0, 0.5, 0.9, 0.999] {
        let m = EllipticModulus::new(k)?;
        println!("k = {k:<6} K = {:.15}  E = {:.15}", elliptic_k(m)?, elliptic_e(m)?);
    }

    for x in [0.0, 1.0, 10.0, 100.0] {
        println!("I0({x}) = {:.15e}", bessel_i0(x));
    }

    let table = StirlingTable::new(6);
    for d in 0..=6 {
        println!("S({d}, .) = {:?}", table.row(d).unwrap());
    }
    Ok(())
}
