//! The series as solutions of their differential equations.

use watson_lattice::odecheck::{ode_residual_i, ode_residual_j3, ode_residual_j_general, LinearOperator};

fn main() -> watson_lattice::Result<()> {
    println!("I_d equation in coefficient space (50 terms):");
    for d in 1..=4 {
        let r = ode_residual_i(d, 50)?;
        println!("  d = {d}: max |residual| = {:.2e}, relative to cancelling terms = {:.2e}", r.max_abs, r.relative());
    }

    println!("\nJ_d operators, coefficient of eta^power d^order/d eta^order:");
    for d in 2..=4 {
        let op = LinearOperator::j_equation(d)?;
        let terms: Vec<String> = op.terms().iter().map(|t| format!("{}*eta^{}*D{}", t.coefficient, t.power, t.order)).collect();
        println!("  d = {d}: {}", terms.join(" + "));
    }
    println!("  d = 3 matches the cubic-lattice operator: {}", LinearOperator::j_equation(3)? == LinearOperator::cubic_green());

    println!("\nJ_3 from central differences:");
    for eta in [1.2, 2.0] {
        for h in [0.02, 0.01, 0.005, 0.0025] {
            let r = ode_residual_j3(eta, h)?;
            println!("  eta = {eta}, h = {h:<6}: residual {:.2e}, rounding noise {:.2e}", r.residual, r.noise);
        }
    }
    let r = ode_residual_j_general(5, 2.0, 0.02)?;
    println!("\nJ_5 at eta = 2: residual {:.2e} of term scale {:.2e}", r.residual, r.scale);
    Ok(())
}
