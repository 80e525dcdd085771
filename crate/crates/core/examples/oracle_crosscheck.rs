//! Series against brute-force integration of the defining integrals.

use watson_lattice::lattice::{i_bcc, LatticeFamily, LatticeQuery};
use watson_lattice::oracle::{integrate, integrate_singular_i2, QuadratureConfig};
use watson_lattice::TruncationControl;

fn main() -> watson_lattice::Result<()> {
    let control = TruncationControl::tolerance(1e-13);
    let config = QuadratureConfig { mc_samples: 2_000_000, ..QuadratureConfig::default() };

    println!("{:<14} {:>2} {:>20} {:>20} {:>10} {:>16}", "family", "d", "series", "oracle", "diff", "method");
    for (family, d) in [
        (LatticeFamily::I, 2),
        (LatticeFamily::Itilde, 3),
        (LatticeFamily::Jtilde, 2),
        (LatticeFamily::Gferro, 3),
        (LatticeFamily::Gsc2, 2),
        (LatticeFamily::MaradudinSq, 2),
        (LatticeFamily::J, 4),
        (LatticeFamily::I, 5),
    ] {
        let q = LatticeQuery::new(family, d as f64, 1.5)?;
        let series = q.evaluate(&control)?.value;
        let oracle = integrate(&q, &config)?;
        println!(
            "{:<14} {:>2} {:>20.15} {:>20.15} {:>10.2e} {:>16}",
            family.name(),
            d,
            series,
            oracle.value,
            (series - oracle.value).abs(),
            format!("{:?}", oracle.method)
        );
    }

    // η = 1 has an integrable singularity at the origin; it gets its own substitution.
    let singular = integrate_singular_i2(&QuadratureConfig::default())?;
    let series = i_bcc(2, 1.0, &control)?.value;
    println!("\nI_2(1): series {series:.15}, singular quadrature {:.15} ({} evaluations)", singular.value, singular.samples_or_evals);
    Ok(())
}
