//! Spectral, charge and barycentric identities on a random 2D algebra, in both scalar modes.

use idemgeo::classify::{analyze, num_text};
use idemgeo::families::random_generic_2d;
use idemgeo::solver::SolverConfig;
use idemgeo::AnyAlgebra;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let sample = random_generic_2d(seed, true);
    let spectrum: Vec<String> = sample.spectrum.iter().map(|q| q.to_string()).collect();
    println!("seed {seed}: spectrum ({})", spectrum.join(", "));

    let exact: AnyAlgebra = sample.algebra.into();
    let float = exact.clone().into_float();
    for (name, alg, cfg) in [
        ("exact", exact, SolverConfig::default()),
        ("float", float, SolverConfig { force_numeric: true, ..SolverConfig::default() }),
    ] {
        let report = analyze(&alg, &cfg);
        let res = report.residuals.expect("real generic");
        let bary: Vec<String> = res.barycentric.iter().map(num_text).collect();
        println!(
            "{name}: spectral {}, charge sum {}, barycentric ({})",
            num_text(&res.spectral),
            num_text(&res.charge_sum),
            bary.join(", ")
        );
    }
}
