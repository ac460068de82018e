//! Idempotents and Peirce eigenvalues of H(tau) for a few rational tau.
//!
//! Run with `cargo run --example h_tau_idempotents`.

use idemgeo::classify::{analyze, num_text};
use idemgeo::families::{make_family, FamilyParams, Real};
use idemgeo::scalar::{int, rational};
use idemgeo::solver::SolverConfig;

fn main() {
    for tau in [int(2), int(3), rational(1, 2), rational(1, 3)] {
        let family = make_family(&FamilyParams::HTau(Real::Exact(tau.clone()))).expect("valid tau");
        let report = analyze(&family.algebra, &SolverConfig::default());
        println!("tau = {tau}: {} ({})", report.config_type, report.verdict.status);
        for rec in report.idempotents.iter().skip(1) {
            let coords: Vec<String> = rec.exact.as_ref().expect("rational tau").iter().map(|q| q.to_string()).collect();
            println!("  c = ({})  lambda = {}", coords.join(", "), num_text(&rec.lambda()));
        }
    }
}
