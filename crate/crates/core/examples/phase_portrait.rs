//! Writes `portrait.svg` and `portrait.csv` for x' = x^2 - x on H(sqrt 3).

use std::path::Path;

use idemgeo::families::{make_family, FamilyParams};
use idemgeo::ode::{emit_phase_portrait, PortraitOptions};
use idemgeo::scalar::int;
use idemgeo::solver::SolverConfig;

fn main() {
    let alg = make_family(&FamilyParams::HTauSquared(int(3))).expect("tau^2 = 3").algebra;
    let opts = PortraitOptions::default();
    let summary = emit_phase_portrait(&alg, &opts, &SolverConfig::default(), Some(Path::new("portrait.svg")), Some(Path::new("portrait.csv")))
        .expect("writable directory");
    for c in &summary.singular_points {
        println!("({:+.4}, {:+.4})  {:?}", c.point[0], c.point[1], c.label);
    }
    println!("{} trajectories written to {}", summary.trajectories, summary.files.join(" and "));
}
