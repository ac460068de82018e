//! Singular points of x' = x^2 - x for one algebra of each configuration type.

use idemgeo::classify::{analyze, ConfigType};
use idemgeo::families::random_generic_2d_of_type;
use idemgeo::ode::phase_analysis;
use idemgeo::solver::SolverConfig;
use idemgeo::AnyAlgebra;

fn main() {
    for ty in [ConfigType::TypeI, ConfigType::TypeII, ConfigType::TypeIII] {
        let alg: AnyAlgebra = random_generic_2d_of_type(11, ty, true).algebra.into();
        let report = analyze(&alg, &SolverConfig::default());
        let phase = phase_analysis(&alg, &report).expect("real generic");
        let labels: Vec<String> = phase.classes.iter().map(|c| format!("{:?}", c.label)).collect();
        println!(
            "{ty}: index at infinity {:?}, {:?} / {:?}\n  {}",
            report.index_at_infinity,
            phase.berlinskii.shape,
            phase.berlinskii.structural_label,
            labels.join(", ")
        );
    }
}
