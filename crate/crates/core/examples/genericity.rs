//! Genericity verdicts for the built-in families.

use idemgeo::classify::{analyze, num_text};
use idemgeo::families::{make_family, FamilyOptions, FamilyParams, FAMILY_NAMES};
use idemgeo::solver::SolverConfig;

fn main() {
    let opts = FamilyOptions { tau: Some("2".into()), n: Some(2), ..FamilyOptions::default() };
    for (name, _) in FAMILY_NAMES {
        let family = make_family(&FamilyParams::from_name(name, &opts).expect("known")).expect("buildable");
        let report = analyze(&family.algebra, &SolverConfig::default());
        let sigma: Vec<String> = report.sigma.iter().map(num_text).collect();
        println!(
            "{name:<9} dim {}  {:<24} real generic: {:<5}  sigma {{{}}}",
            report.dim,
            report.verdict.status.to_string(),
            report.real_generic.real_generic.map_or("?".into(), |b| b.to_string()),
            sigma.join(", ")
        );
    }
}
