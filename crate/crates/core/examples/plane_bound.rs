//! Counts idempotents on affine planes of R^3 and of a perturbed copy.

use idemgeo::classify::{analyze, conjecture_scan, ScanStrategy};
use idemgeo::families::{make_family, random_generic_3d, FamilyParams};
use idemgeo::solver::SolverConfig;

fn main() {
    let cfg = SolverConfig::default();
    let strategy = ScanStrategy { random_planes: 2000, ..ScanStrategy::default() };
    let product = make_family(&FamilyParams::DirectProduct(3)).expect("R^3").algebra;
    let random = random_generic_3d(3, &cfg).expect("a generic sample").algebra.into();
    for (name, alg) in [("R^3", product), ("perturbed", random)] {
        let report = analyze(&alg, &cfg);
        let scan = conjecture_scan(&report.real_points(), &strategy).expect("three-dimensional");
        println!(
            "{name}: {} idempotents, {} triple planes, {} random planes, max {} per plane, {} violations",
            scan.points, scan.triple_planes, scan.random_planes, scan.max_count, scan.violations.len()
        );
    }
}
