//! Builds the 2D algebra with prescribed eigenvalues and prints it as a document.
//!
//! `cargo run --example construct_spectrum -- 1/3 -1`

use idemgeo::classify::third_eigenvalue;
use idemgeo::families::construct_from_spectrum;
use idemgeo::io::serialize_algebra;
use idemgeo::scalar::{parse_rational_literal, rational};
use idemgeo::AnyAlgebra;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let parse = |s: &str| parse_rational_literal(s).map(|(q, _)| q).unwrap_or_else(|| panic!("not a number: {s}"));
    let (l1, l2) = match args.as_slice() {
        [a, b, ..] => (parse(a), parse(b)),
        _ => (rational(1, 3), rational(-1, 1)),
    };
    let l3 = third_eigenvalue(&l1, &l2).expect("a third eigenvalue exists");
    let built = construct_from_spectrum(&[l1, l2, l3], 0.0).expect("no eigenvalue equals 1/2");
    let third: Vec<String> = built.third.iter().map(|q| q.to_string()).collect();
    eprintln!("third idempotent in the basis (c1, c2): ({})", third.join(", "));
    print!("{}", serialize_algebra(&AnyAlgebra::from(built.algebra)));
}
