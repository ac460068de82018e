//! Reads an algebra from its square map and prints the structure-constant document.

use idemgeo::io::{parse_algebra, serialize_algebra, to_quadratic_map};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "x^2 - y^2, -3*x*y  # H(2)".to_string());
    match parse_algebra(&text) {
        Ok(alg) => {
            println!("square map: {}", to_quadratic_map(&alg).to_dsl());
            print!("{}", serialize_algebra(&alg));
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
