//! Vertices of the quotient up to radius 3, with class, color and weight.

use hecke4::geometry::{classify, color, enumerate_ball, neighbors};
use hecke4::weights::vertex_weight;

fn main() -> Result<(), hecke4::Error> {
    let q = 2;
    for x in enumerate_ball(3) {
        let w = vertex_weight(x, q)?;
        let out: Vec<String> = neighbors(x, 1)?.iter().map(|u| u.to_string()).collect();
        println!("{:<10} {:<8} color {} weight {:<12} A1 -> {}", x.to_string(), classify(x).to_string(), color(x).value(), w.value(), out.join(" "));
    }
    Ok(())
}
