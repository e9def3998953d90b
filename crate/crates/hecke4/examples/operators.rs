//! Stencils of the three weighted operators, row sums, and the adjoint identity.

use hecke4::geometry::enumerate_ball;
use hecke4::operators::{adjoint_defect, regular_degrees, stencil, BallFunction};
use hecke4::{Complex64, VertexId};

fn main() -> Result<(), hecke4::Error> {
    let q = 3;
    println!("regular degrees at q={q}: {:?}", regular_degrees(q));
    let x = VertexId::new(3, 1, 0)?;
    for i in 1..=3 {
        let s = stencil(x, i, q)?;
        let terms: Vec<String> = s.terms.iter().map(|(u, c)| format!("{c}*f{u}")).collect();
        println!("(A{i} f){x} = {}   [row sum {}]", terms.join(" + "), s.row_sum());
    }

    // Compactly supported test functions, well inside the ball.
    let f = BallFunction::from_fn(12, |v| if v.ell <= 4 { Complex64::new(v.m as f64, 1.0) } else { 0.0.into() });
    let g = BallFunction::from_fn(12, |v| if v.ell <= 5 { Complex64::new(1.0, v.n as f64) } else { 0.0.into() });
    for i in 1..=3 {
        println!("|<A{i} f, g> - <f, A{} g>| = {:.2e}", 4 - i, adjoint_defect(&f, &g, i, q)?);
    }
    println!("ball(12) has {} vertices", enumerate_ball(12).len());
    Ok(())
}
