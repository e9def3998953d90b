//! Evaluates f_z in each root regime and checks the eigen equations on a ball.

use hecke4::eigen::{coefficient_table, ray_values, Eigenfunction, Ray};
use hecke4::harness::eigen_residual;
use hecke4::spectral::{boundary_points, sample_family, Family, FamilyTag};
use hecke4::VertexId;

fn main() -> Result<(), hecke4::Error> {
    let q = 2;
    let mut points = vec![("tempered".to_string(),
        sample_family(&FamilyTag::new(Family::Tempered { theta1: 0.3, theta2: 1.1, theta3: -2.0 }), q)?)];
    points.extend(boundary_points(q).into_iter().map(|(k, p)| (format!("{} boundary", k.name()), p)));

    for (label, p) in &points {
        let t = coefficient_table(p.z(), q)?;
        let f = Eigenfunction::from_table(t.clone());
        let r = eigen_residual(p, q, 20)?;
        println!("{label}: regime {:?}, {} terms", t.regime, t.terms.len());
        println!("  f(2,1,0) = {:.6}   residual on ball(20) = {:.2e}", f.value(VertexId::new(2, 1, 0)?)?, r.overall());
    }

    let z = points[0].1.z();
    for ray in Ray::ALL {
        let r = ray_values(z, q, ray, 30, 0.1)?;
        println!("{ray:?}: |normalized f| at 30 = {:.3e}", r.normalized[30].norm());
    }
    Ok(())
}
