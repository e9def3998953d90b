//! z <-> lambda round trips and family classification.

use hecke4::spectral::{boundary_points, classify, eig_from_z, sample_family, z_from_eig, Family, FamilyTag, TOL};

fn main() -> Result<(), hecke4::Error> {
    let q = 2;
    let tags = [
        Family::Trivial { k: 0 },
        Family::Family2 { theta: 0.4 },
        Family::Family3 { theta1: 0.9, sign: -1 },
        Family::Family4 { theta1: 0.5, theta2: -1.2 },
        Family::Tempered { theta1: 0.3, theta2: 1.1, theta3: -2.0 },
    ];
    for f in tags {
        let z = sample_family(&FamilyTag::new(f), q)?;
        let lam = eig_from_z(&z.z(), q)?;
        let back = z_from_eig(&lam, q)?;
        let tag = classify(&back.point.z(), q, TOL)?;
        println!("{tag}\n  z      = {z}\n  lambda = {:.6} {:.6} {:.6}\n  mult   = {:?}", lam.lambda1, lam.lambda2, lam.lambda3,
            back.multiplicities);
    }
    for (kind, p) in boundary_points(q) {
        println!("boundary {}: {}", kind.name(), classify(&p.z(), q, TOL)?);
    }
    Ok(())
}
