//! Truncated eigenfunctions as approximate eigenvectors: the norm ratio
//! settles below eps/(1-eps) times the degree constant.

use hecke4::harness::measure_weyl_ratio;
use hecke4::spectral::{sample_family, Family, FamilyTag};

fn main() -> Result<(), hecke4::Error> {
    let q = 2;
    let z = sample_family(&FamilyTag::new(Family::Family4 { theta1: 0.5, theta2: -1.2 }), q)?;
    for eps in [0.05, 0.1, 0.2] {
        let w = measure_weyl_ratio(&z, q, eps, 200)?;
        println!("eps {eps:<4}  bound {:>7.3}  ratios {:.4?}  settled at {:?}", w.bound, w.ratios, w.stabilized_at);
    }
    Ok(())
}
