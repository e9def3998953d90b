//! Radial sequences from lambda and the convolution identities against a
//! random perturbation.

use hecke4::harness::{radial_sequences, measure_convolution, random_perturbation};
use hecke4::spectral::{eig_from_z, sample_family, Family, FamilyTag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), hecke4::Error> {
    let q = 2;
    let z = sample_family(&FamilyTag::new(Family::Family2 { theta: 0.4 }), q)?;
    let lam = eig_from_z(&z.z(), q)?;
    let s = radial_sequences(&lam, q, 8)?;
    for k in 0..8 {
        println!("{k}: alpha {:>10.4}  beta {:>10.4}  gamma {:>10.4}", s.alpha[k], s.beta[k], s.gamma[k]);
    }
    println!("closed-form gaps at n=8: {:?}", s.closed_form_gap);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = measure_convolution(&z, q, &random_perturbation(3, &mut rng), 20)?;
    println!("convolution gaps: {:.2e} {:.2e} {:.2e}", g.alpha, g.beta, g.gamma);
    Ok(())
}
