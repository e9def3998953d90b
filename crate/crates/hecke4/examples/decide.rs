//! Spectrum decisions for a member and a non-member, as JSON report lines.

use hecke4::harness::{spectrum_decision, DecisionInput};
use hecke4::{Complex64, Error};

fn main() -> Result<(), Error> {
    let q = 2;
    let member = DecisionInput::Lambda(hecke4::spectral::EigTriple::new(15.0.into(), 35.0.into(), 15.0.into()));
    println!("{}", spectrum_decision(member, q)?.to_json_line());

    let t = std::f64::consts::FRAC_PI_3;
    let outside = [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0), Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, -t)];
    println!("{}", spectrum_decision(DecisionInput::Z(outside), q)?.to_json_line());
    Ok(())
}
