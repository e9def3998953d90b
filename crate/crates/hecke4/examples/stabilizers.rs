//! Closed-form stabilizer orders against brute-force enumeration over F_q.

use hecke4::harness::{count_stabilizer, ENUMERATION_BUDGET};
use hecke4::VertexClass;

fn main() -> Result<(), hecke4::Error> {
    for class in VertexClass::ALL {
        let x = class.representative();
        let c = count_stabilizer(x, 2, ENUMERATION_BUDGET)?;
        println!("{:<9} {:<10} formula {:>12}  brute {:>12}  match {}", class.to_string(), x.to_string(), c.formula_order,
            c.brute_force_order.as_deref().unwrap_or("-"), c.matches);
    }
    Ok(())
}
