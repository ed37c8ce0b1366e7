//! A working commitment anchored on stress states is not factive.

use epirisk::applications::{contagion_frame, contagion_scenario};
use epirisk::properties::check_package_laws;
use epirisk::AlgebraPackage;

fn main() -> epirisk::Result<()> {
    let r = contagion_scenario(AlgebraPackage::GODEL)?;
    println!("Bp(w0)={} p(w0)={} nonfactive={}", r.bp_w0, r.p_w0, r.nonfactive);
    println!("adding w0 to its own evidence set: Bp(w0)={}", r.bp_w0_with_actual);

    for law in check_package_laws(&contagion_frame(), "B", AlgebraPackage::GODEL)? {
        println!("{:?}: holds={} expected={} witness={:?}", law.principle, law.holds, law.expected, law.witness);
    }
    Ok(())
}
