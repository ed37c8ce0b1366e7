//! Parse formulas and evaluate them on the fuzzy liquidity frame under
//! each algebra package.

use epirisk::applications::liquidity_frame;
use epirisk::formula::{evaluate, parse, print};
use epirisk::AlgebraPackage;

fn main() -> epirisk::Result<()> {
    let frame = liquidity_frame();
    let formulas = ["[K]r", "<K>r", "~[K]r", "r & ![K]r", "[K]r & [K]!r"];
    for pkg in AlgebraPackage::all() {
        println!("{}", pkg.name());
        for text in formulas {
            let f = parse(text)?;
            let v = evaluate(&f, &frame, pkg)?;
            println!("  {:<16} w0={:.6} w1={:.6}", print(&f), v.values()[0], v.values()[1]);
        }
    }
    Ok(())
}
