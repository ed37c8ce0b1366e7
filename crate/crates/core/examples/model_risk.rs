//! Lognormal expected-shortfall breach regions under parameter tolerance.

use std::fs::File;
use std::io::BufWriter;

use epirisk::applications::{lognormal_var_es, model_risk_grid, LognormalModelState, ModelRiskParams, RegionLabel};

fn main() -> epirisk::Result<()> {
    let r = lognormal_var_es(LognormalModelState::new(0.0, 1.0)?, 0.99)?;
    println!("standard lognormal at 99%: VaR={:.4} ES={:.4}", r.var, r.es);

    let grid = model_risk_grid(&ModelRiskParams::default())?;
    for label in RegionLabel::ALL {
        println!("{:<14} {}", label.name(), grid.count(label));
    }
    let path = std::env::temp_dir().join("model_risk.csv");
    grid.write_csv(BufWriter::new(File::create(&path)?))?;
    println!("wrote {}", path.display());
    Ok(())
}
