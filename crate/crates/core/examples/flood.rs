//! Flood regions, hesitation band growth in the tolerance radius, and the
//! probability quadrants.

use std::collections::BTreeMap;

use epirisk::applications::{flood_grid, flood_quadrants, FloodParams};

fn main() -> epirisk::Result<()> {
    for beta in [0.04, 0.08, 0.16] {
        let g = flood_grid(&FloodParams { beta, steps: 101, ..Default::default() })?;
        println!("beta={beta:.2} hesitation cells={}", g.hesitation_count());
    }

    let grid = flood_grid(&FloodParams::default())?;
    let mut tally: BTreeMap<_, usize> = BTreeMap::new();
    for q in flood_quadrants(&grid, 0.8, 0.2)? {
        *tally.entry((q.quadrant.name(), format!("{:?}", q.action))).or_default() += 1;
    }
    for ((quadrant, action), n) in tally {
        println!("{quadrant:<22} {action:<28} {n}");
    }
    Ok(())
}
