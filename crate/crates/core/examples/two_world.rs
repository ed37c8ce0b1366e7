//! The crisp two-world tables and a fuzzy two-world relation.

use epirisk::applications::{fuzzy_two_world, two_world_catalog};
use epirisk::AlgebraPackage;

fn main() -> epirisk::Result<()> {
    let cat = two_world_catalog(AlgebraPackage::GODEL, None)?;
    println!("evidence at w0   p0 p1 | Mp ◇p M̄p");
    for r in &cat.evidence_sets {
        println!("{:<16} {}  {}  | {}  {}  {}", r.evidence, r.p0, r.p1, r.box_, r.diamond, r.dual);
    }
    println!("\nuniversal K      p0 p1 | Kp ◇Kp moore");
    for r in cat.assurance.iter().chain(std::iter::once(&cat.es_breach)) {
        println!("{:<16} {}  {}  | {}  {}   {}", "", r.p0, r.p1, r.kp, r.dia_kp, r.moore);
    }
    let c = &cat.cascade;
    println!("\ncascade: Bq={} ◇Bq={} B̄q={}", c.bq, c.dia_bq, c.dual_bq);

    for r in cat.s5_frames.iter().chain(&cat.kd45_frames) {
        println!("{:<12} {:?}", r.name, r.profile.package_rows());
    }

    // A graded relation where dual and diamond part ways under Gödel.
    let fz = fuzzy_two_world(AlgebraPackage::GODEL, [[0.7, 0.4], [0.2, 1.0]], [0.3, 0.8])?;
    println!("\nfuzzy: Mp={:?} ◇p={:?} M̄p={:?} H={:?}", fz.box_, fz.diamond, fz.dual, fz.hesitation);
    Ok(())
}
