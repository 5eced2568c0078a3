use std::sync::Arc;
use std::time::Instant;

use qhw_koszul::{build_koszul, end_cohomology_dims};
use qhw_linalg::Field;
use qhw_quiver::parse_quiver;

#[test]
fn full_quiver_depth_six() {
    let q = Arc::new(parse_quiver(include_str!("../../../corpus/full2.quiver")).unwrap());
    let t = Instant::now();
    let kw = build_koszul(&q, 6, Field::Rational);
    let r = end_cohomology_dims(&kw);
    eprintln!("{:?} in {:?}", r, t.elapsed());
    assert!(r.iter().all(|d| d.pass));
}
