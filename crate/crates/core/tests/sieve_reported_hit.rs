//! Twist sums around a reported hit, for the rank-5 curve with torsion
//! ℤ/8ℤ whose twist by −227 has rank 4.

use ellquad::curve::parse_rational_curve;
use ellquad::modp::ap_table;
use ellquad::sieve::{run_sieve, SieveConfig, Variant};

const Z8: &str = "[0,1,0,-11849634571550798667743047864720,15613761915399875450490670165233536220551598068]";

#[test]
fn minus_227_beats_the_median_at_every_cutoff() {
    let e = parse_rational_curve(Z8).unwrap();
    let table = ap_table(&e, 2000);
    for pmax in [500, 1000, 2000] {
        let mut cfg = SieveConfig::new(&e, pmax, -2000, -2);
        cfg.top_k = usize::MAX;
        cfg.variant = Variant::S1;
        let hits = run_sieve(&cfg, &table).unwrap();
        let target = hits.iter().find(|h| h.d == -227).expect("-227 is squarefree").sum;
        let mut sums: Vec<f64> = hits.iter().map(|h| h.sum).collect();
        sums.sort_by(f64::total_cmp);
        let median = sums[sums.len() / 2];
        assert!(target > median, "pmax {pmax}: {target} vs median {median}");
    }
}
