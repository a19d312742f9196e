mod common;

use common::{oracle_carriers, oracle_check};
use thurston::fixtures;

#[test]
fn brute_force_agrees_on_the_corpus() {
    let mut r = fixtures::rng(11);
    for (i, k) in oracle_carriers(12).iter().enumerate() {
        let st = oracle_check(k, &mut r, 6).unwrap_or_else(|e| panic!("carrier {i}: {e}"));
        assert!(st.isotopic > st.arcs, "carrier {i} has no isotopic pairs beyond the diagonal");
        if k.num_vertices() >= 4 {
            assert!(st.positive > 0, "carrier {i} has only disjoint arcs");
        }
    }
}
