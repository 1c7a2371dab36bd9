use polyplane::fastga::{sample_stride, GaussianAccumulator, NO_NEIGHBOR};
use polyplane::geometry::Vec3;
use proptest::prelude::*;

fn normal() -> impl Strategy<Value = Vec3> {
    prop_oneof![
        8 => (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z)),
        1 => Just(Vec3::NAN),
        1 => Just(Vec3::ZERO),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_add_up_to_the_sampled_votes(level in 0u32..5, normals in prop::collection::vec(normal(), 0..2000), pct in 0.05..=1.0f64) {
        let mut ga = GaussianAccumulator::new(level).unwrap();
        let votes = ga.integrate_normals(&normals, pct);
        let expected = normals
            .iter()
            .step_by(sample_stride(pct))
            .filter(|n| n.norm() > 0.0 && n.is_finite())
            .count();
        prop_assert_eq!(votes, expected);
        prop_assert_eq!(ga.counts().iter().sum::<u64>(), expected as u64);
    }

    #[test]
    fn lookups_stay_near_their_window(level in 0u32..6, normals in prop::collection::vec(normal(), 1..500)) {
        let ga = GaussianAccumulator::new(level).unwrap();
        let bound = (ga.window_hi - ga.window_lo + 1) as usize + 1;
        for n in normals.iter().filter(|n| n.norm() > 1e-9) {
            let n = n.normalized();
            let id = polyplane::fastga::s2_id(n).unwrap();
            let (lo, hi) = ga.search_window(id);
            prop_assert!(hi - lo < bound);
            let k = ga.find_cell_index(n);
            let near = (lo..=hi).any(|w| w == k || ga.neighbors[w].iter().take_while(|&&j| j != NO_NEIGHBOR).any(|&j| j == k));
            prop_assert!(near, "cell {} is outside window {}..={} and its ring", k, lo, hi);
        }
    }
}

#[test]
fn construction_is_bit_identical() {
    for level in 0..6 {
        let (a, b) = (GaussianAccumulator::new(level).unwrap(), GaussianAccumulator::new(level).unwrap());
        assert_eq!(a.neighbors, b.neighbors);
        assert_eq!(a.model_slope.to_bits(), b.model_slope.to_bits());
        assert_eq!(a.model_intercept.to_bits(), b.model_intercept.to_bits());
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert_eq!(x.s2id, y.s2id);
            assert_eq!(x.normal.to_array().map(f64::to_bits), y.normal.to_array().map(f64::to_bits));
        }
    }
}
