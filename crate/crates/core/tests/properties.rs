//! Property tests over randomized slopes, curves, and decompositions.

use std::collections::BTreeMap;

use proptest::prelude::*;

use pantsgraph::agreement::{self, AgreementLevel};
use pantsgraph::curve::Curve;
use pantsgraph::decomposition::{
    apply_move, enumerate_moves, same_component, symmetric_difference, PantsDecomposition,
    TailPattern,
};
use pantsgraph::metric::{self, rat, Dhat};
use pantsgraph::model::SurfaceModel;
use pantsgraph::pspace;
use pantsgraph::slope::Slope;

fn model() -> SurfaceModel {
    SurfaceModel::build(4).unwrap()
}

fn slope_strategy() -> impl Strategy<Value = Slope> {
    (-6i64..=6, 0i64..=6)
        .prop_filter_map("zero slope", |(n, d)| Slope::new(n, d).ok())
}

fn decomposition_strategy(max_site: u64) -> impl Strategy<Value = PantsDecomposition> {
    proptest::collection::vec((0..=max_site, slope_strategy()), 0..5).prop_map(move |entries| {
        let model = model();
        let mut x = PantsDecomposition::new(&model, TailPattern::base(), BTreeMap::new()).unwrap();
        for (site, slope) in entries {
            if let Ok(next) = x.with_occupant(&model, site, slope) {
                x = next;
            }
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn slope_adjacency_is_symmetric_and_determinant(a in slope_strategy(), b in slope_strategy()) {
        prop_assert_eq!(a.is_adjacent(b), b.is_adjacent(a));
        prop_assert_eq!(a.det(b), -b.det(a));
    }

    #[test]
    fn slope_neighbors_are_adjacent_and_bounded(a in slope_strategy(), h in 0u64..6) {
        for t in a.neighbors(h) {
            prop_assert!(a.is_adjacent(t));
            prop_assert!(t.height() <= h);
        }
    }

    #[test]
    fn containment_implies_meeting(site in 0u64..40, slope in slope_strategy(), n in 0u32..3) {
        let model = model();
        let c = Curve::window(&model, site, slope);
        let sub = model.exhaustion(n);
        if c.contained_in(&model, &sub) {
            prop_assert!(c.meets(&model, &sub));
        }
    }

    #[test]
    fn agreement_hierarchy_and_monotonicity(
        x in decomposition_strategy(30),
        y in decomposition_strategy(30),
        n in 0u32..3,
    ) {
        let model = model();
        for i in 0..4u8 {
            let fine = AgreementLevel::new(i).unwrap();
            let coarse = AgreementLevel::new(i + 1).unwrap();
            if agreement::agrees(&model, fine, &x, &y, n) {
                prop_assert!(agreement::agrees(&model, coarse, &x, &y, n));
            }
        }
        for i in 1..=4u8 {
            let level = AgreementLevel::new(i).unwrap();
            if agreement::agrees(&model, level, &x, &y, n) {
                for m in 0..n {
                    prop_assert!(agreement::agrees(&model, level, &x, &y, m));
                }
            }
        }
    }

    #[test]
    fn moves_change_exactly_one_curve(x in decomposition_strategy(24), site in 0u64..24) {
        let model = model();
        let alpha = x.curve_at(&model, site);
        if let Ok(set) = enumerate_moves(&model, &x, &alpha, 3) {
            for mv in set.moves.iter().take(4) {
                let y = apply_move(&model, &x, mv).unwrap();
                prop_assert_eq!(symmetric_difference(&x, &y).count(), Some(1));
                prop_assert_eq!(symmetric_difference(&y, &x).count(), Some(1));
                prop_assert!(same_component(&x, &y));
                let back = apply_move(&model, &y, &mv.reversed()).unwrap();
                prop_assert_eq!(&back, &x);
            }
        }
    }

    #[test]
    fn dhat_is_symmetric_and_reflexive(
        x in decomposition_strategy(24),
        y in decomposition_strategy(24),
    ) {
        let model = model();
        for i in 1..=4u8 {
            let level = AgreementLevel::new(i).unwrap();
            prop_assert_eq!(
                metric::dhat(&model, level, &x, &x, 5).unwrap(),
                Dhat::Exact(rat(0, 1))
            );
            prop_assert_eq!(
                metric::dhat(&model, level, &x, &y, 5).unwrap(),
                metric::dhat(&model, level, &y, &x, 5).unwrap()
            );
        }
    }

    #[test]
    fn basic_open_grows_with_eps(
        x in decomposition_strategy(10),
        probe in decomposition_strategy(16),
        da in 2i64..6,
    ) {
        let model = model();
        let level = AgreementLevel::new(1).unwrap();
        let p = pspace::PantsPoint::Vertex(x);
        let q = pspace::PantsPoint::Vertex(probe);
        let n = 2;
        let small = rat(1, da + 1);
        let large = rat(1, da);
        let in_small = pspace::in_basic_open_at(&model, level, small, n, &p, &q).unwrap();
        let in_large = pspace::in_basic_open_at(&model, level, large, n, &p, &q).unwrap();
        if in_small {
            prop_assert!(in_large);
        }
    }
}
