use aklt_negativity::edge_rdm::{build_half_boundary, build_pbc, build_spin1_boundary};
use aklt_negativity::spectrum::{hermitian_eigenvalues, negativity_of};
use aklt_negativity::{BlockGeometry, BoundaryWeights, Complex64, DecayFactor};
use proptest::prelude::*;

fn len(n: usize) -> DecayFactor {
    DecayFactor::from_length(n as u32)
}

fn weights() -> impl Strategy<Value = BoundaryWeights> {
    prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0)).prop_filter_map("non-zero", |w| {
        BoundaryWeights::new(w.map(|(re, im)| Complex64::new(re, im))).ok()
    })
}

fn geometry() -> impl Strategy<Value = BlockGeometry> {
    prop_oneof![
        (0usize..3, 1usize..12, 0usize..8, 1usize..12, 0usize..3)
            .prop_map(|(lc, la, gap, lb, le)| BlockGeometry::HalfBoundary { lc, la, gap, lb, le }),
        (1usize..12, 0usize..8, 1usize..12).prop_map(|(la, gap, lb)| BlockGeometry::Spin1Boundary { la, gap, lb }),
        (0usize..6, 1usize..12, 0usize..6, 1usize..12).prop_map(|(l1, la, l2, lb)| BlockGeometry::Periodic {
            l1,
            la,
            l2,
            lb
        }),
    ]
}

proptest! {
    #[test]
    fn states_are_positive_with_unit_trace(g in geometry(), w in weights()) {
        let w = matches!(g, BlockGeometry::Spin1Boundary { .. }).then_some(w);
        let op = aklt_negativity::EdgeOperator::for_geometry(g, w.as_ref()).unwrap();
        let s = hermitian_eigenvalues(&op.orthonormalize()).unwrap();
        prop_assert!(s.min() >= -1e-12, "{g}: {}", s.min());
        prop_assert!((s.sum() - 1.0).abs() < 1e-11);

        let r = negativity_of(g, w.as_ref()).unwrap();
        prop_assert!(r.negativity >= 0.0);
        prop_assert!((r.spectrum.sum() - 1.0).abs() < 1e-11);
        let neg: f64 = r.spectrum.values().iter().filter(|&&e| e < -1e-12).map(|e| -e).sum();
        prop_assert!((r.negativity - neg).abs() < 1e-15);
    }

    #[test]
    fn transpose_is_the_reflected_state(la in 1usize..10, lb in 1usize..10, gap in 0usize..8, l2 in 0usize..6, w in weights()) {
        let spec = |op: aklt_negativity::EdgeOperator| hermitian_eigenvalues(&op.orthonormalize()).unwrap();
        let z = len(gap);

        let fwd = build_half_boundary(len(la), len(lb), z).unwrap().partial_transpose_a();
        let back = build_half_boundary(len(la), len(lb), z.reflected()).unwrap();
        prop_assert!(spec(fwd).padded_distance(&spec(back)) < 1e-12);

        let ring = len(la + lb + gap + l2);
        if let (Ok(fwd), Ok(back)) = (
            build_pbc(len(la), len(lb), z, len(l2), ring),
            build_pbc(len(la), len(lb), z.reflected(), len(l2).reflected(), ring),
        ) {
            prop_assert!(spec(fwd.partial_transpose_a()).padded_distance(&spec(back)) < 1e-12);
        }

        // Untransposed spin-1 boundary operators are physical for any boundary state.
        let op = build_spin1_boundary(len(la), len(lb), z, &w).unwrap();
        prop_assert!(spec(op).min() >= -1e-12);
    }

    #[test]
    fn separated_blocks_are_never_entangled(la in 1usize..15, lb in 1usize..15, gap in 1usize..10, l2 in 1usize..6) {
        let half = BlockGeometry::HalfBoundary { lc: 1, la, gap, lb, le: 1 };
        prop_assert!(negativity_of(half, None).unwrap().negativity <= 1e-12);
        let ring = BlockGeometry::Periodic { l1: gap, la, l2, lb };
        prop_assert!(negativity_of(ring, None).unwrap().negativity <= 1e-12);
    }
}

#[test]
fn adjacent_negativity_grows_towards_one_half() {
    let mut last = 0.0;
    for l in 1..=8 {
        let g = BlockGeometry::HalfBoundary {
            lc: 1,
            la: l,
            gap: 0,
            lb: l,
            le: 1,
        };
        let n = negativity_of(g, None).unwrap().negativity;
        assert!(n > last, "L = {l}");
        assert!(n < 0.5);
        last = n;
    }
}
