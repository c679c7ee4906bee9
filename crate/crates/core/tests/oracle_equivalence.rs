use aklt_negativity::oracle::{
    build_vbs, dense_partial_transpose, edge_coefficients, end_to_tail_negativity, geometry_sites, hamiltonian_check,
    oracle_negativity, reduce, Chain,
};
use aklt_negativity::spectrum::{hermitian_eigenvalues, negativity_of};
use aklt_negativity::verify::{random_weights, run, standard_cases, DEFAULT_TOL};
use aklt_negativity::{BlockGeometry, BoundaryWeights, EdgeOperator};
use approx::assert_abs_diff_eq;

#[test]
fn every_small_geometry_agrees() {
    let cases = standard_cases(8, 5);
    assert!(cases.len() >= 60);
    for cmp in run(&cases).unwrap() {
        assert!(cmp.agrees(DEFAULT_TOL), "{cmp:?}");
    }
}

#[test]
fn outer_block_lengths_do_not_matter() {
    for (lc, le) in [(0, 0), (0, 2), (2, 0), (1, 1), (2, 2)] {
        let g = BlockGeometry::HalfBoundary {
            lc,
            la: 2,
            gap: 0,
            lb: 2,
            le,
        };
        let (n, _) = oracle_negativity(&g, None).unwrap();
        assert_abs_diff_eq!(n, 0.48335219241394, epsilon = 1e-12);
    }
}

#[test]
fn reduced_states_are_physical() {
    let w = random_weights(42);
    let geometries = [
        (
            BlockGeometry::HalfBoundary {
                lc: 1,
                la: 2,
                gap: 1,
                lb: 3,
                le: 0,
            },
            None,
        ),
        (BlockGeometry::Spin1Boundary { la: 3, gap: 1, lb: 2 }, Some(w)),
        (
            BlockGeometry::Periodic {
                l1: 1,
                la: 2,
                l2: 2,
                lb: 2,
            },
            None,
        ),
    ];
    for (g, w) in geometries {
        let (_, a, b) = geometry_sites(&g, w.as_ref()).unwrap();
        let rho = reduce(&build_vbs(&g, w.as_ref()).unwrap(), &a, &b).unwrap();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        assert!(hermitian_eigenvalues(&rho.matrix).unwrap().min() >= -1e-12);

        // The untransposed spectra agree too, not only the transposed ones.
        let edge = hermitian_eigenvalues(&EdgeOperator::for_geometry(g, w.as_ref()).unwrap().orthonormalize()).unwrap();
        let dense = hermitian_eigenvalues(&rho.matrix).unwrap();
        assert!(edge.padded_distance(&dense) < 1e-12, "{g}");

        let pt = dense_partial_transpose(&rho);
        assert_abs_diff_eq!(pt.trace().re, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn edge_coefficients_of_projected_oracle() {
    let g = BlockGeometry::HalfBoundary {
        lc: 1,
        la: 2,
        gap: 0,
        lb: 2,
        le: 1,
    };
    let (_, a, b) = geometry_sites(&g, None).unwrap();
    let rho = reduce(&build_vbs(&g, None).unwrap(), &a, &b).unwrap();
    let oracle = edge_coefficients(&rho, 2, 2);
    let op = EdgeOperator::for_geometry(g, None).unwrap();
    for (x, y) in oracle.iter().zip(op.coeffs().iter()) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn left_end_never_entangles_with_distant_tail() {
    for n in 1..=5 {
        assert!(end_to_tail_negativity(n).unwrap() <= 1e-12, "n = {n}");
    }
}

#[test]
fn degenerate_boundary_ground_space() {
    for n in 2..=4 {
        for beta in 0..4 {
            let weights = BoundaryWeights::basis(beta).unwrap();
            let r = hamiltonian_check(&Chain::Spin1Ends { n, weights }).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.null_dim, 4);
        }
    }
    let r = hamiltonian_check(&Chain::Spin1Ends {
        n: 3,
        weights: random_weights(1),
    })
    .unwrap();
    assert!(r.annihilation <= 1e-10);
}

#[test]
fn spin1_boundary_label_matters_only_at_finite_size() {
    let values: Vec<f64> = (0..4)
        .map(|b| {
            let w = BoundaryWeights::basis(b).unwrap();
            negativity_of(BlockGeometry::Spin1Boundary { la: 3, gap: 0, lb: 3 }, Some(&w))
                .unwrap()
                .negativity
        })
        .collect();
    assert_abs_diff_eq!(values[0], values[1], epsilon = 1e-12);
    assert_abs_diff_eq!(values[0], values[3], epsilon = 1e-12);
    assert!((values[0] - values[2]).abs() > 1e-3);
    for (b, v) in values.iter().enumerate() {
        let w = BoundaryWeights::basis(b).unwrap();
        let (oracle, _) = oracle_negativity(&BlockGeometry::Spin1Boundary { la: 3, gap: 0, lb: 3 }, Some(&w)).unwrap();
        assert_abs_diff_eq!(*v, oracle, epsilon = 1e-10);
    }
}
