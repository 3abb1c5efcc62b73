mod common;

use proptest::prelude::*;
use structuration::corpus::{DocMatrix, MatrixKind};
use structuration::linalg::{
    correlation, eigh, principal_components, varimax, varimax_criterion, Basis, CorrelationMatrix,
    LoadingsMatrix, Matrix,
};

fn corr(rows: Vec<Vec<f64>>) -> CorrelationMatrix {
    let n = rows.len();
    CorrelationMatrix {
        labels: (0..n).map(|i| format!("v{i}")).collect(),
        r: Matrix::from_rows(&rows),
        basis: Basis::Correlation,
    }
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                m[i][j] = v[i * n + j];
                m[j][i] = v[i * n + j];
            }
        }
        m
    })
}

fn residual(a: &Matrix, values: &[f64], vectors: &Matrix) -> f64 {
    let av = a.matmul(vectors);
    let mut worst = 0.0f64;
    for j in 0..values.len() {
        for i in 0..a.rows() {
            worst = worst.max((av[(i, j)] - values[j] * vectors[(i, j)]).abs());
        }
    }
    worst
}

fn loadings(n: usize, k: usize, v: Vec<f64>) -> LoadingsMatrix {
    LoadingsMatrix {
        labels: (0..n).map(|i| format!("v{i}")).collect(),
        loadings: Matrix::from_vec(n, k, v),
        rotated: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigh_agrees_with_characteristic_polynomial(rows in (1usize..=4).prop_flat_map(symmetric)) {
        let n = rows.len();
        let eig = eigh(&Matrix::from_rows(&rows)).unwrap();
        let oracle = common::charpoly_eigenvalues(&rows);
        prop_assume!(oracle.len() == n);
        for (ours, theirs) in eig.values.iter().zip(&oracle) {
            prop_assert!((ours - theirs).abs() < 1e-8, "{:?} vs {:?}", eig.values, oracle);
        }
    }

    #[test]
    fn eigh_is_an_orthonormal_decomposition(rows in (2usize..=12).prop_flat_map(symmetric)) {
        let a = Matrix::from_rows(&rows);
        let eig = eigh(&a).unwrap();
        prop_assert!(residual(&a, &eig.values, &eig.vectors) < 1e-8);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let vtv = eig.vectors.transpose().matmul(&eig.vectors);
        prop_assert!(vtv.max_abs_diff(&Matrix::identity(a.rows())) < 1e-9);
        prop_assert!((eig.values.iter().sum::<f64>() - a.trace()).abs() < 1e-8);
    }

    #[test]
    fn varimax_is_an_orthogonal_rotation(
        (n, k, v) in (3usize..=15, 2usize..=4)
            .prop_flat_map(|(n, k)| (Just(n), Just(k), prop::collection::vec(-0.57f64..0.57, n * k)))
    ) {
        let l = loadings(n, k, v);
        let fit = varimax(&l, 1e-12, 1000).unwrap();
        let r = &fit.rotation;
        prop_assert!(r.transpose().matmul(r).max_abs_diff(&Matrix::identity(k)) < 1e-9);
        prop_assert!(l.loadings.matmul(r).max_abs_diff(&fit.loadings.loadings) < 1e-9);
        for (before, after) in l.communalities().iter().zip(fit.loadings.communalities()) {
            prop_assert!((before - after).abs() < 1e-9);
        }
        prop_assert!(fit.criterion_history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        for j in 0..k {
            let col = fit.loadings.loadings.column(j);
            let peak = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            prop_assert!(peak >= 0.0);
        }
    }

    #[test]
    fn full_rank_loadings_reconstruct_the_matrix(seed in 0u64..500, n in 2usize..=8) {
        let r = corr(common::random_correlation(n, 40, seed));
        let l = principal_components(&r, n).unwrap();
        let llt = l.loadings.matmul(&l.loadings.transpose());
        prop_assert!(llt.max_abs_diff(&r.r) < 1e-8);
    }
}

#[test]
fn random_correlation_matrices_up_to_hundred() {
    for (n, seed) in [(10, 1), (30, 2), (60, 3), (100, 4)] {
        let rows = common::random_correlation(n, 3 * n, seed);
        let a = Matrix::from_rows(&rows);
        let eig = eigh(&a).unwrap();
        assert!(residual(&a, &eig.values, &eig.vectors) < 1e-8, "n = {n}");
        assert!((eig.values.iter().sum::<f64>() - n as f64).abs() < 1e-8, "n = {n}");
    }
}

#[test]
fn two_by_two_correlation() {
    let r = corr(vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
    let eig = eigh(&r.r).unwrap();
    assert!((eig.values[0] - 1.5).abs() < 1e-14 && (eig.values[1] - 0.5).abs() < 1e-14);
    let l = principal_components(&r, 1).unwrap();
    for i in 0..2 {
        assert!((l.loadings[(i, 0)].abs() - 0.75f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn equal_loadings_rotate_by_forty_five_degrees() {
    let l = loadings(4, 2, vec![0.5, 0.5, 0.4, 0.4, 0.5, -0.5, 0.4, -0.4]);
    let before = varimax_criterion(&l.loadings);
    let fit = varimax(&l, 1e-12, 100).unwrap();
    assert!(varimax_criterion(&fit.loadings.loadings) > before);
    let angle = fit.rotation[(0, 0)].abs().acos().to_degrees();
    assert!((angle - 45.0).abs() < 1e-9, "angle {angle}");
    for i in 0..4 {
        let row = fit.loadings.loadings.row(i);
        assert!(row[0].abs() < 1e-12 || row[1].abs() < 1e-12);
    }
}

#[test]
fn simple_structure_is_left_alone() {
    let l = loadings(4, 2, vec![0.9, 0.0, 0.7, 0.0, 0.0, 0.8, 0.0, 0.6]);
    let fit = varimax(&l, 1e-12, 100).unwrap();
    assert!(fit.loadings.loadings.max_abs_diff(&l.loadings) < 1e-12);
}

#[test]
fn pearson_on_hand_columns() {
    let m = DocMatrix::new(
        (0..4).map(|i| format!("d{i}")).collect(),
        vec!["a".into(), "b".into(), "c".into()],
        vec![1, 1, 4, 2, 3, 3, 3, 2, 2, 4, 4, 1],
        MatrixKind::Words,
    )
    .unwrap();
    let r = correlation(&m).unwrap();
    assert!((r.r[(0, 1)] - 0.8).abs() < 1e-12);
    assert!((r.r[(0, 2)] + 1.0).abs() < 1e-12);
}
