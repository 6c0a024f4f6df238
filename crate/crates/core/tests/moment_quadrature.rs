use crescendo_core::moments::{legendre_values, reconstruct_intensity};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre nodes and weights from the Jacobi matrix eigenproblem.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let b = kf / (4.0 * kf * kf - 1.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let nodes = eig.eigenvalues.iter().copied().collect();
    let weights = (0..n).map(|j| 2.0 * eig.eigenvectors[(0, j)].powi(2)).collect();
    (nodes, weights)
}

#[test]
fn legendre_orthogonality() {
    let (mu, w) = gauss_legendre(20);
    for l in 0..10 {
        for m in 0..10 {
            let s: f64 = mu
                .iter()
                .zip(&w)
                .map(|(&x, &wt)| wt * legendre_values(9, x)[l] * legendre_values(9, x)[m])
                .sum();
            let expected = if l == m { 2.0 / (2 * l + 1) as f64 } else { 0.0 };
            assert!((s - expected).abs() < 1e-13, "l={l} m={m}");
        }
    }
}

#[test]
fn reconstruction_reproduces_moments_and_parseval() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mu, w) = gauss_legendre(24);
    for order in [0usize, 1, 3, 7] {
        let u: Vec<f64> = (0..=order).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let values: Vec<f64> = mu.iter().map(|&x| reconstruct_intensity(&u, x).unwrap()).collect();
        for (l, ul) in u.iter().enumerate() {
            let projected: f64 = mu
                .iter()
                .zip(&w)
                .zip(&values)
                .map(|((&x, &wt), &v)| wt * v * legendre_values(order, x)[l])
                .sum();
            assert!((projected - ul).abs() < 1e-13);
        }
        let energy: f64 = w.iter().zip(&values).map(|(wt, v)| wt * v * v).sum();
        let parseval: f64 = u.iter().enumerate().map(|(l, v)| (2 * l + 1) as f64 / 2.0 * v * v).sum();
        assert!((energy - parseval).abs() < 1e-12 * parseval.max(1.0));
    }
}
