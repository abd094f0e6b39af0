//! Random matrices, states and channels for tests, sweeps and benchmarks.
//!
//! Channels are drawn from Haar-random isometries `C^2 -> C^2 ⊗ C^d`
//! (Gram-Schmidt on a complex Gaussian matrix), sliced into `d` Kraus
//! operators. Choosing `d` uniformly from `1..=4` covers every Choi rank.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::KrausSet;
use crate::matrix::{ComplexMatrix, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt). Positive
/// diagonal of the implied `R` factor makes the result Haar distributed when
/// `m` is Gaussian.
fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = m.shape();
    let mut q: Vec<Vec<C64>> = (0..cols)
        .map(|c| (0..rows).map(|r| m[(r, c)]).collect())
        .collect();
    for j in 0..cols {
        for k in 0..j {
            let (done, rest) = q.split_at_mut(j);
            let qk = &done[k];
            let proj: C64 = qk.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in rest[0].iter_mut().zip(qk) {
                *x -= proj * y;
            }
        }
        let norm = q[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in q[j].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| q[c][r])
}

pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    orthonormalize_columns(&gaussian_matrix(rng, n, n))
}

/// Haar-random isometry `C^2 -> C^(2d)`.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, env_dim: usize) -> ComplexMatrix {
    orthonormalize_columns(&gaussian_matrix(rng, 2 * env_dim, 2))
}

/// Random qubit channel with `env_dim` Kraus operators. Rows of the isometry
/// are ordered output ⊗ environment.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, env_dim: usize) -> KrausSet {
    assert!((1..=4).contains(&env_dim), "environment dimension must be 1..=4");
    let v = haar_isometry(rng, env_dim);
    let ops = (0..env_dim)
        .map(|i| ComplexMatrix::from_fn(2, 2, |out, inp| v[(out * env_dim + i, inp)]))
        .collect();
    KrausSet::new(ops).expect("slices of an isometry are trace preserving")
}

/// Random channel with environment dimension uniform in `1..=4`.
pub fn random_channel_any<R: Rng + ?Sized>(rng: &mut R) -> KrausSet {
    let d = rng.random_range(1..=4);
    random_channel(rng, d)
}

/// Haar-random unit column vector.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, 1);
    g.scale_real(1.0 / g.frobenius_norm())
}

/// Random mixed qubit state (Ginibre ensemble).
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(rng, 2, 2);
    let m = &g * &g.adjoint();
    m.scale_real(1.0 / m.trace().re)
}

/// Measure-and-prepare channel with `n` rank-one Kraus operators
/// `|ψ_k⟩⟨φ_k|`, where the `φ_k` form a random rank-one POVM.
pub fn random_measure_prepare<R: Rng + ?Sized>(rng: &mut R, n: usize) -> KrausSet {
    assert!(n >= 2, "a rank-one POVM on a qubit needs at least two elements");
    let v = orthonormalize_columns(&gaussian_matrix(rng, n, 2));
    let ops = (0..n)
        .map(|k| {
            // φ_k* is row k of the isometry
            let phi_adj = ComplexMatrix::from_fn(1, 2, |_, c| v[(k, c)]);
            let psi = random_pure_vector(rng, 2);
            &psi * &phi_adj
        })
        .collect();
    KrausSet::new(ops).expect("rank-one POVM gives a trace-preserving channel")
}
