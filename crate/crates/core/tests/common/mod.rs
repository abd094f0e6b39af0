#![allow(dead_code)]

use nalgebra::Matrix3;
use qubit_channels::channel::{bloch_from_choi, choi_from_bloch, choi_rank, BlochParams, KrausSet};
use qubit_channels::matrix::ComplexMatrix;
use std::io::Write;
use qubit_channels::random;
use rand::Rng;

/// Signed singular value decomposition `T = R1 · diag(d) · R2ᵀ` with both
/// rotations in SO(3).
fn signed_svd(t: [[f64; 3]; 3]) -> (Matrix3<f64>, [f64; 3]) {
    let m = Matrix3::from_fn(|i, j| t[i][j]);
    let svd = m.svd(true, true);
    let mut u = svd.u.unwrap();
    let mut v_t = svd.v_t.unwrap();
    let mut d = [svd.singular_values[0], svd.singular_values[1], svd.singular_values[2]];
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    if v_t.determinant() < 0.0 {
        v_t.row_mut(2).neg_mut();
        d[2] = -d[2];
    }
    (u, d)
}

/// Diagonal Bloch form `(t', λ)` of a channel, reached by rotating input and
/// output (unitary conjugation, which preserves Choi rank and every verdict).
pub fn canonical_bloch(k: &KrausSet) -> BlochParams {
    let pt = bloch_from_choi(&k.choi()).unwrap();
    let (r1, d) = signed_svd(pt.t_matrix);
    let t = nalgebra::Vector3::new(pt.t[0], pt.t[1], pt.t[2]);
    let tp = r1.transpose() * t;
    BlochParams::new([tp[0], tp[1], tp[2]], d)
}

/// Diagonal Bloch parameters whose Choi matrix has the requested rank.
pub fn random_bloch_with_rank<R: Rng>(rng: &mut R, rank: usize, tol: f64) -> BlochParams {
    loop {
        let b = canonical_bloch(&random::random_channel(rng, rank));
        if choi_rank(&choi_from_bloch(&b), tol).unwrap() == rank {
            return b;
        }
    }
}

/// Uniform mixture weights (flat Dirichlet) over the tetrahedron vertices.
pub fn random_unital_lambda<R: Rng>(rng: &mut R) -> [f64; 3] {
    const VERTICES: [[f64; 3]; 4] = [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ];
    let e: Vec<f64> = (0..4).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    let mut l = [0.0; 3];
    for (w, v) in e.iter().zip(VERTICES) {
        for i in 0..3 {
            l[i] += w / s * v[i];
        }
    }
    l
}

/// General qubit dephasing channel in the computational basis: isometry
/// `e_i ↦ e_i ⊗ u_i` with random unit environment vectors `u_i`.
pub fn random_dephasing<R: Rng>(rng: &mut R) -> KrausSet {
    let u1 = random::random_pure_vector(rng, 2);
    let u2 = random::random_pure_vector(rng, 2);
    let ops = (0..2)
        .map(|k| {
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = u1[(k, 0)];
            m[(1, 1)] = u2[(k, 0)];
            m
        })
        .collect();
    KrausSet::new(ops).unwrap()
}

pub fn completely_dephase(rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2, 2);
    out[(0, 0)] = rho[(0, 0)];
    out[(1, 1)] = rho[(1, 1)];
    out
}

/// Writes a PASS/FAIL line straight to stderr (bypassing the test harness
/// capture, so it shows in every run) and fails the test on FAIL.
pub fn report(name: &str, ok: bool, detail: impl std::fmt::Display) {
    let line = format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "{name}: {detail}");
}
