//! Representations of single-qubit channels and conversions between them.
//!
//! Choi matrices live on `input ⊗ output` (first tensor factor is the input)
//! and are built as `C = Σ vec(K_i) vec(K_i)*` with column-stacking `vec`.
//! With this ordering the output marginal is `tr_input(C) = Φ(I)` and trace
//! preservation reads `tr_output(C) = I`. Both orderings appear in the
//! literature, so take care when importing Choi matrices from elsewhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{pauli, ComplexMatrix, Subsystem, C64, HERMITIAN_TOL, ONE, ZERO};

/// Tolerance on `‖Σ K*K - I‖_F` and on the TP marginal of a Choi matrix.
pub const TP_TOL: f64 = 1e-10;

/// Eigenvalues of a Choi matrix below `KRAUS_CUTOFF · tr(C)` are treated as
/// absent when extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-10;

/// Slack allowed when testing membership of the unital tetrahedron.
pub const TETRAHEDRON_TOL: f64 = 1e-10;

/// Kraus operators `K_i : C^2 -> C^d` with `Σ K_i* K_i = I_2`.
///
/// Qubit-to-qubit channels have `d = 2`; complementary channels may have any
/// output dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

fn completeness_residual(ops: &[ComplexMatrix]) -> f64 {
    let mut sum = ComplexMatrix::zeros(2, 2);
    for k in ops {
        sum = &sum + &(&k.adjoint() * k);
    }
    sum.distance(&ComplexMatrix::identity(2))
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(operators, TP_TOL)
    }

    /// Like [`KrausSet::new`] with a custom completeness tolerance.
    pub fn with_tolerance(operators: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidDimension("a Kraus set needs at least one operator".into()));
        };
        let out = first.rows();
        if operators.iter().any(|k| k.cols() != 2 || k.rows() != out) {
            return Err(Error::InvalidDimension(
                "Kraus operators must all be d x 2 with a common output dimension d".into(),
            ));
        }
        let residual = completeness_residual(&operators);
        if residual > tol {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn into_operators(self) -> Vec<ComplexMatrix> {
        self.operators
    }

    /// Number of Kraus operators (environment dimension of the induced dilation).
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn output_dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.operators)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        apply(self, rho)
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi_from_kraus(self)
    }

    pub fn complement(&self) -> KrausSet {
        complement(self)
    }

    /// `{U K_i V}` for unitaries `U` (output) and `V` (input).
    pub fn conjugated(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<KrausSet> {
        Self::new(self.operators.iter().map(|k| &(u * k) * v).collect())
    }

    pub fn stinespring(&self) -> StinespringIsometry {
        StinespringIsometry::from_kraus(self)
    }
}

/// Choi matrix on `input ⊗ output`, input dimension 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    m: ComplexMatrix,
    output_dim: usize,
}

impl ChoiMatrix {
    /// Validates shape, hermiticity and the TP marginal `tr_output(C) = I`.
    /// Positivity is not required here; see [`ChoiMatrix::is_cp`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() % 2 != 0 {
            return Err(Error::InvalidDimension(format!(
                "a qubit-input Choi matrix must be 2d x 2d, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let residual = m.hermiticity_residual();
        if residual > HERMITIAN_TOL * m.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        let c = Self {
            output_dim: m.rows() / 2,
            m,
        };
        let tp = c.tp_residual();
        if tp > TP_TOL {
            return Err(Error::NotTracePreserving { residual: tp });
        }
        Ok(c)
    }

    fn from_parts(m: ComplexMatrix, output_dim: usize) -> Self {
        Self { m, output_dim }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// `‖tr_output(C) - I‖_F`.
    pub fn tp_residual(&self) -> f64 {
        self.m
            .partial_trace(2, self.output_dim, Subsystem::Second)
            .expect("shape checked on construction")
            .distance(&ComplexMatrix::identity(2))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.m.eigenvalues_hermitian()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.m.min_eigenvalue()
    }

    pub fn is_cp(&self, tol: f64) -> Result<bool> {
        self.m.psd_check(tol)
    }

    pub fn phi_of_identity(&self) -> ComplexMatrix {
        phi_of_identity(self)
    }

    /// Channel action computed through the isomorphism:
    /// `Φ(X) = Σ_jl X_jl · C[j-th, l-th output block]`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (2, 2) {
            return Err(Error::InvalidDimension(format!(
                "qubit channel input must be 2x2, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let d = self.output_dim;
        Ok(ComplexMatrix::from_fn(d, d, |a, b| {
            let mut s = ZERO;
            for j in 0..2 {
                for l in 0..2 {
                    s += x[(j, l)] * self.m[(j * d + a, l * d + b)];
                }
            }
            s
        }))
    }

    /// `(V^T ⊗ U) C (V^T ⊗ U)*`, the Choi matrix of `{U K_i V}`.
    pub fn conjugated(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ChoiMatrix> {
        if u.shape() != (self.output_dim, self.output_dim) || v.shape() != (2, 2) {
            return Err(Error::InvalidDimension("conjugating unitaries have the wrong shape".into()));
        }
        let w = v.transpose().kron(u);
        Ok(Self::from_parts(&(&w * &self.m) * &w.adjoint(), self.output_dim))
    }

    /// The density matrix `C / 2`.
    pub fn normalized_state(&self) -> ComplexMatrix {
        self.m.scale_real(0.5)
    }

    pub fn distance(&self, other: &ChoiMatrix) -> f64 {
        self.m.distance(&other.m)
    }
}

/// Pauli-basis parameters of a channel whose transfer block is diagonal:
/// `½(I + w·σ) ↦ ½(I + (t + diag(λ) w)·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochParams {
    pub t: [f64; 3],
    pub lambda: [f64; 3],
}

impl BlochParams {
    pub fn new(t: [f64; 3], lambda: [f64; 3]) -> Self {
        Self { t, lambda }
    }

    pub fn unital(lambda: [f64; 3]) -> Self {
        Self { t: [0.0; 3], lambda }
    }

    pub fn is_unital(&self) -> bool {
        self.t == [0.0; 3]
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi_from_bloch(self)
    }

    pub fn t_norm_sqr(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum()
    }

    pub fn lambda_norm_sqr(&self) -> f64 {
        self.lambda.iter().map(|x| x * x).sum()
    }
}

/// Full real Pauli transfer block `(1 0; t T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliTransfer {
    pub t: [f64; 3],
    #[serde(rename = "T")]
    pub t_matrix: [[f64; 3]; 3],
}

impl PauliTransfer {
    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || self.t_matrix[i][j].abs() <= tol))
    }

    /// The diagonal `(t, λ)` form, if `T` is diagonal within `tol`.
    pub fn to_bloch(&self, tol: f64) -> Option<BlochParams> {
        self.is_diagonal(tol).then(|| BlochParams {
            t: self.t,
            lambda: [self.t_matrix[0][0], self.t_matrix[1][1], self.t_matrix[2][2]],
        })
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi_from_pauli_transfer(self)
    }
}

impl From<BlochParams> for PauliTransfer {
    fn from(b: BlochParams) -> Self {
        let mut t_matrix = [[0.0; 3]; 3];
        for (i, row) in t_matrix.iter_mut().enumerate() {
            row[i] = b.lambda[i];
        }
        Self { t: b.t, t_matrix }
    }
}

/// Stinespring isometry `V : C^2 -> C^d_out ⊗ C^d_env`, rows ordered
/// output ⊗ environment, `V = Σ_i K_i ⊗ e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StinespringIsometry {
    v: ComplexMatrix,
    output_dim: usize,
    env_dim: usize,
}

impl StinespringIsometry {
    pub fn from_kraus(k: &KrausSet) -> Self {
        let d = k.len();
        let out = k.output_dim();
        let v = ComplexMatrix::from_fn(out * d, 2, |r, c| k.operators[r % d][(r / d, c)]);
        Self {
            v,
            output_dim: out,
            env_dim: d,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn isometry_residual(&self) -> f64 {
        (&self.v.adjoint() * &self.v).distance(&ComplexMatrix::identity(2))
    }

    fn dilate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (2, 2) {
            return Err(Error::InvalidDimension("qubit channel input must be 2x2".into()));
        }
        Ok(&(&self.v * rho) * &self.v.adjoint())
    }

    /// `tr_env(V ρ V*)`.
    pub fn output_channel(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dilate(rho)?
            .partial_trace(self.output_dim, self.env_dim, Subsystem::Second)
    }

    /// `tr_out(V ρ V*)`.
    pub fn environment_channel(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.dilate(rho)?
            .partial_trace(self.output_dim, self.env_dim, Subsystem::First)
    }
}

/// Parameters of the two-Kraus canonical form
/// `A1 = diag(cos α, cos β)`, `A2 = [[0, sin β], [sin α, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rank2Params {
    pub alpha: f64,
    pub beta: f64,
}

impl Rank2Params {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn kraus(&self) -> KrausSet {
        rank2(self.alpha, self.beta)
    }
}

/// Any of the supported channel descriptions.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Kraus(KrausSet),
    Choi(ChoiMatrix),
    Bloch(BlochParams),
    PauliTransfer(PauliTransfer),
}

impl Channel {
    pub fn choi(&self) -> ChoiMatrix {
        match self {
            Channel::Kraus(k) => choi_from_kraus(k),
            Channel::Choi(c) => c.clone(),
            Channel::Bloch(b) => choi_from_bloch(b),
            Channel::PauliTransfer(p) => choi_from_pauli_transfer(p),
        }
    }

    /// The Kraus operators as given, or extracted from the Choi matrix.
    pub fn kraus(&self, tol: f64) -> Result<KrausSet> {
        match self {
            Channel::Kraus(k) => Ok(k.clone()),
            other => kraus_from_choi(&other.choi(), tol),
        }
    }
}

impl From<KrausSet> for Channel {
    fn from(k: KrausSet) -> Self {
        Channel::Kraus(k)
    }
}

impl From<ChoiMatrix> for Channel {
    fn from(c: ChoiMatrix) -> Self {
        Channel::Choi(c)
    }
}

impl From<BlochParams> for Channel {
    fn from(b: BlochParams) -> Self {
        Channel::Bloch(b)
    }
}

impl From<PauliTransfer> for Channel {
    fn from(p: PauliTransfer) -> Self {
        Channel::PauliTransfer(p)
    }
}

/// `C = Σ vec(K_i) vec(K_i)*`.
pub fn choi_from_kraus(k: &KrausSet) -> ChoiMatrix {
    let n = 2 * k.output_dim();
    let mut m = ComplexMatrix::zeros(n, n);
    for op in &k.operators {
        m = &m + &ComplexMatrix::outer(&op.vec());
    }
    ChoiMatrix::from_parts(m, k.output_dim())
}

/// Kraus operators `unvec(√λ_i v_i)` from the eigendecomposition of `C`,
/// keeping eigenvalues above `tol · tr(C)`.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: f64) -> Result<KrausSet> {
    let eig = c.m.hermitian_eigen()?;
    let min = eig.eigenvalues[0];
    if min < -tol * c.m.frobenius_norm().max(1.0) {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: min,
        });
    }
    let cutoff = tol * c.m.trace().re;
    let d = c.output_dim;
    let mut ops = Vec::new();
    let mut dropped = 0.0;
    // largest first, so the dominant operator leads
    for i in (0..eig.eigenvalues.len()).rev() {
        let l = eig.eigenvalues[i];
        if l > cutoff {
            let v = eig.eigenvector(i).scale_real(l.sqrt());
            ops.push(ComplexMatrix::unvec(&v, d, 2)?);
        } else {
            dropped += l.abs();
        }
    }
    KrausSet::with_tolerance(ops, TP_TOL + 2.0 * dropped + c.tp_residual())
}

/// Choi matrix of the diagonal Bloch form, entry by entry.
pub fn choi_from_bloch(b: &BlochParams) -> ChoiMatrix {
    let [t1, t2, t3] = b.t;
    let [l1, l2, l3] = b.lambda;
    let r = |x: f64| C64::new(0.5 * x, 0.0);
    let t_minus = C64::new(0.5 * t1, -0.5 * t2);
    let t_plus = C64::new(0.5 * t1, 0.5 * t2);
    let m = ComplexMatrix::new(
        4,
        4,
        vec![
            r(1.0 + t3 + l3), t_minus, ZERO, r(l1 + l2),
            t_plus, r(1.0 - t3 - l3), r(l1 - l2), ZERO,
            ZERO, r(l1 - l2), r(1.0 + t3 - l3), t_minus,
            r(l1 + l2), ZERO, t_plus, r(1.0 - t3 + l3),
        ],
    )
    .expect("finite Bloch parameters");
    ChoiMatrix::from_parts(m, 2)
}

/// Choi matrix of a general Pauli transfer block, assembled from
/// `Φ(X) = ½[tr(X)(I + t·σ) + Σ_ij T_ij tr(σ_j X) σ_i]`.
pub fn choi_from_pauli_transfer(p: &PauliTransfer) -> ChoiMatrix {
    let sigma = pauli::xyz();
    let phi = |x: &ComplexMatrix| -> ComplexMatrix {
        let tr = x.trace();
        let mut out = ComplexMatrix::identity(2).scale(tr * 0.5);
        for i in 0..3 {
            let mut coeff = tr * p.t[i];
            for j in 0..3 {
                coeff += (&sigma[j] * x).trace() * p.t_matrix[i][j];
            }
            out = &out + &sigma[i].scale(coeff * 0.5);
        }
        out
    };
    let mut m = ComplexMatrix::zeros(4, 4);
    for j in 0..2 {
        for l in 0..2 {
            let e = ComplexMatrix::from_fn(2, 2, |r, c| if r == j && c == l { ONE } else { ZERO });
            let block = phi(&e);
            for a in 0..2 {
                for b in 0..2 {
                    m[(2 * j + a, 2 * l + b)] = block[(a, b)];
                }
            }
        }
    }
    ChoiMatrix::from_parts(m, 2)
}

/// Pauli transfer block via `t_i = ½ tr(σ_i Φ(I))`, `T_ij = ½ tr(σ_i Φ(σ_j))`.
pub fn bloch_from_choi(c: &ChoiMatrix) -> Result<PauliTransfer> {
    if c.output_dim != 2 {
        return Err(Error::InvalidDimension("Bloch form needs a qubit output".into()));
    }
    let sigma = pauli::xyz();
    let phi_i = c.apply(&ComplexMatrix::identity(2))?;
    let mut t = [0.0; 3];
    let mut t_matrix = [[0.0; 3]; 3];
    for i in 0..3 {
        t[i] = 0.5 * (&sigma[i] * &phi_i).trace().re;
    }
    for j in 0..3 {
        let phi_j = c.apply(&sigma[j])?;
        for i in 0..3 {
            t_matrix[i][j] = 0.5 * (&sigma[i] * &phi_j).trace().re;
        }
    }
    Ok(PauliTransfer { t, t_matrix })
}

/// The fixed change of basis taking the computational basis to the Bell basis.
pub fn bell_transform() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(
        4,
        4,
        &[
            h, 0.0, 0.0, h, //
            0.0, h, h, 0.0, //
            0.0, h, -h, 0.0, //
            h, 0.0, 0.0, -h,
        ],
    )
    .unwrap()
}

/// `F C F*`; diagonal for unital channels.
pub fn to_bell_basis(c: &ChoiMatrix) -> Result<ComplexMatrix> {
    if c.output_dim != 2 {
        return Err(Error::InvalidDimension("Bell basis needs a qubit output".into()));
    }
    let f = bell_transform();
    Ok(&(&f * &c.m) * &f.adjoint())
}

/// `μ = (1+λ1+λ2+λ3, 1+λ1-λ2-λ3, 1-λ1+λ2-λ3, 1-λ1-λ2+λ3)`; the Choi matrix
/// of a unital channel has eigenvalues `μ/2`.
pub fn bell_weights(lambda: [f64; 3]) -> [f64; 4] {
    let [l1, l2, l3] = lambda;
    [
        1.0 + l1 + l2 + l3,
        1.0 + l1 - l2 - l3,
        1.0 - l1 + l2 - l3,
        1.0 - l1 - l2 + l3,
    ]
}

/// Complementary channel: `Φ̃(ρ) = Σ_ij tr(ρ K_j* K_i) E_ij`.
///
/// Row `i` of the `j`-th output operator is row `j` of `K_i`, so the
/// environment basis follows the Kraus order.
pub fn complement(k: &KrausSet) -> KrausSet {
    let d = k.len();
    let ops = (0..k.output_dim())
        .map(|j| ComplexMatrix::from_fn(d, 2, |i, c| k.operators[i][(j, c)]))
        .collect();
    KrausSet { operators: ops }
}

/// `Σ K_i ρ K_i*`.
pub fn apply(k: &KrausSet, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (2, 2) {
        return Err(Error::InvalidDimension(format!(
            "qubit channel input must be 2x2, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let d = k.output_dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for op in &k.operators {
        out = &out + &(&(op * rho) * &op.adjoint());
    }
    Ok(out)
}

/// `tr_input(C) = Φ(I)`.
pub fn phi_of_identity(c: &ChoiMatrix) -> ComplexMatrix {
    c.m.partial_trace(2, c.output_dim, Subsystem::First)
        .expect("shape checked on construction")
}

/// Number of Choi eigenvalues above `tol · tr(C)`.
pub fn choi_rank(c: &ChoiMatrix, tol: f64) -> Result<usize> {
    let eig = c.eigenvalues()?;
    if eig[0] < -tol * c.m.frobenius_norm().max(1.0) {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: eig[0],
        });
    }
    let cutoff = tol * c.m.trace().re;
    Ok(eig.iter().filter(|&&l| l > cutoff).count())
}

pub fn identity() -> KrausSet {
    KrausSet {
        operators: vec![ComplexMatrix::identity(2)],
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("probability p = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// `ρ ↦ (1-p) ρ + p tr(ρ) I/2`, Kraus weights `1 - 3p/4` on `I` and `p/4` on
/// each Pauli. Zero-weight operators are omitted.
pub fn depolarizing(p: f64) -> Result<KrausSet> {
    check_probability(p)?;
    let w0 = (1.0 - 0.75 * p).sqrt();
    let w = (0.25 * p).sqrt();
    let mut ops = vec![ComplexMatrix::identity(2).scale_real(w0)];
    if w > 0.0 {
        ops.extend(pauli::xyz().iter().map(|s| s.scale_real(w)));
    }
    KrausSet::new(ops)
}

/// `ρ ↦ tr(ρ) I/2`.
pub fn completely_depolarizing() -> KrausSet {
    depolarizing(1.0).expect("p = 1 is valid")
}

/// `ρ ↦ diag(ρ_00, ρ_11)`.
pub fn completely_dephasing() -> KrausSet {
    KrausSet {
        operators: vec![
            ComplexMatrix::diag_real(&[1.0, 0.0]),
            ComplexMatrix::diag_real(&[0.0, 1.0]),
        ],
    }
}

/// Dephasing channel in the computational basis with Kraus operators
/// `cos α · I` and `sin α · σz`.
///
/// This is `rank2(α, α)` conjugated by the Hadamard gate: `rank2(α, α)`
/// (Kraus `cos α · I`, `sin α · σx`) dephases in the `σx` eigenbasis, and
/// the rotation moves its preferred basis to the computational one.
/// `dephasing(π/4)` is the completely dephasing channel.
pub fn dephasing(alpha: f64) -> KrausSet {
    let (s, c) = alpha.sin_cos();
    KrausSet {
        operators: vec![
            ComplexMatrix::identity(2).scale_real(c),
            pauli::z().scale_real(s),
        ],
    }
}

/// `rank2(α, 0)`: Kraus `diag(cos α, 1)` and `sin α · |1⟩⟨0|`.
pub fn amplitude_damping(alpha: f64) -> KrausSet {
    rank2(alpha, 0.0)
}

pub fn rank2(alpha: f64, beta: f64) -> KrausSet {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    KrausSet {
        operators: vec![
            ComplexMatrix::diag_real(&[ca, cb]),
            ComplexMatrix::from_real(2, 2, &[0.0, sb, sa, 0.0]).unwrap(),
        ],
    }
}

/// Unital channel with contractions `λ`; requires `λ` in the tetrahedron
/// spanned by `(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)`.
pub fn unital(lambda: [f64; 3]) -> Result<BlochParams> {
    if lambda.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("non-finite contraction".into()));
    }
    let min_mu = bell_weights(lambda).into_iter().fold(f64::INFINITY, f64::min);
    if min_mu < -TETRAHEDRON_TOL {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: 0.5 * min_mu,
        });
    }
    Ok(BlochParams::unital(lambda))
}
