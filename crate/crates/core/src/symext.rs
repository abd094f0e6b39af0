//! Numerical oracle for two-qubit symmetric extendibility.
//!
//! A state `ρ_XY` on two qubits is symmetrically extendible when some
//! `ρ_XYY'` has `tr_Y' ρ_XYY' = tr_Y ρ_XYY' = ρ_XY`. Applied to the normalized
//! Choi state this decides antidegradability independently of the closed-form
//! inequality.
//!
//! The search is restricted to swap-invariant extensions. No generality is
//! lost: if `ρ` is an extension then so is `(ρ + SρS)/2`. Inside that slice the
//! two marginal conditions coincide, so the feasible set is
//! `PSD ∩ B` with `B = {ρ = SρS, tr_Y' ρ = target}` affine, and Dykstra's
//! algorithm alternates the PSD projection with the exact projection onto `B`.
//!
//! Every extension is supported on `V = (supp ρ ⊗ C²) ∩ S(supp ρ ⊗ C²)`, so
//! the cone step projects onto PSD operators living on `V`. For full-rank
//! targets `V` is the whole space. For rank-deficient targets this keeps a
//! strictly positive (relative to `V`) extension available, without which
//! alternating projections only converge sublinearly.
//!
//! Dykstra alone slows to a crawl when the target has a tiny (but nonzero)
//! eigenvalue, because every extension is then nearly singular. Once the
//! iterate is close, the oracle therefore tries to polish it into an exact
//! witness with affine-scaling steps (see [`polish_witness`]), which keep
//! positivity and swap symmetry by construction and rescale the search to
//! the small eigenvalues that slow Dykstra down.
//!
//! Feasibility comes with a witness that is re-checked outside the loop.
//! Infeasibility is reported in two ways. The first is a separating
//! hyperplane read off the iterate: `d = y − P_B(y)` is normal to `B`, and so
//! is the identity (everything in `B` has trace 1). With `η` the negative
//! part of the smallest eigenvalue of `d` on `V`, the operator `d + ηI` is
//! nonnegative on every extension, so `⟨d, x⟩ + η < 0` for `x ∈ B` rules
//! extensions out. The second is a heuristic fallback: the residual stops
//! shrinking while still far from zero.

use crate::channel::ChoiMatrix;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Subsystem, HERMITIAN_TOL};

pub const DEFAULT_ORACLE_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 20_000;
/// Cycles over which the residual must stall before declaring infeasibility.
pub const STALL_WINDOW: usize = 50;
/// Relative residual change over [`STALL_WINDOW`] that counts as a stall.
pub const STALL_REL_CHANGE: f64 = 1e-3;
/// Infeasibility also needs the stalled residual to be this many `tol` away.
pub const INFEASIBLE_RESIDUAL_FACTOR: f64 = 10.0;

const TRACE_TOL: f64 = 1e-10;
/// Target eigenvalues at or below this count as outside the support.
const SUPPORT_TOL: f64 = 1e-12;
/// Eigenvalues of `Π₁ + Π₂` above `2 − INTERSECTION_TOL` span `range Π₁ ∩ range Π₂`.
const INTERSECTION_TOL: f64 = 1e-8;
/// Polishing is attempted once the residual is below this.
const POLISH_START: f64 = 1e-2;
/// Cycles between polishing attempts.
const POLISH_INTERVAL: usize = 250;
const POLISH_MAX_STEPS: usize = 60;
const POLISH_TARGET: f64 = 1e-14;
/// Cycles between separating-hyperplane checks.
const CERTIFICATE_INTERVAL: usize = 10;
/// The hyperplane value must be below minus this to count.
const CERTIFICATE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionProblem {
    target: ComplexMatrix,
    tol: f64,
    max_iter: usize,
    polish: bool,
}

impl ExtensionProblem {
    pub fn new(target: ComplexMatrix, tol: f64, max_iter: usize) -> Result<Self> {
        if target.shape() != (4, 4) {
            return Err(Error::InvalidDimension(format!(
                "extension target must be 4x4, got {:?}",
                target.shape()
            )));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        let residual = target.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let min_eigenvalue = target.min_eigenvalue()?;
        if min_eigenvalue < -tol {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        let tr = target.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!("target trace must be 1, got {tr}")));
        }
        Ok(Self {
            target,
            tol,
            max_iter,
            polish: true,
        })
    }

    /// Enables or disables the polishing step (on by default). Without it the
    /// result is plain Dykstra.
    pub fn with_polish(mut self, polish: bool) -> Self {
        self.polish = polish;
        self
    }

    /// Problem for the normalized Choi state `c/2`.
    pub fn from_choi(c: &ChoiMatrix, tol: f64, max_iter: usize) -> Result<Self> {
        if c.output_dim() != 2 {
            return Err(Error::InvalidDimension("oracle needs a qubit-to-qubit channel".into()));
        }
        Self::new(c.normalized_state(), tol, max_iter)
    }

    pub fn target(&self) -> &ComplexMatrix {
        &self.target
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Feasible,
    Infeasible,
    Inconclusive,
}

impl OracleStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleStatus::Feasible => "feasible",
            OracleStatus::Infeasible => "infeasible",
            OracleStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub status: OracleStatus,
    /// 8x8 extension on `X ⊗ Y ⊗ Y'`, present only when feasible.
    pub witness: Option<ComplexMatrix>,
    /// Frobenius distance between the last PSD iterate and the affine set.
    pub residual: f64,
    pub iterations: usize,
}

/// Independent checks on a candidate extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessCheck {
    pub min_eigenvalue: f64,
    /// `‖tr_Y'(w) − target‖_F`
    pub marginal_residual_y_prime: f64,
    /// `‖tr_Y(w) − target‖_F`
    pub marginal_residual_y: f64,
    /// `‖w − SwS‖_F`
    pub swap_residual: f64,
    pub hermiticity_residual: f64,
}

impl WitnessCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.min_eigenvalue >= -tol
            && self.marginal_residual_y_prime <= tol
            && self.marginal_residual_y <= tol
            && self.swap_residual <= tol
            && self.hermiticity_residual <= tol
    }
}

/// Index of `|x y y'⟩` after exchanging `y` and `y'`.
fn swapped_index(i: usize) -> usize {
    let (x, y, yp) = (i >> 2, (i >> 1) & 1, i & 1);
    (x << 2) | (yp << 1) | y
}

fn require_8x8(m: &ComplexMatrix) -> Result<()> {
    if m.shape() != (8, 8) {
        return Err(Error::InvalidDimension(format!(
            "extension candidates are 8x8, got {:?}",
            m.shape()
        )));
    }
    Ok(())
}

/// Permutation matrix exchanging the `Y` and `Y'` factors of `X ⊗ Y ⊗ Y'`.
pub fn swap_operator() -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |r, c| {
        if swapped_index(c) == r {
            crate::matrix::ONE
        } else {
            crate::matrix::ZERO
        }
    })
}

/// `S m S` by index permutation.
fn conjugate_by_swap(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |r, c| m[(swapped_index(r), swapped_index(c))])
}

/// `tr_Y'` of an operator on `X ⊗ Y ⊗ Y'`.
pub fn marginal_xy(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_8x8(m)?;
    m.partial_trace(4, 2, Subsystem::Second)
}

/// `tr_Y` of an operator on `X ⊗ Y ⊗ Y'`, as an operator on `X ⊗ Y'`.
pub fn marginal_xy_prime(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_8x8(m)?;
    conjugate_by_swap(m).partial_trace(4, 2, Subsystem::Second)
}

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped to 0).
pub fn project_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(m.hermitian_eigen()?.reconstruct_with(|l| l.max(0.0)))
}

/// Projection onto `{ρ : tr_Y'(ρ) = target}`.
pub fn project_marginal(m: &ComplexMatrix, target: &ComplexMatrix) -> Result<ComplexMatrix> {
    if target.shape() != (4, 4) {
        return Err(Error::InvalidDimension("marginal target must be 4x4".into()));
    }
    let correction = target - &marginal_xy(m)?;
    Ok(m + &correction.kron(&ComplexMatrix::identity(2)).scale_real(0.5))
}

/// `(m + SmS)/2`.
pub fn symmetrize_swap(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_8x8(m)?;
    Ok((m + &conjugate_by_swap(m)).scale_real(0.5))
}

/// Projection onto `{ρ = SρS, tr_Y'(ρ) = target}`.
///
/// After symmetrizing, the marginal map restricted to swap-invariant
/// matrices has adjoint `X ↦ (X⊗I + S(X⊗I)S)/2`. Solving the normal
/// equation for the correction `R = target − tr_Y'(ρ)` gives
/// `X = R − (tr_Y R) ⊗ I/4`.
pub fn project_symmetric_marginal(
    m: &ComplexMatrix,
    target: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    if target.shape() != (4, 4) {
        return Err(Error::InvalidDimension("marginal target must be 4x4".into()));
    }
    let sym = symmetrize_swap(m)?;
    let r = target - &marginal_xy(&sym)?;
    let id2 = ComplexMatrix::identity(2);
    let r_x = r.partial_trace(2, 2, Subsystem::Second)?;
    let x = &r - &r_x.kron(&id2).scale_real(0.25);
    let lifted = x.kron(&id2);
    let delta = (&lifted + &conjugate_by_swap(&lifted)).scale_real(0.5);
    Ok(&sym + &delta)
}

pub fn verify_witness(w: &ComplexMatrix, target: &ComplexMatrix) -> Result<WitnessCheck> {
    require_8x8(w)?;
    let herm = w.hermiticity_residual();
    let h = (w + &w.adjoint()).scale_real(0.5);
    Ok(WitnessCheck {
        min_eigenvalue: h.min_eigenvalue()?,
        marginal_residual_y_prime: marginal_xy(w)?.distance(target),
        marginal_residual_y: marginal_xy_prime(w)?.distance(target),
        swap_residual: w.distance(&conjugate_by_swap(w)),
        hermiticity_residual: herm,
    })
}

/// Orthonormal basis (as columns) of the subspace every symmetric extension of
/// `target` is supported on, or `None` when that subspace is `{0}` (then no
/// extension exists).
pub fn extension_support(target: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
    let eig = target.hermitian_eigen()?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
    let support = eig.reconstruct_with(|l| if l > SUPPORT_TOL * scale { 1.0 } else { 0.0 });
    let pi1 = support.kron(&ComplexMatrix::identity(2));
    let pi2 = conjugate_by_swap(&pi1);
    let both = (&pi1 + &pi2).hermitian_eigen()?;
    let cols: Vec<usize> = (0..8)
        .filter(|&i| both.eigenvalues[i] > 2.0 - INTERSECTION_TOL)
        .collect();
    if cols.is_empty() {
        return Ok(None);
    }
    Ok(Some(ComplexMatrix::from_fn(8, cols.len(), |r, c| {
        both.eigenvectors[(r, cols[c])]
    })))
}

/// Nearest PSD operator supported on the span of the orthonormal columns of
/// `basis`.
pub fn project_psd_on(m: &ComplexMatrix, basis: &ComplexMatrix) -> Result<ComplexMatrix> {
    if basis.cols() == basis.rows() {
        return project_psd(m);
    }
    let reduced = &(&basis.adjoint() * m) * basis;
    let reduced = (&reduced + &reduced.adjoint()).scale_real(0.5);
    let z = project_psd(&reduced)?;
    Ok(&(basis * &z) * &basis.adjoint())
}

/// Orthonormal basis of `C² ⊗ C² ⊗ C²` adapted to the swap: the first six
/// columns span `X ⊗ Sym(Y ⊗ Y')`, the last two `X ⊗ Anti(Y ⊗ Y')`.
fn swap_adapted_basis() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // (y y') amplitudes for |00⟩, |01⟩, |10⟩, |11⟩
    let yy: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
    ];
    let mut cols = Vec::with_capacity(8);
    for (sym, amp) in yy.iter().enumerate() {
        for x in 0..2 {
            cols.push((sym, x, *amp));
        }
    }
    // keep the three symmetric vectors first
    cols.sort_by_key(|&(sym, x, _)| (sym == 3, sym, x));
    ComplexMatrix::from_fn(8, 8, |r, c| {
        let (_, x, amp) = cols[c];
        if r >> 2 == x {
            crate::matrix::C64::new(amp[r & 3], 0.0)
        } else {
            crate::matrix::ZERO
        }
    })
}

/// Orthonormal basis (Frobenius) of the Hermitian operators commuting with
/// the swap: Hermitian matrices block-diagonal in [`swap_adapted_basis`].
fn swap_commuting_basis() -> Vec<ComplexMatrix> {
    use crate::matrix::{C64, I, ONE};
    let v = swap_adapted_basis();
    let v_adj = v.adjoint();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(40);
    for (lo, hi) in [(0, 6), (6, 8)] {
        for a in lo..hi {
            for b in a..hi {
                let units: Vec<(C64, C64)> = if a == b {
                    vec![(ONE, ONE)]
                } else {
                    vec![(ONE.scale(h), ONE.scale(h)), (I.scale(h), -I.scale(h))]
                };
                for (ab, ba) in units {
                    let mut e = ComplexMatrix::zeros(8, 8);
                    e[(a, b)] += ab;
                    e[(b, a)] += ba;
                    out.push(&(&v * &e) * &v_adj);
                }
            }
        }
    }
    out
}

/// Real coordinates of a Hermitian 4x4 matrix.
fn hermitian_coords(m: &ComplexMatrix) -> [f64; 16] {
    let mut v = [0.0; 16];
    let mut k = 0;
    for i in 0..4 {
        v[k] = m[(i, i)].re;
        k += 1;
        for j in (i + 1)..4 {
            v[k] = m[(i, j)].re;
            v[k + 1] = m[(i, j)].im;
            k += 2;
        }
    }
    v
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Tries to turn an approximate extension into one whose marginal matches
/// `target` to rounding error, by affine scaling: `ρ ← ρ^½ (I + tΞ) ρ^½`
/// with `Ξ` swap-commuting and solving the linearized marginal equations
/// with minimum norm. Every iterate is PSD and swap-invariant, and the
/// marginal error shrinks by the factor `1 − t`. Stops when the error stops
/// shrinking, so callers must verify the result; `None` only when `target`
/// admits no extension support at all.
pub fn polish_witness(
    approx: &ComplexMatrix,
    target: &ComplexMatrix,
) -> Result<Option<ComplexMatrix>> {
    require_8x8(approx)?;
    let Some(support) = extension_support(target)? else {
        return Ok(None);
    };
    let pi_v = &support * &support.adjoint();
    let start = project_psd_on(&symmetrize_swap(approx)?, &support)?;
    let shift = (&marginal_xy(&start)? - target).frobenius_norm().max(1e-12);
    let mut rho = &start + &pi_v.scale_real(shift);
    let basis = swap_commuting_basis();

    for _ in 0..POLISH_MAX_STEPS {
        let f = hermitian_coords(&(&marginal_xy(&rho)? - target));
        if norm(&f) <= POLISH_TARGET {
            break;
        }
        let root = rho.hermitian_eigen()?.reconstruct_with(|l| l.max(0.0).sqrt());
        let jac: Vec<[f64; 16]> = basis
            .iter()
            .map(|e| Ok(hermitian_coords(&marginal_xy(&(&(&root * e) * &root))?)))
            .collect::<Result<_>>()?;
        // minimum-norm solution of J ξ = −f
        let gram = ComplexMatrix::from_fn(16, 16, |a, b| {
            crate::matrix::C64::new(jac.iter().map(|c| c[a] * c[b]).sum(), 0.0)
        });
        let eig = gram.hermitian_eigen()?;
        let cutoff = 1e-15 * eig.eigenvalues.last().copied().unwrap_or(0.0);
        let pinv = eig.reconstruct_with(|l| if l > cutoff { 1.0 / l } else { 0.0 });
        let lambda: Vec<f64> = (0..16)
            .map(|a| (0..16).map(|b| pinv[(a, b)].re * f[b]).sum())
            .collect();
        let mut xi = ComplexMatrix::zeros(8, 8);
        for (c, e) in jac.iter().zip(&basis) {
            let coeff = -c.iter().zip(&lambda).map(|(x, y)| x * y).sum::<f64>();
            xi = &xi + &e.scale_real(coeff);
        }
        let lowest = xi.min_eigenvalue()?;
        let t = if lowest < -0.5 { 0.5 / -lowest } else { 1.0 };
        let step = &ComplexMatrix::identity(8) + &xi.scale_real(t);
        let next = &(&root * &step) * &root;
        let next = (&next + &next.adjoint()).scale_real(0.5);
        let f_next = hermitian_coords(&(&marginal_xy(&next)? - target));
        if norm(&f_next) >= norm(&f) {
            break;
        }
        rho = next;
    }
    Ok(Some(rho))
}

/// Polishes `approx` and returns it only if it passes [`verify_witness`].
fn try_polish(approx: &ComplexMatrix, p: &ExtensionProblem) -> Result<Option<ComplexMatrix>> {
    match polish_witness(approx, &p.target)? {
        Some(w) if verify_witness(&w, &p.target)?.passes(p.tol) => Ok(Some(w)),
        _ => Ok(None),
    }
}

/// Value of the separating hyperplane built from a PSD iterate `y` (supported
/// on the span of `basis`) and its affine projection `x`. Negative means no
/// extension exists.
pub fn separation_value(
    y: &ComplexMatrix,
    x: &ComplexMatrix,
    basis: &ComplexMatrix,
) -> Result<f64> {
    let d = y - x;
    let d = (&d + &d.adjoint()).scale_real(0.5);
    let on_support = if basis.cols() == basis.rows() {
        d.clone()
    } else {
        &(&basis.adjoint() * &d) * basis
    };
    let eta = (-on_support.min_eigenvalue()?).max(0.0);
    Ok(d.inner(x).re + eta)
}

/// Per-cycle diagnostics, recorded when requested.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DykstraTrace {
    /// Distance between each PSD iterate and its affine projection.
    pub residuals: Vec<f64>,
    /// `‖x_k − x_{k−1}‖_F` for the affine iterates.
    pub displacements: Vec<f64>,
}

pub fn dykstra_feasibility(p: &ExtensionProblem) -> Result<OracleResult> {
    run(p, None)
}

/// Like [`dykstra_feasibility`] but also returns the per-cycle history.
pub fn dykstra_feasibility_traced(p: &ExtensionProblem) -> Result<(OracleResult, DykstraTrace)> {
    let mut trace = DykstraTrace::default();
    let r = run(p, Some(&mut trace))?;
    Ok((r, trace))
}

fn run(p: &ExtensionProblem, mut trace: Option<&mut DykstraTrace>) -> Result<OracleResult> {
    let target = &p.target;
    let Some(basis) = extension_support(target)? else {
        // only the zero operator is left, and it has the wrong trace
        return Ok(OracleResult {
            status: OracleStatus::Infeasible,
            witness: None,
            residual: project_symmetric_marginal(&ComplexMatrix::zeros(8, 8), target)?
                .frobenius_norm(),
            iterations: 0,
        });
    };
    let mut x = target.kron(&ComplexMatrix::identity(2)).scale_real(0.5);
    // Dykstra correction for the cone; the affine set needs none
    let mut corr = ComplexMatrix::zeros(8, 8);
    let mut history: Vec<f64> = Vec::with_capacity(p.max_iter.min(4096));
    let mut residual = f64::INFINITY;

    for k in 1..=p.max_iter {
        let shifted = &x + &corr;
        let y = project_psd_on(&shifted, &basis)?;
        corr = &shifted - &y;
        let x_next = project_symmetric_marginal(&y, target)?;
        residual = y.distance(&x_next);
        if let Some(t) = trace.as_deref_mut() {
            t.residuals.push(residual);
            t.displacements.push(x_next.distance(&x));
        }
        x = x_next;

        if residual <= p.tol && verify_witness(&y, target)?.passes(p.tol) {
            return Ok(OracleResult {
                status: OracleStatus::Feasible,
                witness: Some(y),
                residual,
                iterations: k,
            });
        }

        if k % CERTIFICATE_INTERVAL == 0
            && residual > 0.0
            && separation_value(&y, &x, &basis)? < -CERTIFICATE_THRESHOLD
        {
            return Ok(OracleResult {
                status: OracleStatus::Infeasible,
                witness: None,
                residual,
                iterations: k,
            });
        }

        let polish_due = p.polish && residual <= POLISH_START && k % POLISH_INTERVAL == 0;
        if polish_due {
            if let Some(w) = try_polish(&y, p)? {
                return Ok(OracleResult {
                    status: OracleStatus::Feasible,
                    witness: Some(w),
                    residual,
                    iterations: k,
                });
            }
        }

        history.push(residual);
        if k > STALL_WINDOW && residual >= INFEASIBLE_RESIDUAL_FACTOR * p.tol {
            let before = history[k - 1 - STALL_WINDOW];
            if (before - residual).abs() <= STALL_REL_CHANGE * residual {
                if p.polish && residual <= POLISH_START {
                    if let Some(w) = try_polish(&y, p)? {
                        return Ok(OracleResult {
                            status: OracleStatus::Feasible,
                            witness: Some(w),
                            residual,
                            iterations: k,
                        });
                    }
                }
                return Ok(OracleResult {
                    status: OracleStatus::Infeasible,
                    witness: None,
                    residual,
                    iterations: k,
                });
            }
        }
    }
    Ok(OracleResult {
        status: OracleStatus::Inconclusive,
        witness: None,
        residual,
        iterations: p.max_iter,
    })
}

/// Runs the oracle on the normalized Choi state with the default iteration cap.
pub fn oracle_extendible(c: &ChoiMatrix, tol: f64) -> Result<OracleResult> {
    oracle_extendible_with(c, tol, DEFAULT_MAX_ITER)
}

pub fn oracle_extendible_with(c: &ChoiMatrix, tol: f64, max_iter: usize) -> Result<OracleResult> {
    dykstra_feasibility(&ExtensionProblem::from_choi(c, tol, max_iter)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{completely_depolarizing, depolarizing, identity, rank2};
    use crate::random;
    use rand::SeedableRng;
    use std::f64::consts::FRAC_PI_2;

    const TOL: f64 = DEFAULT_ORACLE_TOL;

    fn rng() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(31)
    }

    fn random_target<R: rand::Rng>(rng: &mut R) -> ComplexMatrix {
        let g = random::gaussian_matrix(rng, 4, 4);
        let m = &g * &g.adjoint();
        m.scale_real(1.0 / m.trace().re)
    }

    #[test]
    fn swap_is_an_involution() {
        let s = swap_operator();
        assert_eq!(&s * &s, ComplexMatrix::identity(8));
        let mut rng = rng();
        let m = random::random_hermitian(&mut rng, 8);
        assert!((&(&s * &m) * &s).distance(&conjugate_by_swap(&m)) < 1e-14);
    }

    #[test]
    fn psd_projection_examples() {
        let mut rng = rng();
        let g = random::gaussian_matrix(&mut rng, 8, 8);
        let psd = &g * &g.adjoint();
        assert!(project_psd(&psd).unwrap().distance(&psd) < 1e-12);

        let mut d = vec![0.0; 8];
        d[0] = 1.0;
        d[1] = -1.0;
        let mut expected = vec![0.0; 8];
        expected[0] = 1.0;
        assert!(
            project_psd(&ComplexMatrix::diag_real(&d))
                .unwrap()
                .distance(&ComplexMatrix::diag_real(&expected))
                < 1e-15
        );

        for _ in 0..50 {
            let m = random::random_hermitian(&mut rng, 8);
            let neg: f64 = m
                .eigenvalues_hermitian()
                .unwrap()
                .iter()
                .map(|l| l.min(0.0).powi(2))
                .sum();
            assert!((m.distance(&project_psd(&m).unwrap()) - neg.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn marginal_projection_examples() {
        let mut rng = rng();
        let target = random_target(&mut rng);
        let id2 = ComplexMatrix::identity(2);

        let feasible = target.kron(&id2).scale_real(0.5);
        assert!(project_marginal(&feasible, &target).unwrap().distance(&feasible) < 1e-15);

        let sigma = random_target(&mut rng);
        let out = project_marginal(&sigma.kron(&id2).scale_real(0.5), &target).unwrap();
        assert!(out.distance(&feasible) < 1e-14);

        for _ in 0..20 {
            let m = random::random_hermitian(&mut rng, 8);
            let pm = project_marginal(&m, &target).unwrap();
            assert!(marginal_xy(&pm).unwrap().distance(&target) < 1e-13);
            assert!(project_marginal(&pm, &target).unwrap().distance(&pm) < 1e-13);
            let a = project_marginal(&random::random_hermitian(&mut rng, 8), &target).unwrap();
            let b = project_marginal(&random::random_hermitian(&mut rng, 8), &target).unwrap();
            let ip = (&m - &pm).inner(&(&a - &b));
            assert!(ip.norm() < 1e-12, "{ip}");
        }
    }

    #[test]
    fn symmetrize_examples() {
        let mut rng = rng();
        let m = random::random_hermitian(&mut rng, 8);
        let s = symmetrize_swap(&m).unwrap();
        assert!(symmetrize_swap(&s).unwrap().distance(&s) < 1e-15);

        let rho = random_target(&mut rng);
        let sigma = random::random_state(&mut rng);
        let avg = symmetrize_swap(&rho.kron(&sigma)).unwrap();
        assert!(marginal_xy(&avg).unwrap().distance(&marginal_xy_prime(&avg).unwrap()) < 1e-14);
    }

    #[test]
    fn symmetric_marginal_projection_is_orthogonal() {
        let mut rng = rng();
        let target = random_target(&mut rng);
        for _ in 0..20 {
            let m = random::random_hermitian(&mut rng, 8);
            let pm = project_symmetric_marginal(&m, &target).unwrap();
            assert!(marginal_xy(&pm).unwrap().distance(&target) < 1e-13);
            assert!(pm.distance(&conjugate_by_swap(&pm)) < 1e-13);
            assert!(project_symmetric_marginal(&pm, &target).unwrap().distance(&pm) < 1e-13);
            let a = project_symmetric_marginal(&random::random_hermitian(&mut rng, 8), &target)
                .unwrap();
            let b = project_symmetric_marginal(&random::random_hermitian(&mut rng, 8), &target)
                .unwrap();
            assert!((&m - &pm).inner(&(&a - &b)).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_examples() {
        let r = oracle_extendible(&completely_depolarizing().choi(), TOL).unwrap();
        assert_eq!(r.status, OracleStatus::Feasible);
        let w = r.witness.unwrap();
        assert!(w.distance(&ComplexMatrix::identity(8).scale_real(0.125)) < 1e-6);

        let r = oracle_extendible(&identity().choi(), TOL).unwrap();
        assert_eq!(r.status, OracleStatus::Infeasible);
        assert!(r.witness.is_none());

        for (p, want) in [
            (0.5, OracleStatus::Feasible),
            (0.6, OracleStatus::Feasible),
            (0.1, OracleStatus::Infeasible),
        ] {
            let r = oracle_extendible(&depolarizing(p).unwrap().choi(), TOL).unwrap();
            assert_eq!(r.status, want, "p = {p}: {r:?}");
        }

        let r = oracle_extendible(&rank2(FRAC_PI_2, 0.0).choi(), TOL).unwrap();
        assert_eq!(r.status, OracleStatus::Feasible);
    }

    #[test]
    fn feasible_witnesses_verify() {
        let target = depolarizing(0.7).unwrap().choi().normalized_state();
        let r = dykstra_feasibility(&ExtensionProblem::new(target.clone(), TOL, 20_000).unwrap())
            .unwrap();
        let check = verify_witness(r.witness.as_ref().unwrap(), &target).unwrap();
        assert!(check.passes(TOL), "{check:?}");
    }

    #[test]
    fn problem_validation() {
        let good = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(ExtensionProblem::new(good.clone(), TOL, 10).is_ok());
        assert!(matches!(
            ExtensionProblem::new(ComplexMatrix::identity(4), TOL, 10),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            ExtensionProblem::new(ComplexMatrix::identity(2), TOL, 10),
            Err(Error::InvalidDimension(_))
        ));
        let neg = ComplexMatrix::diag_real(&[0.75, 0.75, -0.25, -0.25]);
        assert!(matches!(
            ExtensionProblem::new(neg, TOL, 10),
            Err(Error::NotPsd { .. })
        ));
        assert!(ExtensionProblem::new(good, TOL, 0).is_err());
    }

    #[test]
    fn displacement_settles_after_burn_in() {
        let target = depolarizing(0.8).unwrap().choi().normalized_state();
        let p = ExtensionProblem::new(target, 1e-12, 3000).unwrap().with_polish(false);
        let (_, trace) = dykstra_feasibility_traced(&p).unwrap();
        let d = &trace.displacements;
        for w in d.windows(2).skip(500) {
            assert!(w[1] <= w[0] * (1.0 + 1e-6) + 1e-15, "{} -> {}", w[0], w[1]);
        }
    }
}
