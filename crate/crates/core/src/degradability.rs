//! Degradability, antidegradability and entanglement-breaking tests.
//!
//! The central test: a qubit channel with PSD Choi matrix `C` is
//! antidegradable iff
//!
//! ```text
//! tr(Φ(I)²) ≥ tr(C²) − 4·√det(C)
//! ```
//!
//! which is the two-qubit symmetric-extension criterion applied to the Choi
//! state `C/2` (multiply the normalized inequality through by 4). Every
//! verdict carries the raw margin `LHS − RHS` so callers can re-threshold.

use serde::{Deserialize, Serialize};

use crate::channel::{
    self, bell_weights, choi_from_bloch, choi_rank, complement, kraus_from_choi, phi_of_identity,
    BlochParams, Channel, ChoiMatrix, KrausSet, Rank2Params,
};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Subsystem};

/// Default absolute tolerance on margins (and on Choi eigenvalues).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Margin reported by [`degradable_test`] for Choi rank 1 (unitary channels).
/// It is the limit of the rank-2 margin `2·cos 2α·cos 2β` at `α = β = 0`.
pub const UNITARY_DEGRADABLE_MARGIN: f64 = 2.0;

const BISECTION_WIDTH: f64 = 1e-12;
const BISECTION_MAX_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictState {
    Yes,
    No,
    Boundary,
}

impl VerdictState {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictState::Yes => "yes",
            VerdictState::No => "no",
            VerdictState::Boundary => "boundary",
        }
    }
}

/// Three-valued outcome of an inequality test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub state: VerdictState,
    pub margin: f64,
}

impl Verdict {
    /// `Boundary` iff `|margin| ≤ tol`.
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        let state = if margin > tol {
            VerdictState::Yes
        } else if margin < -tol {
            VerdictState::No
        } else {
            VerdictState::Boundary
        };
        Self { state, margin }
    }

    pub fn holds(&self) -> bool {
        matches!(self.state, VerdictState::Yes | VerdictState::Boundary)
    }

    /// Same state, where `Boundary` is compatible with either side.
    pub fn compatible_with(&self, other: &Verdict) -> bool {
        use VerdictState::*;
        !matches!((self.state, other.state), (Yes, No) | (No, Yes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub antidegradable: Verdict,
    pub degradable: Verdict,
    pub entanglement_breaking: Verdict,
    pub unital: bool,
    /// `None` when the Kraus set does not have exactly two operators.
    pub self_complementary: Option<bool>,
    pub choi_rank: usize,
    pub cp: bool,
}

impl ClassificationReport {
    /// Checks the structural implications every report must satisfy.
    pub fn consistency_violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.entanglement_breaking.state == VerdictState::Yes && !self.antidegradable.holds() {
            v.push("entanglement breaking but not antidegradable");
        }
        if self.choi_rank >= 3 && self.degradable.state != VerdictState::No {
            v.push("Choi rank >= 3 but not reported non-degradable");
        }
        if self.choi_rank == 1 && self.degradable.state != VerdictState::Yes {
            v.push("Choi rank 1 but not reported degradable");
        }
        v
    }
}

fn require_qubit_output(c: &ChoiMatrix) -> Result<()> {
    if c.output_dim() != 2 {
        return Err(Error::InvalidDimension(format!(
            "two-qubit criterion needs a qubit output, got dimension {}",
            c.output_dim()
        )));
    }
    Ok(())
}

/// Eigenvalues of a Choi matrix that must be PSD within `tol`.
fn psd_spectrum(c: &ChoiMatrix, tol: f64) -> Result<Vec<f64>> {
    let eig = c.eigenvalues()?;
    if eig[0] < -tol * c.matrix().frobenius_norm().max(1.0) {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: eig[0],
        });
    }
    Ok(eig)
}

/// Product of eigenvalues with `|λ| ≤ tol` (and the negatives admitted by the
/// PSD check) set to zero.
fn clamped_det(eig: &[f64], tol: f64) -> f64 {
    eig.iter()
        .map(|&l| if l <= tol { 0.0 } else { l })
        .product()
}

/// Margin `tr(Φ(I)²) − tr(C²) + 4·√det(C)`; antidegradable iff `≥ 0`.
pub fn antidegradable_test(c: &ChoiMatrix, tol: f64) -> Result<Verdict> {
    require_qubit_output(c)?;
    let eig = psd_spectrum(c, tol)?;
    let det = clamped_det(&eig, tol);
    let tr_c2 = c.matrix().frobenius_norm().powi(2);
    let tr_out2 = phi_of_identity(c).frobenius_norm().powi(2);
    Ok(Verdict::from_margin(tr_out2 - tr_c2 + 4.0 * det.sqrt(), tol))
}

/// Degradability by Choi rank: rank 1 is degradable, rank ≥ 3 is not, and
/// rank 2 is decided by testing the complement (a qubit-to-qubit channel)
/// for antidegradability.
///
/// For rank ≥ 3 the margin is minus the third-largest Choi eigenvalue, i.e.
/// how far the channel is from having a two-dimensional environment.
pub fn degradable_test(k: &KrausSet, tol: f64) -> Result<Verdict> {
    if k.output_dim() != 2 {
        return Err(Error::InvalidDimension("degradability needs a qubit-to-qubit channel".into()));
    }
    let c = k.choi();
    let rank = choi_rank(&c, tol)?;
    match rank {
        0 => Err(Error::NumericalFailure("Choi matrix has rank 0".into())),
        1 => Ok(Verdict::from_margin(UNITARY_DEGRADABLE_MARGIN, tol)),
        2 => {
            // minimal Kraus form so the environment is exactly two-dimensional
            let minimal = kraus_from_choi(&c, tol)?;
            debug_assert_eq!(minimal.len(), 2);
            antidegradable_test(&complement(&minimal).choi(), tol)
        }
        _ => {
            let eig = c.eigenvalues()?;
            let third = eig[eig.len() - 3];
            Ok(Verdict::from_margin(-third, tol))
        }
    }
}

/// Closed form for the two-Kraus family: margin `−cos 2α · cos 2β`.
pub fn rank2_antidegradable(p: Rank2Params, tol: f64) -> Verdict {
    Verdict::from_margin(-(2.0 * p.alpha).cos() * (2.0 * p.beta).cos(), tol)
}

/// Closed form for the two-Kraus family: margin `cos 2α · cos 2β`.
pub fn rank2_degradable(p: Rank2Params, tol: f64) -> Verdict {
    Verdict::from_margin((2.0 * p.alpha).cos() * (2.0 * p.beta).cos(), tol)
}

/// `cos²(β − α) − sin²(α + β)`, which equals `cos 2α · cos 2β`.
pub fn rank2_product_form(p: Rank2Params) -> f64 {
    (p.beta - p.alpha).cos().powi(2) - (p.alpha + p.beta).sin().powi(2)
}

/// Rank-3 closed form: the determinant vanishes and the criterion reduces to
/// `1 + ‖t‖² − ‖λ‖² ≥ 0`.
pub fn rank3_antidegradable(b: &BlochParams, tol: f64) -> Result<Verdict> {
    let rank = choi_rank(&choi_from_bloch(b), tol)?;
    if rank != 3 {
        return Err(Error::WrongRank { expected: 3, found: rank });
    }
    Ok(Verdict::from_margin(1.0 + b.t_norm_sqr() - b.lambda_norm_sqr(), tol))
}

/// Both sides of the squared full-rank condition, written in `(t, λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank4Terms {
    /// `16·det(C)` expanded as a polynomial in `t` and `λ`.
    pub lhs: f64,
    /// `(‖λ‖² − ‖t‖² − 1)²`.
    pub rhs: f64,
    /// `‖λ‖² − ‖t‖² − 1`, the quantity that was squared.
    pub gap: f64,
}

impl Rank4Terms {
    pub fn new(b: &BlochParams) -> Self {
        let [l1, l2, l3] = b.lambda;
        let l = [l1 * l1, l2 * l2, l3 * l3];
        let t = [b.t[0] * b.t[0], b.t[1] * b.t[1], b.t[2] * b.t[2]];
        let mut lhs = 1.0 + 8.0 * l1 * l2 * l3;
        for i in 0..3 {
            lhs += l[i] * l[i] + t[i] * t[i] - 2.0 * l[i] - 2.0 * t[i] - 2.0 * l[i] * t[i];
            for j in (i + 1)..3 {
                lhs += 2.0 * (l[i] * t[j] + l[j] * t[i] + t[i] * t[j] - l[i] * l[j]);
            }
        }
        let gap = l.iter().sum::<f64>() - t.iter().sum::<f64>() - 1.0;
        Self {
            lhs,
            rhs: gap * gap,
            gap,
        }
    }
}

/// Full-rank closed form. The unsquared criterion is `√(16 det C) ≥ gap`; it
/// holds outright when `gap ≤ 0` and otherwise iff `LHS ≥ RHS`. The reported
/// margin is rescaled to `√LHS − gap` so it is in the same units as
/// [`antidegradable_test`].
pub fn rank4_antidegradable(b: &BlochParams, tol: f64) -> Result<Verdict> {
    let c = choi_from_bloch(b);
    psd_spectrum(&c, tol)?;
    let terms = Rank4Terms::new(b);
    let lhs = terms.lhs.max(0.0);
    let root = lhs.sqrt();
    let margin = if terms.gap <= 0.0 {
        root - terms.gap
    } else {
        (lhs - terms.rhs) / (root + terms.gap)
    };
    Ok(Verdict::from_margin(margin, tol))
}

/// Unital closed form in the Bell eigenvalues `ν = μ/2` of the Choi matrix:
/// margin `2 − Σν² + 4·(Πν)^½`.
pub fn unital_antidegradable(lambda: [f64; 3], tol: f64) -> Result<Verdict> {
    channel::unital(lambda)?;
    let nu = bell_weights(lambda).map(|m| 0.5 * m);
    let sum_sq: f64 = nu.iter().map(|x| x * x).sum();
    let prod = clamped_det(&nu, tol);
    Ok(Verdict::from_margin(2.0 - sum_sq + 4.0 * prod.sqrt(), tol))
}

/// PPT test on the Choi matrix; at 2x2 this is exactly separability.
/// Margin is the smallest eigenvalue of the partial transpose.
pub fn entanglement_breaking_test(c: &ChoiMatrix, tol: f64) -> Result<Verdict> {
    require_qubit_output(c)?;
    psd_spectrum(c, tol)?;
    let pt = c.matrix().partial_transpose(2, 2, Subsystem::Second)?;
    Ok(Verdict::from_margin(pt.min_eigenvalue()?, tol))
}

/// Matrix-exact self-complementarity in the environment basis fixed by the
/// Kraus order: `‖C_Φ − C_Φ̃‖_F ≤ tol`. Only defined for two Kraus operators.
pub fn self_complementary_test(k: &KrausSet, tol: f64) -> Result<bool> {
    if k.len() != 2 || k.output_dim() != 2 {
        return Err(Error::NotApplicable(format!(
            "self-complementarity needs a two-dimensional environment, got {}",
            k.len()
        )));
    }
    Ok(k.choi().distance(&complement(k).choi()) <= tol)
}

/// Both degradable and antidegradable: `|cos 2α · cos 2β| ≤ tol`.
pub fn deg_and_antideg_rank2(p: Rank2Params, tol: f64) -> bool {
    rank2_antidegradable(p, tol).state == VerdictState::Boundary
        && rank2_degradable(p, tol).state == VerdictState::Boundary
}

/// Antidegradability margin of the depolarizing channel with parameter `p`.
pub fn depolarizing_antidegradable_margin(p: f64, tol: f64) -> Result<f64> {
    Ok(antidegradable_test(&channel::depolarizing(p)?.choi(), tol)?.margin)
}

/// Entanglement-breaking margin of the depolarizing channel with parameter `p`.
pub fn depolarizing_eb_margin(p: f64, tol: f64) -> Result<f64> {
    Ok(entanglement_breaking_test(&channel::depolarizing(p)?.choi(), tol)?.margin)
}

fn bisect_sign_change(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NumericalFailure(format!(
            "bisection needs a sign change, got f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    for _ in 0..BISECTION_MAX_STEPS {
        if hi - lo <= BISECTION_WIDTH {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NumericalFailure("bisection did not converge".into()))
}

/// The depolarizing parameters where the channel becomes antidegradable and
/// where it becomes entanglement breaking, found by bisecting the margins of
/// the general tests over `p ∈ [0, 1]`.
pub fn depolarizing_thresholds() -> Result<(f64, f64)> {
    // A tighter tolerance keeps clamping away from the crossing.
    let tol = 1e-13;
    let anti = bisect_sign_change(|p| depolarizing_antidegradable_margin(p, tol), 0.0, 1.0)?;
    let eb = bisect_sign_change(|p| depolarizing_eb_margin(p, tol), 0.0, 1.0)?;
    Ok((anti, eb))
}

/// Runs every test on a channel.
///
/// Kraus input is used as given for the self-complementarity check; other
/// representations go through [`kraus_from_choi`], whose environment basis
/// is the Choi eigenbasis.
pub fn classify(channel: &Channel, tol: f64) -> Result<ClassificationReport> {
    let c = channel.choi();
    require_qubit_output(&c)?;
    let min_eigenvalue = c.min_eigenvalue()?;
    let tp_residual = c.tp_residual();
    let cp = c.is_cp(tol)?;
    if !cp || tp_residual > channel::TP_TOL {
        return Err(Error::NotAChannel {
            min_eigenvalue,
            tp_residual,
        });
    }
    let kraus = channel.kraus(tol)?;
    let self_complementary = match self_complementary_test(&kraus, tol) {
        Ok(b) => Some(b),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    let unital = phi_of_identity(&c).distance(&ComplexMatrix::identity(2)) <= tol;
    Ok(ClassificationReport {
        antidegradable: antidegradable_test(&c, tol)?,
        degradable: degradable_test(&kraus, tol)?,
        entanglement_breaking: entanglement_breaking_test(&c, tol)?,
        unital,
        self_complementary,
        choi_rank: choi_rank(&c, tol)?,
        cp,
    })
}
