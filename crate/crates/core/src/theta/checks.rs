//! Numerical checks of the classical identities satisfied by theta series.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{theta, theta_jet, ThetaFunction};
use crate::characteristics::Characteristic;
use crate::error::{Error, Result};
use crate::siegel::{CVector, PeriodMatrix};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Smallest admissible `|θ₀|` at the shifted point.
pub const SHIFT_DENOMINATOR_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityCheck {
    pub residual: f64,
    /// `2·truncation_bound + 1e−10`.
    pub tolerance: f64,
}

impl ParityCheck {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// `|θ(Ω, −z) − σθ(Ω, z)|` with `σ = ±1` the parity sign of `δ`.
pub fn check_parity(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector, target_err: f64) -> Result<ParityCheck> {
    let f = ThetaFunction::new(delta, omega)?;
    let plus = f.eval(z, target_err)?;
    let minus = f.eval(&(-z), target_err)?;
    let sigma = delta.parity().sign();
    Ok(ParityCheck {
        residual: (minus.value - plus.value * sigma).norm(),
        tolerance: plus.truncation_bound + minus.truncation_bound + 1e-10,
    })
}

/// Relative residual of the block product formula
/// `θ_{δ₁⊕δ₂}(Ω₁⊕Ω₂, z) = θ_{δ₁}(Ω₁, z₁) θ_{δ₂}(Ω₂, z₂)`.
pub fn check_product(
    delta: &Characteristic,
    omega1: &PeriodMatrix,
    omega2: &PeriodMatrix,
    z: &CVector,
    target_err: f64,
) -> Result<f64> {
    let g1 = omega1.genus();
    if delta.genus() != g1 + omega2.genus() || z.len() != delta.genus() {
        return Err(Error::Domain("block sizes do not match the characteristic".into()));
    }
    let (d1, d2) = delta.split(g1)?;
    let whole = theta(delta, &omega1.direct_sum(omega2), z, target_err)?.value;
    let z1 = z.rows(0, g1).into_owned();
    let z2 = z.rows(g1, z.len() - g1).into_owned();
    let product = theta(&d1, omega1, &z1, target_err)?.value * theta(&d2, omega2, &z2, target_err)?.value;
    Ok((whole - product).norm() / product.norm().max(1.0))
}

/// `z + δ″ + δ′Ω`: the translate at which `θ₀` reproduces the zeros of `θ_δ`.
pub fn shift_reference_point(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector) -> Result<CVector> {
    let swapped = Characteristic::new(delta.delta_dprime().to_vec(), delta.delta_prime().to_vec())?;
    Ok(z + swapped.half_period(omega.matrix())?)
}

/// `exp(πi δ′Ωδ′ᵀ + 2πi δ′(z + δ″)ᵀ)` with `δ′, δ″` the half-integer vectors.
pub fn classical_shift_factor(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector) -> Complex64 {
    let ep = delta.eps_prime();
    let epp = delta.eps_dprime();
    let g = delta.genus();
    let om = omega.matrix();
    let mut quad = Complex64::new(0.0, 0.0);
    let mut lin = Complex64::new(0.0, 0.0);
    for j in 0..g {
        for k in 0..g {
            quad += om[(j, k)] * (ep[j] * ep[k]);
        }
        lin += (z[j] + epp[j]) * ep[j];
    }
    (PI * I * quad + 2.0 * PI * I * lin).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftSample {
    #[serde(with = "super::complex_pair")]
    pub ratio: Complex64,
    #[serde(with = "super::complex_pair")]
    pub classical_factor: Complex64,
    pub relative_mismatch: f64,
}

/// Ratio `θ_δ(Ω, z) / θ₀(Ω, z + δ″ + δ′Ω)` together with the closed-form
/// factor it should equal.
pub fn check_shift_reference(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector, target_err: f64) -> Result<ShiftSample> {
    let w = shift_reference_point(delta, omega, z)?;
    let denom = theta(&Characteristic::zero(delta.genus()), omega, &w, target_err)?.value;
    if denom.norm() <= SHIFT_DENOMINATOR_FLOOR {
        return Err(Error::SmallDenominator(denom.norm()));
    }
    let ratio = theta(delta, omega, z, target_err)?.value / denom;
    let classical_factor = classical_shift_factor(delta, omega, z);
    Ok(ShiftSample { ratio, classical_factor, relative_mismatch: (ratio - classical_factor).norm() / classical_factor.norm() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatResidual {
    pub relative: f64,
    pub max_abs: f64,
}

/// Compares `∂θ/∂Ω_{jk}` obtained from the z-Hessian with central finite
/// differences of step `step` in the symmetric coordinates `Ω_{jk}`, `j ≤ k`.
pub fn heat_residual(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector, step: f64, target_err: f64) -> Result<HeatResidual> {
    let g = omega.genus();
    let from_heat = theta_jet(delta, omega, z, target_err)?.omega_gradient();
    let mut diff_sq = 0.0;
    let mut norm_sq = 0.0;
    let mut max_abs: f64 = 0.0;
    for j in 0..g {
        for k in j..g {
            let bump = DMatrix::from_fn(g, g, |a, b| {
                if (a, b) == (j, k) || (a, b) == (k, j) {
                    Complex64::new(step, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let up = PeriodMatrix::new(omega.matrix() + &bump)?;
            let down = PeriodMatrix::new(omega.matrix() - &bump)?;
            let fd = (theta(delta, &up, z, target_err)?.value - theta(delta, &down, z, target_err)?.value) / (2.0 * step);
            let d = (fd - from_heat[(j, k)]).norm();
            diff_sq += d * d;
            norm_sq += from_heat[(j, k)].norm_sqr();
            max_abs = max_abs.max(d);
        }
    }
    Ok(HeatResidual { relative: (diff_sq / norm_sq).sqrt(), max_abs })
}
