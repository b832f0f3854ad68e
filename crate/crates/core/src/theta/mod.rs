//! Truncated lattice sums for `θ_δ(Ω, z)` with certified tail bounds.
//!
//! The sum runs over the box `max_j |m_j| ≤ R`, accumulated shell by shell
//! (increasing max-norm, lexicographic within a shell) so results are
//! reproducible bit for bit. With `Y = Im Ω`, `λ = λ_min(Y)`, `y = Im z` and
//! `s = ‖δ′‖_∞ + ‖yY⁻¹‖_∞`, a term with `‖m‖_∞ = k > s` has modulus at most
//! `exp(π yY⁻¹yᵀ) · exp(−πλ(k − s)²)`, and shell `k` holds at most
//! `2g·(3k)^{g−1}` points. Summing that envelope over `k > R` gives the
//! truncation bound.

mod checks;
mod transform;

pub use checks::{
    check_parity, check_product, check_shift_reference, classical_shift_factor, heat_residual,
    shift_reference_point, HeatResidual, ParityCheck, ShiftSample,
};
pub use transform::{transformation_table, transformed_characteristic, TransformMatch};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::characteristics::Characteristic;
use crate::error::{Error, Result};
use crate::siegel::{CVector, PeriodMatrix};

pub const DEFAULT_TARGET_ERR: f64 = 1e-12;
pub const RADIUS_CAP: usize = 200;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaResult {
    #[serde(with = "complex_pair")]
    pub value: Complex64,
    pub truncation_bound: f64,
    pub radius_used: usize,
}

/// Value, z-gradient and z-Hessian from one truncated sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaJet {
    pub value: Complex64,
    pub grad_z: CVector,
    pub hess_z: DMatrix<Complex64>,
    /// Bounds the truncation error of every component simultaneously.
    pub truncation_bound: f64,
    pub radius_used: usize,
}

impl ThetaJet {
    /// `∂θ/∂Ω_{jk} = ∂²θ/∂z_j∂z_k / (2πi(1 + δ_{jk}))`.
    pub fn omega_gradient(&self) -> DMatrix<Complex64> {
        let g = self.grad_z.len();
        DMatrix::from_fn(g, g, |j, k| {
            let kron = if j == k { 2.0 } else { 1.0 };
            self.hess_z[(j, k)] / (2.0 * PI * I * kron)
        })
    }

    /// Full gradient on `h_g × ℂ^g`: the upper-triangular Ω-derivatives
    /// (row-major) followed by the z-derivatives.
    pub fn full_gradient(&self) -> Vec<Complex64> {
        let g = self.grad_z.len();
        let om = self.omega_gradient();
        let mut out = Vec::with_capacity(g * (g + 1) / 2 + g);
        for j in 0..g {
            for k in j..g {
                out.push(om[(j, k)]);
            }
        }
        out.extend(self.grad_z.iter().copied());
        out
    }
}

/// A theta function with fixed characteristic and period matrix; caches the
/// quantities the tail bound needs.
#[derive(Debug, Clone)]
pub struct ThetaFunction {
    delta: Characteristic,
    omega: PeriodMatrix,
    eps_p: DVector<f64>,
    eps_pp: DVector<f64>,
    lambda: f64,
    y_inv: DMatrix<f64>,
}

impl ThetaFunction {
    pub fn new(delta: &Characteristic, omega: &PeriodMatrix) -> Result<Self> {
        if delta.genus() != omega.genus() {
            return Err(Error::Domain(format!(
                "characteristic genus {} does not match period matrix genus {}",
                delta.genus(),
                omega.genus()
            )));
        }
        let lambda = omega.min_imag_eigenvalue();
        let y_inv = omega
            .imag_part()
            .try_inverse()
            .ok_or_else(|| Error::InvalidPeriodMatrix("singular imaginary part".into()))?;
        Ok(ThetaFunction {
            delta: delta.clone(),
            omega: omega.clone(),
            eps_p: delta.eps_prime(),
            eps_pp: delta.eps_dprime(),
            lambda,
            y_inv,
        })
    }

    pub fn characteristic(&self) -> &Characteristic {
        &self.delta
    }

    pub fn period_matrix(&self) -> &PeriodMatrix {
        &self.omega
    }

    pub fn genus(&self) -> usize {
        self.delta.genus()
    }

    fn check_point(&self, z: &CVector) -> Result<()> {
        if z.len() != self.genus() {
            return Err(Error::Domain(format!("point has length {}, expected {}", z.len(), self.genus())));
        }
        if z.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::Domain("non-finite point".into()));
        }
        Ok(())
    }

    /// `(s, log prefactor)` of the Gaussian envelope at `z`.
    fn envelope(&self, z: &CVector) -> (f64, f64) {
        let y = DVector::from_iterator(self.genus(), z.iter().map(|w| w.im));
        let centre = &self.y_inv * &y;
        let shift = self.eps_p.amax() + centre.amax();
        let log_pref = PI * y.dot(&centre);
        (shift, log_pref)
    }

    /// Certified bound on the tail `‖m‖_∞ > radius` of the series whose
    /// terms carry `order` derivatives in z. Infinite when `radius < s`.
    pub fn tail_bound(&self, z: &CVector, radius: usize, order: u32) -> f64 {
        let (shift, log_pref) = self.envelope(z);
        tail_sum(self.genus(), self.lambda, shift, log_pref, radius, order)
    }

    fn choose_radius(&self, z: &CVector, target_err: f64, order: u32) -> Result<(usize, f64)> {
        if !(target_err > 0.0 && target_err.is_finite()) {
            return Err(Error::Domain(format!("target error must be positive, got {target_err}")));
        }
        let (shift, log_pref) = self.envelope(z);
        let g = self.genus();
        let start = shift.ceil().max(0.0) as usize;
        if start > RADIUS_CAP {
            return Err(Error::UnattainableAccuracy { target: target_err, achievable: f64::INFINITY, cap: RADIUS_CAP });
        }
        for radius in start..=RADIUS_CAP {
            let bound = tail_sum(g, self.lambda, shift, log_pref, radius, order);
            if bound <= target_err {
                return Ok((radius, bound));
            }
        }
        Err(Error::UnattainableAccuracy {
            target: target_err,
            achievable: tail_sum(g, self.lambda, shift, log_pref, RADIUS_CAP, order),
            cap: RADIUS_CAP,
        })
    }

    pub fn eval(&self, z: &CVector, target_err: f64) -> Result<ThetaResult> {
        self.check_point(z)?;
        let (radius, bound) = self.choose_radius(z, target_err, 0)?;
        Ok(ThetaResult { value: self.sum_value(z, radius), truncation_bound: bound, radius_used: radius })
    }

    /// Sum over the box of the given radius; the bound reported is whatever
    /// the envelope certifies for that radius.
    pub fn eval_at_radius(&self, z: &CVector, radius: usize) -> Result<ThetaResult> {
        self.check_point(z)?;
        Ok(ThetaResult {
            value: self.sum_value(z, radius),
            truncation_bound: self.tail_bound(z, radius, 0),
            radius_used: radius,
        })
    }

    pub fn jet(&self, z: &CVector, target_err: f64) -> Result<ThetaJet> {
        self.check_point(z)?;
        let (radius, bound) = self.choose_radius(z, target_err, 2)?;
        let g = self.genus();
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = DVector::from_element(g, Complex64::new(0.0, 0.0));
        let mut hess = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
        let two_pi_i = 2.0 * PI * I;
        let mut n = vec![0.0; g];
        for_each_point(g, radius, |m| {
            let term = self.term(m, z, &mut n);
            value += term;
            for j in 0..g {
                let tj = term * (two_pi_i * n[j]);
                grad[j] += tj;
                for k in j..g {
                    hess[(j, k)] += tj * (two_pi_i * n[k]);
                }
            }
        });
        for j in 0..g {
            for k in 0..j {
                hess[(j, k)] = hess[(k, j)];
            }
        }
        Ok(ThetaJet { value, grad_z: grad, hess_z: hess, truncation_bound: bound, radius_used: radius })
    }

    /// Value and z-gradient, with the bound covering both.
    pub fn eval_with_gradient(&self, z: &CVector, target_err: f64) -> Result<(ThetaResult, CVector)> {
        self.check_point(z)?;
        let (radius, bound) = self.choose_radius(z, target_err, 1)?;
        let g = self.genus();
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = DVector::from_element(g, Complex64::new(0.0, 0.0));
        let two_pi_i = 2.0 * PI * I;
        let mut n = vec![0.0; g];
        for_each_point(g, radius, |m| {
            let term = self.term(m, z, &mut n);
            value += term;
            for j in 0..g {
                grad[j] += term * (two_pi_i * n[j]);
            }
        });
        Ok((ThetaResult { value, truncation_bound: bound, radius_used: radius }, grad))
    }

    fn sum_value(&self, z: &CVector, radius: usize) -> Complex64 {
        let g = self.genus();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut n = vec![0.0; g];
        for_each_point(g, radius, |m| acc += self.term(m, z, &mut n));
        acc
    }

    /// `exp(πi((m+δ′)Ω(m+δ′)ᵀ + 2(m+δ′)(z+δ″)ᵀ))`; leaves `m + δ′` in `n`.
    #[inline]
    fn term(&self, m: &[i64], z: &CVector, n: &mut [f64]) -> Complex64 {
        let g = m.len();
        let om = self.omega.matrix();
        for j in 0..g {
            n[j] = m[j] as f64 + self.eps_p[j];
        }
        let mut quad = Complex64::new(0.0, 0.0);
        for j in 0..g {
            quad += om[(j, j)] * (n[j] * n[j]);
            for k in (j + 1)..g {
                quad += om[(j, k)] * (2.0 * n[j] * n[k]);
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for j in 0..g {
            lin += (z[j] + self.eps_pp[j]) * n[j];
        }
        (PI * I * (quad + 2.0 * lin)).exp()
    }
}

/// `Σ_{k>radius} 2g(3k)^{g−1}(2π(k+1))^order exp(log_pref − πλ(k−s)²)`.
fn tail_sum(g: usize, lambda: f64, shift: f64, log_pref: f64, radius: usize, order: u32) -> f64 {
    if (radius as f64) < shift {
        return f64::INFINITY;
    }
    let log_term = |k: f64| {
        (2.0 * g as f64).ln()
            + (g as f64 - 1.0) * (3.0 * k).ln()
            + order as f64 * (2.0 * PI * (k + 1.0)).ln()
            + log_pref
            - PI * lambda * (k - shift).powi(2)
    };
    // Past `s` the ratio of consecutive terms decreases, so once it drops
    // below one the rest is dominated by a geometric series.
    let mut total = 0.0;
    let mut k = radius as f64 + 1.0;
    loop {
        let lt = log_term(k);
        let ratio = (log_term(k + 1.0) - lt).exp();
        total += lt.exp();
        if ratio < 0.5 {
            let next = log_term(k + 1.0).exp();
            return total + next / (1.0 - ratio);
        }
        k += 1.0;
        if k > 1e6 {
            return f64::INFINITY;
        }
    }
}

/// Visits the integer points of `[-radius, radius]^g` shell by shell, in
/// lexicographic order inside each shell.
pub fn for_each_point<F: FnMut(&[i64])>(g: usize, radius: usize, mut f: F) {
    let mut m = vec![0i64; g];
    for k in 0..=radius as i64 {
        shell(&mut m, 0, k, false, &mut f);
    }
}

fn shell<F: FnMut(&[i64])>(m: &mut Vec<i64>, pos: usize, k: i64, on_boundary: bool, f: &mut F) {
    let g = m.len();
    if pos == g {
        if on_boundary || k == 0 {
            f(m);
        }
        return;
    }
    if pos == g - 1 && !on_boundary && k > 0 {
        for v in [-k, k] {
            m[pos] = v;
            f(m);
        }
        return;
    }
    for v in -k..=k {
        m[pos] = v;
        shell(m, pos + 1, k, on_boundary || v.abs() == k, f);
    }
}

pub fn theta(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector, target_err: f64) -> Result<ThetaResult> {
    ThetaFunction::new(delta, omega)?.eval(z, target_err)
}

pub fn theta_at_radius(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector, radius: usize) -> Result<ThetaResult> {
    ThetaFunction::new(delta, omega)?.eval_at_radius(z, radius)
}

pub fn theta_jet(delta: &Characteristic, omega: &PeriodMatrix, z: &CVector, target_err: f64) -> Result<ThetaJet> {
    ThetaFunction::new(delta, omega)?.jet(z, target_err)
}

pub fn thetanull(delta: &Characteristic, omega: &PeriodMatrix, target_err: f64) -> Result<ThetaResult> {
    let zero = DVector::from_element(omega.genus(), Complex64::new(0.0, 0.0));
    theta(delta, omega, &zero, target_err)
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([c.re, c.im])
    }
}
