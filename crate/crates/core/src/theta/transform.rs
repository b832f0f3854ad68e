//! Numerical identification of the characteristic permutation induced by
//! an integral symplectic matrix.
//!
//! For `M = (A B; C D)` the function `z ↦ θ_δ(M·Ω, z(CΩ+D)⁻¹)` is a
//! nowhere-vanishing multiple of exactly one `θ_{δ*}(Ω, z)`. The z-dependent
//! part of the multiplier is `exp(πi zNzᵀ)` with `N = (CΩ+D)⁻¹C`, the same
//! for every characteristic; after dividing it out, the ratio against the
//! right candidate is constant on the sample grid while every other
//! candidate picks up the zeros and poles of a different divisor.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::ThetaFunction;
use crate::characteristics::{enumerate, Characteristic};
use crate::error::{Error, Result};
use crate::siegel::{to_complex, CVector, PeriodMatrix, SymplecticIntMatrix};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Grid points per real coordinate of the fundamental cell.
pub const GRID_POINTS: usize = 5;
/// Maximal `log(max|q| / min|q|)` for a candidate to pass.
pub const SPREAD_TOL: f64 = 1e-6;
/// Samples where either side is below this fraction of its grid maximum are
/// treated as lying on a zero and skipped.
const ZERO_FLOOR: f64 = 1e-6;
const OFFSETS: [f64; 4] = [0.113, 0.271, 0.157, 0.389];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformMatch {
    pub delta: Characteristic,
    pub image: Characteristic,
    /// Log-spread of the normalized ratio for the matched candidate.
    pub spread: f64,
    /// Smallest log-spread among the rejected candidates.
    pub runner_up_spread: f64,
}

fn sample_grid(omega: &PeriodMatrix) -> Vec<CVector> {
    let g = omega.genus();
    let n = 2 * g;
    let total = GRID_POINTS.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut coords = vec![0.0; n];
            for (i, c) in coords.iter_mut().enumerate() {
                *c = ((code % GRID_POINTS) as f64 + OFFSETS[i % OFFSETS.len()]) / GRID_POINTS as f64;
                code /= GRID_POINTS;
            }
            let x = DVector::from_iterator(g, coords[..g].iter().map(|&t| Complex64::new(t, 0.0)));
            let y = DVector::from_iterator(g, coords[g..].iter().map(|&t| Complex64::new(t, 0.0)));
            x + (y.transpose() * omega.matrix()).transpose()
        })
        .collect()
}

fn log_spread(num: &[Complex64], den: &[Complex64]) -> f64 {
    let num_max = num.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let den_max = den.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (a, b) in num.iter().zip(den) {
        if a.norm() < ZERO_FLOOR * num_max || b.norm() < ZERO_FLOOR * den_max {
            continue;
        }
        let l = (a / b).norm().ln();
        lo = lo.min(l);
        hi = hi.max(l);
    }
    if lo.is_finite() {
        hi - lo
    } else {
        f64::INFINITY
    }
}

/// Matches every characteristic of genus 2 against the transformed theta
/// functions of `M`, sharing the candidate evaluations across all `δ`.
pub fn transformation_table(m: &SymplecticIntMatrix, omega: &PeriodMatrix, target_err: f64) -> Result<Vec<TransformMatch>> {
    let g = omega.genus();
    if g != 2 || m.genus() != 2 {
        return Err(Error::Domain("characteristic matching is implemented for genus 2".into()));
    }
    let image = m.act_on_siegel(omega)?;
    let cm = m.automorphy_matrix(omega)?;
    let inv = cm.try_inverse().ok_or_else(|| Error::NumericInstability("C*Omega + D is singular".into()))?;
    let quad_form = &inv * to_complex(&m.c());
    let grid = sample_grid(omega);
    let moved: Vec<CVector> = grid.iter().map(|z| (z.transpose() * &inv).transpose()).collect();
    let multipliers: Vec<Complex64> = grid
        .iter()
        .map(|z| (-PI * I * (z.transpose() * &quad_form * z)[(0, 0)]).exp())
        .collect();

    let all = enumerate(g)?;
    let mut candidates = Vec::with_capacity(all.len());
    for eps in &all {
        let f = ThetaFunction::new(eps, omega)?;
        let vals = grid.iter().map(|z| f.eval(z, target_err).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
        candidates.push(vals);
    }

    let mut table = Vec::with_capacity(all.len());
    for delta in &all {
        let f = ThetaFunction::new(delta, &image)?;
        let num = moved
            .iter()
            .zip(&multipliers)
            .map(|(w, mult)| f.eval(w, target_err).map(|r| r.value * mult))
            .collect::<Result<Vec<_>>>()?;
        let spreads: Vec<f64> = candidates.iter().map(|den| log_spread(&num, den)).collect();
        let passing: Vec<usize> = (0..spreads.len()).filter(|&i| spreads[i] <= SPREAD_TOL).collect();
        if passing.len() != 1 {
            return Err(Error::Ambiguity { candidates: passing.len() });
        }
        let hit = passing[0];
        let runner_up = (0..spreads.len()).filter(|&i| i != hit).map(|i| spreads[i]).fold(f64::INFINITY, f64::min);
        table.push(TransformMatch { delta: delta.clone(), image: all[hit].clone(), spread: spreads[hit], runner_up_spread: runner_up });
    }
    Ok(table)
}

/// The unique `δ*` whose theta function shares its zero set with
/// `z ↦ θ_δ(M·Ω, z(CΩ+D)⁻¹)`.
pub fn transformed_characteristic(
    m: &SymplecticIntMatrix,
    delta: &Characteristic,
    omega: &PeriodMatrix,
    target_err: f64,
) -> Result<Characteristic> {
    if delta.genus() != omega.genus() {
        return Err(Error::Domain("characteristic genus does not match period matrix".into()));
    }
    let table = transformation_table(m, omega, target_err)?;
    Ok(table.into_iter().find(|t| &t.delta == delta).map(|t| t.image).expect("table covers every characteristic"))
}
