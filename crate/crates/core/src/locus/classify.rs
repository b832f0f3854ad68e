use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::{trace_zero_curve_along, Restricted, Slice, SlicedZero, DEFAULT_LOCUS_TARGET_ERR, ZERO_TOL};
use crate::characteristics::{Characteristic, Parity};
use crate::error::{Error, Result};
use crate::json;
use crate::siegel::{CVector, PeriodMatrix};
use crate::theta::{theta, theta_jet, ThetaFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyTolerances {
    pub smooth_tol: f64,
    pub node_tol: f64,
    pub hess_tol: f64,
    /// Lower bound asserted for the gradient on `h_g × ℂ^g`.
    pub full_grad_tol: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        ClassifyTolerances { smooth_tol: 1e-6, node_tol: 1e-8, hess_tol: 1e-8, full_grad_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Smooth,
    Node,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointClass {
    pub kind: PointKind,
    pub grad_norm: f64,
    #[serde(serialize_with = "super::ser_complex")]
    pub hess_det: Complex64,
    /// Norm of the gradient including the Ω-derivatives from the heat equation.
    pub full_grad_norm: f64,
}

pub fn classify_point(delta: &Characteristic, omega: &PeriodMatrix, z0: &CVector, tol: &ClassifyTolerances) -> Result<PointClass> {
    let value = theta(delta, omega, z0, DEFAULT_LOCUS_TARGET_ERR)?.value.norm();
    if value > ZERO_TOL {
        return Err(Error::NotOnLocus(value));
    }
    let jet = theta_jet(delta, omega, z0, DEFAULT_LOCUS_TARGET_ERR)?;
    let grad_norm = jet.grad_z.norm();
    let hess_det = jet.hess_z.determinant();
    let full_grad_norm = jet.full_gradient().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if full_grad_norm <= tol.full_grad_tol {
        return Err(Error::NumericInstability(format!(
            "gradient on h_g x C^g vanishes ({full_grad_norm:e}) at a zero of theta"
        )));
    }
    let kind = if grad_norm > tol.smooth_tol {
        PointKind::Smooth
    } else if grad_norm <= tol.node_tol && hess_det.norm() > tol.hess_tol {
        PointKind::Node
    } else {
        return Err(Error::UnresolvedClassification { grad_norm });
    };
    Ok(PointClass { kind, grad_norm, hess_det, full_grad_norm })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducibleReport {
    pub branch_residual: f64,
    pub node_count: usize,
    pub node_order: u32,
    #[serde(serialize_with = "ser_points")]
    pub nodes: Vec<CVector>,
    pub traced_points: usize,
}

fn ser_points<S: serde::Serializer>(v: &[CVector], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(json::vector_to_pairs))
}

/// Zeros of a genus-1 theta function in the centred cell of `τ`.
fn elliptic_zeros(delta: &Characteristic, tau: &PeriodMatrix) -> Result<Vec<Complex64>> {
    let slice = Slice::coordinate(tau, 0, DVector::from_element(1, Complex64::new(0.0, 0.0)))?;
    Ok(super::slice_zeros(delta, tau, &slice, DEFAULT_LOCUS_TARGET_ERR)?.into_iter().map(|z| z.local_coord).collect())
}

fn distance_to_points(w: Complex64, points: &[Complex64], tau: &PeriodMatrix) -> Result<f64> {
    let mut best = f64::INFINITY;
    for p in points {
        best = best.min(tau.torus_norm(&DVector::from_element(1, w - p))?);
    }
    Ok(best)
}

/// Traces the theta divisor of `Ω₁ ⊕ Ω₂` for `δ = δ₁ ⊕ δ₂` with both blocks
/// odd, checks that it is the union of the two elliptic branches and
/// measures the node where they meet.
///
/// The node order is the argument-principle multiplicity at the node along
/// a line transversal to both branches; each branch contributes one.
pub fn verify_reducible_structure(
    delta: &Characteristic,
    omega1: &PeriodMatrix,
    omega2: &PeriodMatrix,
    n_slices: usize,
) -> Result<ReducibleReport> {
    if omega1.genus() != 1 || omega2.genus() != 1 || delta.genus() != 2 {
        return Err(Error::Domain("reducible structure is checked for genus 1 + 1".into()));
    }
    let (d1, d2) = delta.split(1)?;
    if d1.parity() != Parity::Odd || d2.parity() != Parity::Odd {
        return Err(Error::Domain("both blocks of the characteristic must be odd".into()));
    }
    let omega = omega1.direct_sum(omega2);
    let w1 = elliptic_zeros(&d1, omega1)?;
    let w2 = elliptic_zeros(&d2, omega2)?;

    let mut cloud: Vec<SlicedZero> = trace_zero_curve_along(delta, &omega, n_slices, 0, DEFAULT_LOCUS_TARGET_ERR)?;
    cloud.extend(trace_zero_curve_along(delta, &omega, n_slices, 1, DEFAULT_LOCUS_TARGET_ERR)?);
    let mut branch_residual: f64 = 0.0;
    for p in &cloud {
        let d = distance_to_points(p.z[0], &w1, omega1)?.min(distance_to_points(p.z[1], &w2, omega2)?);
        branch_residual = branch_residual.max(d);
    }

    let tol = ClassifyTolerances::default();
    let theta_fn = ThetaFunction::new(delta, &omega)?;
    let mut nodes = Vec::new();
    let mut node_order = 0;
    for a in &w1 {
        for b in &w2 {
            let z = DVector::from_vec(vec![*a, *b]);
            if classify_point(delta, &omega, &z, &tol)?.kind != PointKind::Node {
                continue;
            }
            let transversal = Slice {
                base: z.clone(),
                direction: DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.7, 0.2)]),
                origin: Complex64::new(-0.5, -0.5),
                side1: Complex64::new(1.0, 0.0),
                side2: Complex64::new(0.0, 1.0),
            };
            let restricted = Restricted { theta: &theta_fn, slice: &transversal, target_err: DEFAULT_LOCUS_TARGET_ERR };
            let (m, _) = restricted.multiplicity(Complex64::new(0.0, 0.0), 0.05)?;
            node_order = node_order.max(m);
            nodes.push(z);
        }
    }
    Ok(ReducibleReport { branch_residual, node_count: nodes.len(), node_order, nodes, traced_points: cloud.len() })
}
