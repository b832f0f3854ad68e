//! Zero loci of theta functions on `ℂ^g / Λ(Ω)`, explored one complex line
//! at a time.
//!
//! A [`Slice`] is an affine line `t ↦ base + t·direction` together with a
//! parallelogram of admissible `t`. Zeros of the restricted function are
//! located by recursive subdivision guided by boundary winding numbers,
//! polished by Newton's method, and given argument-principle multiplicities.

mod classify;
pub mod winding;

pub use classify::{classify_point, verify_reducible_structure, ClassifyTolerances, PointClass, PointKind, ReducibleReport};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::characteristics::Characteristic;
use crate::error::{Error, Result};
use crate::json;
use crate::siegel::{CVector, PeriodMatrix};
use crate::theta::ThetaFunction;
use winding::{circle_index, polygon_winding, Winding};

/// Residual demanded of every reported zero.
pub const ZERO_TOL: f64 = 1e-8;
pub const DEFAULT_LOCUS_TARGET_ERR: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;
const NEWTON_VALUE_TOL: f64 = 1e-12;
const NEWTON_STEP_TOL: f64 = 1e-14;
const MAX_DEPTH: u32 = 12;
const CIRCLE_SAMPLES: usize = 64;
/// Minimum number of samples per cell-length of boundary.
const EDGE_SAMPLES: f64 = 32.0;
const RADIUS_REFINEMENTS: usize = 3;
/// Offsets applied to the cell or to split lines when a sample lands on a zero.
const NUDGES: [f64; 4] = [0.0, 0.0137, -0.0291, 0.0433];

/// Affine complex line with a parallelogram of parameters
/// `{origin + a·side1 + b·side2 : a, b ∈ [0, 1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub base: CVector,
    pub direction: CVector,
    pub origin: Complex64,
    pub side1: Complex64,
    pub side2: Complex64,
}

impl Slice {
    /// The line along coordinate `axis` through `base`, with the cell spanned
    /// by `1` and `Ω_{axis,axis}` centred on `t = 0`.
    pub fn coordinate(omega: &PeriodMatrix, axis: usize, base: CVector) -> Result<Slice> {
        let g = omega.genus();
        if axis >= g || base.len() != g {
            return Err(Error::Domain(format!("axis {axis} / base length {} invalid for genus {g}", base.len())));
        }
        let mut direction = DVector::from_element(g, Complex64::new(0.0, 0.0));
        direction[axis] = Complex64::new(1.0, 0.0);
        let period = omega.entry(axis, axis);
        Ok(Slice { base, direction, origin: -(Complex64::new(1.0, 0.0) + period) * 0.5, side1: Complex64::new(1.0, 0.0), side2: period })
    }

    pub fn point(&self, t: Complex64) -> CVector {
        &self.base + &self.direction * t
    }

    fn at(&self, a: f64, b: f64) -> Complex64 {
        self.origin + self.side1 * a + self.side2 * b
    }

    /// Cell coordinates `(a, b)` of a parameter value.
    fn coords(&self, t: Complex64) -> (f64, f64) {
        let d = t - self.origin;
        let det = self.side1.re * self.side2.im - self.side1.im * self.side2.re;
        let a = (d.re * self.side2.im - d.im * self.side2.re) / det;
        let b = (self.side1.re * d.im - self.side1.im * d.re) / det;
        (a, b)
    }

    fn scale(&self) -> f64 {
        self.side1.norm().min(self.side2.norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlicedZero {
    pub slice_index: usize,
    #[serde(serialize_with = "ser_complex")]
    pub local_coord: Complex64,
    pub multiplicity: u32,
    #[serde(serialize_with = "ser_vector")]
    pub z: CVector,
    /// Raw value of the winding integral that produced `multiplicity`.
    pub winding_integral: f64,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(json::pair(*c))
}

fn ser_vector<S: serde::Serializer>(v: &CVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(json::vector_to_pairs(v))
}

struct Restricted<'a> {
    theta: &'a ThetaFunction,
    slice: &'a Slice,
    target_err: f64,
}

impl Restricted<'_> {
    fn value(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.theta.eval(&self.slice.point(t), self.target_err)?.value)
    }

    fn value_and_derivative(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        let (r, grad) = self.theta.eval_with_gradient(&self.slice.point(t), self.target_err)?;
        Ok((r.value, grad.dot(&self.slice.direction)))
    }

    fn newton(&self, start: Complex64) -> Result<Option<Complex64>> {
        let mut t = start;
        for _ in 0..NEWTON_MAX_ITER {
            let (v, dv) = self.value_and_derivative(t)?;
            if v.norm() <= NEWTON_VALUE_TOL {
                return Ok(Some(t));
            }
            if dv.norm() == 0.0 {
                return Ok(None);
            }
            let step = v / dv;
            t -= step;
            if !t.re.is_finite() || !t.im.is_finite() {
                return Ok(None);
            }
            if step.norm() <= NEWTON_STEP_TOL {
                return Ok(Some(t));
            }
        }
        let v = self.value(t)?;
        Ok((v.norm() <= ZERO_TOL).then_some(t))
    }

    /// Argument-principle multiplicity on a circle around `t`, shrinking the
    /// radius until the integral is within 0.1 of an integer.
    fn multiplicity(&self, t: Complex64, radius: f64) -> Result<(u32, f64)> {
        let mut r = radius;
        for _ in 0..=RADIUS_REFINEMENTS {
            let idx = circle_index(&|s| self.value_and_derivative(s), t, r, CIRCLE_SAMPLES)?;
            let m = idx.re.round();
            if (idx - Complex64::new(m, 0.0)).norm() <= 0.1 && m >= 1.0 {
                return Ok((m as u32, idx.re));
            }
            r *= 0.5;
        }
        Err(Error::IllConditionedSlice(format!("winding integral at t = {t} never settled near an integer")))
    }

    fn rect_winding(&self, a0: f64, a1: f64, b0: f64, b1: f64, floor: f64) -> Result<Winding> {
        let s = self.slice;
        let verts = [s.at(a0, b0), s.at(a1, b0), s.at(a1, b1), s.at(a0, b1)];
        polygon_winding(&|t| self.value(t), &verts, floor, s.scale() / EDGE_SAMPLES)
    }

    fn search(&self, rect: [f64; 4], winding: i64, depth: u32, floor: f64, out: &mut Vec<(Complex64, u32, f64)>) -> Result<()> {
        if winding == 0 {
            return Ok(());
        }
        let [a0, a1, b0, b1] = rect;
        let s = self.slice;
        let centre = s.at(0.5 * (a0 + a1), 0.5 * (b0 + b1));
        if let Some(t) = self.newton(centre)? {
            let (a, b) = s.coords(t);
            if a >= a0 && a < a1 && b >= b0 && b < b1 {
                let extent = ((a1 - a0) * s.side1.norm()).min((b1 - b0) * s.side2.norm());
                let radius = (0.01 * s.scale()).min(0.25 * extent);
                if let Ok((m, raw)) = self.multiplicity(t, radius) {
                    if m as i64 == winding {
                        out.push((t, m, raw));
                        return Ok(());
                    }
                }
            }
        }
        if depth == MAX_DEPTH {
            return Err(Error::IllConditionedSlice(format!("could not isolate {winding} zero(s) near t = {centre}")));
        }
        for nudge in NUDGES {
            let am = a0 + (a1 - a0) * (0.5 + nudge);
            let bm = b0 + (b1 - b0) * (0.5 + nudge);
            let children = [[a0, am, b0, bm], [am, a1, b0, bm], [a0, am, bm, b1], [am, a1, bm, b1]];
            let mut counts = Vec::with_capacity(4);
            for ch in &children {
                match self.rect_winding(ch[0], ch[1], ch[2], ch[3], floor)? {
                    Winding::Count(w) => counts.push(w),
                    Winding::HitZero => break,
                }
            }
            if counts.len() < 4 {
                continue;
            }
            if counts.iter().sum::<i64>() != winding {
                return Err(Error::IllConditionedSlice("inconsistent windings under subdivision".into()));
            }
            for (ch, w) in children.iter().zip(counts) {
                self.search(*ch, w, depth + 1, floor, out)?;
            }
            return Ok(());
        }
        Err(Error::IllConditionedSlice("every split line meets a zero".into()))
    }
}

/// All zeros of `t ↦ θ_δ(Ω, base + t·direction)` in the slice cell.
pub fn slice_zeros(delta: &Characteristic, omega: &PeriodMatrix, slice: &Slice, target_err: f64) -> Result<Vec<SlicedZero>> {
    let theta = ThetaFunction::new(delta, omega)?;
    slice_zeros_with(&theta, slice, 0, target_err)
}

fn slice_zeros_with(theta: &ThetaFunction, slice: &Slice, slice_index: usize, target_err: f64) -> Result<Vec<SlicedZero>> {
    if slice.base.len() != theta.genus() || slice.direction.len() != theta.genus() {
        return Err(Error::Domain("slice dimension does not match genus".into()));
    }
    if slice.direction.norm() == 0.0 {
        return Err(Error::Domain("slice direction is zero".into()));
    }
    let f = Restricted { theta, slice, target_err };

    // A function that is tiny on a spread of sample points is treated as
    // identically zero on the line.
    let mut scale: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let t = slice.at((i as f64 + 0.31) / 4.0, (j as f64 + 0.17) / 4.0);
            scale = scale.max(f.value(t)?.norm());
        }
    }
    if scale <= ZERO_TOL {
        return Err(Error::DegenerateSlice);
    }
    let floor = 1e-10 * scale;

    for nudge in NUDGES {
        let shifted = Slice { origin: slice.origin + (slice.side1 + slice.side2) * nudge, ..slice.clone() };
        let g = Restricted { theta, slice: &shifted, target_err };
        let total = match g.rect_winding(0.0, 1.0, 0.0, 1.0, floor)? {
            Winding::Count(w) => w,
            Winding::HitZero => continue,
        };
        let mut found = Vec::new();
        g.search([0.0, 1.0, 0.0, 1.0], total, 0, floor, &mut found)?;
        let mut zeros = Vec::with_capacity(found.len());
        for (t, multiplicity, raw) in found {
            let z = shifted.point(t);
            let v = theta.eval(&z, target_err)?.value.norm();
            if v > ZERO_TOL {
                return Err(Error::IllConditionedSlice(format!("refined zero has residual {v:e}")));
            }
            zeros.push(SlicedZero { slice_index, local_coord: t, multiplicity, z, winding_integral: raw });
        }
        zeros.sort_by(|x, y| {
            (x.local_coord.re, x.local_coord.im).partial_cmp(&(y.local_coord.re, y.local_coord.im)).expect("finite coordinates")
        });
        return Ok(zeros);
    }
    Err(Error::IllConditionedSlice("cell boundary meets a zero for every offset".into()))
}

/// Parallel coordinate slices whose fixed coordinate runs over a uniform
/// grid of that coordinate's centred cell.
pub fn slice_family(omega: &PeriodMatrix, axis: usize, n_slices: usize) -> Result<Vec<Slice>> {
    let g = omega.genus();
    if g != 2 || axis > 1 {
        return Err(Error::Domain("slice families are defined for genus 2".into()));
    }
    let other = 1 - axis;
    let period = omega.entry(other, other);
    let side = (n_slices as f64).sqrt().ceil() as usize;
    (0..n_slices)
        .map(|k| {
            let (i, j) = (k % side, k / side);
            // the small offset keeps the grid off the half-periods
            let a = (i as f64 + 0.5) / side as f64 - 0.5 + 0.0123;
            let b = (j as f64 + 0.5) / side as f64 - 0.5 + 0.0071;
            let mut base = DVector::from_element(2, Complex64::new(0.0, 0.0));
            base[other] = Complex64::new(a, 0.0) + period * b;
            Slice::coordinate(omega, axis, base)
        })
        .collect()
}

/// Union of slice zeros over `n_slices` slices along coordinate `axis`.
pub fn trace_zero_curve_along(delta: &Characteristic, omega: &PeriodMatrix, n_slices: usize, axis: usize, target_err: f64) -> Result<Vec<SlicedZero>> {
    let theta = ThetaFunction::new(delta, omega)?;
    let mut cloud = Vec::new();
    for (k, slice) in slice_family(omega, axis, n_slices)?.iter().enumerate() {
        cloud.extend(slice_zeros_with(&theta, slice, k, target_err)?);
    }
    Ok(cloud)
}

/// Point cloud on the theta divisor from slices `z₂ = const`.
pub fn trace_zero_curve(delta: &Characteristic, omega: &PeriodMatrix, n_slices: usize) -> Result<Vec<SlicedZero>> {
    trace_zero_curve_along(delta, omega, n_slices, 0, DEFAULT_LOCUS_TARGET_ERR)
}

/// Number of connected components of the graph joining cloud points whose
/// distance in `ℂ^g/Λ(Ω)` is at most `threshold`.
pub fn cloud_components(cloud: &[SlicedZero], omega: &PeriodMatrix, threshold: f64) -> Result<usize> {
    let n = cloud.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if omega.torus_norm(&(&cloud[i].z - &cloud[j].z))? <= threshold {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    Ok((0..n).filter(|&i| find(&mut parent, i) == i).count())
}

#[cfg(test)]
mod tests;
