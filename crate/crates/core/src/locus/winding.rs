//! Argument-principle helpers for holomorphic functions of one variable.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest argument increment accepted between neighbouring samples.
const MAX_ARG_STEP: f64 = 0.5;
const MAX_EDGE_DEPTH: u32 = 16;

/// Outcome of tracking `arg f` around a closed polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Winding {
    Count(i64),
    /// Some sample came within the floor of a zero.
    HitZero,
}

/// Counts zeros inside a polygon by continuous tracking of `arg f` along its
/// edges. Each edge is bisected until pieces are no longer than `max_seg`
/// and consecutive samples differ in argument by less than half a radian.
pub fn polygon_winding<F>(f: &F, vertices: &[Complex64], floor: f64, max_seg: f64) -> Result<Winding>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let values = vertices.iter().map(|&v| f(v)).collect::<Result<Vec<_>>>()?;
    if values.iter().any(|v| v.norm() <= floor) {
        return Ok(Winding::HitZero);
    }
    let mut total = 0.0;
    let n = vertices.len();
    for i in 0..n {
        let j = (i + 1) % n;
        match edge_change(f, vertices[i], values[i], vertices[j], values[j], MAX_EDGE_DEPTH, floor, max_seg)? {
            Some(d) => total += d,
            None => return Ok(Winding::HitZero),
        }
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(Error::IllConditionedSlice(format!("non-integral boundary winding {turns}")));
    }
    Ok(Winding::Count(rounded as i64))
}

#[allow(clippy::too_many_arguments)]
fn edge_change<F>(f: &F, a: Complex64, fa: Complex64, b: Complex64, fb: Complex64, depth: u32, floor: f64, max_seg: f64) -> Result<Option<f64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let d = (fb / fa).arg();
    if d.abs() < MAX_ARG_STEP && (b - a).norm() <= max_seg {
        return Ok(Some(d));
    }
    if depth == 0 {
        return Err(Error::IllConditionedSlice("argument varies too fast along an edge".into()));
    }
    let mid = (a + b) * 0.5;
    let fm = f(mid)?;
    if fm.norm() <= floor {
        return Ok(None);
    }
    let Some(left) = edge_change(f, a, fa, mid, fm, depth - 1, floor, max_seg)? else {
        return Ok(None);
    };
    let Some(right) = edge_change(f, mid, fm, b, fb, depth - 1, floor, max_seg)? else {
        return Ok(None);
    };
    Ok(Some(left + right))
}

/// Trapezoidal approximation of `(1/2πi)∮ f′/f` over the circle of the given
/// radius; `f_and_df` returns `(f, f′)`.
pub fn circle_index<F>(f_and_df: &F, centre: Complex64, radius: f64, samples: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..samples {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64);
        let (v, dv) = f_and_df(centre + e * radius)?;
        if v.norm() == 0.0 {
            return Err(Error::IllConditionedSlice("zero on the multiplicity circle".into()));
        }
        acc += e * radius * dv / v;
    }
    Ok(acc / samples as f64)
}
