//! Theta characteristics as pairs of bit vectors over F₂.
//!
//! A characteristic `δ = (δ′, δ″) ∈ ½Z^{2g}/Z^{2g}` is stored as two bit
//! vectors; bit `1` stands for the coordinate `½`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCharacteristic", into = "RawCharacteristic")]
pub struct Characteristic {
    dp: Vec<u8>,
    dpp: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawCharacteristic {
    g: usize,
    dp: Vec<u8>,
    dpp: Vec<u8>,
}

impl TryFrom<RawCharacteristic> for Characteristic {
    type Error = Error;

    fn try_from(raw: RawCharacteristic) -> Result<Self> {
        if raw.dp.len() != raw.g || raw.dpp.len() != raw.g {
            return Err(Error::Domain(format!(
                "characteristic bit vectors must have length g = {}",
                raw.g
            )));
        }
        Characteristic::new(raw.dp, raw.dpp)
    }
}

impl From<Characteristic> for RawCharacteristic {
    fn from(c: Characteristic) -> Self {
        RawCharacteristic { g: c.genus(), dp: c.dp, dpp: c.dpp }
    }
}

impl Characteristic {
    pub fn new(dp: Vec<u8>, dpp: Vec<u8>) -> Result<Self> {
        if dp.is_empty() || dp.len() != dpp.len() {
            return Err(Error::Domain(format!(
                "characteristic halves must have equal positive length, got {} and {}",
                dp.len(),
                dpp.len()
            )));
        }
        if dp.iter().chain(dpp.iter()).any(|&b| b > 1) {
            return Err(Error::Domain("characteristic bits must be 0 or 1".into()));
        }
        Ok(Characteristic { dp, dpp })
    }

    pub fn zero(g: usize) -> Self {
        Characteristic { dp: vec![0; g], dpp: vec![0; g] }
    }

    /// The characteristic with every coordinate equal to ½.
    pub fn all_halves(g: usize) -> Self {
        Characteristic { dp: vec![1; g], dpp: vec![1; g] }
    }

    pub fn genus(&self) -> usize {
        self.dp.len()
    }

    pub fn delta_prime(&self) -> &[u8] {
        &self.dp
    }

    pub fn delta_dprime(&self) -> &[u8] {
        &self.dpp
    }

    /// Real vector `δ′` with entries in `{0, ½}`.
    pub fn eps_prime(&self) -> DVector<f64> {
        DVector::from_iterator(self.genus(), self.dp.iter().map(|&b| 0.5 * b as f64))
    }

    /// Real vector `δ″` with entries in `{0, ½}`.
    pub fn eps_dprime(&self) -> DVector<f64> {
        DVector::from_iterator(self.genus(), self.dpp.iter().map(|&b| 0.5 * b as f64))
    }

    pub fn parity(&self) -> Parity {
        let dot = self
            .dp
            .iter()
            .zip(&self.dpp)
            .fold(0u8, |acc, (a, b)| acc ^ (a & b));
        if dot == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn direct_sum(&self, other: &Characteristic) -> Characteristic {
        let mut dp = self.dp.clone();
        dp.extend_from_slice(&other.dp);
        let mut dpp = self.dpp.clone();
        dpp.extend_from_slice(&other.dpp);
        Characteristic { dp, dpp }
    }

    /// Splits into blocks of genus `g1` and `genus - g1`.
    pub fn split(&self, g1: usize) -> Result<(Characteristic, Characteristic)> {
        let g = self.genus();
        if g1 == 0 || g1 >= g {
            return Err(Error::Domain(format!(
                "split point {g1} must satisfy 0 < g1 < {g}"
            )));
        }
        let first = Characteristic { dp: self.dp[..g1].to_vec(), dpp: self.dpp[..g1].to_vec() };
        let second = Characteristic { dp: self.dp[g1..].to_vec(), dpp: self.dpp[g1..].to_vec() };
        Ok((first, second))
    }

    /// The point `ε′ + ε″Ω` of `ℂ^g`, with `ε′ = δ′/2`, `ε″ = δ″/2` and `z`
    /// treated as a row vector.
    pub fn half_period(&self, omega: &DMatrix<Complex64>) -> Result<DVector<Complex64>> {
        let g = self.genus();
        if omega.nrows() != g || omega.ncols() != g {
            return Err(Error::Domain(format!(
                "characteristic genus {g} does not match {}x{} period matrix",
                omega.nrows(),
                omega.ncols()
            )));
        }
        let ep = self.eps_prime();
        let epp = self.eps_dprime();
        Ok(DVector::from_fn(g, |k, _| {
            let shift: Complex64 = (0..g).map(|j| omega[(j, k)] * epp[j]).sum();
            Complex64::new(ep[k], 0.0) + shift
        }))
    }

    /// Bit string `δ′ δ″` used for lexicographic enumeration order.
    fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        self.dp.iter().chain(self.dpp.iter()).copied()
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits().map(|b| if b == 1 { '1' } else { '0' }).collect();
        let (a, b) = s.split_at(self.genus());
        write!(f, "[{a}|{b}]")
    }
}

pub const MAX_ENUMERATION_GENUS: usize = 4;

/// All `2^{2g}` characteristics, lexicographic in the bit string `δ′δ″`.
pub fn enumerate(g: usize) -> Result<Vec<Characteristic>> {
    if g == 0 || g > MAX_ENUMERATION_GENUS {
        return Err(Error::Domain(format!(
            "enumeration supports 1 <= g <= {MAX_ENUMERATION_GENUS}, got {g}"
        )));
    }
    let n = 2 * g;
    Ok((0u32..(1 << n))
        .map(|code| {
            let bit = |i: usize| ((code >> (n - 1 - i)) & 1) as u8;
            Characteristic { dp: (0..g).map(bit).collect(), dpp: (g..n).map(bit).collect() }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(dp: &[u8], dpp: &[u8]) -> Characteristic {
        Characteristic::new(dp.to_vec(), dpp.to_vec()).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert_eq!(ch(&[0, 0], &[0, 0]).parity(), Parity::Even);
        assert_eq!(ch(&[1, 1], &[1, 1]).parity(), Parity::Even);
        assert_eq!(ch(&[1], &[1]).parity(), Parity::Odd);
    }

    #[test]
    fn direct_sum_examples() {
        let h = ch(&[1], &[1]);
        assert_eq!(h.direct_sum(&h), ch(&[1, 1], &[1, 1]));
        assert_eq!(Characteristic::zero(1).direct_sum(&Characteristic::zero(1)), Characteristic::zero(2));
        let a = ch(&[1], &[0]);
        let b = ch(&[0], &[1]);
        assert_eq!(a.direct_sum(&b), ch(&[1, 0], &[0, 1]));
    }

    #[test]
    fn split_examples_and_errors() {
        let (x, y) = Characteristic::all_halves(2).split(1).unwrap();
        assert_eq!(x, ch(&[1], &[1]));
        assert_eq!(y, ch(&[1], &[1]));
        let (x, y) = Characteristic::zero(2).split(1).unwrap();
        assert_eq!((x, y), (Characteristic::zero(1), Characteristic::zero(1)));
        assert!(matches!(Characteristic::zero(2).split(0), Err(Error::Domain(_))));
        assert!(matches!(Characteristic::zero(2).split(2), Err(Error::Domain(_))));
    }

    #[test]
    fn split_inverts_direct_sum_on_all_pairs() {
        let ones = enumerate(1).unwrap();
        for x in &ones {
            for y in &ones {
                let s = x.direct_sum(y);
                assert_eq!(s.split(1).unwrap(), (x.clone(), y.clone()));
                // F₂ dot product is additive over blocks
                let expect = if x.parity() == y.parity() { Parity::Even } else { Parity::Odd };
                assert_eq!(s.parity(), expect);
            }
        }
        for c in enumerate(2).unwrap() {
            let (x, y) = c.split(1).unwrap();
            assert_eq!(x.direct_sum(&y), c);
        }
    }

    #[test]
    fn enumeration_census() {
        assert_eq!(enumerate(1).unwrap().len(), 4);
        let all = enumerate(2).unwrap();
        assert_eq!(all.len(), 16);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 16);
        // brute-force census computed independently of `parity`
        let odd = all
            .iter()
            .filter(|c| (c.dp[0] * c.dpp[0] + c.dp[1] * c.dpp[1]) % 2 == 1)
            .count();
        assert_eq!(odd, 6);
        assert_eq!(all.iter().filter(|c| c.parity() == Parity::Even).count(), 10);
        assert_eq!(all[0], Characteristic::zero(2));
        assert_eq!(all[1], ch(&[0, 0], &[0, 1]));
        assert_eq!(all[15], Characteristic::all_halves(2));
        assert!(enumerate(0).is_err());
        assert!(enumerate(5).is_err());
    }

    #[test]
    fn half_period_examples() {
        let omega = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0)],
        );
        let zero = Characteristic::zero(2).half_period(&omega).unwrap();
        assert!(zero.iter().all(|c| c.norm() == 0.0));

        let tau = DMatrix::from_element(1, 1, Complex64::new(0.3, 1.7));
        let p = ch(&[1], &[0]).half_period(&tau).unwrap();
        assert_eq!(p[0], Complex64::new(0.5, 0.0));

        let p = Characteristic::all_halves(2).half_period(&omega).unwrap();
        assert!((p[0] - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!((p[1] - Complex64::new(0.5, 1.0)).norm() < 1e-15);

        assert!(matches!(Characteristic::zero(1).half_period(&omega), Err(Error::Domain(_))));
    }

    #[test]
    fn doubled_half_period_is_a_lattice_vector() {
        let omega = DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.2, 1.1), Complex64::new(0.1, 0.3), Complex64::new(0.1, 0.3), Complex64::new(-0.4, 0.9)],
        );
        for c in enumerate(2).unwrap() {
            let p = c.half_period(&omega).unwrap() * Complex64::new(2.0, 0.0);
            // 2(ε′ + ε″Ω) = δ′ + δ″Ω with δ′, δ″ integral
            let mut expect = DVector::from_iterator(2, c.dp.iter().map(|&b| Complex64::new(b as f64, 0.0)));
            for k in 0..2 {
                for j in 0..2 {
                    expect[k] += omega[(j, k)] * c.dpp[j] as f64;
                }
            }
            assert!((p - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn json_shape() {
        let c = ch(&[1, 0], &[0, 1]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"g":2,"dp":[1,0],"dpp":[0,1]}"#);
        let back: Characteristic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Characteristic>(r#"{"g":2,"dp":[1],"dpp":[0,1]}"#).is_err());
        assert!(serde_json::from_str::<Characteristic>(r#"{"g":1,"dp":[2],"dpp":[0]}"#).is_err());
    }
}
