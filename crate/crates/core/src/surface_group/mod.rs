//! Words in the genus-2 surface group `⟨a₁,b₁,a₂,b₂ | [a₁,b₁][a₂,b₂]⟩`.
//!
//! Conventions: `[x,y] = x y x⁻¹ y⁻¹` and `x^g = g⁻¹ x g`. Words print over
//! `A B C D` for `a₁ b₁ a₂ b₂` and lowercase for their inverses.

mod splitting;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use splitting::{
    figure2_rows, figure2_verify, intersection_form, splitting_from_scc, splittings_equal, symplectic_complement,
    Figure2Report, Figure2Row, Figure2RowReport, HomologySplitting,
};

const GENERATOR_CHARS: [char; 4] = ['A', 'B', 'C', 'D'];

/// A generator or its inverse. `index` runs over `a₁, b₁, a₂, b₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: u8,
    inverse: bool,
}

impl Letter {
    pub fn new(index: u8, inverse: bool) -> Result<Self> {
        if index >= 4 {
            return Err(Error::Domain(format!("generator index {index} out of range")));
        }
        Ok(Self { index, inverse })
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inv(self) -> Self {
        Self { index: self.index, inverse: !self.inverse }
    }

    pub fn to_char(self) -> char {
        let c = GENERATOR_CHARS[self.index as usize];
        if self.inverse {
            c.to_ascii_lowercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        let upper = c.to_ascii_uppercase();
        let index = GENERATOR_CHARS
            .iter()
            .position(|&g| g == upper)
            .ok_or_else(|| Error::Domain(format!("invalid letter {c:?}; expected one of AaBbCcDd")))?;
        Ok(Self { index: index as u8, inverse: c.is_ascii_lowercase() })
    }
}

/// Integer class in `H₁(S₂, Z)` with coordinates in the basis `(ā₁, b̄₁, ā₂, b̄₂)`.
pub type HomologyClass = [i64; 4];

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SurfaceWord(Vec<Letter>);

impl SurfaceWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn generator(index: u8) -> Self {
        Self(vec![Letter { index: index % 4, inverse: false }])
    }

    pub fn a1() -> Self {
        Self::generator(0)
    }

    pub fn b1() -> Self {
        Self::generator(1)
    }

    pub fn a2() -> Self {
        Self::generator(2)
    }

    pub fn b2() -> Self {
        Self::generator(3)
    }

    /// The defining relator `[a₁,b₁][a₂,b₂]`.
    pub fn relator() -> Self {
        commutator(&Self::a1(), &Self::b1()).mul(&commutator(&Self::a2(), &Self::b2()))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Self) -> Self {
        g.inverse().mul(self).mul(g)
    }

    /// Signed letter counts per generator.
    pub fn abelianize(&self) -> HomologyClass {
        let mut h = [0i64; 4];
        for l in &self.0 {
            h[l.index()] += if l.inverse { -1 } else { 1 };
        }
        h
    }

    /// Uniform random letter sequence of length `0..=max_len`, freely reduced.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Self {
        let len = rng.gen_range(0..=max_len);
        Self::new((0..len).map(|_| Letter { index: rng.gen_range(0..4), inverse: rng.gen_bool(0.5) }))
    }
}

impl fmt::Display for SurfaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|l| write!(f, "{}", l.to_char()))
    }
}

impl FromStr for SurfaceWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s.chars().filter(|c| !c.is_whitespace()).map(Letter::from_char).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(letters))
    }
}

impl Serialize for SurfaceWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SurfaceWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Freely reduces a letter sequence.
pub fn free_reduce(letters: &[Letter]) -> SurfaceWord {
    SurfaceWord::new(letters.iter().copied())
}

/// `[x,y] = x y x⁻¹ y⁻¹`, freely reduced.
pub fn commutator(x: &SurfaceWord, y: &SurfaceWord) -> SurfaceWord {
    x.mul(y).mul(&x.inverse()).mul(&y.inverse())
}

/// `[x,yz] = [x,y]·[x,z]^{y⁻¹}` and `[xy,z] = [y,z]^{x⁻¹}·[x,z]`, both checked
/// by free reduction.
pub fn hall_witt_check(x: &SurfaceWord, y: &SurfaceWord, z: &SurfaceWord) -> bool {
    let first = commutator(x, &y.mul(z)) == commutator(x, y).mul(&commutator(x, z).conjugate(&y.inverse()));
    let second = commutator(&x.mul(y), z) == commutator(y, z).conjugate(&x.inverse()).mul(&commutator(x, z));
    first && second
}

/// Both sides of the commutator relation among the four tabulated curves:
/// `[a₁,b₁a₂] = [a₁,b₁]·[b₁⁻¹,a₂a₁]^{b₁⁻¹a₁⁻¹b₁⁻¹}·[a₁b₁,a₂a₁]^{b₁⁻¹}`.
pub fn lemma34_sides() -> (SurfaceWord, SurfaceWord) {
    let (a1, b1, a2) = (SurfaceWord::a1(), SurfaceWord::b1(), SurfaceWord::a2());
    let b1i = b1.inverse();
    let lhs = commutator(&a1, &b1.mul(&a2));
    let g = b1i.mul(&a1.inverse()).mul(&b1i);
    let rhs = commutator(&a1, &b1)
        .mul(&commutator(&b1i, &a2.mul(&a1)).conjugate(&g))
        .mul(&commutator(&a1.mul(&b1), &a2.mul(&a1)).conjugate(&b1i));
    (lhs, rhs)
}

/// Whether the four-curve relation holds in the free group.
pub fn lemma34_identity() -> bool {
    let (lhs, rhs) = lemma34_sides();
    lhs == rhs
}

/// Hall–Witt expansion of the left side: `[a₁,b₁a₂] = [a₁,b₁]·[a₁,a₂]^{b₁⁻¹}`.
pub fn lemma34_expansion_step() -> bool {
    let (a1, b1, a2) = (SurfaceWord::a1(), SurfaceWord::b1(), SurfaceWord::a2());
    commutator(&a1, &b1.mul(&a2)) == commutator(&a1, &b1).mul(&commutator(&a1, &a2).conjugate(&b1.inverse()))
}

/// Absorption `[x,y] = [x,yx]` applied to the second factor: `[a₁,a₂] = [a₁,a₂a₁]`.
pub fn lemma34_absorption_step() -> bool {
    let (a1, a2) = (SurfaceWord::a1(), SurfaceWord::a2());
    commutator(&a1, &a2) == commutator(&a1, &a2.mul(&a1))
}

/// All cyclic permutations of the relator and of its inverse.
fn symmetrized_relators() -> Vec<Vec<Letter>> {
    let r = SurfaceWord::relator();
    let mut out = Vec::with_capacity(16);
    for base in [r.0.clone(), r.inverse().0] {
        for k in 0..base.len() {
            out.push(base[k..].iter().chain(&base[..k]).copied().collect());
        }
    }
    out
}

/// Dehn's algorithm: repeatedly replaces a subword covering at least 5 of
/// the 8 letters of a symmetrized relator by the inverse of the remainder.
/// Trivial iff the word empties.
pub fn dehn_reduce(w: &SurfaceWord) -> SurfaceWord {
    let relators = symmetrized_relators();
    let mut cur = w.clone();
    'outer: loop {
        for i in 0..cur.len() {
            for r in &relators {
                let common = cur.0[i..].iter().zip(r).take_while(|(a, b)| a == b).count();
                if 2 * common > r.len() {
                    let replacement = r[common..].iter().rev().map(|l| l.inv());
                    let letters: Vec<Letter> =
                        cur.0[..i].iter().copied().chain(replacement).chain(cur.0[i + common..].iter().copied()).collect();
                    cur = SurfaceWord::new(letters);
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

pub fn dehn_is_trivial(w: &SurfaceWord) -> bool {
    dehn_reduce(w).is_empty()
}

#[cfg(test)]
mod tests;
