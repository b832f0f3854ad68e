//! Truncated combinatorial model of the reducible locus in the universal cover.
//!
//! Components `D_j(m,n)` of splitting `β` are 6-cells; two of them meet iff
//! they share `β` and differ in `j`, and then meet in a 4-cell. The nerve
//! has no triangles, so the Mayer–Vietoris spectral sequence has two
//! populated columns and degenerates at E₁.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

pub const MAX_N_BETA: usize = 50;
pub const MAX_RADIUS: usize = 10;

/// Real dimension of a single component.
pub const COMPONENT_DIM: i64 = 6;
/// Real dimension of a pairwise intersection.
pub const PAIR_DIM: i64 = 4;

/// Component `D_kind(m, n)` of splitting `beta`. Ordered lexicographically
/// on `(beta, kind, m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentId {
    pub beta: usize,
    pub kind: u8,
    pub m: i64,
    pub n: i64,
}

impl ComponentId {
    pub fn intersects(&self, other: &ComponentId) -> bool {
        self.beta == other.beta && self.kind != other.kind
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nerve {
    pub n_beta: usize,
    pub radius: usize,
    /// Sorted.
    pub components: Vec<ComponentId>,
    /// Sorted; `first < second` in each pair.
    pub pairs: Vec<(ComponentId, ComponentId)>,
}

/// Component and pair counts predicted by the closed formulas.
pub fn expected_counts(n_beta: usize, radius: usize) -> (usize, usize) {
    let side = (2 * radius + 1).pow(2);
    (n_beta * 2 * side, n_beta * side * side)
}

pub fn build_nerve(n_beta: usize, radius: usize) -> Result<Nerve> {
    if n_beta > MAX_N_BETA || radius > MAX_RADIUS {
        return Err(Error::Resource(format!(
            "nerve with n_beta={n_beta}, radius={radius} exceeds limits n_beta<={MAX_N_BETA}, radius<={MAX_RADIUS}"
        )));
    }
    let r = radius as i64;
    let grid: Vec<(i64, i64)> = (-r..=r).flat_map(|m| (-r..=r).map(move |n| (m, n))).collect();
    let mut components = Vec::with_capacity(expected_counts(n_beta, radius).0);
    for beta in 0..n_beta {
        for kind in [1u8, 2] {
            components.extend(grid.iter().map(|&(m, n)| ComponentId { beta, kind, m, n }));
        }
    }
    let mut pairs = Vec::with_capacity(expected_counts(n_beta, radius).1);
    for beta in 0..n_beta {
        for &(m1, n1) in &grid {
            let first = ComponentId { beta, kind: 1, m: m1, n: n1 };
            pairs.extend(grid.iter().map(|&(m, n)| (first, ComponentId { beta, kind: 2, m, n })));
        }
    }
    Ok(Nerve { n_beta, radius, components, pairs })
}

impl Nerve {
    /// Pairs by exhaustive comparison of all components; quadratic.
    pub fn enumerate_pairs(&self) -> Vec<(ComponentId, ComponentId)> {
        let mut out = Vec::new();
        for (i, a) in self.components.iter().enumerate() {
            for b in &self.components[i + 1..] {
                if a.intersects(b) {
                    out.push((*a, *b));
                }
            }
        }
        out
    }

    /// Number of triangles `{a, b, c}` with all three pairs present.
    pub fn two_simplex_count(&self) -> usize {
        let index: BTreeMap<ComponentId, usize> = self.components.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); self.components.len()];
        for (a, b) in &self.pairs {
            let (i, j) = (index[a], index[b]);
            neighbours[i].push(j);
            neighbours[j].push(i);
        }
        neighbours.iter_mut().for_each(|n| n.sort_unstable());
        let mut count = 0;
        for (a, b) in &self.pairs {
            let (i, j) = (index[a], index[b]);
            let (ni, nj) = (&neighbours[i], &neighbours[j]);
            let (mut p, mut q) = (0, 0);
            while p < ni.len() && q < nj.len() {
                match ni[p].cmp(&nj[q]) {
                    std::cmp::Ordering::Less => p += 1,
                    std::cmp::Ordering::Greater => q += 1,
                    std::cmp::Ordering::Equal => {
                        if ni[p] > j {
                            count += 1;
                        }
                        p += 1;
                        q += 1;
                    }
                }
            }
        }
        count
    }
}

/// Ranks indexed by degree; zero ranks are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedRanks(BTreeMap<i64, usize>);

impl GradedRanks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut g = Self::new();
        for (k, r) in pairs {
            g.add(k, r);
        }
        g
    }

    pub fn add(&mut self, degree: i64, rank: usize) {
        if rank > 0 {
            *self.0.entry(degree).or_default() += rank;
        }
    }

    pub fn get(&self, degree: i64) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn support(&self) -> BTreeSet<i64> {
        self.0.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(&k, &r)| (k, r))
    }
}

/// Populated E₁ entries `(s, t) ↦ rank` of the compactly supported
/// Mayer–Vietoris spectral sequence: column `s` collects the `(s+1)`-fold
/// intersections, each a cell contributing in its own dimension.
pub fn e1_page(nerve: &Nerve) -> BTreeMap<(i64, i64), usize> {
    let mut e1 = BTreeMap::new();
    if !nerve.components.is_empty() {
        e1.insert((0, COMPONENT_DIM), nerve.components.len());
    }
    if !nerve.pairs.is_empty() {
        e1.insert((1, PAIR_DIM), nerve.pairs.len());
    }
    e1
}

/// Whether every differential `d_r : E^{s,t} → E^{s+r, t−r+1}` (r ≥ 1) has
/// zero source or zero target.
pub fn degenerates_at_e1(e1: &BTreeMap<(i64, i64), usize>) -> bool {
    let max_s = e1.keys().map(|k| k.0).max().unwrap_or(0);
    e1.keys().all(|&(s, t)| (1..=max_s - s).all(|r| !e1.contains_key(&(s + r, t - r + 1))))
}

pub fn compute_hc(nerve: &Nerve) -> GradedRanks {
    let e1 = e1_page(nerve);
    debug_assert!(degenerates_at_e1(&e1));
    GradedRanks::from_pairs(e1.iter().map(|(&(s, t), &r)| (s + t, r)))
}

/// Degrees `k` in `[open_from, ambient_dim]` where the Gysin sequence forces
/// `H_k(X) = 0`: the open part vanishes there and `H_c^{m−k}(Y) = 0`.
pub fn gysin_vanishing(hc: &GradedRanks, open_from: i64, ambient_dim: i64) -> BTreeSet<i64> {
    (open_from.max(0)..=ambient_dim).filter(|&k| hc.get(ambient_dim - k) == 0).collect()
}

/// Section classes `s_{β,1}, s_{β,2}` indexed `2β, 2β+1`; both map to the
/// class of `β`. Returns the `n × 2n` matrix of the map.
pub fn section_map(n_beta: usize) -> Vec<Vec<i64>> {
    (0..n_beta).map(|b| (0..2 * n_beta).map(|j| i64::from(j / 2 == b)).collect()).collect()
}

/// Rows `s_{β,1} − s_{β,2}`.
pub fn difference_vectors(n_beta: usize) -> Vec<Vec<i64>> {
    (0..n_beta)
        .map(|b| {
            let mut v = vec![0; 2 * n_beta];
            v[2 * b] = 1;
            v[2 * b + 1] = -1;
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub n_beta: usize,
    pub kernel_rank: usize,
    pub difference_rank: usize,
    pub differences_in_kernel: bool,
    /// Whether the differences span the kernel over Z.
    pub differences_span_kernel: bool,
}

pub fn kernel_report(n_beta: usize) -> KernelReport {
    let map = section_map(n_beta);
    let kernel = lattice::kernel(&map, 2 * n_beta);
    let diffs = difference_vectors(n_beta);
    let differences_in_kernel = diffs.iter().all(|d| map.iter().all(|row| row.iter().zip(d).map(|(a, b)| a * b).sum::<i64>() == 0));
    KernelReport {
        n_beta,
        kernel_rank: kernel.len(),
        difference_rank: lattice::rank(&diffs),
        differences_in_kernel,
        differences_span_kernel: lattice::hermite_normal_form(&diffs) == kernel,
    }
}

pub fn kernel_rank(n_beta: usize) -> usize {
    kernel_report(n_beta).kernel_rank
}
