//! Sublattices of Zⁿ given by integer row bases.
//!
//! Entries are assumed small enough that intermediate values fit in `i128`.

/// Integer matrix stored as a list of rows.
pub type IntRows = Vec<Vec<i64>>;

/// Canonical row Hermite normal form of the row span.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, zero rows
/// are dropped. Two row bases span the same lattice iff their forms agree.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> IntRows {
    let (h, _) = echelon_with_transform(rows);
    h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect()
}

/// Rank of the row span over Q.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    hermite_normal_form(rows).len()
}

/// Basis (in Hermite normal form) of `{x ∈ Z^ncols : rows · x = 0}`.
pub fn kernel(rows: &[Vec<i64>], ncols: usize) -> IntRows {
    let transposed: IntRows = (0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let (h, u) = echelon_with_transform(&transposed);
    let basis: IntRows = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|&x| x == 0))
        .map(|(_, ur)| ur)
        .collect();
    hermite_normal_form(&basis)
}

/// Smallest saturated sublattice containing the row span: `(span ⊗ Q) ∩ Zⁿ`.
pub fn saturation(rows: &[Vec<i64>], ncols: usize) -> IntRows {
    kernel(&kernel(rows, ncols), ncols)
}

/// Whether the rows are independent and every elementary divisor of their
/// Smith normal form is 1, i.e. the gcd of the maximal minors is 1.
pub fn is_saturated(rows: &[Vec<i64>]) -> bool {
    if rows.is_empty() {
        return true;
    }
    let r = rows.len();
    let n = rows[0].len();
    if r > n {
        return false;
    }
    let mut g: i128 = 0;
    for cols in combinations(n, r) {
        let sub: Vec<Vec<i64>> = rows.iter().map(|row| cols.iter().map(|&j| row[j]).collect()).collect();
        g = gcd(g, determinant(&sub));
        if g == 1 {
            return true;
        }
    }
    false
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All increasing `r`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < n - r + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Row echelon form `H = U·A` with `U` unimodular.
fn echelon_with_transform(rows: &[Vec<i64>]) -> (IntRows, IntRows) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| i128::from(i == j)).collect()).collect();
    let mut p = 0;
    for col in 0..n {
        if p == m {
            break;
        }
        loop {
            let Some(best) = (p..m).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs()) else {
                break;
            };
            a.swap(p, best);
            u.swap(p, best);
            let mut clean = true;
            for i in p + 1..m {
                if a[i][col] != 0 {
                    let q = a[i][col] / a[p][col];
                    sub_row(&mut a, i, p, q);
                    sub_row(&mut u, i, p, q);
                    clean &= a[i][col] == 0;
                }
            }
            if clean {
                break;
            }
        }
        if a[p][col] == 0 {
            continue;
        }
        if a[p][col] < 0 {
            a[p].iter_mut().for_each(|x| *x = -*x);
            u[p].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..p {
            let q = a[i][col].div_euclid(a[p][col]);
            sub_row(&mut a, i, p, q);
            sub_row(&mut u, i, p, q);
        }
        p += 1;
    }
    (narrow(a), narrow(u))
}

fn sub_row(a: &mut [Vec<i128>], target: usize, source: usize, q: i128) {
    if q == 0 {
        return;
    }
    let src = a[source].clone();
    a[target].iter_mut().zip(src).for_each(|(x, s)| *x -= q * s);
}

fn narrow(a: Vec<Vec<i128>>) -> IntRows {
    a.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("lattice entry overflow")).collect())
        .collect()
}
