use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly_tf::{max_real_part, poly_roots, Polynomial, RationalTF};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootLocusResult {
    pub gains: Vec<f64>,
    /// `branches[i][k]` is branch `k` at `gains[i]`; branch identity is
    /// carried by nearest-neighbour continuation between adjacent gains.
    pub branches: Vec<Vec<Complex64>>,
    /// All poles strictly in the left half plane.
    pub stable_mask: Vec<bool>,
}

impl RootLocusResult {
    pub fn branch_count(&self) -> usize {
        self.branches.first().map_or(0, Vec::len)
    }

    pub fn poles_at(&self, i: usize) -> &[Complex64] {
        &self.branches[i]
    }

    /// Largest real part over the poles at each gain.
    pub fn max_real(&self) -> Vec<f64> {
        self.branches.iter().map(|b| max_real_part(b)).collect()
    }
}

/// Closed-loop poles of `1 + k L(s)` at every gain.
pub fn root_locus(l: &RationalTF, gains: &[f64]) -> Result<RootLocusResult> {
    if !l.is_proper() {
        return Err(Error::Improper { relative_degree: l.relative_degree() });
    }
    if gains.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
        return Err(Error::InvalidArgument("gains must be positive and finite".into()));
    }
    parametric_locus(gains, |k| l.characteristic(k))
}

/// Roots of a characteristic polynomial that depends on a swept parameter,
/// e.g. `alpha` in the position loop. The parameter grid must be ascending
/// and keep the degree constant.
pub fn parametric_locus(
    params: &[f64],
    char_poly: impl Fn(f64) -> Polynomial,
) -> Result<RootLocusResult> {
    if params.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("sweep values must be strictly ascending".into()));
    }
    let mut branches: Vec<Vec<Complex64>> = Vec::with_capacity(params.len());
    for &k in params {
        let p = char_poly(k);
        let roots = poly_roots(&p)?;
        let ordered = match branches.last() {
            None => {
                let mut r = roots;
                r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                r
            }
            Some(prev) => {
                if prev.len() != roots.len() {
                    return Err(Error::InvalidArgument(format!(
                        "pole count changed from {} to {} at parameter {k}",
                        prev.len(),
                        roots.len()
                    )));
                }
                match_branches(prev, &roots)
            }
        };
        branches.push(ordered);
    }
    let stable_mask = branches.iter().map(|b| b.iter().all(|z| z.re < 0.0)).collect();
    Ok(RootLocusResult {
        gains: params.to_vec(),
        branches,
        stable_mask,
    })
}

/// Reorder `next` so that entry `k` continues `prev[k]`.
///
/// Greedy nearest-neighbour first; if two branches claim the same pole the
/// optimal assignment (minimum total displacement) is used instead.
pub(crate) fn match_branches(prev: &[Complex64], next: &[Complex64]) -> Vec<Complex64> {
    let n = prev.len();
    let cost: Vec<Vec<f64>> = prev
        .iter()
        .map(|p| next.iter().map(|q| (p - q).norm()).collect())
        .collect();

    let mut taken = vec![false; n];
    let mut greedy = Vec::with_capacity(n);
    let mut conflict = false;
    for row in &cost {
        let nearest = (0..n).min_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
        let pick = if taken[nearest] {
            conflict = true;
            (0..n)
                .filter(|&j| !taken[j])
                .min_by(|&a, &b| row[a].total_cmp(&row[b]))
                .unwrap()
        } else {
            nearest
        };
        taken[pick] = true;
        greedy.push(pick);
    }
    let assignment = if conflict {
        let optimal = min_cost_assignment(&cost);
        let total = |a: &[usize]| a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>();
        if total(&optimal) < total(&greedy) {
            optimal
        } else {
            greedy
        }
    } else {
        greedy
    };
    assignment.into_iter().map(|j| next[j]).collect()
}

/// Hungarian algorithm on a square cost matrix; returns the column
/// assigned to each row.
fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = f64::INFINITY;
    // 1-based potentials; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=n {
        if row_of_col[j] > 0 {
            out[row_of_col[j] - 1] = j - 1;
        }
    }
    out
}
