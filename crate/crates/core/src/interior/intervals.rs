//! Finite unions of closed intervals with Minkowski addition, used as an exact
//! one-dimensional oracle for sums of ball unions.

use serde::{Deserialize, Serialize};

use crate::geometry::{PointCloud, Tolerance};

/// Sorted, pairwise disjoint closed intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Union of the given intervals; pieces closer than `join` are merged.
    pub fn new(mut parts: Vec<(f64, f64)>, join: f64) -> Self {
        parts.retain(|&(a, b)| a <= b);
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match out.last_mut() {
                Some(last) if a <= last.1 + join => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalUnion { parts: out }
    }

    /// `∪ [c − h, c + h]` over the given centers.
    pub fn around(centers: impl IntoIterator<Item = f64>, h: f64) -> Self {
        Self::new(centers.into_iter().map(|c| (c - h, c + h)).collect(), 0.0)
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn contains(&self, p: f64, tol: f64) -> bool {
        let i = self.parts.partition_point(|&(_, b)| b + tol < p);
        i < self.parts.len() && self.parts[i].0 - tol <= p
    }

    pub fn minkowski(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut v = Vec::with_capacity(self.parts.len() * other.parts.len());
        for &(a, b) in &self.parts {
            for &(c, d) in &other.parts {
                v.push((a + c, b + d));
            }
        }
        Self::new(v, 0.0)
    }
}

/// Prefix Minkowski sums `U_1, U_1 + U_2, ...` of a sequence of unions.
#[derive(Clone, Debug, PartialEq)]
pub struct MinkowskiChain {
    unions: Vec<IntervalUnion>,
    prefix: Vec<IntervalUnion>,
}

impl MinkowskiChain {
    pub fn new(unions: Vec<IntervalUnion>) -> Self {
        let mut prefix: Vec<IntervalUnion> = Vec::with_capacity(unions.len());
        for u in &unions {
            let next = match prefix.last() {
                Some(last) => last.minkowski(u),
                None => u.clone(),
            };
            prefix.push(next);
        }
        MinkowskiChain { unions, prefix }
    }

    /// The full sum `U_1 + ... + U_n`.
    pub fn total(&self) -> Option<&IntervalUnion> {
        self.prefix.last()
    }

    /// Writes `p = Σ p_i` with `p_i ∈ U_i` (each within `tol`), or `None` when
    /// `p` is not in the sum. Works backwards through the prefix sums.
    pub fn decompose(&self, p: f64, tol: f64) -> Option<Vec<f64>> {
        let n = self.unions.len();
        if n == 0 || !self.prefix[n - 1].contains(p, tol) {
            return None;
        }
        let mut parts = vec![0.0; n];
        let mut rest = p;
        for i in (1..n).rev() {
            // pick t ∈ U_i with rest − t ∈ prefix[i−1]
            let mut pick = None;
            'outer: for &(a, b) in self.unions[i].parts() {
                for &(c, e) in self.prefix[i - 1].parts() {
                    if c + a - tol <= rest && rest <= e + b + tol {
                        let lo = a.max(rest - e);
                        let hi = b.min(rest - c);
                        pick = Some((0.5 * (lo + hi)).clamp(a, b));
                        break 'outer;
                    }
                }
            }
            let t = pick?;
            parts[i] = t;
            rest -= t;
        }
        if !self.unions[0].contains(rest, tol) {
            return None;
        }
        parts[0] = rest;
        Some(parts)
    }
}

/// One-shot form of [`MinkowskiChain::decompose`].
pub fn decompose(unions: &[IntervalUnion], p: f64, tol: f64) -> Option<Vec<f64>> {
    MinkowskiChain::new(unions.to_vec()).decompose(p, tol)
}

/// Evidence that a point lies within `gap` of `A_1 + ... + A_n` on the line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumWitness1d {
    /// Index into each cloud.
    pub indices: Vec<usize>,
    pub sum: f64,
    pub distance: f64,
}

/// Decides `dist(p, A_1 + ... + A_n) ≤ gap` on the line through
/// `dist(p, ΣA_i) ≤ g  ⟺  p ∈ Σ (A_i + [−g/n, g/n])`, and produces explicit cloud
/// points whose sum is within `gap` of `p`.
#[derive(Clone, Debug)]
pub struct GapOracle1d {
    sorted: Vec<Vec<(f64, usize)>>,
    chain: MinkowskiChain,
    gap: f64,
}

impl GapOracle1d {
    pub fn new(clouds: &[&PointCloud], gap: f64) -> Self {
        let h = gap / clouds.len().max(1) as f64;
        let sorted: Vec<Vec<(f64, usize)>> = clouds
            .iter()
            .map(|c| {
                let mut v: Vec<(f64, usize)> = c
                    .points()
                    .iter()
                    .enumerate()
                    .map(|(i, q)| (q.coords()[0], i))
                    .collect();
                v.sort_by(|a, b| a.0.total_cmp(&b.0));
                v
            })
            .collect();
        let unions = sorted
            .iter()
            .map(|v| IntervalUnion::around(v.iter().map(|&(x, _)| x), h))
            .collect();
        GapOracle1d {
            sorted,
            chain: MinkowskiChain::new(unions),
            gap,
        }
    }

    pub fn witness(&self, p: f64, tol: Tolerance) -> Option<SumWitness1d> {
        let parts = self.chain.decompose(p, tol.eps())?;
        let mut indices = Vec::with_capacity(parts.len());
        let mut sum = 0.0;
        for (v, &pi) in self.sorted.iter().zip(&parts) {
            let k = v.partition_point(|&(x, _)| x < pi);
            let best = [k.checked_sub(1), (k < v.len()).then_some(k)]
                .into_iter()
                .flatten()
                .min_by(|&a, &b| (v[a].0 - pi).abs().total_cmp(&(v[b].0 - pi).abs()))?;
            indices.push(v[best].1);
            sum += v[best].0;
        }
        let distance = (p - sum).abs();
        (distance <= self.gap + tol.eps()).then_some(SumWitness1d {
            indices,
            sum,
            distance,
        })
    }
}

/// One-shot form of [`GapOracle1d::witness`].
pub fn sum_within_gap_1d(
    clouds: &[&PointCloud],
    p: f64,
    gap: f64,
    tol: Tolerance,
) -> Option<SumWitness1d> {
    if clouds.is_empty() {
        return None;
    }
    GapOracle1d::new(clouds, gap).witness(p, tol)
}
