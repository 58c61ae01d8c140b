//! Conic Carathéodory reduction: rewrite a nonnegative combination of vectors in
//! `R^m` with at most `m` terms and the same value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{linalg, norm, Point, Tolerance};

/// Pivot threshold used for the dependence search, relative to the largest entry.
pub(crate) const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicTerm {
    pub coeff: f64,
    pub point: Point,
}

/// `Σ coeff_j point_j` with nonnegative coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicCombination {
    pub dim: usize,
    pub terms: Vec<ConicTerm>,
}

impl ConicCombination {
    pub fn new(dim: usize, terms: Vec<(f64, Point)>) -> Result<Self> {
        for (c, p) in &terms {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !c.is_finite() {
                return Err(Error::NonFinite(format!("coefficient {c}")));
            }
            if *c < 0.0 {
                return Err(Error::InvalidCombination(format!(
                    "negative coefficient {c}"
                )));
            }
        }
        Ok(ConicCombination {
            dim,
            terms: terms
                .into_iter()
                .map(|(coeff, point)| ConicTerm { coeff, point })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> Point {
        let mut v = vec![0.0; self.dim];
        for t in &self.terms {
            for (a, b) in v.iter_mut().zip(t.point.coords()) {
                *a += t.coeff * b;
            }
        }
        Point::from_vec(v)
    }

    pub fn coeff_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff).sum()
    }
}

/// Reduces `comb` to at most `m` terms with strictly positive coefficients.
///
/// Repeatedly finds a dependence `Σ a_j s_j = 0` among the current support
/// (first free column of the row-reduced matrix), moves along it by
/// `t = min_{a_j > 0} λ_j / a_j` (lowest index on ties) and drops the zeroed
/// terms. A final least-squares polish on the surviving support is kept only
/// if it leaves every coefficient positive.
pub fn conic_reduce(comb: &ConicCombination, m: usize, tol: Tolerance) -> Result<ConicCombination> {
    if comb.dim != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: comb.dim,
        });
    }
    for t in &comb.terms {
        t.point.check_dim(m)?;
        if t.coeff < 0.0 {
            return Err(Error::InvalidCombination(format!(
                "negative coefficient {}",
                t.coeff
            )));
        }
    }
    let vectors: Vec<&[f64]> = comb.terms.iter().map(|t| t.point.coords()).collect();
    let weights: Vec<f64> = comb.terms.iter().map(|t| t.coeff).collect();
    let reduced = reduce_weights(&vectors, &weights, m, tol);
    let terms = reduced
        .iter()
        .zip(&comb.terms)
        .filter(|(w, _)| **w > 0.0)
        .map(|(&w, t)| ConicTerm {
            coeff: w,
            point: t.point.clone(),
        })
        .collect();
    Ok(ConicCombination { dim: m, terms })
}

/// Core of [`conic_reduce`] on raw slices. Returns weights aligned with the
/// input; at most `m` entries are positive, the rest are exactly zero.
pub(crate) fn reduce_weights(
    vectors: &[&[f64]],
    weights: &[f64],
    m: usize,
    tol: Tolerance,
) -> Vec<f64> {
    let target = combine(vectors, weights, m);
    if norm(&target) <= tol.eps() {
        return vec![0.0; weights.len()];
    }
    let mut w: Vec<f64> = weights.iter().map(|&x| x.max(0.0)).collect();
    loop {
        let support: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0.0).collect();
        let cols: Vec<&[f64]> = support.iter().map(|&j| vectors[j]).collect();
        let Some(mut a) = linalg::null_vector(&cols, PIVOT_TOL) else {
            break;
        };
        if !a.iter().any(|&x| x > PIVOT_TOL) {
            a.iter_mut().for_each(|x| *x = -*x);
        }
        let mut arg = usize::MAX;
        let mut t = f64::INFINITY;
        for (k, &ak) in a.iter().enumerate() {
            if ak > PIVOT_TOL {
                let ratio = w[support[k]] / ak;
                if ratio < t {
                    t = ratio;
                    arg = k;
                }
            }
        }
        for (k, &ak) in a.iter().enumerate() {
            let j = support[k];
            w[j] -= t * ak;
            if w[j] <= 0.0 {
                w[j] = 0.0;
            }
        }
        w[support[arg]] = 0.0;
    }
    polish(vectors, &mut w, &target, m);
    w
}

fn polish(vectors: &[&[f64]], w: &mut [f64], target: &[f64], m: usize) {
    let support: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0.0).collect();
    if support.is_empty() {
        return;
    }
    let cols: Vec<&[f64]> = support.iter().map(|&j| vectors[j]).collect();
    let Some(sol) = linalg::least_squares(&cols, target, PIVOT_TOL) else {
        return;
    };
    if sol.iter().any(|&x| !(x > 0.0)) {
        return;
    }
    let before = residual(vectors, w, target, m);
    let mut trial = w.to_vec();
    for (&j, &x) in support.iter().zip(&sol) {
        trial[j] = x;
    }
    if residual(vectors, &trial, target, m) <= before {
        w.copy_from_slice(&trial);
    }
}

fn combine(vectors: &[&[f64]], weights: &[f64], m: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    for (s, &l) in vectors.iter().zip(weights) {
        if l != 0.0 {
            for (a, b) in v.iter_mut().zip(s.iter()) {
                *a += l * b;
            }
        }
    }
    v
}

fn residual(vectors: &[&[f64]], weights: &[f64], target: &[f64], m: usize) -> f64 {
    let v = combine(vectors, weights, m);
    crate::geometry::distance(&v, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_value_gives_empty() {
        let c = ConicCombination::new(
            2,
            vec![
                (1.0, p(&[1.0, 0.0])),
                (1.0, p(&[-1.0, 0.0])),
                (2.0, p(&[0.0, 0.0])),
            ],
        )
        .unwrap();
        assert!(conic_reduce(&c, 2, Tolerance::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn three_terms_in_plane() {
        let c = ConicCombination::new(
            2,
            vec![
                (1.0, p(&[1.0, 0.0])),
                (1.0, p(&[0.0, 1.0])),
                (1.0, p(&[1.0, 1.0])),
            ],
        )
        .unwrap();
        let r = conic_reduce(&c, 2, Tolerance::default()).unwrap();
        assert!(r.len() <= 2);
        assert!(r.terms.iter().all(|t| t.coeff > 0.0));
        assert!(r.value().distance(&p(&[2.0, 2.0])) < 1e-12);
    }

    #[test]
    fn short_combination_unchanged() {
        let c = ConicCombination::new(2, vec![(3.0, p(&[1.0, 1.0]))]).unwrap();
        assert_eq!(conic_reduce(&c, 2, Tolerance::default()).unwrap(), c);
    }

    #[test]
    fn rejects_negative_and_mismatch() {
        assert!(ConicCombination::new(1, vec![(-1.0, p(&[1.0]))]).is_err());
        assert!(ConicCombination::new(1, vec![(1.0, p(&[1.0, 2.0]))]).is_err());
        let c = ConicCombination::new(1, vec![(1.0, p(&[1.0]))]).unwrap();
        assert!(matches!(
            conic_reduce(&c, 2, Tolerance::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
