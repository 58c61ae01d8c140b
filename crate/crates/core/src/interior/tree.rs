//! Multiscale witness trees.

use serde::{Deserialize, Serialize};

use super::CertifierParams;
use crate::error::{Error, Result};
use crate::geometry::{Point, Tolerance};
use crate::thick::{witness_with, DiscretizedSet};

/// A tree vertex at depth `k`. Vertices at depths `0..=K` carry `z` with
/// `B(z, α r_k) ⊂ conv(children x)`; depth `K + 1` vertices are leaves holding
/// only their cloud point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeVertex {
    pub depth: usize,
    pub x: Point,
    pub z: Option<Point>,
    pub children: Vec<TreeVertex>,
}

impl TreeVertex {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TreeVertex::size).sum::<usize>()
    }

    /// Preorder walk passing the child-index path from the root.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&[usize], &'a TreeVertex)) {
        let mut path = Vec::new();
        self.walk_inner(&mut path, f);
    }

    fn walk_inner<'a>(
        &'a self,
        path: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize], &'a TreeVertex),
    ) {
        f(path, self);
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            c.walk_inner(path, f);
            path.pop();
        }
    }

    /// Vertices at `depth` with their paths, in preorder.
    pub fn at_depth(&self, depth: usize) -> Vec<(Vec<usize>, &TreeVertex)> {
        let mut out = Vec::new();
        self.walk(&mut |p, v| {
            if v.depth == depth {
                out.push((p.to_vec(), v));
            }
        });
        out
    }
}

/// Builds the tree for one set. The root is the first cloud point; each vertex
/// at depth `k ≤ K` takes its `z` and children from the local witness at
/// `(x, r_k)`. `beta = None` picks the midpoint of `α` and the local ratio.
pub fn build_tree(
    set: &DiscretizedSet,
    params: &CertifierParams,
    r0: f64,
    beta: Option<f64>,
    vertex_cap: usize,
    tol: Tolerance,
) -> Result<TreeVertex> {
    set.cloud.check_dim(params.d)?;
    if !(r0 > 0.0) || r0 > set.diam + tol.eps() {
        return Err(Error::InvalidParameter(format!(
            "r0 = {r0} not in (0, diam = {}]",
            set.diam
        )));
    }
    let finest = params.r(r0, params.depth);
    if set.resolution > finest {
        return Err(Error::ResolutionTooCoarse {
            resolution: set.resolution,
            floor: finest,
        });
    }
    if let Some(b) = beta {
        if !(b > params.alpha) {
            return Err(Error::InvalidParameter(format!(
                "beta {b} must exceed alpha {}",
                params.alpha
            )));
        }
    }
    let mut count = 0usize;
    let root = set.cloud.points()[0].clone();
    grow(set, params, r0, beta, root, 0, &mut count, vertex_cap, tol)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    set: &DiscretizedSet,
    params: &CertifierParams,
    r0: f64,
    beta: Option<f64>,
    x: Point,
    k: usize,
    count: &mut usize,
    cap: usize,
    tol: Tolerance,
) -> Result<TreeVertex> {
    *count += 1;
    if *count > cap {
        return Err(Error::CapExceeded {
            size: *count as u128,
            cap,
        });
    }
    if k > params.depth {
        return Ok(TreeVertex {
            depth: k,
            x,
            z: None,
            children: Vec::new(),
        });
    }
    let w = witness_with(set, &x, params.r(r0, k), params.alpha, beta, tol)?;
    let children = w
        .children
        .points()
        .iter()
        .map(|c| grow(set, params, r0, beta, c.clone(), k + 1, count, cap, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeVertex {
        depth: k,
        x,
        z: Some(w.ball.center),
        children,
    })
}
