//! One-dimensional grids with uniform or geometric grading.
//!
//! Geometric grids never touch the endpoint they grade toward, so integrands
//! with an endpoint singularity stay finite on every node. Uniform grids
//! include both interval endpoints.

use crate::error::{Error, Result};

/// How grid nodes are distributed over the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform,
    /// Node offsets from the start form a geometric sequence with the given
    /// ratio in (0,1); the start endpoint itself is excluded.
    GeometricTowardStart {
        ratio: f64,
    },
    /// Mirror image: nodes cluster at the end, which is excluded.
    GeometricTowardEnd {
        ratio: f64,
    },
    /// Assembled from explicit nodes (piecewise-graded composites).
    Custom,
}

#[derive(Debug, Clone)]
pub struct Grid {
    nodes: Vec<f64>,
    grading: Grading,
}

impl Grid {
    /// Validates strict monotonicity and wraps explicit nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::TooFewNodes {
                min: 2,
                got: nodes.len(),
            });
        }
        for i in 1..nodes.len() {
            if !(nodes[i] > nodes[i - 1]) {
                return Err(Error::NonMonotoneNodes(i));
            }
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadParameter("grid node not finite".into()));
        }
        Ok(Grid {
            nodes,
            grading: Grading::Custom,
        })
    }

    pub fn uniform(start: f64, end: f64, count: usize) -> Result<Self> {
        build_grid((start, end), count, Grading::Uniform)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// New grid with the midpoint of every cell inserted (used for the
    /// Richardson halving step).
    pub fn refined_half(&self) -> Grid {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(*self.nodes.last().unwrap());
        Grid {
            nodes,
            grading: Grading::Custom,
        }
    }

    /// Concatenates grids whose spans abut left-to-right, dropping duplicated
    /// junction nodes.
    pub fn concat(segments: &[Grid]) -> Result<Grid> {
        let mut nodes: Vec<f64> = Vec::new();
        for seg in segments {
            for &x in seg.nodes() {
                match nodes.last() {
                    Some(&last) if x <= last => {
                        if x == last {
                            continue;
                        }
                        return Err(Error::NonMonotoneNodes(nodes.len()));
                    }
                    _ => nodes.push(x),
                }
            }
        }
        Grid::from_nodes(nodes)
    }
}

/// Builds a grid on `interval` with `count` nodes and the requested grading.
///
/// Uniform grids include both endpoints. Geometric grids exclude the graded
/// endpoint: on (a,b) toward the start the nodes are a + (b-a)·ratio^j,
/// so consecutive offsets have the exact ratio.
pub fn build_grid(interval: (f64, f64), count: usize, grading: Grading) -> Result<Grid> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::DegenerateInterval(a, b));
    }
    if count < 2 {
        return Err(Error::TooFewNodes { min: 2, got: count });
    }
    let span = b - a;
    let nodes = match grading {
        Grading::Uniform => {
            let n = count - 1;
            let h = span / n as f64;
            let mut v: Vec<f64> = (0..count).map(|j| a + j as f64 * h).collect();
            v[n] = b;
            v
        }
        Grading::GeometricTowardStart { ratio } => {
            check_ratio(ratio)?;
            // offsets span·ratio^(count-1-j), j = 0..count-1; last node is b
            (0..count)
                .map(|j| a + span * ratio.powi((count - 1 - j) as i32))
                .collect()
        }
        Grading::GeometricTowardEnd { ratio } => {
            check_ratio(ratio)?;
            (0..count)
                .map(|j| b - span * ratio.powi(j as i32))
                .collect()
        }
        Grading::Custom => {
            return Err(Error::BadParameter(
                "build_grid requires a uniform or geometric grading".into(),
            ))
        }
    };
    for i in 1..nodes.len() {
        if !(nodes[i] > nodes[i - 1]) {
            // ratio so close to 1 that adjacent nodes collide in f64
            return Err(Error::NonMonotoneNodes(i));
        }
    }
    Ok(Grid { nodes, grading })
}

fn check_ratio(ratio: f64) -> Result<()> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::BadGradingRatio(ratio));
    }
    Ok(())
}

/// Nodes clustering geometrically at both segment ends, meeting in the
/// middle. The endpoints themselves are included; the first/last offsets
/// shrink down to `floor_frac`·span so endpoint singularities of integrable
/// power type are resolved.
pub fn two_sided_graded(a: f64, b: f64, ratio: f64, floor_frac: f64) -> Result<Grid> {
    check_ratio(ratio)?;
    if !(b > a) {
        return Err(Error::DegenerateInterval(a, b));
    }
    if !(floor_frac > 0.0 && floor_frac < 0.5) {
        return Err(Error::BadParameter(format!(
            "floor_frac must lie in (0, 0.5), got {floor_frac}"
        )));
    }
    let span = b - a;
    let half = 0.5 * span;
    // offsets: half·ratio^k down to floor_frac·span (the midpoint itself is
    // pushed once, so the two sides cannot collide)
    let mut offs = Vec::new();
    let mut off = half * ratio;
    while off > floor_frac * span {
        offs.push(off);
        off *= ratio;
        if offs.len() > 4_000_000 {
            return Err(Error::BadParameter(
                "two_sided_graded: too many nodes".into(),
            ));
        }
    }
    let mut nodes = Vec::with_capacity(2 * offs.len() + 3);
    nodes.push(a);
    for &o in offs.iter().rev() {
        let x = a + o;
        if x > *nodes.last().unwrap() {
            nodes.push(x);
        }
    }
    let mid = a + half;
    if mid > *nodes.last().unwrap() {
        nodes.push(mid);
    }
    for &o in offs.iter() {
        let x = b - o;
        if x > *nodes.last().unwrap() && x < b {
            nodes.push(x);
        }
    }
    nodes.push(b);
    Grid::from_nodes(nodes)
}
