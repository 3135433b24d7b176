use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::ShiftOp;
use crate::linalg::Echelon;
use crate::{Poly, Scalar};

pub const DEFAULT_MAX_DEPTH: usize = 8;
pub const DEFAULT_MAX_DIM: usize = 64;

/// Result of a bracket-closure search.
#[derive(Clone, Debug)]
pub struct LieBasis<T> {
    pub elements: Vec<ShiftOp<T>>,
    /// Last bracket generation computed (generators are generation 0).
    pub depth_reached: usize,
    /// A full generation produced nothing outside the span.
    pub stabilized: bool,
    pub dim: usize,
}

impl<T: Scalar> LieBasis<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "stabilized": self.stabilized,
            "depth_reached": self.depth_reached,
            "elements": self.elements.iter().map(|e| e.dump()).collect::<Vec<_>>(),
        })
    }
}

/// Sampling frame for the evaluation-rank independence test.
///
/// Operators are flattened to `t_d(n)` for `d` in `shifts` and `n` in
/// `points`. Any nonzero combination of the framed operators has some
/// component that is a nonzero rational function with numerator degree at
/// most `degree_bound`, so it cannot vanish on more than `degree_bound`
/// points; `points.len() > degree_bound` makes the rank exact.
struct Frame<T> {
    shifts: Vec<i64>,
    points: Vec<T>,
    start: i64,
    degree_bound: usize,
    echelon: Echelon<T>,
}

fn lcm<T: Scalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let g = Poly::gcd(a, b);
    let (q, _) = (a * b).div_rem(&g).expect("gcd of nonzero polynomials is nonzero");
    q.monic()
}

/// Numerator degree bound of any combination of the given operators.
fn degree_bound<'a, T: Scalar>(ops: impl IntoIterator<Item = &'a ShiftOp<T>>) -> usize {
    let ops: Vec<&ShiftOp<T>> = ops.into_iter().collect();
    let shifts: BTreeSet<i64> = ops.iter().flat_map(|o| o.components().keys().copied()).collect();
    let mut best = 0;
    for d in shifts {
        let mut den = Poly::one();
        let mut excess = 0usize;
        for c in ops.iter().filter_map(|o| o.component(d)) {
            den = lcm(&den, c.den());
            let dn = c.num().degree().unwrap_or(0);
            let dd = c.den().degree().unwrap_or(0);
            excess = excess.max(dn.saturating_sub(dd));
        }
        best = best.max(excess + den.degree().unwrap_or(0));
    }
    best
}

impl<T: Scalar> Frame<T> {
    /// Smallest frame exact for `ops`, with all of them sampleable.
    fn build(ops: &[&ShiftOp<T>]) -> Self {
        let shifts: Vec<i64> = ops
            .iter()
            .flat_map(|o| o.components().keys().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let start = ops.iter().map(|o| o.interior_from()).max().unwrap_or(0).max(0);
        let bound = degree_bound(ops.iter().copied());
        let bandwidth = ops.iter().map(|o| o.bandwidth()).max().unwrap_or(0) as usize;
        let max_deg = ops.iter().map(|o| o.max_height()).max().unwrap_or(0);
        let wanted = (bound + 1).max(ops.len() + bandwidth + max_deg + 4);
        let mut points = Vec::with_capacity(wanted);
        let mut n = start;
        while points.len() < wanted {
            let p = T::from_int(n);
            // Skip points where some coefficient has a pole.
            if ops.iter().all(|o| o.components().values().all(|c| c.eval(&p).is_ok())) {
                points.push(p);
            }
            n += 1;
        }
        let width = shifts.len() * points.len();
        let mut frame = Frame {
            shifts,
            points,
            start,
            degree_bound: bound,
            echelon: Echelon::new(width),
        };
        for op in ops {
            let v = frame.vector(op).expect("frame points avoid poles");
            frame.echelon.insert(&v);
        }
        frame
    }

    fn vector(&self, op: &ShiftOp<T>) -> Option<Vec<T>> {
        op.sample(&self.shifts, &self.points).ok()
    }

    /// Whether the frame is still exact once `op` joins `basis`.
    fn covers(&self, basis: &[ShiftOp<T>], op: &ShiftOp<T>) -> bool {
        op.interior_from() <= self.start
            && op.components().keys().all(|d| self.shifts.binary_search(d).is_ok())
            && degree_bound(basis.iter().chain(std::iter::once(op))) <= self.degree_bound
    }
}

/// Tries to add `op` to the basis; returns whether it was independent.
fn try_insert<T: Scalar>(basis: &mut Vec<ShiftOp<T>>, frame: &mut Option<Frame<T>>, op: ShiftOp<T>) -> bool {
    if op.is_zero() {
        return false;
    }
    let reuse = frame.as_ref().and_then(|f| {
        if f.covers(basis, &op) {
            f.vector(&op)
        } else {
            None
        }
    });
    match reuse {
        Some(v) => {
            let inserted = frame.as_mut().unwrap().echelon.insert(&v);
            if inserted {
                basis.push(op);
            }
            inserted
        }
        None => {
            let mut all: Vec<&ShiftOp<T>> = basis.iter().collect();
            all.push(&op);
            let f = Frame::build(&all);
            let inserted = f.echelon.rank() == all.len();
            if inserted {
                basis.push(op);
                *frame = Some(f);
            } else {
                // Keep a frame over the basis alone so later tests stay exact.
                let all: Vec<&ShiftOp<T>> = basis.iter().collect();
                *frame = Some(Frame::build(&all));
            }
            inserted
        }
    }
}

/// Breadth-first bracket closure of `gens`.
///
/// Generation `k + 1` brackets every element found in generation `k` with
/// every basis element, in a fixed order; brackets of one generation are
/// computed in parallel and inserted sequentially. The search stops when a
/// generation adds nothing (stabilized), when the basis exceeds `max_dim`,
/// or after `max_depth` generations.
pub fn lie_closure<T: Scalar>(gens: &[ShiftOp<T>], max_depth: usize, max_dim: usize) -> LieBasis<T> {
    let mut basis: Vec<ShiftOp<T>> = Vec::new();
    let mut frame: Option<Frame<T>> = None;
    for g in gens {
        try_insert(&mut basis, &mut frame, g.clone());
    }
    let mut frontier: Vec<usize> = (0..basis.len()).collect();
    let mut depth = 0;
    let mut stabilized = false;
    while basis.len() <= max_dim {
        if depth == max_depth {
            break;
        }
        depth += 1;
        let first_new = frontier.first().copied().unwrap_or(basis.len());
        let pairs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&i| (0..basis.len()).filter(move |&j| j < first_new || j > i).map(move |j| (i, j)))
            .collect();
        let snapshot = &basis;
        let brackets: Vec<ShiftOp<T>> = pairs
            .par_iter()
            .map(|&(i, j)| snapshot[i].commutator(&snapshot[j]))
            .collect();
        let before = basis.len();
        for b in brackets {
            if basis.len() > max_dim {
                break;
            }
            try_insert(&mut basis, &mut frame, b);
        }
        if basis.len() == before {
            stabilized = true;
            break;
        }
        frontier = (before..basis.len()).collect();
    }
    let dim = basis.len();
    LieBasis {
        elements: basis,
        depth_reached: depth,
        stabilized,
        dim,
    }
}
