//! Adaptive bisection over an initial panel grid.
//!
//! The caller supplies the initial edges and a panel rule. Panels whose
//! error dominates are bisected, worst first, until the summed error meets
//! the target or the panel budget runs out. Ties break on position, so a
//! given input always produces the same sequence of splits.
//!
//! Each panel also reports a rounding floor, `50 eps int |f|`, below which
//! its error cannot fall. Panels are ranked by error above their floor, and
//! the run is accepted once that reducible part meets the target: a strongly
//! cancelling integrand is then as accurate as double precision allows.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Estimate, QuadratureConfig};
use crate::error::QuadratureError;
use crate::numerics::NeumaierSum;

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: f64,
}

#[derive(PartialEq)]
struct Worst {
    error: f64,
    a: f64,
    index: usize,
}

impl Eq for Worst {}

impl Ord for Worst {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

impl PartialOrd for Worst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(value, error, reducible error)` in position order.
fn totals(panels: &[Panel]) -> (f64, f64, f64) {
    let mut order: Vec<usize> = (0..panels.len()).collect();
    order.sort_by(|&i, &j| panels[i].a.total_cmp(&panels[j].a));
    let mut v = NeumaierSum::new();
    let mut e = NeumaierSum::new();
    let mut x = NeumaierSum::new();
    for i in order {
        v.add(panels[i].value);
        e.add(panels[i].error);
        x.add(panels[i].error - panels[i].floor);
    }
    (v.value(), e.value(), x.value())
}

pub(crate) fn adaptive<R>(edges: &[f64], mut rule: R, cfg: &QuadratureConfig) -> Result<Estimate, QuadratureError>
where
    R: FnMut(f64, f64) -> Result<(f64, f64, f64), QuadratureError>,
{
    let mut panels = Vec::with_capacity(edges.len().saturating_sub(1));
    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error, floor) = rule(w[0], w[1])?;
        heap.push(Worst { error: error - floor, a: w[0], index: panels.len() });
        panels.push(Panel { a: w[0], b: w[1], value, error, floor });
    }
    let target = |v: f64| cfg.abs_tol.max(cfg.rel_tol * v.abs());

    let (mut value, _, mut excess) = totals(&panels);
    let mut since_resync = 0usize;
    loop {
        if excess <= target(value) {
            // The running totals drift; confirm with a fresh compensated sum.
            let (v, error, x) = totals(&panels);
            (value, excess) = (v, x);
            if excess <= target(value) {
                return Ok(Estimate { value, error, panels: panels.len() });
            }
        }
        let worst = match heap.pop() {
            Some(w) if w.error > 0.0 => w,
            _ => break,
        };
        let p = panels[worst.index];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= cfg.max_subdivisions || !(mid > p.a && mid < p.b) {
            break;
        }
        let (v1, e1, f1) = rule(p.a, mid)?;
        let (v2, e2, f2) = rule(mid, p.b)?;
        panels[worst.index] = Panel { a: p.a, b: mid, value: v1, error: e1, floor: f1 };
        heap.push(Worst { error: e1 - f1, a: p.a, index: worst.index });
        heap.push(Worst { error: e2 - f2, a: mid, index: panels.len() });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2, floor: f2 });

        value += v1 + v2 - p.value;
        excess += (e1 - f1) + (e2 - f2) - (p.error - p.floor);
        since_resync += 1;
        if since_resync == 256 {
            (value, _, excess) = totals(&panels);
            since_resync = 0;
        }
    }
    let (value, error, excess) = totals(&panels);
    if excess <= target(value) {
        return Ok(Estimate { value, error, panels: panels.len() });
    }
    Err(QuadratureError::NoConvergence { estimate: value, error, target: target(value), panels: panels.len() })
}
