//! Maximization over torus phases: a uniform phase grid followed by
//! coordinate-wise golden-section ascent from the best grid points.
//!
//! The result is always a value attained at a concrete point, so it is a
//! lower bound for the true supremum.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

/// Number of best grid points refined independently.
const STARTS: usize = 4;
/// Golden-section iterations per coordinate line search.
const LINE_ITERS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    pub grid_per_axis: usize,
    pub refine_steps: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid_per_axis: 64,
            refine_steps: 200,
        }
    }
}

impl SearchOptions {
    pub fn new(grid_per_axis: usize, refine_steps: usize) -> Self {
        Self {
            grid_per_axis,
            refine_steps,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.grid_per_axis < 4 {
            return Err(Error::input(format!(
                "grid_per_axis must be at least 4, got {}",
                self.grid_per_axis
            )));
        }
        Ok(())
    }
}

/// Best value found together with the phases and torus point attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusMax {
    pub value: f64,
    pub phases: Vec<f64>,
}

impl TorusMax {
    pub fn point(&self) -> Vec<C64> {
        phases_to_point(&self.phases)
    }
}

pub fn phases_to_point(phases: &[f64]) -> Vec<C64> {
    phases.iter().map(|&t| C64::from_polar(1.0, t)).collect()
}

fn nan_low(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Keeps the `STARTS` best (value, index) pairs; ties go to the lower index
/// so the reduction is independent of how rayon splits the range.
fn push_top(top: &mut Vec<(f64, usize)>, cand: (f64, usize)) {
    let better = |a: &(f64, usize), b: &(f64, usize)| a.0 > b.0 || (a.0 == b.0 && a.1 < b.1);
    let pos = top.iter().position(|t| better(&cand, t)).unwrap_or(top.len());
    if pos < STARTS {
        top.insert(pos, cand);
        top.truncate(STARTS);
    }
}

fn grid_phases(mut idx: usize, dims: usize, grid: usize) -> Vec<f64> {
    let mut out = vec![0.0; dims];
    for slot in out.iter_mut() {
        *slot = TAU * (idx % grid) as f64 / grid as f64;
        idx /= grid;
    }
    out
}

/// Maximizes `f` over `dims` phase angles.
///
/// `f` is evaluated on the `grid^dims` uniform grid (in parallel), then the
/// best grid points are polished by sweeps of one-dimensional golden-section
/// searches within one grid spacing of the current phase. A move is taken
/// only when it strictly improves the value, so the returned value never
/// drops below the best grid value.
pub fn maximize<F>(dims: usize, opts: SearchOptions, f: F) -> Result<TorusMax>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    opts.validate()?;
    let grid = opts.grid_per_axis;
    let total = u32::try_from(dims)
        .ok()
        .and_then(|d| grid.checked_pow(d))
        .filter(|&t| t <= 1 << 26)
        .ok_or_else(|| {
            Error::input(format!("phase grid {grid}^{dims} is too large to enumerate"))
        })?;

    let top = (0..total)
        .into_par_iter()
        .fold(Vec::new, |mut acc, idx| {
            let v = nan_low(f(&grid_phases(idx, dims, grid)));
            push_top(&mut acc, (v, idx));
            acc
        })
        .reduce(Vec::new, |mut a, b| {
            for cand in b {
                push_top(&mut a, cand);
            }
            a
        });

    let spacing = TAU / grid as f64;
    let mut best = TorusMax {
        value: f64::NEG_INFINITY,
        phases: vec![0.0; dims],
    };
    for (value, idx) in top {
        let start = TorusMax {
            value,
            phases: grid_phases(idx, dims, grid),
        };
        let polished = ascend(&f, start, spacing, opts.refine_steps);
        if polished.value > best.value {
            best = polished;
        }
    }
    Ok(best)
}

fn ascend<F>(f: &F, mut cur: TorusMax, half_width: f64, sweeps: usize) -> TorusMax
where
    F: Fn(&[f64]) -> f64,
{
    let dims = cur.phases.len();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut probe = cur.phases.clone();
    for _ in 0..sweeps {
        let before = cur.value;
        for k in 0..dims {
            let mut eval = |t: f64| {
                probe.copy_from_slice(&cur.phases);
                probe[k] = t;
                nan_low(f(&probe))
            };
            let (mut lo, mut hi) = (cur.phases[k] - half_width, cur.phases[k] + half_width);
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let (mut f1, mut f2) = (eval(x1), eval(x2));
            for _ in 0..LINE_ITERS {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = eval(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = eval(x1);
                }
            }
            let (t, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
            if v > cur.value {
                cur.phases[k] = t.rem_euclid(TAU);
                cur.value = v;
            }
        }
        if cur.value <= before {
            break;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_off_grid_maximum() {
        // max of cos(t - 0.123) + cos(s + 2.0) is 2 at (0.123, -2.0)
        let r = maximize(2, SearchOptions::new(8, 100), |p| {
            (p[0] - 0.123).cos() + (p[1] + 2.0).cos()
        })
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
        assert!((r.phases[0] - 0.123).abs() < 1e-5);
        assert!((r.phases[1] - (TAU - 2.0)).abs() < 1e-5);
    }

    #[test]
    fn zero_dims_evaluates_once() {
        let r = maximize(0, SearchOptions::new(4, 10), |_| 3.5).unwrap();
        assert_eq!(r.value, 3.5);
        assert!(r.phases.is_empty());
    }

    #[test]
    fn rejects_coarse_grid() {
        assert!(maximize(1, SearchOptions::new(3, 0), |_| 0.0).is_err());
    }

    #[test]
    fn constant_function_keeps_first_grid_point() {
        let r = maximize(3, SearchOptions::new(6, 20), |_| 1.0).unwrap();
        assert_eq!(r.phases, vec![0.0; 3]);
    }
}
