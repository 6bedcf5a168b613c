use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ModelSpace;

use super::homotopy::HomotopySample;

/// Convergence controls for [`action_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Absolute tolerance on the error estimate.
    pub tolerance: f64,
    /// Deepest cell subdivision level; level `L` splits each grid cell into
    /// `4^L` sub-cells.
    pub max_level: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { tolerance: 1e-6, max_level: 4 }
    }
}

/// Value of `∬ ω(∂_s Φ, ∂_t Φ) ds dt` with its error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionResult {
    pub value: f64,
    pub error: f64,
    /// Subdivision level at which the estimate met the tolerance.
    pub level: u32,
    /// Contribution of each strip `[s_j, s_{j+1}]`.
    pub strips: Vec<f64>,
}

impl ActionResult {
    /// Cumulative action at `s_j`, `j = 0..=S`; the first entry is 0.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.strips.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for s in &self.strips {
            acc += s;
            out.push(acc);
        }
        out
    }
}

/// Fixed-order pairwise sum; the result does not depend on thread count.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Working-chart grid with angles unwrapped down the first column and then
/// along each row.
fn chart_grid(space: &ModelSpace, h: &HomotopySample) -> Vec<Vec<Vec<f64>>> {
    let mut column: Vec<Vec<f64>> = Vec::with_capacity(h.rows().len());
    for row in h.rows() {
        let c = space.to_chart(&row[0], column.last().map(|v| v.as_slice()));
        column.push(c);
    }
    h.rows()
        .par_iter()
        .zip(column)
        .map(|(row, first)| {
            let mut out: Vec<Vec<f64>> = Vec::with_capacity(row.len());
            out.push(first);
            for p in &row[1..] {
                let c = space.to_chart(p, out.last().map(|v| v.as_slice()));
                out.push(c);
            }
            out
        })
        .collect()
}

/// Midpoint rule on one bilinear cell split into `m × m` sub-cells.
///
/// Corners: `a = Φ(s_j, t_k)`, `b = Φ(s_j, t_{k+1})`, `c = Φ(s_{j+1}, t_{k+1})`,
/// `d = Φ(s_{j+1}, t_k)`. On each sub-cell the partials are the averaged
/// edge differences, so `∂_s × ∂_t` is half the cross product of the
/// diagonals: exact for a constant density on a bilinear cell.
fn cell_integral(space: &ModelSpace, curved: bool, q: [&[f64]; 4], m: usize, scratch: &mut Scratch) -> f64 {
    let dim = q[0].len();
    let Scratch { buf, center, ds, dt, row_sums, cells } = scratch;
    let [a, b, c, d] = q;
    let side = m + 1;
    buf.clear();
    buf.resize(side * side * dim, 0.0);
    for i in 0..side {
        let sg = i as f64 / m as f64;
        for k in 0..side {
            let tau = k as f64 / m as f64;
            let w = [(1.0 - sg) * (1.0 - tau), (1.0 - sg) * tau, sg * tau, sg * (1.0 - tau)];
            let p = &mut buf[(i * side + k) * dim..(i * side + k + 1) * dim];
            for x in 0..dim {
                p[x] = w[0] * a[x] + w[1] * b[x] + w[2] * c[x] + w[3] * d[x];
            }
            if curved && m > 1 {
                space.normalize_chart(p);
            }
        }
    }
    center.resize(dim, 0.0);
    ds.resize(dim, 0.0);
    dt.resize(dim, 0.0);
    row_sums.clear();
    for i in 0..m {
        cells.clear();
        for k in 0..m {
            let at = |ii: usize, kk: usize| &buf[(ii * side + kk) * dim..(ii * side + kk + 1) * dim];
            let (pa, pb, pc, pd) = (at(i, k), at(i, k + 1), at(i + 1, k + 1), at(i + 1, k));
            for x in 0..dim {
                center[x] = 0.25 * (pa[x] + pb[x] + pc[x] + pd[x]);
                dt[x] = 0.5 * (pb[x] + pc[x] - pa[x] - pd[x]);
                ds[x] = 0.5 * (pd[x] + pc[x] - pa[x] - pb[x]);
            }
            cells.push(space.chart_density(center, ds, dt));
        }
        row_sums.push(pairwise_sum(cells));
    }
    pairwise_sum(row_sums)
}

#[derive(Default)]
struct Scratch {
    buf: Vec<f64>,
    center: Vec<f64>,
    ds: Vec<f64>,
    dt: Vec<f64>,
    row_sums: Vec<f64>,
    cells: Vec<f64>,
}

fn strips_at_level(space: &ModelSpace, grid: &[Vec<Vec<f64>>], level: u32) -> Vec<f64> {
    let m = 1usize << level;
    let curved = space.is_curved();
    (0..grid.len() - 1)
        .into_par_iter()
        .map(|j| {
            let (r0, r1) = (&grid[j], &grid[j + 1]);
            let mut scratch = Scratch::default();
            let cells: Vec<f64> = (0..r0.len() - 1)
                .map(|k| cell_integral(space, curved, [&r0[k], &r0[k + 1], &r1[k + 1], &r1[k]], m, &mut scratch))
                .collect();
            pairwise_sum(&cells)
        })
        .collect()
}

/// `∫_H Kω = ∬ ω(Φ)(∂Φ/∂s, ∂Φ/∂t) ds dt` over the sampled plot `H`.
///
/// The integrand is the bilinear interpolation of the grid in the working
/// chart (renormalized on spheres). Each level halves the sub-cell size;
/// consecutive levels give the Richardson estimate
/// `I_L + (I_L − I_{L−1})/3` with error `|I_L − I_{L−1}|/3`.
pub fn action_integral(space: &ModelSpace, h: &HomotopySample, settings: &QuadratureSettings) -> Result<ActionResult> {
    if h.rows()[0][0].len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: h.rows()[0][0].len() });
    }
    let grid = chart_grid(space, h);
    let mut prev = strips_at_level(space, &grid, 0);
    let mut prev_total = pairwise_sum(&prev);
    let mut level = 1;
    loop {
        let cur = strips_at_level(space, &grid, level);
        let total = pairwise_sum(&cur);
        let error = (total - prev_total).abs() / 3.0;
        if !error.is_finite() {
            return Err(Error::QuadratureNotConverged { estimate: error, tolerance: settings.tolerance });
        }
        if error <= settings.tolerance || level >= settings.max_level {
            if error > settings.tolerance {
                return Err(Error::QuadratureNotConverged { estimate: error, tolerance: settings.tolerance });
            }
            let strips: Vec<f64> = cur.iter().zip(&prev).map(|(c, p)| c + (c - p) / 3.0).collect();
            let value = pairwise_sum(&strips);
            return Ok(ActionResult { value, error, level, strips });
        }
        prev = cur;
        prev_total = total;
        level += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::homotopy::sphere_sweep;
    use crate::geometry::FormKind;
    use std::f64::consts::PI;

    #[test]
    fn torus_fundamental_sweep() {
        let t = ModelSpace::unit_torus();
        let h = HomotopySample::from_fn(&t, 16, 16, |s, u| vec![u, s]).unwrap();
        let r = action_integral(&t, &h, &QuadratureSettings::default()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        let c = r.cumulative();
        assert_eq!(c.len(), 17);
        assert!((c[16] - r.value).abs() < 1e-12);
    }

    #[test]
    fn annulus_action_is_two_pi_ln_two() {
        let p = ModelSpace::punctured_plane(FormKind::Magnetic);
        let h = HomotopySample::from_fn(&p, 32, 64, |s, t| {
            let r = 1.0 + s;
            vec![r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin()]
        })
        .unwrap();
        let r = action_integral(&p, &h, &QuadratureSettings::default()).unwrap();
        assert!((r.value.abs() - 2.0 * PI * 2f64.ln()).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn sphere_total() {
        let (sp, h) = sphere_sweep(2.5, 256, 256).unwrap();
        let r = action_integral(&sp, &h, &QuadratureSettings::default()).unwrap();
        assert!((r.value.abs() - 2.5).abs() < 1e-5, "{}", r.value);
    }
}
