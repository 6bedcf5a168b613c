use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{chordal_ok, crossing_word, ChartPoint, ModelSpace};

use super::path::{chart_points, common_resolution, resample, same_cover_point, PathSample};

/// A sampled plot `Φ(s_j, t_k)`, `s_j = j/S`, `t_k = k/N`; row `j` is the
/// path `Φ(s_j, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopySample {
    rows: Vec<Vec<ChartPoint>>,
    fixed_ends: bool,
    closed_rows: bool,
    loop_of_loops: bool,
}

impl HomotopySample {
    pub fn new(space: &ModelSpace, rows: Vec<Vec<ChartPoint>>) -> Result<Self> {
        if rows.len() < 2 || rows[0].len() < 2 {
            return Err(Error::Invalid("a homotopy needs at least a 2×2 grid".into()));
        }
        let n = rows[0].len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::Invalid("homotopy rows have different lengths".into()));
            }
            for p in row {
                space.validate_point(p)?;
            }
        }
        Ok(Self::with_flags(space, rows))
    }

    fn with_flags(space: &ModelSpace, rows: Vec<Vec<ChartPoint>>) -> Self {
        let n = rows[0].len() - 1;
        let fixed_ends =
            rows.iter().all(|r| same_cover_point(&r[0], &rows[0][0]) && same_cover_point(&r[n], &rows[0][n]));
        let closed_rows = rows.iter().all(|r| space.cover_shift(&r[0], &r[n]).is_some());
        let last = &rows[rows.len() - 1];
        let ends_match = space.cover_shift(&rows[0][0], &last[0]).is_some_and(|d| {
            rows[0]
                .iter()
                .zip(last)
                .all(|(a, b)| same_cover_point(&a.iter().zip(&d).map(|(x, y)| x + y).collect::<Vec<_>>(), b))
        });
        HomotopySample { fixed_ends, closed_rows, loop_of_loops: closed_rows && ends_match, rows }
    }

    /// Samples `f(s, t)` on an `(S+1) × (N+1)` grid.
    pub fn from_fn(
        space: &ModelSpace,
        s_steps: usize,
        n_steps: usize,
        f: impl Fn(f64, f64) -> Vec<f64>,
    ) -> Result<Self> {
        let (s_steps, n_steps) = (s_steps.max(1), n_steps.max(1));
        let rows = (0..=s_steps)
            .map(|j| {
                let s = j as f64 / s_steps as f64;
                (0..=n_steps).map(|k| ChartPoint(f(s, k as f64 / n_steps as f64))).collect()
            })
            .collect();
        Self::new(space, rows)
    }

    pub fn rows(&self) -> &[Vec<ChartPoint>] {
        &self.rows
    }

    /// `S`, the number of `s`-intervals.
    pub fn s_steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// `N`, the number of `t`-intervals.
    pub fn n_steps(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn fixed_ends(&self) -> bool {
        self.fixed_ends
    }

    /// Every slice `Φ(s, ·)` is closed.
    pub fn closed_rows(&self) -> bool {
        self.closed_rows
    }

    /// Closed slices and `Φ(0, ·) = Φ(1, ·)` in the quotient.
    pub fn loop_of_loops(&self) -> bool {
        self.loop_of_loops
    }

    pub fn row(&self, j: usize) -> PathSample {
        let closed = self.closed_rows;
        PathSample::from_parts(self.rows[j].clone(), closed)
    }

    /// `Φᵀ(s, t) = Φ(t, s)`.
    pub fn transpose(&self, space: &ModelSpace) -> HomotopySample {
        let (s, n) = (self.s_steps(), self.n_steps());
        let rows = (0..=n).map(|k| (0..=s).map(|j| self.rows[j][k].clone()).collect()).collect();
        Self::with_flags(space, rows)
    }

    /// Restriction to rows `from..=to`, reparametrized onto `[0, 1]`.
    pub fn sub_rows(&self, space: &ModelSpace, from: usize, to: usize) -> Result<HomotopySample> {
        if from >= to || to > self.s_steps() {
            return Err(Error::Invalid(format!("row range {from}..={to} is empty or out of bounds")));
        }
        Ok(Self::with_flags(space, self.rows[from..=to].to_vec()))
    }

    /// Applies `g` to every sample.
    pub fn map_points(&self, space: &ModelSpace, g: impl Fn(&[f64]) -> Vec<f64>) -> Result<HomotopySample> {
        Self::new(space, self.rows.iter().map(|r| r.iter().map(|p| ChartPoint(g(p))).collect()).collect())
    }
}

/// The canonical homotopy from `a` to `b`: linear interpolation in the
/// working chart.
///
/// With shared endpoints the result has fixed ends; for two closed paths it
/// is a loop of loops. On the torus `b` is first moved by the lattice
/// translation that brings its start nearest to `a`'s.
pub fn straight_homotopy(space: &ModelSpace, a: &PathSample, b: &PathSample, s_steps: usize) -> Result<HomotopySample> {
    let fixed = space.cover_shift(b.start(), a.start()).is_some() && space.cover_shift(b.end(), a.end()).is_some();
    if !fixed && !(a.is_closed() && b.is_closed()) {
        return Err(Error::NotHomotopic("paths share neither endpoints nor closedness".into()));
    }
    let m = common_resolution(&[a.intervals(), b.intervals()]);
    let a = resample(space, a, m);
    let shift = space.nearest_shift(b.start(), a.start());
    let b = resample(space, b, m).shifted(&shift);

    let ca = chart_points(space, &a);
    let mut cb: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    cb.push(space.to_chart(b.start(), Some(&ca[0])));
    for p in &b.points()[1..] {
        let c = space.to_chart(p, cb.last().map(|v| v.as_slice()));
        cb.push(c);
    }

    // Homotopy class checks in the working chart.
    let da: Vec<f64> = ca[m].iter().zip(&ca[0]).map(|(x, y)| x - y).collect();
    let db: Vec<f64> = cb[m].iter().zip(&cb[0]).map(|(x, y)| x - y).collect();
    let mismatch = if fixed {
        !same_cover_point(&ca[0], &cb[0]) || !same_cover_point(&ca[m], &cb[m])
    } else {
        !same_cover_point(&da, &db)
    };
    if mismatch {
        return Err(Error::NotHomotopic(format!(
            "{}: displacement or winding differs ({da:?} vs {db:?})",
            space.name()
        )));
    }

    let s_steps = s_steps.max(1);
    let mut rows = Vec::with_capacity(s_steps + 1);
    for j in 0..=s_steps {
        if j == 0 {
            rows.push(a.points().to_vec());
            continue;
        }
        if j == s_steps {
            rows.push(b.points().to_vec());
            continue;
        }
        let w = j as f64 / s_steps as f64;
        let mut row = Vec::with_capacity(m + 1);
        for (x, y) in ca.iter().zip(&cb) {
            let mut c: Vec<f64> = x.iter().zip(y).map(|(p, q)| p + w * (q - p)).collect();
            if !chordal_ok(space, &c) {
                return Err(Error::AntipodalDegeneracy);
            }
            space.normalize_chart(&mut c);
            row.push(ChartPoint(space.from_chart(&c)));
        }
        rows.push(row);
    }
    if fixed {
        // Pin the ends exactly: the interpolated values differ only by rounding.
        for row in rows.iter_mut() {
            row[0] = a.start().clone();
            row[m] = a.end().clone();
        }
    }
    let h = HomotopySample::new(space, rows)?;
    if let ModelSpace::TwoHolesPlane { .. } = space {
        check_rows_in_one_class(space, &h, fixed)?;
    }
    Ok(h)
}

/// In the plane minus two points the chart interpolation can jump across a
/// hole; every slice must carry the same crossing word as the first.
fn check_rows_in_one_class(space: &ModelSpace, h: &HomotopySample, fixed: bool) -> Result<()> {
    let first = crossing_word(space, &h.rows[0]);
    for (j, row) in h.rows.iter().enumerate().skip(1) {
        let w = crossing_word(space, row);
        let same = if fixed { w == first } else { cyclically_equal(&w, &first) };
        if !same {
            return Err(Error::NotHomotopic(format!("slice {j} lies in a different class")));
        }
    }
    Ok(())
}

fn cyclic_reduce(w: &[(usize, i32)]) -> Vec<(usize, i32)> {
    let mut v = w.to_vec();
    while v.len() >= 2 {
        let (a, b) = (v[0], v[v.len() - 1]);
        if a.0 == b.0 && a.1 == -b.1 {
            v.remove(0);
            v.pop();
        } else {
            break;
        }
    }
    v
}

fn cyclically_equal(a: &[(usize, i32)], b: &[(usize, i32)]) -> bool {
    let (a, b) = (cyclic_reduce(a), cyclic_reduce(b));
    if a.len() != b.len() {
        return false;
    }
    a.is_empty() || (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter()))
}

/// The latitude sweep of the unit sphere,
/// `Φ(s, t) = (sin πs cos 2πt, sin πs sin 2πt, cos πs)`, together with the
/// sphere model of scale `s`. Its slices are closed and the first and last
/// slices are constant at the two poles; the sweep covers the sphere once.
pub fn sphere_sweep(s: f64, s_steps: usize, n_steps: usize) -> Result<(ModelSpace, HomotopySample)> {
    let space = ModelSpace::sphere(s)?;
    let h = HomotopySample::from_fn(&space, s_steps.max(8), n_steps.max(8), |u, t| {
        let (ps, pc) = (PI * u).sin_cos();
        let (ts, tc) = (2.0 * PI * t).sin_cos();
        // Exact poles at the ends keep the first and last slices constant.
        if u == 0.0 {
            return vec![0.0, 0.0, 1.0];
        }
        if u == 1.0 {
            return vec![0.0, 0.0, -1.0];
        }
        vec![ps * tc, ps * ts, pc]
    })?;
    Ok((space, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FormKind;

    #[test]
    fn transpose_swaps_dimensions() {
        let t = ModelSpace::unit_torus();
        let h = HomotopySample::from_fn(&t, 3, 5, |s, u| vec![u, s]).unwrap();
        let ht = h.transpose(&t);
        assert_eq!((ht.s_steps(), ht.n_steps()), (5, 3));
        assert_eq!(ht.rows()[2][1], h.rows()[1][2]);
        assert!(h.closed_rows() && !h.fixed_ends());
    }

    #[test]
    fn straight_homotopy_between_loops_of_the_same_class() {
        let t = ModelSpace::unit_torus();
        let a = PathSample::from_fn(&t, 8, |u| vec![u, 0.0]).unwrap();
        let b = PathSample::from_fn(&t, 8, |u| vec![u, 0.25]).unwrap();
        let h = straight_homotopy(&t, &a, &b, 4).unwrap();
        assert!(h.closed_rows() && !h.fixed_ends());
        let c = PathSample::from_fn(&t, 8, |u| vec![u, u]).unwrap();
        assert!(matches!(straight_homotopy(&t, &a, &c, 4), Err(Error::NotHomotopic(_))));
    }

    #[test]
    fn punctured_plane_winding_mismatch() {
        let s = ModelSpace::punctured_plane(FormKind::Magnetic);
        let circle = |n: f64| {
            PathSample::from_fn(&s, 64, move |u| vec![(2.0 * PI * n * u).cos(), (2.0 * PI * n * u).sin()]).unwrap()
        };
        assert!(matches!(straight_homotopy(&s, &circle(1.0), &circle(2.0), 4), Err(Error::NotHomotopic(_))));
        assert!(straight_homotopy(&s, &circle(1.0), &circle(1.0), 4).is_ok());
    }

    #[test]
    fn sphere_antipodes_are_rejected() {
        let s = ModelSpace::sphere(1.0).unwrap();
        let a = PathSample::from_fn(&s, 4, |_| vec![0.0, 0.0, 1.0]).unwrap();
        let b = PathSample::from_fn(&s, 4, |_| vec![0.0, 0.0, -1.0]).unwrap();
        assert_eq!(straight_homotopy(&s, &a, &b, 4), Err(Error::AntipodalDegeneracy));
    }

    #[test]
    fn two_holes_detects_different_classes() {
        let s = ModelSpace::two_holes([-1.0, 0.0], [1.0, 0.0], FormKind::Zero).unwrap();
        let around = |c: f64| {
            PathSample::from_fn(&s, 128, move |u| {
                let a = 2.0 * PI * u + PI / 2.0;
                vec![c + a.cos() * 0.5, a.sin() * 0.5]
            })
            .unwrap()
        };
        let h = straight_homotopy(&s, &around(-1.0), &around(1.0), 32);
        assert!(matches!(h, Err(Error::NotHomotopic(_)) | Err(Error::RemovedPoint { .. })));
    }

    #[test]
    fn sphere_sweep_flags() {
        let (_, h) = sphere_sweep(1.0, 16, 16).unwrap();
        assert!(h.closed_rows() && !h.fixed_ends() && !h.loop_of_loops());
        // Read along meridians it is a loop of paths with fixed poles.
        let ht = h.transpose(&ModelSpace::sphere(1.0).unwrap());
        assert!(ht.fixed_ends());
    }
}
