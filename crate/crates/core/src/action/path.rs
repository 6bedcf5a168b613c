use std::io::{Read, Write};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, ModelSpace, CLOSURE_TOL};

/// A path sampled at `t_k = k/N`, `k = 0..=N`.
///
/// Points live in the model's storage chart; torus paths are lifts to the
/// universal cover. Between samples the path is linear in the working chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    points: Vec<ChartPoint>,
    closed: bool,
}

impl PathSample {
    pub fn new(space: &ModelSpace, points: Vec<ChartPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("a path needs at least two samples".into()));
        }
        for p in &points {
            space.validate_point(p)?;
        }
        let closed = space.cover_shift(&points[0], &points[points.len() - 1]).is_some();
        Ok(PathSample { points, closed })
    }

    /// Samples `f` at `n + 1` equally spaced parameters.
    pub fn from_fn(space: &ModelSpace, n: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let n = n.max(1);
        Self::new(space, (0..=n).map(|k| ChartPoint(f(k as f64 / n as f64))).collect())
    }

    pub(crate) fn from_parts(points: Vec<ChartPoint>, closed: bool) -> Self {
        PathSample { points, closed }
    }

    pub fn points(&self) -> &[ChartPoint] {
        &self.points
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.points.len() - 1
    }

    pub fn start(&self) -> &ChartPoint {
        &self.points[0]
    }

    pub fn end(&self) -> &ChartPoint {
        &self.points[self.points.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Translates every sample by `d` (a cover translation).
    pub(crate) fn shifted(&self, d: &[f64]) -> PathSample {
        if d.iter().all(|x| *x == 0.0) {
            return self.clone();
        }
        let points = self.points.iter().map(|p| ChartPoint(p.iter().zip(d).map(|(a, b)| a + b).collect())).collect();
        PathSample { points, closed: self.closed }
    }

    /// Writes `t,x0,x1,…` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let dim = self.points[0].len();
        let mut header = vec!["t".to_string()];
        header.extend((0..dim).map(|i| format!("x{i}")));
        wr.write_record(&header).map_err(csv_err)?;
        let n = self.intervals() as f64;
        for (k, p) in self.points.iter().enumerate() {
            let mut row = vec![format!("{}", k as f64 / n)];
            row.extend(p.iter().map(|x| format!("{x:?}")));
            wr.write_record(&row).map_err(csv_err)?;
        }
        wr.flush().map_err(|e| Error::Invalid(e.to_string()))?;
        Ok(())
    }

    /// Reads rows written by [`PathSample::write_csv`]. The `t` column must
    /// be the uniform grid `k/N`.
    pub fn read_csv<R: Read>(space: &ModelSpace, r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut ts = Vec::new();
        let mut points = Vec::new();
        for (line, rec) in rd.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let vals: Vec<f64> = rec
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))?;
            if vals.len() < 2 {
                return Err(Error::Parse(format!("row {}: expected t and coordinates", line + 2)));
            }
            ts.push(vals[0]);
            points.push(ChartPoint(vals[1..].to_vec()));
        }
        let n = points.len().saturating_sub(1).max(1) as f64;
        for (k, t) in ts.iter().enumerate() {
            if (t - k as f64 / n).abs() > 1e-9 {
                return Err(Error::Parse(format!("row {}: t = {t} is not on the uniform grid", k + 2)));
            }
        }
        Self::new(space, points)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// `γ̄`: the same samples in reverse order.
pub fn reverse(a: &PathSample) -> PathSample {
    let mut points = a.points.clone();
    points.reverse();
    PathSample { points, closed: a.closed }
}

/// `x̂`: the constant path at `x` with a single interval.
pub fn constant_path(space: &ModelSpace, x: &ChartPoint) -> Result<PathSample> {
    PathSample::new(space, vec![x.clone(), x.clone()])
}

/// Chart-linear interpolation between two stored points; `near` fixes the
/// branch of angular coordinates.
pub(crate) fn chart_lerp(space: &ModelSpace, a: &[f64], b: &[f64], w: f64) -> Vec<f64> {
    let ca = space.to_chart(a, None);
    let cb = space.to_chart(b, Some(&ca));
    let mut c: Vec<f64> = ca.iter().zip(&cb).map(|(x, y)| x + w * (y - x)).collect();
    space.normalize_chart(&mut c);
    space.from_chart(&c)
}

/// Splits every interval into `k` chart-linear pieces; original samples
/// are kept bit-for-bit.
pub fn refine(space: &ModelSpace, a: &PathSample, k: usize) -> PathSample {
    if k <= 1 {
        return a.clone();
    }
    let mut points = Vec::with_capacity(a.intervals() * k + 1);
    for w in a.points.windows(2) {
        points.push(w[0].clone());
        for i in 1..k {
            points.push(ChartPoint(chart_lerp(space, &w[0], &w[1], i as f64 / k as f64)));
        }
    }
    points.push(a.end().clone());
    PathSample { points, closed: a.closed }
}

/// Resamples to `m` intervals: exact refinement when `N | m`, otherwise
/// chart-linear sampling at `j/m`.
pub fn resample(space: &ModelSpace, a: &PathSample, m: usize) -> PathSample {
    let n = a.intervals();
    if m.is_multiple_of(n) {
        return refine(space, a, m / n);
    }
    let mut points = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let x = j as f64 * n as f64 / m as f64;
        let i = (x.floor() as usize).min(n - 1);
        let w = x - i as f64;
        points.push(if w == 0.0 {
            a.points[i].clone()
        } else {
            ChartPoint(chart_lerp(space, &a.points[i], &a.points[i + 1], w))
        });
    }
    *points.last_mut().expect("nonempty") = a.end().clone();
    PathSample { points, closed: a.closed }
}

/// A common interval count for paths of the given resolutions: their lcm
/// when it stays within 16× the largest, else the largest.
pub fn common_resolution(ns: &[usize]) -> usize {
    let max = ns.iter().copied().max().unwrap_or(1).max(1);
    let lcm = ns.iter().fold(1usize, |acc, &n| acc.lcm(&n.max(1)));
    if lcm <= 16 * max {
        lcm
    } else {
        max
    }
}

/// `a ∨ b`: `a` on `[0, 1/2]`, `b` on `[1/2, 1]`, with `b` translated in the
/// cover so that the junction is continuous.
pub fn concat(space: &ModelSpace, a: &PathSample, b: &PathSample) -> Result<PathSample> {
    concat_all(space, &[a, b])
}

/// `p₁ ∨ p₂ ∨ … ∨ p_k` on equal parameter intervals `1/k`.
pub fn concat_all(space: &ModelSpace, parts: &[&PathSample]) -> Result<PathSample> {
    let Some(first) = parts.first() else {
        return Err(Error::Invalid("nothing to concatenate".into()));
    };
    if parts.len() == 1 {
        return Ok((*first).clone());
    }
    let m = common_resolution(&parts.iter().map(|p| p.intervals()).collect::<Vec<_>>());
    let mut points: Vec<ChartPoint> = Vec::with_capacity(m * parts.len() + 1);
    points.push(first.start().clone());
    for part in parts {
        let last = points.last().expect("nonempty").clone();
        let shift = space
            .cover_shift(part.start(), &last)
            .ok_or_else(|| Error::EndpointMismatch { gap: part.start().distance(&last) })?;
        let r = resample(space, part, m).shifted(&shift);
        points.extend(r.points.into_iter().skip(1));
    }
    let closed = space.cover_shift(&points[0], &points[points.len() - 1]).is_some();
    Ok(PathSample { points, closed })
}

/// Working-chart coordinates along the path with angles unwrapped.
pub(crate) fn chart_points(space: &ModelSpace, a: &PathSample) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(a.points.len());
    for p in &a.points {
        let c = space.to_chart(p, out.last().map(|v| v.as_slice()));
        out.push(c);
    }
    out
}

/// Whether two samples agree within the closure tolerance in the cover.
pub(crate) fn same_cover_point(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt() <= CLOSURE_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FormKind;

    fn seg(space: &ModelSpace, a: [f64; 2], b: [f64; 2], n: usize) -> PathSample {
        PathSample::from_fn(space, n, |t| vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]).unwrap()
    }

    #[test]
    fn concat_continues_in_the_cover() {
        let t = ModelSpace::unit_torus();
        let a = seg(&t, [0.0, 0.0], [1.0, 0.0], 4);
        let b = seg(&t, [0.0, 0.0], [0.0, 1.0], 4);
        let c = concat(&t, &a, &b).unwrap();
        assert_eq!(c.intervals(), 8);
        assert_eq!(c.end().coords(), &[1.0, 1.0]);
        assert!(c.is_closed());
    }

    #[test]
    fn concat_rejects_gaps() {
        let t = ModelSpace::punctured_plane(FormKind::Zero);
        let a = seg(&t, [1.0, 0.0], [2.0, 0.0], 4);
        let b = seg(&t, [3.0, 0.0], [2.0, 1.0], 4);
        assert!(matches!(concat(&t, &a, &b), Err(Error::EndpointMismatch { .. })));
    }

    #[test]
    fn reverse_is_an_involution_and_loops_close() {
        let t = ModelSpace::unit_torus();
        let a = seg(&t, [0.1, 0.2], [0.7, -0.4], 7);
        assert_eq!(reverse(&reverse(&a)), a);
        assert!(concat(&t, &a, &reverse(&a)).unwrap().is_closed());
        assert!(constant_path(&t, a.start()).unwrap().is_closed());
    }

    #[test]
    fn refinement_keeps_vertices_and_follows_the_chart() {
        let s = ModelSpace::punctured_plane(FormKind::Magnetic);
        let a = PathSample::new(&s, vec![ChartPoint(vec![1.0, 0.0]), ChartPoint(vec![0.0, 1.0])]).unwrap();
        let r = refine(&s, &a, 2);
        assert_eq!(r.points()[0], a.points()[0]);
        assert_eq!(r.points()[2], a.points()[1]);
        let mid = &r.points()[1];
        assert!((mid[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn resolution_choice() {
        assert_eq!(common_resolution(&[4, 6]), 12);
        assert_eq!(common_resolution(&[1, 256]), 256);
        assert_eq!(common_resolution(&[255, 256]), 256);
    }

    #[test]
    fn csv_round_trip() {
        let t = ModelSpace::unit_torus();
        let a = seg(&t, [0.1, 0.2], [0.7, -0.4], 5);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let back = PathSample::read_csv(&t, buf.as_slice()).unwrap();
        assert_eq!(back, a);
    }
}
