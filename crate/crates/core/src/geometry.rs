//! Model spaces, their working charts and the closed 2-form on each.
//!
//! Every model has a *working chart* used by the integration kernel:
//!
//! | model            | stored points        | working chart            |
//! |------------------|----------------------|--------------------------|
//! | flat torus       | universal cover R²   | same                     |
//! | punctured plane  | Cartesian R²         | log-polar `(ln r, θ)`    |
//! | two-holes plane  | Cartesian R²         | same                     |
//! | 2-sphere         | unit vectors in R³   | same, renormalized       |
//! | product          | concatenation        | concatenation            |
//!
//! The log-polar chart is the universal cover of the punctured plane with
//! the angle unwrapped continuously along a path; in it the magnetic form
//! `dx∧dy/(x²+y²)` becomes the constant form `dρ∧dθ`.

use std::f64::consts::PI;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance below which a point counts as a removed point.
pub const REMOVED_POINT_RADIUS: f64 = 1e-9;
/// Endpoint agreement used for closure and junction checks.
pub const CLOSURE_TOL: f64 = 1e-9;

const SPHERE_NORM_TOL: f64 = 1e-12;
const SPHERE_TANGENT_TOL: f64 = 1e-9;

/// Which 2-form a planar model carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormKind {
    /// `dx∧dy / |x − p|²` around every removed point `p`.
    Magnetic,
    Zero,
    /// `b · dx∧dy`.
    Uniform {
        b: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpace {
    /// `R² / (Z l₁ + Z l₂)` with `ω = dx∧dy`; `lattice = [l₁, l₂]`.
    FlatTorus { lattice: [[f64; 2]; 2] },
    /// `R² \ {0}`.
    PuncturedPlane { form: FormKind },
    /// Unit sphere with the rotation-invariant form of total integral `s`.
    TwoSphere { s: f64 },
    /// `R² \ {p1, p2}`.
    TwoHolesPlane { p1: [f64; 2], p2: [f64; 2], form: FormKind },
    /// Cartesian product; the form is the sum of the pullbacks.
    Product { left: Box<ModelSpace>, right: Box<ModelSpace> },
}

/// Coordinates of a point in the model's storage chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChartPoint(pub Vec<f64>);

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ChartPoint(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &ChartPoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

impl Deref for ChartPoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ChartPoint {
    fn from(v: Vec<f64>) -> Self {
        ChartPoint(v)
    }
}

/// The two tangent vectors fed to `ω(p)(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl TangentPair {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Self {
        TangentPair { u, v }
    }
}

pub(crate) fn cross2(u: &[f64], v: &[f64]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

pub(crate) fn cross3(u: &[f64], v: &[f64]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// The representative of `angle` (mod 2π) closest to `near`.
pub(crate) fn unwrap_near(angle: f64, near: f64) -> f64 {
    angle + 2.0 * PI * ((near - angle) / (2.0 * PI)).round()
}

impl ModelSpace {
    pub fn unit_torus() -> Self {
        ModelSpace::FlatTorus { lattice: [[1.0, 0.0], [0.0, 1.0]] }
    }

    pub fn torus(lattice: [[f64; 2]; 2]) -> Result<Self> {
        let s = ModelSpace::FlatTorus { lattice };
        s.validate()?;
        Ok(s)
    }

    pub fn punctured_plane(form: FormKind) -> Self {
        ModelSpace::PuncturedPlane { form }
    }

    pub fn sphere(s: f64) -> Result<Self> {
        let sp = ModelSpace::TwoSphere { s };
        sp.validate()?;
        Ok(sp)
    }

    pub fn two_holes(p1: [f64; 2], p2: [f64; 2], form: FormKind) -> Result<Self> {
        let s = ModelSpace::TwoHolesPlane { p1, p2, form };
        s.validate()?;
        Ok(s)
    }

    pub fn product(left: ModelSpace, right: ModelSpace) -> Self {
        ModelSpace::Product { left: Box::new(left), right: Box::new(right) }
    }

    /// Checks the parameter invariants of the model.
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpace::FlatTorus { lattice } => {
                if lattice.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::Invalid("torus lattice entries must be finite".into()));
                }
                if cross2(&lattice[0], &lattice[1]).abs() < 1e-12 {
                    return Err(Error::Invalid("torus lattice basis is degenerate".into()));
                }
                Ok(())
            }
            ModelSpace::TwoSphere { s } if !s.is_finite() => Err(Error::Invalid("sphere scale must be finite".into())),
            ModelSpace::TwoHolesPlane { p1, p2, .. } => {
                if (p1[0] - p2[0]).hypot(p1[1] - p2[1]) < REMOVED_POINT_RADIUS {
                    return Err(Error::Invalid("the two removed points coincide".into()));
                }
                Ok(())
            }
            ModelSpace::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }

    /// Dimension of stored points (and of the working chart).
    pub fn dim(&self) -> usize {
        match self {
            ModelSpace::TwoSphere { .. } => 3,
            ModelSpace::Product { left, right } => left.dim() + right.dim(),
            _ => 2,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ModelSpace::FlatTorus { .. } => "flat torus".into(),
            ModelSpace::PuncturedPlane { .. } => "punctured plane".into(),
            ModelSpace::TwoSphere { .. } => "2-sphere".into(),
            ModelSpace::TwoHolesPlane { .. } => "plane minus two points".into(),
            ModelSpace::Product { left, right } => format!("{} × {}", left.name(), right.name()),
        }
    }

    /// The torus lattice area `|l₁ × l₂|`.
    pub fn torus_area(&self) -> Option<f64> {
        match self {
            ModelSpace::FlatTorus { lattice } => Some(cross2(&lattice[0], &lattice[1]).abs()),
            _ => None,
        }
    }

    /// `m l₁ + n l₂`.
    pub fn lattice_vector(&self, m: i64, n: i64) -> Option<[f64; 2]> {
        match self {
            ModelSpace::FlatTorus { lattice: l } => {
                Some([m as f64 * l[0][0] + n as f64 * l[1][0], m as f64 * l[0][1] + n as f64 * l[1][1]])
            }
            _ => None,
        }
    }

    /// Coordinates of `x` in the lattice basis.
    pub fn lattice_coords(&self, x: &[f64]) -> Option<[f64; 2]> {
        match self {
            ModelSpace::FlatTorus { lattice: l } => {
                let det = cross2(&l[0], &l[1]);
                Some([cross2(x, &l[1]) / det, cross2(&l[0], x) / det])
            }
            _ => None,
        }
    }

    /// Removed points of a planar factor, if any.
    pub fn removed_points(&self) -> Vec<[f64; 2]> {
        match self {
            ModelSpace::PuncturedPlane { .. } => vec![[0.0, 0.0]],
            ModelSpace::TwoHolesPlane { p1, p2, .. } => vec![*p1, *p2],
            _ => Vec::new(),
        }
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        match self {
            ModelSpace::Product { left, .. } => x.split_at(left.dim()),
            _ => unreachable!("split on a non-product model"),
        }
    }

    /// Checks dimension, removed points and sphere normalization.
    pub fn validate_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint(format!("{p:?} has non-finite coordinates")));
        }
        match self {
            ModelSpace::PuncturedPlane { .. } | ModelSpace::TwoHolesPlane { .. } => {
                for q in self.removed_points() {
                    if (p[0] - q[0]).hypot(p[1] - q[1]) < REMOVED_POINT_RADIUS {
                        return Err(Error::RemovedPoint { point: p.to_vec() });
                    }
                }
                Ok(())
            }
            ModelSpace::TwoSphere { .. } => {
                if (norm(p) - 1.0).abs() > SPHERE_NORM_TOL {
                    return Err(Error::InvalidPoint(format!("{p:?} is not a unit vector")));
                }
                Ok(())
            }
            ModelSpace::Product { left, right } => {
                let (a, b) = self.split(p);
                left.validate_point(a)?;
                right.validate_point(b)
            }
            ModelSpace::FlatTorus { .. } => Ok(()),
        }
    }

    /// `ω(p)(u, v)` in the storage chart.
    pub fn eval_two_form(&self, p: &ChartPoint, t: &TangentPair) -> Result<f64> {
        let d = self.dim();
        for w in [&t.u, &t.v] {
            if w.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: w.len() });
            }
        }
        self.validate_point(p)?;
        self.eval_unchecked(p, &t.u, &t.v)
    }

    fn eval_unchecked(&self, p: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        Ok(match self {
            ModelSpace::FlatTorus { .. } => cross2(u, v),
            ModelSpace::PuncturedPlane { form } | ModelSpace::TwoHolesPlane { form, .. } => {
                let area = cross2(u, v);
                match form {
                    FormKind::Zero => 0.0,
                    FormKind::Uniform { b } => b * area,
                    FormKind::Magnetic => {
                        let density: f64 = self
                            .removed_points()
                            .iter()
                            .map(|q| 1.0 / ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)))
                            .sum();
                        density * area
                    }
                }
            }
            ModelSpace::TwoSphere { s } => {
                for w in [u, v] {
                    if dot(p, w).abs() > SPHERE_TANGENT_TOL * norm(w).max(1.0) {
                        return Err(Error::InvalidPoint(format!("tangent {w:?} is not orthogonal to {p:?}")));
                    }
                }
                s * dot(p, &cross3(u, v)) / (4.0 * PI)
            }
            ModelSpace::Product { left, right } => {
                let (pa, pb) = self.split(p);
                let (ua, ub) = self.split(u);
                let (va, vb) = self.split(v);
                left.eval_unchecked(pa, ua, va)? + right.eval_unchecked(pb, ub, vb)?
            }
        })
    }

    /// Reduces a cover point to the quotient: the torus fundamental domain
    /// spanned by the lattice, or Cartesian coordinates from log-polar ones.
    pub fn project(&self, cover_point: &[f64]) -> Result<ChartPoint> {
        match self {
            ModelSpace::FlatTorus { lattice: l } => {
                let c = self.lattice_coords(cover_point).expect("torus");
                let (a, b) = (c[0] - c[0].floor(), c[1] - c[1].floor());
                Ok(ChartPoint(vec![a * l[0][0] + b * l[1][0], a * l[0][1] + b * l[1][1]]))
            }
            ModelSpace::PuncturedPlane { .. } => {
                let r = cover_point[0].exp();
                Ok(ChartPoint(vec![r * cover_point[1].cos(), r * cover_point[1].sin()]))
            }
            ModelSpace::TwoHolesPlane { .. } => Ok(ChartPoint(cover_point.to_vec())),
            _ => Err(Error::UnsupportedModel(format!("{} has no cover chart", self.name()))),
        }
    }

    /// Lattice displacement (torus) or winding numbers around each removed
    /// point (punctured planes) of a closed sampled loop.
    pub fn lift_displacement(&self, lp: &[ChartPoint]) -> Result<Vec<i64>> {
        let (first, last) = match (lp.first(), lp.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Invalid("empty loop".into())),
        };
        match self {
            ModelSpace::FlatTorus { .. } => {
                let d: Vec<f64> = last.iter().zip(first.iter()).map(|(a, b)| a - b).collect();
                let c = self.lattice_coords(&d).expect("torus");
                let k = [c[0].round(), c[1].round()];
                let back = self.lattice_vector(k[0] as i64, k[1] as i64).expect("torus");
                let gap = (back[0] - d[0]).hypot(back[1] - d[1]);
                if gap > CLOSURE_TOL {
                    return Err(Error::NotClosed { gap });
                }
                Ok(vec![k[0] as i64, k[1] as i64])
            }
            ModelSpace::PuncturedPlane { .. } | ModelSpace::TwoHolesPlane { .. } => {
                let gap = first.distance(last);
                if gap > CLOSURE_TOL {
                    return Err(Error::NotClosed { gap });
                }
                self.removed_points()
                    .iter()
                    .map(|q| {
                        let total = total_angle(lp, *q)?;
                        Ok((total / (2.0 * PI)).round() as i64)
                    })
                    .collect()
            }
            _ => Err(Error::UnsupportedModel(format!("{} has no cover chart", self.name()))),
        }
    }

    /// The cover translation `d` with `from + d = to`, when the two points
    /// agree in the quotient within [`CLOSURE_TOL`]. It is a lattice vector
    /// on torus factors and zero elsewhere.
    pub fn cover_shift(&self, from: &[f64], to: &[f64]) -> Option<Vec<f64>> {
        match self {
            ModelSpace::FlatTorus { .. } => {
                let d = [to[0] - from[0], to[1] - from[1]];
                let c = self.lattice_coords(&d).expect("torus");
                let k = self.lattice_vector(c[0].round() as i64, c[1].round() as i64).expect("torus");
                ((k[0] - d[0]).hypot(k[1] - d[1]) <= CLOSURE_TOL).then(|| k.to_vec())
            }
            ModelSpace::Product { left, right } => {
                let (fa, fb) = self.split(from);
                let (ta, tb) = self.split(to);
                let mut out = left.cover_shift(fa, ta)?;
                out.extend(right.cover_shift(fb, tb)?);
                Some(out)
            }
            _ => {
                let gap = from.iter().zip(to).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                (gap <= CLOSURE_TOL).then(|| vec![0.0; from.len()])
            }
        }
    }

    /// The cover translation bringing `from` nearest to `to`: the closest
    /// lattice vector on torus factors, zero elsewhere.
    pub fn nearest_shift(&self, from: &[f64], to: &[f64]) -> Vec<f64> {
        match self {
            ModelSpace::FlatTorus { .. } => {
                let c = self.lattice_coords(&[to[0] - from[0], to[1] - from[1]]).expect("torus");
                self.lattice_vector(c[0].round() as i64, c[1].round() as i64).expect("torus").to_vec()
            }
            ModelSpace::Product { left, right } => {
                let (fa, fb) = self.split(from);
                let (ta, tb) = self.split(to);
                let mut out = left.nearest_shift(fa, ta);
                out.extend(right.nearest_shift(fb, tb));
                out
            }
            _ => vec![0.0; from.len()],
        }
    }

    /// Working-chart coordinates of `p`; angles are unwrapped to lie within
    /// π of the corresponding coordinate of `near`.
    pub(crate) fn to_chart(&self, p: &[f64], near: Option<&[f64]>) -> Vec<f64> {
        match self {
            ModelSpace::PuncturedPlane { .. } => {
                let rho = 0.5 * (p[0] * p[0] + p[1] * p[1]).ln();
                let theta = p[1].atan2(p[0]);
                let theta = near.map_or(theta, |n| unwrap_near(theta, n[1]));
                vec![rho, theta]
            }
            ModelSpace::Product { left, right } => {
                let (a, b) = self.split(p);
                let (na, nb) = match near {
                    Some(n) => {
                        let (x, y) = self.split(n);
                        (Some(x), Some(y))
                    }
                    None => (None, None),
                };
                let mut out = left.to_chart(a, na);
                out.extend(right.to_chart(b, nb));
                out
            }
            _ => p.to_vec(),
        }
    }

    /// Storage-chart point of working-chart coordinates `c`.
    pub(crate) fn from_chart(&self, c: &[f64]) -> Vec<f64> {
        match self {
            ModelSpace::PuncturedPlane { .. } => {
                let r = c[0].exp();
                vec![r * c[1].cos(), r * c[1].sin()]
            }
            ModelSpace::TwoSphere { .. } => {
                let n = norm(c);
                c.iter().map(|x| x / n).collect()
            }
            ModelSpace::Product { left, right } => {
                let (a, b) = self.split(c);
                let mut out = left.from_chart(a);
                out.extend(right.from_chart(b));
                out
            }
            _ => c.to_vec(),
        }
    }

    /// Projects interpolated chart coordinates back onto the model (the
    /// sphere factors are renormalized).
    pub(crate) fn normalize_chart(&self, c: &mut [f64]) {
        match self {
            ModelSpace::TwoSphere { .. } => {
                let n = norm(c);
                c.iter_mut().for_each(|x| *x /= n);
            }
            ModelSpace::Product { left, right } => {
                let (a, b) = c.split_at_mut(left.dim());
                left.normalize_chart(a);
                right.normalize_chart(b);
            }
            _ => {}
        }
    }

    /// Whether ω vanishes identically, so that every action is exactly 0.
    pub fn form_vanishes(&self) -> bool {
        match self {
            ModelSpace::PuncturedPlane { form } | ModelSpace::TwoHolesPlane { form, .. } => *form == FormKind::Zero,
            ModelSpace::Product { left, right } => left.form_vanishes() && right.form_vanishes(),
            _ => false,
        }
    }

    /// Whether chart-linear interpolation needs renormalization.
    pub(crate) fn is_curved(&self) -> bool {
        match self {
            ModelSpace::TwoSphere { .. } => true,
            ModelSpace::Product { left, right } => left.is_curved() || right.is_curved(),
            _ => false,
        }
    }

    /// `ω(c)(u, v)` in working-chart coordinates, without validation.
    pub(crate) fn chart_density(&self, c: &[f64], u: &[f64], v: &[f64]) -> f64 {
        match self {
            ModelSpace::FlatTorus { .. } => cross2(u, v),
            ModelSpace::PuncturedPlane { form } => match form {
                FormKind::Zero => 0.0,
                FormKind::Magnetic => cross2(u, v),
                FormKind::Uniform { b } => b * (2.0 * c[0]).exp() * cross2(u, v),
            },
            ModelSpace::TwoHolesPlane { .. } => self.eval_unchecked(c, u, v).unwrap_or(f64::NAN),
            ModelSpace::TwoSphere { s } => s * dot(c, &cross3(u, v)) / (4.0 * PI * norm(c)),
            ModelSpace::Product { left, right } => {
                let (ca, cb) = self.split(c);
                let (ua, ub) = self.split(u);
                let (va, vb) = self.split(v);
                left.chart_density(ca, ua, va) + right.chart_density(cb, ub, vb)
            }
        }
    }
}

/// Whether a chordal chart point stays away from the sphere centers.
pub(crate) fn chordal_ok(space: &ModelSpace, c: &[f64]) -> bool {
    match space {
        ModelSpace::TwoSphere { .. } => norm(c) > 1e-9,
        ModelSpace::Product { left, right } => {
            let (a, b) = c.split_at(left.dim());
            chordal_ok(left, a) && chordal_ok(right, b)
        }
        _ => true,
    }
}

/// Reduced word of ray crossings for a planar polyline.
///
/// Each removed point `p_i` carries the downward ray `{(p_i.x, y) : y < p_i.y}`;
/// crossing it in the `+x` direction contributes `(i, +1)`, in the `-x`
/// direction `(i, -1)`. The complement of the rays is simply connected, so
/// for paths with fixed endpoints off the rays the reduced word is exactly
/// the homotopy class.
pub fn crossing_word(space: &ModelSpace, lp: &[ChartPoint]) -> Vec<(usize, i32)> {
    let holes = space.removed_points();
    let mut word: Vec<(usize, i32)> = Vec::new();
    for w in lp.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut hits: Vec<(f64, usize, i32)> = Vec::new();
        for (i, q) in holes.iter().enumerate() {
            // Half-open convention so that touching the ray line counts once.
            let (sa, sb) = (a[0] >= q[0], b[0] >= q[0]);
            if sa == sb {
                continue;
            }
            let lam = (q[0] - a[0]) / (b[0] - a[0]);
            let y = a[1] + lam * (b[1] - a[1]);
            if y < q[1] {
                hits.push((lam, i, if sb { 1 } else { -1 }));
            }
        }
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (_, i, e) in hits {
            match word.last() {
                Some(&(j, f)) if j == i && f == -e => {
                    word.pop();
                }
                _ => word.push((i, e)),
            }
        }
    }
    word
}

/// Continuous total angle swept around `q` by the polyline `lp`.
pub(crate) fn total_angle(lp: &[ChartPoint], q: [f64; 2]) -> Result<f64> {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for p in lp {
        let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
        if dx.hypot(dy) < REMOVED_POINT_RADIUS {
            return Err(Error::RemovedPoint { point: p.to_vec() });
        }
        let a = dy.atan2(dx);
        if let Some(b) = prev {
            let step = unwrap_near(a, b) - b;
            total += step;
        }
        prev = Some(a);
    }
    Ok(total)
}
