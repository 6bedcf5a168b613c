use std::f64::consts::PI;

use crate::action::{constant_path, PathSample};
use crate::error::{Error, Result};
use crate::geometry::{cross3, ChartPoint, FormKind, ModelSpace};
use crate::periods::TorusElement;

use super::scenario::Scenario;

/// For each target phase, a contractible loop at the marked point `x`
/// whose `ψ` is that phase: a rectangle on the torus and in the punctured
/// planes, a spherical cap (drawn as a lollipop from `x`) on spheres.
pub fn isotropy_probe(scn: &Scenario, x: &str, targets: &[TorusElement]) -> Result<Vec<PathSample>> {
    let space = scn.require_space()?;
    let p = scn
        .marked_point(x)?
        .point
        .clone()
        .ok_or_else(|| Error::UnsupportedModel("marked point without coordinates".into()))?;
    let n = scn.settings().n_steps.max(8);
    targets
        .iter()
        .map(|t| {
            if t.is_zero() {
                return constant_path(space, &p);
            }
            let a = if scn.p_omega().is_discrete() && !scn.p_omega().is_trivial() {
                t.canonical_value()
            } else {
                t.value()
            };
            let pts = probe_points(space, &p, a, n)?;
            PathSample::new(space, pts.into_iter().map(ChartPoint).collect())
        })
        .collect()
}

fn probe_points(space: &ModelSpace, p: &[f64], a: f64, n: usize) -> Result<Vec<Vec<f64>>> {
    let side = (n / 4).max(2);
    match space {
        ModelSpace::FlatTorus { .. } => {
            let a = a.rem_euclid(space.torus_area().expect("torus"));
            let (w, h) = (0.5, 2.0 * a);
            Ok(polygon(&[p.to_vec(), vec![p[0] + w, p[1]], vec![p[0] + w, p[1] + h], vec![p[0], p[1] + h]], side))
        }
        ModelSpace::PuncturedPlane { form: FormKind::Magnetic } => {
            // A rectangle in (ln r, θ), where the form is dρ ∧ dθ.
            let c = space.to_chart(p, None);
            let corners = [c.clone(), vec![c[0] + a, c[1]], vec![c[0] + a, c[1] + 1.0], vec![c[0], c[1] + 1.0]];
            let mut pts: Vec<Vec<f64>> = polygon(&corners, side).iter().map(|q| space.from_chart(q)).collect();
            pin_ends(&mut pts, p);
            Ok(pts)
        }
        ModelSpace::PuncturedPlane { form: FormKind::Uniform { b } } => {
            // Outward radial side first keeps the puncture outside.
            let r = p[0].hypot(p[1]);
            let (er, et) = ([p[0] / r, p[1] / r], [-p[1] / r, p[0] / r]);
            let (w, h) = (0.5, a / (0.5 * b));
            let q = |x: f64, y: f64| vec![p[0] + x * er[0] + y * et[0], p[1] + x * er[1] + y * et[1]];
            Ok(polygon(&[p.to_vec(), q(w, 0.0), q(w, h), q(0.0, h)], side))
        }
        ModelSpace::TwoSphere { s } => Ok(cap(p, a.rem_euclid(*s) / s, n)),
        ModelSpace::Product { left, right } => {
            let k = left.dim();
            let (pl, pr) = p.split_at(k);
            match probe_points(left, pl, a, n) {
                Ok(pts) => Ok(pts.into_iter().map(|q| [q.as_slice(), pr].concat()).collect()),
                Err(_) => Ok(probe_points(right, pr, a, n)?.into_iter().map(|q| [pl, q.as_slice()].concat()).collect()),
            }
        }
        ModelSpace::PuncturedPlane { form: FormKind::Zero }
        | ModelSpace::TwoHolesPlane { form: FormKind::Zero, .. } => {
            Err(Error::UnreachablePhase(format!("ψ vanishes identically on {}", space.name())))
        }
        ModelSpace::TwoHolesPlane { .. } => {
            Err(Error::UnsupportedModel(format!("no constructive isotropy loops on {}", space.name())))
        }
    }
}

/// Closed polygon through `corners` with `side` intervals per edge.
fn polygon(corners: &[Vec<f64>], side: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(corners.len() * side + 1);
    for (i, a) in corners.iter().enumerate() {
        let b = &corners[(i + 1) % corners.len()];
        for k in 0..side {
            let w = k as f64 / side as f64;
            out.push(a.iter().zip(b).map(|(x, y)| x + w * (y - x)).collect());
        }
    }
    out.push(corners[0].clone());
    out
}

fn pin_ends(pts: &mut [Vec<f64>], p: &[f64]) {
    let last = pts.len() - 1;
    pts[0] = p.to_vec();
    pts[last] = p.to_vec();
}

/// A loop from `p` out to the circle bounding the cap about `p` of area
/// fraction `f`, once around it, and back.
fn cap(p: &[f64], f: f64, n: usize) -> Vec<Vec<f64>> {
    let theta = polygon_radius(f, n);
    let helper = if p[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e2 = normalize(cross3(p, &helper));
    let e1 = cross3(&e2, p);
    let at = |th: f64, phi: f64| -> Vec<f64> {
        let (st, ct) = th.sin_cos();
        let (sp, cp) = phi.sin_cos();
        (0..3).map(|i| ct * p[i] + st * (cp * e1[i] + sp * e2[i])).collect()
    };
    let spoke = (n / 4).max(2);
    let mut out: Vec<Vec<f64>> = (0..spoke).map(|k| at(theta * k as f64 / spoke as f64, 0.0)).collect();
    out.extend((0..n).map(|k| at(theta, 2.0 * PI * k as f64 / n as f64)));
    out.extend((0..=spoke).map(|k| at(theta * (spoke - k) as f64 / spoke as f64, 0.0)));
    pin_ends(&mut out, p);
    out
}

/// Angular radius of the regular geodesic `n`-gon enclosing the fraction
/// `f` of the sphere. Each of its `n` central triangles has legs `θ` and
/// apex angle `2π/n`, so its excess is `2 atan(t² sin C / (1 + t² cos C))`
/// with `t = tan(θ/2)`.
fn polygon_radius(f: f64, n: usize) -> f64 {
    let c = 2.0 * PI / n as f64;
    let fraction = |th: f64| {
        let t2 = (0.5 * th).tan().powi(2);
        n as f64 * 2.0 * (t2 * c.sin()).atan2(1.0 + t2 * c.cos()) / (4.0 * PI)
    };
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fraction(mid) < f {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}
