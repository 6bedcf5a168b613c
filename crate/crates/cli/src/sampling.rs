//! Seeded random loops and paths for the property checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prequantum_core::action::{concat_all, constant_path, resample, reverse, PathSample};
use prequantum_core::geometry::{ChartPoint, ModelSpace};
use prequantum_core::groupoid::{MarkedPoint, Scenario};
use prequantum_core::homotopy_algebra::Word;
use prequantum_core::Result;

// Power-of-two interval counts keep concatenations with the basis loops at
// their own resolution instead of a least common multiple.
const LOOP_INTERVALS: usize = 64;
const PRODUCT_INTERVALS: usize = 128;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Whether [`Sampler::geometric_loop`] can produce loops on `space`.
    pub fn supports(space: &ModelSpace) -> bool {
        match space {
            ModelSpace::FlatTorus { .. } | ModelSpace::PuncturedPlane { .. } | ModelSpace::TwoSphere { .. } => true,
            ModelSpace::Product { left, right } => Self::supports(left) && Self::supports(right),
            ModelSpace::TwoHolesPlane { .. } => false,
        }
    }

    /// A random loop at `base`, or `None` on unsupported models.
    pub fn geometric_loop(&mut self, space: &ModelSpace, base: &[f64]) -> Option<PathSample> {
        self.sample_loop(space, base, false)
    }

    /// A random null-homotopic loop at `base`.
    pub fn null_loop(&mut self, space: &ModelSpace, base: &[f64]) -> Option<PathSample> {
        self.sample_loop(space, base, true)
    }

    fn sample_loop(&mut self, space: &ModelSpace, base: &[f64], null: bool) -> Option<PathSample> {
        match space {
            ModelSpace::FlatTorus { lattice } => Some(self.torus_loop(space, lattice, base, null)),
            ModelSpace::PuncturedPlane { .. } => Some(self.punctured_loop(space, base, null)),
            ModelSpace::TwoSphere { .. } => Some(self.sphere_loop(space, base)),
            ModelSpace::Product { left, right } => {
                let (a, b) = base.split_at(left.dim());
                let l = resample(left, &self.sample_loop(left, a, null)?, PRODUCT_INTERVALS);
                let r = resample(right, &self.sample_loop(right, b, null)?, PRODUCT_INTERVALS);
                let pts = l
                    .points()
                    .iter()
                    .zip(r.points())
                    .map(|(p, q)| ChartPoint::new(p.iter().chain(q.iter()).copied().collect()))
                    .collect();
                Some(PathSample::new(space, pts).expect("product of valid loops"))
            }
            ModelSpace::TwoHolesPlane { .. } => None,
        }
    }

    /// A random loop at the marked point `at`: a geometric loop where the
    /// model supports one, else (at the base point only) a random word in
    /// the basis loops.
    pub fn loop_at(&mut self, scn: &Scenario, at: &MarkedPoint) -> Result<Option<PathSample>> {
        let (Some(space), Some(p)) = (scn.space(), &at.point) else {
            return Ok(None);
        };
        if let Some(l) = self.geometric_loop(space, p) {
            return Ok(Some(l));
        }
        let loops = scn.require_loops()?;
        if at.id != "x0" || scn.presentation().rank() == 0 {
            return Ok(None);
        }
        let rank = scn.presentation().rank();
        let mut w = Word::empty();
        for _ in 0..self.rng.gen_range(1..4) {
            w = w.concat(&Word::letter(self.rng.gen_range(0..rank), self.rng.gen_bool(0.5)));
        }
        loops.word_loop(&w.free_reduce()).map(Some)
    }

    /// A random path between marked points:
    /// `(loop at from) ∨ ρ̄_from ∨ (loop at x₀) ∨ ρ_to`, dropping missing parts.
    pub fn path_between(&mut self, scn: &Scenario, from: &MarkedPoint, to: &MarkedPoint) -> Result<Option<PathSample>> {
        let Some(space) = scn.space() else {
            return Ok(None);
        };
        let x0 = scn.marked_point("x0")?;
        let mut parts: Vec<PathSample> = Vec::new();
        if let Some(l) = self.loop_at(scn, from)? {
            parts.push(l);
        }
        if let Some(r) = &from.reference {
            parts.push(reverse(r));
        }
        if let Some(l) = self.loop_at(scn, x0)? {
            parts.push(l);
        }
        if let Some(r) = &to.reference {
            parts.push(r.clone());
        }
        if parts.is_empty() {
            let p = from.point.as_ref().expect("geometric scenarios have points");
            return constant_path(space, p).map(Some);
        }
        let refs: Vec<&PathSample> = parts.iter().collect();
        concat_all(space, &refs).map(Some)
    }

    fn torus_loop(&mut self, space: &ModelSpace, l: &[[f64; 2]; 2], base: &[f64], null: bool) -> PathSample {
        let at = |u: f64, v: f64| [base[0] + u * l[0][0] + v * l[1][0], base[1] + u * l[0][1] + v * l[1][1]];
        let edges = [2, 4, 8][self.rng.gen_range(0..3)];
        let mut pts = vec![at(0.0, 0.0)];
        for _ in 1..edges {
            pts.push(at(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)));
        }
        let (m, n) = if null { (0, 0) } else { (self.rng.gen_range(-1..=1), self.rng.gen_range(-1..=1)) };
        pts.push(at(m as f64, n as f64));
        let per_edge = LOOP_INTERVALS / edges;
        let mut samples = Vec::new();
        for w in pts.windows(2) {
            for j in 0..per_edge {
                let t = j as f64 / per_edge as f64;
                samples
                    .push(ChartPoint::new(vec![w[0][0] + t * (w[1][0] - w[0][0]), w[0][1] + t * (w[1][1] - w[0][1])]));
            }
        }
        samples.push(ChartPoint::new(pts.last().expect("nonempty").to_vec()));
        PathSample::new(space, samples).expect("torus points are valid")
    }

    /// A trigonometric loop in log-polar coordinates winding −1, 0, 1 or 2
    /// times around the puncture (0 when `null`).
    fn punctured_loop(&mut self, space: &ModelSpace, base: &[f64], null: bool) -> PathSample {
        let rho0 = base[0].hypot(base[1]).ln();
        let theta0 = base[1].atan2(base[0]);
        let turns = if null { 0.0 } else { self.rng.gen_range(-1..=2) as f64 };
        let a: [f64; 2] = [self.rng.gen_range(-0.3..0.3), self.rng.gen_range(-0.15..0.15)];
        let b: [f64; 2] = [self.rng.gen_range(-0.5..0.5), self.rng.gen_range(-0.25..0.25)];
        let base = base.to_vec();
        PathSample::from_fn(space, 128, move |t| {
            if t == 1.0 {
                return base.clone();
            }
            let (s1, s2) = ((2.0 * PI * t).sin(), (4.0 * PI * t).sin());
            let rho = rho0 + a[0] * s1 + a[1] * s2;
            let theta = theta0 + 2.0 * PI * turns * t + b[0] * s1 + b[1] * s2;
            vec![rho.exp() * theta.cos(), rho.exp() * theta.sin()]
        })
        .expect("loops avoid the puncture")
    }

    /// A geodesic polygon `0 → v₁ → … → v_k → 0` in the tangent plane at
    /// `base`, pushed to the sphere by the exponential map.
    fn sphere_loop(&mut self, space: &ModelSpace, base: &[f64]) -> PathSample {
        let (e1, e2) = tangent_frame(base);
        let edges = [4, 8][self.rng.gen_range(0..2)];
        let mut verts = vec![[0.0, 0.0]];
        for _ in 1..edges {
            let r = self.rng.gen_range(0.1..0.8);
            let a = self.rng.gen_range(0.0..2.0 * PI);
            verts.push([r * a.cos(), r * a.sin()]);
        }
        verts.push([0.0, 0.0]);
        let exp = |v: [f64; 2]| -> ChartPoint {
            let n = v[0].hypot(v[1]);
            if n == 0.0 {
                return ChartPoint::new(base.to_vec());
            }
            let (c, s) = (n.cos(), n.sin() / n);
            let mut q: Vec<f64> = (0..3).map(|i| c * base[i] + s * (v[0] * e1[i] + v[1] * e2[i])).collect();
            let len = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            q.iter_mut().for_each(|x| *x /= len);
            ChartPoint::new(q)
        };
        let per_edge = LOOP_INTERVALS / edges;
        let mut samples = Vec::new();
        for w in verts.windows(2) {
            for j in 0..per_edge {
                let t = j as f64 / per_edge as f64;
                samples.push(exp([w[0][0] + t * (w[1][0] - w[0][0]), w[0][1] + t * (w[1][1] - w[0][1])]));
            }
        }
        samples.push(exp([0.0, 0.0]));
        PathSample::new(space, samples).expect("sphere points are unit vectors")
    }
}

/// An orthonormal basis of the tangent plane at the unit vector `p`.
pub fn tangent_frame(p: &[f64]) -> ([f64; 3], [f64; 3]) {
    let helper = if p[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d: f64 = (0..3).map(|i| helper[i] * p[i]).sum();
    let mut e1 = [helper[0] - d * p[0], helper[1] - d * p[1], helper[2] - d * p[2]];
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1.iter_mut().for_each(|x| *x /= n);
    let e2 = [p[1] * e1[2] - p[2] * e1[1], p[2] * e1[0] - p[0] * e1[2], p[0] * e1[1] - p[1] * e1[0]];
    (e1, e2)
}
