use std::f64::consts::PI;

use crate::action::{concat_all, constant_path, reverse, PathSample};
use crate::error::{Error, Result};
use crate::geometry::{crossing_word, ChartPoint, ModelSpace};

use super::group::{GroupElement, GroupKind, Presentation};
use super::word::{Letter, Word};

/// Which loops represent the components of `Loops(X, x₀)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisFamily {
    /// Straight cover segments on the torus, round circles through `x₀` in
    /// punctured planes.
    Straight,
    /// The straight family plus a sinusoidal perturbation of the given size.
    Wobbled { amplitude: f64 },
    /// `c ∨ ℓ ∨ c̄` where `ℓ` is the straight loop at the end of `c`.
    Conjugated { connector: PathSample },
    /// User-supplied loops, one per generator, all based at `x₀`.
    Sampled { loops: Vec<PathSample> },
}

/// A basis of loops `{ℓ_i}` at a base point, with the constant loop for
/// the identity.
#[derive(Debug, Clone)]
pub struct BasisLoops {
    space: ModelSpace,
    pres: Presentation,
    base: ChartPoint,
    family: BasisFamily,
    n: usize,
}

impl BasisLoops {
    pub fn new(
        space: &ModelSpace,
        pres: &Presentation,
        base: ChartPoint,
        family: BasisFamily,
        n: usize,
    ) -> Result<Self> {
        space.validate_point(&base)?;
        let b = BasisLoops { space: space.clone(), pres: pres.clone(), base, family, n: n.max(4) };
        match &b.family {
            BasisFamily::Conjugated { connector } => {
                if connector.start().distance(&b.base) > 1e-9 {
                    return Err(Error::EndpointMismatch { gap: connector.start().distance(&b.base) });
                }
            }
            BasisFamily::Sampled { loops } => {
                if loops.len() != pres.rank() {
                    return Err(Error::Invalid(format!("expected {} basis loops, got {}", pres.rank(), loops.len())));
                }
                for (i, lp) in loops.iter().enumerate() {
                    if space.cover_shift(lp.start(), &b.base).is_none() {
                        return Err(Error::Invalid(format!("basis loop {i} does not start at the base point")));
                    }
                    let c = b.component_index(lp)?;
                    if !pres.equal(&c, &pres.generator(i)) {
                        return Err(Error::Invalid(format!(
                            "basis loop {i} lies in class {} instead of {}",
                            pres.show_element(&c),
                            pres.generators()[i]
                        )));
                    }
                }
            }
            _ => {}
        }
        Ok(b)
    }

    /// Conventional base points: the torus origin, `(1, 0)` in the
    /// punctured plane, the origin between the two holes, the north pole.
    pub fn default_base(space: &ModelSpace) -> ChartPoint {
        ChartPoint(default_base_coords(space))
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn base(&self) -> &ChartPoint {
        &self.base
    }

    pub fn family(&self) -> &BasisFamily {
        &self.family
    }

    /// Samples per generator loop.
    pub fn resolution(&self) -> usize {
        self.n
    }

    /// The same basis with another family.
    pub fn with_family(&self, family: BasisFamily) -> Result<Self> {
        BasisLoops::new(&self.space, &self.pres, self.base.clone(), family, self.n)
    }

    /// The π₁ class of a closed loop.
    pub fn component_index(&self, lp: &PathSample) -> Result<GroupElement> {
        component_index(&self.space, &self.pres, lp)
    }

    /// The loop of generator `i`, or its reverse.
    pub fn generator_loop(&self, i: usize, inverse: bool) -> Result<PathSample> {
        let lp = match &self.family {
            BasisFamily::Sampled { loops } => loops[i].clone(),
            BasisFamily::Conjugated { connector } => {
                let inner = straight_generator(&self.space, connector.end(), i, self.n)?;
                concat_all(&self.space, &[connector, &inner, &reverse(connector)])?
            }
            BasisFamily::Straight => straight_generator(&self.space, &self.base, i, self.n)?,
            BasisFamily::Wobbled { amplitude } => {
                wobble(&self.space, &straight_generator(&self.space, &self.base, i, self.n)?, *amplitude)?
            }
        };
        Ok(if inverse { reverse(&lp) } else { lp })
    }

    /// `ℓ_g`: the canonical loop of class `g`.
    ///
    /// On the torus the straight family uses the single segment
    /// `x₀ + t(m l₁ + n l₂)`; in the punctured plane the `n`-fold circle.
    /// Otherwise it is the concatenation of generator loops along the
    /// normal-form word.
    pub fn basis_loop(&self, g: &GroupElement) -> Result<PathSample> {
        if self.pres.is_identity(g) {
            return constant_path(&self.space, &self.base);
        }
        match (&self.family, &self.space, g) {
            (BasisFamily::Straight, ModelSpace::FlatTorus { .. }, GroupElement::Abelian(v)) => {
                torus_segment(&self.space, &self.base, v[0], v[1], self.n)
            }
            (BasisFamily::Wobbled { amplitude }, ModelSpace::FlatTorus { .. }, GroupElement::Abelian(v)) => {
                wobble(&self.space, &torus_segment(&self.space, &self.base, v[0], v[1], self.n)?, *amplitude)
            }
            (BasisFamily::Conjugated { connector }, ModelSpace::FlatTorus { .. }, GroupElement::Abelian(v)) => {
                let inner = torus_segment(&self.space, connector.end(), v[0], v[1], self.n)?;
                concat_all(&self.space, &[connector, &inner, &reverse(connector)])
            }
            _ => self.adapted_loop(g),
        }
    }

    /// The concatenation of generator loops along the normal-form word of
    /// `g` (`A^m B^n` on the torus).
    pub fn adapted_loop(&self, g: &GroupElement) -> Result<PathSample> {
        let w = self.pres.normal_word(g);
        self.word_loop(&w)
    }

    /// The concatenation of generator loops along `w`.
    pub fn word_loop(&self, w: &Word) -> Result<PathSample> {
        if w.is_empty() {
            return constant_path(&self.space, &self.base);
        }
        let parts: Vec<PathSample> =
            w.letters().iter().map(|l| self.generator_loop(l.generator, l.inverse)).collect::<Result<_>>()?;
        let refs: Vec<&PathSample> = parts.iter().collect();
        concat_all(&self.space, &refs)
    }
}

fn default_base_coords(space: &ModelSpace) -> Vec<f64> {
    match space {
        ModelSpace::FlatTorus { .. } => vec![0.0, 0.0],
        ModelSpace::PuncturedPlane { .. } => vec![1.0, 0.0],
        ModelSpace::TwoHolesPlane { p1, p2, .. } => vec![0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1])],
        ModelSpace::TwoSphere { .. } => vec![0.0, 0.0, 1.0],
        ModelSpace::Product { left, right } => {
            let mut v = default_base_coords(left);
            v.extend(default_base_coords(right));
            v
        }
    }
}

fn torus_segment(space: &ModelSpace, x0: &[f64], m: i64, n: i64, samples: usize) -> Result<PathSample> {
    let v = space.lattice_vector(m, n).expect("torus");
    PathSample::from_fn(space, samples, |t| vec![x0[0] + t * v[0], x0[1] + t * v[1]])
}

/// The straight loop of generator `i` at `x0`.
pub(crate) fn straight_generator(space: &ModelSpace, x0: &[f64], i: usize, n: usize) -> Result<PathSample> {
    match space {
        ModelSpace::FlatTorus { .. } => {
            let (m, k) = if i == 0 { (1, 0) } else { (0, 1) };
            torus_segment(space, x0, m, k, n)
        }
        ModelSpace::PuncturedPlane { .. } | ModelSpace::TwoHolesPlane { .. } => {
            let q = space.removed_points()[i];
            let (dx, dy) = (x0[0] - q[0], x0[1] - q[1]);
            let r = dx.hypot(dy);
            let a0 = dy.atan2(dx);
            PathSample::from_fn(space, n, |t| {
                if t == 0.0 || t == 1.0 {
                    return x0.to_vec();
                }
                let a = a0 + 2.0 * PI * t;
                vec![q[0] + r * a.cos(), q[1] + r * a.sin()]
            })
        }
        _ => Err(Error::UnsupportedModel(format!("{} has no generator loops", space.name()))),
    }
}

/// Adds `amplitude · (sin 2πt · n̂ + ½ sin 4πt · d̂)` where `d̂` is the chord
/// direction of each sample's neighbourhood and `n̂ ⟂ d̂`; endpoints stay put.
fn wobble(space: &ModelSpace, lp: &PathSample, amplitude: f64) -> Result<PathSample> {
    let pts = lp.points();
    let n = pts.len() - 1;
    let out: Vec<ChartPoint> = pts
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let t = k as f64 / n as f64;
            let (a, b) = (&pts[k.saturating_sub(1)], &pts[(k + 1).min(n)]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy).max(1e-300);
            let (ux, uy) = (dx / len, dy / len);
            let s1 = (2.0 * PI * t).sin();
            let s2 = 0.5 * (4.0 * PI * t).sin();
            let mut q = p.0.clone();
            if k != 0 && k != n {
                q[0] += amplitude * (-uy * s1 + ux * s2);
                q[1] += amplitude * (ux * s1 + uy * s2);
            }
            ChartPoint(q)
        })
        .collect();
    PathSample::new(space, out)
}

/// The π₁ class of a closed loop: lattice displacement on the torus,
/// winding number in the punctured plane, ray-crossing word in the plane
/// minus two points, trivial on spheres.
pub fn component_index(space: &ModelSpace, pres: &Presentation, lp: &PathSample) -> Result<GroupElement> {
    match space {
        ModelSpace::FlatTorus { .. } | ModelSpace::PuncturedPlane { .. } => {
            let d = space.lift_displacement(lp.points())?;
            Ok(GroupElement::Abelian(d))
        }
        ModelSpace::TwoHolesPlane { .. } => {
            if !lp.is_closed() {
                return Err(Error::NotClosed { gap: lp.start().distance(lp.end()) });
            }
            let w = crossing_word(space, lp.points());
            let word = Word(w.into_iter().map(|(i, e)| Letter::new(i, e < 0)).collect());
            Ok(pres.element(&word))
        }
        _ if simply_connected(space) => {
            if !lp.is_closed() {
                return Err(Error::NotClosed { gap: lp.start().distance(lp.end()) });
            }
            match pres.kind() {
                GroupKind::FreeAbelian { rank: 0 } => Ok(pres.identity()),
                _ => Err(Error::Invalid("simply connected model needs the trivial presentation".into())),
            }
        }
        _ => Err(Error::UnsupportedModel(format!("no component detection on {}", space.name()))),
    }
}

fn simply_connected(space: &ModelSpace) -> bool {
    match space {
        ModelSpace::TwoSphere { .. } => true,
        ModelSpace::Product { left, right } => simply_connected(left) && simply_connected(right),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FormKind;

    #[test]
    fn torus_basis_loops() {
        let t = ModelSpace::unit_torus();
        let p = Presentation::free_abelian(&["A", "B"]);
        let b = BasisLoops::new(&t, &p, BasisLoops::default_base(&t), BasisFamily::Straight, 16).unwrap();
        let id = b.basis_loop(&p.identity()).unwrap();
        assert!(id.points().iter().all(|x| x.coords() == [0.0, 0.0]));
        let a = b.basis_loop(&GroupElement::Abelian(vec![1, 0])).unwrap();
        assert_eq!(a.end().coords(), &[1.0, 0.0]);
        let lp = PathSample::from_fn(&t, 10, |s| vec![2.0 * s, 3.0 * s]).unwrap();
        assert_eq!(b.component_index(&lp).unwrap(), GroupElement::Abelian(vec![2, 3]));
        let adapted = b.adapted_loop(&GroupElement::Abelian(vec![2, -1])).unwrap();
        assert_eq!(b.component_index(&adapted).unwrap(), GroupElement::Abelian(vec![2, -1]));
    }

    #[test]
    fn punctured_plane_double_circle() {
        let s = ModelSpace::punctured_plane(FormKind::Magnetic);
        let p = Presentation::free_abelian(&["c"]);
        let b = BasisLoops::new(&s, &p, BasisLoops::default_base(&s), BasisFamily::Straight, 32).unwrap();
        let lp = b.basis_loop(&GroupElement::Abelian(vec![2])).unwrap();
        assert_eq!(b.component_index(&lp).unwrap(), GroupElement::Abelian(vec![2]));
        let inv = b.basis_loop(&GroupElement::Abelian(vec![-1])).unwrap();
        assert_eq!(b.component_index(&inv).unwrap(), GroupElement::Abelian(vec![-1]));
    }

    #[test]
    fn two_holes_generators_read_back() {
        let s = ModelSpace::two_holes([-1.0, 0.0], [1.0, 0.0], FormKind::Zero).unwrap();
        let p = Presentation::free(&["a", "b"]);
        let b = BasisLoops::new(&s, &p, BasisLoops::default_base(&s), BasisFamily::Straight, 32).unwrap();
        for w in ["a", "b", "a b^-1", "b a b^-1 a^-1"] {
            let word = p.parse_word(w).unwrap();
            let lp = b.word_loop(&word).unwrap();
            assert_eq!(b.component_index(&lp).unwrap(), p.element(&word), "{w}");
        }
    }

    #[test]
    fn sampled_loops_are_checked() {
        let t = ModelSpace::unit_torus();
        let p = Presentation::free_abelian(&["A", "B"]);
        let a = PathSample::from_fn(&t, 8, |s| vec![s, 0.0]).unwrap();
        let wrong = PathSample::from_fn(&t, 8, |s| vec![s, s]).unwrap();
        let ok = BasisLoops::new(
            &t,
            &p,
            BasisLoops::default_base(&t),
            BasisFamily::Sampled { loops: vec![a.clone(), PathSample::from_fn(&t, 8, |s| vec![0.0, s]).unwrap()] },
            8,
        );
        assert!(ok.is_ok());
        let bad =
            BasisLoops::new(&t, &p, BasisLoops::default_base(&t), BasisFamily::Sampled { loops: vec![a, wrong] }, 8);
        assert!(bad.is_err());
    }
}
