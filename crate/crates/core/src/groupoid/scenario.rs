use std::sync::Arc;

use crate::action::{
    action_integral, constant_path, sphere_sweep, ActionResult, HomotopySample, PathSample, QuadratureSettings,
};
use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, ModelSpace};
use crate::homotopy_algebra::{
    accumulated_cocycle, straight_generator, BasisFamily, BasisLoops, CocycleBacking, CocycleTable, DeclaredEntry,
    Presentation,
};
use crate::periods::{
    relation_probe, total_periods, BasisConstants, Constant, ExactReal, PeriodGroup, Snapper, TorusElement,
};

use super::flat::FlatTwist;

/// Grid sizes and quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Slices of every homotopy.
    pub s_steps: usize,
    /// Samples per loop.
    pub n_steps: usize,
    pub quadrature: QuadratureSettings,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { s_steps: 256, n_steps: 256, quadrature: QuadratureSettings::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SnapConfig {
    /// Empty means every basis symbol, with `one` tried last.
    pub candidates: Vec<ExactReal>,
    pub tolerance: f64,
    pub max_denominator: i64,
}

impl Default for SnapConfig {
    fn default() -> Self {
        SnapConfig { candidates: Vec::new(), tolerance: 1e-5, max_denominator: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct MarkedPointSpec {
    pub id: String,
    /// Path from the base point to the marked point.
    pub reference: PathSample,
}

/// Everything needed to build a [`Scenario`].
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub name: String,
    /// `None` for purely algebraic scenarios (declared cocycle and periods).
    pub space: Option<ModelSpace>,
    pub presentation: Presentation,
    pub basis_family: BasisFamily,
    pub base_point: Option<ChartPoint>,
    pub marked: Vec<MarkedPointSpec>,
    pub constants: Arc<BasisConstants>,
    pub snap: SnapConfig,
    /// Declared `τ` entries; a declared table replaces the geometric one.
    pub declared: Option<(Vec<DeclaredEntry>, Option<ExactReal>)>,
    /// Toric periods used when there is no geometry.
    pub declared_periods: Vec<ExactReal>,
    /// One value per generator.
    pub twist: Option<Vec<ExactReal>>,
    pub settings: Settings,
}

impl ScenarioConfig {
    pub fn new(name: &str, space: Option<ModelSpace>, presentation: Presentation) -> Self {
        ScenarioConfig {
            name: name.to_string(),
            space,
            presentation,
            basis_family: BasisFamily::Straight,
            base_point: None,
            marked: Vec::new(),
            constants: BasisConstants::standard(),
            snap: SnapConfig::default(),
            declared: None,
            declared_periods: Vec::new(),
            twist: None,
            settings: Settings::default(),
        }
    }
}

/// A toric or spherical period found by integrating a sweep.
#[derive(Debug, Clone)]
pub struct PeriodRecord {
    pub label: String,
    pub action: ActionResult,
    pub exact: ExactReal,
    pub snapped: bool,
}

/// `T(w)` for a relation `w`.
#[derive(Debug, Clone)]
pub struct RelationRecord {
    pub word: String,
    /// Raw representative of the fold, before snapping.
    pub raw: f64,
    pub value: TorusElement,
    pub snapped: bool,
}

#[derive(Debug, Clone)]
pub struct MarkedPoint {
    pub id: String,
    pub point: Option<ChartPoint>,
    pub reference: Option<PathSample>,
}

/// A loaded model with its reference system (base point, marked points,
/// basis loops) and period data.
pub struct Scenario {
    name: String,
    space: Option<ModelSpace>,
    pres: Presentation,
    loops: Option<BasisLoops>,
    constants: Arc<BasisConstants>,
    table: CocycleTable,
    p_tor: Arc<PeriodGroup>,
    p_omega: Arc<PeriodGroup>,
    toric: Vec<PeriodRecord>,
    relations: Vec<RelationRecord>,
    marked: Vec<MarkedPoint>,
    twist: Option<FlatTwist>,
    settings: Settings,
    warnings: Vec<String>,
}

/// A homotopy whose action is a toric (or spherical) period.
pub struct Sweep {
    pub label: String,
    pub homotopy: HomotopySample,
}

impl Scenario {
    pub fn build(cfg: ScenarioConfig) -> Result<Self> {
        let mut warnings = relation_probe(&cfg.constants);
        let pres = cfg.presentation.clone();
        let settings = cfg.settings;
        let loops = match &cfg.space {
            Some(space) => {
                space.validate()?;
                let base = cfg.base_point.clone().unwrap_or_else(|| BasisLoops::default_base(space));
                Some(BasisLoops::new(space, &pres, base, cfg.basis_family.clone(), settings.n_steps)?)
            }
            None => None,
        };
        if loops.is_none() && cfg.declared.is_none() {
            return Err(Error::Invalid("a scenario without a space needs a declared cocycle".into()));
        }

        let mut basis = cfg.constants.clone();
        let mut fresh = 0usize;

        // Toric periods.
        let mut toric = Vec::new();
        if let (Some(space), Some(lp)) = (&cfg.space, &loops) {
            for sw in toric_sweeps(space, lp.base(), &settings)? {
                let action = action_integral(space, &sw.homotopy, &settings.quadrature)?;
                let (exact, snapped) =
                    snap_or_fresh(&mut basis, &cfg, action.value, &sw.label, &mut fresh, &mut warnings)?;
                toric.push(PeriodRecord { label: sw.label, action, exact, snapped });
            }
        }
        let mut tor_gens: Vec<ExactReal> = cfg.declared_periods.clone();
        tor_gens.extend(toric.iter().map(|r| r.exact.clone()));
        let tor_gens = rebase_all(&tor_gens, &basis)?;
        for r in toric.iter_mut() {
            r.exact = r.exact.rebase(&basis)?;
        }
        let mut p_tor = Arc::new(PeriodGroup::generate(&basis, &tor_gens)?);
        let mut table = make_table(&cfg, &pres, loops.as_ref(), &basis, &p_tor)?;

        // Relation values.
        let mut raw = Vec::new();
        for w in pres.relations() {
            raw.push(accumulated_cocycle(&table, w)?);
        }
        let mut snapped_reps = Vec::new();
        for (w, t) in pres.relations().iter().zip(&raw) {
            if t.is_exact() {
                snapped_reps.push((t.rep().clone(), true));
            } else {
                let label = format!("T({})", pres.show(w));
                snapped_reps.push(snap_or_fresh(&mut basis, &cfg, t.value(), &label, &mut fresh, &mut warnings)?);
            }
        }
        if p_tor.basis().len() != basis.len() {
            p_tor = Arc::new(p_tor.rebase(&basis)?);
            for r in toric.iter_mut() {
                r.exact = r.exact.rebase(&basis)?;
            }
            table = make_table(&cfg, &pres, loops.as_ref(), &basis, &p_tor)?;
        }
        let mut tvals = Vec::new();
        for (rep, _) in &snapped_reps {
            tvals.push(TorusElement::new(&p_tor, rep.rebase(&basis)?, true)?);
        }
        let p_omega = Arc::new(total_periods(&p_tor, &tvals)?);
        let relations = pres
            .relations()
            .iter()
            .zip(&raw)
            .zip(&snapped_reps)
            .map(|((w, t), (rep, snapped))| {
                Ok(RelationRecord {
                    word: pres.show(w),
                    raw: t.value(),
                    value: TorusElement::new(&p_tor, rep.rebase(&basis)?, true)?,
                    snapped: *snapped,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let marked = marked_points(&cfg, loops.as_ref())?;
        let twist = match &cfg.twist {
            Some(values) => Some(FlatTwist::new(&pres, &p_omega, &rebase_all(values, &basis)?)?),
            None => None,
        };

        Ok(Scenario {
            name: cfg.name,
            space: cfg.space,
            pres,
            loops,
            constants: basis,
            table,
            p_tor,
            p_omega,
            toric,
            relations,
            marked,
            twist,
            settings,
            warnings,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> Option<&ModelSpace> {
        self.space.as_ref()
    }

    /// The space, or `UnsupportedModel` for algebraic scenarios.
    pub fn require_space(&self) -> Result<&ModelSpace> {
        self.space.as_ref().ok_or_else(|| Error::UnsupportedModel(format!("scenario `{}` has no geometry", self.name)))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn loops(&self) -> Option<&BasisLoops> {
        self.loops.as_ref()
    }

    pub fn require_loops(&self) -> Result<&BasisLoops> {
        self.loops.as_ref().ok_or_else(|| Error::UnsupportedModel(format!("scenario `{}` has no geometry", self.name)))
    }

    /// The basis constants, including fresh symbols added while snapping.
    pub fn constants(&self) -> &Arc<BasisConstants> {
        &self.constants
    }

    pub fn cocycle(&self) -> &CocycleTable {
        &self.table
    }

    pub fn p_tor(&self) -> &Arc<PeriodGroup> {
        &self.p_tor
    }

    pub fn p_omega(&self) -> &Arc<PeriodGroup> {
        &self.p_omega
    }

    pub fn toric_periods(&self) -> &[PeriodRecord] {
        &self.toric
    }

    pub fn relation_values(&self) -> &[RelationRecord] {
        &self.relations
    }

    pub fn marked_points(&self) -> &[MarkedPoint] {
        &self.marked
    }

    pub fn marked_point(&self, id: &str) -> Result<&MarkedPoint> {
        self.marked.iter().find(|m| m.id == id).ok_or_else(|| Error::Invalid(format!("no marked point `{id}`")))
    }

    pub fn twist(&self) -> Option<&FlatTwist> {
        self.twist.as_ref()
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The id of the marked point equal to `p` in the quotient.
    pub fn marked_at(&self, p: &[f64]) -> Result<&MarkedPoint> {
        let space = self.require_space()?;
        self.marked
            .iter()
            .find(|m| m.point.as_ref().is_some_and(|q| space.cover_shift(q, p).is_some()))
            .ok_or_else(|| Error::UnmarkedEndpoint(p.to_vec()))
    }

    /// Reduces an exact value into `T_ω`.
    pub fn phase(&self, x: &ExactReal) -> Result<TorusElement> {
        TorusElement::new(&self.p_omega, x.rebase(&self.constants)?, true)
    }

    /// Recomputes `T(w)` for every relation with another basis family, as
    /// elements of `T_tor`.
    pub fn relation_values_with(&self, family: BasisFamily) -> Result<Vec<TorusElement>> {
        let loops = self.require_loops()?.with_family(family)?;
        let table = CocycleTable::new(
            &self.pres,
            CocycleBacking::Geometric { loops, s_steps: self.settings.s_steps, quadrature: self.settings.quadrature },
            &self.p_tor,
        )?;
        self.pres.relations().iter().map(|w| accumulated_cocycle(&table, w)).collect()
    }
}

fn rebase_all(xs: &[ExactReal], basis: &Arc<BasisConstants>) -> Result<Vec<ExactReal>> {
    xs.iter().map(|x| x.rebase(basis)).collect()
}

fn make_table(
    cfg: &ScenarioConfig,
    pres: &Presentation,
    loops: Option<&BasisLoops>,
    basis: &Arc<BasisConstants>,
    p_tor: &Arc<PeriodGroup>,
) -> Result<CocycleTable> {
    let backing = match (&cfg.declared, loops) {
        (Some((entries, default)), _) => CocycleBacking::Declared {
            entries: entries
                .iter()
                .map(|e| Ok(DeclaredEntry { i: e.i.clone(), j: e.j.clone(), value: e.value.rebase(basis)? }))
                .collect::<Result<_>>()?,
            default: default.as_ref().map(|d| d.rebase(basis)).transpose()?,
        },
        (None, Some(l)) => CocycleBacking::Geometric {
            loops: l.clone(),
            s_steps: cfg.settings.s_steps,
            quadrature: cfg.settings.quadrature,
        },
        (None, None) => unreachable!("checked in build"),
    };
    CocycleTable::new(pres, backing, p_tor)
}

/// Snaps `v` against the scenario table, or extends `basis` with a fresh
/// symbol `period_k` carrying the float value.
fn snap_or_fresh(
    basis: &mut Arc<BasisConstants>,
    cfg: &ScenarioConfig,
    v: f64,
    label: &str,
    fresh: &mut usize,
    warnings: &mut Vec<String>,
) -> Result<(ExactReal, bool)> {
    let candidates = if cfg.snap.candidates.is_empty() {
        let mut c: Vec<ExactReal> =
            basis.constants()[1..].iter().map(|k| ExactReal::symbol(basis, &k.name)).collect::<Result<_>>()?;
        c.push(ExactReal::integer(basis, 1));
        c
    } else {
        rebase_all(&cfg.snap.candidates, basis)?
    };
    let snapper = Snapper::new(candidates, cfg.snap.tolerance, cfg.snap.max_denominator);
    if let Some(x) = snapper.snap(v) {
        return Ok((x, true));
    }
    *fresh += 1;
    let name = format!("period_{fresh}");
    warnings.push(format!("{label} = {v:.12} matched no snapping candidate; introduced symbol `{name}`"));
    *basis = basis.extended(vec![Constant { name: name.clone(), value: v, independent: true }])?;
    Ok((ExactReal::symbol(basis, &name)?, false))
}

/// The sweeps whose actions generate `P_tor`: the two lattice sweeps of the
/// torus, a rotated generator circle per puncture, the latitude sweep of
/// each sphere, and the factor sweeps of a product.
pub fn toric_sweeps(space: &ModelSpace, base: &[f64], settings: &Settings) -> Result<Vec<Sweep>> {
    let (s, n) = (settings.s_steps, settings.n_steps);
    match space {
        ModelSpace::FlatTorus { .. } => {
            let l1 = space.lattice_vector(1, 0).expect("torus");
            let l2 = space.lattice_vector(0, 1).expect("torus");
            let sweep = |a: [f64; 2], b: [f64; 2]| {
                HomotopySample::from_fn(space, s, n, |u, t| {
                    vec![base[0] + t * a[0] + u * b[0], base[1] + t * a[1] + u * b[1]]
                })
            };
            Ok(vec![
                Sweep { label: "sweep A along B".into(), homotopy: sweep(l1, l2)? },
                Sweep { label: "sweep B along A".into(), homotopy: sweep(l2, l1)? },
            ])
        }
        ModelSpace::PuncturedPlane { .. } | ModelSpace::TwoHolesPlane { .. } => {
            let mut out = Vec::new();
            for i in 0..space.removed_points().len() {
                let lp = straight_generator(space, base, i, n)?;
                out.push(Sweep { label: format!("rotate loop {}", i + 1), homotopy: rotation_sweep(space, &lp)? });
            }
            Ok(out)
        }
        ModelSpace::TwoSphere { s: scale } => {
            let (sp, h) = sphere_sweep(*scale, s, n)?;
            debug_assert_eq!(&sp, space);
            // Rotate the sweep so that its poles sit at the base point.
            let h = h.map_points(space, |p| rotate_pole_to(p, base))?;
            Ok(vec![Sweep { label: "sphere sweep".into(), homotopy: h }])
        }
        ModelSpace::Product { left, right } => {
            let k = left.dim();
            let (bl, br) = base.split_at(k);
            let mut out = Vec::new();
            for sw in toric_sweeps(left, bl, settings)? {
                let h = sw.homotopy.map_points(space, |p| [p, br].concat())?;
                out.push(Sweep { label: format!("left: {}", sw.label), homotopy: h });
            }
            for sw in toric_sweeps(right, br, settings)? {
                let h = sw.homotopy.map_points(space, |p| [bl, p].concat())?;
                out.push(Sweep { label: format!("right: {}", sw.label), homotopy: h });
            }
            Ok(out)
        }
    }
}

/// `Φ(s_j, t_k) = ℓ(t_{k+j})`: the loop of loops obtained by moving the
/// starting point once around `ℓ`.
fn rotation_sweep(space: &ModelSpace, lp: &PathSample) -> Result<HomotopySample> {
    let pts = lp.points();
    let n = pts.len() - 1;
    let rows = (0..=n).map(|j| (0..=n).map(|k| pts[(k + j) % n].clone()).collect()).collect();
    HomotopySample::new(space, rows)
}

/// The rotation taking the north pole to `base`, applied to `p`.
fn rotate_pole_to(p: &[f64], base: &[f64]) -> Vec<f64> {
    let (x, y, z) = (base[0], base[1], base[2]);
    if (z - 1.0).abs() < 1e-15 {
        return p.to_vec();
    }
    if (z + 1.0).abs() < 1e-15 {
        return vec![p[0], -p[1], -p[2]];
    }
    // Rodrigues rotation about e_z × base.
    let axis = [-y, x, 0.0];
    let sin = axis[0].hypot(axis[1]);
    let k = [axis[0] / sin, axis[1] / sin, 0.0];
    let cos = z;
    let kxp = [k[1] * p[2] - k[2] * p[1], k[2] * p[0] - k[0] * p[2], k[0] * p[1] - k[1] * p[0]];
    let kdp = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
    (0..3).map(|i| p[i] * cos + kxp[i] * sin + k[i] * kdp * (1.0 - cos)).collect()
}

fn marked_points(cfg: &ScenarioConfig, loops: Option<&BasisLoops>) -> Result<Vec<MarkedPoint>> {
    let Some(loops) = loops else {
        if let Some(m) = cfg.marked.iter().find(|m| m.id != "x0") {
            return Err(Error::UnsupportedModel(format!("marked point `{}` needs a space", m.id)));
        }
        return Ok(vec![MarkedPoint { id: "x0".into(), point: None, reference: None }]);
    };
    let space = loops.space();
    let base = loops.base().clone();
    let mut out = Vec::new();
    if !cfg.marked.iter().any(|m| m.id == "x0") {
        out.push(MarkedPoint {
            id: "x0".into(),
            point: Some(base.clone()),
            reference: Some(constant_path(space, &base)?),
        });
    }
    for m in &cfg.marked {
        if out.iter().any(|o: &MarkedPoint| o.id == m.id) {
            return Err(Error::Invalid(format!("duplicate marked point `{}`", m.id)));
        }
        let Some(shift) = space.cover_shift(m.reference.start(), &base) else {
            return Err(Error::EndpointMismatch { gap: m.reference.start().distance(&base) });
        };
        // Store the reference path starting exactly at the base point.
        let r = m.reference.shifted(&shift);
        space.validate_point(r.end())?;
        out.push(MarkedPoint { id: m.id.clone(), point: Some(r.end().clone()), reference: Some(r) });
    }
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            if let (Some(p), Some(q)) = (&a.point, &b.point) {
                if space.cover_shift(p, q).is_some() {
                    return Err(Error::Invalid(format!("marked points `{}` and `{}` coincide", a.id, b.id)));
                }
            }
        }
    }
    Ok(out)
}
