//! Invariant suites run against a loaded scenario, and the expectations
//! attached to the built-in corpus.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;

use prequantum_core::action::{concat, concat_all, reverse, PathSample};
use prequantum_core::groupoid::{
    chasles_phi, class_of, compose, flat_class_of, global_psi, holonomy_group, identity_at, inverse, isotropy_probe,
    multiplicative_wavefunction, pushforward_symmetry, Character, Holonomy, Morphism, Scenario, Symmetry,
};
use prequantum_core::homotopy_algebra::{verify_cocycle_identity, BasisFamily, CocycleBacking};
use prequantum_core::periods::{characters_h1, moduli_ext, AbelianInvariants, ExactReal, PeriodGroup, TorusElement};
use prequantum_core::{geometry::ModelSpace, Error};

use crate::report::CheckResult;
use crate::sampling::Sampler;
use crate::scenario_file::ScenarioFile;

/// Sample counts and the seed of every randomized check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Loop or path pairs for the additivity, Chasles and composition checks.
    pub pairs: usize,
    /// Cap on `pairs` for curved models, where each action is costlier.
    pub curved_pairs: usize,
    pub wave_pairs: usize,
    pub symmetries: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0x5eed, pairs: 12, curved_pairs: 3, wave_pairs: 100, symmetries: 10 }
    }
}

pub const WAVE_TOLERANCE: f64 = 1e-9;
pub const BASIS_TOLERANCE: f64 = 1e-5;

type Check = prequantum_core::Result<Option<CheckResult>>;

fn run(name: &str, tolerance: f64, f: impl FnOnce() -> Check) -> Option<CheckResult> {
    match f() {
        Ok(r) => r,
        Err(e) => Some(CheckResult::failed(name, tolerance, e)),
    }
}

fn pair_budget(scn: &Scenario, opts: &VerifyOptions) -> usize {
    match scn.space() {
        Some(sp) if is_curved(sp) => opts.pairs.min(opts.curved_pairs),
        _ => opts.pairs,
    }
}

fn is_curved(space: &ModelSpace) -> bool {
    match space {
        ModelSpace::TwoSphere { .. } => true,
        ModelSpace::Product { left, right } => is_curved(left) || is_curved(right),
        _ => false,
    }
}

/// Every invariant suite that applies to the scenario.
pub fn scenario_checks(scn: &Scenario, file: &ScenarioFile, opts: &VerifyOptions) -> Vec<CheckResult> {
    let tol = file.tolerance;
    let mut sampler = Sampler::new(opts.seed);
    let n = pair_budget(scn, opts);
    let mut out = Vec::new();
    out.extend(cocycle_identity(scn, tol));
    out.extend(relation_snapping(scn, file.snapping.tolerance));
    out.extend(quadrature_errors(scn, tol));
    out.extend(psi_additivity(scn, &mut sampler, n, tol));
    out.extend(chasles_independence(scn, &mut sampler, n, tol));
    let pool = morphism_pool(scn, &mut sampler);
    out.extend(groupoid_axioms(scn, &pool));
    // Each pair costs three classes of long paths.
    out.extend(compose_vs_concat(scn, &mut sampler, n.div_ceil(2), tol));
    out.extend(flat_functoriality(scn, &mut sampler, n));
    out.extend(wave_multiplicativity(scn, &pool, &mut sampler, opts.wave_pairs));
    out.extend(isotropy(scn, tol));
    out.extend(symmetry_invariance(scn, &mut sampler, opts.symmetries, tol));
    out.extend(basis_independence(scn));
    out
}

pub fn cocycle_identity(scn: &Scenario, tol: f64) -> Option<CheckResult> {
    let name = "cocycle identity on generator triples";
    let pres = scn.presentation();
    if pres.rank() == 0 {
        return None;
    }
    let declared = matches!(scn.cocycle().backing(), CocycleBacking::Declared { .. });
    let tol = if declared { 0.0 } else { tol };
    run(name, tol, || {
        let gens: Vec<_> = (0..pres.rank()).map(|i| pres.generator(i)).collect();
        let mut worst = 0.0f64;
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    worst = worst.max(verify_cocycle_identity(scn.cocycle(), a, b, c)?);
                }
            }
        }
        let triples = gens.len().pow(3);
        Ok(Some(CheckResult::measured(name, worst, tol).with_detail(format!("{triples} triples"))))
    })
}

pub fn relation_snapping(scn: &Scenario, snap_tol: f64) -> Option<CheckResult> {
    let name = "relation values snap to exact periods";
    let recs: Vec<_> = scn.relation_values().iter().filter(|r| r.snapped).collect();
    if recs.is_empty() {
        return None;
    }
    let worst = recs.iter().map(|r| scn.p_tor().float_distance(r.raw - r.value.value())).fold(0.0, f64::max);
    Some(CheckResult::measured(name, worst, snap_tol))
}

pub fn quadrature_errors(scn: &Scenario, tol: f64) -> Option<CheckResult> {
    let recs = scn.toric_periods();
    if recs.is_empty() {
        return None;
    }
    let worst = recs.iter().map(|r| r.action.error).fold(0.0, f64::max);
    Some(CheckResult::measured("toric period quadrature error", worst, tol))
}

/// `ψ(ℓ ∨ ℓ′) = ψ(ℓ) + ψ(ℓ′)` on random based loops.
pub fn psi_additivity(scn: &Scenario, sampler: &mut Sampler, pairs: usize, tol: f64) -> Option<CheckResult> {
    let name = "psi additivity on based loops";
    let space = scn.space()?;
    run(name, tol, || {
        let x0 = scn.marked_point("x0")?;
        let mut worst = 0.0f64;
        for _ in 0..pairs {
            let (Some(a), Some(b)) = (sampler.loop_at(scn, x0)?, sampler.loop_at(scn, x0)?) else {
                return Ok(None);
            };
            let lhs = global_psi(scn, &concat(space, &a, &b)?)?;
            let rhs = global_psi(scn, &a)?.try_add(&global_psi(scn, &b)?)?;
            worst = worst.max(lhs.distance(&rhs));
        }
        Ok(Some(CheckResult::measured(name, worst, tol).with_detail(format!("{pairs} pairs"))))
    })
}

/// `Φ(γ, γ′)` with the default connector against a connector carrying an
/// extra loop at `x₀`.
pub fn chasles_independence(scn: &Scenario, sampler: &mut Sampler, pairs: usize, tol: f64) -> Option<CheckResult> {
    let name = "chasles value independent of the connector";
    let space = scn.space()?;
    run(name, tol, || {
        let marks = scn.marked_points();
        let x0 = scn.marked_point("x0")?;
        let mut worst = 0.0f64;
        for k in 0..pairs {
            let from = &marks[k % marks.len()];
            let to = marks.choose(sampler.rng()).expect("x0 is always marked");
            let (Some(g), Some(g2)) = (sampler.path_between(scn, from, to)?, sampler.path_between(scn, from, to)?)
            else {
                return Ok(None);
            };
            let Some(extra) = sampler.loop_at(scn, x0)? else {
                return Ok(None);
            };
            let rho = from.reference.clone().expect("geometric marked points carry references");
            let d1 = rho.clone();
            let d2 = concat(space, &extra, &rho)?;
            let a = chasles_phi(scn, &g, &g2, Some(&d1))?;
            let b = chasles_phi(scn, &g, &g2, Some(&d2))?;
            worst = worst.max(a.distance(&b));
        }
        Ok(Some(CheckResult::measured(name, worst, tol).with_detail(format!("{pairs} pairs"))))
    })
}

/// Classes of a few random paths plus morphisms with random exact phases
/// between every pair of marked points.
pub fn morphism_pool(scn: &Scenario, sampler: &mut Sampler) -> Vec<Morphism> {
    let marks = scn.marked_points();
    let mut pool = Vec::new();
    let geometric = if scn.space().is_some_and(is_curved) { 2 } else { 6 };
    if scn.space().is_some() {
        for k in 0..geometric {
            let from = &marks[k % marks.len()];
            let to = &marks[(k / marks.len() + k) % marks.len()];
            if let Ok(Some(p)) = sampler.path_between(scn, from, to) {
                if let Ok(m) = class_of(scn, &p) {
                    pool.push(m);
                }
            }
        }
    }
    let basis = scn.constants();
    for a in marks {
        for b in marks {
            for _ in 0..2 {
                let rng = sampler.rng();
                let mut text = format!("{}/{}", rng.gen_range(-40..40), rng.gen_range(1..13));
                if basis.len() > 1 && rng.gen_bool(0.5) {
                    let sym = &basis.constants()[rng.gen_range(1..basis.len())].name;
                    let c: i32 = rng.gen_range(-9..9);
                    let sign = if c < 0 { '-' } else { '+' };
                    text.push_str(&format!(" {sign} {}/{}*{sym}", c.abs(), rng.gen_range(1..7)));
                }
                let x = ExactReal::parse(basis, &text).expect("well-formed");
                if let Ok(ph) = scn.phase(&x) {
                    pool.push(Morphism::new(&a.id, &b.id, ph));
                }
            }
        }
    }
    pool
}

/// Associativity, identities and inverses, compared exactly.
pub fn groupoid_axioms(scn: &Scenario, pool: &[Morphism]) -> Option<CheckResult> {
    let name = "groupoid axioms over composable triples";
    run(name, 0.0, || {
        let mut triples = 0usize;
        let mut failures = 0usize;
        for a in pool {
            for b in pool.iter().filter(|b| b.src == a.tgt) {
                for c in pool.iter().filter(|c| c.src == b.tgt) {
                    triples += 1;
                    let l = compose(&compose(a, b)?, c)?;
                    let r = compose(a, &compose(b, c)?)?;
                    failures += usize::from(l != r);
                }
            }
        }
        for m in pool {
            let ids = identity_at(scn, &m.src)?;
            let idt = identity_at(scn, &m.tgt)?;
            failures += usize::from(compose(&ids, m)? != *m);
            failures += usize::from(compose(m, &idt)? != *m);
            failures += usize::from(compose(m, &inverse(m))? != ids);
            failures += usize::from(compose(&inverse(m), m)? != idt);
        }
        Ok(Some(
            CheckResult::measured(name, failures as f64, 0.0)
                .with_detail(format!("{triples} triples, {} morphisms", pool.len())),
        ))
    })
}

/// `[γ] · [γ′] = [γ ∨ γ′]` for random composable paths.
pub fn compose_vs_concat(scn: &Scenario, sampler: &mut Sampler, pairs: usize, tol: f64) -> Option<CheckResult> {
    let name = "composition matches concatenation";
    let space = scn.space()?;
    run(name, tol, || {
        let marks = scn.marked_points();
        let mut worst = 0.0f64;
        for k in 0..pairs {
            let x = &marks[k % marks.len()];
            let y = marks.choose(sampler.rng()).expect("nonempty");
            let z = marks.choose(sampler.rng()).expect("nonempty");
            let (Some(g), Some(g2)) = (sampler.path_between(scn, x, y)?, sampler.path_between(scn, y, z)?) else {
                return Ok(None);
            };
            let lhs = compose(&class_of(scn, &g)?, &class_of(scn, &g2)?)?;
            let rhs = class_of(scn, &concat(space, &g, &g2)?)?;
            worst = worst.max(lhs.distance(&rhs));
        }
        Ok(Some(CheckResult::measured(name, worst, tol).with_detail(format!("{pairs} pairs"))))
    })
}

/// For a flat twist: `[ℓ ∨ ℓ′]_χ = [ℓ]_χ · [ℓ′]_χ` exactly.
pub fn flat_functoriality(scn: &Scenario, sampler: &mut Sampler, pairs: usize) -> Option<CheckResult> {
    let name = "twisted classes are multiplicative";
    let tw = scn.twist()?;
    let space = scn.space()?;
    run(name, 0.0, || {
        let x0 = scn.marked_point("x0")?;
        let mut failures = 0usize;
        for _ in 0..pairs {
            let (Some(a), Some(b)) = (sampler.loop_at(scn, x0)?, sampler.loop_at(scn, x0)?) else {
                return Ok(None);
            };
            let lhs = flat_class_of(scn, tw, &concat(space, &a, &b)?)?;
            let rhs = compose(&flat_class_of(scn, tw, &a)?, &flat_class_of(scn, tw, &b)?)?;
            failures += usize::from(lhs != rhs);
        }
        Ok(Some(CheckResult::measured(name, failures as f64, 0.0).with_detail(format!("{pairs} pairs"))))
    })
}

/// The characters tested on a scenario: two nontrivial discrete ones when
/// `P_ω` is a lattice, a real one when it is trivial, the trivial one when
/// it is dense.
pub fn characters_for(scn: &Scenario) -> Vec<Character> {
    let p = scn.p_omega();
    if p.is_trivial() {
        vec![Character::Real { k: 1.7 }, Character::Real { k: -0.4 }]
    } else if p.is_discrete() {
        vec![Character::Discrete { n: 1 }, Character::Discrete { n: 3 }]
    } else {
        vec![Character::Discrete { n: 0 }]
    }
}

/// `Ψ(m · m′) = Ψ(m) Ψ(m′)` on random composable pairs from the pool.
pub fn wave_multiplicativity(
    scn: &Scenario,
    pool: &[Morphism],
    sampler: &mut Sampler,
    pairs: usize,
) -> Option<CheckResult> {
    let name = "wave functions are multiplicative";
    if pool.is_empty() {
        return None;
    }
    run(name, WAVE_TOLERANCE, || {
        let mut worst = 0.0f64;
        let chars = characters_for(scn);
        for k in 0..pairs {
            let a = pool.choose(sampler.rng()).expect("nonempty");
            let next: Vec<&Morphism> = pool.iter().filter(|b| b.src == a.tgt).collect();
            let b = next.choose(sampler.rng()).expect("every object has outgoing morphisms");
            let chi = &chars[k % chars.len()];
            let ab = compose(a, b)?;
            let lhs = multiplicative_wavefunction(scn, chi, &ab)?;
            let rhs = multiplicative_wavefunction(scn, chi, a)? * multiplicative_wavefunction(scn, chi, b)?;
            worst = worst.max((lhs - rhs).norm());
        }
        let detail = if scn.p_omega().is_discrete() {
            format!("{pairs} pairs")
        } else {
            format!("{pairs} pairs; dense periods admit only the trivial character")
        };
        Ok(Some(CheckResult::measured(name, worst, WAVE_TOLERANCE).with_detail(detail)))
    })
}

/// Phase targets `k/10 · g`, where `g` generates `P_ω` (or is 1).
pub fn isotropy_targets(scn: &Scenario) -> prequantum_core::Result<Vec<TorusElement>> {
    let step = match scn.p_omega().canonical_generator() {
        Some(g) if scn.p_omega().is_discrete() => g.value(),
        _ => 1.0,
    };
    (0..10).map(|k| TorusElement::approximate(scn.p_omega(), k as f64 * step / 10.0)).collect()
}

/// Constructed loops realize ten phases spread over `T_ω`.
pub fn isotropy(scn: &Scenario, tol: f64) -> Option<CheckResult> {
    let name = "isotropy loops realize target phases";
    scn.space()?;
    run(name, tol, || {
        let targets = isotropy_targets(scn)?;
        let loops = match isotropy_probe(scn, "x0", &targets) {
            Ok(l) => l,
            Err(Error::UnreachablePhase(_) | Error::UnsupportedModel(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut worst = 0.0f64;
        for (lp, t) in loops.iter().zip(&targets) {
            worst = worst.max(global_psi(scn, lp)?.distance(t));
        }
        Ok(Some(CheckResult::measured(name, worst, tol).with_detail(format!("{} targets", targets.len()))))
    })
}

/// A random symmetry of the model, if it has a family of them.
pub fn random_symmetry(space: &ModelSpace, sampler: &mut Sampler) -> Option<Symmetry> {
    let rng = sampler.rng();
    match space {
        ModelSpace::FlatTorus { .. } => {
            Some(Symmetry::Translation { by: [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)] })
        }
        ModelSpace::PuncturedPlane { .. } => Some(Symmetry::Rotation { angle: rng.gen_range(-3.0..3.0) }),
        ModelSpace::TwoSphere { .. } => {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let a: f64 = rng.gen_range(0.0..2.0 * PI);
            let r = (1.0 - z * z).sqrt();
            Some(Symmetry::SphereRotation { axis: [r * a.cos(), r * a.sin(), z], angle: rng.gen_range(-1.0..1.0) })
        }
        _ => None,
    }
}

/// Chasles values are unchanged when both paths are pushed forward.
pub fn symmetry_invariance(scn: &Scenario, sampler: &mut Sampler, count: usize, tol: f64) -> Option<CheckResult> {
    let name = "symmetries preserve chasles values";
    let space = scn.space()?;
    random_symmetry(space, &mut Sampler::new(0))?;
    run(name, tol, || {
        let marks = scn.marked_points();
        let mut worst = 0.0f64;
        for k in 0..count {
            let g = random_symmetry(space, sampler).expect("checked above");
            let x = &marks[k % marks.len()];
            let y = marks.choose(sampler.rng()).expect("nonempty");
            // A translation of the torus shifts the value of a non-homotopic
            // pair by the area it sweeps, so the pair differs by a null loop.
            let Some(a) = sampler.path_between(scn, x, y)? else {
                return Ok(None);
            };
            let Some(null) = sampler.null_loop(space, y.point.as_deref().expect("geometric")) else {
                return Ok(None);
            };
            let b = concat(space, &a, &null)?;
            let before = chasles_phi(scn, &a, &b, None)?;
            let after =
                chasles_phi(scn, &pushforward_symmetry(scn, &g, &a)?, &pushforward_symmetry(scn, &g, &b)?, None)?;
            worst = worst.max(before.distance(&after));
        }
        Ok(Some(CheckResult::measured(name, worst, tol).with_detail(format!("{count} symmetries"))))
    })
}

/// `T(w)` recomputed with a wobbled basis and with a basis conjugated by the
/// reference path of a marked point.
pub fn basis_independence(scn: &Scenario) -> Option<CheckResult> {
    let name = "relation values independent of the basis of loops";
    if scn.loops().is_none() || scn.presentation().relations().is_empty() {
        return None;
    }
    if matches!(scn.cocycle().backing(), CocycleBacking::Declared { .. }) {
        return None;
    }
    run(name, BASIS_TOLERANCE, || {
        let mut families = vec![BasisFamily::Wobbled { amplitude: 0.05 }];
        if let Some(r) = scn.marked_points().iter().find(|m| m.id != "x0").and_then(|m| m.reference.clone()) {
            families.push(BasisFamily::Conjugated { connector: r });
        }
        let mut worst = 0.0f64;
        for fam in &families {
            for (new, rec) in scn.relation_values_with(fam.clone())?.iter().zip(scn.relation_values()) {
                worst = worst.max(new.distance(&rec.value));
            }
        }
        Ok(Some(
            CheckResult::measured(name, worst, BASIS_TOLERANCE).with_detail(format!("{} families", families.len())),
        ))
    })
}

/// Expectations attached to the built-in corpus.
pub fn corpus_checks(scn: &Scenario) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let guard = |name: &str, tol: f64, f: &dyn Fn() -> prequantum_core::Result<CheckResult>| match f() {
        Ok(c) => c,
        Err(e) => CheckResult::failed(name, tol, e),
    };
    let basis = scn.constants();
    let sym = |s: &str| ExactReal::symbol(basis, s).expect("scenario symbol");
    let lattice = |x: ExactReal| PeriodGroup::generate(basis, &[x]).expect("generate");
    let sweeps_match = |targets: &[f64], tol: f64| {
        let worst =
            scn.toric_periods().iter().zip(targets).map(|(r, t)| (r.action.value.abs() - t).abs()).fold(0.0, f64::max);
        let ok = scn.toric_periods().len() == targets.len();
        CheckResult::measured("sweep actions match the declared areas", if ok { worst } else { f64::INFINITY }, tol)
    };
    match scn.name() {
        "torus-unit" => {
            out.push(sweeps_match(&[1.0, 1.0], 1e-6));
            out.push(CheckResult::exact(
                "P_omega = Z",
                scn.p_omega().same_group(&lattice(ExactReal::integer(basis, 1))),
            ));
            out.push(guard("tau(A,B) = ±1/2", 1e-5, &|| {
                let p = scn.presentation();
                let (a, b) = (p.generator(0), p.generator(1));
                let ab = scn.cocycle().tau(&a, &b)?.value();
                let ba = scn.cocycle().tau(&b, &a)?.value();
                let r = (ab.abs() - 0.5).abs().max(((ab - ba).abs() - 1.0).abs());
                Ok(CheckResult::measured("tau(A,B) = ±1/2", r, 1e-5))
            }));
            let t = &scn.relation_values()[0];
            out.push(CheckResult::measured("T(commutator) = ±1", (t.raw.abs() - 1.0).abs(), 1e-5));
        }
        "punctured-plane-magnetic" => {
            out.push(CheckResult::exact("P_omega = {0}", scn.p_omega().is_trivial()));
            out.push(guard("annulus action = 2π ln 2", 1e-5, &|| match holonomy_group(scn)? {
                Holonomy::Continuum { witnesses } => {
                    let d = (witnesses[1].1 - witnesses[0].1).abs();
                    Ok(CheckResult::measured("annulus action = 2π ln 2", (d - 2.0 * PI * 2f64.ln()).abs(), 1e-5)
                        .with_detail("radii 1 and 2 give distinct phases"))
                }
                h => Ok(CheckResult::failed("annulus action = 2π ln 2", 1e-5, format!("unexpected holonomy {h:?}"))),
            }));
        }
        "two-holes-flat" => {
            out.push(CheckResult::exact("P_omega = {0}", scn.p_omega().is_trivial()));
            out.push(guard("holonomy trivial", 0.0, &|| match holonomy_group(scn)? {
                Holonomy::Subgroup(g) => Ok(CheckResult::exact("holonomy trivial", g.is_trivial())),
                h => Ok(CheckResult::failed("holonomy trivial", 0.0, format!("{h:?}"))),
            }));
        }
        "genus-2-declared" => {
            out.push(CheckResult::exact("P_tor = {0}", scn.p_tor().is_trivial()));
            out.push(CheckResult::exact(
                "P_omega = 3·Z",
                scn.p_omega().same_group(&lattice(ExactReal::integer(basis, 3))),
            ));
        }
        "s2xs2-rational" => {
            out.push(sweeps_match(&[1.3, 1.3 * 2.0 / 3.0], 1e-5));
            let third = sym("s1").scale(&prequantum_core::periods::parse_rational("1/3").expect("rational"));
            out.push(CheckResult::exact("P_omega = (1/3)·s1·Z", scn.p_omega().canonical_generator() == Some(&third)));
        }
        "s2xs2-irrational" => {
            out.push(sweeps_match(&[1.3, 1.3 * 2f64.sqrt()], 1e-5));
            out.push(CheckResult::exact("P_omega is dense", !scn.p_omega().is_discrete()));
        }
        "aharonov-bohm" => {
            out.push(guard("winding-n loops carry phase n/2", 0.0, &|| {
                let tw = scn.twist().expect("twisted scenario");
                let space = scn.require_space()?;
                let unit = PathSample::from_fn(space, 64, |t| {
                    if t == 1.0 {
                        return vec![1.0, 0.0];
                    }
                    vec![(2.0 * PI * t).cos(), (2.0 * PI * t).sin()]
                })?;
                let mut failures = 0;
                for n in -2i64..=3 {
                    let lp = winding(space, &unit, n)?;
                    let m = flat_class_of(scn, tw, &lp)?;
                    let want = scn.phase(&ExactReal::ratio(basis, n, 2))?;
                    failures += usize::from(m.phase != want);
                }
                Ok(CheckResult::measured("winding-n loops carry phase n/2", failures as f64, 0.0))
            }));
            out.push(guard("holonomy = (1/2)·Z", 0.0, &|| match holonomy_group(scn)? {
                Holonomy::Subgroup(g) => {
                    Ok(CheckResult::exact("holonomy = (1/2)·Z", g.same_group(&lattice(ExactReal::ratio(basis, 1, 2)))))
                }
                h => Ok(CheckResult::failed("holonomy = (1/2)·Z", 0.0, format!("{h:?}"))),
            }));
            let h1 = characters_h1(&scn.presentation().abelianization(), scn.p_omega());
            out.push(CheckResult::exact("H^1 = T_omega", h1.to_string() == "T_ω"));
        }
        _ => {}
    }
    out
}

/// `ℓ^n` (or the constant loop).
fn winding(space: &ModelSpace, unit: &PathSample, n: i64) -> prequantum_core::Result<PathSample> {
    let base = if n < 0 { reverse(unit) } else { unit.clone() };
    if n == 0 {
        return prequantum_core::action::constant_path(space, unit.start());
    }
    let parts: Vec<&PathSample> = std::iter::repeat_n(&base, n.unsigned_abs() as usize).collect();
    concat_all(space, &parts)
}

/// Extension groups of small abelian groups by small period lattices.
pub fn moduli_checks() -> Vec<CheckResult> {
    let basis = prequantum_core::periods::BasisConstants::standard();
    let z = PeriodGroup::generate(&basis, &[ExactReal::integer(&basis, 1)]).expect("Z");
    let cases: [(AbelianInvariants, usize, &str); 3] = [
        (AbelianInvariants::free(2), 1, "0"),
        (AbelianInvariants::new(0, &[3]), 1, "Z/3"),
        (AbelianInvariants::new(1, &[2]), 2, "Z/2 ⊕ Z/2"),
    ];
    cases
        .into_iter()
        .map(|(a, k, want)| {
            let got = if k == 1 {
                moduli_ext(&a, &z).to_string()
            } else {
                prequantum_core::periods::moduli::ext_into_free(&a, k).to_string()
            };
            let target = if k == 1 { "Z".to_string() } else { format!("Z^{k}") };
            CheckResult::exact(&format!("Ext({a}, {target}) = {want}"), got == want).with_detail(format!("got {got}"))
        })
        .collect()
}
