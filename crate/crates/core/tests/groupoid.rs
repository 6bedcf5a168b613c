use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prequantum_core::action::{concat, reverse, PathSample};
use prequantum_core::geometry::{ChartPoint, FormKind, ModelSpace};
use prequantum_core::groupoid::*;
use prequantum_core::homotopy_algebra::{verify_cocycle_identity, DeclaredEntry, Presentation};
use prequantum_core::periods::{ExactReal, TorusElement};
use prequantum_core::Error;

fn torus() -> Scenario {
    let cfg = ScenarioConfig::new("torus", Some(ModelSpace::unit_torus()), Presentation::free_abelian(&["A", "B"]));
    Scenario::build(cfg).unwrap()
}

fn segment(space: &ModelSpace, a: [f64; 2], b: [f64; 2], n: usize) -> PathSample {
    PathSample::from_fn(space, n, |t| vec![a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]).unwrap()
}

fn circle(space: &ModelSpace, r: f64, turns: i32, n: usize) -> PathSample {
    PathSample::from_fn(space, n, |t| {
        if t == 1.0 {
            return vec![r, 0.0];
        }
        let a = 2.0 * PI * turns as f64 * t;
        vec![r * a.cos(), r * a.sin()]
    })
    .unwrap()
}

fn punctured(form: FormKind, twist: Option<&str>) -> Scenario {
    let sp = ModelSpace::punctured_plane(form);
    let mut cfg = ScenarioConfig::new("pp", Some(sp.clone()), Presentation::free_abelian(&["c"]));
    cfg.marked.push(MarkedPointSpec { id: "y".into(), reference: segment(&sp, [1.0, 0.0], [2.0, 0.0], 64) });
    if let Some(t) = twist {
        cfg.twist = Some(vec![ExactReal::parse(&cfg.constants, t).unwrap()]);
    }
    Scenario::build(cfg).unwrap()
}

/// Distance of `x` to `target` modulo 1, accepting either orientation.
fn mod1_up_to_sign(x: f64, target: f64) -> f64 {
    let d = |a: f64| (a - a.round()).abs();
    d(x - target).min(d(x + target))
}

/// A random polygonal loop at the origin of the torus cover, ending at a
/// random lattice point.
fn random_torus_loop(space: &ModelSpace, rng: &mut ChaCha8Rng) -> PathSample {
    let k = rng.gen_range(2..5);
    let mut pts = vec![[0.0, 0.0]];
    for _ in 0..k {
        pts.push([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
    }
    pts.push([rng.gen_range(-1..=1) as f64, rng.gen_range(-1..=1) as f64]);
    let mut samples = Vec::new();
    for w in pts.windows(2) {
        for j in 0..8 {
            let t = j as f64 / 8.0;
            samples.push(ChartPoint::new(vec![w[0][0] + t * (w[1][0] - w[0][0]), w[0][1] + t * (w[1][1] - w[0][1])]));
        }
    }
    samples.push(ChartPoint::new(pts.last().unwrap().to_vec()));
    PathSample::new(space, samples).unwrap()
}

#[test]
fn torus_periods() {
    let s = torus();
    assert!(s.p_tor().same_group(s.p_omega()));
    assert_eq!(s.p_omega().canonical_generator().unwrap(), &ExactReal::integer(s.constants(), 1));
    assert!(s.toric_periods().iter().all(|r| r.snapped && (r.action.value.abs() - 1.0).abs() < 1e-6));
    let t = &s.relation_values()[0];
    assert!((t.raw.abs() - 1.0).abs() < 1e-6);
    assert!(t.value.is_zero());
}

#[test]
fn psi_examples() {
    let s = torus();
    let sp = s.space().unwrap().clone();
    let basis = segment(&sp, [0.0, 0.0], [1.0, 0.0], 64);
    assert!(global_psi(&s, &basis).unwrap().norm() < 1e-12);
    let band = segment(&sp, [0.0, 0.25], [1.0, 0.25], 64);
    assert!(mod1_up_to_sign(global_psi(&s, &band).unwrap().value(), 0.25) < 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let a = random_torus_loop(&sp, &mut rng);
        let b = random_torus_loop(&sp, &mut rng);
        let joined = concat(&sp, &a, &b).unwrap();
        let lhs = global_psi(&s, &joined).unwrap();
        let rhs = global_psi(&s, &a).unwrap().try_add(&global_psi(&s, &b).unwrap()).unwrap();
        assert!(lhs.distance(&rhs) < 1e-9);
    }
    let open = segment(&sp, [0.0, 0.0], [0.5, 0.0], 8);
    assert!(matches!(global_psi(&s, &open), Err(Error::NotClosed { .. })));
}

#[test]
fn chasles_examples() {
    let s = torus();
    let sp = s.space().unwrap().clone();
    let straight = segment(&sp, [0.0, 0.0], [1.0, 0.0], 256);
    assert!(chasles_phi(&s, &straight, &straight, None).unwrap().norm() < 1e-12);
    // Enclosed area ∫₀¹ 0.1π sin(πt) dt = 0.2.
    let bump = PathSample::from_fn(&sp, 256, |t| vec![t, 0.1 * PI * (PI * t).sin()]).unwrap();
    let phi = chasles_phi(&s, &bump, &straight, None).unwrap();
    assert!(mod1_up_to_sign(phi.value(), 0.2) < 1e-4);

    let d1 = segment(&sp, [0.0, 0.0], [0.0, 0.0], 1);
    let d2 = PathSample::new(
        &sp,
        vec![ChartPoint::new(vec![0.0, 0.0]), ChartPoint::new(vec![0.3, 0.4]), ChartPoint::new(vec![1.0, 1.0])],
    )
    .unwrap();
    let a = chasles_phi(&s, &bump, &straight, Some(&d1)).unwrap();
    let b = chasles_phi(&s, &bump, &straight, Some(&d2)).unwrap();
    assert!(a.distance(&b) < 1e-6);

    let short = segment(&sp, [0.0, 0.0], [0.5, 0.0], 8);
    assert!(matches!(chasles_phi(&s, &short, &straight, None), Err(Error::EndpointMismatch { .. })));
}

#[test]
fn morphism_algebra() {
    let s = torus();
    let sp = s.space().unwrap().clone();
    let band = PathSample::new(
        &sp,
        [[0.0, 0.0], [0.0, 0.25], [1.0, 0.25], [1.0, 0.0]].iter().map(|p| ChartPoint::new(p.to_vec())).collect(),
    )
    .unwrap();
    let m = class_of(&s, &band).unwrap();
    assert_eq!((m.src.as_str(), m.tgt.as_str()), ("x0", "x0"));
    assert!(mod1_up_to_sign(m.phase.value(), 0.25) < 1e-9);
    let reference = segment(&sp, [0.0, 0.0], [0.0, 0.0], 1);
    assert!(class_of(&s, &reference).unwrap().phase.is_zero());

    let id = identity_at(&s, "x0").unwrap();
    assert_eq!(compose(&m, &inverse(&m)).unwrap(), id);
    assert_eq!(compose(&id, &m).unwrap(), m);
    assert_eq!(compose(&m, &id).unwrap(), m);

    let other = segment(&sp, [0.0, 0.0], [1.0, 1.0], 16);
    let m2 = class_of(&s, &other).unwrap();
    let joined = class_of(&s, &concat(&sp, &band, &other).unwrap()).unwrap();
    assert!(compose(&m, &m2).unwrap().distance(&joined) < 1e-6);

    let stray = segment(&sp, [0.1, 0.0], [0.2, 0.0], 4);
    assert!(matches!(class_of(&s, &stray), Err(Error::UnmarkedEndpoint(_))));
}

#[test]
fn marked_points_and_compose_mismatch() {
    let s = punctured(FormKind::Magnetic, None);
    let sp = s.space().unwrap().clone();
    let to_y = segment(&sp, [1.0, 0.0], [2.0, 0.0], 16);
    let m = class_of(&s, &to_y).unwrap();
    assert_eq!((m.src.as_str(), m.tgt.as_str()), ("x0", "y"));
    assert!(m.phase.norm() < 1e-9);
    assert!(matches!(compose(&m, &m), Err(Error::EndpointMismatch { .. })));
    let back = class_of(&s, &reverse(&to_y)).unwrap();
    assert_eq!(compose(&m, &back).unwrap().tgt, "x0");
}

#[test]
fn isotropy_on_the_torus() {
    let s = torus();
    let targets: Vec<TorusElement> =
        [0.0, 0.3, 0.7].iter().map(|&v| TorusElement::approximate(s.p_omega(), v).unwrap()).collect();
    let loops = isotropy_probe(&s, "x0", &targets).unwrap();
    assert_eq!(loops[0].points().len(), 2);
    for (lp, t) in loops.iter().zip(&targets) {
        assert!(global_psi(&s, lp).unwrap().distance(t) < 1e-6);
    }
}

#[test]
fn flat_twist_and_holonomy() {
    let s = punctured(FormKind::Zero, Some("1/2"));
    let sp = s.space().unwrap().clone();
    let tw = s.twist().unwrap().clone();
    for n in [-1, 1, 2, 3] {
        let m = flat_class_of(&s, &tw, &circle(&sp, 1.0, n, 64 * n.unsigned_abs() as usize)).unwrap();
        let expected = s.phase(&ExactReal::ratio(s.constants(), n as i64, 2)).unwrap();
        assert_eq!(m.phase.rep(), expected.rep());
    }
    let a = flat_class_of(&s, &tw, &circle(&sp, 1.0, 1, 64)).unwrap();
    let b = flat_class_of(&s, &tw, &circle(&sp, 1.0, 2, 128)).unwrap();
    let ab =
        flat_class_of(&s, &tw, &concat(&sp, &circle(&sp, 1.0, 1, 64), &circle(&sp, 1.0, 2, 128)).unwrap()).unwrap();
    assert_eq!(compose(&a, &b).unwrap(), ab);
    match holonomy_group(&s).unwrap() {
        Holonomy::Subgroup(g) => assert_eq!(g.canonical_generator().unwrap(), &ExactReal::ratio(s.constants(), 1, 2)),
        h => panic!("{h:?}"),
    }
    let plain = punctured(FormKind::Zero, None);
    match holonomy_group(&plain).unwrap() {
        Holonomy::Subgroup(g) => assert!(g.is_trivial()),
        h => panic!("{h:?}"),
    }
    let zero = FlatTwist::new(plain.presentation(), plain.p_omega(), &[ExactReal::zero(plain.constants())]).unwrap();
    assert!(flat_class_of(&plain, &zero, &circle(&sp, 1.0, 1, 64)).unwrap().phase.is_zero());
    let t = TorusElement::approximate(s.p_omega(), 0.3).unwrap();
    assert!(matches!(isotropy_probe(&s, "x0", &[t]), Err(Error::UnreachablePhase(_))));

    let magnetic = punctured(FormKind::Magnetic, None);
    assert!(matches!(flat_class_of(&magnetic, &tw, &circle(&sp, 1.0, 1, 64)), Err(Error::NotFlat)));
}

#[test]
fn magnetic_plane_is_a_continuum() {
    let s = punctured(FormKind::Magnetic, None);
    assert!(s.p_omega().is_trivial());
    let Holonomy::Continuum { witnesses } = holonomy_group(&s).unwrap() else { panic!() };
    assert!(witnesses[0].1.abs() < 1e-9);
    assert!((witnesses[1].1.abs() - 2.0 * PI * 2f64.ln()).abs() < 1e-5);
    let sp = s.space().unwrap().clone();
    let m1 = class_of(&s, &circle(&sp, 1.0, 1, 256)).unwrap();
    let m2 = class_of(&s, &circle(&sp, 2.0, 1, 256)).unwrap();
    assert_ne!(m1.phase, TorusElement::zero(s.p_omega()).try_add(&m2.phase).unwrap());
}

#[test]
fn symmetries_preserve_chasles_values() {
    let s = torus();
    let sp = s.space().unwrap().clone();
    let straight = segment(&sp, [0.0, 0.0], [1.0, 0.0], 128);
    let bump = PathSample::from_fn(&sp, 128, |t| vec![t, 0.3 * (PI * t).sin()]).unwrap();
    assert_eq!(pushforward_symmetry(&s, &Symmetry::Identity, &bump).unwrap(), bump);
    let g = Symmetry::Translation { by: [0.3, 0.1] };
    let before = chasles_phi(&s, &bump, &straight, None).unwrap();
    let after = chasles_phi(
        &s,
        &pushforward_symmetry(&s, &g, &bump).unwrap(),
        &pushforward_symmetry(&s, &g, &straight).unwrap(),
        None,
    )
    .unwrap();
    assert!(before.distance(&after) < 1e-6);
    assert!(matches!(
        pushforward_symmetry(&s, &Symmetry::Rotation { angle: 1.0 }, &bump),
        Err(Error::UnsupportedSymmetry(_))
    ));

    let p = punctured(FormKind::Magnetic, None);
    let sp = p.space().unwrap().clone();
    let lp = PathSample::from_fn(&sp, 128, |t| {
        let r = 1.0 + 0.5 * (2.0 * PI * t).sin().powi(2);
        let a = 2.0 * PI * t;
        if t == 1.0 {
            return vec![1.0, 0.0];
        }
        vec![r * a.cos(), r * a.sin()]
    })
    .unwrap();
    let g = Symmetry::Rotation { angle: 0.7 };
    let a = global_psi_detailed(&p, &lp).unwrap().action.value;
    let b = global_psi_detailed(&p, &pushforward_symmetry(&p, &g, &lp).unwrap()).unwrap().action.value;
    assert!((a - b).abs() < 1e-6);
}

#[test]
fn wave_functions() {
    let s = torus();
    let m = Morphism::new("x0", "x0", TorusElement::approximate(s.p_omega(), 0.25).unwrap());
    let psi = multiplicative_wavefunction(&s, &Character::Discrete { n: 1 }, &m).unwrap();
    assert!((psi - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    assert_eq!(multiplicative_wavefunction(&s, &Character::Discrete { n: 0 }, &m).unwrap(), Complex64::new(1.0, 0.0));
    let m2 = Morphism::new("x0", "x0", TorusElement::approximate(s.p_omega(), 0.6).unwrap());
    let lhs = multiplicative_wavefunction(&s, &Character::Discrete { n: 3 }, &compose(&m, &m2).unwrap()).unwrap();
    let rhs = multiplicative_wavefunction(&s, &Character::Discrete { n: 3 }, &m).unwrap()
        * multiplicative_wavefunction(&s, &Character::Discrete { n: 3 }, &m2).unwrap();
    assert!((lhs - rhs).norm() < 1e-9);
    assert!(matches!(
        multiplicative_wavefunction(&s, &Character::Real { k: 1.0 }, &m),
        Err(Error::IncompatibleCharacter(_))
    ));
}

#[test]
fn genus_two_declared() {
    let pres = Presentation::surface(2).unwrap();
    let mut cfg = ScenarioConfig::new("genus-2", None, pres.clone());
    let b = cfg.constants.clone();
    let i = pres.element(&pres.parse_word("[a1,b1]").unwrap());
    let j = pres.generator(2);
    cfg.declared = Some((vec![DeclaredEntry { i, j, value: ExactReal::integer(&b, 3) }], Some(ExactReal::zero(&b))));
    let s = Scenario::build(cfg).unwrap();
    assert!(s.p_tor().is_trivial());
    assert_eq!(s.p_omega().canonical_generator().unwrap(), &ExactReal::integer(s.constants(), 3));
    for a in 0..4 {
        for bb in 0..4 {
            for c in 0..4 {
                let r =
                    verify_cocycle_identity(s.cocycle(), &pres.generator(a), &pres.generator(bb), &pres.generator(c))
                        .unwrap();
                assert_eq!(r, 0.0);
            }
        }
    }
    let id = identity_at(&s, "x0").unwrap();
    assert!(id.phase.is_zero());
    assert!(matches!(
        class_of(&s, &PathSample::new(&ModelSpace::unit_torus(), vec![ChartPoint::new(vec![0.0, 0.0]); 2]).unwrap()),
        Err(Error::UnsupportedModel(_))
    ));
}

#[test]
fn two_holes_zero_form_has_no_phases() {
    let sp = ModelSpace::TwoHolesPlane { p1: [-1.0, 0.0], p2: [1.0, 0.0], form: FormKind::Zero };
    let scn = Scenario::build(ScenarioConfig::new("holes", Some(sp.clone()), Presentation::free(&["a", "b"]))).unwrap();
    // Once around the right hole from the midpoint; a straight homotopy to
    // the constant loop would cross the hole.
    let around = PathSample::from_fn(&sp, 64, |t| {
        if t == 1.0 {
            return vec![0.0, 0.0];
        }
        let a = 2.0 * PI * t;
        vec![1.0 - a.cos(), a.sin()]
    })
    .unwrap();
    let v = global_psi_detailed(&scn, &around).unwrap();
    assert!(v.phase.is_zero());
    assert_ne!(v.class, scn.presentation().identity());
    assert!(global_psi(&scn, &concat(&sp, &around, &reverse(&around)).unwrap()).unwrap().is_zero());
    let (a, b) = (scn.presentation().generator(0), scn.presentation().generator(1));
    assert!(scn.cocycle().tau(&a, &b).unwrap().is_zero());
    assert_eq!(verify_cocycle_identity(scn.cocycle(), &a, &b, &a).unwrap(), 0.0);
}
