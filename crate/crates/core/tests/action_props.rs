use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use prequantum_core::action::{
    action_integral, concat, straight_homotopy, HomotopySample, PathSample, QuadratureSettings,
};
use prequantum_core::geometry::{ChartPoint, FormKind, ModelSpace, TangentPair};

fn q() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn spaces() -> Vec<ModelSpace> {
    vec![
        ModelSpace::unit_torus(),
        ModelSpace::torus([[2.0, 0.0], [0.5, 1.5]]).unwrap(),
        ModelSpace::punctured_plane(FormKind::Magnetic),
        ModelSpace::punctured_plane(FormKind::Uniform { b: 0.7 }),
        ModelSpace::two_holes([-1.0, 0.0], [1.0, 0.0], FormKind::Magnetic).unwrap(),
    ]
}

/// Shoelace area of a closed polygon.
fn shoelace(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

proptest! {
    #[test]
    fn two_form_is_antisymmetric_and_bilinear(
        x in 1.5f64..3.0, y in 1.5f64..3.0,
        u in prop::array::uniform2(-2.0f64..2.0), v in prop::array::uniform2(-2.0f64..2.0),
        w in prop::array::uniform2(-2.0f64..2.0), a in -3.0f64..3.0,
    ) {
        for sp in spaces() {
            let p = ChartPoint::new(vec![x, y]);
            let f = |u: [f64; 2], v: [f64; 2]| sp.eval_two_form(&p, &TangentPair::new(u.to_vec(), v.to_vec())).unwrap();
            prop_assert!((f(u, v) + f(v, u)).abs() < 1e-9);
            prop_assert!(f(u, u).abs() < 1e-12);
            let uw = [u[0] + a * w[0], u[1] + a * w[1]];
            let lin = f(u, v) + a * f(w, v);
            prop_assert!((f(uw, v) - lin).abs() < 1e-9 * (1.0 + lin.abs()));
        }
    }

    #[test]
    fn product_form_is_the_sum(p in prop::array::uniform3(-1.0f64..1.0), u in prop::array::uniform3(-1.0f64..1.0), v in prop::array::uniform3(-1.0f64..1.0)) {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        prop_assume!(n > 0.1);
        let p: Vec<f64> = p.iter().map(|x| x / n).collect();
        let tangent = |w: [f64; 3]| {
            let d = w[0] * p[0] + w[1] * p[1] + w[2] * p[2];
            [w[0] - d * p[0], w[1] - d * p[1], w[2] - d * p[2]]
        };
        let (u, v) = (tangent(u), tangent(v));
        let s1 = ModelSpace::sphere(1.3).unwrap();
        let s2 = ModelSpace::sphere(0.7).unwrap();
        let prod = ModelSpace::product(s1.clone(), s2.clone());
        let pp = ChartPoint::new([p.clone(), p.clone()].concat());
        let uu = [u.to_vec(), v.to_vec()].concat();
        let vv = [v.to_vec(), u.to_vec()].concat();
        let total = prod.eval_two_form(&pp, &TangentPair::new(uu, vv)).unwrap();
        let a = s1.eval_two_form(&ChartPoint::new(p.clone()), &TangentPair::new(u.to_vec(), v.to_vec())).unwrap();
        let b = s2.eval_two_form(&ChartPoint::new(p), &TangentPair::new(v.to_vec(), u.to_vec())).unwrap();
        prop_assert!((total - a - b).abs() < 1e-12);
    }

    #[test]
    fn transpose_flips_the_sign(c in prop::array::uniform4(-0.3f64..0.3)) {
        let sp = ModelSpace::punctured_plane(FormKind::Uniform { b: 1.0 });
        let h = HomotopySample::from_fn(&sp, 16, 16, |s, t| {
            vec![2.0 + s + c[0] * (PI * t).sin(), 1.0 + t + c[1] * s * t + c[2] * (PI * s).sin() + c[3] * t * t]
        }).unwrap();
        let a = action_integral(&sp, &h, &q()).unwrap().value;
        let b = action_integral(&sp, &h.transpose(&sp), &q()).unwrap().value;
        prop_assert!((a + b).abs() < 1e-9);
    }

    #[test]
    fn action_is_additive_in_s(cut in 1usize..16, amp in -0.3f64..0.3) {
        let sp = ModelSpace::punctured_plane(FormKind::Magnetic);
        let h = HomotopySample::from_fn(&sp, 16, 32, |s, t| {
            let r = 1.0 + s + amp * (2.0 * PI * t).sin() * s;
            vec![r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin()]
        }).unwrap();
        let whole = action_integral(&sp, &h, &q()).unwrap().value;
        let a = action_integral(&sp, &h.sub_rows(&sp, 0, cut).unwrap(), &q()).unwrap().value;
        let b = action_integral(&sp, &h.sub_rows(&sp, cut, 16).unwrap(), &q()).unwrap().value;
        prop_assert!((whole - a - b).abs() < 1e-6);
    }

    #[test]
    fn cone_over_a_polygon_is_its_area(vs in prop::collection::vec(prop::array::uniform2(-1.0f64..1.0), 3..7)) {
        let sp = ModelSpace::unit_torus();
        let mut pts: Vec<[f64; 2]> = vec![[0.0, 0.0]];
        pts.extend(vs);
        let mut samples: Vec<ChartPoint> = pts.iter().map(|p| ChartPoint::new(p.to_vec())).collect();
        samples.push(ChartPoint::new(vec![0.0, 0.0]));
        let lp = PathSample::new(&sp, samples).unwrap();
        let c = PathSample::new(&sp, vec![ChartPoint::new(vec![0.0, 0.0]); 2]).unwrap();
        let h = straight_homotopy(&sp, &c, &lp, 8).unwrap();
        let v = action_integral(&sp, &h, &q()).unwrap().value;
        prop_assert!((v - shoelace(&pts)).abs() < 1e-12);
    }
}

#[test]
fn annulus_oracle() {
    let sp = ModelSpace::punctured_plane(FormKind::Magnetic);
    let circle = |r: f64| {
        PathSample::from_fn(&sp, 128, move |t| {
            if t == 1.0 {
                return vec![r, 0.0];
            }
            vec![r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin()]
        })
        .unwrap()
    };
    let h = straight_homotopy(&sp, &circle(1.0), &circle(2.0), 64).unwrap();
    let v = action_integral(&sp, &h, &q()).unwrap().value;
    assert_abs_diff_eq!(v.abs(), 2.0 * PI * 2f64.ln(), epsilon = 1e-5);
}

#[test]
fn torus_band_and_bump_oracles() {
    let sp = ModelSpace::unit_torus();
    let a = PathSample::from_fn(&sp, 64, |t| vec![t, 0.0]).unwrap();
    let b = PathSample::from_fn(&sp, 64, |t| vec![t, 0.25]).unwrap();
    let h = straight_homotopy(&sp, &a, &b, 16).unwrap();
    assert_abs_diff_eq!(action_integral(&sp, &h, &q()).unwrap().value.abs(), 0.25, epsilon = 1e-12);

    // ∫₀¹ 0.1π sin(πt) dt = 0.2.
    let bump = PathSample::from_fn(&sp, 256, |t| vec![t, 0.1 * PI * (PI * t).sin()]).unwrap();
    let h = straight_homotopy(&sp, &a, &bump, 32).unwrap();
    let v = action_integral(&sp, &h, &q()).unwrap().value;
    assert_abs_diff_eq!(v.abs(), 0.2, epsilon = 1e-4);
    let joined = concat(&sp, &a, &bump).unwrap();
    assert_eq!(joined.intervals(), 512);
}
