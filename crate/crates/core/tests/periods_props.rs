use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use prequantum_core::periods::{
    characters_h1, moduli_ext, total_periods, AbelianInvariants, BasisConstants, Constant, ExactReal, PeriodGroup,
    TorusElement,
};

fn basis() -> Arc<BasisConstants> {
    BasisConstants::new(vec![Constant { name: "alpha".into(), value: 2f64.sqrt(), independent: true }]).unwrap()
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

fn elem(b: &Arc<BasisConstants>, c: (i64, i64, i64, i64)) -> ExactReal {
    ExactReal::from_coeffs(b, vec![q(c.0, c.1), q(c.2, c.3)]).unwrap()
}

fn coeff() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-6i64..=6, 1i64..=6, -6i64..=6, 1i64..=6)
}

fn rational_coeff() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-6i64..=6, 1i64..=6).prop_map(|(p, d)| (p, d, 0, 1))
}

/// gcd of rationals: gcd of numerators over a common denominator.
fn rational_gcd(xs: &[BigRational]) -> BigRational {
    let d = xs.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let g = xs
        .iter()
        .map(|x| (x * BigRational::from_integer(d.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    BigRational::new(g, d)
}

/// Q-rank of 2-column rows, by 2×2 determinants.
fn q_rank(rows: &[(BigRational, BigRational)]) -> usize {
    let nonzero: Vec<_> = rows.iter().filter(|r| !(r.0.is_zero() && r.1.is_zero())).collect();
    if nonzero.is_empty() {
        return 0;
    }
    for a in &nonzero {
        for b in &nonzero {
            if !(&a.0 * &b.1 - &a.1 * &b.0).is_zero() {
                return 2;
            }
        }
    }
    1
}

proptest! {
    #[test]
    fn generate_is_idempotent(gs in prop::collection::vec(coeff(), 0..4)) {
        let b = basis();
        let gens: Vec<ExactReal> = gs.into_iter().map(|c| elem(&b, c)).collect();
        let p = PeriodGroup::generate(&b, &gens).unwrap();
        let again = PeriodGroup::generate(&b, p.lattice_basis()).unwrap();
        prop_assert_eq!(again.lattice_basis(), p.lattice_basis());
        prop_assert!(p.same_group(&again));
    }

    #[test]
    fn contains_is_a_congruence(gs in prop::collection::vec(coeff(), 1..4), k in prop::collection::vec(-3i64..=3, 3)) {
        let b = basis();
        let gens: Vec<ExactReal> = gs.into_iter().map(|c| elem(&b, c)).collect();
        let p = PeriodGroup::generate(&b, &gens).unwrap();
        let combo = |ks: &[i64]| {
            gens.iter().zip(ks.iter().cycle()).fold(ExactReal::zero(&b), |acc, (g, &n)| {
                acc.try_add(&g.scale(&BigRational::from_integer(n.into()))).unwrap()
            })
        };
        let x = combo(&k);
        let y = combo(&[k[2], k[0], k[1]]);
        prop_assert!(p.contains(&x).unwrap());
        prop_assert!(p.contains(&y).unwrap());
        prop_assert!(p.contains(&x.try_add(&y).unwrap()).unwrap());
        prop_assert!(p.contains(&x.try_sub(&y).unwrap()).unwrap());
    }

    #[test]
    fn reduce_respects_equality(gs in prop::collection::vec(coeff(), 0..3), x in coeff(), y in coeff()) {
        let b = basis();
        let gens: Vec<ExactReal> = gs.into_iter().map(|c| elem(&b, c)).collect();
        let p = Arc::new(PeriodGroup::generate(&b, &gens).unwrap());
        let (x, y) = (elem(&b, x), elem(&b, y));
        let same = p.reduce(&x).unwrap() == p.reduce(&y).unwrap();
        prop_assert_eq!(same, p.contains(&x.try_sub(&y).unwrap()).unwrap());
    }

    #[test]
    fn canonical_rep_is_in_fundamental_domain(g in rational_coeff(), x in coeff()) {
        let b = basis();
        prop_assume!(g.0 != 0);
        let p = Arc::new(PeriodGroup::generate(&b, &[elem(&b, g)]).unwrap());
        let x = elem(&b, (x.0, x.1, 0, 1));
        let c = TorusElement::new(&p, x, true).unwrap().canonical_value();
        let gen = p.canonical_generator().unwrap().value();
        prop_assert!((0.0..gen + 1e-12).contains(&c));
    }

    #[test]
    fn discreteness_matches_gcd_oracle(gs in prop::collection::vec(coeff(), 1..=3)) {
        let b = basis();
        let gens: Vec<ExactReal> = gs.iter().map(|&c| elem(&b, c)).collect();
        let p = PeriodGroup::generate(&b, &gens).unwrap();
        let rows: Vec<(BigRational, BigRational)> = gs.iter().map(|c| (q(c.0, c.1), q(c.2, c.3))).collect();
        let rank = q_rank(&rows);
        prop_assert_eq!(p.is_discrete(), rank <= 1);
        if rank == 1 {
            // All generators are rational multiples of one direction; the
            // generator is the gcd of those multiples times that direction.
            let dir = rows.iter().find(|r| !(r.0.is_zero() && r.1.is_zero())).unwrap().clone();
            let mults: Vec<BigRational> = rows
                .iter()
                .map(|r| if !dir.0.is_zero() { &r.0 / &dir.0 } else { &r.1 / &dir.1 })
                .collect();
            let g = rational_gcd(&mults);
            let expected = ExactReal::from_coeffs(&b, vec![&dir.0 * &g, &dir.1 * &g]).unwrap();
            let got = p.canonical_generator().unwrap();
            let ratio = got.ratio_to(&expected).unwrap();
            prop_assert_eq!(ratio.abs(), BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn total_periods_is_minimal(gs in prop::collection::vec(rational_coeff(), 1..3), vs in prop::collection::vec(coeff(), 1..3)) {
        let b = basis();
        let tor: Vec<ExactReal> = gs.iter().map(|&c| elem(&b, c)).collect();
        let p_tor = Arc::new(PeriodGroup::generate(&b, &tor).unwrap());
        let vals: Vec<TorusElement> = vs.iter().map(|&c| TorusElement::new(&p_tor, elem(&b, c), true).unwrap()).collect();
        let p = total_periods(&p_tor, &vals).unwrap();
        for g in &tor {
            prop_assert!(p.contains(g).unwrap());
        }
        for v in &vals {
            prop_assert!(p.contains(&v.canonical()).unwrap());
        }
        // Dropping any one generator of the join loses a required element
        // or yields the same group (when it was redundant).
        let mut all: Vec<ExactReal> = tor.clone();
        all.extend(vals.iter().map(|v| v.canonical()));
        for i in 0..all.len() {
            let mut fewer = all.clone();
            let dropped = fewer.remove(i);
            let smaller = PeriodGroup::generate(&b, &fewer).unwrap();
            if !smaller.contains(&dropped).unwrap() {
                prop_assert!(!smaller.same_group(&p));
            } else {
                prop_assert!(smaller.same_group(&p));
            }
        }
    }
}

#[test]
fn discreteness_branches() {
    let b = BasisConstants::new(vec![Constant { name: "s1".into(), value: 1.3, independent: true }]).unwrap();
    let s1 = ExactReal::symbol(&b, "s1").unwrap();
    let p = PeriodGroup::generate(&b, &[s1.clone(), s1.scale(&q(2, 3))]).unwrap();
    assert!(p.is_discrete());
    assert_eq!(p.canonical_generator().unwrap(), &s1.scale(&q(1, 3)));
    let b = basis();
    let dense =
        PeriodGroup::generate(&b, &[ExactReal::integer(&b, 1), ExactReal::symbol(&b, "alpha").unwrap()]).unwrap();
    assert!(!dense.is_discrete());
    assert!(dense.contains(&ExactReal::parse(&b, "3 - 2*alpha").unwrap()).unwrap());
}

/// `Ext(coker M, Z^k)` from the determinantal divisors of `Mᵀ`: the
/// torsion of `coker Mᵀ`, repeated `k` times. Independent of the library's
/// elimination.
fn ext_oracle(relations: &[Vec<i64>], k: usize) -> Vec<u64> {
    let m: Vec<Vec<i64>> = (0..relations[0].len()).map(|j| relations.iter().map(|r| r[j]).collect()).collect();
    let rows = m.len();
    let cols = m[0].len();
    let mut divisors = vec![1i64];
    for size in 1..=rows.min(cols) {
        let mut g = 0i64;
        for rs in subsets(rows, size) {
            for cs in subsets(cols, size) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    let mut out = Vec::new();
    for w in divisors.windows(2) {
        let d = (w[1] / w[0]).unsigned_abs();
        if d > 1 {
            for _ in 0..k {
                out.push(d);
            }
        }
    }
    out.sort_unstable();
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn det(m: &[Vec<i64>]) -> i64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn elementary(factors: &[u64]) -> Vec<u64> {
    // Both sides in invariant-factor form.
    prequantum_core::periods::moduli::invariant_factors(factors)
}

#[test]
fn ext_matches_determinantal_oracle() {
    let b = basis();
    let z = PeriodGroup::generate(&b, &[ExactReal::integer(&b, 1)]).unwrap();
    let z2 = PeriodGroup::generate(&b, &[ExactReal::integer(&b, 1), ExactReal::symbol(&b, "alpha").unwrap()]).unwrap();

    // Z^2 with no relations.
    assert!(moduli_ext(&AbelianInvariants::free(2), &z).is_trivial());
    // Z/3 = coker(3).
    let got = moduli_ext(&AbelianInvariants::new(0, &[3]), &z);
    assert_eq!(got.invariant_factors, elementary(&ext_oracle(&[vec![3]], 1)));
    assert_eq!(got.order(), 3);
    // Z ⊕ Z/2 = coker of the relation (0, 2) on two generators.
    let got = moduli_ext(&AbelianInvariants::new(1, &[2]), &z2);
    assert_eq!(got.invariant_factors, elementary(&ext_oracle(&[vec![0, 2]], 2)));
    assert_eq!(got.to_string(), "Z/2 ⊕ Z/2");
    // Characters.
    assert_eq!(characters_h1(&AbelianInvariants::free(1), &PeriodGroup::trivial(&b)).to_string(), "T_ω");
    assert_eq!(characters_h1(&AbelianInvariants::new(0, &[2]), &z).to_string(), "Z/2");
    assert!(characters_h1(&AbelianInvariants::free(0), &z).to_string() == "0");
}

proptest! {
    #[test]
    fn ext_random_presentations(rel in prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 1..3), k in 1usize..3) {
        let rows: Vec<Vec<BigInt>> = rel.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let inv = prequantum_core::periods::lattice::smith_invariants(&rows);
        let torsion: Vec<u64> = inv.iter().filter(|d| **d != BigInt::from(1)).map(|d| u64::try_from(d.clone()).unwrap()).collect();
        let pi = AbelianInvariants::new(2 - inv.len(), &torsion);
        let got = prequantum_core::periods::moduli::ext_into_free(&pi, k);
        prop_assert_eq!(got.invariant_factors, elementary(&ext_oracle(&rel, k)));
    }
}
