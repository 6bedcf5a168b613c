//! Finitely generated subgroups of R and their quotient tori.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{same_basis, BasisConstants, ExactReal};
use super::lattice::{hermite_rows, reduce_mod_rows};
use crate::error::{Error, Result};

/// Subgroup of R generated by finitely many [`ExactReal`]s.
///
/// The coefficient lattice is kept in Hermite normal form after clearing
/// denominators, so membership and coset reduction are exact integer
/// computations. The derived data is computed once at construction.
#[derive(Clone)]
pub struct PeriodGroup {
    basis: Arc<BasisConstants>,
    generators: Vec<ExactReal>,
    denominator: BigInt,
    hnf: Vec<Vec<BigInt>>,
    lattice_basis: Vec<ExactReal>,
    canonical: Option<ExactReal>,
}

impl PeriodGroup {
    /// The subgroup generated by `gens`; an empty list gives `{0}`.
    pub fn generate(basis: &Arc<BasisConstants>, gens: &[ExactReal]) -> Result<Self> {
        for g in gens {
            if !same_basis(g.basis(), basis) {
                return Err(Error::BasisMismatch);
            }
        }
        let denominator = gens.iter().flat_map(|g| g.coeffs().iter()).fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                g.coeffs().iter().map(|q| (q * BigRational::from_integer(denominator.clone())).to_integer()).collect()
            })
            .collect();
        let hnf = hermite_rows(&rows);
        let lattice_basis: Vec<ExactReal> = hnf
            .iter()
            .map(|row| {
                let coeffs = row.iter().map(|x| BigRational::new(x.clone(), denominator.clone())).collect();
                ExactReal::from_coeffs(basis, coeffs).expect("row length matches basis")
            })
            .collect();
        let canonical = match lattice_basis.as_slice() {
            [g] if g.value() < 0.0 => Some(g.neg()),
            [g] => Some(g.clone()),
            _ => None,
        };
        Ok(PeriodGroup { basis: basis.clone(), generators: gens.to_vec(), denominator, hnf, lattice_basis, canonical })
    }

    pub fn trivial(basis: &Arc<BasisConstants>) -> Self {
        PeriodGroup::generate(basis, &[]).expect("empty generator list")
    }

    pub fn basis(&self) -> &Arc<BasisConstants> {
        &self.basis
    }

    pub fn generators(&self) -> &[ExactReal] {
        &self.generators
    }

    /// Canonical Z-basis of the group (rows of the Hermite form).
    pub fn lattice_basis(&self) -> &[ExactReal] {
        &self.lattice_basis
    }

    /// Rank over Q of the span of the generators. Under the declared
    /// independence of the basis symbols this is also the Z-rank.
    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    /// A subgroup of R is discrete exactly when it is cyclic, i.e. when its
    /// Q-rank is at most one.
    pub fn is_discrete(&self) -> bool {
        self.rank() <= 1
    }

    pub fn is_trivial(&self) -> bool {
        self.hnf.is_empty()
    }

    /// Positive generator of a nonzero discrete group.
    pub fn canonical_generator(&self) -> Option<&ExactReal> {
        self.canonical.as_ref()
    }

    fn scaled(&self, x: &ExactReal) -> Vec<BigRational> {
        let d = BigRational::from_integer(self.denominator.clone());
        x.coeffs().iter().map(|q| q * &d).collect()
    }

    pub(crate) fn check(&self, x: &ExactReal) -> Result<()> {
        if same_basis(x.basis(), &self.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &ExactReal) -> Result<bool> {
        self.check(x)?;
        Ok(reduce_mod_rows(&self.hnf, &self.scaled(x)).iter().all(Zero::is_zero))
    }

    /// Canonical representative of `x + P`.
    ///
    /// For a discrete group with generator `g` and `x` commensurate with `g`
    /// this is the representative in `[0, g)`. Otherwise the Hermite-form
    /// remainder is used, which is `x` itself when no lattice direction
    /// meets the support of `x`.
    pub fn canonical_rep(&self, x: &ExactReal) -> Result<ExactReal> {
        self.check(x)?;
        if let Some(g) = &self.canonical {
            if let Some(q) = x.ratio_to(g) {
                let frac = &q - q.floor();
                return Ok(g.scale(&frac));
            }
        }
        let d = BigRational::from_integer(self.denominator.clone());
        let rem = reduce_mod_rows(&self.hnf, &self.scaled(x));
        ExactReal::from_coeffs(&self.basis, rem.into_iter().map(|q| q / &d).collect())
    }

    pub fn reduce(self: &Arc<Self>, x: &ExactReal) -> Result<TorusElement> {
        self.check(x)?;
        Ok(TorusElement { group: self.clone(), rep: x.clone(), exact: true })
    }

    /// Group generated by `self` together with `others`.
    pub fn join(&self, others: &[ExactReal]) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(others);
        PeriodGroup::generate(&self.basis, &gens)
    }

    /// Same subgroup of R (same Hermite basis).
    pub fn same_group(&self, other: &PeriodGroup) -> bool {
        same_basis(&self.basis, &other.basis) && self.lattice_basis == other.lattice_basis
    }

    pub fn is_subgroup_of(&self, other: &PeriodGroup) -> Result<bool> {
        for g in &self.lattice_basis {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Float distance from `v` to the nearest element of the group. For
    /// dense groups the infimum is 0.
    pub fn float_distance(&self, v: f64) -> f64 {
        match (self.rank(), &self.canonical) {
            (0, _) => v.abs(),
            (1, Some(g)) => {
                let g = g.value().abs();
                let r = v.rem_euclid(g);
                r.min(g - r)
            }
            _ => 0.0,
        }
    }

    /// Same group re-expressed over a basis extending the current one.
    pub fn rebase(&self, basis: &Arc<BasisConstants>) -> Result<Self> {
        let gens = self.generators.iter().map(|g| g.rebase(basis)).collect::<Result<Vec<_>>>()?;
        PeriodGroup::generate(basis, &gens)
    }
}

impl fmt::Display for PeriodGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lattice_basis.is_empty() {
            return f.write_str("{0}");
        }
        if let Some(g) = &self.canonical {
            return write!(f, "({g})·Z");
        }
        let parts: Vec<String> = self.lattice_basis.iter().map(|g| format!("({g})·Z")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for PeriodGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodGroup({self})")
    }
}

/// An element of `R / P`.
///
/// `rep` is the representative as produced (not reduced), so raw sums of
/// cocycle values stay visible; [`TorusElement::canonical`] gives the
/// reduced form. `exact` is false when the representative came from
/// quadrature output that did not snap to a declared value.
#[derive(Clone)]
pub struct TorusElement {
    group: Arc<PeriodGroup>,
    rep: ExactReal,
    exact: bool,
}

impl TorusElement {
    pub fn new(group: &Arc<PeriodGroup>, rep: ExactReal, exact: bool) -> Result<Self> {
        group.check(&rep)?;
        Ok(TorusElement { group: group.clone(), rep, exact })
    }

    pub fn zero(group: &Arc<PeriodGroup>) -> Self {
        TorusElement { group: group.clone(), rep: ExactReal::zero(group.basis()), exact: true }
    }

    /// Wraps a float; the representative is the exact dyadic value of `v`.
    pub fn approximate(group: &Arc<PeriodGroup>, v: f64) -> Result<Self> {
        Ok(TorusElement { group: group.clone(), rep: ExactReal::from_f64(group.basis(), v)?, exact: false })
    }

    pub fn group(&self) -> &Arc<PeriodGroup> {
        &self.group
    }

    pub fn rep(&self) -> &ExactReal {
        &self.rep
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn value(&self) -> f64 {
        self.rep.value()
    }

    pub fn canonical(&self) -> ExactReal {
        self.group.canonical_rep(&self.rep).expect("basis checked at construction")
    }

    pub fn canonical_value(&self) -> f64 {
        self.canonical().value()
    }

    fn check_group(&self, other: &TorusElement) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group.same_group(&other.group) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn try_add(&self, other: &TorusElement) -> Result<Self> {
        self.check_group(other)?;
        Ok(TorusElement {
            group: self.group.clone(),
            rep: self.rep.try_add(&other.rep)?,
            exact: self.exact && other.exact,
        })
    }

    pub fn try_sub(&self, other: &TorusElement) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TorusElement { group: self.group.clone(), rep: self.rep.neg(), exact: self.exact }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        TorusElement {
            group: self.group.clone(),
            rep: self.rep.scale(&BigRational::from_integer(n.into())),
            exact: self.exact,
        }
    }

    /// Image under the projection `R/P → R/P'` for `P ⊂ P'`.
    pub fn project(&self, target: &Arc<PeriodGroup>) -> Result<Self> {
        if !self.group.is_subgroup_of(target)? {
            return Err(Error::Invalid(format!("{} is not contained in {}", self.group, target)));
        }
        TorusElement::new(target, self.rep.clone(), self.exact)
    }

    /// Float distance in `R / P` between `self` and `other`.
    pub fn distance(&self, other: &TorusElement) -> f64 {
        let d = self.rep.value() - other.rep.value();
        self.group.float_distance(d)
    }

    /// Float distance to the zero class.
    pub fn norm(&self) -> f64 {
        self.group.float_distance(self.rep.value())
    }

    pub fn is_zero(&self) -> bool {
        self.group.contains(&self.rep).expect("basis checked at construction")
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.check_group(other).is_ok()
            && self.rep.try_sub(&other.rep).and_then(|d| self.group.contains(&d)).unwrap_or(false)
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.canonical(), self.group)
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self}, rep {:?})", self.rep)
    }
}
