use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::action::{action_integral, concat, straight_homotopy, QuadratureSettings};
use crate::error::{Error, Result};
use crate::periods::{ExactReal, PeriodGroup, TorusElement};

use super::group::{GroupElement, Presentation};
use super::loops::BasisLoops;
use super::word::Word;

/// A declared value `τ(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeclaredEntry {
    pub i: GroupElement,
    pub j: GroupElement,
    pub value: ExactReal,
}

/// Where `τ` values come from.
#[derive(Debug, Clone)]
pub enum CocycleBacking {
    /// Integrate `∫ Kω` over the straight homotopy from `ℓ_{i∗j}` to `ℓ_i ∨ ℓ_j`.
    Geometric { loops: BasisLoops, s_steps: usize, quadrature: QuadratureSettings },
    /// A finite table; pairs involving the identity are 0, other missing
    /// pairs take `default` or are an error.
    Declared { entries: Vec<DeclaredEntry>, default: Option<ExactReal> },
}

/// The surfacic cocycle `τ : π₁ × π₁ → T_tor`, evaluated lazily and memoized.
pub struct CocycleTable {
    pres: Presentation,
    backing: CocycleBacking,
    periods: Arc<PeriodGroup>,
    cache: Mutex<HashMap<(GroupElement, GroupElement), (TorusElement, f64)>>,
}

impl CocycleTable {
    pub fn new(pres: &Presentation, backing: CocycleBacking, periods: &Arc<PeriodGroup>) -> Result<Self> {
        if let CocycleBacking::Declared { entries, default } = &backing {
            for e in entries {
                periods.check(&e.value)?;
            }
            if let Some(d) = default {
                periods.check(d)?;
            }
        }
        Ok(CocycleTable { pres: pres.clone(), backing, periods: periods.clone(), cache: Mutex::new(HashMap::new()) })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn backing(&self) -> &CocycleBacking {
        &self.backing
    }

    /// `P_tor`, the group the values live modulo.
    pub fn periods(&self) -> &Arc<PeriodGroup> {
        &self.periods
    }

    /// `τ(i, j) ∈ T_tor`.
    pub fn tau(&self, i: &GroupElement, j: &GroupElement) -> Result<TorusElement> {
        self.tau_with_error(i, j).map(|(t, _)| t)
    }

    /// `τ(i, j)` together with the quadrature error estimate (0 when exact).
    pub fn tau_with_error(&self, i: &GroupElement, j: &GroupElement) -> Result<(TorusElement, f64)> {
        // ℓ₁ is the constant loop, so both sides of the defining homotopy
        // coincide when either argument is the identity.
        if self.pres.is_identity(i) || self.pres.is_identity(j) {
            return Ok((TorusElement::zero(&self.periods), 0.0));
        }
        let key = (i.clone(), j.clone());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let computed = match &self.backing {
            CocycleBacking::Declared { entries, default } => {
                let hit = entries
                    .iter()
                    .find(|e| self.pres.equal(&e.i, i) && self.pres.equal(&e.j, j))
                    .map(|e| e.value.clone())
                    .or_else(|| default.clone());
                match hit {
                    Some(v) => (TorusElement::new(&self.periods, v, true)?, 0.0),
                    None => {
                        return Err(Error::MissingDeclaredValue {
                            i: self.pres.show_element(i),
                            j: self.pres.show_element(j),
                        })
                    }
                }
            }
            // Any homotopy between the two loops has zero action.
            CocycleBacking::Geometric { loops, .. } if loops.space().form_vanishes() => {
                (TorusElement::zero(&self.periods), 0.0)
            }
            CocycleBacking::Geometric { loops, s_steps, quadrature } => {
                let space = loops.space();
                let ij = self.pres.mul(i, j);
                let target = loops.basis_loop(&ij)?;
                let joined = concat(space, &loops.basis_loop(i)?, &loops.basis_loop(j)?)?;
                let h = straight_homotopy(space, &target, &joined, *s_steps)?;
                let r = action_integral(space, &h, quadrature)?;
                (TorusElement::approximate(&self.periods, r.value)?, r.error)
            }
        };
        self.cache.lock().expect("cache lock").insert(key, computed.clone());
        Ok(computed)
    }

    /// Number of memoized pairs.
    pub fn cached_pairs(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    /// Memoized pairs in a stable order.
    pub fn cached(&self) -> Vec<(GroupElement, GroupElement, TorusElement, f64)> {
        let mut v: Vec<_> = self
            .cache
            .lock()
            .expect("cache lock")
            .iter()
            .map(|((i, j), (t, e))| (i.clone(), j.clone(), t.clone(), *e))
            .collect();
        v.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        v
    }
}

/// An element `(i, u)` of the central extension `Γ̃ = π₁ ×_τ T_tor`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionElement {
    pub elem: GroupElement,
    pub phase: TorusElement,
}

impl ExtensionElement {
    pub fn identity(table: &CocycleTable) -> Self {
        ExtensionElement { elem: table.pres.identity(), phase: TorusElement::zero(&table.periods) }
    }

    /// `σ(i) = (i, 0)`.
    pub fn section(table: &CocycleTable, i: &GroupElement) -> Self {
        ExtensionElement { elem: i.clone(), phase: TorusElement::zero(&table.periods) }
    }

    /// `(1, a)`: a central element.
    pub fn central(table: &CocycleTable, a: TorusElement) -> Self {
        ExtensionElement { elem: table.pres.identity(), phase: a }
    }

    /// Equality in `Γ̃`: equal group elements and equal phases in `T_tor`.
    pub fn same(&self, other: &ExtensionElement, pres: &Presentation) -> bool {
        pres.equal(&self.elem, &other.elem) && self.phase == other.phase
    }

    /// Float distance of the phases, `∞` when the group elements differ.
    pub fn distance(&self, other: &ExtensionElement, pres: &Presentation) -> f64 {
        if pres.equal(&self.elem, &other.elem) {
            self.phase.distance(&other.phase)
        } else {
            f64::INFINITY
        }
    }
}

/// `(i, u) · (j, v) = (i ∗ j, u + v + τ(i, j))`.
pub fn ext_mul(table: &CocycleTable, a: &ExtensionElement, b: &ExtensionElement) -> Result<ExtensionElement> {
    let t = table.tau(&a.elem, &b.elem)?;
    Ok(ExtensionElement { elem: table.pres.mul(&a.elem, &b.elem), phase: a.phase.try_add(&b.phase)?.try_add(&t)? })
}

/// `σ(i)⁻¹ = (i⁻¹, −τ(i, i⁻¹))`.
pub fn ext_inverse_section(table: &CocycleTable, i: &GroupElement) -> Result<ExtensionElement> {
    let inv = table.pres.inv(i);
    let t = table.tau(i, &inv)?;
    Ok(ExtensionElement { elem: inv, phase: t.neg() })
}

/// Distance in `T_tor` between `τ(i,j) + τ(i∗j,k)` and `τ(i,j∗k) + τ(j,k)`.
pub fn verify_cocycle_identity(
    table: &CocycleTable,
    i: &GroupElement,
    j: &GroupElement,
    k: &GroupElement,
) -> Result<f64> {
    let p = &table.pres;
    let lhs = table.tau(i, j)?.try_add(&table.tau(&p.mul(i, j), k)?)?;
    let rhs = table.tau(i, &p.mul(j, k))?.try_add(&table.tau(j, k)?)?;
    Ok(lhs.distance(&rhs))
}

/// `T(w)`, where `Ψ(w) = (1, T(w))` for the homomorphism `Ψ : F(S) → Γ̃`
/// extending `σ`. The representative is the raw sum of the folded cocycle
/// values.
pub fn accumulated_cocycle(table: &CocycleTable, w: &Word) -> Result<TorusElement> {
    let mut acc = ExtensionElement::identity(table);
    for l in w.letters() {
        let g = table.pres.generator(l.generator);
        let step = if l.inverse { ext_inverse_section(table, &g)? } else { ExtensionElement::section(table, &g) };
        acc = ext_mul(table, &acc, &step)?;
    }
    if !table.pres.is_identity(&acc.elem) {
        return Err(Error::NotARelation(table.pres.show(w)));
    }
    Ok(acc.phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::QuadratureSettings;
    use crate::geometry::ModelSpace;
    use crate::homotopy_algebra::loops::BasisFamily;
    use crate::periods::BasisConstants;

    fn torus_table() -> CocycleTable {
        let t = ModelSpace::unit_torus();
        let p = Presentation::free_abelian(&["A", "B"]);
        let loops = BasisLoops::new(&t, &p, BasisLoops::default_base(&t), BasisFamily::Straight, 32).unwrap();
        let basis = BasisConstants::standard();
        let z = Arc::new(PeriodGroup::generate(&basis, &[ExactReal::integer(&basis, 1)]).unwrap());
        CocycleTable::new(
            &p,
            CocycleBacking::Geometric { loops, s_steps: 16, quadrature: QuadratureSettings::default() },
            &z,
        )
        .unwrap()
    }

    #[test]
    fn torus_tau_is_a_triangle_area() {
        let tb = torus_table();
        let a = GroupElement::Abelian(vec![1, 0]);
        let b = GroupElement::Abelian(vec![0, 1]);
        let t = tb.tau(&a, &b).unwrap();
        assert!((t.value().abs() - 0.5).abs() < 1e-12);
        let d = t.try_sub(&tb.tau(&b, &a).unwrap()).unwrap();
        assert!((d.value().abs() - 1.0).abs() < 1e-12);
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn commutator_accumulates_the_area() {
        let tb = torus_table();
        let w = tb.presentation().parse_word("A B A^-1 B^-1").unwrap();
        let t = accumulated_cocycle(&tb, &w).unwrap();
        assert!((t.value().abs() - 1.0).abs() < 1e-12);
        assert!(accumulated_cocycle(&tb, &Word::empty()).unwrap().is_zero());
        let not_rel = tb.presentation().parse_word("A B").unwrap();
        assert!(matches!(accumulated_cocycle(&tb, &not_rel), Err(Error::NotARelation(_))));
    }

    #[test]
    fn extension_identity_and_centrality() {
        let tb = torus_table();
        let a = ExtensionElement::section(&tb, &GroupElement::Abelian(vec![1, 0]));
        let e = ExtensionElement::identity(&tb);
        let p = tb.presentation();
        assert!(ext_mul(&tb, &a, &e).unwrap().same(&a, p));
        assert!(ext_mul(&tb, &e, &a).unwrap().same(&a, p));
        let z = ExtensionElement::central(&tb, TorusElement::approximate(tb.periods(), 0.3).unwrap());
        let l = ext_mul(&tb, &a, &z).unwrap();
        let r = ext_mul(&tb, &z, &a).unwrap();
        assert!(l.same(&r, p));
    }

    #[test]
    fn declared_tables_report_missing_pairs() {
        let p = Presentation::surface(2).unwrap();
        let basis = BasisConstants::standard();
        let trivial = Arc::new(PeriodGroup::trivial(&basis));
        let tb = CocycleTable::new(&p, CocycleBacking::Declared { entries: vec![], default: None }, &trivial).unwrap();
        let err = tb.tau(&p.generator(0), &p.generator(1)).unwrap_err();
        assert!(matches!(err, Error::MissingDeclaredValue { .. }));
        assert!(tb.tau(&p.identity(), &p.generator(1)).unwrap().is_zero());
    }
}
