use crate::action::{action_integral, chart_lerp, concat_all, reverse, straight_homotopy, ActionResult, PathSample};
use crate::error::{Error, Result};
use crate::geometry::ChartPoint;
use crate::homotopy_algebra::GroupElement;
use crate::periods::TorusElement;

use super::scenario::Scenario;

/// `ψ(ℓ)` with the data behind it.
#[derive(Debug, Clone)]
pub struct PsiValue {
    pub phase: TorusElement,
    pub class: GroupElement,
    pub action: ActionResult,
}

/// `ψ(ℓ) = π_ω(∫ Kω)` over the straight homotopy from the basis loop of
/// `ℓ`'s class to `ℓ`.
///
/// The basis loop of a class is the concatenation of generator loops along
/// its normal-form word. That choice absorbs the surfacic cocycle, which is
/// what makes `ψ` additive on based loops.
pub fn global_psi(scn: &Scenario, lp: &PathSample) -> Result<TorusElement> {
    global_psi_detailed(scn, lp).map(|v| v.phase)
}

pub fn global_psi_detailed(scn: &Scenario, lp: &PathSample) -> Result<PsiValue> {
    let loops = scn.require_loops()?;
    let space = loops.space();
    if !lp.is_closed() {
        return Err(Error::NotClosed { gap: lp.start().distance(lp.end()) });
    }
    let class = loops.component_index(lp)?;
    if space.form_vanishes() {
        // The class fixes a homotopy to the basis loop; its action is 0
        // whatever it is, so none is constructed.
        let s_steps = scn.settings().s_steps;
        let action = ActionResult { value: 0.0, error: 0.0, level: 0, strips: vec![0.0; s_steps] };
        return Ok(PsiValue { phase: TorusElement::zero(scn.p_omega()), class, action });
    }
    let basis = loops.adapted_loop(&class)?;
    let h = straight_homotopy(space, &basis, lp, scn.settings().s_steps)?;
    let action = action_integral(space, &h, &scn.settings().quadrature)?;
    let phase = TorusElement::approximate(scn.p_omega(), action.value)?;
    Ok(PsiValue { phase, class, action })
}

/// The chart-straight path from `a` to `b` with `n` intervals.
pub fn straight_path(scn: &Scenario, a: &ChartPoint, b: &ChartPoint, n: usize) -> Result<PathSample> {
    let space = scn.require_space()?;
    PathSample::from_fn(space, n, |w| {
        if w == 0.0 {
            a.0.clone()
        } else if w == 1.0 {
            b.0.clone()
        } else {
            chart_lerp(space, a, b, w)
        }
    })
}

/// The default connector from the base point to `p`: the reference path
/// when `p` is marked, otherwise the chart-straight path.
pub fn default_connector(scn: &Scenario, p: &ChartPoint) -> Result<PathSample> {
    if let Ok(m) = scn.marked_at(p) {
        if let Some(r) = &m.reference {
            return Ok(r.clone());
        }
    }
    let base = scn.require_loops()?.base().clone();
    straight_path(scn, &base, p, scn.settings().n_steps)
}

/// `Φ(γ, γ′) = ψ(δ ∨ γ ∨ γ̄′ ∨ δ̄)` for a connector `δ` from the base point
/// to `γ(0)`.
pub fn chasles_phi(
    scn: &Scenario,
    g: &PathSample,
    g2: &PathSample,
    delta: Option<&PathSample>,
) -> Result<TorusElement> {
    let space = scn.require_space()?;
    for (p, q) in [(g2.start(), g.start()), (g2.end(), g.end())] {
        if space.cover_shift(p, q).is_none() {
            return Err(Error::EndpointMismatch { gap: p.distance(q) });
        }
    }
    let own;
    let delta = match delta {
        Some(d) => d,
        None => {
            own = default_connector(scn, g.start())?;
            &own
        }
    };
    let base = scn.require_loops()?.base();
    if space.cover_shift(delta.start(), base).is_none() {
        return Err(Error::EndpointMismatch { gap: delta.start().distance(base) });
    }
    let lp = concat_all(space, &[delta, g, &reverse(g2), &reverse(delta)])?;
    global_psi(scn, &lp)
}
