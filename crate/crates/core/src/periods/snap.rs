//! Matching quadrature output against declared exact values.

use num_rational::BigRational;

use super::exact::{BasisConstants, ExactReal};

/// Snapping table: a float snaps to `(p/q) · c` for a candidate `c` when
/// they agree within `tolerance` and `q <= max_denominator`.
#[derive(Debug, Clone)]
pub struct Snapper {
    candidates: Vec<ExactReal>,
    tolerance: f64,
    max_denominator: i64,
}

impl Snapper {
    pub fn new(candidates: Vec<ExactReal>, tolerance: f64, max_denominator: i64) -> Self {
        Snapper { candidates, tolerance, max_denominator: max_denominator.max(1) }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn candidates(&self) -> &[ExactReal] {
        &self.candidates
    }

    /// The candidate multiple `(p/q)·c` within tolerance with the smallest `q`;
    /// ties go to the earlier candidate.
    pub fn snap(&self, v: f64) -> Option<ExactReal> {
        if let Some(c) = self.candidates.first() {
            if v.abs() <= self.tolerance {
                return Some(ExactReal::zero(c.basis()));
            }
        }
        for q in 1..=self.max_denominator {
            for c in &self.candidates {
                let cv = c.value();
                if cv == 0.0 {
                    continue;
                }
                let p = (v / cv * q as f64).round();
                if p == 0.0 || p.abs() > 1e12 {
                    continue;
                }
                if (p / q as f64 * cv - v).abs() <= self.tolerance {
                    let k = BigRational::new((p as i64).into(), q.into());
                    return Some(c.scale(&k));
                }
            }
        }
        None
    }
}

/// Warnings for pairs of symbols whose float values look rationally related.
///
/// Independence is declared, not detected; this only flags suspicious
/// near-relations `|v_j/v_i - p/q| < 1e-10` with `q <= 64`.
pub fn relation_probe(basis: &BasisConstants) -> Vec<String> {
    let cs = basis.constants();
    let mut out = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if !(cs[i].independent && cs[j].independent) {
                continue;
            }
            let ratio = cs[j].value / cs[i].value;
            for q in 1..=64i64 {
                let p = (ratio * q as f64).round();
                if p != 0.0 && (ratio - p / q as f64).abs() < 1e-10 * ratio.abs().max(1.0) {
                    out.push(format!(
                        "symbols `{}` and `{}` are declared independent but {} ≈ {}/{} · {}",
                        cs[i].name, cs[j].name, cs[j].name, p, q, cs[i].name
                    ));
                    break;
                }
            }
        }
    }
    out
}
