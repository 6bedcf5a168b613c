use std::fs;
use std::path::{Path, PathBuf};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use prequantum_core::periods::exact::format_rational;
use prequantum_core::periods::{ExactReal, PeriodGroup};

use crate::error::{CliError, Result};

/// An exact value as rational coefficients over the basis symbols, with
/// its float rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exact {
    pub text: String,
    pub value: f64,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub symbol: String,
    pub coefficient: String,
}

impl Exact {
    pub fn of(x: &ExactReal) -> Self {
        let terms = x
            .coeffs()
            .iter()
            .zip(x.basis().constants())
            .filter(|(q, _)| !q.is_zero())
            .map(|(q, c)| Term { symbol: c.name.clone(), coefficient: format_rational(q) })
            .collect();
        Exact { text: x.to_string(), value: x.value(), terms }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub text: String,
    pub generators: Vec<Exact>,
    pub lattice_basis: Vec<Exact>,
    pub rank: usize,
    pub discrete: bool,
    pub trivial: bool,
    pub canonical_generator: Option<Exact>,
}

impl GroupReport {
    pub fn of(g: &PeriodGroup) -> Self {
        GroupReport {
            text: g.to_string(),
            generators: g.generators().iter().map(Exact::of).collect(),
            lattice_basis: g.lattice_basis().iter().map(Exact::of).collect(),
            rank: g.rank(),
            discrete: g.is_discrete(),
            trivial: g.is_trivial(),
            canonical_generator: g.canonical_generator().map(Exact::of),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub name: String,
    pub value: f64,
    pub independent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub label: String,
    pub value: f64,
    pub error: f64,
    pub level: u32,
    pub exact: Exact,
    pub snapped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub i: String,
    pub j: String,
    /// Raw representative before reduction.
    pub value: f64,
    /// Canonical representative modulo `P_tor`.
    pub canonical: Exact,
    pub error: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub word: String,
    pub raw: f64,
    pub value: Exact,
    pub snapped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub pi1_abelianization: String,
    /// `Ext(π₁^ab, P_ω)`.
    pub ext: String,
    /// `H¹(X, T_ω) = Hom(π₁^ab, T_ω)`.
    pub characters_h1: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub radius: f64,
    pub action: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HolonomyReport {
    Subgroup { group: GroupReport },
    Continuum { witnesses: Vec<Witness> },
    Unavailable { reason: String },
}

/// Accumulated action along one homotopy, `S + 1` values from `s = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionTrace {
    pub homotopy: String,
    pub total: f64,
    pub cumulative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    /// Passes iff `residual ≤ tolerance` (and the residual is finite).
    pub fn measured(name: &str, residual: f64, tolerance: f64) -> Self {
        let finite = residual.is_finite();
        CheckResult {
            name: name.to_string(),
            residual: finite.then_some(residual),
            tolerance,
            pass: finite && residual <= tolerance,
            detail: None,
        }
    }

    /// An exact check: residual 0 on success, 1 on failure.
    pub fn exact(name: &str, ok: bool) -> Self {
        Self::measured(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn failed(name: &str, tolerance: f64, why: impl ToString) -> Self {
        CheckResult { name: name.to_string(), residual: None, tolerance, pass: false, detail: Some(why.to_string()) }
    }

    pub fn with_detail(mut self, detail: impl ToString) -> Self {
        self.detail = Some(detail.to_string());
        self
    }

    pub fn line(&self) -> String {
        let r = match self.residual {
            Some(r) => format!("{r:.3e}"),
            None => "n/a".to_string(),
        };
        let mut s = format!(
            "[{}] {} (residual {r}, tolerance {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.tolerance
        );
        if let Some(d) = &self.detail {
            s.push_str(" - ");
            s.push_str(d);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub scenario: String,
    pub space: Option<String>,
    pub presentation: String,
    pub grid: [usize; 2],
    pub tolerance: f64,
    pub max_level: u32,
    pub constants: Vec<ConstantReport>,
    pub toric_periods: Vec<PeriodReport>,
    pub cocycle: Vec<CocycleReport>,
    pub relations: Vec<RelationReport>,
    pub p_tor: GroupReport,
    pub p_omega: GroupReport,
    pub t_omega: String,
    pub moduli: ModuliReport,
    pub holonomy: HolonomyReport,
    pub action_traces: Vec<ActionTrace>,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

/// Writes `<scenario>.json` and/or `<scenario>.action.csv` into `out`.
pub fn emit(report: &AnalysisReport, formats: &[Format], out: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut written = Vec::new();
    for f in formats {
        let path = match f {
            Format::Json => {
                let p = out.join(format!("{}.json", report.scenario));
                let mut text = report.to_json();
                text.push('\n');
                fs::write(&p, text).map_err(|e| CliError::io(&p, e))?;
                p
            }
            Format::Csv => {
                let p = out.join(format!("{}.action.csv", report.scenario));
                write_traces(report, &p)?;
                p
            }
        };
        written.push(path);
    }
    Ok(written)
}

fn write_traces(report: &AnalysisReport, path: &Path) -> Result<()> {
    let io = |e: csv::Error| CliError::io(path, e.into());
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["homotopy", "s", "cumulative_action"]).map_err(io)?;
    for t in &report.action_traces {
        let steps = t.cumulative.len() - 1;
        for (j, c) in t.cumulative.iter().enumerate() {
            let s = j as f64 / steps as f64;
            w.write_record([t.homotopy.as_str(), &format!("{s:?}"), &format!("{c:?}")]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
