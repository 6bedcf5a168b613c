use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use prequantum_core::action::{refine, PathSample, QuadratureSettings};
use prequantum_core::geometry::{ChartPoint, ModelSpace};
use prequantum_core::groupoid::{MarkedPointSpec, Scenario, ScenarioConfig, Settings, SnapConfig};
use prequantum_core::homotopy_algebra::{
    surface_relator, BasisFamily, DeclaredEntry, GroupElement, GroupKind, Presentation, Word,
};
use prequantum_core::periods::{BasisConstants, Constant, ExactReal};

use crate::error::{CliError, Result};

/// On-disk scenario description (JSON). See `docs/FORMATS.md`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Omitted for purely algebraic scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<ModelSpace>,
    pub presentation: PresentationSpec,
    #[serde(default)]
    pub basis_loops: BasisSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub marked_points: Vec<MarkedSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<ConstantSpec>,
    #[serde(default)]
    pub snapping: SnapSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_cocycle: Option<DeclaredSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub declared_periods: Vec<String>,
    /// One exact value per generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<String>>,
    /// Pairs `[i, j]` of words whose `τ(i, j)` goes into the report; all
    /// ordered generator pairs when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cocycle_pairs: Vec<[String; 2]>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_level")]
    pub max_level: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindSpec {
    FreeAbelian,
    Free,
    Surface,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub kind: KindSpec,
    pub generators: Vec<String>,
    /// Defaults to the commutators (free abelian) or the surface relator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisSpec {
    #[default]
    Straight,
    Wobbled {
        amplitude: f64,
    },
    Conjugated {
        connector: PathSpec,
    },
    Sampled {
        loops: Vec<PathSpec>,
    },
}

/// Either inline chart points or a CSV file of them, optionally refined
/// by inserting `refine − 1` chart-linear points on every interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default = "one")]
    pub refine: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedSpec {
    pub id: String,
    pub reference: PathSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantSpec {
    pub name: String,
    pub value: f64,
    #[serde(default = "yes")]
    pub independent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapSpec {
    /// Exact expressions tried in order; every symbol (then `one`) when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
    #[serde(default = "default_snap_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_denominator")]
    pub max_denominator: i64,
}

impl Default for SnapSpec {
    fn default() -> Self {
        SnapSpec { candidates: None, tolerance: default_snap_tolerance(), max_denominator: default_max_denominator() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredSpec {
    pub entries: Vec<DeclaredValue>,
    /// Value of every pair not listed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclaredValue {
    pub i: String,
    pub j: String,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub s: usize,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { s: 256, n: 256 }
    }
}

fn default_tolerance() -> f64 {
    1e-6
}
fn default_max_level() -> u32 {
    4
}
fn default_snap_tolerance() -> f64 {
    1e-5
}
fn default_max_denominator() -> i64 {
    12
}
fn one() -> usize {
    1
}
fn yes() -> bool {
    true
}

impl ScenarioFile {
    /// Parses JSON text; `origin` only labels error locations.
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            location: format!("{origin}:{}:{}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files serialize")
    }

    /// Checks the schema-level invariants and builds the engine
    /// configuration. Relative CSV paths resolve against `base_dir`.
    pub fn to_config(&self, base_dir: &Path) -> Result<ScenarioConfig> {
        if self.grid.s < 1 || self.grid.n < 4 {
            return Err(CliError::schema("grid", "need s ≥ 1 and n ≥ 4"));
        }
        if !(self.tolerance > 0.0) {
            return Err(CliError::schema("tolerance", "must be positive"));
        }
        if !(self.snapping.tolerance > 0.0) {
            return Err(CliError::schema("snapping.tolerance", "must be positive"));
        }
        if self.snapping.max_denominator < 1 {
            return Err(CliError::schema("snapping.max_denominator", "must be at least 1"));
        }
        if let Some(sp) = &self.space {
            sp.validate().map_err(|e| CliError::schema("space", e))?;
        }

        let pres = self.presentation()?;
        let mut cfg = ScenarioConfig::new(&self.name, self.space.clone(), pres.clone());

        let extra: Vec<Constant> = self
            .constants
            .iter()
            .map(|c| Constant { name: c.name.clone(), value: c.value, independent: c.independent })
            .collect();
        let basis = BasisConstants::new(extra).map_err(|e| CliError::schema("constants", e))?;
        let exact = |loc: String, text: &str| ExactReal::parse(&basis, text).map_err(|e| CliError::schema(loc, e));
        cfg.constants = basis.clone();

        let mut snap = SnapConfig {
            candidates: Vec::new(),
            tolerance: self.snapping.tolerance,
            max_denominator: self.snapping.max_denominator,
        };
        if let Some(c) = &self.snapping.candidates {
            for (k, t) in c.iter().enumerate() {
                snap.candidates.push(exact(format!("snapping.candidates[{k}]"), t)?);
            }
        }
        cfg.snap = snap;

        for (k, t) in self.declared_periods.iter().enumerate() {
            cfg.declared_periods.push(exact(format!("declared_periods[{k}]"), t)?);
        }
        if let Some(d) = &self.declared_cocycle {
            let mut entries = Vec::new();
            for (k, e) in d.entries.iter().enumerate() {
                let loc = format!("declared_cocycle.entries[{k}]");
                entries.push(DeclaredEntry {
                    i: element(&pres, &format!("{loc}.i"), &e.i)?,
                    j: element(&pres, &format!("{loc}.j"), &e.j)?,
                    value: exact(format!("{loc}.value"), &e.value)?,
                });
            }
            let default = match &d.default {
                Some(t) => Some(exact("declared_cocycle.default".into(), t)?),
                None => None,
            };
            cfg.declared = Some((entries, default));
        }
        if let Some(tw) = &self.twist {
            if tw.len() != pres.rank() {
                return Err(CliError::schema("twist", format!("expected {} values, got {}", pres.rank(), tw.len())));
            }
            let mut vals = Vec::new();
            for (k, t) in tw.iter().enumerate() {
                vals.push(exact(format!("twist[{k}]"), t)?);
            }
            cfg.twist = Some(vals);
        }
        for (k, [i, j]) in self.cocycle_pairs.iter().enumerate() {
            element(&pres, &format!("cocycle_pairs[{k}][0]"), i)?;
            element(&pres, &format!("cocycle_pairs[{k}][1]"), j)?;
        }

        let needs_space = |loc: &str| CliError::schema(loc.to_string(), "requires a space");
        match &self.space {
            Some(space) => {
                if let Some(b) = &self.base_point {
                    space.validate_point(b).map_err(|e| CliError::schema("base_point", e))?;
                    cfg.base_point = Some(ChartPoint::new(b.clone()));
                }
                cfg.basis_family = match &self.basis_loops {
                    BasisSpec::Straight => BasisFamily::Straight,
                    BasisSpec::Wobbled { amplitude } => BasisFamily::Wobbled { amplitude: *amplitude },
                    BasisSpec::Conjugated { connector } => {
                        BasisFamily::Conjugated { connector: connector.load(space, base_dir, "basis_loops.connector")? }
                    }
                    BasisSpec::Sampled { loops } => {
                        if loops.len() != pres.rank() {
                            return Err(CliError::schema(
                                "basis_loops.loops",
                                format!("expected {} loops, got {}", pres.rank(), loops.len()),
                            ));
                        }
                        let mut out = Vec::new();
                        for (k, l) in loops.iter().enumerate() {
                            out.push(l.load(space, base_dir, &format!("basis_loops.loops[{k}]"))?);
                        }
                        BasisFamily::Sampled { loops: out }
                    }
                };
                for (k, m) in self.marked_points.iter().enumerate() {
                    let loc = format!("marked_points[{k}]");
                    if m.id.is_empty() || m.id == "x0" {
                        return Err(CliError::schema(format!("{loc}.id"), "`x0` is reserved for the base point"));
                    }
                    cfg.marked.push(MarkedPointSpec {
                        id: m.id.clone(),
                        reference: m.reference.load(space, base_dir, &format!("{loc}.reference"))?,
                    });
                }
            }
            None => {
                if self.base_point.is_some() {
                    return Err(needs_space("base_point"));
                }
                if !self.marked_points.is_empty() {
                    return Err(needs_space("marked_points"));
                }
                if self.basis_loops != BasisSpec::Straight {
                    return Err(needs_space("basis_loops"));
                }
                if self.declared_cocycle.is_none() {
                    return Err(CliError::schema("declared_cocycle", "required when there is no space"));
                }
            }
        }

        cfg.settings = Settings {
            s_steps: self.grid.s,
            n_steps: self.grid.n,
            quadrature: QuadratureSettings { tolerance: self.tolerance, max_level: self.max_level },
        };
        Ok(cfg)
    }

    pub fn build(&self, base_dir: &Path) -> Result<Scenario> {
        let cfg = self.to_config(base_dir)?;
        Scenario::build(cfg).map_err(|e| CliError::engine(format!("building scenario `{}`", self.name), e))
    }

    pub fn presentation(&self) -> Result<Presentation> {
        let p = &self.presentation;
        for (k, g) in p.generators.iter().enumerate() {
            let ok = g.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(CliError::schema(format!("presentation.generators[{k}]"), format!("invalid name `{g}`")));
            }
            if p.generators[..k].contains(g) {
                return Err(CliError::schema(format!("presentation.generators[{k}]"), format!("duplicate `{g}`")));
            }
        }
        let n = p.generators.len();
        let kind = match p.kind {
            KindSpec::FreeAbelian => GroupKind::FreeAbelian { rank: n },
            KindSpec::Free => GroupKind::Free { rank: n },
            KindSpec::Surface => {
                if n < 4 || !n.is_multiple_of(2) {
                    return Err(CliError::schema(
                        "presentation.generators",
                        "surface groups need an even number (at least 4) of generators",
                    ));
                }
                GroupKind::Surface { genus: n / 2 }
            }
        };
        let relations = match &p.relations {
            Some(rels) => {
                let mut out = Vec::new();
                for (k, r) in rels.iter().enumerate() {
                    let w = Word::parse(r, &p.generators)
                        .map_err(|e| CliError::schema(format!("presentation.relations[{k}]"), e))?;
                    out.push(w);
                }
                out
            }
            None => match kind {
                GroupKind::FreeAbelian { .. } => {
                    let mut out = Vec::new();
                    for i in 0..n {
                        for j in i + 1..n {
                            out.push(Word::commutator(&Word::letter(i, false), &Word::letter(j, false)));
                        }
                    }
                    out
                }
                GroupKind::Free { .. } => Vec::new(),
                GroupKind::Surface { genus } => vec![surface_relator(genus)],
            },
        };
        Presentation::new(p.generators.clone(), relations, kind)
            .map_err(|e| CliError::schema("presentation.relations", e))
    }
}

fn element(pres: &Presentation, loc: &str, text: &str) -> Result<GroupElement> {
    let w = pres.parse_word(text).map_err(|e| CliError::schema(loc.to_string(), e))?;
    Ok(pres.element(&w))
}

impl PathSpec {
    pub fn inline(points: Vec<Vec<f64>>, refine: usize) -> Self {
        PathSpec { points: Some(points), csv: None, refine }
    }

    pub fn load(&self, space: &ModelSpace, base_dir: &Path, loc: &str) -> Result<PathSample> {
        if self.refine < 1 {
            return Err(CliError::schema(format!("{loc}.refine"), "must be at least 1"));
        }
        let path = match (&self.points, &self.csv) {
            (Some(pts), None) => {
                let pts = pts.iter().map(|p| ChartPoint::new(p.clone())).collect();
                PathSample::new(space, pts).map_err(|e| CliError::schema(loc.to_string(), e))?
            }
            (None, Some(csv)) => {
                let full = base_dir.join(csv);
                let f = File::open(&full).map_err(|e| CliError::io(&full, e))?;
                PathSample::read_csv(space, f)
                    .map_err(|e| CliError::schema(format!("{loc} ({})", full.display()), e))?
            }
            _ => return Err(CliError::schema(loc.to_string(), "give exactly one of `points` or `csv`")),
        };
        Ok(if self.refine > 1 { refine(space, &path, self.refine) } else { path })
    }
}

/// Reads and builds a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let file = ScenarioFile::read(path)?;
    file.build(path.parent().unwrap_or(Path::new(".")))
}
