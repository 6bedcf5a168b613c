use prequantum_core::groupoid::{holonomy_group, Holonomy, Scenario};
use prequantum_core::periods::{characters_h1, moduli_ext, PeriodGroup};

use crate::error::{CliError, Result};
use crate::report::{
    ActionTrace, AnalysisReport, CocycleReport, ConstantReport, Exact, GroupReport, HolonomyReport, ModuliReport,
    PeriodReport, RelationReport, Witness,
};
use crate::scenario_file::ScenarioFile;
use crate::verify::{moduli_checks, corpus_checks, scenario_checks, VerifyOptions};

/// `R/P` with its topology spelled out.
pub fn describe_torus(p: &PeriodGroup) -> String {
    if p.is_trivial() {
        "R (no periods)".to_string()
    } else if p.is_discrete() {
        format!("R/{p}, a circle of length {}", p.canonical_generator().map(|g| g.value().abs()).unwrap_or(0.0))
    } else {
        format!("R/({p}), dense periods (not Hausdorff)")
    }
}

/// Everything the engine computes for a scenario, plus its checks.
pub fn run_analysis(scn: &Scenario, file: &ScenarioFile, opts: &VerifyOptions) -> Result<AnalysisReport> {
    let pres = scn.presentation();
    let ctx = |what: &str| format!("{}: {what}", scn.name());

    let pairs: Vec<(String, String)> = if file.cocycle_pairs.is_empty() {
        let g = pres.generators();
        g.iter().flat_map(|a| g.iter().map(move |b| (a.clone(), b.clone()))).collect()
    } else {
        file.cocycle_pairs.iter().map(|[i, j]| (i.clone(), j.clone())).collect()
    };
    let mut cocycle = Vec::new();
    for (i, j) in pairs {
        let parse = |t: &str| pres.parse_word(t).map(|w| pres.element(&w));
        let (gi, gj) = (parse(&i), parse(&j));
        let (gi, gj) = (
            gi.map_err(|e| CliError::engine(ctx("cocycle pair"), e))?,
            gj.map_err(|e| CliError::engine(ctx("cocycle pair"), e))?,
        );
        let (t, error) =
            scn.cocycle().tau_with_error(&gi, &gj).map_err(|e| CliError::engine(ctx(&format!("tau({i}, {j})")), e))?;
        cocycle.push(CocycleReport {
            i,
            j,
            value: t.value(),
            canonical: Exact::of(&t.canonical()),
            error,
            exact: t.is_exact(),
        });
    }

    let holonomy = match holonomy_group(scn) {
        Ok(Holonomy::Subgroup(g)) => HolonomyReport::Subgroup { group: GroupReport::of(&g) },
        Ok(Holonomy::Continuum { witnesses }) => HolonomyReport::Continuum {
            witnesses: witnesses.into_iter().map(|(radius, action)| Witness { radius, action }).collect(),
        },
        Err(e) => HolonomyReport::Unavailable { reason: e.to_string() },
    };

    let ab = pres.abelianization();
    let mut checks = scenario_checks(scn, file, opts);
    checks.extend(corpus_checks(scn));

    Ok(AnalysisReport {
        scenario: scn.name().to_string(),
        space: scn.space().map(|s| s.name()),
        presentation: pres.to_string(),
        grid: [file.grid.s, file.grid.n],
        tolerance: file.tolerance,
        max_level: file.max_level,
        constants: scn
            .constants()
            .constants()
            .iter()
            .map(|c| ConstantReport { name: c.name.clone(), value: c.value, independent: c.independent })
            .collect(),
        toric_periods: scn
            .toric_periods()
            .iter()
            .map(|r| PeriodReport {
                label: r.label.clone(),
                value: r.action.value,
                error: r.action.error,
                level: r.action.level,
                exact: Exact::of(&r.exact),
                snapped: r.snapped,
            })
            .collect(),
        cocycle,
        relations: scn
            .relation_values()
            .iter()
            .map(|r| RelationReport {
                word: r.word.clone(),
                raw: r.raw,
                value: Exact::of(r.value.rep()),
                snapped: r.snapped,
            })
            .collect(),
        p_tor: GroupReport::of(scn.p_tor()),
        p_omega: GroupReport::of(scn.p_omega()),
        t_omega: describe_torus(scn.p_omega()),
        moduli: ModuliReport {
            pi1_abelianization: ab.to_string(),
            ext: moduli_ext(&ab, scn.p_omega()).to_string(),
            characters_h1: characters_h1(&ab, scn.p_omega()).to_string(),
        },
        holonomy,
        action_traces: scn
            .toric_periods()
            .iter()
            .map(|r| ActionTrace {
                homotopy: r.label.clone(),
                total: r.action.value,
                cumulative: r.action.cumulative(),
            })
            .collect(),
        checks,
        warnings: scn.warnings().to_vec(),
    })
}

/// Loads and analyzes one scenario file.
pub fn run_verification(
    file: &ScenarioFile,
    base_dir: &std::path::Path,
    opts: &VerifyOptions,
) -> Result<AnalysisReport> {
    let scn = file.build(base_dir)?;
    run_analysis(&scn, file, opts)
}

/// The algebraic checks that belong to no scenario.
pub fn standalone_checks() -> Vec<crate::report::CheckResult> {
    moduli_checks()
}
