//! Verification campaigns, reports and figures behind the `crystal-si` binary.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use crystal_si::algebra::{builtin_catalog, load_catalog, Catalog, CrystalGroup};
use crystal_si::geometry::{dirichlet_domain, domain_svg, find_generic_point, vertices_csv, DirichletDomain, Region};
use crystal_si::spectral::{make_grid_with_window, NuWindow, SpectralGrid};
use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

mod report;
mod suites;

pub use report::{Bound, Check, SuiteReport, SuiteTiming, Timings, VerificationReport};

/// Overrides the built-in catalog with a JSON catalog file.
pub const CATALOG_ENV: &str = "CRYSTAL_SI_CATALOG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Geometry,
    Transforms,
    Invariance,
    Poisson,
    PgExample,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 6] = [
        Suite::Algebra,
        Suite::Geometry,
        Suite::Transforms,
        Suite::Invariance,
        Suite::Poisson,
        Suite::PgExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Geometry => "geometry",
            Suite::Transforms => "transforms",
            Suite::Invariance => "invariance",
            Suite::Poisson => "poisson",
            Suite::PgExample => "pg-example",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub group: String,
    pub nodes_per_axis: usize,
    pub r_nu: i64,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub suites: Vec<Suite>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            group: "pg".into(),
            nodes_per_axis: 8,
            r_nu: 2,
            trials: 20,
            seed: 7,
            out: None,
            suites: vec![Suite::All],
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis < 2 {
            bail!("--nodes must be at least 2, got {}", self.nodes_per_axis);
        }
        if self.trials < 1 {
            bail!("--trials must be at least 1");
        }
        if self.r_nu < 1 {
            bail!("--rnu must be at least 1, got {}", self.r_nu);
        }
        Ok(())
    }

    /// Suites in canonical order with `all` expanded. `pg-example` joins
    /// `all` only for the group `pg`.
    pub fn resolved_suites(&self) -> Vec<Suite> {
        let all = self.suites.contains(&Suite::All);
        Suite::CONCRETE
            .into_iter()
            .filter(|s| {
                self.suites.contains(s) || (all && (*s != Suite::PgExample || self.group == "pg"))
            })
            .collect()
    }

    /// Seed of one suite; independent of which other suites run.
    pub fn suite_seed(&self, suite: Suite) -> u64 {
        let salt = suite.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        self.seed ^ salt
    }
}

/// The built-in catalog, or the file named by `CRYSTAL_SI_CATALOG`.
pub fn catalog_from_env() -> Result<Catalog> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => load_catalog(&path).with_context(|| format!("loading catalog from {}", Path::new(&path).display())),
        None => Ok(builtin_catalog()),
    }
}

pub fn lookup_group(catalog: &Catalog, name: &str) -> Result<CrystalGroup> {
    match catalog.get(name) {
        Some(g) => Ok(g.clone()),
        None => bail!("unknown group {name:?}; known groups: {}", catalog.names().collect::<Vec<_>>().join(", ")),
    }
}

/// `Ω` for `group`: centred at `(0, 1/4)` for pg, else at a generic point.
pub fn standard_domain(group: &CrystalGroup) -> Result<DirichletDomain> {
    let omega0 = if group.name() == "pg" {
        Vector2::new(0.0, 0.25)
    } else {
        find_generic_point(group, 1)?
    };
    Ok(dirichlet_domain(group, omega0, 1.0)?)
}

pub fn standard_grid(group: &CrystalGroup, nodes: usize, r_nu: i64) -> Result<Arc<SpectralGrid>> {
    let dom = standard_domain(group)?;
    Ok(make_grid_with_window(group, &dom, nodes, NuWindow::for_group(group, r_nu))?)
}

/// One line per group: name, order, symmorphic flag, basis.
pub fn cmd_catalog(catalog: &Catalog) -> String {
    let mut out = String::from("name  order  symmorphic  basis\n");
    for g in catalog.groups() {
        let b = g.basis();
        out.push_str(&format!(
            "{:<5} {:>5}  {:<10}  [[{:.4}, {:.4}], [{:.4}, {:.4}]]\n",
            g.name(),
            g.order(),
            g.is_symmorphic(),
            b[(0, 0)],
            b[(0, 1)],
            b[(1, 0)],
            b[(1, 1)]
        ));
    }
    out
}

/// Writes `domain.svg` and `vertices.csv` for `group` into `out`; returns
/// their paths.
pub fn cmd_domain(group: &CrystalGroup, out: &Path) -> Result<(PathBuf, PathBuf)> {
    let dom = standard_domain(group)?;
    let svg = domain_svg(group, &dom, Region::square(1.5))?;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let svg_path = out.join("domain.svg");
    let csv_path = out.join("vertices.csv");
    std::fs::write(&svg_path, svg).with_context(|| format!("writing {}", svg_path.display()))?;
    std::fs::write(&csv_path, vertices_csv(&dom)).with_context(|| format!("writing {}", csv_path.display()))?;
    Ok((svg_path, csv_path))
}

/// Runs every resolved suite, concurrently, and assembles the report in
/// canonical suite order.
pub fn cmd_verify(catalog: &Catalog, config: &CampaignConfig) -> Result<(VerificationReport, Timings)> {
    config.validate()?;
    let group = lookup_group(catalog, &config.group)?;
    let suites = config.resolved_suites();
    if suites.contains(&Suite::PgExample) && group.name() != "pg" {
        bail!("suite pg-example needs the group pg, got {}", group.name());
    }
    let grid = standard_grid(&group, config.nodes_per_axis, config.r_nu)?;
    let results: Vec<Result<(SuiteReport, f64)>> = std::thread::scope(|s| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| {
                let (group, grid) = (&group, &grid);
                s.spawn(move || {
                    let start = std::time::Instant::now();
                    let report = suites::run(suite, group, grid, config)?;
                    Ok((report, start.elapsed().as_secs_f64()))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut reports = Vec::new();
    let mut timings = Vec::new();
    for r in results {
        let (report, secs) = r?;
        timings.push(SuiteTiming {
            suite: report.name.clone(),
            seconds: secs,
        });
        reports.push(report);
    }
    Ok((VerificationReport::new(config.clone(), reports), Timings { suites: timings }))
}

/// The pg worked example: conditions (a)(b)(c) and the invariance suite.
pub fn cmd_pg_example(catalog: &Catalog, config: &CampaignConfig) -> Result<(VerificationReport, Timings)> {
    let config = CampaignConfig {
        group: "pg".into(),
        suites: vec![Suite::PgExample],
        ..config.clone()
    };
    cmd_verify(catalog, &config)
}

/// The non-invariant range function on pg must fail invariance.
pub fn cmd_negative_control(catalog: &Catalog, config: &CampaignConfig) -> Result<VerificationReport> {
    config.validate()?;
    let config = CampaignConfig {
        group: "pg".into(),
        suites: vec![],
        ..config.clone()
    };
    let group = lookup_group(catalog, "pg")?;
    let grid = standard_grid(&group, config.nodes_per_axis, config.r_nu)?;
    let report = suites::negative_control(&grid, config.seed)?;
    Ok(VerificationReport::new(config, vec![report]))
}

/// Writes `name` into the output directory, or prints it when there is none.
pub fn emit(out: Option<&Path>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}
