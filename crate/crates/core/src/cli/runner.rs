//! Discretisation setup and the experiment driver.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::config::RunConfig;
use crate::analysis::{error_norms, interpolate_to_surface, total_mass, ErrorNorms, ErrorRow, Rates, SurfaceMesh};
use crate::error::{Error, Result};
use crate::geometry::LevelSetField;
use crate::grid::CartesianGrid;
use crate::problems::ProblemSpec;
use crate::pushforward::{build_pushforward, EmbeddingMode, PushForwardField};
use crate::schemes::{
    ExtensionMode, ExtensionSweep, GridField, OuterCondition, RunStats, SchemeConfig, Solver, TubeOperator,
};
use crate::tube::{build_tube, TubeGrid};

/// Tube widths in units of Δx.
pub const INNER_CELLS: f64 = 3.0;
pub const OUTER_CELLS: f64 = 8.0;

/// A problem on one grid: tube, embedding matrices and error mesh.
pub struct Setup {
    pub spec: ProblemSpec,
    pub tube: TubeGrid,
    pub pushforward: PushForwardField,
    pub mesh: SurfaceMesh,
}

impl Setup {
    pub fn new(spec: ProblemSpec, n: usize, embedding: EmbeddingMode) -> Result<Self> {
        let grid = CartesianGrid::new(spec.shape.dim(), n)?;
        let dx = grid.spacing();
        let field = LevelSetField::new(spec.shape, grid)?;
        let tube = build_tube(&field, INNER_CELLS * dx, OUTER_CELLS * dx)?;
        let pushforward = build_pushforward(&field, &tube, embedding)?;
        let mesh = SurfaceMesh::for_shape(&spec.shape);
        Ok(Self {
            spec,
            tube,
            pushforward,
            mesh,
        })
    }

    pub fn spacing(&self) -> f64 {
        self.tube.spacing()
    }

    pub fn initial(&self) -> GridField {
        self.spec.extend_initial(&self.tube)
    }

    /// Integrates from the extended initial data to `t_final`.
    pub fn solve(
        &self,
        scheme: SchemeConfig,
        t_final: f64,
        output_times: &[f64],
        hook: &mut dyn FnMut(&GridField) -> Result<()>,
    ) -> Result<(GridField, RunStats)> {
        let op = TubeOperator::new(
            &self.tube,
            self.spec.operator_kind(&self.pushforward, &self.tube),
            scheme.order,
            scheme.weno_eps,
        );
        let outer = match scheme.extension {
            ExtensionMode::Neumann => OuterCondition::Neumann(ExtensionSweep::new(&self.tube, scheme.sweep_params())),
            ExtensionMode::Exact => OuterCondition::Exact(self.spec.exact_outer()?),
        };
        let mut solver = Solver::new(op, scheme, outer)?;
        let out = solver.run(self.initial(), t_final, output_times, hook)?;
        Ok((out, solver.stats().clone()))
    }

    /// Mesh used for error norms, restricted to the problem's latitude band.
    pub fn error_mesh(&self) -> SurfaceMesh {
        match self.spec.latitude_band {
            Some(b) => self.mesh.clone().restrict_latitude(b),
            None => self.mesh.clone(),
        }
    }

    /// Surface error norms of a field against the exact solution at its time.
    pub fn surface_errors(&self, field: &GridField) -> Result<ErrorNorms> {
        let mesh = self.error_mesh();
        let u = interpolate_to_surface(&self.tube, &field.values, &mesh)?;
        let exact = mesh
            .points
            .iter()
            .map(|p| self.spec.exact(p, field.time))
            .collect::<Result<Vec<_>>>()?;
        Ok(error_norms(&u, &exact, &mesh.weights))
    }

    pub fn mass(&self, values: &[f64]) -> Result<f64> {
        total_mass(&self.tube, values, &self.mesh)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeshReport {
    pub n: usize,
    pub dx: f64,
    pub inner_points: usize,
    pub outer_points: usize,
    pub final_time: f64,
    pub stats: RunStats,
    pub errors: Option<ErrorNorms>,
    pub initial_mass: f64,
    pub final_mass: f64,
    pub exact_mass: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub t_final: f64,
    pub meshes: Vec<MeshReport>,
    pub errors: Vec<ErrorRow>,
    pub rates: Option<Rates>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub per_mesh_seconds: Vec<(usize, f64)>,
}

/// Plain-text dump of the tube values: a header, then one line per stored
/// point with its grid indices, class and value.
pub fn write_snapshot(path: &Path, tube: &TubeGrid, field: &GridField, experiment: &str) -> Result<()> {
    let grid = tube.grid();
    let dim = grid.dim();
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# surfembed snapshot")?;
    writeln!(w, "experiment {experiment}")?;
    writeln!(w, "dims {}", vec![grid.points_per_axis().to_string(); dim].join(" "))?;
    writeln!(w, "origin {}", vec![(-CartesianGrid::HALF_WIDTH).to_string(); dim].join(" "))?;
    writeln!(w, "spacing {}", grid.spacing())?;
    writeln!(w, "time {}", field.time)?;
    writeln!(w, "points {}", tube.len())?;
    let axes = ["i", "j", "k"];
    writeln!(w, "# {} class value", axes[..dim].join(" "))?;
    for s in 0..tube.len() as u32 {
        let m = grid.multi_index(tube.node(s));
        let idx: Vec<String> = m[..dim].iter().map(|v| v.to_string()).collect();
        writeln!(w, "{} {} {}", idx.join(" "), tube.class(s).label(), field.values[s as usize])?;
    }
    w.flush()?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

pub fn errors_csv(rows: &[ErrorRow]) -> String {
    let mut s = String::from("dx,n,l1,l2,linf\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.dx, r.n, r.l1, r.l2, r.linf));
    }
    s
}

/// Only rates that exist are listed.
pub fn rates_csv(rates: Option<&Rates>) -> String {
    let mut s = String::from("norm,rate\n");
    if let Some(r) = rates {
        for (name, v) in [("l1", r.l1), ("l2", r.l2), ("linf", r.linf)] {
            if let Some(v) = v {
                s.push_str(&format!("{name},{v}\n"));
            }
        }
    }
    s
}

pub fn mass_csv(series: &[(f64, f64)]) -> String {
    let mut s = String::from("t,mass\n");
    for (t, m) in series {
        s.push_str(&format!("{t},{m}\n"));
    }
    s
}

/// Runs every grid size of the configuration and writes `errors.csv`,
/// `rates.csv`, `report.json`, `timing.json` and per-grid `n{n}/mass.csv`
/// plus snapshots under the output directory.
pub fn run_experiment(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let started = Instant::now();
    let spec = ProblemSpec::new(config.experiment);
    let t_final = config.t_final.unwrap_or(spec.t_final);
    let times = config.output_times(t_final);
    fs::create_dir_all(&config.out)
        .map_err(|e| Error::Config(format!("output directory {} is not writable: {e}", config.out.display())))?;

    let scheme = SchemeConfig {
        order: config.order,
        cfl: config.cfl,
        extension: config.extension,
        ..SchemeConfig::default()
    };
    let mut meshes = Vec::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut per_mesh = Vec::new();
    for &n in &config.n {
        let mesh_start = Instant::now();
        log::info!("{} n = {n}: building tube", config.experiment);
        let setup = Setup::new(spec.clone(), n, config.embedding)?;
        let dir = config.out.join(format!("n{n}"));
        fs::create_dir_all(&dir)?;
        let initial_mass = setup.mass(&setup.initial().values)?;
        let mut series = Vec::new();
        let mut index = 0usize;
        let mut hook = |f: &GridField| -> Result<()> {
            series.push((f.time, setup.mass(&f.values)?));
            index += 1;
            write_snapshot(
                &dir.join(format!("snapshot_{index:04}.txt")),
                &setup.tube,
                f,
                config.experiment.name(),
            )
        };
        log::info!("{} n = {n}: {} tube points, integrating to t = {t_final}", config.experiment, setup.tube.len());
        let (field, stats) = setup.solve(scheme, t_final, &times, &mut hook)?;
        let final_mass = series.last().map(|p| p.1).unwrap_or(initial_mass);
        write_text(&dir.join("mass.csv"), &mass_csv(&series))?;
        for w in &stats.warnings {
            warnings.push(format!("n = {n}: {w}"));
        }
        let errors = if spec.has_oracle() {
            match setup.surface_errors(&field) {
                Ok(e) => {
                    rows.push(ErrorRow::new(setup.spacing(), n, e));
                    Some(e)
                }
                Err(e) => {
                    warnings.push(format!("n = {n}: no error norms ({e})"));
                    None
                }
            }
        } else {
            None
        };
        meshes.push(MeshReport {
            n,
            dx: setup.spacing(),
            inner_points: setup.tube.inner().len(),
            outer_points: setup.tube.outer().len(),
            final_time: field.time,
            stats,
            errors,
            initial_mass,
            final_mass,
            exact_mass: spec.exact_mass,
        });
        per_mesh.push((n, mesh_start.elapsed().as_secs_f64()));
    }
    let rates = (rows.len() >= 2).then(|| Rates::from_rows(&rows));
    let report = RunReport {
        config: config.clone(),
        t_final,
        meshes,
        errors: rows,
        rates,
        warnings,
    };
    write_text(&config.out.join("errors.csv"), &errors_csv(&report.errors))?;
    write_text(&config.out.join("rates.csv"), &rates_csv(report.rates.as_ref()))?;
    write_text(&config.out.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    let timing = Timing {
        total_seconds: started.elapsed().as_secs_f64(),
        per_mesh_seconds: per_mesh,
    };
    write_text(&config.out.join("timing.json"), &serde_json::to_string_pretty(&timing)?)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layouts() {
        let rows = [ErrorRow {
            dx: 0.05,
            n: 81,
            l1: 1e-3,
            l2: 2e-3,
            linf: 3e-3,
        }];
        assert_eq!(errors_csv(&rows), "dx,n,l1,l2,linf\n0.05,81,0.001,0.002,0.003\n");
        assert_eq!(rates_csv(None), "norm,rate\n");
        let r = Rates {
            l1: Some(3.0),
            l2: None,
            linf: Some(2.5),
        };
        assert_eq!(rates_csv(Some(&r)), "norm,rate\nl1,3\nlinf,2.5\n");
        assert_eq!(mass_csv(&[(0.5, 1.25)]), "t,mass\n0.5,1.25\n");
    }

    #[test]
    fn snapshot_header_and_rows() {
        let setup = Setup::new(ProblemSpec::new(crate::problems::ExperimentId::A1), 41, EmbeddingMode::PushForward).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.txt");
        write_snapshot(&path, &setup.tube, &setup.initial(), "A1").unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[2], "dims 41 41");
        assert_eq!(lines[3], "origin -2 -2");
        assert_eq!(lines[4], "spacing 0.1");
        assert_eq!(lines.len(), 8 + setup.tube.len());
        let first: Vec<&str> = lines[8].split_whitespace().collect();
        assert_eq!(first.len(), 4);
    }
}
