//! Time integration of the embedded equations on the tube.

mod extension;
mod operator;
mod time;
pub mod weno;

use serde::{Deserialize, Serialize};

pub use extension::{ExtensionSweep, SweepParams, SweepReport};
pub use operator::{cfl_dt, OperatorKind, ScalarFlux, TubeOperator};
pub use time::{euler_step, tvdrk3_step, SemiDiscrete};

use crate::error::{Error, Result};
use crate::tube::TubeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    First,
    Third,
}

impl Order {
    pub fn as_u8(self) -> u8 {
        match self {
            Order::First => 1,
            Order::Third => 3,
        }
    }
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Order::First),
            3 => Ok(Order::Third),
            other => Err(Error::SchemeConfig(format!("order must be 1 or 3, got {other}"))),
        }
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.as_u8()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMode {
    /// Steady-state extension sweep (zero normal derivative).
    #[default]
    Neumann,
    /// Oracle values written into the outer layer.
    Exact,
}

impl ExtensionMode {
    pub fn label(self) -> &'static str {
        match self {
            ExtensionMode::Neumann => "neumann",
            ExtensionMode::Exact => "exact",
        }
    }
}

impl std::str::FromStr for ExtensionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neumann" => Ok(ExtensionMode::Neumann),
            "exact" => Ok(ExtensionMode::Exact),
            other => Err(Error::Config(format!("unknown extension mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub order: Order,
    pub cfl: f64,
    pub weno_eps: f64,
    pub extension: ExtensionMode,
    pub sweep: SweepParams,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            order: Order::Third,
            cfl: 0.5,
            weno_eps: weno::DEFAULT_EPS,
            extension: ExtensionMode::Neumann,
            sweep: SweepParams::default(),
        }
    }
}

impl SchemeConfig {
    /// Sweep parameters with an automatic upwind order resolved.
    pub fn sweep_params(&self) -> SweepParams {
        let mut p = self.sweep;
        if p.upwind_order == 0 {
            p.upwind_order = match self.order {
                Order::First => 1,
                Order::Third => 2,
            };
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.upwind_order > 2 {
            return Err(Error::SchemeConfig(format!(
                "sweep upwind order must be 0, 1 or 2, got {}",
                self.sweep.upwind_order
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::SchemeConfig(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.weno_eps > 0.0) {
            return Err(Error::SchemeConfig("weno_eps must be positive".into()));
        }
        if !(self.sweep.dtau_factor > 0.0 && self.sweep.max_iterations > 0 && self.sweep.tolerance_factor > 0.0) {
            return Err(Error::SchemeConfig("sweep parameters must be positive".into()));
        }
        Ok(())
    }
}

/// Slot-indexed values at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub values: Vec<f64>,
    pub time: f64,
}

/// Writes outer-layer values for time `t`.
pub type OuterWriter<'a> = Box<dyn FnMut(f64, &TubeGrid, &mut [f64]) -> Result<()> + 'a>;

pub enum OuterCondition<'a> {
    Neumann(ExtensionSweep),
    Exact(OuterWriter<'a>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    pub sweeps: usize,
    pub sweeps_unconverged: usize,
    pub max_sweep_iterations: usize,
    pub total_sweep_iterations: usize,
    pub max_sweep_residual: f64,
    pub warnings: Vec<String>,
}

pub struct Solver<'a> {
    op: TubeOperator<'a>,
    config: SchemeConfig,
    outer: OuterCondition<'a>,
    stats: RunStats,
}

impl SemiDiscrete for Solver<'_> {
    fn evolved(&self) -> &[u32] {
        self.op.tube().inner()
    }

    fn rhs(&self, u: &[f64]) -> Vec<f64> {
        self.op.rhs(u)
    }

    fn boundary(&mut self, u: &mut [f64], t: f64) -> Result<()> {
        let tube = self.op.tube();
        match &mut self.outer {
            OuterCondition::Neumann(sweep) => {
                let report = sweep.sweep(tube, u);
                self.stats.sweeps += 1;
                self.stats.max_sweep_iterations = self.stats.max_sweep_iterations.max(report.iterations);
                self.stats.total_sweep_iterations += report.iterations;
                if !report.converged {
                    self.stats.sweeps_unconverged += 1;
                    self.stats.max_sweep_residual = self.stats.max_sweep_residual.max(report.residual);
                }
                Ok(())
            }
            OuterCondition::Exact(write) => write(t, tube, u),
        }
    }
}

impl<'a> Solver<'a> {
    pub fn new(op: TubeOperator<'a>, config: SchemeConfig, outer: OuterCondition<'a>) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            op,
            config,
            outer,
            stats: RunStats::default(),
        })
    }

    pub fn operator(&self) -> &TubeOperator<'a> {
        &self.op
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    /// Time step for the current state.
    pub fn time_step(&self, u: &[f64]) -> f64 {
        cfl_dt(self.op.wave_speed(u), self.op.tube().spacing(), self.config.cfl)
    }

    /// Advances one step of the configured scheme.
    pub fn step(&mut self, u: &mut Vec<f64>, t: f64, dt: f64) -> Result<()> {
        match (self.config.order, self.op.kind()) {
            (Order::First, OperatorKind::Conservation { .. }) => {
                let values = self.op.lxf_euler_values(u, dt);
                for (&s, v) in self.op.tube().inner().iter().zip(values) {
                    u[s as usize] = v;
                }
                self.boundary(u, t + dt)
            }
            (Order::First, OperatorKind::Advection { .. }) => euler_step(self, u, t, dt),
            (Order::Third, _) => tvdrk3_step(self, u, t, dt),
        }
    }

    fn check_finite(&self, u: &[f64], t: f64) -> Result<()> {
        let tube = self.op.tube();
        match u.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(s) => Err(Error::NonFinite {
                point: tube.grid().position(tube.node(s as u32)),
                time: t,
            }),
        }
    }

    /// Integrates to `t_final`, calling `hook` whenever the time reaches one
    /// of `output_times` (landing on each exactly).
    pub fn run(
        &mut self,
        initial: GridField,
        t_final: f64,
        output_times: &[f64],
        hook: &mut dyn FnMut(&GridField) -> Result<()>,
    ) -> Result<GridField> {
        if !(t_final >= initial.time) || !t_final.is_finite() {
            return Err(Error::SchemeConfig(format!(
                "final time {t_final} precedes start time {}",
                initial.time
            )));
        }
        let mut targets: Vec<f64> = output_times
            .iter()
            .copied()
            .filter(|&t| t >= initial.time && t <= t_final)
            .collect();
        targets.sort_by(f64::total_cmp);
        targets.dedup();

        let mut t = initial.time;
        let mut u = initial.values;
        self.check_finite(&u, t)?;
        let mut next = 0;
        while next < targets.len() && targets[next] <= t {
            hook(&GridField { values: u.clone(), time: t })?;
            next += 1;
        }
        self.stats.dt_min = f64::INFINITY;
        while t < t_final {
            let target = targets.get(next).copied().unwrap_or(t_final).min(t_final);
            let mut dt = self.time_step(&u);
            let landing = t + dt >= target - 1e-12 * target.abs().max(1.0);
            if landing {
                dt = target - t;
            }
            self.step(&mut u, t, dt)?;
            t = if landing { target } else { t + dt };
            self.check_finite(&u, t)?;
            self.stats.steps += 1;
            self.stats.dt_min = self.stats.dt_min.min(dt);
            self.stats.dt_max = self.stats.dt_max.max(dt);
            while next < targets.len() && targets[next] <= t {
                hook(&GridField { values: u.clone(), time: t })?;
                next += 1;
            }
        }
        if self.stats.steps == 0 {
            self.stats.dt_min = 0.0;
        }
        if self.stats.sweeps_unconverged > 0 {
            let msg = format!(
                "extension sweep hit the iteration cap in {} of {} calls (max residual {:.3e})",
                self.stats.sweeps_unconverged, self.stats.sweeps, self.stats.max_sweep_residual
            );
            log::warn!("{msg}");
            self.stats.warnings.push(msg);
        }
        Ok(GridField { values: u, time: t })
    }
}
