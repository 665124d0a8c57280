//! Parameter sweeps over the longitudinal field.

mod output;

pub use output::{emit, parse_csv, parse_json, write_result, Table};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::{try_map_ordered, Execution};
use crate::numfmt::round_sig12;
use crate::probe_protocol::{overlap_avoided, overlap_level_crossing, trotter_fidelity, Method, ProtocolRun};
use crate::spin_model::{
    concurrence_of_state, ground_state_analytic, ground_state_numeric, mixing_angle, sensitivity, spectrum,
    ChainSpec, Sector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Spectrum,
    Concurrence,
    OverlapLc,
    OverlapAc,
    Sensitivity,
    TrotterFidelity,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Spectrum,
        Quantity::Concurrence,
        Quantity::OverlapLc,
        Quantity::OverlapAc,
        Quantity::Sensitivity,
        Quantity::TrotterFidelity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Spectrum => "spectrum",
            Quantity::Concurrence => "concurrence",
            Quantity::OverlapLc => "overlap-lc",
            Quantity::OverlapAc => "overlap-ac",
            Quantity::Sensitivity => "sensitivity",
            Quantity::TrotterFidelity => "trotter-fidelity",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown quantity {s:?}")))
    }
}

pub(crate) fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Trotter => "trotter",
    }
}

pub(crate) fn parse_method(s: &str) -> Result<Method> {
    match s {
        "exact" => Ok(Method::Exact),
        "trotter" => Ok(Method::Trotter),
        _ => Err(Error::domain(format!("unknown method {s:?}"))),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::domain(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub quantity: Quantity,
    pub bz_min: f64,
    pub bz_max: f64,
    pub steps: usize,
    pub bx: f64,
    pub eps: f64,
    pub tau: f64,
    pub method: Method,
    pub trotter_steps: usize,
    pub n: usize,
    pub format: Format,
    /// `None` writes to standard output.
    pub out: Option<PathBuf>,
    pub parallel: bool,
    pub metadata: bool,
    /// overlap-ac only: emit exact and product-formula curves side by side.
    pub compare: bool,
}

impl SweepConfig {
    /// Defaults for `quantity`: the full `[-2, 2]` grid with 81 points, and
    /// `bx = 0.1` for the avoided-crossing quantities, 0 otherwise.
    pub fn new(quantity: Quantity) -> Self {
        let bx = match quantity {
            Quantity::Spectrum | Quantity::Concurrence | Quantity::OverlapLc => 0.0,
            _ => 0.1,
        };
        SweepConfig {
            quantity,
            bz_min: -2.0,
            bz_max: 2.0,
            steps: 81,
            bx,
            eps: 0.2,
            tau: 1.6,
            method: Method::Exact,
            trotter_steps: 1,
            n: 2,
            format: Format::Csv,
            out: None,
            parallel: false,
            metadata: true,
            compare: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let reals = [self.bz_min, self.bz_max, self.bx, self.eps, self.tau];
        if !reals.iter().all(|x| x.is_finite()) {
            return Err(Error::domain("sweep parameters must be finite"));
        }
        if self.bz_min > self.bz_max {
            return Err(Error::domain(format!("bz-min {} exceeds bz-max {}", self.bz_min, self.bz_max)));
        }
        if self.steps == 0 {
            return Err(Error::domain("steps must be >= 1"));
        }
        if self.steps == 1 && self.bz_min != self.bz_max {
            return Err(Error::domain("a 1-point sweep needs bz-min == bz-max"));
        }
        if self.steps > 1 && self.bz_min == self.bz_max {
            return Err(Error::domain("a multi-point sweep needs bz-min < bz-max"));
        }
        if self.bx < 0.0 || self.eps < 0.0 || self.tau < 0.0 {
            return Err(Error::domain("bx, eps and tau must be non-negative"));
        }
        if self.trotter_steps == 0 {
            return Err(Error::domain("trotter steps must be >= 1"));
        }
        self.chain(self.bz_min).validate()?;
        if self.compare && self.quantity != Quantity::OverlapAc {
            return Err(Error::domain("--compare applies to overlap-ac only"));
        }
        match self.quantity {
            Quantity::Concurrence | Quantity::OverlapLc if self.n != 2 => {
                return Err(Error::domain(format!("{} is defined for n = 2", self.quantity)));
            }
            Quantity::OverlapLc if self.bx != 0.0 => {
                return Err(Error::domain("overlap-lc is the bx = 0 protocol; use overlap-ac"));
            }
            Quantity::OverlapLc if self.eps <= 0.0 => {
                return Err(Error::domain("overlap-lc needs eps > 0"));
            }
            Quantity::Sensitivity if self.bx <= 0.0 => {
                return Err(Error::domain("sensitivity needs bx > 0"));
            }
            _ => {}
        }
        let strictly_ascending = self.grid().windows(2).all(|w| w[0] < w[1]);
        if !strictly_ascending {
            return Err(Error::domain("grid points are not strictly ascending at this resolution"));
        }
        Ok(())
    }

    /// Inclusive uniform grid; the endpoints are exactly `bz_min`, `bz_max`.
    pub fn grid(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.bz_min];
        }
        let last = self.steps - 1;
        let span = self.bz_max - self.bz_min;
        (0..self.steps)
            .map(|i| if i == last { self.bz_max } else { self.bz_min + span * (i as f64) / (last as f64) })
            .collect()
    }

    fn chain(&self, bz: f64) -> ChainSpec {
        ChainSpec::pair(bz).with_n(self.n).with_bx(self.bx)
    }

    fn protocol(&self, method: Method) -> ProtocolRun {
        ProtocolRun::new(self.chain(0.0).with_probe(self.eps), self.tau, method).with_steps(self.trotter_steps)
    }

    fn execution(&self) -> Execution {
        Execution::from_flag(self.parallel)
    }

    pub fn columns(&self) -> Vec<String> {
        let names: &[&str] = match self.quantity {
            Quantity::Spectrum => {
                let mut c = vec!["bz".to_string()];
                c.extend((1..=1usize << self.n).map(|k| format!("e{k}")));
                return c;
            }
            Quantity::Concurrence => &["bz", "concurrence", "degenerate"],
            Quantity::OverlapLc => &["bz", "L", "degenerate"],
            Quantity::OverlapAc if self.compare => &["bz", "L_exact", "L_trotter", "fidelity_plus", "fidelity_minus"],
            Quantity::OverlapAc => &["bz", "L", "degenerate"],
            Quantity::Sensitivity => &["bz", "sensitivity", "phi"],
            Quantity::TrotterFidelity => &["bz", "fidelity_plus", "fidelity_minus", "fidelity_min", "gate_fidelity"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

/// Sweep output. Row values are already rounded to 12 significant digits;
/// flags are stored as 0/1.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Tool version, timestamp and grid; `None` when suppressed.
    pub metadata: Option<serde_json::Value>,
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn rows_for(config: &SweepConfig, grid: &[f64]) -> Result<Vec<Vec<f64>>> {
    let exec = config.execution();
    let row = |bz: f64, values: &[f64]| std::iter::once(bz).chain(values.iter().copied()).collect::<Vec<_>>();
    match config.quantity {
        Quantity::Spectrum => try_map_ordered(grid, exec, |&bz| Ok(row(bz, &spectrum(&config.chain(bz))?))),
        Quantity::Concurrence => try_map_ordered(grid, exec, |&bz| {
            let (state, degenerate) = if config.bx == 0.0 {
                let g = ground_state_analytic(bz);
                (g.state, g.degenerate)
            } else {
                let g = ground_state_numeric(&config.chain(bz), Sector::Triplet)?;
                (g.state, g.degenerate)
            };
            Ok(row(bz, &[concurrence_of_state(&state)?, flag(degenerate)]))
        }),
        Quantity::OverlapLc => try_map_ordered(grid, exec, |&bz| {
            let o = overlap_level_crossing(bz, config.eps)?;
            Ok(row(bz, &[o.value, flag(o.degenerate)]))
        }),
        Quantity::OverlapAc if config.compare => {
            let exact = overlap_avoided(&config.protocol(Method::Exact), grid, exec)?;
            let trot = overlap_avoided(&config.protocol(Method::Trotter), grid, exec)?;
            let run = config.protocol(Method::Trotter);
            let fid = try_map_ordered(grid, exec, |&bz| trotter_fidelity(&run.with_bz(bz)))?;
            Ok(exact
                .iter()
                .zip(&trot)
                .zip(&fid)
                .map(|((e, t), f)| row(e.bz, &[e.l, t.l, f.plus, f.minus]))
                .collect())
        }
        Quantity::OverlapAc => Ok(overlap_avoided(&config.protocol(config.method), grid, exec)?
            .iter()
            .map(|p| row(p.bz, &[p.l, flag(p.degenerate)]))
            .collect()),
        Quantity::Sensitivity => try_map_ordered(grid, exec, |&bz| {
            Ok(row(bz, &[sensitivity(bz, config.bx)?, mixing_angle(bz, config.bx)?]))
        }),
        Quantity::TrotterFidelity => {
            let run = config.protocol(Method::Trotter);
            try_map_ordered(grid, exec, |&bz| {
                let f = trotter_fidelity(&run.with_bz(bz))?;
                Ok(row(bz, &[f.plus, f.minus, f.worst_state(), f.gate]))
            })
        }
    }
}

fn metadata(config: &SweepConfig) -> serde_json::Value {
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": timestamp,
        "grid": {
            "bz_min": config.bz_min,
            "bz_max": config.bz_max,
            "steps": config.steps,
            "spacing": "uniform-inclusive",
        },
    })
}

/// Evaluates the configured quantity on every grid point.
pub fn run(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let grid = config.grid();
    let rows = rows_for(config, &grid)?;
    let rows = rows.into_iter().map(|r| r.into_iter().map(round_sig12).collect()).collect();
    Ok(SweepResult {
        config: config.clone(),
        columns: config.columns(),
        rows,
        metadata: config.metadata.then(|| metadata(config)),
    })
}
