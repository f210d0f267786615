//! Benchmark sweeps written as CSV, one row per (instance, k, algorithm,
//! metric) cell, in that nesting order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::distance::{ConvergenceParams, DistanceConfig, Metric};
use crate::filter::Filter;
use crate::generators::{gen_annulus, gen_lcorridor, AnnulusSpec, CorridorSpec, GeneratorError};
use crate::rational::format_decimal;
use crate::reduce::{reduce_global, reduce_greedy, GlobalParams, ReduceError, ReductionResult};
use crate::strings::EditCosts;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Annulus filters over a range of `n`, fixed `k`.
    Annulus,
    /// One two-robot annulus filter, sweeping `k`.
    Annulus2,
    /// One corridor filter, sweeping `k`.
    LCorridor,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Annulus => "annulus",
            Suite::Annulus2 => "annulus2",
            Suite::LCorridor => "lcorridor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}` (expected annulus, annulus2 or lcorridor)")]
pub struct ParseSuiteError(String);

impl FromStr for Suite {
    type Err = ParseSuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "annulus" => Ok(Suite::Annulus),
            "annulus2" => Ok(Suite::Annulus2),
            "lcorridor" => Ok(Suite::LCorridor),
            _ => Err(ParseSuiteError(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Greedy,
    Global,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Global => "global",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm `{0}` (expected greedy or global)")]
pub struct ParseAlgorithmError(String);

impl FromStr for Algorithm {
    type Err = ParseAlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(Algorithm::Greedy),
            "global" => Ok(Algorithm::Global),
            _ => Err(ParseAlgorithmError(s.to_string())),
        }
    }
}

/// Runs one reduction with either algorithm.
pub fn reduce(
    f: &Filter,
    k: usize,
    algorithm: Algorithm,
    config: &DistanceConfig,
    global: &GlobalParams,
) -> Result<ReductionResult, ReduceError> {
    match algorithm {
        Algorithm::Greedy => reduce_greedy(f, k, config).map(|(r, _)| r),
        Algorithm::Global => reduce_global(f, k, config, global),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentParams {
    pub suite: Suite,
    /// Annulus: region counts to sweep.
    pub n_values: Vec<usize>,
    /// Annulus: robots per instance (1 or 2).
    pub robots: usize,
    /// Annulus2: region count of the single instance.
    pub n: usize,
    /// Corridor instance.
    pub length: usize,
    pub corner_at: Option<usize>,
    /// Target sizes; the annulus suite normally uses just one.
    pub ks: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub metrics: Vec<Metric>,
    pub costs: EditCosts,
    pub convergence: ConvergenceParams,
    pub global: GlobalParams,
}

impl ExperimentParams {
    /// Defaults for a suite: annulus n = 3..=9 at k = 2; the size sweeps use
    /// k = 2..=10 on a 4-region two-robot annulus or a length-8 corridor.
    pub fn for_suite(suite: Suite) -> Self {
        let ks = match suite {
            Suite::Annulus => vec![2],
            Suite::Annulus2 | Suite::LCorridor => (2..=10).collect(),
        };
        Self {
            suite,
            n_values: (3..=9).collect(),
            robots: 1,
            n: 4,
            length: 8,
            corner_at: None,
            ks,
            algorithms: vec![Algorithm::Greedy, Algorithm::Global],
            metrics: vec![Metric::Hamming, Metric::Edit],
            costs: EditCosts::UNIT,
            convergence: ConvergenceParams::default(),
            global: GlobalParams::default(),
        }
    }

    fn instances(&self) -> Result<Vec<Instance>, GeneratorError> {
        match self.suite {
            Suite::Annulus => self
                .n_values
                .iter()
                .map(|&n| {
                    let filter = gen_annulus(AnnulusSpec {
                        n,
                        robots: self.robots,
                    })?;
                    Ok(Instance {
                        n: Some(n),
                        length: None,
                        filter,
                    })
                })
                .collect(),
            Suite::Annulus2 => Ok(vec![Instance {
                n: Some(self.n),
                length: None,
                filter: gen_annulus(AnnulusSpec {
                    n: self.n,
                    robots: 2,
                })?,
            }]),
            Suite::LCorridor => Ok(vec![Instance {
                n: None,
                length: Some(self.length),
                filter: gen_lcorridor(CorridorSpec {
                    length: self.length,
                    corner_at: self.corner_at.unwrap_or(self.length / 2),
                })?,
            }]),
        }
    }
}

struct Instance {
    n: Option<usize>,
    length: Option<usize>,
    filter: Filter,
}

/// One CSV row. Columns that do not apply to a cell are left empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub suite: String,
    pub n: Option<usize>,
    pub length: Option<usize>,
    pub k: usize,
    pub algorithm: String,
    pub metric: String,
    pub c_ins: u64,
    pub c_del: u64,
    pub c_sub: u64,
    pub epsilon: String,
    pub r: Option<usize>,
    pub seed: Option<u64>,
    pub input_states: usize,
    pub output_states: usize,
    pub distance: String,
    pub millis: u64,
    pub converged: bool,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("writing results: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing results: {0}")]
    Io(#[from] std::io::Error),
}

/// Runs every cell of the sweep, writing each row (and flushing) as soon as
/// it is done, so an interrupted run leaves a usable prefix.
pub fn run_experiment<W: Write>(
    params: &ExperimentParams,
    out: W,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = Vec::new();
    let epsilon = format_decimal(&params.convergence.epsilon, 6);
    for inst in params.instances()? {
        for &k in &params.ks {
            for &algorithm in &params.algorithms {
                for &metric in &params.metrics {
                    let config = DistanceConfig {
                        metric,
                        costs: params.costs,
                        params: params.convergence,
                    };
                    let start = Instant::now();
                    let result = reduce(&inst.filter, k, algorithm, &config, &params.global)?;
                    let millis = u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX);
                    let global = algorithm == Algorithm::Global;
                    let row = ExperimentRow {
                        suite: params.suite.to_string(),
                        n: inst.n,
                        length: inst.length,
                        k,
                        algorithm: algorithm.to_string(),
                        metric: metric.to_string(),
                        c_ins: params.costs.insert,
                        c_del: params.costs.delete,
                        c_sub: params.costs.substitute,
                        epsilon: epsilon.clone(),
                        r: global.then_some(params.global.iterations),
                        seed: global.then_some(params.global.seed),
                        input_states: inst.filter.len(),
                        output_states: result.filter.len(),
                        distance: format_decimal(&result.distance.value, 6),
                        millis,
                        converged: result.distance.converged,
                    };
                    writer.serialize(&row)?;
                    writer.flush()?;
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        // Keep the header even for an empty sweep.
        writer.write_record(HEADER)?;
        writer.flush()?;
    }
    Ok(rows)
}

pub const HEADER: [&str; 17] = [
    "suite",
    "n",
    "length",
    "k",
    "algorithm",
    "metric",
    "c_ins",
    "c_del",
    "c_sub",
    "epsilon",
    "r",
    "seed",
    "input_states",
    "output_states",
    "distance",
    "millis",
    "converged",
];
