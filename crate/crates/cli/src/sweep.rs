//! Sweeps of the shear over an exact rational grid.
//!
//! The CSV has the header `a,verdict,branch,in_outer,in_inner` and, with the
//! oracle enabled, two more columns `oracle,oracle_agrees`. `a` is written as
//! an exact rational; booleans are `true`/`false`; `oracle` is
//! `Connected`, `Disconnected`, `Unknown` or `NotApplicable` and
//! `oracle_agrees` is `true`, `false` or `unknown`. Rows come in grid order.

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use selfaffine_core::connect::{classify, inner_band, oracle_adjacency, outer_band};
use selfaffine_core::params::{normalize_sign, validate};
use selfaffine_core::rational::int;
use selfaffine_core::render::Raster;
use selfaffine_core::{parse_rational, AffinePair, Rational};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub p: i64,
    pub q: i64,
    pub m: u32,
    pub n: u32,
    pub a_min: Rational,
    pub a_max: Rational,
    pub steps: u32,
    /// Run the sequence oracle at this depth as well.
    pub oracle_depth: Option<u32>,
}

impl SweepSpec {
    /// `a_k = a_min + k (a_max - a_min)/(steps - 1)`; a single step samples `a_min`.
    pub fn grid(&self) -> Result<Vec<Rational>, CliError> {
        if self.steps == 0 {
            return Err(CliError::Invalid("steps must be at least 1".into()));
        }
        if self.a_min > self.a_max {
            return Err(CliError::Invalid(format!(
                "a_min {} exceeds a_max {}",
                self.a_min, self.a_max
            )));
        }
        if self.steps == 1 {
            return Ok(vec![self.a_min.clone()]);
        }
        let step = (&self.a_max - &self.a_min) / int(i64::from(self.steps - 1));
        Ok((0..self.steps)
            .map(|k| &self.a_min + &step * int(i64::from(k)))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub a: Rational,
    pub verdict: String,
    pub branch: String,
    pub in_outer: bool,
    pub in_inner: bool,
    pub oracle: Option<String>,
    pub oracle_agrees: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    /// Wall time per row, same order as `rows`; not written to the CSV.
    pub timings: Vec<Duration>,
}

fn in_band(a: &Rational, band: &(Rational, Option<Rational>)) -> bool {
    *a >= band.0 && band.1.as_ref().is_none_or(|hi| a <= hi)
}

fn evaluate(spec: &SweepSpec, a: &Rational) -> Result<SweepRow, CliError> {
    let pair = normalize_sign(&AffinePair::new(spec.p, spec.q, a.clone(), spec.m, spec.n)?);
    let verdict = classify(&pair);
    let a_abs = pair.a_abs();
    let (oracle, oracle_agrees) = match spec.oracle_depth {
        None => (None, None),
        Some(depth) => {
            let (label, agrees) = if validate(&pair).main_theorem_ok {
                let found = oracle_adjacency(&pair, depth)?.connected();
                let label = match found {
                    Some(true) => "Connected",
                    Some(false) => "Disconnected",
                    None => "Unknown",
                };
                let agrees = match found {
                    Some(c) => (c == verdict.is_connected()).to_string(),
                    None => "unknown".to_string(),
                };
                (label.to_string(), agrees)
            } else {
                ("NotApplicable".to_string(), "unknown".to_string())
            };
            (Some(label), Some(agrees))
        }
    };
    Ok(SweepRow {
        a: a.clone(),
        verdict: verdict.status_name().to_string(),
        branch: verdict.branch.name().to_string(),
        in_outer: in_band(&a_abs, &outer_band(spec.q, spec.n)),
        in_inner: in_band(&a_abs, &inner_band(spec.q, spec.n)),
        oracle,
        oracle_agrees,
    })
}

/// Evaluates every grid point on `pool`; the output order is the grid order.
pub fn run_sweep(spec: &SweepSpec, pool: &rayon::ThreadPool) -> Result<SweepResult, CliError> {
    let grid = spec.grid()?;
    let timed: Vec<Result<(SweepRow, Duration), CliError>> = pool.install(|| {
        grid.par_iter()
            .map(|a| {
                let start = Instant::now();
                evaluate(spec, a).map(|row| (row, start.elapsed()))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(timed.len());
    let mut timings = Vec::with_capacity(timed.len());
    for item in timed {
        let (row, t) = item?;
        rows.push(row);
        timings.push(t);
    }
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
        timings,
    })
}

impl SweepResult {
    pub fn has_oracle(&self) -> bool {
        self.spec.oracle_depth.is_some()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["a", "verdict", "branch", "in_outer", "in_inner"];
        if self.has_oracle() {
            header.extend(["oracle", "oracle_agrees"]);
        }
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![
                row.a.to_string(),
                row.verdict.clone(),
                row.branch.clone(),
                row.in_outer.to_string(),
                row.in_inner.to_string(),
            ];
            if let (Some(o), Some(g)) = (&row.oracle, &row.oracle_agrees) {
                rec.push(o.clone());
                rec.push(g.clone());
            }
            w.write_record(&rec)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    /// One column per grid point: black for Connected, white for
    /// Disconnected, mid grey otherwise.
    pub fn phase_strip(&self, height: u32) -> Raster {
        let width = self.rows.len() as u32;
        let mut raster = Raster::blank(width, height);
        for (col, row) in self.rows.iter().enumerate() {
            let shade = match row.verdict.as_str() {
                "Connected" => 0,
                "Disconnected" => 255,
                _ => 128,
            };
            for r in 0..height {
                raster.pixels[(r * width) as usize + col] = shade;
            }
        }
        raster
    }

    /// Grid values where the verdict differs from the previous row.
    pub fn transitions(&self) -> Vec<Rational> {
        self.rows
            .windows(2)
            .filter(|w| w[0].verdict != w[1].verdict)
            .map(|w| w[1].a.clone())
            .collect()
    }
}

fn parse_bool(field: &str, text: &str) -> Result<bool, CliError> {
    text.parse()
        .map_err(|_| CliError::Invalid(format!("{field}: expected true or false, got {text:?}")))
}

/// Reads a sweep CSV back with exact `a` values.
pub fn read_csv(bytes: &[u8]) -> Result<Vec<SweepRow>, CliError> {
    let mut r = csv::Reader::from_reader(bytes);
    let with_oracle = r.headers()?.len() == 7;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |k: usize| rec.get(k).unwrap_or("").to_string();
        rows.push(SweepRow {
            a: parse_rational("a", &field(0))?,
            verdict: field(1),
            branch: field(2),
            in_outer: parse_bool("in_outer", &field(3))?,
            in_inner: parse_bool("in_inner", &field(4))?,
            oracle: with_oracle.then(|| field(5)),
            oracle_agrees: with_oracle.then(|| field(6)),
        });
    }
    Ok(rows)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfaffine_core::rational::frac;

    fn spec(steps: u32, oracle: Option<u32>) -> SweepSpec {
        SweepSpec {
            p: 4,
            q: 3,
            m: 6,
            n: 2,
            a_min: int(0),
            a_max: int(10),
            steps,
            oracle_depth: oracle,
        }
    }

    fn pool(jobs: usize) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .unwrap()
    }

    #[test]
    fn bands_flip_at_their_ends() {
        let res = run_sweep(&spec(41, None), &pool(2)).unwrap();
        assert_eq!(res.rows.len(), 41);
        assert_eq!(res.transitions(), vec![int(1), frac(37, 4)]);
        let at = |a: Rational| res.rows.iter().find(|r| r.a == a).unwrap().verdict.clone();
        assert_eq!(at(int(9)), "Connected");
        assert_eq!(at(frac(3, 4)), "Disconnected");
    }

    #[test]
    fn csv_round_trips_and_ignores_jobs() {
        let one = run_sweep(&spec(9, Some(8)), &pool(1)).unwrap();
        let many = run_sweep(&spec(9, Some(8)), &pool(8)).unwrap();
        let bytes = one.to_csv().unwrap();
        assert_eq!(bytes, many.to_csv().unwrap());
        assert_eq!(read_csv(&bytes).unwrap(), one.rows);
        assert!(one
            .rows
            .iter()
            .all(|r| r.oracle_agrees.as_deref() == Some("true")));
    }

    #[test]
    fn single_step_samples_a_min() {
        let mut s = spec(1, None);
        s.a_min = frac(19, 2);
        assert_eq!(s.grid().unwrap(), vec![frac(19, 2)]);
        s.steps = 0;
        assert!(s.grid().is_err());
    }
}
