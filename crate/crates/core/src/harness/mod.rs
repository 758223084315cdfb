//! Error profiling of [`phi2`](crate::phi2) against the oracle.
//!
//! Bucket `n` samples `x` uniformly around `n/10 - 10`, `y` uniformly on
//! `[-10, 10]` and `rho = 2 Phi(r) - 1` with `r` uniform on `[-10, 10]`, which
//! puts most of the correlation mass near `+-1`. Each bucket reports the 99%
//! nearest-rank quantile and the maximum of the absolute error.

mod csv;
mod sampling;
mod selftest;

pub use self::csv::{
    parse_profile_csv, read_profile_csv, write_profile_csv, write_profile_to, CSV_HEADER,
};
pub use self::sampling::{bucket_center, sample_point, RhoFormula, SamplePoint, R_RANGE};
pub use self::selftest::{selftest, SelfTestCheck};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::oracle;
use crate::reduction::phi2;

pub const DEFAULT_BUCKETS: usize = 201;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const FULL_SCALE_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const QUANTILE: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub buckets: usize,
    pub samples_per_bucket: usize,
    pub seed: u64,
    pub y_range: (f64, f64),
    pub bucket_halfwidth: f64,
    pub rho_formula: RhoFormula,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            buckets: DEFAULT_BUCKETS,
            samples_per_bucket: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            y_range: (-10.0, 10.0),
            bucket_halfwidth: 0.05,
            rho_formula: RhoFormula::Corrected,
            threads: None,
        }
    }
}

impl ProfileConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.buckets == 0 {
            return bad("buckets must be at least 1");
        }
        if self.samples_per_bucket == 0 {
            return bad("samples_per_bucket must be at least 1");
        }
        if !(self.bucket_halfwidth > 0.0) {
            return bad("bucket_halfwidth must be positive");
        }
        if !(self.y_range.0 < self.y_range.1) {
            return bad("y_range must be a non-empty interval");
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucketStats {
    pub n: usize,
    pub x_center: f64,
    pub q99_abs_err: f64,
    pub max_abs_err: f64,
    /// First sample (lowest `m`) attaining `max_abs_err`.
    pub max_err_input: SamplePoint,
    /// Samples evaluated; draws with `rho > 1` under [`RhoFormula::Paper`] are not.
    pub evaluated: usize,
}

/// Absolute error of `phi2` against the oracle at one point, `None` if the
/// point lies outside the correlation domain.
pub fn sample_error(p: SamplePoint) -> Result<Option<f64>> {
    if p.rho.abs() > 1.0 {
        return Ok(None);
    }
    let reference = oracle(p.x, p.y, p.rho)?;
    let value = phi2(p.x, p.y, p.rho)?;
    Ok(Some((value - reference).abs()))
}

/// Index `ceil(q M) - 1` of the sorted sample.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn bucket_stats(n: usize, cfg: &ProfileConfig) -> Result<BucketStats> {
    let errors: Vec<(SamplePoint, Option<f64>)> = (0..cfg.samples_per_bucket)
        .into_par_iter()
        .map(|m| {
            let p = sample_point(n, m, cfg);
            sample_error(p)
                .map(|e| (p, e))
                .map_err(|source| Error::Profile {
                    bucket: n,
                    sample: m,
                    source: Box::new(source),
                })
        })
        .collect::<Result<_>>()?;

    let mut max_abs_err = -1.0;
    let mut max_err_input = None;
    let mut sorted = Vec::with_capacity(errors.len());
    for (p, e) in errors {
        let Some(e) = e else { continue };
        if e > max_abs_err {
            max_abs_err = e;
            max_err_input = Some(p);
        }
        sorted.push(e);
    }
    let Some(max_err_input) = max_err_input else {
        return Err(Error::InvalidArgument(format!(
            "bucket {n} has no sample inside the correlation domain"
        )));
    };
    sorted.sort_by(f64::total_cmp);
    Ok(BucketStats {
        n,
        x_center: bucket_center(n),
        q99_abs_err: nearest_rank(&sorted, QUANTILE),
        max_abs_err,
        max_err_input,
        evaluated: sorted.len(),
    })
}

/// Runs the study: one [`BucketStats`] per bucket, in bucket order.
///
/// The result does not depend on the thread count.
pub fn run_profile(cfg: &ProfileConfig) -> Result<Vec<BucketStats>> {
    cfg.validate()?;
    let work = || {
        (0..cfg.buckets)
            .into_par_iter()
            .map(|n| bucket_stats(n, cfg))
            .collect::<Result<Vec<_>>>()
    };
    match cfg.threads {
        None => work(),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(work),
    }
}

/// Bucket holding the largest `max_abs_err` (lowest `n` on ties).
pub fn global_max(stats: &[BucketStats]) -> Option<&BucketStats> {
    stats
        .iter()
        .fold(None, |best: Option<&BucketStats>, s| match best {
            Some(b) if b.max_abs_err >= s.max_abs_err => Some(b),
            _ => Some(s),
        })
}
