//! Monte Carlo competitive-ratio estimates.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{greedy, half_half, water_level, AlgorithmId};
use crate::error::{Error, Result};
use crate::instance::{apply_permutation, parse_instance, Instance, OfflinePermutation};
use crate::numeric::{int, to_f64};
use crate::oracle::max_matching;
use crate::rng::RandomSource;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489004;
pub const MIN_TRIALS: u64 = 100;

/// Where each trial's instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceDistribution {
    Fixed(Instance),
    /// A uniformly random relabeling of the offline side per trial.
    Permuted(Instance),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    kind: String,
    instance: serde_json::Value,
}

impl InstanceDistribution {
    pub fn base(&self) -> &Instance {
        match self {
            InstanceDistribution::Fixed(i) | InstanceDistribution::Permuted(i) => i,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InstanceDistribution::Fixed(_) => "fixed",
            InstanceDistribution::Permuted(_) => "permuted",
        }
    }

    /// Parses `{"kind": "fixed" | "permuted", "instance": <object or path>}`. Relative
    /// paths resolve against `base_dir`.
    pub fn from_spec_json(bytes: &[u8], base_dir: Option<&Path>) -> Result<Self> {
        let spec: SpecFile = serde_json::from_slice(bytes)
            .map_err(|e| Error::Malformed(format!("distribution spec: {e}")))?;
        let inst = match &spec.instance {
            serde_json::Value::String(p) => {
                let path = match base_dir {
                    Some(d) if Path::new(p).is_relative() => d.join(p),
                    _ => Path::new(p).to_path_buf(),
                };
                parse_instance(&std::fs::read(&path)?)?
            }
            v @ serde_json::Value::Object(_) => parse_instance(v.to_string().as_bytes())?,
            _ => {
                return Err(Error::Malformed(
                    "distribution spec: instance must be an object or a path".into(),
                ))
            }
        };
        match spec.kind.as_str() {
            "fixed" => Ok(InstanceDistribution::Fixed(inst)),
            "permuted" => Ok(InstanceDistribution::Permuted(inst)),
            other => Err(Error::Malformed(format!("distribution kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub mean: f64,
    /// `Z_99 * sample_sd / sqrt(trials)`.
    pub half_width: f64,
    pub sample_sd: f64,
    pub trials: u64,
    pub seed: u64,
    pub opt: usize,
}

fn ratio_of(size: f64, opt: usize) -> f64 {
    if opt == 0 {
        1.0
    } else {
        size / opt as f64
    }
}

/// One trial: permutation first (when drawn), then coins, all from the trial's stream.
fn trial_value(
    algo: AlgorithmId,
    dist: &InstanceDistribution,
    src: RandomSource,
    t: u64,
    opt: usize,
) -> f64 {
    let mut rng = src.stream(t);
    let permuted;
    let inst = match dist {
        InstanceDistribution::Fixed(i) => i,
        InstanceDistribution::Permuted(i) => {
            let perm = OfflinePermutation::random(i.offline_count(), &mut rng);
            permuted = apply_permutation(i, &perm).expect("permutation sized to the instance");
            &permuted
        }
    };
    let size = match algo {
        AlgorithmId::HalfHalf => half_half(inst, &mut rng).size(),
        AlgorithmId::Greedy => greedy(inst).size(),
        AlgorithmId::WaterLevel => unreachable!("handled without sampling"),
    };
    ratio_of(size as f64, opt)
}

/// Estimates `E[ALG / OPT]` with the global rayon pool.
pub fn estimate_ratio(
    algo: AlgorithmId,
    dist: &InstanceDistribution,
    trials: u64,
    seed: u64,
) -> Result<RatioEstimate> {
    estimate_ratio_with_threads(algo, dist, trials, seed, None)
}

/// Like [`estimate_ratio`] on a dedicated pool of `threads` workers. Per-trial values are
/// collected in trial order and summed sequentially, so the result does not depend on
/// the thread count.
pub fn estimate_ratio_with_threads(
    algo: AlgorithmId,
    dist: &InstanceDistribution,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<RatioEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_TRIALS} trials are required, got {trials}"
        )));
    }
    // OPT is invariant under relabeling, so one computation serves every trial
    let (opt, _) = max_matching(dist.base());
    let src = RandomSource::new(seed);

    let values: Vec<f64> = if algo == AlgorithmId::WaterLevel {
        // deterministic and label-oblivious: every trial yields the same value
        let v = water_level(dist.base()).value();
        let r = if opt == 0 {
            1.0
        } else {
            to_f64(&(v / int(opt as i64)))
        };
        vec![r; trials as usize]
    } else {
        let run = || -> Vec<f64> {
            (0..trials)
                .into_par_iter()
                .map(|t| trial_value(algo, dist, src, t, opt))
                .collect()
        };
        match threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
                .install(run),
            None => run(),
        }
    };

    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let sample_sd = var.sqrt();
    Ok(RatioEstimate {
        mean,
        half_width: Z_99 * sample_sd / n.sqrt(),
        sample_sd,
        trials,
        seed,
        opt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex() -> Instance {
        parse_instance(br#"{"offline":2,"arrivals":[[0,1],[0]]}"#).unwrap()
    }

    #[test]
    fn water_level_is_exact() {
        let d = InstanceDistribution::Fixed(two_vertex());
        let e = estimate_ratio(AlgorithmId::WaterLevel, &d, 100, 1).unwrap();
        assert_eq!(e.mean, 0.75);
        assert_eq!(e.half_width, 0.0);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let d = InstanceDistribution::Permuted(two_vertex());
        let a = estimate_ratio_with_threads(AlgorithmId::HalfHalf, &d, 2000, 9, Some(1)).unwrap();
        let b = estimate_ratio_with_threads(AlgorithmId::HalfHalf, &d, 2000, 9, Some(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    }

    #[test]
    fn too_few_trials() {
        let d = InstanceDistribution::Fixed(two_vertex());
        assert!(estimate_ratio(AlgorithmId::Greedy, &d, 99, 1).is_err());
    }

    #[test]
    fn spec_parsing() {
        let d = InstanceDistribution::from_spec_json(
            br#"{"kind":"permuted","instance":{"offline":2,"arrivals":[[0,1]]}}"#,
            None,
        )
        .unwrap();
        assert_eq!(d.kind(), "permuted");
        assert!(
            InstanceDistribution::from_spec_json(br#"{"kind":"x","instance":{}}"#, None).is_err()
        );
    }
}
