//! Monte Carlo simulation of the draw process.
//!
//! Trial `t` under seed `s` draws from a ChaCha8 stream keyed by `s` with
//! stream id `t`; draw `d` of that trial consumes the stream's next words.
//! A trial's outcome therefore depends only on `(s, t)`, and the aggregate
//! (integer sums, min, max) is independent of how trials are scheduled.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::matrix::EchelonBasis;

/// Trials per scheduling unit.
const BATCH: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Standard error of the mean; 0 for a single trial.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub min_draws: u64,
    pub max_draws: u64,
}

impl McEstimate {
    /// `(mean - exact) / std_error`, or `None` when the error is zero.
    pub fn z_score(&self, exact: f64) -> Option<f64> {
        (self.std_error > 0.0).then(|| (self.mean - exact) / self.std_error)
    }
}

/// Per-phase breakdown of one trial: `phase_draws[i]` is the number of draws
/// spent while the drawn columns had rank `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialTrace {
    pub draws: u64,
    pub phase_draws: Vec<u64>,
}

/// Precomputed columns of a generator, ready for repeated trials.
#[derive(Clone, Debug)]
pub struct Simulator {
    field: FieldSpec,
    k: usize,
    columns: Vec<Vec<FieldElement>>,
}

impl Simulator {
    pub fn new(code: &LinearCode) -> Result<Self> {
        if code.k() == 0 {
            return Err(Error::InvalidParameter(
                "cannot simulate the zero code".into(),
            ));
        }
        Ok(Simulator {
            field: code.field().clone(),
            k: code.k(),
            columns: code.generator().columns(),
        })
    }

    /// Random generator for trial `trial` under `seed`.
    pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        rng
    }

    /// Draws uniform column indices until the drawn columns have rank `k`.
    pub fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut basis = EchelonBasis::new(&self.field, self.k);
        self.run(rng, &mut basis, |_| {})
    }

    /// Same as [`Simulator::trial`], recording draws per rank phase.
    pub fn trial_traced<R: Rng + ?Sized>(&self, rng: &mut R) -> TrialTrace {
        let mut basis = EchelonBasis::new(&self.field, self.k);
        let mut phase_draws = vec![0u64; self.k];
        let draws = self.run(rng, &mut basis, |rank| phase_draws[rank] += 1);
        for (i, d) in phase_draws.iter().enumerate() {
            log::trace!("phase {}: {} draws", i + 1, d);
        }
        TrialTrace { draws, phase_draws }
    }

    fn run<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        basis: &mut EchelonBasis,
        mut on_draw: impl FnMut(usize),
    ) -> u64 {
        let n = self.columns.len();
        let mut draws = 0;
        while !basis.is_full() {
            on_draw(basis.rank());
            let j = rng.random_range(0..n);
            basis.insert(&self.columns[j]);
            draws += 1;
        }
        draws
    }
}

/// One trial of the draw process for `code` using `rng`.
pub fn simulate_trial<R: Rng + ?Sized>(code: &LinearCode, rng: &mut R) -> Result<u64> {
    Ok(Simulator::new(code)?.trial(rng))
}

#[derive(Clone, Copy)]
struct Tally {
    sum: u128,
    sum_sq: u128,
    min: u64,
    max: u64,
}

impl Tally {
    const EMPTY: Tally = Tally {
        sum: 0,
        sum_sq: 0,
        min: u64::MAX,
        max: 0,
    };

    fn add(&mut self, x: u64) {
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            min: self.min.min(o.min),
            max: self.max.max(o.max),
        }
    }
}

/// Estimates the expected draw count from `trials` independent trials on
/// `jobs` worker threads (0 = rayon default). The result is identical for
/// every value of `jobs`.
pub fn expectation_monte_carlo(
    code: &LinearCode,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let sim = Simulator::new(code)?;
    let batches = trials.div_ceil(BATCH);
    let run_batch = |b: u64| {
        let mut tally = Tally::EMPTY;
        let mut basis = EchelonBasis::new(&sim.field, sim.k);
        for t in b * BATCH..((b + 1) * BATCH).min(trials) {
            let mut rng = Simulator::trial_rng(seed, t);
            basis.clear();
            tally.add(sim.run(&mut rng, &mut basis, |_| {}));
        }
        tally
    };
    let total = if jobs == 1 {
        (0..batches).map(run_batch).fold(Tally::EMPTY, Tally::merge)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..batches)
                .into_par_iter()
                .map(run_batch)
                .reduce(|| Tally::EMPTY, Tally::merge)
        })
    };

    let n = trials as f64;
    let mean = total.sum as f64 / n;
    let std_error = if trials == 1 {
        0.0
    } else {
        // N * sum(x^2) - (sum x)^2 is exact in integers
        let num = trials as u128 * total.sum_sq - total.sum * total.sum;
        let variance = num as f64 / (n * (n - 1.0));
        (variance / n).sqrt()
    };
    Ok(McEstimate {
        mean,
        std_error,
        trials,
        seed,
        min_draws: total.min,
        max_draws: total.max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{simplex_code, LinearCode};
    use crate::matrix::Matrix;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    #[test]
    fn rank_one_code_needs_one_draw() {
        let f = gf(3);
        let c = LinearCode::from_rows(&f, &[[1, 2, 1, 1, 2]]).unwrap();
        let est = expectation_monte_carlo(&c, 500, 1, 1).unwrap();
        assert_eq!((est.min_draws, est.max_draws), (1, 1));
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn identity_code_needs_at_least_k() {
        let f = gf(2);
        let c = LinearCode::new(Matrix::identity(&f, 5)).unwrap();
        let sim = Simulator::new(&c).unwrap();
        for t in 0..200 {
            let d = sim.trial(&mut Simulator::trial_rng(9, t));
            assert!(d >= 5);
        }
    }

    #[test]
    fn single_trial_has_zero_error() {
        let c = simplex_code(&gf(2), 3).unwrap();
        let est = expectation_monte_carlo(&c, 1, 77, 1).unwrap();
        let single = Simulator::new(&c)
            .unwrap()
            .trial(&mut Simulator::trial_rng(77, 0));
        assert_eq!(est.mean, single as f64);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.min_draws, single);
        assert!(expectation_monte_carlo(&c, 0, 1, 1).is_err());
    }

    #[test]
    fn trace_phases_sum_to_draws() {
        let c = simplex_code(&gf(3), 3).unwrap();
        let sim = Simulator::new(&c).unwrap();
        for t in 0..50 {
            let mut a = Simulator::trial_rng(5, t);
            let mut b = Simulator::trial_rng(5, t);
            let tr = sim.trial_traced(&mut a);
            assert_eq!(tr.draws, sim.trial(&mut b));
            assert_eq!(tr.phase_draws.iter().sum::<u64>(), tr.draws);
            // no zero columns, so the first phase takes exactly one draw
            assert_eq!(tr.phase_draws[0], 1);
        }
    }

    #[test]
    fn schedule_independent() {
        let c = simplex_code(&gf(2), 3).unwrap();
        let a = expectation_monte_carlo(&c, 20_000, 42, 1).unwrap();
        let b = expectation_monte_carlo(&c, 20_000, 42, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let z = a.z_score(47.0 / 12.0).unwrap();
        assert!(z.abs() < 4.0, "z = {z}");
    }
}
