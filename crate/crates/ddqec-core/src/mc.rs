//! Stochastic oracle: simulates single encode-wait-decode cycles under the
//! exact error model and estimates fidelity and acceptance probability.
//!
//! Error sampling draws each qubit i.i.d. (identity with probability `1-p`,
//! otherwise a uniform Pauli letter) and realizes the DD rescaling by
//! rejection: a suppressed draw is kept with probability `p_dd`, otherwise
//! resampled. Decoder failure is realized as a uniformly random logical
//! class, which is exact because a random syndrome-consistent recovery
//! induces exactly that distribution.
//!
//! Streams: worker `i` of a run draws from `ChaCha8` seeded with the run
//! seed and stream index `i`, so estimates are bit-identical for a fixed
//! (seed, stream count) regardless of execution order.

use core::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::{DecoderMap, DecouplingGroup, StabilizerCode};
use crate::fidelity::{NoiseParams, Strategy};
use crate::pauli::PauliOperator;

/// Hard cap on rejection-loop iterations per sample; hitting it indicates a
/// pathological parameter corner rather than ordinary unluckiness.
pub const REJECTION_CAP: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McError {
    /// The rejection sampler exceeded its iteration cap.
    RejectionCap,
    /// The strategy needs a decoder (or decoupling group) that was not given.
    MissingInput(&'static str),
    SizeMismatch { left: usize, right: usize },
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::RejectionCap => {
                write!(f, "rejection sampler exceeded {REJECTION_CAP} iterations")
            }
            McError::MissingInput(what) => write!(f, "strategy requires {what}"),
            McError::SizeMismatch { left, right } => {
                write!(f, "qubit count mismatch: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for McError {}

/// One estimation run's configuration.
#[derive(Clone, Debug)]
pub struct McConfig {
    pub shots: u64,
    pub seed: u64,
    /// Independent RNG streams; tallies are summed over streams.
    pub streams: u32,
    pub strategy: Strategy,
    pub params: NoiseParams<f64>,
}

/// Aggregated estimate with binomial standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    /// Estimated fidelity (conditional on acceptance for postselected
    /// strategies). NaN when no shot was accepted.
    pub f_hat: f64,
    pub f_stderr: f64,
    /// Acceptance estimate; 1 exactly for non-postselected strategies.
    pub pa_hat: f64,
    pub pa_stderr: f64,
    pub shots: u64,
    pub shots_accepted: u64,
}

/// Draws one error from the DD-rescaled channel. `suppression` carries the
/// group only when the strategy applies decoupling.
pub fn sample_error<R: Rng>(
    rng: &mut R,
    n: usize,
    p: f64,
    suppression: Option<(&DecouplingGroup, f64)>,
) -> Result<PauliOperator, McError> {
    debug_assert!((0.0..1.0).contains(&p));
    for _ in 0..REJECTION_CAP {
        let mut x = 0u64;
        let mut z = 0u64;
        for q in 0..n {
            if rng.random::<f64>() < p {
                // Uniform among X, Y, Z: digits 1, 2, 3.
                let d = rng.random_range(1u8..4);
                x |= ((d as u64) & 1) << q;
                z |= ((d as u64) >> 1) << q;
            }
        }
        let e = PauliOperator::from_masks(n, x, z).expect("masks fit the register");
        match suppression {
            Some((dd, p_dd)) => {
                let suppressed = dd.suppresses(&e).map_err(|pe| match pe {
                    crate::pauli::PauliError::SizeMismatch { left, right } => {
                        McError::SizeMismatch { left, right }
                    }
                    _ => McError::MissingInput("decoupling group"),
                })?;
                if !suppressed || rng.random::<f64>() < p_dd {
                    return Ok(e);
                }
            }
            None => return Ok(e),
        }
    }
    Err(McError::RejectionCap)
}

/// Outcome of one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleOutcome {
    pub accepted: bool,
    pub logical_fault: bool,
}

/// Simulates one cycle of the given strategy.
pub fn run_cycle<R: Rng>(
    rng: &mut R,
    code: &StabilizerCode,
    decoder: Option<&DecoderMap>,
    dd: Option<&DecouplingGroup>,
    strategy: Strategy,
    params: &NoiseParams<f64>,
) -> Result<CycleOutcome, McError> {
    let n = code.n();
    let k = code.k();
    let uses_dd = !matches!(strategy, Strategy::QecOnly | Strategy::QedOnly);
    let suppression = if uses_dd {
        let group = dd.ok_or(McError::MissingInput("a decoupling group"))?;
        if group.qubits() != n {
            return Err(McError::SizeMismatch { left: n, right: group.qubits() });
        }
        Some((group, params.p_dd))
    } else {
        None
    };
    let e = sample_error(rng, n, params.p, suppression)?;
    let syndrome = code.syndrome(&e).expect("sampled on the code register");
    let label = code.logical_label(&e).expect("sampled on the code register");

    let fault_uniform = |rng: &mut R| -> bool {
        // Uniform over the 4^k logical classes; fault unless trivial.
        rng.random_range(0..(1u64 << (2 * k))) != 0
    };

    match strategy {
        Strategy::DdPhys => {
            // No correction step at all: any non-stabilizer action is a fault.
            Ok(CycleOutcome {
                accepted: true,
                logical_fault: !(syndrome.is_trivial() && label == 0),
            })
        }
        Strategy::QecOnly | Strategy::Hybrid | Strategy::LddOnly => {
            let p_qec = if strategy == Strategy::LddOnly { 1.0 } else { params.p_qec };
            let fault = if syndrome.is_trivial() {
                label != 0
            } else if rng.random::<f64>() < p_qec {
                fault_uniform(rng)
            } else {
                let dec = decoder.ok_or(McError::MissingInput("a decoder table"))?;
                let recovery_label = code
                    .logical_label(dec.recovery(&syndrome))
                    .expect("decoder entries live on the code register");
                label != recovery_label
            };
            Ok(CycleOutcome { accepted: true, logical_fault: fault })
        }
        Strategy::QedOnly | Strategy::QedHybrid => {
            let true_trivial = syndrome.is_trivial();
            let reported_trivial = if rng.random::<f64>() < params.p_qed {
                // Readout failure: uniformly random syndrome.
                rng.random_range(0..(1u64 << (n - k))) == 0
            } else {
                true_trivial
            };
            if !reported_trivial {
                return Ok(CycleOutcome { accepted: false, logical_fault: false });
            }
            let fault = if true_trivial { label != 0 } else { fault_uniform(rng) };
            Ok(CycleOutcome { accepted: true, logical_fault: fault })
        }
        Strategy::QedLddOnly => {
            // Always accepted; detected errors are randomly projected back.
            let fault = if syndrome.is_trivial() { label != 0 } else { fault_uniform(rng) };
            Ok(CycleOutcome { accepted: true, logical_fault: fault })
        }
    }
}

/// Tallies from one stream.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct McTally {
    pub shots: u64,
    pub accepted: u64,
    pub accepted_faults: u64,
}

impl McTally {
    pub fn merge(&mut self, other: &McTally) {
        self.shots += other.shots;
        self.accepted += other.accepted;
        self.accepted_faults += other.accepted_faults;
    }
}

/// Number of shots assigned to `stream` out of `streams` total.
pub fn stream_shots(total: u64, streams: u32, stream: u32) -> u64 {
    let base = total / streams as u64;
    base + ((stream as u64) < total % streams as u64) as u64
}

/// Runs the shots of one stream; deterministic in (seed, stream).
pub fn run_stream(
    config: &McConfig,
    code: &StabilizerCode,
    decoder: Option<&DecoderMap>,
    dd: Option<&DecouplingGroup>,
    stream: u32,
) -> Result<McTally, McError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream as u64);
    let shots = stream_shots(config.shots, config.streams, stream);
    let mut tally = McTally::default();
    for _ in 0..shots {
        let outcome = run_cycle(&mut rng, code, decoder, dd, config.strategy, &config.params)?;
        tally.shots += 1;
        tally.accepted += outcome.accepted as u64;
        tally.accepted_faults += (outcome.accepted && outcome.logical_fault) as u64;
    }
    Ok(tally)
}

/// Converts summed tallies into the final estimate.
pub fn estimate_from_tally(strategy: Strategy, tally: &McTally) -> McEstimate {
    let shots = tally.shots;
    let pa_hat = if strategy.is_postselected() {
        tally.accepted as f64 / shots as f64
    } else {
        1.0
    };
    let pa_stderr = if strategy.is_postselected() {
        libm::sqrt(pa_hat * (1.0 - pa_hat) / shots as f64)
    } else {
        0.0
    };
    let effective = if strategy.is_postselected() { tally.accepted } else { shots };
    let (f_hat, f_stderr) = if effective == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let f = 1.0 - tally.accepted_faults as f64 / effective as f64;
        (f, libm::sqrt(f * (1.0 - f) / effective as f64))
    };
    McEstimate {
        f_hat,
        f_stderr,
        pa_hat,
        pa_stderr,
        shots,
        shots_accepted: tally.accepted,
    }
}

/// Full estimation run, looping streams serially. A parallel driver can run
/// [`run_stream`] per worker and merge; the result is identical.
pub fn estimate(
    config: &McConfig,
    code: &StabilizerCode,
    decoder: Option<&DecoderMap>,
    dd: Option<&DecouplingGroup>,
) -> Result<McEstimate, McError> {
    debug_assert!(config.shots >= 1 && config.streams >= 1);
    let mut total = McTally::default();
    for stream in 0..config.streams {
        let tally = run_stream(config, code, decoder, dd, stream)?;
        total.merge(&tally);
    }
    Ok(estimate_from_tally(config.strategy, &total))
}

/// Convenience: the (trivial code, full group) pair the DD baseline runs on.
pub fn dd_phys_inputs(k: usize) -> (StabilizerCode, DecouplingGroup) {
    (StabilizerCode::trivial(k), DecouplingGroup::full_pauli(k))
}
