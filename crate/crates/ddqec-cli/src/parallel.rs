//! Rayon drivers for the enumeration engine and the stochastic oracle.
//!
//! Chunk results are collected in index order and folded sequentially, so
//! outputs are identical to the serial paths regardless of thread count.

use ddqec_core::code::{DecoderMap, DecouplingGroup, StabilizerCode};
use ddqec_core::mc::{estimate_from_tally, run_stream, McConfig, McError, McEstimate, McTally};
use ddqec_core::wep::{AtomCounts, Classifier, Setting, WepError, WepTable};
use rayon::prelude::*;

/// Parallel enumeration of a full table. `decoder` is required for the
/// correction setting and ignored in the detection setting.
pub fn compute_weps_parallel(
    code: &StabilizerCode,
    decoder: Option<&DecoderMap>,
    dd: &DecouplingGroup,
    setting: Setting,
) -> Result<WepTable, WepError> {
    let classifier = match setting {
        Setting::Qec => Classifier::new(code, decoder, dd)?,
        Setting::Qed => Classifier::new(code, None, dd)?,
    };
    let total = classifier.total();
    let chunks = (rayon::current_num_threads() as u64 * 8).clamp(1, total);
    let step = total.div_ceil(chunks);
    let pieces: Vec<AtomCounts> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let lo = i * step;
            let hi = ((i + 1) * step).min(total);
            let mut acc = AtomCounts::new(code.n());
            if lo < hi {
                classifier.accumulate(lo..hi, &mut acc);
            }
            acc
        })
        .collect();
    let mut acc = AtomCounts::new(code.n());
    for piece in &pieces {
        acc.merge(piece);
    }
    Ok(WepTable::from_atoms(code.n(), code.k(), setting, &acc))
}

/// Parallel Monte-Carlo estimation over the configured streams.
pub fn estimate_parallel(
    config: &McConfig,
    code: &StabilizerCode,
    decoder: Option<&DecoderMap>,
    dd: Option<&DecouplingGroup>,
) -> Result<McEstimate, McError> {
    let tallies: Vec<Result<McTally, McError>> = (0..config.streams)
        .into_par_iter()
        .map(|stream| run_stream(config, code, decoder, dd, stream))
        .collect();
    let mut total = McTally::default();
    for tally in tallies {
        total.merge(&tally?);
    }
    Ok(estimate_from_tally(config.strategy, &total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddqec_core::code::steane_code;
    use ddqec_core::fidelity::{NoiseParams, Strategy};
    use ddqec_core::mc::estimate;
    use ddqec_core::pauli::parse_pauli;
    use ddqec_core::wep::compute_weps;

    #[test]
    fn parallel_table_matches_serial() {
        let code = steane_code();
        let decoder = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![
            parse_pauli("XXXXXXX").unwrap(),
            parse_pauli("ZZZZZZZ").unwrap(),
        ])
        .unwrap();
        let serial = compute_weps(&code, &decoder, &dd).unwrap();
        let parallel =
            compute_weps_parallel(&code, Some(&decoder), &dd, Setting::Qec).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn parallel_mc_matches_serial() {
        let code = steane_code();
        let decoder = DecoderMap::min_weight(&code).unwrap();
        let dd = DecouplingGroup::new(vec![
            parse_pauli("XXXXXXX").unwrap(),
            parse_pauli("ZZZZZZZ").unwrap(),
        ])
        .unwrap();
        let config = McConfig {
            shots: 50_000,
            seed: 17,
            streams: 7,
            strategy: Strategy::Hybrid,
            params: NoiseParams::new(0.05, 0.3, 0.1, 0.0).unwrap(),
        };
        let serial = estimate(&config, &code, Some(&decoder), Some(&dd)).unwrap();
        let parallel = estimate_parallel(&config, &code, Some(&decoder), Some(&dd)).unwrap();
        assert_eq!(serial, parallel);
    }
}
