//! Exhaustive partition of the sequence space into the typical set A and the
//! atypical set B, with per-sequence probability-zone labels.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::source::{SourceModel, SymbolBlock};

/// Default limit on `alphabet^n` for full enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// Log-domain slack for band-edge comparisons: sequences whose log2
/// probability sits within this distance of a band edge count as typical.
pub const BAND_EDGE_TOLERANCE: f64 = 1e-12;

/// Probability zone of a single sequence relative to the typicality band.
///
/// `Vlpz` holds sequences with `p < 2^{-n(H+eps)}`, `Vhpz` those with
/// `p > 2^{-n(H-eps)}`, and `Mpz` everything in between — exactly the
/// typical set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Zone {
    Vlpz,
    Mpz,
    Vhpz,
}

impl std::fmt::Display for Zone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Zone::Vlpz => write!(f, "VLPZ"),
            Zone::Mpz => write!(f, "MPZ"),
            Zone::Vhpz => write!(f, "VHPZ"),
        }
    }
}

/// The typicality band `[-n(H+eps), -n(H-eps)]` in log2-probability terms.
#[derive(Debug, Clone, Copy)]
struct Band {
    low: f64,
    high: f64,
}

impl Band {
    fn new(n: usize, entropy_bits: f64, epsilon: f64) -> Self {
        let n = n as f64;
        Self {
            low: -n * (entropy_bits + epsilon),
            high: -n * (entropy_bits - epsilon),
        }
    }

    /// Zone of a sequence given its log2 probability. The band is closed on
    /// both ends; the atypical zones are defined by strict inequalities.
    fn zone(&self, log2_prob: f64) -> Zone {
        if log2_prob < self.low - BAND_EDGE_TOLERANCE {
            Zone::Vlpz
        } else if log2_prob > self.high + BAND_EDGE_TOLERANCE {
            Zone::Vhpz
        } else {
            Zone::Mpz
        }
    }
}

/// The full partition of `alphabet^n` sequences for one `(model, n, eps)`.
///
/// Both lists are in lexicographic order; the typical list's positions are
/// the ranks used by the block codec.
#[derive(Debug, Clone)]
pub struct TypicalPartition {
    n: usize,
    epsilon: f64,
    entropy_bits: f64,
    alphabet_size: usize,
    typical: Vec<SymbolBlock>,
    atypical: Vec<SymbolBlock>,
    prob_typical: f64,
    prob_atypical: f64,
    zones: Vec<Zone>,
}

/// Summary form used for JSON export.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub n: usize,
    pub epsilon: f64,
    pub entropy: f64,
    pub typical_count: usize,
    pub atypical_count: usize,
    pub prob_typical: f64,
    pub prob_atypical: f64,
}

impl TypicalPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Snapshot of H(X) taken when the partition was built.
    pub fn entropy_bits(&self) -> f64 {
        self.entropy_bits
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn typical_list(&self) -> &[SymbolBlock] {
        &self.typical
    }

    pub fn atypical_list(&self) -> &[SymbolBlock] {
        &self.atypical
    }

    pub fn prob_typical(&self) -> f64 {
        self.prob_typical
    }

    pub fn prob_atypical(&self) -> f64 {
        self.prob_atypical
    }

    /// Zone of any length-`n` block over the same alphabet.
    pub fn zone_of(&self, block: &SymbolBlock) -> Result<Zone> {
        if block.len() != self.n {
            return Err(Error::BlockLengthMismatch {
                got: block.len(),
                expected: self.n,
            });
        }
        for &s in block.symbols() {
            if usize::from(s) >= self.alphabet_size {
                return Err(Error::SymbolOutOfRange {
                    symbol: s,
                    alphabet_size: self.alphabet_size,
                });
            }
        }
        Ok(self.zones[block.lex_rank(self.alphabet_size)])
    }

    pub fn is_typical(&self, block: &SymbolBlock) -> bool {
        matches!(self.zone_of(block), Ok(Zone::Mpz))
    }

    /// Rank of `block` in the lexicographically ordered typical list.
    pub fn typical_rank(&self, block: &SymbolBlock) -> Option<usize> {
        self.typical.binary_search(block).ok()
    }

    pub fn summary(&self) -> PartitionSummary {
        PartitionSummary {
            n: self.n,
            epsilon: self.epsilon,
            entropy: self.entropy_bits,
            typical_count: self.typical.len(),
            atypical_count: self.atypical.len(),
            prob_typical: self.prob_typical,
            prob_atypical: self.prob_atypical,
        }
    }

    /// Writes the full sequence lists as CSV, one block per row with symbols
    /// comma-separated. Guarded behind an explicit flag in the CLI because
    /// the files grow as `alphabet^n`.
    pub fn write_sequence_csvs(&self, typical_path: &Path, atypical_path: &Path) -> Result<()> {
        write_blocks_csv(typical_path, &self.typical)?;
        write_blocks_csv(atypical_path, &self.atypical)?;
        Ok(())
    }
}

fn write_blocks_csv(path: &Path, blocks: &[SymbolBlock]) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    for block in blocks {
        writeln!(file, "{}", block.to_csv_field())?;
    }
    Ok(())
}

/// Enumerates all `alphabet^n` sequences and splits them into the typical
/// set and its complement, using the default enumeration cap.
pub fn partition_sequences(
    model: &SourceModel,
    n: usize,
    epsilon: f64,
) -> Result<TypicalPartition> {
    partition_sequences_with_cap(model, n, epsilon, DEFAULT_ENUMERATION_CAP)
}

/// As [`partition_sequences`], with an explicit cap on `alphabet^n`.
pub fn partition_sequences_with_cap(
    model: &SourceModel,
    n: usize,
    epsilon: f64,
    cap: u128,
) -> Result<TypicalPartition> {
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let alphabet_size = model.alphabet_size();
    let total = (alphabet_size as u128)
        .checked_pow(n as u32)
        .ok_or(Error::EnumerationCapExceeded {
            blocks: u128::MAX,
            cap,
        })?;
    if total > cap {
        return Err(Error::EnumerationCapExceeded { blocks: total, cap });
    }
    let total = total as usize;

    let entropy_bits = model.entropy_bits();
    let band = Band::new(n, entropy_bits, epsilon);

    let mut typical = Vec::new();
    let mut atypical = Vec::new();
    let mut zones = Vec::with_capacity(total);
    let mut prob_typical = 0.0;
    let mut prob_atypical = 0.0;

    // Lexicographic enumeration; rank r corresponds to zones[r].
    let mut symbols = vec![0u16; n];
    loop {
        let block = SymbolBlock::new(symbols.clone());
        let log2_prob = model.sequence_log2_probability(&block)?;
        let prob = model.sequence_probability(&block)?;
        let zone = band.zone(log2_prob);
        zones.push(zone);
        if zone == Zone::Mpz {
            prob_typical += prob;
            typical.push(block);
        } else {
            prob_atypical += prob;
            atypical.push(block);
        }
        if !advance(&mut symbols, alphabet_size) {
            break;
        }
    }

    // Accumulation can overshoot 1 by an ulp when one side holds nearly the
    // whole space; the true masses are probabilities.
    prob_typical = prob_typical.min(1.0);
    prob_atypical = prob_atypical.min(1.0);

    Ok(TypicalPartition {
        n,
        epsilon,
        entropy_bits,
        alphabet_size,
        typical,
        atypical,
        prob_typical,
        prob_atypical,
        zones,
    })
}

/// Advances `symbols` to the next block in lexicographic order. Returns
/// false once the last block has been visited.
fn advance(symbols: &mut [u16], alphabet_size: usize) -> bool {
    for slot in symbols.iter_mut().rev() {
        let next = usize::from(*slot) + 1;
        if next < alphabet_size {
            *slot = next as u16;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Zone of one block without building the whole partition.
pub fn classify_zone(model: &SourceModel, block: &SymbolBlock, epsilon: f64) -> Result<Zone> {
    if block.is_empty() {
        return Err(Error::EmptyBlock);
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let band = Band::new(block.len(), model.entropy_bits(), epsilon);
    let log2_prob = model.sequence_log2_probability(block)?;
    Ok(band.zone(log2_prob))
}

/// Total probability of a set of distinct blocks.
pub fn set_probability(model: &SourceModel, blocks: &[SymbolBlock]) -> Result<f64> {
    let mut seen = HashSet::with_capacity(blocks.len());
    for block in blocks {
        if !seen.insert(block) {
            return Err(Error::DuplicateBlock);
        }
    }
    blocks.iter().map(|b| model.sequence_probability(b)).sum()
}

/// Typical/atypical counts and masses for a binary source, aggregated by
/// weight class instead of explicit enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryBandSummary {
    pub typical_count: u128,
    pub atypical_count: u128,
    pub prob_typical: f64,
    pub prob_atypical: f64,
}

/// Weight-class aggregation path for binary sources. All `C(n, w)` blocks
/// with `w` zeros share one probability, so band membership only has to be
/// decided once per weight. Lets trend checks reach block lengths where
/// explicit enumeration is wasteful; the enumeration path remains the source
/// of truth for clustering.
pub fn binary_band_summary(model: &SourceModel, n: usize, epsilon: f64) -> Result<BinaryBandSummary> {
    if model.alphabet_size() != 2 {
        return Err(Error::NotBinary(model.alphabet_size()));
    }
    if n == 0 {
        return Err(Error::EmptyBlock);
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let p0 = model.pmf()[0];
    let p1 = model.pmf()[1];
    let band = Band::new(n, model.entropy_bits(), epsilon);

    let mut summary = BinaryBandSummary {
        typical_count: 0,
        atypical_count: 0,
        prob_typical: 0.0,
        prob_atypical: 0.0,
    };
    // C(n, w) via the multiplicative recurrence; exact in f64 up to the
    // desk-scale lengths this path serves.
    let mut count = 1.0f64;
    for w in 0..=n {
        let log2_prob = w as f64 * p0.log2() + (n - w) as f64 * p1.log2();
        let mass = count * p0.powi(w as i32) * p1.powi((n - w) as i32);
        if band.zone(log2_prob) == Zone::Mpz {
            summary.typical_count += count as u128;
            summary.prob_typical += mass;
        } else {
            summary.atypical_count += count as u128;
            summary.prob_atypical += mass;
        }
        count = count * (n - w) as f64 / (w + 1) as f64;
    }
    summary.prob_typical = summary.prob_typical.min(1.0);
    summary.prob_atypical = summary.prob_atypical.min(1.0);
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli_fifth() -> SourceModel {
        SourceModel::new(&[0.2, 0.8]).unwrap()
    }

    #[test]
    fn uniform_binary_has_no_atypical_blocks() {
        let model = SourceModel::new(&[0.5, 0.5]).unwrap();
        let partition = partition_sequences(&model, 8, 0.1).unwrap();
        assert!(partition.atypical_list().is_empty());
        assert_eq!(partition.prob_typical(), 1.0);
        assert_eq!(partition.typical_list().len(), 256);
    }

    #[test]
    fn bernoulli_fifth_partition_matches_weight_classes() {
        // Exhaustive oracle over all 1024 blocks: -log2 p = 3.219 + 2w where
        // w counts zero symbols; typical iff w in {1, 2, 3}; |A| = 175.
        let model = bernoulli_fifth();
        let partition = partition_sequences(&model, 10, 0.2).unwrap();
        assert_eq!(partition.typical_list().len(), 175);
        assert_eq!(partition.atypical_list().len(), 849);
        for block in partition.typical_list() {
            let zeros = block.symbols().iter().filter(|&&s| s == 0).count();
            assert!((1..=3).contains(&zeros));
        }
        assert!((partition.prob_typical() - 0.771751936).abs() < 1e-9);
        assert!((partition.prob_atypical() - 0.228248064).abs() < 1e-9);
    }

    #[test]
    fn partition_probabilities_sum_to_one() {
        let model = SourceModel::new(&[0.3, 0.3, 0.4]).unwrap();
        let partition = partition_sequences(&model, 6, 0.15).unwrap();
        assert!((partition.prob_typical() + partition.prob_atypical() - 1.0).abs() < 1e-9);
        assert_eq!(
            partition.typical_list().len() + partition.atypical_list().len(),
            3usize.pow(6)
        );
    }

    #[test]
    fn typical_list_is_lexicographic() {
        let model = bernoulli_fifth();
        let partition = partition_sequences(&model, 6, 0.2).unwrap();
        let mut sorted = partition.typical_list().to_vec();
        sorted.sort();
        assert_eq!(sorted.as_slice(), partition.typical_list());
    }

    #[test]
    fn zone_trichotomy_and_mpz_matches_typical() {
        let model = bernoulli_fifth();
        let partition = partition_sequences(&model, 8, 0.2).unwrap();
        for block in partition.typical_list() {
            assert_eq!(partition.zone_of(block).unwrap(), Zone::Mpz);
        }
        for block in partition.atypical_list() {
            assert_ne!(partition.zone_of(block).unwrap(), Zone::Mpz);
        }
    }

    #[test]
    fn classify_zone_examples() {
        let uniform = SourceModel::new(&[0.5, 0.5]).unwrap();
        let block = SymbolBlock::from_u8(&[0, 1, 0, 1]);
        assert_eq!(classify_zone(&uniform, &block, 0.1).unwrap(), Zone::Mpz);

        let model = bernoulli_fifth();
        // All ones: -log2 p = 3.219 < 5.219 = n(H - eps), so VHPZ.
        let ones = SymbolBlock::from_u8(&[1; 10]);
        assert_eq!(classify_zone(&model, &ones, 0.2).unwrap(), Zone::Vhpz);
        // All zeros: -log2 p = 23.219 > 9.219 = n(H + eps), so VLPZ.
        let zeros = SymbolBlock::from_u8(&[0; 10]);
        assert_eq!(classify_zone(&model, &zeros, 0.2).unwrap(), Zone::Vlpz);
    }

    #[test]
    fn classify_zone_agrees_with_partition() {
        let model = bernoulli_fifth();
        let partition = partition_sequences(&model, 9, 0.15).unwrap();
        for rank in 0..512 {
            let block = SymbolBlock::from_lex_rank(rank, 2, 9);
            assert_eq!(
                classify_zone(&model, &block, 0.15).unwrap(),
                partition.zone_of(&block).unwrap()
            );
        }
    }

    #[test]
    fn set_probability_examples() {
        let model = bernoulli_fifth();
        assert_eq!(set_probability(&model, &[]).unwrap(), 0.0);

        let all: Vec<_> = (0..1024).map(|r| SymbolBlock::from_lex_rank(r, 2, 10)).collect();
        assert!((set_probability(&model, &all).unwrap() - 1.0).abs() < 1e-9);

        let partition = partition_sequences(&model, 10, 0.2).unwrap();
        let p = set_probability(&model, partition.typical_list()).unwrap();
        assert!((p - 0.7718).abs() < 1e-4);

        let dup = vec![all[3].clone(), all[3].clone()];
        assert!(matches!(
            set_probability(&model, &dup),
            Err(Error::DuplicateBlock)
        ));
    }

    #[test]
    fn aep_size_bound_holds() {
        for pmf in [[0.2, 0.8], [0.1, 0.9]] {
            let model = SourceModel::new(&pmf).unwrap();
            for n in 6..=12 {
                for epsilon in [0.1, 0.2] {
                    let partition = partition_sequences(&model, n, epsilon).unwrap();
                    let bound = ((n as f64) * (model.entropy_bits() + epsilon)).exp2();
                    assert!(
                        (partition.typical_list().len() as f64) <= bound,
                        "|A| exceeded 2^(n(H+eps)) for n={n} eps={epsilon}"
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let model = SourceModel::new(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            partition_sequences_with_cap(&model, 20, 0.1, 1 << 10),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn epsilon_must_be_positive() {
        let model = bernoulli_fifth();
        assert!(matches!(
            partition_sequences(&model, 4, 0.0),
            Err(Error::InvalidEpsilon(_))
        ));
        assert!(matches!(
            partition_sequences(&model, 4, -0.5),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn binary_summary_matches_enumeration() {
        let model = bernoulli_fifth();
        for n in [4, 8, 10, 12] {
            for epsilon in [0.1, 0.2, 0.35] {
                let enumerated = partition_sequences(&model, n, epsilon).unwrap();
                let summary = binary_band_summary(&model, n, epsilon).unwrap();
                assert_eq!(summary.typical_count as usize, enumerated.typical_list().len());
                assert_eq!(summary.atypical_count as usize, enumerated.atypical_list().len());
                assert!((summary.prob_typical - enumerated.prob_typical()).abs() < 1e-9);
                assert!((summary.prob_atypical - enumerated.prob_atypical()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn binary_summary_rejects_wider_alphabets() {
        let model = SourceModel::new(&[0.3, 0.3, 0.4]).unwrap();
        assert!(matches!(
            binary_band_summary(&model, 5, 0.1),
            Err(Error::NotBinary(3))
        ));
    }

    #[test]
    fn atypical_mass_eventually_drops_below_epsilon() {
        // AEP trend: for Bernoulli(0.2) and eps = 0.2 the atypical mass
        // falls below eps by n = 20 (weight-class path; oracle agreement is
        // covered by binary_summary_matches_enumeration).
        let model = bernoulli_fifth();
        let found = (1..=24).find(|&n| {
            binary_band_summary(&model, n, 0.2).unwrap().prob_atypical < 0.2
        });
        assert_eq!(found, Some(20));
    }
}
