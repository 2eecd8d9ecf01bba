//! Discrete memoryless source: per-symbol pmf, entropy, block probabilities,
//! and deterministic block sampling.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// Largest supported alphabet (symbols are stored as `u16`).
pub const MAX_ALPHABET: usize = 1 << 16;

/// Tolerance for the pmf normalization check.
const PMF_SUM_TOLERANCE: f64 = 1e-9;

/// An i.i.d. discrete memoryless source over the alphabet `{0, .., m-1}`.
///
/// Probabilities are carried in double precision; a log2-probability path is
/// provided for block lengths where the plain product would underflow.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceModel {
    pmf: Vec<f64>,
    log2_pmf: Vec<f64>,
    entropy_bits: f64,
}

impl SourceModel {
    /// Builds a source from a pmf. Rejects negative or non-finite entries and
    /// pmfs whose sum deviates from 1 by more than 1e-9.
    pub fn new(pmf: &[f64]) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::EmptyPmf);
        }
        if pmf.len() > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge(pmf.len()));
        }
        for (index, &value) in pmf.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidPmfEntry { index, value });
            }
        }
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(Error::PmfNotNormalized { sum });
        }
        // 0 * log 0 := 0, the usual entropy convention.
        let entropy_bits = -pmf
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>();
        let log2_pmf = pmf.iter().map(|&p| p.log2()).collect();
        Ok(Self {
            pmf: pmf.to_vec(),
            log2_pmf,
            entropy_bits,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.pmf.len()
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Source entropy H(X) in bits per symbol.
    pub fn entropy_bits(&self) -> f64 {
        self.entropy_bits
    }

    /// Checks that every symbol of `block` is within the alphabet.
    pub fn validate_block(&self, block: &SymbolBlock) -> Result<()> {
        for &symbol in block.symbols() {
            if usize::from(symbol) >= self.alphabet_size() {
                return Err(Error::SymbolOutOfRange {
                    symbol,
                    alphabet_size: self.alphabet_size(),
                });
            }
        }
        Ok(())
    }

    /// Product-law probability of an i.i.d. block.
    pub fn sequence_probability(&self, block: &SymbolBlock) -> Result<f64> {
        self.validate_block(block)?;
        Ok(block
            .symbols()
            .iter()
            .map(|&s| self.pmf[usize::from(s)])
            .product())
    }

    /// Log2 of the block probability. Preferred over the plain product when
    /// `n` is large enough for `2^{-n(H+eps)}` to underflow.
    pub fn sequence_log2_probability(&self, block: &SymbolBlock) -> Result<f64> {
        self.validate_block(block)?;
        Ok(block
            .symbols()
            .iter()
            .map(|&s| self.log2_pmf[usize::from(s)])
            .sum())
    }

    /// Draws a length-`n` block, deterministically in `(self, n, seed)`.
    ///
    /// Sampling is inverse-CDF over the pmf driven by a counter-based
    /// generator (ChaCha8), so results are reproducible across platforms.
    pub fn sample_block(&self, n: usize, seed: u64) -> Result<SymbolBlock> {
        if n == 0 {
            return Err(Error::EmptyBlock);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(self.sample_with(n, &mut rng))
    }

    /// Draws a block from an already-seeded generator. Used by Monte Carlo
    /// loops that need many blocks from one stream.
    pub(crate) fn sample_with(&self, n: usize, rng: &mut ChaCha8Rng) -> SymbolBlock {
        let symbols = (0..n).map(|_| self.sample_symbol(rng)).collect();
        SymbolBlock::new(symbols)
    }

    fn sample_symbol(&self, rng: &mut ChaCha8Rng) -> u16 {
        // 53-bit uniform in [0, 1); pinned here rather than borrowed from a
        // distributions crate so the stream survives dependency upgrades.
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        let mut cumulative = 0.0;
        let last = self.pmf.len() - 1;
        for (symbol, &p) in self.pmf.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return symbol as u16;
            }
        }
        last as u16
    }
}

/// Parses a comma-separated pmf string such as `0.2,0.8` into a validated
/// source model.
pub fn parse_pmf(text: &str) -> Result<SourceModel> {
    let entries = text
        .split(',')
        .enumerate()
        .map(|(index, part)| {
            part.trim().parse::<f64>().map_err(|_| Error::InvalidPmfEntry {
                index,
                value: f64::NAN,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    SourceModel::new(&entries)
}

/// A fixed-length sequence of symbol indices.
///
/// Ordering is lexicographic over symbol indices, which is the canonical
/// order used for typical-set ranks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolBlock {
    symbols: Vec<u16>,
}

impl SymbolBlock {
    pub fn new(symbols: Vec<u16>) -> Self {
        Self { symbols }
    }

    /// Convenience constructor from small literals.
    pub fn from_u8(symbols: &[u8]) -> Self {
        Self {
            symbols: symbols.iter().map(|&s| u16::from(s)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    /// The block at `rank` in lexicographic order over `alphabet^n` blocks.
    pub fn from_lex_rank(mut rank: usize, alphabet_size: usize, n: usize) -> Self {
        let mut symbols = vec![0u16; n];
        for slot in symbols.iter_mut().rev() {
            *slot = (rank % alphabet_size) as u16;
            rank /= alphabet_size;
        }
        Self { symbols }
    }

    /// Lexicographic rank of the block among all `alphabet^n` blocks.
    pub fn lex_rank(&self, alphabet_size: usize) -> usize {
        self.symbols
            .iter()
            .fold(0usize, |acc, &s| acc * alphabet_size + usize::from(s))
    }

    /// Symbols joined with commas, the form used in sequence CSV exports.
    pub fn to_csv_field(&self) -> String {
        self.symbols
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl std::fmt::Display for SymbolBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.symbols.iter().all(|&s| s < 10) {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.to_csv_field())
        }
    }
}
