//! Fixed-length block codec: flag bit, typical-index field, cluster-index
//! field. Typical blocks decode exactly; atypical blocks decode to a typed
//! error carrying the cluster medoid as the representative.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::bits::{pack_msb, read_value_msb, unpack_msb, write_value_msb};
use crate::clustering::ClusterModel;
use crate::error::{Error, Result};
use crate::source::{SourceModel, SymbolBlock};
use crate::typicality::{TypicalPartition, Zone};

/// Slack for recognizing bit widths that are integral up to floating-point
/// noise (e.g. `10 * 1.1` landing a hair above 11).
const WIDTH_TOLERANCE: f64 = 1e-9;

/// Field widths of the fixed-length codeword:
/// `[flag (1 bit)][typical index][cluster index]`, MSB-first in each field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodewordLayout {
    pub index_width: usize,
    pub cluster_width: usize,
}

impl CodewordLayout {
    pub const FLAG_BITS: usize = 1;

    pub fn total_bits(&self) -> usize {
        Self::FLAG_BITS + self.index_width + self.cluster_width
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "flag_bits": Self::FLAG_BITS,
            "index_width": self.index_width,
            "cluster_width": self.cluster_width,
            "total_bits": self.total_bits(),
        })
    }
}

fn ceil_with_tolerance(x: f64) -> usize {
    let rounded = x.round();
    if (x - rounded).abs() <= WIDTH_TOLERANCE {
        rounded as usize
    } else {
        x.ceil() as usize
    }
}

fn ceil_log2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Builds the layout for a partition and cluster count: index field of
/// `ceil(n(H+eps))` bits, cluster field of `ceil(log2 k)` bits.
pub fn make_layout(partition: &TypicalPartition, k: usize) -> Result<CodewordLayout> {
    if k == 0 {
        return Err(Error::ClusterCountOutOfRange { k: 0, max: usize::MAX });
    }
    let index_width =
        ceil_with_tolerance(partition.n() as f64 * (partition.entropy_bits() + partition.epsilon()));
    let layout = CodewordLayout {
        index_width,
        cluster_width: ceil_log2(k),
    };
    // The AEP size bound guarantees this fits; verify anyway.
    check_index_capacity(&layout, partition.typical_list().len())?;
    Ok(layout)
}

fn check_index_capacity(layout: &CodewordLayout, typical_count: usize) -> Result<()> {
    if layout.index_width < 64 && (1u128 << layout.index_width) < typical_count as u128 {
        return Err(Error::IndexWidthTooSmall {
            count: typical_count,
            width: layout.index_width,
        });
    }
    Ok(())
}

fn check_cluster_capacity(layout: &CodewordLayout, k: usize) -> Result<()> {
    if layout.cluster_width < 64 && (1u128 << layout.cluster_width) < k as u128 {
        return Err(Error::ClusterWidthTooSmall {
            k,
            width: layout.cluster_width,
        });
    }
    Ok(())
}

/// One fixed-length codeword. The wire form is the bits packed MSB-first
/// with the final byte zero-padded on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    bits: Vec<bool>,
}

impl Codeword {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        pack_msb(&self.bits)
    }

    /// Parses packed bytes; the byte count must be exactly
    /// `ceil(total_bits/8)` and padding bits must be zero.
    pub fn from_bytes(bytes: &[u8], total_bits: usize) -> Result<Self> {
        Ok(Self {
            bits: unpack_msb(bytes, total_bits)?,
        })
    }

    /// Lowercase hex form of the packed bytes, for logs.
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str, total_bits: usize) -> Result<Self> {
        if hex.len() % 2 != 0 {
            return Err(Error::InvalidHex(format!("odd length {}", hex.len())));
        }
        let bytes = (0..hex.len() / 2)
            .map(|i| {
                u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                    .map_err(|_| Error::InvalidHex(hex.to_string()))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bytes(&bytes, total_bits)
    }
}

/// Result of decoding one codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// A typical block, reconstructed exactly.
    Exact(SymbolBlock),
    /// An atypical block: an error of the `cluster`-th type, with the
    /// cluster medoid as the best available representative.
    TypedError {
        cluster: usize,
        representative: SymbolBlock,
    },
}

/// Monte Carlo estimate of the block error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub trials: u64,
    /// Trials where the decoded representative differed from the source
    /// block.
    pub errors: u64,
    /// Trials that decoded to a typed error at all (medoid hits included).
    pub atypical_trials: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Encoder/decoder bound to one partition, optional cluster model, and
/// layout. A cluster model is only required while the atypical set is
/// non-empty.
#[derive(Debug, Clone)]
pub struct Codec<'a> {
    partition: &'a TypicalPartition,
    clusters: Option<&'a ClusterModel>,
    layout: CodewordLayout,
}

impl<'a> Codec<'a> {
    pub fn new(
        partition: &'a TypicalPartition,
        clusters: Option<&'a ClusterModel>,
        layout: CodewordLayout,
    ) -> Result<Self> {
        check_index_capacity(&layout, partition.typical_list().len())?;
        if let Some(c) = clusters {
            if c.n() != partition.n() {
                return Err(Error::ClusterPartitionMismatch {
                    got: c.n(),
                    expected: partition.n(),
                });
            }
            check_cluster_capacity(&layout, c.k())?;
        }
        Ok(Self {
            partition,
            clusters,
            layout,
        })
    }

    pub fn layout(&self) -> &CodewordLayout {
        &self.layout
    }

    /// Encodes any block of the sequence space. Typical blocks carry their
    /// lexicographic rank; atypical blocks carry their cluster index.
    pub fn encode(&self, block: &SymbolBlock) -> Result<Codeword> {
        let zone = self.partition.zone_of(block)?;
        let mut bits = vec![false; self.layout.total_bits()];
        let index_field = CodewordLayout::FLAG_BITS..CodewordLayout::FLAG_BITS + self.layout.index_width;
        let cluster_field = index_field.end..bits.len();
        if zone == Zone::Mpz {
            let rank = self
                .partition
                .typical_rank(block)
                .expect("typical block has a rank");
            write_value_msb(&mut bits[index_field], rank as u64);
        } else {
            let clusters = self.clusters.ok_or(Error::MissingClusterModel)?;
            let j = match clusters.assignment_of(block) {
                Some(j) => j,
                None => clusters.assign(block)?,
            };
            bits[0] = true;
            write_value_msb(&mut bits[cluster_field], (j - 1) as u64);
        }
        Ok(Codeword { bits })
    }

    /// Decodes a codeword, enforcing the layout's padding invariants:
    /// flag 0 requires a zero cluster field, flag 1 a zero index field.
    pub fn decode(&self, word: &Codeword) -> Result<DecodeOutcome> {
        if word.len() != self.layout.total_bits() {
            return Err(Error::CodewordLengthMismatch {
                got: word.len(),
                expected: self.layout.total_bits(),
            });
        }
        let index_field =
            &word.bits[CodewordLayout::FLAG_BITS..CodewordLayout::FLAG_BITS + self.layout.index_width];
        let cluster_field = &word.bits[CodewordLayout::FLAG_BITS + self.layout.index_width..];
        if !word.bits[0] {
            if cluster_field.iter().any(|&b| b) {
                return Err(Error::NonZeroClusterField);
            }
            let index = read_value_msb(index_field);
            if index >= self.partition.typical_list().len() as u128 {
                return Err(Error::TypicalIndexOutOfRange {
                    index,
                    count: self.partition.typical_list().len(),
                });
            }
            Ok(DecodeOutcome::Exact(
                self.partition.typical_list()[index as usize].clone(),
            ))
        } else {
            if index_field.iter().any(|&b| b) {
                return Err(Error::NonZeroIndexField);
            }
            let clusters = self.clusters.ok_or(Error::MissingClusterModel)?;
            let value = read_value_msb(cluster_field);
            if value >= clusters.k() as u128 {
                return Err(Error::ClusterIndexOutOfRange {
                    value,
                    k: clusters.k(),
                });
            }
            let j = value as usize + 1;
            Ok(DecodeOutcome::TypedError {
                cluster: j,
                representative: clusters.medoid(j).clone(),
            })
        }
    }

    /// Exact probability that the decoded representative differs from the
    /// source block: the atypical mass minus the medoid masses.
    pub fn exact_error_probability(&self) -> Result<f64> {
        match self.clusters {
            Some(c) => {
                let medoid_mass: f64 = (1..=c.k()).map(|j| c.medoid_probability(j)).sum();
                Ok(self.partition.prob_atypical() - medoid_mass)
            }
            None if self.partition.prob_atypical() == 0.0 => Ok(0.0),
            None => Err(Error::MissingClusterModel),
        }
    }

    /// Monte Carlo estimate of the probability that decoding does not
    /// reproduce the source block. Deterministic in `(model, trials, seed)`.
    pub fn empirical_error(
        &self,
        model: &SourceModel,
        trials: u64,
        seed: u64,
    ) -> Result<ErrorEstimate> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut errors = 0u64;
        let mut atypical_trials = 0u64;
        for _ in 0..trials {
            let block = model.sample_with(self.partition.n(), &mut rng);
            let word = self.encode(&block)?;
            match self.decode(&word)? {
                DecodeOutcome::Exact(decoded) => debug_assert_eq!(decoded, block),
                DecodeOutcome::TypedError { representative, .. } => {
                    atypical_trials += 1;
                    if representative != block {
                        errors += 1;
                    }
                }
            }
        }
        let estimate = errors as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        Ok(ErrorEstimate {
            trials,
            errors,
            atypical_trials,
            estimate,
            std_error,
        })
    }
}
