//! k-medoid clustering of the atypical set under Hamming distance.
//!
//! Cluster representatives are medoids — actual members of the set — so the
//! non-largest representatives can be removed from B to form B'. Seeding is
//! farthest-point from the lexicographically smallest block; the seed value
//! only perturbs tie-breaking among equally distant candidates.

use std::collections::HashMap;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::source::{SourceModel, SymbolBlock};
use crate::typicality::{TypicalPartition, Zone};

/// Number of positions where two equal-length blocks differ.
pub fn hamming_distance(a: &SymbolBlock, b: &SymbolBlock) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::BlockLengthMismatch {
            got: b.len(),
            expected: a.len(),
        });
    }
    Ok(a.symbols()
        .iter()
        .zip(b.symbols())
        .filter(|(x, y)| x != y)
        .count())
}

/// A converged k-medoid clustering over a set of blocks.
///
/// Cluster indices in the public API are 1-based, matching the codec's
/// "error of the j-th type" convention.
#[derive(Debug, Clone)]
pub struct ClusterModel {
    k: usize,
    n: usize,
    blocks: Vec<SymbolBlock>,
    block_probs: Vec<f64>,
    block_index: HashMap<SymbolBlock, usize>,
    medoid_indices: Vec<usize>,
    assignment: Vec<usize>,
    sizes: Vec<usize>,
    cluster_probs: Vec<f64>,
    largest: usize,
    plc: f64,
    total_prob: f64,
    b_prime: Vec<SymbolBlock>,
    converged: bool,
    pass_costs: Vec<u64>,
}

impl ClusterModel {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Block length shared by all clustered blocks.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The clustered blocks, in the order they were supplied.
    pub fn blocks(&self) -> &[SymbolBlock] {
        &self.blocks
    }

    /// Medoid of cluster `j` (1-based).
    pub fn medoid(&self, j: usize) -> &SymbolBlock {
        &self.blocks[self.medoid_indices[j - 1]]
    }

    pub fn medoids(&self) -> Vec<&SymbolBlock> {
        (1..=self.k).map(|j| self.medoid(j)).collect()
    }

    /// Probability of the medoid of cluster `j` (1-based).
    pub fn medoid_probability(&self, j: usize) -> f64 {
        self.block_probs[self.medoid_indices[j - 1]]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn cluster_probs(&self) -> &[f64] {
        &self.cluster_probs
    }

    /// 1-based index of the largest cluster (ties: larger probability, then
    /// lower index).
    pub fn largest_cluster(&self) -> usize {
        self.largest + 1
    }

    /// Probability mass of the largest cluster.
    pub fn plc(&self) -> f64 {
        self.plc
    }

    /// Total probability of all clustered blocks; equals the atypical mass
    /// when the model was built from a partition.
    pub fn total_prob(&self) -> f64 {
        self.total_prob
    }

    /// Whether refinement stopped because an assignment pass changed
    /// nothing (as opposed to hitting the round limit).
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Total within-cluster distance after each assignment pass.
    pub fn pass_costs(&self) -> &[u64] {
        &self.pass_costs
    }

    /// Stored cluster of a member block (1-based), if the block was part of
    /// the clustered set.
    pub fn assignment_of(&self, block: &SymbolBlock) -> Option<usize> {
        self.block_index
            .get(block)
            .map(|&i| self.assignment[i] + 1)
    }

    /// Nearest-medoid cluster (1-based) for any block of matching length;
    /// ties break toward the lowest index.
    pub fn assign(&self, block: &SymbolBlock) -> Result<usize> {
        let mut best = 0;
        let mut best_distance = usize::MAX;
        for (idx, &medoid) in self.medoid_indices.iter().enumerate() {
            let d = hamming_distance(block, &self.blocks[medoid])?;
            if d < best_distance {
                best_distance = d;
                best = idx;
            }
        }
        Ok(best + 1)
    }

    /// Member blocks of cluster `j` (1-based), in supply order.
    pub fn members(&self, j: usize) -> Vec<&SymbolBlock> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == j - 1)
            .map(|(i, _)| &self.blocks[i])
            .collect()
    }

    /// JSON export: sizes, masses, PLC, medoids.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "sizes": self.sizes,
            "cluster_prob": self.cluster_probs,
            "plc": self.plc,
            "largest_index": self.largest_cluster(),
            "medoids": self.medoids().iter().map(|m| m.symbols().to_vec()).collect::<Vec<_>>(),
            "converged": self.converged,
        })
    }
}

/// Clusters the atypical set of `partition` into `k` clusters.
pub fn cluster_atypical(
    partition: &TypicalPartition,
    model: &SourceModel,
    k: usize,
    seed: u64,
) -> Result<ClusterModel> {
    let blocks = partition.atypical_list();
    if blocks.is_empty() {
        return Err(Error::EmptyAtypicalSet);
    }
    let probs = blocks
        .iter()
        .map(|b| model.sequence_probability(b))
        .collect::<Result<Vec<_>>>()?;
    cluster_blocks(blocks, &probs, k, seed)
}

/// k-medoid clustering of an explicit block set with per-block
/// probabilities. `cluster_atypical` delegates here; tests use it directly
/// to plant synthetic sets.
pub fn cluster_blocks(
    blocks: &[SymbolBlock],
    probs: &[f64],
    k: usize,
    seed: u64,
) -> Result<ClusterModel> {
    if blocks.is_empty() {
        return Err(Error::EmptyAtypicalSet);
    }
    if k < 2 || k > blocks.len() {
        return Err(Error::ClusterCountOutOfRange {
            k,
            max: blocks.len(),
        });
    }
    assert_eq!(blocks.len(), probs.len(), "one probability per block");
    let n = blocks[0].len();
    for b in blocks {
        if b.len() != n {
            return Err(Error::BlockLengthMismatch {
                got: b.len(),
                expected: n,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids = seed_medoids(blocks, k, &mut rng);
    let mut assignment = vec![0usize; blocks.len()];
    let mut pass_costs = Vec::new();
    let mut converged = false;

    let max_rounds = 10 * blocks.len();
    let mut first_pass = true;
    for _ in 0..max_rounds {
        let (changed, cost) = assignment_pass(blocks, &medoids, &mut assignment);
        pass_costs.push(cost);
        if !changed && !first_pass {
            converged = true;
            break;
        }
        first_pass = false;
        reseed_empty_clusters(blocks, &mut medoids, &mut assignment);
        update_medoids(blocks, &assignment, &mut medoids);
    }
    if !converged {
        // Round limit hit; run one final pass so the stored assignment is
        // optimal for the final medoids.
        let (changed, cost) = assignment_pass(blocks, &medoids, &mut assignment);
        pass_costs.push(cost);
        converged = !changed;
    }

    Ok(finalize(blocks, probs, n, k, medoids, assignment, pass_costs, converged))
}

/// Farthest-point (maximin) seeding starting from the lexicographically
/// smallest block. The rng only picks among candidates at equal maximin
/// distance.
fn seed_medoids(blocks: &[SymbolBlock], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let start = blocks
        .iter()
        .enumerate()
        .min_by_key(|(_, b)| *b)
        .map(|(i, _)| i)
        .expect("non-empty block set");
    let mut medoids = vec![start];
    let mut min_distance: Vec<usize> = blocks
        .iter()
        .map(|b| hamming_distance(b, &blocks[start]).expect("equal lengths"))
        .collect();

    while medoids.len() < k {
        let best = min_distance
            .iter()
            .enumerate()
            .filter(|(i, _)| !medoids.contains(i))
            .map(|(_, &d)| d)
            .max()
            .expect("more blocks than medoids");
        let ties: Vec<usize> = (0..blocks.len())
            .filter(|i| !medoids.contains(i) && min_distance[*i] == best)
            .collect();
        let pick = ties[(rng.next_u64() % ties.len() as u64) as usize];
        for (i, slot) in min_distance.iter_mut().enumerate() {
            let d = hamming_distance(&blocks[i], &blocks[pick]).expect("equal lengths");
            if d < *slot {
                *slot = d;
            }
        }
        medoids.push(pick);
    }
    medoids
}

/// Reassigns every block to its nearest medoid (ties toward the lowest
/// cluster index). Returns whether anything moved and the resulting cost.
fn assignment_pass(
    blocks: &[SymbolBlock],
    medoids: &[usize],
    assignment: &mut [usize],
) -> (bool, u64) {
    let mut changed = false;
    let mut cost = 0u64;
    for (i, block) in blocks.iter().enumerate() {
        let mut best = 0;
        let mut best_distance = usize::MAX;
        for (c, &m) in medoids.iter().enumerate() {
            let d = hamming_distance(block, &blocks[m]).expect("equal lengths");
            if d < best_distance {
                best_distance = d;
                best = c;
            }
        }
        cost += best_distance as u64;
        if assignment[i] != best {
            assignment[i] = best;
            changed = true;
        }
    }
    (changed, cost)
}

/// Gives any empty cluster the block farthest from its own medoid (ties:
/// lexicographically smallest block). Cannot fire while medoids assign to
/// themselves at distance zero, but keeps k clusters live if that invariant
/// is ever disturbed.
fn reseed_empty_clusters(
    blocks: &[SymbolBlock],
    medoids: &mut [usize],
    assignment: &mut [usize],
) {
    for c in 0..medoids.len() {
        if assignment.iter().any(|&a| a == c) {
            continue;
        }
        let farthest = (0..blocks.len())
            .max_by(|&x, &y| {
                let dx = hamming_distance(&blocks[x], &blocks[medoids[assignment[x]]]).unwrap();
                let dy = hamming_distance(&blocks[y], &blocks[medoids[assignment[y]]]).unwrap();
                dx.cmp(&dy).then_with(|| blocks[y].cmp(&blocks[x]))
            })
            .expect("non-empty block set");
        medoids[c] = farthest;
        assignment[farthest] = c;
    }
}

/// Moves each medoid to the member minimizing total intra-cluster distance
/// (ties: lexicographically smallest member).
fn update_medoids(blocks: &[SymbolBlock], assignment: &[usize], medoids: &mut [usize]) {
    for c in 0..medoids.len() {
        let members: Vec<usize> = (0..blocks.len()).filter(|&i| assignment[i] == c).collect();
        if members.is_empty() {
            continue;
        }
        let mut best = members[0];
        let mut best_total = usize::MAX;
        for &candidate in &members {
            let total: usize = members
                .iter()
                .map(|&m| hamming_distance(&blocks[candidate], &blocks[m]).unwrap())
                .sum();
            if total < best_total
                || (total == best_total && blocks[candidate] < blocks[best])
            {
                best_total = total;
                best = candidate;
            }
        }
        medoids[c] = best;
    }
}

#[allow(clippy::too_many_arguments)]
fn finalize(
    blocks: &[SymbolBlock],
    probs: &[f64],
    n: usize,
    k: usize,
    medoids: Vec<usize>,
    assignment: Vec<usize>,
    pass_costs: Vec<u64>,
    converged: bool,
) -> ClusterModel {
    let mut sizes = vec![0usize; k];
    let mut cluster_probs = vec![0.0f64; k];
    for (i, &c) in assignment.iter().enumerate() {
        sizes[c] += 1;
        cluster_probs[c] += probs[i];
    }
    // Largest cluster: maximal cardinality, then maximal probability, then
    // lowest index.
    let mut largest = 0;
    for c in 1..k {
        if sizes[c] > sizes[largest]
            || (sizes[c] == sizes[largest] && cluster_probs[c] > cluster_probs[largest])
        {
            largest = c;
        }
    }
    let removed: Vec<usize> = (0..k).filter(|&c| c != largest).map(|c| medoids[c]).collect();
    let b_prime: Vec<SymbolBlock> = (0..blocks.len())
        .filter(|i| !removed.contains(i))
        .map(|i| blocks[i].clone())
        .collect();

    let block_index = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.clone(), i))
        .collect();

    ClusterModel {
        k,
        n,
        blocks: blocks.to_vec(),
        block_probs: probs.to_vec(),
        block_index,
        medoid_indices: medoids,
        assignment,
        sizes,
        plc: cluster_probs[largest],
        cluster_probs,
        largest,
        total_prob: probs.iter().sum(),
        b_prime,
        converged,
        pass_costs,
    }
}

/// Probability mass of the largest cluster (PLC).
pub fn largest_cluster_probability(clusters: &ClusterModel) -> f64 {
    clusters.plc()
}

/// B' — the clustered set minus the medoids of the k-1 non-largest
/// clusters. With all clusters non-empty its size is |B| - k + 1.
pub fn compute_b_prime(clusters: &ClusterModel) -> Result<Vec<SymbolBlock>> {
    for (c, &size) in clusters.sizes.iter().enumerate() {
        if size == 0 {
            return Err(Error::EmptyCluster { j: c + 1 });
        }
    }
    Ok(clusters.b_prime.clone())
}

/// Zone makeup of one cluster: wholly VLPZ, wholly VHPZ, or mixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ClusterZone {
    Vlpz,
    Vhpz,
    Mixed,
}

impl std::fmt::Display for ClusterZone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClusterZone::Vlpz => write!(f, "VLPZ"),
            ClusterZone::Vhpz => write!(f, "VHPZ"),
            ClusterZone::Mixed => write!(f, "MIXED"),
        }
    }
}

/// Per-cluster zone labels plus the fraction of zone-homogeneous clusters.
#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    pub cluster_zones: Vec<ClusterZone>,
    pub homogeneous_fraction: f64,
}

/// Measures whether each cluster lies wholly inside one probability zone.
/// This is a measurement, not an enforced constraint.
pub fn zone_homogeneity(
    clusters: &ClusterModel,
    partition: &TypicalPartition,
) -> Result<HomogeneityReport> {
    let mut cluster_zones = Vec::with_capacity(clusters.k());
    for j in 1..=clusters.k() {
        let mut saw_vlpz = false;
        let mut saw_vhpz = false;
        for member in clusters.members(j) {
            match partition.zone_of(member)? {
                Zone::Vlpz => saw_vlpz = true,
                Zone::Vhpz => saw_vhpz = true,
                Zone::Mpz => saw_vlpz = true, // typical members cannot occur in B; treat as mixed
            }
        }
        cluster_zones.push(match (saw_vlpz, saw_vhpz) {
            (true, false) => ClusterZone::Vlpz,
            (false, true) => ClusterZone::Vhpz,
            _ => ClusterZone::Mixed,
        });
    }
    let homogeneous = cluster_zones
        .iter()
        .filter(|z| !matches!(z, ClusterZone::Mixed))
        .count();
    Ok(HomogeneityReport {
        homogeneous_fraction: homogeneous as f64 / clusters.k() as f64,
        cluster_zones,
    })
}
