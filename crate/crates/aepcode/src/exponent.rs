//! Error exponents and the inequality chains comparing the traditional
//! scheme (index typical sequences, declare a bare error otherwise) with the
//! clustered scheme (spend `1 + log2(k)` extra bits to name the cluster).
//!
//! Two regimes are analyzed. Case 1: the general configuration, where the
//! clustered scheme's error probability is the mass of the largest cluster.
//! Case 2: the extreme where the atypical set holds exactly k sequences,
//! each its own cluster. Bit-lengths here are real-valued; the codec's
//! ceiled widths are a separate, integral concern.

use serde::Serialize;

use crate::clustering::ClusterModel;
use crate::error::{Error, Result};
use crate::render::json_float;
use crate::typicality::{TypicalPartition, Zone};

/// Error exponent `-ln(poe) / n_bits`. A zero error probability yields an
/// infinite exponent, reported as such.
pub fn error_exponent(poe: f64, n_bits: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&poe) || poe.is_nan() {
        return Err(Error::InvalidProbability(poe));
    }
    if !(n_bits > 0.0) || !n_bits.is_finite() {
        return Err(Error::InvalidBitLength(n_bits));
    }
    if poe == 0.0 {
        return Ok(f64::INFINITY);
    }
    if poe == 1.0 {
        return Ok(0.0);
    }
    Ok(-poe.ln() / n_bits)
}

/// log2(k), exact for powers of two.
fn log2_count(k: usize) -> f64 {
    debug_assert!(k >= 1);
    if k.is_power_of_two() {
        k.trailing_zeros() as f64
    } else {
        (k as f64).log2()
    }
}

/// Relative overhead of the cluster-index field:
/// `chi = log2(k) / (n (H + eps))`.
pub fn chi(k: usize, n: usize, entropy_bits: f64, epsilon: f64) -> f64 {
    log2_count(k) / (n as f64 * (entropy_bits + epsilon))
}

/// The threshold `log_eps(2^{-n(H+eps)}) = n(H+eps) ln2 / ln(1/eps)` that
/// chi must exceed in the Case-2 extreme. Positive for all 0 < eps < 1.
pub fn chi_threshold(n: usize, entropy_bits: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidLogBase(epsilon));
    }
    Ok(n as f64 * (entropy_bits + epsilon) * std::f64::consts::LN_2 / -epsilon.ln())
}

/// A premise an inequality depends on, recorded separately from the
/// conclusion so conditional bounds are never asserted unconditionally.
#[derive(Debug, Clone, Serialize)]
pub struct Premise {
    pub name: String,
    pub holds: bool,
}

/// One named inequality with its evaluated sides.
#[derive(Debug, Clone)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub premises: Vec<Premise>,
}

impl InequalityCheck {
    fn strict_less(name: &str, lhs: f64, rhs: f64, premises: Vec<Premise>) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs < rhs,
            premises,
        }
    }

    fn strict_greater(name: &str, lhs: f64, rhs: f64, premises: Vec<Premise>) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs > rhs,
            premises,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "lhs": json_float(self.lhs),
            "rhs": json_float(self.rhs),
            "holds": self.holds,
            "premises": self.premises,
        })
    }
}

/// Which regime a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    Case1,
    Case2Extreme,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::Case1 => write!(f, "CASE1"),
            CaseTag::Case2Extreme => write!(f, "CASE2_EXTREME"),
        }
    }
}

/// Exponent comparison for one instance.
///
/// `poe1` is the measured atypical mass (the traditional scheme's error
/// probability); the epsilon upper bound is carried alongside so each
/// inequality can be checked with either.
#[derive(Debug, Clone)]
pub struct ExponentReport {
    pub case_tag: CaseTag,
    pub poe1: f64,
    pub poe1_bound: f64,
    pub poe2: f64,
    /// Real-valued bit length n(H+eps) of the traditional scheme.
    pub n1_bits: f64,
    /// Real-valued bit length 1 + n(H+eps) + log2(k) of the clustered
    /// scheme.
    pub n2_bits: f64,
    pub e1: f64,
    pub e2: f64,
    pub chi: f64,
    pub chi_threshold: f64,
    pub checks: Vec<InequalityCheck>,
    /// Whether the clustered scheme's exponent beats the traditional one.
    pub verdict_e2_gt_e1: bool,
}

impl ExponentReport {
    pub fn check(&self, name: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "case_tag": self.case_tag.to_string(),
            "poe1": json_float(self.poe1),
            "poe1_bound": json_float(self.poe1_bound),
            "poe2": json_float(self.poe2),
            "n1_bits": json_float(self.n1_bits),
            "n2_bits": json_float(self.n2_bits),
            "e1": json_float(self.e1),
            "e2": json_float(self.e2),
            "chi": json_float(self.chi),
            "chi_threshold": json_float(self.chi_threshold),
            "inequality_checks": self.checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "verdict_e2_gt_e1": self.verdict_e2_gt_e1,
        })
    }
}

struct Lengths {
    n1: f64,
    n2: f64,
    chi: f64,
    threshold: f64,
}

fn lengths(partition: &TypicalPartition, k: usize) -> Result<Lengths> {
    let n = partition.n();
    let h = partition.entropy_bits();
    let eps = partition.epsilon();
    let n1 = n as f64 * (h + eps);
    Ok(Lengths {
        n1,
        n2: 1.0 + n1 + log2_count(k),
        chi: chi(k, n, h, eps),
        threshold: chi_threshold(n, h, eps)?,
    })
}

/// Case-1 report: the clustered scheme's error probability is PLC, the mass
/// of the largest cluster. A zero PLC is degenerate and shows up as an
/// infinite `e2` rather than an error.
pub fn case1_report(
    partition: &TypicalPartition,
    clusters: &ClusterModel,
) -> Result<ExponentReport> {
    let l = lengths(partition, clusters.k())?;
    let poe1 = partition.prob_atypical();
    let eps = partition.epsilon();
    let plc = clusters.plc();

    let e1 = error_exponent(poe1, l.n1)?;
    let e2 = error_exponent(plc, l.n2)?;

    let pb_lt_eps = InequalityCheck::strict_less("P(B) < epsilon", poe1, eps, vec![]);
    let premises = vec![Premise {
        name: "P(B) < epsilon".into(),
        holds: pb_lt_eps.holds,
    }];
    let checks = vec![
        InequalityCheck::strict_less("PLC < P(B)", plc, poe1, vec![]),
        pb_lt_eps,
        InequalityCheck::strict_less(
            "ln(PLC) < ln(epsilon)*(1 + chi)",
            plc.ln(),
            eps.ln() * (1.0 + l.chi),
            premises.clone(),
        ),
        InequalityCheck::strict_less(
            "ln(PLC) < ln(epsilon)*(1 + 1/N1 + chi)",
            plc.ln(),
            eps.ln() * (1.0 + 1.0 / l.n1 + l.chi),
            premises,
        ),
    ];

    Ok(ExponentReport {
        case_tag: CaseTag::Case1,
        poe1,
        poe1_bound: eps,
        poe2: plc,
        n1_bits: l.n1,
        n2_bits: l.n2,
        e1,
        e2,
        chi: l.chi,
        chi_threshold: l.threshold,
        checks,
        verdict_e2_gt_e1: e2 > e1,
    })
}

/// The Case-2 error probability `sum_j P(mean_j) * P(C_j)`, defined only
/// when every cluster is a singleton (then it collapses to the sum of
/// squared medoid probabilities).
pub fn case2_poe2(clusters: &ClusterModel) -> Result<f64> {
    for (idx, &size) in clusters.sizes().iter().enumerate() {
        if size != 1 {
            return Err(Error::NonSingletonCluster { j: idx + 1, size });
        }
    }
    Ok((1..=clusters.k())
        .map(|j| clusters.medoid_probability(j) * clusters.cluster_probs()[j - 1])
        .sum())
}

/// Case-2 report for the singleton extreme. The headline bound
/// `PoE2 < eps * 2^{-n(H+eps)}` only follows when every medoid is VLPZ and
/// the atypical mass is below epsilon, so those premises are recorded with
/// it rather than assumed.
pub fn case2_report(
    partition: &TypicalPartition,
    clusters: &ClusterModel,
) -> Result<ExponentReport> {
    let poe2 = case2_poe2(clusters)?;
    let l = lengths(partition, clusters.k())?;
    let poe1 = partition.prob_atypical();
    let eps = partition.epsilon();

    let e1 = error_exponent(poe1, l.n1)?;
    let e2 = error_exponent(poe2, l.n2)?;

    let mut all_vlpz = true;
    for j in 1..=clusters.k() {
        if partition.zone_of(clusters.medoid(j))? != Zone::Vlpz {
            all_vlpz = false;
            break;
        }
    }
    let pb_lt_eps = poe1 < eps;
    let premises = vec![
        Premise {
            name: "all medoids in VLPZ".into(),
            holds: all_vlpz,
        },
        Premise {
            name: "P(B) < epsilon".into(),
            holds: pb_lt_eps,
        },
    ];

    let checks = vec![
        InequalityCheck::strict_less("P(B) < epsilon", poe1, eps, vec![]),
        InequalityCheck::strict_less(
            "PoE2 < epsilon*2^(-n(H+epsilon))",
            poe2,
            eps * (-l.n1).exp2(),
            premises.clone(),
        ),
        InequalityCheck::strict_less(
            "ln(PoE2) < ln(epsilon)*(1 + chi)",
            poe2.ln(),
            eps.ln() * (1.0 + l.chi),
            premises,
        ),
        InequalityCheck::strict_greater("chi > chi_threshold", l.chi, l.threshold, vec![]),
    ];

    Ok(ExponentReport {
        case_tag: CaseTag::Case2Extreme,
        poe1,
        poe1_bound: eps,
        poe2,
        n1_bits: l.n1,
        n2_bits: l.n2,
        e1,
        e2,
        chi: l.chi,
        chi_threshold: l.threshold,
        checks,
        verdict_e2_gt_e1: e2 > e1,
    })
}

/// Zone-conditional bounds on P(B') in the singleton extreme, where B'
/// collapses to the largest cluster's sole member.
#[derive(Debug, Clone)]
pub struct BPrimeBounds {
    pub prob_b_prime: f64,
    pub largest_zone: Zone,
    pub check: InequalityCheck,
}

impl BPrimeBounds {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "prob_b_prime": json_float(self.prob_b_prime),
            "largest_zone": self.largest_zone.to_string(),
            "check": self.check.to_json(),
        })
    }
}

/// Evaluates the extreme-case bound matching the largest cluster's zone:
/// `P(B') < 2^{-n(H+eps)}` when it sits in VLPZ, `P(B') > 2^{-n(H-eps)}`
/// when it sits in VHPZ.
pub fn bprime_extreme_bounds(
    clusters: &ClusterModel,
    partition: &TypicalPartition,
) -> Result<BPrimeBounds> {
    for (idx, &size) in clusters.sizes().iter().enumerate() {
        if size != 1 {
            return Err(Error::NonSingletonCluster { j: idx + 1, size });
        }
    }
    let n = partition.n() as f64;
    let h = partition.entropy_bits();
    let eps = partition.epsilon();
    let prob_b_prime = clusters.plc();
    let largest_zone = partition.zone_of(clusters.medoid(clusters.largest_cluster()))?;
    let check = match largest_zone {
        Zone::Vlpz => InequalityCheck::strict_less(
            "P(B') < 2^(-n(H+epsilon))",
            prob_b_prime,
            (-n * (h + eps)).exp2(),
            vec![],
        ),
        Zone::Vhpz => InequalityCheck::strict_greater(
            "P(B') > 2^(-n(H-epsilon))",
            prob_b_prime,
            (-n * (h - eps)).exp2(),
            vec![],
        ),
        Zone::Mpz => unreachable!("members of the atypical set are never MPZ"),
    };
    Ok(BPrimeBounds {
        prob_b_prime,
        largest_zone,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::cluster_atypical;
    use crate::source::SourceModel;
    use crate::typicality::partition_sequences;

    #[test]
    fn exponent_spot_values() {
        // -ln(0.1)/10, evaluated independently.
        let e = error_exponent(0.1, 10.0).unwrap();
        assert!((e - 0.23025851).abs() < 1e-8);
        assert_eq!(error_exponent(1.0, 3.0).unwrap(), 0.0);
        assert_eq!(error_exponent(0.0, 5.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn halving_poe_adds_ln2_over_n() {
        for n in [4.0, 10.0, 64.0] {
            for poe in [0.9, 0.5, 0.01] {
                let delta =
                    error_exponent(poe / 2.0, n).unwrap() - error_exponent(poe, n).unwrap();
                assert!((delta - std::f64::consts::LN_2 / n).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exponent_rejects_bad_inputs() {
        assert!(matches!(
            error_exponent(1.5, 10.0),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            error_exponent(-0.1, 10.0),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            error_exponent(0.5, 0.0),
            Err(Error::InvalidBitLength(_))
        ));
    }

    #[test]
    fn exponent_monotonicity() {
        // Decreasing in N at fixed poe, decreasing in poe at fixed N.
        let grid = [2.0, 5.0, 9.0, 20.0, 100.0];
        for pair in grid.windows(2) {
            assert!(
                error_exponent(0.3, pair[1]).unwrap() < error_exponent(0.3, pair[0]).unwrap()
            );
        }
        let poes = [0.01, 0.1, 0.3, 0.9];
        for pair in poes.windows(2) {
            assert!(error_exponent(pair[1], 8.0).unwrap() < error_exponent(pair[0], 8.0).unwrap());
        }
    }

    #[test]
    fn chi_power_of_two_is_exact() {
        let h = 0.7219;
        for m in 1..=6 {
            let k = 1usize << m;
            assert_eq!(chi(k, 10, h, 0.2), m as f64 / (10.0 * (h + 0.2)));
        }
        // k=4, n(H+eps) pinned at 9.219.
        assert!((chi(4, 10, 0.7219, 0.2) - 0.21694326933506888).abs() < 1e-12);
    }

    #[test]
    fn chi_decreases_in_n() {
        let mut last = f64::INFINITY;
        for n in [5, 10, 20, 40, 80] {
            let value = chi(2, n, 0.7219, 0.2);
            assert!(value < last);
            last = value;
        }
    }

    #[test]
    fn chi_threshold_value_and_identity() {
        // Direct evaluation: 9.219 * ln(2) / ln(5).
        let t = chi_threshold(10, 0.7219, 0.2).unwrap();
        assert!((t - 3.9704071888786103).abs() < 1e-12);
        assert!((t - 3.970).abs() < 1e-3);
        // Change-of-base identity: ln(2^{-n(H+eps)}) / ln(eps).
        let alt = (2f64.powf(-9.219)).ln() / 0.2f64.ln();
        assert!((t - alt).abs() < 1e-12);
    }

    #[test]
    fn chi_threshold_positive_and_divergent_near_one() {
        let mut last = 0.0;
        for eps in [0.05, 0.2, 0.5, 0.8, 0.95, 0.999] {
            let t = chi_threshold(8, 0.9, eps).unwrap();
            assert!(t > 0.0);
            assert!(t > last, "threshold should grow toward eps = 1");
            last = t;
        }
        assert!(matches!(
            chi_threshold(8, 0.9, 1.0),
            Err(Error::InvalidLogBase(_))
        ));
        assert!(matches!(
            chi_threshold(8, 0.9, 0.0),
            Err(Error::InvalidLogBase(_))
        ));
    }

    #[test]
    fn case1_report_fields_and_consistency() {
        let model = SourceModel::new(&[0.2, 0.8]).unwrap();
        let partition = partition_sequences(&model, 10, 0.2).unwrap();
        let clusters = cluster_atypical(&partition, &model, 4, 0).unwrap();
        let report = case1_report(&partition, &clusters).unwrap();

        assert_eq!(report.case_tag, CaseTag::Case1);
        assert_eq!(report.poe2, clusters.plc());
        assert!((report.n2_bits - report.n1_bits - 1.0 - 2.0).abs() < 1e-12);
        assert!((report.e1 - error_exponent(report.poe1, report.n1_bits).unwrap()).abs() < 1e-15);
        assert!((report.e2 - error_exponent(report.poe2, report.n2_bits).unwrap()).abs() < 1e-15);
        assert_eq!(report.verdict_e2_gt_e1, report.e2 > report.e1);

        // PLC < P(B) < epsilon on this instance (P(B) = 0.2282 > 0.2, so
        // the epsilon bound fails and must be recorded as such).
        assert!(report.check("PLC < P(B)").unwrap().holds);
        assert!(!report.check("P(B) < epsilon").unwrap().holds);
    }

    #[test]
    fn appendix_chain_equivalence() {
        // e2 > e1 iff ln(poe2)/N2 < ln(poe1)/N1, for every instance where
        // both probabilities are in (0, 1).
        let model = SourceModel::new(&[0.2, 0.8]).unwrap();
        for n in [6, 8, 10] {
            let partition = partition_sequences(&model, n, 0.2).unwrap();
            for k in [2usize, 3, 4] {
                if k > partition.atypical_list().len() {
                    continue;
                }
                let clusters = cluster_atypical(&partition, &model, k, 5).unwrap();
                let report = case1_report(&partition, &clusters).unwrap();
                let lhs = report.poe2.ln() / report.n2_bits;
                let rhs = report.poe1.ln() / report.n1_bits;
                assert_eq!(report.verdict_e2_gt_e1, lhs < rhs);
            }
        }
    }

    #[test]
    fn case1_verdicts_on_grid() {
        // The appendix chain gives: when P(B) < eps, e2 > e1 implies
        // ln(PLC) < ln(eps)(1 + 1/N1 + chi), which implies the large-n
        // form. Contrapositive: a failed large-n check forces a false
        // verdict. The converse is not a theorem, and the scan confirms
        // it is not empirical fact either: under binding premises the grid
        // holds cells with either verdict, so both outcomes are asserted
        // to occur rather than a universal direction.
        let mut bound_cells = 0usize;
        let mut bound_true = 0usize;
        let mut bound_false = 0usize;
        for pmf in [[0.2, 0.8], [0.1, 0.9]] {
            let model = SourceModel::new(&pmf).unwrap();
            for n in [6, 8, 10] {
                for eps in [0.2, 0.35, 0.5] {
                    let partition = partition_sequences(&model, n, eps).unwrap();
                    for k in [2usize, 3, 8] {
                        if k > partition.atypical_list().len() {
                            continue;
                        }
                        let clusters = cluster_atypical(&partition, &model, k, 1).unwrap();
                        let report = case1_report(&partition, &clusters).unwrap();
                        assert_eq!(report.verdict_e2_gt_e1, report.e2 > report.e1);
                        if report.check("P(B) < epsilon").unwrap().holds {
                            bound_cells += 1;
                            if report.verdict_e2_gt_e1 {
                                bound_true += 1;
                                assert!(
                                    report
                                        .check("ln(PLC) < ln(epsilon)*(1 + 1/N1 + chi)")
                                        .unwrap()
                                        .holds,
                                    "verdict true requires the finite-n bound"
                                );
                            } else {
                                bound_false += 1;
                            }
                            if !report.check("ln(PLC) < ln(epsilon)*(1 + chi)").unwrap().holds {
                                assert!(!report.verdict_e2_gt_e1);
                            }
                        }
                    }
                }
            }
        }
        assert!(bound_cells >= 10, "premise never bound; grid too narrow");
        assert!(bound_true > 0, "no improvement cells observed");
        assert!(bound_false > 0, "no traditional-wins cells observed");
    }

    #[test]
    fn large_n_term_vanishes() {
        // ln(eps)(1 + 1/N1 + chi) converges to ln(eps)(1 + chi_limit) with
        // chi_limit = 0 at fixed k.
        let eps: f64 = 0.2;
        let h = 0.7219;
        let limit = eps.ln();
        let mut last_gap = f64::INFINITY;
        for n in [10, 20, 40, 80, 160, 320, 640, 1280] {
            let n1 = n as f64 * (h + eps);
            let rhs = eps.ln() * (1.0 + 1.0 / n1 + chi(2, n, h, eps));
            let gap = (rhs - limit).abs();
            assert!(gap < last_gap);
            last_gap = gap;
        }
        assert!(last_gap < 1e-2);
    }

    fn singleton_instance() -> (SourceModel, TypicalPartition, ClusterModel) {
        // pmf [0.1, 0.9], n = 6, eps = 0.32: B is all blocks with >= 2
        // zeros, 57 of them, every one VLPZ.
        let model = SourceModel::new(&[0.1, 0.9]).unwrap();
        let partition = partition_sequences(&model, 6, 0.32).unwrap();
        let k = partition.atypical_list().len();
        assert_eq!(k, 57);
        let clusters = cluster_atypical(&partition, &model, k, 0).unwrap();
        (model, partition, clusters)
    }

    #[test]
    fn case2_poe2_matches_brute_force() {
        let (model, partition, clusters) = singleton_instance();
        let poe2 = case2_poe2(&clusters).unwrap();
        let brute: f64 = partition
            .atypical_list()
            .iter()
            .map(|b| {
                let p = model.sequence_probability(b).unwrap();
                p * p
            })
            .sum();
        assert!((poe2 - brute).abs() < 1e-15);
        assert!((poe2 - 6.56428537e-4).abs() < 1e-12);
        // Sanity bound: the squared sum is dominated by the total mass
        // times the heaviest medoid.
        let max_medoid = (1..=clusters.k())
            .map(|j| clusters.medoid_probability(j))
            .fold(0.0f64, f64::max);
        assert!(poe2 < partition.prob_atypical() * max_medoid);
    }

    #[test]
    fn case2_symmetric_singletons() {
        // k singletons of equal probability q give k*q^2.
        let blocks: Vec<_> = (0..4)
            .map(|r| crate::source::SymbolBlock::from_lex_rank(r, 2, 4))
            .collect();
        let probs = vec![0.01; 4];
        let clusters = crate::clustering::cluster_blocks(&blocks, &probs, 4, 0).unwrap();
        let poe2 = case2_poe2(&clusters).unwrap();
        assert!((poe2 - 4.0 * 0.01 * 0.01).abs() < 1e-18);
    }

    #[test]
    fn case2_rejects_non_singletons() {
        let model = SourceModel::new(&[0.2, 0.8]).unwrap();
        let partition = partition_sequences(&model, 10, 0.2).unwrap();
        let clusters = cluster_atypical(&partition, &model, 2, 0).unwrap();
        assert!(matches!(
            case2_poe2(&clusters),
            Err(Error::NonSingletonCluster { .. })
        ));
    }

    #[test]
    fn case2_bound_holds_with_vlpz_premises() {
        let (_, partition, clusters) = singleton_instance();
        let report = case2_report(&partition, &clusters).unwrap();
        assert_eq!(report.case_tag, CaseTag::Case2Extreme);
        let bound = report.check("PoE2 < epsilon*2^(-n(H+epsilon))").unwrap();
        assert!(bound.premises.iter().all(|p| p.holds));
        assert!(bound.holds);
        // chi vs threshold is recorded either way; on this instance the
        // cluster count is far too small to clear the threshold.
        let chi_check = report.check("chi > chi_threshold").unwrap();
        assert!(!chi_check.holds);
        assert_eq!(report.verdict_e2_gt_e1, report.e2 > report.e1);
    }

    #[test]
    fn bprime_bound_vlpz_side() {
        let (_, partition, clusters) = singleton_instance();
        let bounds = bprime_extreme_bounds(&clusters, &partition).unwrap();
        assert_eq!(bounds.largest_zone, Zone::Vlpz);
        assert_eq!(bounds.check.name, "P(B') < 2^(-n(H+epsilon))");
        assert!(bounds.check.holds);
        // Consistency: the reported zone is the medoid's zone.
        let medoid = clusters.medoid(clusters.largest_cluster());
        assert_eq!(partition.zone_of(medoid).unwrap(), bounds.largest_zone);
    }

    #[test]
    fn bprime_bound_vhpz_side() {
        // pmf [0.2, 0.8], n = 4, eps = 0.2: B = {0000-weight class w=0}
        // (VHPZ) plus all w >= 2 blocks (VLPZ); 12 singletons, largest by
        // probability is the all-ones VHPZ block.
        let model = SourceModel::new(&[0.2, 0.8]).unwrap();
        let partition = partition_sequences(&model, 4, 0.2).unwrap();
        let k = partition.atypical_list().len();
        assert_eq!(k, 12);
        let clusters = cluster_atypical(&partition, &model, k, 0).unwrap();
        let bounds = bprime_extreme_bounds(&clusters, &partition).unwrap();
        assert_eq!(bounds.largest_zone, Zone::Vhpz);
        assert_eq!(bounds.check.name, "P(B') > 2^(-n(H-epsilon))");
        assert!(bounds.check.holds);
        assert!((bounds.prob_b_prime - 0.4096).abs() < 1e-12);
    }

    #[test]
    fn report_json_names_every_check() {
        let (_, partition, clusters) = singleton_instance();
        let report = case2_report(&partition, &clusters).unwrap();
        let json = report.to_json();
        let checks = json["inequality_checks"].as_array().unwrap();
        assert_eq!(checks.len(), report.checks.len());
        for check in checks {
            assert!(check["name"].is_string());
            assert!(check["holds"].is_boolean());
            assert!(check.get("lhs").is_some() && check.get("rhs").is_some());
            assert!(check["premises"].is_array());
        }
    }
}
