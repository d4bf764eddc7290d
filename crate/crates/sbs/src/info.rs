//! Entropic quantities: von Neumann entropy, mutual information in its
//! bipartite, conditional and multipartite forms, and the Holevo quantity.
//!
//! All logarithms are base 2; every result is in bits. Eigenvalues in
//! `[-DEFAULT_TOL, 0)` are treated as round-off and clamped to zero before
//! taking logs, and information quantities in `[-DEFAULT_TOL, 0)` are
//! clamped to zero. Values below `-DEFAULT_TOL` signal a bug, not noise,
//! and surface as [`Error::Inconsistent`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{normalize_subset, DensityMatrix, MultipartiteState, DEFAULT_TOL};

/// An information quantity in bits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Bits(f64);

impl Bits {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Clamp round-off negatives to zero; reject anything below `-DEFAULT_TOL`.
fn information_value(raw: f64, what: &str) -> Result<Bits> {
    if raw < -DEFAULT_TOL {
        return Err(Error::Inconsistent(format!("{what} = {raw:.3e} < 0")));
    }
    Ok(Bits(raw.max(0.0)))
}

/// Von Neumann entropy in bits.
pub fn entropy(m: &DensityMatrix) -> Bits {
    let mut h = 0.0;
    for lambda in m.eigenvalues() {
        debug_assert!(
            lambda > -DEFAULT_TOL && lambda < 1.0 + DEFAULT_TOL,
            "eigenvalue {lambda} outside [0, 1] for a validated density matrix"
        );
        let lambda = lambda.clamp(0.0, 1.0);
        if lambda > 0.0 {
            h -= lambda * lambda.log2();
        }
    }
    Bits(h.max(0.0))
}

fn marginal_entropy(s: &MultipartiteState, keep: &[usize]) -> Result<f64> {
    Ok(entropy(s.partial_trace(keep)?.density()).value())
}

/// Check that the given index sets are pairwise disjoint and cover all
/// subsystems of `s`; returns the sets normalized (sorted, deduped).
fn validated_partition(s: &MultipartiteState, parts: &[&[usize]]) -> Result<Vec<Vec<usize>>> {
    let n = s.subsystem_count();
    let mut seen = vec![false; n];
    let mut normalized = Vec::with_capacity(parts.len());
    for part in parts {
        let part = normalize_subset(part, n)?;
        if part.len() != parts.iter().position(|_| true).map(|_| part.len()).unwrap() {
            unreachable!()
        }
        for &k in &part {
            if seen[k] {
                return Err(Error::OverlappingParts(format!(
                    "subsystem {k} appears in more than one part"
                )));
            }
            seen[k] = true;
        }
        normalized.push(part);
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::OverlappingParts(format!(
            "subsystem {missing} is in no part; partial-trace it away first"
        )));
    }
    Ok(normalized)
}

/// I(A:B) = H(A) + H(B) - H(AB), for `part_a`, `part_b` partitioning `s`.
pub fn mutual_information(
    s: &MultipartiteState,
    part_a: &[usize],
    part_b: &[usize],
) -> Result<Bits> {
    validated_partition(s, &[part_a, part_b])?;
    let h_a = marginal_entropy(s, part_a)?;
    let h_b = marginal_entropy(s, part_b)?;
    let h_ab = entropy(s.density()).value();
    information_value(h_a + h_b - h_ab, "mutual information")
}

/// I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C), for disjoint parts covering `s`.
///
/// An empty `part_c` reduces to plain mutual information.
pub fn conditional_mutual_information(
    s: &MultipartiteState,
    part_a: &[usize],
    part_b: &[usize],
    part_c: &[usize],
) -> Result<Bits> {
    if part_c.is_empty() {
        return mutual_information(s, part_a, part_b);
    }
    let parts = validated_partition(s, &[part_a, part_b, part_c])?;
    let (a, b, c) = (&parts[0], &parts[1], &parts[2]);
    let union = |x: &[usize], y: &[usize]| {
        let mut v: Vec<usize> = x.iter().chain(y).copied().collect();
        v.sort_unstable();
        v
    };
    let h_ac = marginal_entropy(s, &union(a, c))?;
    let h_bc = marginal_entropy(s, &union(b, c))?;
    let h_abc = entropy(s.density()).value();
    let h_c = marginal_entropy(s, c)?;
    information_value(h_ac + h_bc - h_abc - h_c, "conditional mutual information")
}

/// Multipartite mutual information over `parts` covering `s`:
/// sum_i H(part_i) - H(whole). Zero exactly when the state factorizes.
pub fn multipartite_mutual_information(
    s: &MultipartiteState,
    parts: &[Vec<usize>],
) -> Result<Bits> {
    if parts.len() < 2 {
        return Err(Error::OverlappingParts(format!(
            "need at least 2 parts, got {}",
            parts.len()
        )));
    }
    let borrowed: Vec<&[usize]> = parts.iter().map(|p| p.as_slice()).collect();
    validated_partition(s, &borrowed)?;
    let mut sum = 0.0;
    for part in parts {
        sum += marginal_entropy(s, part)?;
    }
    let h_whole = entropy(s.density()).value();
    information_value(sum - h_whole, "multipartite mutual information")
}

/// Conditional multipartite mutual information
/// I(part_1, ..., part_F | cond) = sum_i H(part_i, cond) - H(everything)
/// - (F-1) H(cond).
///
/// On a classical-quantum state with the condition on the pointer subsystem
/// this equals the pointer-probability average of the relative states'
/// multipartite mutual information. An empty `cond` reduces to the
/// unconditional quantity.
pub fn conditional_multipartite_mi(
    s: &MultipartiteState,
    parts: &[Vec<usize>],
    cond: &[usize],
) -> Result<Bits> {
    if cond.is_empty() {
        return multipartite_mutual_information(s, parts);
    }
    if parts.is_empty() {
        return Err(Error::OverlappingParts("need at least 1 part".into()));
    }
    let mut all: Vec<&[usize]> = parts.iter().map(|p| p.as_slice()).collect();
    all.push(cond);
    let normalized = validated_partition(s, &all)?;
    let cond = normalized.last().unwrap();
    let f = parts.len();

    let mut sum = 0.0;
    for part in &normalized[..f] {
        let mut with_cond: Vec<usize> = part.iter().chain(cond.iter()).copied().collect();
        with_cond.sort_unstable();
        sum += marginal_entropy(s, &with_cond)?;
    }
    let h_all = entropy(s.density()).value();
    let h_cond = marginal_entropy(s, cond)?;
    information_value(
        sum - h_all - (f as f64 - 1.0) * h_cond,
        "conditional multipartite mutual information",
    )
}

/// A probability-weighted ensemble of equal-dimension density matrices.
#[derive(Clone, Debug)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() || probs.is_empty() {
            return Err(Error::InvalidEnsemble(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        if let Some(&bad) = probs.iter().find(|&&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidEnsemble(format!(
                "probability {bad} is negative or not finite"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidEnsemble(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        let dim = states[0].dim();
        if states.iter().any(|m| m.dim() != dim) {
            return Err(Error::InvalidEnsemble(
                "ensemble states have mixed dimensions".into(),
            ));
        }
        Ok(Self { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// The ensemble-average state.
    pub fn mixture(&self) -> DensityMatrix {
        let dim = self.states[0].dim();
        let mut acc = linalg::CMatrix::zeros(dim, dim);
        for (p, m) in self.probs.iter().zip(&self.states) {
            acc += m.entries().scale(*p);
        }
        DensityMatrix::from_valid(acc)
    }
}

/// Holevo quantity: H(sum_s p_s rho_s) - sum_s p_s H(rho_s).
pub fn holevo_chi(e: &Ensemble) -> Bits {
    let h_mix = entropy(&e.mixture()).value();
    let avg: f64 = e
        .probs()
        .iter()
        .zip(e.states())
        .map(|(p, m)| p * entropy(m).value())
        .sum();
    Bits((h_mix - avg).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, CMatrix};

    fn diag_state(values: &[f64], dims: &[usize]) -> MultipartiteState {
        let m = CMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        MultipartiteState::new(m, dims, DEFAULT_TOL).unwrap()
    }

    fn binary_entropy(p: f64) -> f64 {
        let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
        term(p) + term(1.0 - p)
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit_is_one_bit() {
        let m = DensityMatrix::maximally_mixed(2);
        assert!((entropy(&m).value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let m = DensityMatrix::from_pure(&v).unwrap();
        assert!(entropy(&m).value().abs() < 1e-12);
    }

    #[test]
    fn entropy_of_uniform_rank_four_mixture_is_two_bits() {
        // eigenvalues {1/4, 1/4, 1/4, 1/4, 0, ...} on a 27-dim space
        let mut values = vec![0.0; 27];
        for i in 0..4 {
            values[i] = 0.25;
        }
        let s = diag_state(&values, &[27]);
        assert!((entropy(s.density()).value() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_product_state_is_zero() {
        let s = diag_state(&[0.06, 0.14, 0.24, 0.56], &[2, 2]);
        // 0.2 x 0.3 marginals: diag(0.2, 0.8) (x) diag(0.3, 0.7) would be
        // 0.06, 0.14, 0.24, 0.56 -- a product state
        let i = mutual_information(&s, &[0], &[1]).unwrap();
        assert!(i.value().abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_classical_correlated_pair() {
        // perfectly correlated bit: I = 1 bit
        let s = diag_state(&[0.5, 0.0, 0.0, 0.5], &[2, 2]);
        let i = mutual_information(&s, &[0], &[1]).unwrap();
        assert!((i.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_rejects_overlap_and_gaps() {
        let s = diag_state(&[0.25; 4], &[2, 2]);
        assert!(matches!(
            mutual_information(&s, &[0, 1], &[1]),
            Err(Error::OverlappingParts(_))
        ));
        let s3 = diag_state(&[0.125; 8], &[2, 2, 2]);
        assert!(matches!(
            mutual_information(&s3, &[0], &[1]),
            Err(Error::OverlappingParts(_))
        ));
    }

    #[test]
    fn conditional_mi_of_ghz_diagonal_state_is_zero() {
        // (|000><000| + |111><111|)/2 on three qubits: I(A:B|C) = 0
        let mut values = vec![0.0; 8];
        values[0] = 0.5;
        values[7] = 0.5;
        let s = diag_state(&values, &[2, 2, 2]);
        let i = conditional_mutual_information(&s, &[0], &[1], &[2]).unwrap();
        assert!(i.value().abs() < 1e-12);
    }

    #[test]
    fn conditional_mi_with_trivial_condition_reduces_to_mi() {
        // third subsystem is 1-dimensional
        let s = diag_state(&[0.5, 0.0, 0.0, 0.5], &[2, 2, 1]);
        let cond = conditional_mutual_information(&s, &[0], &[1], &[2]).unwrap();
        let s2 = diag_state(&[0.5, 0.0, 0.0, 0.5], &[2, 2]);
        let plain = mutual_information(&s2, &[0], &[1]).unwrap();
        assert!((cond.value() - plain.value()).abs() < 1e-12);
        assert!((cond.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multipartite_mi_of_product_state_is_zero() {
        let a = DensityMatrix::new(
            CMatrix::from_fn(2, 2, |i, j| {
                if i == j {
                    C64::new([0.2, 0.8][i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
            DEFAULT_TOL,
        )
        .unwrap();
        let b = a.clone();
        let c = DensityMatrix::maximally_mixed(3);
        let abc = a.tensor(&b).tensor(&c);
        let s = MultipartiteState::new(abc.entries().clone(), &[2, 2, 3], DEFAULT_TOL).unwrap();
        let mmi =
            multipartite_mutual_information(&s, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!(mmi.value().abs() < 1e-12);
    }

    #[test]
    fn multipartite_mi_of_uniform_parity_support_is_one_bit() {
        // uniform mixture over |111>, |122>, |212>, |221> on three qutrits:
        // marginal entropies 1 + 1 + 1, joint entropy 2
        let mut values = vec![0.0; 27];
        for idx in [13usize, 17, 23, 25] {
            values[idx] = 0.25;
        }
        let s = diag_state(&values, &[3, 3, 3]);
        let mmi =
            multipartite_mutual_information(&s, &[vec![0], vec![1], vec![2]]).unwrap();
        assert!((mmi.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_multipartite_mi_examples() {
        // pure product |0><0| (x) |000><000| -> 0 conditioned on anything
        let mut values = vec![0.0; 54];
        values[0] = 1.0;
        let s = diag_state(&values, &[2, 3, 3, 3]);
        let v = conditional_multipartite_mi(&s, &[vec![1], vec![2], vec![3]], &[0]).unwrap();
        assert!(v.value().abs() < 1e-12);
    }

    #[test]
    fn holevo_chi_of_single_element_ensemble_is_zero() {
        let m = DensityMatrix::maximally_mixed(3);
        let e = Ensemble::new(vec![1.0], vec![m]).unwrap();
        assert_eq!(holevo_chi(&e).value(), 0.0);
    }

    #[test]
    fn holevo_chi_of_two_orthogonal_pure_states_is_binary_entropy() {
        let q = 0.3;
        let e = Ensemble::new(
            vec![q, 1.0 - q],
            vec![
                DensityMatrix::basis_state(2, 0).unwrap(),
                DensityMatrix::basis_state(2, 1).unwrap(),
            ],
        )
        .unwrap();
        let chi = holevo_chi(&e).value();
        // oracle: direct computation of h(0.3)
        let expected = binary_entropy(q);
        assert!((expected - 0.8812908992306927).abs() < 1e-15);
        assert!((chi - expected).abs() < 1e-12);
    }

    #[test]
    fn ensemble_rejects_bad_probabilities_and_mixed_dims() {
        let m2 = DensityMatrix::maximally_mixed(2);
        let m3 = DensityMatrix::maximally_mixed(3);
        assert!(Ensemble::new(vec![0.4, 0.4], vec![m2.clone(), m2.clone()]).is_err());
        assert!(Ensemble::new(vec![1.2, -0.2], vec![m2.clone(), m2.clone()]).is_err());
        assert!(Ensemble::new(vec![0.5, 0.5], vec![m2, m3]).is_err());
    }
}
