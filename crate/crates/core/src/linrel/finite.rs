use serde::{Deserialize, Serialize};

use super::{LinRelError, Result};

/// Largest set size the exhaustive check accepts.
pub const MAX_FINITE_SET: usize = 12;

/// Witnesses of the finite-set pullback check. Subsets are listed as sorted
/// element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePullbackReport {
    /// All `R₁`-self-orthogonal subsets of `X₁`.
    pub self_orthogonal_source: Vec<Vec<usize>>,
    /// All `R₂`-self-orthogonal subsets of `X₂`.
    pub self_orthogonal_target: Vec<Vec<usize>>,
    /// `F⁻¹(V)` for each entry of `self_orthogonal_target`, in the same order.
    pub pullbacks: Vec<Vec<usize>>,
    pub passed: bool,
}

/// For `R₁ = (F×F)⁻¹(R₂)`, checks that the `R₁`-self-orthogonal subsets of
/// `X₁ = {0..n1}` are exactly the preimages `F⁻¹(V)` of the `R₂`-self-orthogonal
/// subsets `V` of `X₂ = {0..n2}`.
///
/// A set `U` is `R`-self-orthogonal when `U = {x : (x, y) ∈ R for all y ∈ U}`.
pub fn finite_set_pullback_check(n1: usize, n2: usize, r2: &[(usize, usize)], f: &[usize]) -> Result<FinitePullbackReport> {
    if n1 > MAX_FINITE_SET || n2 > MAX_FINITE_SET {
        return Err(LinRelError::FiniteInstance(format!(
            "sets of size {n1} and {n2} exceed the enumeration limit {MAX_FINITE_SET}"
        )));
    }
    if f.len() != n1 {
        return Err(LinRelError::FiniteInstance(format!("map has {} values for {n1} elements", f.len())));
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= n2) {
        return Err(LinRelError::FiniteInstance(format!("map value {bad} outside the target of size {n2}")));
    }
    if let Some(&(a, b)) = r2.iter().find(|&&(a, b)| a >= n2 || b >= n2) {
        return Err(LinRelError::FiniteInstance(format!("relation pair ({a}, {b}) outside the target")));
    }
    let image: u32 = f.iter().fold(0, |acc, &y| acc | (1 << y));
    if image != full_mask(n2) {
        return Err(LinRelError::NotSurjective {
            rank: image.count_ones() as usize,
            expected: n2,
        });
    }

    // rows2[y] = {y' : (y, y') ∈ R₂}; R₁ is pulled back pointwise.
    let mut rows2 = vec![0u32; n2];
    for &(a, b) in r2 {
        rows2[a] |= 1 << b;
    }
    let rows1: Vec<u32> = (0..n1)
        .map(|x| (0..n1).filter(|&x2| rows2[f[x]] & (1 << f[x2]) != 0).fold(0, |acc, x2| acc | (1 << x2)))
        .collect();

    let source = self_orthogonal_sets(&rows1);
    let target = self_orthogonal_sets(&rows2);
    let pulled: Vec<u32> = target
        .iter()
        .map(|&v| (0..n1).filter(|&x| v & (1 << f[x]) != 0).fold(0, |acc, x| acc | (1 << x)))
        .collect();

    let mut lhs = source.clone();
    let mut rhs = pulled.clone();
    lhs.sort_unstable();
    rhs.sort_unstable();
    rhs.dedup();
    Ok(FinitePullbackReport {
        self_orthogonal_source: source.into_iter().map(elements).collect(),
        self_orthogonal_target: target.into_iter().map(elements).collect(),
        pullbacks: pulled.into_iter().map(elements).collect(),
        passed: lhs == rhs,
    })
}

fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

fn self_orthogonal_sets(rows: &[u32]) -> Vec<u32> {
    let n = rows.len();
    (0..=full_mask(n))
        .filter(|&u| {
            let perp = (0..n).filter(|&x| rows[x] & u == u).fold(0u32, |acc, x| acc | (1 << x));
            perp == u
        })
        .collect()
}

fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn singleton_identity() {
        let report = finite_set_pullback_check(1, 1, &[(0, 0)], &[0]).unwrap();
        assert!(report.passed);
        assert_eq!(report.self_orthogonal_source, vec![vec![0]]);
        assert_eq!(report.self_orthogonal_target, vec![vec![0]]);
    }

    #[test]
    fn constant_map_onto_reflexive_point() {
        let report = finite_set_pullback_check(2, 1, &[(0, 0)], &[0, 0]).unwrap();
        assert!(report.passed);
        assert_eq!(report.self_orthogonal_source, vec![vec![0, 1]]);
        assert_eq!(report.pullbacks, vec![vec![0, 1]]);
    }

    #[test]
    fn empty_relation_has_no_self_orthogonal_sets() {
        // With R empty, U^⊥ is X when U is empty and empty otherwise; neither equals U for X ≠ ∅.
        let report = finite_set_pullback_check(3, 2, &[], &[0, 1, 1]).unwrap();
        assert!(report.passed);
        assert!(report.self_orthogonal_source.is_empty());
    }

    #[test]
    fn non_surjective_map_is_rejected() {
        assert!(matches!(
            finite_set_pullback_check(2, 2, &[], &[0, 0]),
            Err(LinRelError::NotSurjective { .. })
        ));
    }

    #[test]
    fn oversized_instance_is_rejected() {
        let f = vec![0; 13];
        assert!(matches!(
            finite_set_pullback_check(13, 1, &[], &f),
            Err(LinRelError::FiniteInstance(_))
        ));
    }

    #[test]
    fn random_instances_pass() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..50 {
            let n2 = 3;
            let n1 = 5;
            let r2: Vec<(usize, usize)> = (0..n2)
                .flat_map(|a| (0..n2).map(move |b| (a, b)))
                .filter(|_| rng.random_bool(0.5))
                .collect();
            let mut f: Vec<usize> = (0..n1).map(|i| if i < n2 { i } else { rng.random_range(0..n2) }).collect();
            for i in (1..n1).rev() {
                f.swap(i, rng.random_range(0..=i));
            }
            assert!(finite_set_pullback_check(n1, n2, &r2, &f).unwrap().passed);
        }
    }
}
