//! Brute-force ground truth.
//!
//! Depth-first enumeration of all part sequences with prefix pruning: a
//! prefix is abandoned as soon as any completed window violates a rule.
//! Pruning is sound because rules only ever constrain completed windows, so
//! a violated prefix cannot extend to a member. The budget guard is a state
//! count, not wall time, for determinism.

use crate::algebra::GroupVector;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::restriction::{ClassSpec, PartsMode};
use crate::{Count, CountVector};

/// Default enumeration budget (leaf states).
pub const DEFAULT_BUDGET: u128 = 100_000_000;

fn check_budget(alphabet: usize, m: usize, budget: u128) -> Result<()> {
    let mut needed: u128 = 1;
    for _ in 0..m {
        needed = needed.saturating_mul(alphabet as u128);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
    }
    Ok(())
}

fn alphabet_of(group: &Group, spec: &ClassSpec) -> Vec<GroupElement> {
    match spec.parts_mode {
        PartsMode::Weak => group.elements().collect(),
        PartsMode::Nonzero => group.nonzero_elements().collect(),
    }
}

fn dfs_tally(
    group: &Group,
    spec: &ClassSpec,
    alphabet: &[GroupElement],
    prefix: &mut Vec<GroupElement>,
    sum_idx: usize,
    m: usize,
    tally: &mut [u64],
) {
    if prefix.len() == m {
        tally[sum_idx] += 1;
        return;
    }
    for part in alphabet {
        prefix.push(part.clone());
        if spec.prefix_ok(group, prefix) {
            let idx = group.add_indices(sum_idx, group.index_unchecked(part));
            dfs_tally(group, spec, alphabet, prefix, idx, m, tally);
        }
        prefix.pop();
    }
}

/// Exact per-target counts of all `m`-part members of the class, by
/// exhaustive enumeration. `jobs > 1` splits the search by first part; the
/// merge order is fixed, so results are identical regardless of parallelism.
pub fn brute_count_all(
    group: &Group,
    spec: &ClassSpec,
    m: usize,
    budget: u128,
    jobs: usize,
) -> Result<CountVector> {
    spec.validate(group)?;
    let alphabet = alphabet_of(group, spec);
    check_budget(alphabet.len(), m, budget)?;

    let mut tally = vec![0u64; group.order()];
    if m == 0 {
        tally[0] = 1;
    } else if jobs <= 1 || m == 1 {
        let mut prefix = Vec::with_capacity(m);
        dfs_tally(group, spec, &alphabet, &mut prefix, 0, m, &mut tally);
    } else {
        // one task per admissible first part, merged in part order
        let firsts: Vec<GroupElement> = alphabet
            .iter()
            .filter(|p| spec.prefix_ok(group, std::slice::from_ref(p)))
            .cloned()
            .collect();
        let chunk = firsts.len().div_ceil(jobs);
        let partials: Vec<Vec<u64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = firsts
                .chunks(chunk.max(1))
                .map(|chunk| {
                    let alphabet = &alphabet;
                    scope.spawn(move || {
                        let mut local = vec![0u64; group.order()];
                        for first in chunk {
                            let mut prefix = vec![first.clone()];
                            let idx = group.index_unchecked(first);
                            dfs_tally(group, spec, alphabet, &mut prefix, idx, m, &mut local);
                        }
                        local
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for partial in partials {
            for (t, p) in tally.iter_mut().zip(partial) {
                *t += p;
            }
        }
    }
    GroupVector::from_coeffs(group, tally.into_iter().map(Count::from).collect())
}

/// Exact count of `m`-part members of the class summing to `s`.
pub fn brute_count(
    group: &Group,
    spec: &ClassSpec,
    m: usize,
    s: &GroupElement,
    budget: u128,
) -> Result<Count> {
    let all = brute_count_all(group, spec, m, budget, 1)?;
    Ok(all.coeff(s)?.clone())
}

fn dfs_total(
    group: &Group,
    spec: &ClassSpec,
    alphabet: &[GroupElement],
    prefix: &mut Vec<GroupElement>,
    m: usize,
) -> u64 {
    if prefix.len() == m {
        return 1;
    }
    let mut total = 0;
    for part in alphabet {
        prefix.push(part.clone());
        if spec.prefix_ok(group, prefix) {
            total += dfs_total(group, spec, alphabet, prefix, m);
        }
        prefix.pop();
    }
    total
}

/// Number of valid `m`-part sequences regardless of target, counted without
/// any sum bookkeeping. Independent check for the total mass of
/// [`brute_count_all`].
pub fn brute_total(group: &Group, spec: &ClassSpec, m: usize, budget: u128) -> Result<Count> {
    spec.validate(group)?;
    let alphabet = alphabet_of(group, spec);
    check_budget(alphabet.len(), m, budget)?;
    if m == 0 {
        return Ok(Count::from(1));
    }
    let mut prefix = Vec::with_capacity(m);
    Ok(Count::from(dfs_total(group, spec, &alphabet, &mut prefix, m)))
}

/// Exact count over `S_1 x ... x S_m` of tuples summing to `s`.
pub fn brute_subset_count(
    group: &Group,
    subsets: &[Vec<GroupElement>],
    s: &GroupElement,
    budget: u128,
) -> Result<Count> {
    let target = group.index_of(s)?;
    let mut needed: u128 = 1;
    for (j, subset) in subsets.iter().enumerate() {
        if subset.is_empty() {
            return Err(Error::EmptySubset(j));
        }
        for e in subset {
            group.index_of(e)?;
        }
        needed = needed.saturating_mul(subset.len() as u128);
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    fn walk(
        group: &Group,
        subsets: &[Vec<GroupElement>],
        level: usize,
        sum_idx: usize,
        target: usize,
    ) -> u64 {
        if level == subsets.len() {
            return (sum_idx == target) as u64;
        }
        subsets[level]
            .iter()
            .map(|e| {
                let idx = group.add_indices(sum_idx, group.index_unchecked(e));
                walk(group, subsets, level + 1, idx, target)
            })
            .sum()
    }
    Ok(Count::from(walk(group, subsets, 0, 0, target)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: u64) -> Group {
        Group::new(&[k]).unwrap()
    }

    #[test]
    fn table_anchor_values() {
        let z5 = z(5);
        let c = brute_count(
            &z5,
            &ClassSpec::mullen(2),
            4,
            &z5.element_from(&[1]).unwrap(),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(c, Count::from(21));

        let z6 = z(6);
        let c = brute_count(
            &z6,
            &ClassSpec::carlitz(2, false, false),
            4,
            &z6.element_from(&[2]).unwrap(),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(c, Count::from(32));
    }

    #[test]
    fn empty_composition() {
        let z5 = z(5);
        for spec in [ClassSpec::mullen(2), ClassSpec::carlitz(1, true, false)] {
            let all = brute_count_all(&z5, &spec, 0, DEFAULT_BUDGET, 1).unwrap();
            assert_eq!(*all.coeff(&z5.zero()).unwrap(), Count::from(1));
            assert_eq!(all.total(), Count::from(1));
        }
    }

    #[test]
    fn budget_guard() {
        let z6 = z(6);
        let r = brute_count_all(&z6, &ClassSpec::unrestricted(true), 12, 1_000_000, 1);
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn total_matches_tally_sum() {
        let z6 = z(6);
        for spec in [
            ClassSpec::mullen(2),
            ClassSpec::carlitz(2, true, false),
            ClassSpec::window_sum(3, false),
            ClassSpec::carlitz(2, true, true),
        ] {
            for m in 0..=6 {
                let all = brute_count_all(&z6, &spec, m, DEFAULT_BUDGET, 1).unwrap();
                let total = brute_total(&z6, &spec, m, DEFAULT_BUDGET).unwrap();
                assert_eq!(all.total(), total, "m={m}");
            }
        }
    }

    #[test]
    fn parallel_split_is_identical() {
        let z6 = z(6);
        let spec = ClassSpec::carlitz(2, true, false);
        for m in [3usize, 5, 6] {
            let seq = brute_count_all(&z6, &spec, m, DEFAULT_BUDGET, 1).unwrap();
            let par = brute_count_all(&z6, &spec, m, DEFAULT_BUDGET, 4).unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn pruned_equals_unpruned() {
        // the same counts via completely naive odometer enumeration
        let g = z(5);
        let spec = ClassSpec::mullen(2);
        for m in 0..=5usize {
            let pruned = brute_count_all(&g, &spec, m, DEFAULT_BUDGET, 1).unwrap();
            let mut naive = vec![0u64; g.order()];
            let alphabet: Vec<_> = g.elements().collect();
            let total = alphabet.len().pow(m as u32);
            for code in 0..total {
                let mut parts = Vec::with_capacity(m);
                let mut rest = code;
                for _ in 0..m {
                    parts.push(alphabet[rest % alphabet.len()].clone());
                    rest /= alphabet.len();
                }
                if spec.matches(&g, &parts) {
                    let mut idx = 0;
                    for p in &parts {
                        idx = g.add_indices(idx, g.index_unchecked(p));
                    }
                    naive[idx] += 1;
                }
            }
            for (i, &n) in naive.iter().enumerate() {
                assert_eq!(*pruned.coeff_at(i), Count::from(n), "m={m} s={i}");
            }
        }
    }

    #[test]
    fn subset_counts() {
        let z5 = z(5);
        let nz: Vec<_> = z5.nonzero_elements().collect();
        let c = brute_subset_count(
            &z5,
            &[nz.clone(), nz.clone(), nz],
            &z5.zero(),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(c, Count::from(12));

        let z6 = z(6);
        let s1 = vec![z6.element_from(&[1]).unwrap()];
        let s2 = vec![z6.element_from(&[2]).unwrap()];
        let c = brute_subset_count(&z6, &[s1, s2], &z6.element_from(&[3]).unwrap(), DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(c, Count::from(1));

        // squares with zero mod 7, two parts summing to 3: frozen reference
        let z7 = z(7);
        let sq: Vec<_> = [0u64, 1, 2, 4]
            .iter()
            .map(|&v| z7.element_from(&[v]).unwrap())
            .collect();
        let c = brute_subset_count(
            &z7,
            &[sq.clone(), sq],
            &z7.element_from(&[3]).unwrap(),
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(c, Count::from(2));

        let empty: Vec<GroupElement> = vec![];
        assert!(matches!(
            brute_subset_count(&z5, &[empty], &z5.zero(), DEFAULT_BUDGET),
            Err(Error::EmptySubset(0))
        ));
    }
}
