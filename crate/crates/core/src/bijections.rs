//! Composition bijections.
//!
//! `phi` sends a sequence to its prefix sums in `G`; it maps the
//! nonzero-window-sum family (windows `1..=d`) bijectively onto the
//! weak no-repeat-within-`d+1` family whose first `d` parts are nonzero.
//! The two sequences generally have different sums. Multiplication by a
//! componentwise unit permutes compositions between targets for any class
//! closed under it, which pins `c_m(s)` across invertible targets.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::restriction::{ClassSpec, PartsMode, RestrictionDigraph};
use crate::transfer;

/// Prefix sums: `v_j = u_1 + ... + u_j` in `G`.
pub fn phi(group: &Group, parts: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let mut acc = group.zero();
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        acc = group.add(&acc, p)?;
        out.push(acc.clone());
    }
    Ok(out)
}

/// Consecutive differences, the inverse of [`phi`].
pub fn phi_inv(group: &Group, parts: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let mut prev = group.zero();
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        group.index_of(p)?;
        let diff = group.add(p, &group.neg(&prev)?)?;
        out.push(diff);
        prev = p.clone();
    }
    Ok(out)
}

/// Exhaustive verification that `phi` is a bijection between the two
/// families at the given size.
#[derive(Clone, Debug, Serialize)]
pub struct Prop5Report {
    pub d: usize,
    pub m: usize,
    /// Members of the nonzero-window-sum family with windows `1..=d`.
    pub source_count: u64,
    /// Members of the weak no-repeat family with first `min(d, m)` parts nonzero.
    pub target_count: u64,
    pub maps_into_target: bool,
    pub injective: bool,
    pub bijective: bool,
}

/// Enumerates both families, pushes every source member through `phi`, and
/// checks image membership, injectivity, and the cardinality match.
pub fn check_bijection_prop5(
    group: &Group,
    d: usize,
    m: usize,
    budget: u128,
) -> Result<Prop5Report> {
    let needed = (group.order() as u128).saturating_pow(m as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let source_spec = ClassSpec::mullen(d);
    let target_spec = ClassSpec::carlitz(d, true, true);

    let elements: Vec<GroupElement> = group.elements().collect();
    let mut source_count = 0u64;
    let mut target_count = 0u64;
    let mut images = BTreeSet::new();
    let mut maps_into = true;
    let total = elements.len().pow(m as u32);
    for code in 0..total {
        let mut parts = Vec::with_capacity(m);
        let mut rest = code;
        for _ in 0..m {
            parts.push(elements[rest % elements.len()].clone());
            rest /= elements.len();
        }
        if target_spec.matches(group, &parts) {
            target_count += 1;
        }
        if source_spec.matches(group, &parts) {
            source_count += 1;
            let image = phi(group, &parts)?;
            if !target_spec.matches(group, &image) {
                maps_into = false;
            }
            images.insert(image);
        }
    }
    let injective = images.len() as u64 == source_count;
    Ok(Prop5Report {
        d,
        m,
        source_count,
        target_count,
        maps_into_target: maps_into,
        injective,
        bijective: maps_into && injective && source_count == target_count,
    })
}

/// Which target-count equalities a class certifies.
#[derive(Clone, Debug, Serialize)]
pub struct SIndependenceReport {
    pub m: usize,
    /// Count per target, in element-index order, as decimal strings.
    pub counts: Vec<CountEntry>,
    /// Pairs `(s, 1)` asserted equal, as element displays.
    pub asserted: Vec<String>,
    pub all_hold: bool,
    /// "window-sum-family" (every nonzero target), "multiplication-closed"
    /// (invertible targets only), or "none".
    pub mode: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountEntry {
    pub s: String,
    pub count: String,
}

/// Checks `c_m(s) = c_m(1)`: for the nonzero-window-sum family this holds
/// for every nonzero `s` (a relabeling permutation conjugated through `phi`
/// transports compositions); for any multiplication-closed class it holds
/// whenever `s` has a componentwise ring inverse. No assertion is made for
/// other targets.
pub fn check_s_independence(
    group: &Group,
    spec: &ClassSpec,
    m: usize,
) -> Result<SIndependenceReport> {
    let digraph = RestrictionDigraph::build(group, spec.clone())?;
    let counts = transfer::count_all(&digraph, m)?;
    let one = group.ring_one();
    let reference = counts.coeff(&one)?.clone();

    let mode = if spec.mullen_degree().is_some() {
        "window-sum-family"
    } else if spec.is_multiplication_closed() {
        "multiplication-closed"
    } else {
        "none"
    };

    let mut asserted = Vec::new();
    let mut all_hold = true;
    for s in group.nonzero_elements() {
        let claim = match mode {
            "window-sum-family" => true,
            "multiplication-closed" => group.is_ring_invertible(&s),
            _ => false,
        };
        if claim {
            asserted.push(s.to_string());
            if counts.coeff(&s)? != &reference {
                all_hold = false;
            }
        }
    }
    Ok(SIndependenceReport {
        m,
        counts: (0..group.order())
            .map(|i| CountEntry {
                s: group.element_of(i).unwrap().to_string(),
                count: counts.coeff_at(i).to_string(),
            })
            .collect(),
        asserted,
        all_hold,
        mode: mode.into(),
    })
}

/// Exhaustive check that multiplication by the unit `a` maps `m`-part class
/// members of `s` onto members of `a*s`, for every invertible `a`.
pub fn check_scalar_transport(
    group: &Group,
    spec: &ClassSpec,
    m: usize,
    budget: u128,
) -> Result<bool> {
    if !spec.is_multiplication_closed() {
        return Ok(true);
    }
    let alphabet: Vec<GroupElement> = match spec.parts_mode {
        PartsMode::Weak => group.elements().collect(),
        PartsMode::Nonzero => group.nonzero_elements().collect(),
    };
    let needed = (alphabet.len() as u128).saturating_pow(m as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let units: Vec<GroupElement> = group
        .nonzero_elements()
        .filter(|a| group.is_ring_invertible(a))
        .collect();
    let total = alphabet.len().pow(m as u32);
    for code in 0..total {
        let mut parts = Vec::with_capacity(m);
        let mut rest = code;
        for _ in 0..m {
            parts.push(alphabet[rest % alphabet.len()].clone());
            rest /= alphabet.len();
        }
        if !spec.matches(group, &parts) {
            continue;
        }
        for a in &units {
            let mapped: Vec<GroupElement> = parts
                .iter()
                .map(|p| group.ring_mul(a, p))
                .collect::<Result<_>>()?;
            if !spec.matches(group, &mapped) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
