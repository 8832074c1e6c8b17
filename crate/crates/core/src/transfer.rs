//! Transfer-matrix counting.
//!
//! The transfer matrix over `Z[G]` has entry `delta_{|v|}` wherever the arc
//! `u -> v` exists (`|v|` reduced into the group); the start vector carries
//! `delta_{|v|}` on start arcs and the finish vector for block length `b`
//! sums `delta_{|t|}` over terminal stubs. The count of `m`-part
//! compositions of `s` with `m = a*span + b`, `a >= 1`, is the coefficient
//! at `s` of `alpha * T^(a-1) * beta_b`.
//!
//! The walk sum is evaluated generically over any scalar semiring: exact
//! counting instantiates it at `Z[G]` itself, while the multisection
//! crosscheck re-runs the same recursion with each character's
//! double-precision values and averages per the inversion formula.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::ops::{Add, Mul};

use crate::algebra::GroupVector;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::restriction::{PartsMode, RestrictionDigraph};
use crate::{Count, CountVector};

/// Transfer matrix, start vector, and finish vectors of a digraph, stored
/// compactly: every nonzero matrix entry is a single delta, so only the
/// weight element per vertex is kept.
pub struct TransferSystem<'a> {
    digraph: &'a RestrictionDigraph,
    /// Reduced size `|v|` of each recurrent vertex.
    weights: Vec<GroupElement>,
    /// Reduced sizes of the terminal stubs per vertex, grouped by `b`.
    terminal_weights: Vec<Vec<(usize, GroupElement)>>,
}

impl<'a> TransferSystem<'a> {
    pub fn new(digraph: &'a RestrictionDigraph) -> Self {
        let group = digraph.group();
        let weights = digraph
            .recurrent()
            .iter()
            .map(|v| v.size_in(group))
            .collect();
        let terminal_weights = (0..digraph.span())
            .map(|b| {
                digraph
                    .terminal_arcs(b)
                    .unwrap_or(&[])
                    .iter()
                    .map(|(u, t)| (*u, t.size_in(group)))
                    .collect()
            })
            .collect();
        TransferSystem {
            digraph,
            weights,
            terminal_weights,
        }
    }

    pub fn digraph(&self) -> &RestrictionDigraph {
        self.digraph
    }

    /// Weight element of each recurrent vertex.
    pub fn weights(&self) -> &[GroupElement] {
        &self.weights
    }

    /// `alpha * T^(a-1) * beta_b` over an arbitrary scalar, `a >= 1`.
    /// `weigh` maps a weight element to its scalar value; `zero` supplies
    /// the additive identity (the group algebra needs the group to make
    /// one). Row-vector iteration, never an explicit matrix power.
    pub fn evaluate<S, W>(&self, a: usize, b: usize, weigh: W, zero: S) -> Result<S>
    where
        S: Clone + Add<Output = S> + Mul<Output = S>,
        W: Fn(&GroupElement) -> S,
    {
        assert!(a >= 1, "walks need at least one recurrent vertex");
        let n = self.weights.len();
        let terminal = &self.terminal_weights[b];
        if terminal.is_empty() {
            return Err(Error::NoTerminal { b });
        }
        let vertex_scalars: Vec<S> = self.weights.iter().map(&weigh).collect();

        let start: std::collections::BTreeSet<usize> =
            self.digraph.start_arcs().iter().copied().collect();
        let mut row: Vec<S> = (0..n)
            .map(|v| {
                if start.contains(&v) {
                    vertex_scalars[v].clone()
                } else {
                    zero.clone()
                }
            })
            .collect();

        for _ in 1..a {
            let mut acc: Vec<S> = vec![zero.clone(); n];
            for (u, outs) in self.digraph.arcs().iter().enumerate() {
                for &v in outs {
                    acc[v] = acc[v].clone() + row[u].clone();
                }
            }
            row = acc
                .into_iter()
                .enumerate()
                .map(|(v, s)| s * vertex_scalars[v].clone())
                .collect();
        }

        let mut total = zero;
        for (u, w) in terminal {
            total = total + row[*u].clone() * weigh(w);
        }
        Ok(total)
    }

    /// The full `Z[G]` scalar for `m` parts: every per-target count at once.
    pub fn grand_scalar(&self, m: usize) -> Result<CountVector> {
        let group = self.digraph.group();
        let span = self.digraph.span();
        assert!(m >= span, "use the short-composition fallback below span");
        let a = m / span;
        let b = m % span;
        self.evaluate(
            a,
            b,
            |e| GroupVector::<Count>::delta(group, e).expect("weight conforms"),
            GroupVector::zeros(group),
        )
    }

    /// Evaluates the walk generating function at one character tuple.
    pub fn character_value(&self, char_index: usize, m: usize) -> Result<Complex64> {
        let group = self.digraph.group();
        let span = self.digraph.span();
        assert!(m >= span);
        let a = m / span;
        let b = m % span;
        let j = group.character_of(char_index)?;
        self.evaluate(
            a,
            b,
            |e| group.character(&j, e).expect("weight conforms"),
            Complex64::zero(),
        )
    }
}

/// Enumerates the class directly for `0 < m < span`, where no walk
/// representation exists. Only class-backed digraphs can do this.
fn short_counts(digraph: &RestrictionDigraph, m: usize) -> Result<CountVector> {
    let group = digraph.group();
    let spec = digraph.class().ok_or_else(|| {
        Error::Unsupported(format!(
            "custom digraph carries no membership predicate for m = {m} below span {}",
            digraph.span()
        ))
    })?;
    let alphabet: Vec<GroupElement> = match spec.parts_mode {
        PartsMode::Weak => group.elements().collect(),
        PartsMode::Nonzero => group.nonzero_elements().collect(),
    };
    let mut tally = vec![Count::zero(); group.order()];
    let total = alphabet.len().pow(m as u32);
    for code in 0..total {
        let mut parts = Vec::with_capacity(m);
        let mut rest = code;
        for _ in 0..m {
            parts.push(alphabet[rest % alphabet.len()].clone());
            rest /= alphabet.len();
        }
        if spec.matches(group, &parts) {
            let mut idx = 0;
            for p in &parts {
                idx = group.add_indices(idx, group.index_unchecked(p));
            }
            tally[idx] += Count::from(1);
        }
    }
    GroupVector::from_coeffs(group, tally)
}

/// Exact counts of `m`-part compositions for every target at once.
/// `m = 0` counts the empty composition; `0 < m < span` falls back to
/// direct enumeration via the class predicate.
pub fn count_all(digraph: &RestrictionDigraph, m: usize) -> Result<CountVector> {
    let group = digraph.group();
    if m == 0 {
        return GroupVector::delta(group, &group.zero());
    }
    if m < digraph.span() {
        return short_counts(digraph, m);
    }
    let out = TransferSystem::new(digraph).grand_scalar(m)?;
    debug_assert!(out.coeffs().iter().all(|c| c >= &Count::zero()));
    Ok(out)
}

/// Exact count of `m`-part compositions of `s`.
pub fn count(digraph: &RestrictionDigraph, m: usize, s: &GroupElement) -> Result<Count> {
    Ok(count_all(digraph, m)?.coeff(s)?.clone())
}

/// Counts for every `m` in `0..=max_m` from one row-vector sweep per `a`.
/// Errors with [`Error::NoTerminal`] if some required block length has no
/// terminal arcs.
pub fn counts_up_to(digraph: &RestrictionDigraph, max_m: usize) -> Result<Vec<CountVector>> {
    let group = digraph.group();
    let span = digraph.span();
    let sys = TransferSystem::new(digraph);
    let mut out = Vec::with_capacity(max_m + 1);
    out.push(GroupVector::delta(group, &group.zero())?);
    for m in 1..span.min(max_m + 1) {
        out.push(short_counts(digraph, m)?);
    }
    if max_m < span {
        return Ok(out);
    }

    // row = alpha * T^(a-1), advanced once per a; each a serves all b
    let start: std::collections::BTreeSet<usize> = digraph.start_arcs().iter().copied().collect();
    let n = digraph.recurrent().len();
    let deltas: Vec<CountVector> = sys
        .weights()
        .iter()
        .map(|e| GroupVector::delta(group, e).expect("weight conforms"))
        .collect();
    let mut row: Vec<CountVector> = (0..n)
        .map(|v| {
            if start.contains(&v) {
                deltas[v].clone()
            } else {
                GroupVector::zeros(group)
            }
        })
        .collect();

    let max_a = max_m / span;
    for a in 1..=max_a {
        for b in 0..span {
            let m = a * span + b;
            if m < span || m > max_m {
                continue;
            }
            let terminal = digraph.terminal_arcs(b).unwrap_or(&[]);
            if terminal.is_empty() {
                return Err(Error::NoTerminal { b });
            }
            let mut scalar = GroupVector::<Count>::zeros(group);
            for (u, t) in terminal {
                let w = t.size_in(group);
                scalar = scalar.try_add(&row[*u].shift(&w)?)?;
            }
            debug_assert_eq!(out.len(), m);
            out.push(scalar);
        }
        if a < max_a {
            let mut acc: Vec<CountVector> = vec![GroupVector::zeros(group); n];
            for (u, outs) in digraph.arcs().iter().enumerate() {
                for &v in outs {
                    acc[v] = acc[v].try_add(&row[u])?;
                }
            }
            row = acc
                .into_iter()
                .enumerate()
                .map(|(v, s)| s.shift(&sys.weights()[v]).expect("weight conforms"))
                .collect();
        }
    }
    Ok(out)
}

/// Result of the double-precision multisection crosscheck.
#[derive(Clone, Debug)]
pub struct MultisectionCheck {
    /// Character-average estimate before rounding.
    pub estimate: f64,
    /// Exact count from the `Z[G]` path.
    pub exact: Count,
    /// Rounded estimate equals the exact count, and the gap was below 0.5.
    pub agree: bool,
}

/// Evaluates the walk generating function at all `|G|` character tuples with
/// complex doubles, averages per the inversion formula, and compares with
/// the exact count. Refuses counts at or above `2^50`, where doubles could
/// round to the wrong integer, rather than silently degrading.
pub fn multisection_crosscheck(
    digraph: &RestrictionDigraph,
    m: usize,
    s: &GroupElement,
) -> Result<MultisectionCheck> {
    let group = digraph.group();
    let span = digraph.span();
    if m < span {
        return Err(Error::Unsupported(format!(
            "multisection needs a walk representation: m = {m} < span = {span}"
        )));
    }
    let exact = count(digraph, m, s)?;
    if exact >= Count::from(1u64 << 50) {
        return Err(Error::PrecisionRefused(format!(
            "exact count {exact} is at or above 2^50"
        )));
    }
    let sys = TransferSystem::new(digraph);
    let neg_s = group.neg(s)?;
    let mut acc = Complex64::zero();
    for ji in 0..group.order() {
        let j = group.character_of(ji)?;
        let phase = group.character(&j, &neg_s)?;
        acc += phase * sys.character_value(ji, m)?;
    }
    let estimate = acc.re / group.order() as f64;
    let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
    let agree = (estimate - exact_f).abs() < 0.5
        && Count::from(estimate.round() as i64) == exact;
    Ok(MultisectionCheck {
        estimate,
        exact,
        agree,
    })
}
