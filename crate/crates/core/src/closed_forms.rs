//! Closed-form counts and asymptotic constants.
//!
//! The growth law is `c_m(s) ~ A * B^m` per residue `b` of `m` mod the span.
//! `A` is kept as an exact rational whenever the growth constant is an
//! integer root (it is for every built-in class), so cross-checks against
//! the spectral route compare rationals, not accumulated float error. The
//! error-term constant is existence-only and never computed; empirical
//! convergence rates stand in for it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::Count;

/// An exact rational or a float, depending on provenance.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstValue {
    Exact(BigRational),
    Approx(f64),
}

impl ConstValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ConstValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            ConstValue::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            ConstValue::Exact(r) => Some(r),
            ConstValue::Approx(_) => None,
        }
    }
}

impl std::fmt::Display for ConstValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstValue::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ConstValue::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for ConstValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConstValue::Exact(_) => serializer.serialize_str(&self.to_string()),
            ConstValue::Approx(x) => serializer.serialize_f64(*x),
        }
    }
}

/// Where a constant pair came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Corollary1,
    Corollary2Item1,
    Corollary2Item2,
    Corollary2Item3,
    Corollary2Item4,
    Corollary2Item5,
    Theorem3,
    Spectral,
}

/// The pair `(A, B)` of `c_m(s) ~ A * B^m`, labeled with the residue `b` it
/// was derived for and its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticEstimate {
    #[serde(rename = "A")]
    pub a: ConstValue,
    #[serde(rename = "B")]
    pub b_growth: ConstValue,
    pub residue: usize,
    pub source: Source,
}

impl AsymptoticEstimate {
    /// Enforces `A > 0`, `B > 1`.
    pub fn checked(a: ConstValue, b_growth: ConstValue, residue: usize, source: Source) -> Result<Self> {
        let a_pos = match &a {
            ConstValue::Exact(r) => r.is_positive(),
            ConstValue::Approx(x) => *x > 0.0,
        };
        let b_gt1 = match &b_growth {
            ConstValue::Exact(r) => *r > BigRational::one(),
            ConstValue::Approx(x) => *x > 1.0,
        };
        if !a_pos {
            return Err(Error::HypothesisViolated("A must be positive".into()));
        }
        if !b_gt1 {
            return Err(Error::NotGrowing {
                k: b_growth.to_string(),
            });
        }
        Ok(AsymptoticEstimate {
            a,
            b_growth,
            residue,
            source,
        })
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// `x (x-1) ... (x-k+1)`; errors when a factor would drop to zero or below,
/// mirroring the cardinality hypotheses that use it.
pub fn falling_factorial(x: u64, k: u64) -> Result<BigInt> {
    if k > x {
        return Err(Error::HypothesisViolated(format!(
            "falling factorial {x}^({k}) has nonpositive factors"
        )));
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= big(x - i);
    }
    Ok(acc)
}

/// Number of `m`-compositions of `s` with unrestricted nonzero parts:
/// `((|G|-1)^m - (-1)^m) / |G|` for nonzero `s`, with the `+(-1)^m (|G|-1)`
/// variant at zero. Valid for `m >= 0`.
pub fn unrestricted_count(group: &Group, m: usize, s: &GroupElement) -> Result<Count> {
    group.index_of(s)?;
    let n = big(group.order() as u64);
    let base = (&n - BigInt::one()).pow(m as u32);
    let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let numerator = if group.is_zero(s) {
        base + sign * (&n - BigInt::one())
    } else {
        base - sign
    };
    debug_assert!((&numerator % &n).is_zero());
    Ok(numerator / n)
}

/// Number of weak unrestricted `m`-compositions of any fixed target:
/// `|G|^(m-1)`, for `m >= 1`.
pub fn weak_unrestricted_count(group: &Group, m: usize) -> Count {
    assert!(m >= 1, "the weak closed form needs at least one part");
    big(group.order() as u64).pow(m as u32 - 1)
}

/// Constants from uniform digraph degrees: start degree `H`, uniform
/// terminal degree `J`, uniform recurrent outdegree `K`, giving
/// `A = H*J / (|G| * K^(1 + b/span))` and `B = K^(1/span)`. Exact rationals
/// whenever `K` is a perfect `span`-th power.
pub fn corollary1_constants(
    h: u64,
    j: u64,
    k: u64,
    span: usize,
    b: usize,
    order: u64,
) -> Result<AsymptoticEstimate> {
    if k <= 1 {
        return Err(Error::NotGrowing { k: k.to_string() });
    }
    if h == 0 || j == 0 {
        return Err(Error::HypothesisViolated("H and J must be >= 1".into()));
    }
    let root = (1..=k).find(|c| c.checked_pow(span as u32) == Some(k));
    match root {
        Some(c) => {
            // K = c^span exactly, so K^(1+b/span) = c^(span+b)
            let denom = big(order) * big(c).pow((span + b) as u32);
            let a = ratio(big(h) * big(j), denom);
            AsymptoticEstimate::checked(
                ConstValue::Exact(a),
                ConstValue::Exact(BigRational::from(big(c))),
                b,
                Source::Corollary1,
            )
        }
        None => {
            let kf = k as f64;
            let a = (h * j) as f64 / (order as f64 * kf.powf(1.0 + b as f64 / span as f64));
            AsymptoticEstimate::checked(
                ConstValue::Approx(a),
                ConstValue::Approx(kf.powf(1.0 / span as f64)),
                b,
                Source::Corollary1,
            )
        }
    }
}

/// The five listed classes (|G| is the group order, or `q` for item 5):
///
/// 1. weak, no repeat among `d+1` consecutive, `|G| >= d+2`
/// 2. nonzero parts, same restriction, `|G| >= d+3`
/// 3. weak with the first `d` parts nonzero, `|G| >= d+2`
/// 4. weak, windows of `d` have nonzero sum, `|G| >= 3`, `d >= 2`
/// 5. over a field, windows of `d` have product != 1, `q >= 4`, `d >= 2`
pub fn corollary2_constants(item: u8, order: u64, d: u64, b: usize) -> Result<AsymptoticEstimate> {
    let n = order;
    let (a, bgrow, source) = match item {
        1 => {
            if n < d + 2 {
                return Err(Error::HypothesisViolated(format!("need |G| >= {}", d + 2)));
            }
            let a = ratio(falling_factorial(n, d)?, big(n) * big(n - d).pow(d as u32));
            (a, n - d, Source::Corollary2Item1)
        }
        2 => {
            if n < d + 3 {
                return Err(Error::HypothesisViolated(format!("need |G| >= {}", d + 3)));
            }
            let a = ratio(
                falling_factorial(n - 1, d)?,
                big(n) * big(n - 1 - d).pow(d as u32),
            );
            (a, n - 1 - d, Source::Corollary2Item2)
        }
        3 => {
            if n < d + 2 {
                return Err(Error::HypothesisViolated(format!("need |G| >= {}", d + 2)));
            }
            let a = ratio(
                falling_factorial(n - 1, d)?,
                big(n) * big(n - d).pow(d as u32),
            );
            (a, n - d, Source::Corollary2Item3)
        }
        4 => {
            if n < 3 || d < 2 {
                return Err(Error::HypothesisViolated(
                    "need |G| >= 3 and d >= 2".into(),
                ));
            }
            let a = ratio(big(n).pow(d as u32 - 2), big(n - 1).pow(d as u32 - 1));
            (a, n - 1, Source::Corollary2Item4)
        }
        5 => {
            if n < 4 || d < 2 {
                return Err(Error::HypothesisViolated("need q >= 4 and d >= 2".into()));
            }
            let a = ratio(
                big(n - 1).pow(d as u32 - 1),
                big(n) * big(n - 2).pow(d as u32 - 1),
            );
            (a, n - 2, Source::Corollary2Item5)
        }
        other => {
            return Err(Error::Unsupported(format!(
                "there are five listed classes, got item {other}"
            )))
        }
    };
    AsymptoticEstimate::checked(
        ConstValue::Exact(a),
        ConstValue::Exact(BigRational::from(big(bgrow))),
        b,
        source,
    )
}

/// Growth of the nonzero-window-sum family with windows `1..=d`:
/// `A = (1/|G|) (|G|-1)^(falling d) (|G|-d)^(-d)`, `B = |G|-d`. Requires
/// `|G| >= d+2` so that `B > 1`.
pub fn theorem3_constants(order: u64, d: u64, b: usize) -> Result<AsymptoticEstimate> {
    if order < d + 2 {
        return Err(Error::NotGrowing {
            k: format!("{}", order.saturating_sub(d)),
        });
    }
    let a = ratio(
        falling_factorial(order - 1, d)?,
        big(order) * big(order - d).pow(d as u32),
    );
    AsymptoticEstimate::checked(
        ConstValue::Exact(a),
        ConstValue::Exact(BigRational::from(big(order - d))),
        b,
        Source::Theorem3,
    )
}

/// Leading term of the subset-restricted count: `(prod |S_j|) / |G|`.
pub fn theorem1_main_term(subset_sizes: &[usize], order: u64) -> BigRational {
    let mut prod = BigInt::one();
    for &s in subset_sizes {
        prod *= big(s as u64);
    }
    ratio(prod, big(order))
}

/// gcd of all pairwise differences of a subset of `Z_k` equals 1.
pub fn gcd_condition(subset: &[u64], modulus: u64) -> bool {
    debug_assert!(subset.iter().all(|&a| a < modulus));
    let mut sorted: Vec<u64> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut g = 0u64;
    for w in sorted.windows(2) {
        g = num_integer::gcd(g, w[1] - w[0]);
    }
    g == 1
}
