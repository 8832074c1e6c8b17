//! Exact arithmetic in the group algebra `Z[G]`.
//!
//! A [`GroupVector`] is a dense coefficient array indexed by the mixed-radix
//! element order; multiplication is convolution over `G`, which on counting
//! vectors multiplies the underlying generating functions with all exponents
//! reduced into the group. Coefficients are generic so the same structure
//! carries exact big integers, machine integers in tests, or rationals.

use num_traits::Zero;
use std::ops::{Add, AddAssign, Mul};

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::Count;

/// Dense element of the group algebra with coefficients in `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupVector<T> {
    group: Group,
    coeffs: Vec<T>,
}

impl<T> GroupVector<T> {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff_at(&self, index: usize) -> &T {
        &self.coeffs[index]
    }

    /// Coefficient of the group element `e`.
    pub fn coeff(&self, e: &GroupElement) -> Result<&T> {
        Ok(&self.coeffs[self.group.index_of(e)?])
    }
}

impl<T: Clone + Zero> GroupVector<T> {
    pub fn zeros(group: &Group) -> Self {
        GroupVector {
            group: group.clone(),
            coeffs: vec![T::zero(); group.order()],
        }
    }

    pub fn from_coeffs(group: &Group, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Shape(format!(
                "{} coefficients for group of order {}",
                coeffs.len(),
                group.order()
            )));
        }
        Ok(GroupVector {
            group: group.clone(),
            coeffs,
        })
    }
}

impl<T: Clone + Zero + num_traits::One> GroupVector<T> {
    /// The basis vector `delta_e`: coefficient 1 at `e`, 0 elsewhere.
    /// `delta_0` is the multiplicative identity of the algebra.
    pub fn delta(group: &Group, e: &GroupElement) -> Result<Self> {
        let idx = group.index_of(e)?;
        let mut v = Self::zeros(group);
        v.coeffs[idx] = T::one();
        Ok(v)
    }
}

impl<T> GroupVector<T>
where
    T: Clone + Zero + AddAssign + Mul<Output = T>,
{
    /// Exact componentwise sum.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Shape("group mismatch in algebra addition".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let mut c = a.clone();
                c += b.clone();
                c
            })
            .collect();
        Ok(GroupVector {
            group: self.group.clone(),
            coeffs,
        })
    }

    /// Convolution over `G`: `(u*v)[s] = sum_{a+b=s} u[a] v[b]`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Shape("group mismatch in convolution".into()));
        }
        let n = self.group.order();
        let mut coeffs = vec![T::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let k = self.group.add_indices(i, j);
                coeffs[k] += self.coeffs[i].clone() * other.coeffs[j].clone();
            }
        }
        Ok(GroupVector {
            group: self.group.clone(),
            coeffs,
        })
    }

    /// Convolution with `delta_e`, i.e. a cyclic index shift by `e`.
    pub fn shift(&self, e: &GroupElement) -> Result<Self> {
        let ei = self.group.index_of(e)?;
        let n = self.group.order();
        let mut coeffs = vec![T::zero(); n];
        for i in 0..n {
            coeffs[self.group.add_indices(i, ei)] = self.coeffs[i].clone();
        }
        Ok(GroupVector {
            group: self.group.clone(),
            coeffs,
        })
    }

    /// Sum of all coefficients (evaluation at the trivial character).
    pub fn total(&self) -> T {
        let mut t = T::zero();
        for c in &self.coeffs {
            t += c.clone();
        }
        t
    }
}

// Operator forms used by the generic walk evaluation; they panic on group
// mismatch, which internal callers guarantee never happens. Fallible callers
// go through `try_add`/`try_mul`.
impl<T> Add for GroupVector<T>
where
    T: Clone + Zero + AddAssign + Mul<Output = T>,
{
    type Output = GroupVector<T>;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("group mismatch")
    }
}

impl<T> Mul for GroupVector<T>
where
    T: Clone + Zero + AddAssign + Mul<Output = T>,
{
    type Output = GroupVector<T>;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("group mismatch")
    }
}

impl GroupVector<Count> {
    /// Wire format: `{"moduli":[...],"coeffs":["<decimal>",...]}`. Decimal
    /// strings keep arbitrary-precision counts safe in JSON consumers.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "moduli": self.group.moduli(),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let moduli: Vec<u64> = value
            .get("moduli")
            .and_then(|m| serde_json::from_value(m.clone()).ok())
            .ok_or_else(|| Error::Parse("missing or malformed \"moduli\"".into()))?;
        let group = Group::new(&moduli)?;
        let raw: Vec<String> = value
            .get("coeffs")
            .and_then(|c| serde_json::from_value(c.clone()).ok())
            .ok_or_else(|| Error::Parse("missing or malformed \"coeffs\"".into()))?;
        let coeffs: Vec<Count> = raw
            .iter()
            .map(|s| {
                s.parse::<Count>()
                    .map_err(|_| Error::Parse(format!("bad integer literal {s:?}")))
            })
            .collect::<Result<_>>()?;
        Self::from_coeffs(&group, coeffs)
    }
}
