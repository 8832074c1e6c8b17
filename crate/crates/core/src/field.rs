//! Arithmetic in `GF(p^n)`.
//!
//! Field elements reuse [`GroupElement`] over the additive group `Z_p^n`,
//! with coordinates read as polynomial coefficients (constant term first).
//! Only arc predicates and the power-set builders know about multiplication;
//! everything downstream sees a plain abelian group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};

/// A concrete model of `GF(p^n)`: prime, degree, and the monic irreducible
/// used for reduction (coefficients low-degree first, length `n + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    n: usize,
    irreducible: Vec<u64>,
    additive: Group,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// Polynomial helpers over Z_p, coefficients low-degree first, no invariant
// that the leading coefficient is nonzero except where stated.

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let mut r = poly_trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (j, &mc) in m.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + p * p - (lead * mc) % p) % p;
            }
        }
        r.pop();
        r = poly_trim(r);
    }
    r
}

/// True when the monic polynomial (low-degree first, leading coefficient 1)
/// has no monic divisor of degree `1..=deg/2`. Brute force; the fields in
/// scope are tiny.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // all monic polynomials of degree d
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                g.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds `GF(p^n)`. When `irreducible` is omitted the lexicographically
    /// smallest monic irreducible of degree `n` (coefficients compared
    /// constant term first) is selected, so results are reproducible.
    pub fn new(p: u64, n: usize, irreducible: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidModulus("extension degree must be >= 1".into()));
        }
        let irreducible = match irreducible {
            Some(f) => {
                if f.len() != n + 1 || f[n] != 1 || f.iter().any(|&c| c >= p) {
                    return Err(Error::Parse(format!(
                        "expected a monic degree-{n} polynomial with coefficients below {p}"
                    )));
                }
                if !poly_is_irreducible(&f, p) {
                    return Err(Error::NotIrreducible(format!("{f:?}")));
                }
                f
            }
            None => Self::smallest_irreducible(p, n),
        };
        let additive = Group::new(&vec![p; n])?;
        Ok(FieldSpec {
            p,
            n,
            irreducible,
            additive,
        })
    }

    fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
        if n == 1 {
            // x + 0: reduction is just mod p
            return vec![0, 1];
        }
        let count = (p as u128).pow(n as u32);
        for idx in 0..count {
            // lexicographic order on (c_0, c_1, ..., c_{n-1})
            let mut f = vec![0u64; n + 1];
            let mut rest = idx;
            for slot in (0..n).rev() {
                f[slot] = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            f[n] = 1;
            if poly_is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("an irreducible of every degree exists over Z_p");
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `q = p^n`.
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    pub fn irreducible(&self) -> &[u64] {
        &self.irreducible
    }

    /// The additive group `Z_p^n`; this is what the transfer machinery sees.
    pub fn additive_group(&self) -> &Group {
        &self.additive
    }

    pub fn zero(&self) -> GroupElement {
        self.additive.zero()
    }

    pub fn one(&self) -> GroupElement {
        let mut coords = vec![0u64; self.n];
        coords[0] = 1;
        self.additive.element_from(&coords).expect("1 < p")
    }

    /// Field product.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let ai = self.additive.index_of(a)?;
        let bi = self.additive.index_of(b)?;
        let _ = (ai, bi);
        let prod = poly_mul(a.coords(), b.coords(), self.p);
        let rem = poly_rem(&prod, &self.irreducible, self.p);
        let mut coords = rem;
        coords.resize(self.n, 0);
        self.additive.element_from(&coords)
    }

    /// Field power with `a^0 = 1`.
    pub fn pow(&self, a: &GroupElement, mut k: u64) -> Result<GroupElement> {
        self.additive.index_of(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse via `a^{q-2}`.
    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        if self.additive.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        self.pow(a, self.order() as u64 - 2)
    }

    /// The set `{a * x^k : x in F^*}`, optionally with 0 adjoined. Returned
    /// sorted by element index and deduplicated.
    pub fn power_set(
        &self,
        k: u64,
        a: &GroupElement,
        include_zero: bool,
    ) -> Result<Vec<GroupElement>> {
        self.additive.index_of(a)?;
        let mut out = std::collections::BTreeSet::new();
        if include_zero {
            out.insert(self.zero());
        }
        for i in 1..self.order() {
            let x = self.additive.element_of(i)?;
            let y = self.mul(a, &self.pow(&x, k)?)?;
            out.insert(y);
        }
        Ok(out.into_iter().collect())
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FieldSpec", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("irreducible", &self.irreducible)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: u64,
            n: usize,
            irreducible: Option<Vec<u64>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FieldSpec::new(raw.p, raw.n, raw.irreducible).map_err(serde::de::Error::custom)
    }
}
