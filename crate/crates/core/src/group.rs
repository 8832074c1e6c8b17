//! Finite abelian groups `G = Z_{k_1} ⊕ … ⊕ Z_{k_r}`: element arithmetic,
//! mixed-radix enumeration, and character evaluation.
//!
//! Elements are tuples of residues. The dense index used everywhere else in
//! the crate is `index = s_1 + k_1*(s_2 + k_2*(…))`, so the first coordinate
//! is the least significant digit and `index_of(zero) == 0`.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite abelian group given by its cyclic moduli, each `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    moduli: Vec<u64>,
    order: usize,
}

/// An element of a [`Group`]: one residue per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

/// Index of a character of `G`; lives in the same coordinate box as the
/// elements. Only the double-precision crosschecks evaluate characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterIndex {
    coords: Vec<u64>,
}

impl Group {
    /// Builds a group from its moduli. Every modulus must be at least 2.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidModulus("empty modulus list".into()));
        }
        let mut order: usize = 1;
        for &k in moduli {
            if k < 2 {
                return Err(Error::InvalidModulus(format!("modulus {k} < 2")));
            }
            order = order
                .checked_mul(k as usize)
                .ok_or_else(|| Error::InvalidModulus("group order overflows".into()))?;
        }
        Ok(Group {
            moduli: moduli.to_vec(),
            order,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of cyclic factors `r`.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// `|G|`, the product of the moduli.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.moduli.len()],
        }
    }

    pub fn is_zero(&self, e: &GroupElement) -> bool {
        e.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, e: &GroupElement) -> Result<()> {
        if e.coords.len() != self.moduli.len() {
            return Err(Error::Shape(format!(
                "element has {} coordinates, group has rank {}",
                e.coords.len(),
                self.moduli.len()
            )));
        }
        for (c, k) in e.coords.iter().zip(&self.moduli) {
            if c >= k {
                return Err(Error::Range(format!("coordinate {c} >= modulus {k}")));
            }
        }
        Ok(())
    }

    /// Validates raw coordinates into an element.
    pub fn element_from(&self, coords: &[u64]) -> Result<GroupElement> {
        let e = GroupElement {
            coords: coords.to_vec(),
        };
        self.check(&e)?;
        Ok(e)
    }

    /// Reduces arbitrary integer coordinates componentwise.
    pub fn element_mod(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.moduli.len() {
            return Err(Error::Shape(format!(
                "got {} coordinates for rank {}",
                coords.len(),
                self.moduli.len()
            )));
        }
        let coords = coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &k)| c.rem_euclid(k as i64) as u64)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Componentwise sum mod `k_t`.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((&x, &y), &k)| (x + y) % k)
            .collect();
        GroupElement { coords }
    }

    /// Additive inverse.
    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &k)| (k - x) % k)
            .collect();
        Ok(GroupElement { coords })
    }

    /// Componentwise product mod `k_t`. Used by the composition bijections;
    /// `a` acts invertibly iff `gcd(a_t, k_t) = 1` for all `t`.
    pub fn ring_mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.moduli)
            .map(|((&x, &y), &k)| (x * y) % k)
            .collect();
        Ok(GroupElement { coords })
    }

    /// The all-ones element, the identity of the componentwise ring product.
    pub fn ring_one(&self) -> GroupElement {
        GroupElement {
            coords: vec![1; self.moduli.len()],
        }
    }

    /// True when every coordinate of `a` is a unit mod its modulus.
    pub fn is_ring_invertible(&self, a: &GroupElement) -> bool {
        a.coords
            .iter()
            .zip(&self.moduli)
            .all(|(&x, &k)| num_integer::gcd(x, k) == 1)
    }

    /// Mixed-radix index of an element, in `0..|G|`.
    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        self.check(e)?;
        Ok(self.index_unchecked(e))
    }

    pub(crate) fn index_unchecked(&self, e: &GroupElement) -> usize {
        let mut idx = 0usize;
        for (&c, &k) in e.coords.iter().zip(&self.moduli).rev() {
            idx = idx * (k as usize) + c as usize;
        }
        idx
    }

    /// Inverse of [`Group::index_of`].
    pub fn element_of(&self, mut index: usize) -> Result<GroupElement> {
        if index >= self.order {
            return Err(Error::Range(format!(
                "index {index} out of range for group of order {}",
                self.order
            )));
        }
        let mut coords = Vec::with_capacity(self.moduli.len());
        for &k in &self.moduli {
            coords.push((index % k as usize) as u64);
            index /= k as usize;
        }
        Ok(GroupElement { coords })
    }

    /// Index arithmetic used by the convolution hot path.
    pub(crate) fn add_indices(&self, mut i: usize, mut j: usize) -> usize {
        let mut idx = 0usize;
        let mut radix = 1usize;
        for &k in &self.moduli {
            let k = k as usize;
            let c = (i % k + j % k) % k;
            idx += c * radix;
            radix *= k;
            i /= k;
            j /= k;
        }
        idx
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element_of(i).expect("index in range"))
    }

    /// Nonzero elements in index order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.elements().skip(1)
    }

    pub fn character_index(&self, coords: &[u64]) -> Result<CharacterIndex> {
        let e = self.element_from(coords)?;
        Ok(CharacterIndex { coords: e.coords })
    }

    /// The `i`-th character index under the same mixed-radix enumeration as
    /// the elements.
    pub fn character_of(&self, index: usize) -> Result<CharacterIndex> {
        let e = self.element_of(index)?;
        Ok(CharacterIndex { coords: e.coords })
    }

    /// Evaluates the character `j` at `s`: `prod_t omega_{k_t}^{j_t s_t}`
    /// with `omega_k = exp(2 pi i / k)`.
    pub fn character(&self, j: &CharacterIndex, s: &GroupElement) -> Result<Complex64> {
        self.check(s)?;
        if j.coords.len() != self.moduli.len() {
            return Err(Error::Shape("character index rank mismatch".into()));
        }
        let mut angle = 0.0f64;
        for ((&jt, &st), &k) in j.coords.iter().zip(&s.coords).zip(&self.moduli) {
            angle += 2.0 * std::f64::consts::PI * ((jt * st) % k) as f64 / k as f64;
        }
        Ok(Complex64::from_polar(1.0, angle))
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl CharacterIndex {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

// Wire formats: a group is {"moduli":[...]}, an element is a bare array.

impl Serialize for Group {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Group", 1)?;
        st.serialize_field("moduli", &self.moduli)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            moduli: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Group::new(&raw.moduli).map_err(serde::de::Error::custom)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}
