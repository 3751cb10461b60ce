//! Vertices of `G(n,r,s)`: r-element subsets of `[n]` stored as bit masks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::params::{GraphParams, MAX_GROUND_SET};
use crate::{Error, Result};

/// An element subset of `[n]`, stored as a 128-bit mask (bit `i` set means
/// element `i + 1` is present). Elements are 1-based externally and 0-based
/// internally; the boundary is the parse/format layer.
///
/// Integer order on masks coincides with colexicographic order on subsets,
/// so sorting vertices by mask sorts them in colex order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(u128);

impl Vertex {
    pub const EMPTY: Vertex = Vertex(0);

    pub fn from_mask(mask: u128) -> Self {
        Vertex(mask)
    }

    /// Builds a vertex from 1-based elements; duplicates and elements outside
    /// `[1, 128]` are rejected.
    pub fn from_elements(elements: &[u32]) -> Result<Self> {
        let mut mask = 0u128;
        for &e in elements {
            if e == 0 || e > MAX_GROUND_SET {
                return Err(Error::InvalidVertex(format!(
                    "element {e} outside [1, {MAX_GROUND_SET}]"
                )));
            }
            let bit = 1u128 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidVertex(format!("duplicate element {e}")));
            }
            mask |= bit;
        }
        Ok(Vertex(mask))
    }

    pub fn mask(&self) -> u128 {
        self.0
    }

    /// 1-based elements in ascending order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cardinality() as usize);
        let mut m = self.0;
        while m != 0 {
            let bit = m.trailing_zeros();
            out.push(bit + 1);
            m &= m - 1;
        }
        out
    }

    pub fn cardinality(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(&self, element: u32) -> bool {
        (1..=MAX_GROUND_SET).contains(&element) && self.0 & (1u128 << (element - 1)) != 0
    }

    pub fn intersection_size(&self, other: &Vertex) -> u32 {
        (self.0 & other.0).count_ones()
    }

    pub fn is_disjoint(&self, other: &Vertex) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(&self, other: &Vertex) -> Vertex {
        Vertex(self.0 | other.0)
    }

    /// Checks that this vertex is a valid r-subset of `[n]` for `params`.
    pub fn validate(&self, params: &GraphParams) -> Result<()> {
        if self.cardinality() != params.r {
            return Err(Error::InvalidVertex(format!(
                "{self} has {} elements, expected r = {}",
                self.cardinality(),
                params.r
            )));
        }
        if params.n < MAX_GROUND_SET && self.0 >> params.n != 0 {
            return Err(Error::InvalidVertex(format!(
                "{self} has elements above n = {}",
                params.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems = self.elements();
        let mut first = true;
        for e in elems {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Parses a comma-separated list of strictly increasing 1-based elements.
    fn from_str(s: &str) -> Result<Self> {
        let mut elems = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let e: u32 = part
                .parse()
                .map_err(|_| Error::InvalidVertex(format!("bad element {part:?}")))?;
            if let Some(&last) = elems.last() {
                if e <= last {
                    return Err(Error::InvalidVertex(format!(
                        "elements must be strictly increasing, got {e} after {last}"
                    )));
                }
            }
            elems.push(e);
        }
        Vertex::from_elements(&elems)
    }
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let elems = Vec::<u32>::deserialize(de)?;
        Vertex::from_elements(&elems).map_err(serde::de::Error::custom)
    }
}
