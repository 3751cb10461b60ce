//! Finite families of r-subsets over a common ground set, the unit of
//! analysis throughout the crate, plus the on-disk family file format.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::combinatorics::ColexSubsets;
use crate::params::{GraphParams, MAX_GROUND_SET};
use crate::vertex::Vertex;
use crate::{Error, Result};

/// A duplicate-free, colex-sorted set of r-subsets of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    n: u32,
    r: u32,
    members: Vec<Vertex>,
}

impl Family {
    /// Canonicalizes (sorts by colex order, removes duplicates) and validates
    /// that every member is an r-subset of `[n]`.
    pub fn new(n: u32, r: u32, mut members: Vec<Vertex>) -> Result<Self> {
        if n == 0 || n > MAX_GROUND_SET || r > n {
            return Err(Error::InvalidParams(format!(
                "family ground set needs 0 < r <= n <= {MAX_GROUND_SET}, got n={n} r={r}"
            )));
        }
        for v in &members {
            if v.cardinality() != r {
                return Err(Error::InvalidVertex(format!(
                    "member {v} has {} elements, expected r = {r}",
                    v.cardinality()
                )));
            }
            if n < MAX_GROUND_SET && v.mask() >> n != 0 {
                return Err(Error::InvalidVertex(format!(
                    "member {v} has elements above n = {n}"
                )));
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, r, members })
    }

    pub fn empty(n: u32, r: u32) -> Result<Self> {
        Family::new(n, r, Vec::new())
    }

    /// All `C(n, r)` vertices of `G(n, r, s)` in colex order.
    pub fn full_vertex_set(params: &GraphParams) -> Self {
        let members: Vec<Vertex> = ColexSubsets::new(params.n, params.r).collect();
        Family {
            n: params.n,
            r: params.r,
            members,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.members.iter()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.members.binary_search(v).is_ok()
    }

    /// Checks the ground-set context against graph parameters.
    pub fn check_params(&self, params: &GraphParams) -> Result<()> {
        if params.n != self.n || params.r != self.r {
            return Err(Error::InvalidInput(format!(
                "family over n={} r={} used with {params}",
                self.n, self.r
            )));
        }
        Ok(())
    }

    /// True iff every pair of members shares at least `t` elements.
    pub fn is_t_intersecting(&self, t: u32) -> bool {
        for (i, u) in self.members.iter().enumerate() {
            for v in &self.members[i + 1..] {
                if u.intersection_size(v) < t {
                    return false;
                }
            }
        }
        true
    }

    /// True iff some t-set is contained in every member (the family lies in a
    /// "star" of t common elements), i.e. the family is trivial.
    pub fn is_trivial_t_intersecting(&self, t: u32) -> bool {
        if self.members.is_empty() {
            return true;
        }
        let mut common = self.members[0].mask();
        for v in &self.members[1..] {
            common &= v.mask();
        }
        common.count_ones() >= t
    }

    /// Union of all members as an element mask.
    pub fn support_mask(&self) -> u128 {
        self.members.iter().fold(0u128, |m, v| m | v.mask())
    }

    /// Serializes to the family file format: comment header carrying n and r,
    /// then one member per line as comma-separated increasing elements.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# n={} r={}", self.n, self.r);
        for v in &self.members {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    /// Parses the family file format. Duplicate member lines are rejected.
    pub fn parse_file_str(text: &str) -> Result<Self> {
        let mut n: Option<u32> = None;
        let mut r: Option<u32> = None;
        let mut members = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for token in comment.split_whitespace() {
                    if let Some(v) = token.strip_prefix("n=") {
                        n = Some(v.parse().map_err(|_| Error::FamilyFile {
                            line: lineno,
                            msg: format!("bad n value {v:?}"),
                        })?);
                    } else if let Some(v) = token.strip_prefix("r=") {
                        r = Some(v.parse().map_err(|_| Error::FamilyFile {
                            line: lineno,
                            msg: format!("bad r value {v:?}"),
                        })?);
                    }
                }
                continue;
            }
            let v: Vertex = line.parse().map_err(|e| Error::FamilyFile {
                line: lineno,
                msg: format!("{e}"),
            })?;
            if members.contains(&v) {
                return Err(Error::FamilyFile {
                    line: lineno,
                    msg: format!("duplicate member {v}"),
                });
            }
            members.push(v);
        }
        let n = n.ok_or(Error::FamilyFile {
            line: 0,
            msg: "missing '# n=...' header".into(),
        })?;
        let r = r.ok_or(Error::FamilyFile {
            line: 0,
            msg: "missing '# r=...' header".into(),
        })?;
        Family::new(n, r, members)
    }

    pub fn write_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn read_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_file_str(&text)
    }

    /// Members as 1-based element lists, for report serialization.
    pub fn element_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|v| v.elements()).collect()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(elems: &[u32]) -> Vertex {
        Vertex::from_elements(elems).unwrap()
    }

    #[test]
    fn canonicalization() {
        let f = Family::new(6, 2, vec![v(&[3, 4]), v(&[1, 2]), v(&[3, 4])]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.members()[0], v(&[1, 2]));
        assert!(f.contains(&v(&[3, 4])));
        assert!(!f.contains(&v(&[1, 3])));
    }

    #[test]
    fn rejects_wrong_cardinality() {
        assert!(Family::new(6, 2, vec![v(&[1, 2, 3])]).is_err());
        assert!(Family::new(6, 2, vec![v(&[6, 7])]).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let f = Family::new(8, 4, vec![v(&[1, 2, 3, 4]), v(&[1, 2, 7, 8])]).unwrap();
        let text = f.to_file_string();
        assert!(text.starts_with("# n=8 r=4\n"));
        let back = Family::parse_file_str(&text).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn file_rejects_duplicates_and_missing_header() {
        let dup = "# n=6 r=2\n1,2\n1,2\n";
        assert!(Family::parse_file_str(dup).is_err());
        let no_header = "1,2\n";
        assert!(Family::parse_file_str(no_header).is_err());
    }

    #[test]
    fn t_intersecting_checks() {
        let star = Family::new(6, 3, vec![v(&[1, 2, 3]), v(&[1, 2, 4]), v(&[1, 2, 5])]).unwrap();
        assert!(star.is_t_intersecting(2));
        assert!(star.is_trivial_t_intersecting(2));
        let mixed = Family::new(6, 3, vec![v(&[1, 2, 3]), v(&[3, 4, 5])]).unwrap();
        assert!(mixed.is_t_intersecting(1));
        assert!(!mixed.is_t_intersecting(2));
        assert!(mixed.is_trivial_t_intersecting(1)); // both contain 3
                                                     // pairwise 1-intersecting with empty common intersection
        let nontrivial =
            Family::new(6, 3, vec![v(&[1, 2, 3]), v(&[3, 4, 5]), v(&[1, 4, 6])]).unwrap();
        assert!(nontrivial.is_t_intersecting(1));
        assert!(!nontrivial.is_trivial_t_intersecting(1));
    }
}
