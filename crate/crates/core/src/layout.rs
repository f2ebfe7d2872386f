//! Tensor-factor bookkeeping: which subsystems exist, how large each one is,
//! and how composite indices decompose into per-subsystem digits.
//!
//! Composite indices are big-endian in label order: the first label is the
//! most significant factor, so on qubits `|b_A b_B b_C b_D⟩` has index
//! `8 b_A + 4 b_B + 2 b_C + b_D`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Largest total Hilbert-space dimension any operator may have.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new<S: AsRef<str>>(labels: &[S], dims: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Layout("layout needs at least one subsystem".into()));
        }
        if labels.len() != dims.len() {
            return Err(Error::Layout(format!(
                "{} labels but {} dimensions",
                labels.len(),
                dims.len()
            )));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Layout(format!("local dimension {d} is below 2")));
        }
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::Layout(format!("duplicate labels in {labels:?}")));
        }
        let mut total: usize = 1;
        for &d in dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_DIM)
                .ok_or_else(|| {
                    Error::Capacity(format!("total dimension exceeds cap of {MAX_DIM}"))
                })?;
        }
        Ok(Self {
            labels,
            dims: dims.to_vec(),
        })
    }

    /// Every subsystem has the same local dimension `d`.
    pub fn uniform<S: AsRef<str>>(labels: &[S], d: usize) -> Result<Self> {
        Self::new(labels, &vec![d; labels.len()])
    }

    pub fn qubits<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::uniform(labels, 2)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Argument(format!("unknown subsystem label {label:?}")))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Index weight of each subsystem's digit in a composite index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn index_of_digits(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&dig, &d)| acc * d + dig)
    }

    /// Layout of `self` followed by `other`, as produced by a Kronecker product.
    pub fn concat(&self, other: &SubsystemLayout) -> Result<Self> {
        let labels: Vec<&String> = self.labels.iter().chain(&other.labels).collect();
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        Self::new(&labels, &dims)
    }

    /// Sub-layout restricted to `positions`, kept in layout order.
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let labels: Vec<&String> = sorted.iter().map(|&p| &self.labels[p]).collect();
        let dims: Vec<usize> = sorted.iter().map(|&p| self.dims[p]).collect();
        Self::new(&labels, &dims)
    }

    /// Resolve a set of labels into sorted positions, rejecting unknown or empty sets.
    pub fn positions_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::Argument("empty subsystem set".into()));
        }
        let mut out = labels
            .iter()
            .map(|l| self.position(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Index contribution of the subsystems at `positions` for every
    /// composite index. Used to split an index into a selected part and the rest.
    pub(crate) fn partial_offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        (0..self.total_dim())
            .map(|idx| {
                let digits = self.digits(idx);
                positions.iter().map(|&p| digits[p] * strides[p]).sum()
            })
            .collect()
    }
}

impl fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}[{d}]"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A bipartition of a layout's subsystems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    left: BTreeSet<String>,
    right: BTreeSet<String>,
}

impl Cut {
    pub fn new<S: AsRef<str>>(layout: &SubsystemLayout, left: &[S], right: &[S]) -> Result<Self> {
        let left: BTreeSet<String> = left.iter().map(|s| s.as_ref().to_owned()).collect();
        let right: BTreeSet<String> = right.iter().map(|s| s.as_ref().to_owned()).collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::Argument("both sides of a cut must be nonempty".into()));
        }
        if !left.is_disjoint(&right) {
            return Err(Error::Argument("cut sides overlap".into()));
        }
        for l in left.iter().chain(&right) {
            if !layout.contains(l) {
                return Err(Error::Argument(format!("cut names unknown subsystem {l:?}")));
            }
        }
        if left.len() + right.len() != layout.len() {
            return Err(Error::Argument("cut does not cover every subsystem".into()));
        }
        Ok(Self { left, right })
    }

    /// `left` against everything else.
    pub fn split_off<S: AsRef<str>>(layout: &SubsystemLayout, left: &[S]) -> Result<Self> {
        let left_set: BTreeSet<&str> = left.iter().map(|s| s.as_ref()).collect();
        let right: Vec<&str> = layout
            .labels()
            .iter()
            .map(String::as_str)
            .filter(|l| !left_set.contains(l))
            .collect();
        let left: Vec<&str> = left_set.into_iter().collect();
        Self::new(layout, &left, &right)
    }

    /// Parse `"AB:CD"` (single-character labels) or `"A1,B1:C1,D"`.
    pub fn parse(layout: &SubsystemLayout, text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once(':')
            .ok_or_else(|| Error::Argument(format!("cut {text:?} has no ':' separator")))?;
        let side = |s: &str| -> Vec<String> {
            if s.contains(',') {
                s.split(',').map(|x| x.trim().to_owned()).collect()
            } else {
                s.chars().map(|c| c.to_string()).collect()
            }
        };
        Self::new(layout, &side(l), &side(r))
    }

    pub fn left(&self) -> &BTreeSet<String> {
        &self.left
    }

    pub fn right(&self) -> &BTreeSet<String> {
        &self.right
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn validate(&self, layout: &SubsystemLayout) -> Result<()> {
        let left: Vec<&String> = self.left.iter().collect();
        let right: Vec<&String> = self.right.iter().collect();
        Self::new(layout, &left, &right).map(|_| ())
    }

    /// The three 2:2 cuts of a four-party layout, in the order AB:CD, AC:BD, AD:BC.
    pub fn two_two_cuts(layout: &SubsystemLayout) -> Result<Vec<Self>> {
        let l = four_labels(layout)?;
        [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]]
            .iter()
            .map(|p| Self::new(layout, &[l[p[0]], l[p[1]]], &[l[p[2]], l[p[3]]]))
            .collect()
    }

    /// The four 1:3 cuts of a four-party layout.
    pub fn one_three_cuts(layout: &SubsystemLayout) -> Result<Vec<Self>> {
        let l = four_labels(layout)?;
        (0..4).map(|k| Self::split_off(layout, &[l[k]])).collect()
    }
}

fn four_labels(layout: &SubsystemLayout) -> Result<[&str; 4]> {
    match layout.labels() {
        [a, b, c, d] => Ok([a, b, c, d]),
        other => Err(Error::Argument(format!(
            "expected four subsystems, found {}",
            other.len()
        ))),
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| {
            if s.iter().all(|l| l.chars().count() == 1) {
                s.iter().map(String::as_str).collect::<String>()
            } else {
                s.iter().map(String::as_str).collect::<Vec<_>>().join(",")
            }
        };
        write!(f, "{}:{}", join(&self.left), join(&self.right))
    }
}

/// A relabeling of subsystems: the content of subsystem `x` moves to
/// subsystem `mapping[x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMap {
    mapping: BTreeMap<String, String>,
}

impl PermutationMap {
    pub fn identity(layout: &SubsystemLayout) -> Self {
        Self {
            mapping: layout
                .labels()
                .iter()
                .map(|l| (l.clone(), l.clone()))
                .collect(),
        }
    }

    /// Build from explicit `(from, to)` pairs; labels not mentioned stay fixed.
    pub fn from_pairs<S: AsRef<str>>(layout: &SubsystemLayout, pairs: &[(S, S)]) -> Result<Self> {
        let mut perm = Self::identity(layout);
        for (from, to) in pairs {
            let (from, to) = (from.as_ref(), to.as_ref());
            if !layout.contains(from) || !layout.contains(to) {
                return Err(Error::Argument(format!("unknown label in {from}->{to}")));
            }
            perm.mapping.insert(from.to_owned(), to.to_owned());
        }
        perm.validate(layout)?;
        Ok(perm)
    }

    pub fn swap(layout: &SubsystemLayout, a: &str, b: &str) -> Result<Self> {
        Self::from_pairs(layout, &[(a, b), (b, a)])
    }

    /// `images[k]` is where the k-th subsystem of the layout is sent.
    pub fn from_images<S: AsRef<str>>(layout: &SubsystemLayout, images: &[S]) -> Result<Self> {
        if images.len() != layout.len() {
            return Err(Error::Argument("image list length differs from layout".into()));
        }
        let pairs: Vec<(&str, &str)> = layout
            .labels()
            .iter()
            .map(String::as_str)
            .zip(images.iter().map(|s| s.as_ref()))
            .collect();
        Self::from_pairs(layout, &pairs)
    }

    /// All permutations of the layout's subsystems, including the identity.
    pub fn all(layout: &SubsystemLayout) -> Vec<Self> {
        let n = layout.len();
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..n).collect();
        permutations(&mut idx, 0, &mut |p| {
            let images: Vec<&String> = p.iter().map(|&k| &layout.labels()[k]).collect();
            if let Ok(perm) = Self::from_images(layout, &images) {
                out.push(perm);
            }
        });
        out
    }

    pub fn image(&self, label: &str) -> Option<&str> {
        self.mapping.get(label).map(String::as_str)
    }

    pub fn inverse(&self) -> Self {
        Self {
            mapping: self
                .mapping
                .iter()
                .map(|(k, v)| (v.clone(), k.clone()))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|(k, v)| k == v)
    }

    pub fn validate(&self, layout: &SubsystemLayout) -> Result<()> {
        if self.mapping.len() != layout.len() {
            return Err(Error::Argument("permutation does not cover the layout".into()));
        }
        let images: BTreeSet<&String> = self.mapping.values().collect();
        if images.len() != self.mapping.len() {
            return Err(Error::Argument("permutation is not a bijection".into()));
        }
        for (from, to) in &self.mapping {
            let (df, dt) = (layout.dim_of(from)?, layout.dim_of(to)?);
            if df != dt {
                return Err(Error::Layout(format!(
                    "cannot map {from}[{df}] onto {to}[{dt}]"
                )));
            }
        }
        Ok(())
    }

    /// For each layout position, the position its content moves to.
    pub(crate) fn position_map(&self, layout: &SubsystemLayout) -> Result<Vec<usize>> {
        self.validate(layout)?;
        layout
            .labels()
            .iter()
            .map(|l| layout.position(&self.mapping[l]))
            .collect()
    }
}

impl fmt::Display for PermutationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let moved: Vec<String> = self
            .mapping
            .iter()
            .filter(|(k, v)| k != v)
            .map(|(k, v)| format!("{k}->{v}"))
            .collect();
        if moved.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", moved.join(" "))
        }
    }
}

fn permutations(idx: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        visit(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permutations(idx, k + 1, visit);
        idx.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> SubsystemLayout {
        SubsystemLayout::qubits(&["A", "B", "C", "D"]).unwrap()
    }

    #[test]
    fn big_endian_digits() {
        let l = abcd();
        assert_eq!(l.strides(), vec![8, 4, 2, 1]);
        assert_eq!(l.digits(0b1010), vec![1, 0, 1, 0]);
        assert_eq!(l.index_of_digits(&[0, 0, 1, 1]), 3);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(
            SubsystemLayout::uniform(&["a", "b", "c", "d", "e", "f"], 5),
            Err(Error::Capacity(_))
        ));
        assert!(SubsystemLayout::uniform(&["A", "B", "C", "D"], 5).is_ok());
        assert!(SubsystemLayout::qubits(&(0..12).map(|k| k.to_string()).collect::<Vec<_>>()).is_ok());
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(SubsystemLayout::new::<&str>(&[], &[]).is_err());
        assert!(SubsystemLayout::new(&["A"], &[1]).is_err());
        assert!(SubsystemLayout::new(&["A", "A"], &[2, 2]).is_err());
        assert!(SubsystemLayout::new(&["A", "B"], &[2]).is_err());
    }

    #[test]
    fn cut_parsing_and_validation() {
        let l = abcd();
        let c = Cut::parse(&l, "AB:CD").unwrap();
        assert_eq!(c.to_string(), "AB:CD");
        assert!(Cut::parse(&l, "AB:C").is_err());
        assert!(Cut::parse(&l, "AB:BCD").is_err());
        assert!(Cut::parse(&l, "ABCD:").is_err());
        assert!(Cut::parse(&l, "AX:CD").is_err());
        assert_eq!(Cut::two_two_cuts(&l).unwrap().len(), 3);
        assert_eq!(Cut::one_three_cuts(&l).unwrap()[2].to_string(), "C:ABD");
    }

    #[test]
    fn permutation_checks() {
        let l = SubsystemLayout::new(&["A", "B", "C"], &[2, 2, 3]).unwrap();
        assert!(matches!(PermutationMap::swap(&l, "A", "C"), Err(Error::Layout(_))));
        assert!(PermutationMap::from_pairs(&l, &[("A", "B")]).is_err());
        assert_eq!(PermutationMap::all(&abcd()).len(), 24);
        let p = PermutationMap::from_images(&abcd(), &["B", "C", "A", "D"]).unwrap();
        assert_eq!(p.inverse().image("B"), Some("A"));
        assert_eq!(p.position_map(&abcd()).unwrap(), vec![1, 2, 0, 3]);
    }
}
