//! Iterated semidirect products `U_i` (integer labels), `H_i` (labels mod an
//! even `n`) and `W_i` (labels mod 2).
//!
//! An element of height `i` is a complete binary tree with `2^i - 1`
//! internal nodes, stored breadth-first: the root is at index 0 and the
//! children of node `k` sit at `2k + 1` and `2k + 2`. Writing an element as
//! `(left, right, x)` with `x` the root label, the product is
//!
//! ```text
//! (a, b, x)(c, d, y) = (ac, bd, x + y)   if x is even
//! (a, b, x)(c, d, y) = (ad, bc, x + y)   if x is odd
//! ```
//!
//! Finite labels are kept in `[0, n)` after every operation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("height mismatch: {left} vs {right}")]
    HeightMismatch { left: u32, right: u32 },
    #[error("group mismatch: {left} vs {right}")]
    SpecMismatch { left: GroupSpec, right: GroupSpec },
    #[error("invalid modulus {0}: must be 2 or an even number greater than 2")]
    InvalidModulus(u64),
    #[error("slot {slot} out of range 1..={width}")]
    SlotOutOfRange { slot: usize, width: usize },
    #[error("width {width} is not a power of two addressing internal nodes of a height-{height} tree")]
    InvalidWidth { width: usize, height: u32 },
    #[error("the height-0 group has no root label")]
    NoRoot,
    #[error("operation requires an element of U (infinite modulus), got {0}")]
    NotInfinite(GroupSpec),
    #[error("cannot reduce {from} to {to}")]
    InvalidTransition { from: GroupSpec, to: GroupSpec },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("bracket vector must be non-empty with a power-of-two length, got {0}")]
    BracketLength(usize),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// Label ring of a group family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modulus {
    /// Integer labels, the groups `U_i`.
    Infinite,
    /// Labels mod `n`: `W_i` for `n = 2`, `H_i` otherwise.
    Finite(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    height: u32,
    modulus: Modulus,
}

impl GroupSpec {
    pub fn new(height: u32, modulus: Modulus) -> Result<Self, GroupError> {
        if let Modulus::Finite(n) = modulus {
            if n < 2 || n % 2 != 0 {
                return Err(GroupError::InvalidModulus(n));
            }
        }
        Ok(Self { height, modulus })
    }

    pub fn u(height: u32) -> Self {
        Self { height, modulus: Modulus::Infinite }
    }

    pub fn w(height: u32) -> Self {
        Self { height, modulus: Modulus::Finite(2) }
    }

    pub fn h(height: u32, n: u64) -> Result<Self, GroupError> {
        Self::new(height, Modulus::Finite(n))
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Number of internal nodes, `2^height - 1`.
    pub fn dim(&self) -> usize {
        (1usize << self.height) - 1
    }

    pub fn with_height(&self, height: u32) -> Self {
        Self { height, modulus: self.modulus }
    }

    pub fn with_modulus(&self, modulus: Modulus) -> Result<Self, GroupError> {
        Self::new(self.height, modulus)
    }

    /// Group order, `None` for `U` or when it overflows `u128`.
    pub fn order(&self) -> Option<u128> {
        match self.modulus {
            Modulus::Infinite => None,
            Modulus::Finite(n) => {
                let mut acc: u128 = 1;
                for _ in 0..self.dim() {
                    acc = acc.checked_mul(n as u128)?;
                }
                Some(acc)
            }
        }
    }

    fn reduce(&self, x: i64) -> i64 {
        match self.modulus {
            Modulus::Infinite => x,
            Modulus::Finite(n) => x.rem_euclid(n as i64),
        }
    }

    fn tag(&self) -> String {
        match self.modulus {
            Modulus::Infinite => "U".to_string(),
            Modulus::Finite(2) => "W".to_string(),
            Modulus::Finite(n) => format!("H{n}"),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tag(), self.height)
    }
}

/// Constructor shorthands for [`GroupElement::make`].
#[derive(Debug, Clone)]
pub enum ElementKind {
    Identity,
    /// `X(x)`: `x` at the root, zeros elsewhere.
    X(i64),
    /// `X(r; l)`: a single 1 at the `slot`-th node (1-based) of depth `log2(width)`.
    XSlot { slot: usize, width: usize },
    /// `X(x_1, ..., x_l)`: the given values on the nodes of depth `log2(l)`.
    XVector(Vec<i64>),
    Bracket(GroupElement, GroupElement),
    BracketVector(Vec<GroupElement>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    spec: GroupSpec,
    labels: Vec<i64>,
}

impl GroupElement {
    pub fn identity(spec: GroupSpec) -> Self {
        Self { spec, labels: vec![0; spec.dim()] }
    }

    /// Builds an element from breadth-first labels, reducing them by the modulus.
    pub fn from_labels(spec: GroupSpec, labels: Vec<i64>) -> Result<Self, GroupError> {
        if labels.len() != spec.dim() {
            return Err(GroupError::LabelCount { expected: spec.dim(), got: labels.len() });
        }
        let labels = labels.into_iter().map(|x| spec.reduce(x)).collect();
        Ok(Self { spec, labels })
    }

    pub fn make(spec: GroupSpec, kind: ElementKind) -> Result<Self, GroupError> {
        match kind {
            ElementKind::Identity => Ok(Self::identity(spec)),
            ElementKind::X(x) => Self::x(spec, x),
            ElementKind::XSlot { slot, width } => Self::x_slot(spec, slot, width),
            ElementKind::XVector(values) => Self::x_vector(spec, &values),
            ElementKind::Bracket(left, right) => {
                let out = Self::bracket(&left, &right)?;
                if out.spec != spec {
                    return Err(GroupError::SpecMismatch { left: spec, right: out.spec });
                }
                Ok(out)
            }
            ElementKind::BracketVector(parts) => {
                let out = Self::bracket_vector(&parts)?;
                if out.spec != spec {
                    return Err(GroupError::SpecMismatch { left: spec, right: out.spec });
                }
                Ok(out)
            }
        }
    }

    pub fn x(spec: GroupSpec, value: i64) -> Result<Self, GroupError> {
        if spec.height == 0 {
            return Err(GroupError::NoRoot);
        }
        let mut out = Self::identity(spec);
        out.labels[0] = spec.reduce(value);
        Ok(out)
    }

    pub fn x_vector(spec: GroupSpec, values: &[i64]) -> Result<Self, GroupError> {
        let width = values.len();
        let depth = width_depth(width, spec.height)?;
        let mut out = Self::identity(spec);
        let start = (1usize << depth) - 1;
        for (k, &v) in values.iter().enumerate() {
            out.labels[start + k] = spec.reduce(v);
        }
        Ok(out)
    }

    pub fn x_slot(spec: GroupSpec, slot: usize, width: usize) -> Result<Self, GroupError> {
        let depth = width_depth(width, spec.height)?;
        if slot == 0 || slot > width {
            return Err(GroupError::SlotOutOfRange { slot, width });
        }
        let mut out = Self::identity(spec);
        out.labels[(1usize << depth) - 1 + slot - 1] = spec.reduce(1);
        Ok(out)
    }

    /// `[left, right] = (left, right, 0)`.
    pub fn bracket(left: &Self, right: &Self) -> Result<Self, GroupError> {
        if left.spec != right.spec {
            return Err(GroupError::SpecMismatch { left: left.spec, right: right.spec });
        }
        Self::bracket_vector(&[left.clone(), right.clone()])
    }

    /// `[a_1, ..., a_l]` for `l = 2^k`, nesting brackets pairwise.
    pub fn bracket_vector(parts: &[Self]) -> Result<Self, GroupError> {
        let width = parts.len();
        if width == 0 || !width.is_power_of_two() {
            return Err(GroupError::BracketLength(width));
        }
        let inner = parts[0].spec;
        if let Some(bad) = parts.iter().find(|p| p.spec != inner) {
            return Err(GroupError::SpecMismatch { left: inner, right: bad.spec });
        }
        let k = width.trailing_zeros();
        let spec = inner.with_height(inner.height + k);
        let mut labels = vec![0; spec.dim()];
        // Level k + t of the result is the concatenation of level t of every part.
        for t in 0..inner.height {
            let level_len = 1usize << t;
            let src = level_len - 1;
            let dst = (1usize << (k + t)) - 1;
            for (p, part) in parts.iter().enumerate() {
                labels[dst + p * level_len..dst + (p + 1) * level_len]
                    .copy_from_slice(&part.labels[src..src + level_len]);
            }
        }
        Ok(Self { spec, labels })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn height(&self) -> u32 {
        self.spec.height
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn root_label(&self) -> Option<i64> {
        self.labels.first().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&x| x == 0)
    }

    /// The `index`-th (0-based, left to right) subtree rooted at `depth`.
    pub fn subtree(&self, depth: u32, index: usize) -> Result<Self, GroupError> {
        if depth > self.spec.height {
            return Err(GroupError::InvalidWidth { width: 1 << depth, height: self.spec.height });
        }
        if index >= (1usize << depth) {
            return Err(GroupError::SlotOutOfRange { slot: index + 1, width: 1 << depth });
        }
        let spec = self.spec.with_height(self.spec.height - depth);
        let root = (1usize << depth) - 1 + index;
        let mut labels = Vec::with_capacity(spec.dim());
        for t in 0..spec.height {
            let start = ((root + 1) << t) - 1;
            labels.extend_from_slice(&self.labels[start..start + (1usize << t)]);
        }
        Ok(Self { spec, labels })
    }

    /// The left and right subtrees of the root.
    pub fn children(&self) -> Result<(Self, Self), GroupError> {
        if self.spec.height == 0 {
            return Err(GroupError::NoRoot);
        }
        Ok((self.subtree(1, 0)?, self.subtree(1, 1)?))
    }

    /// True when every node above `depth` is labelled 0, i.e. the element is a
    /// bracket vector of width `2^depth`.
    pub fn is_zero_above(&self, depth: u32) -> bool {
        let end = ((1usize << depth.min(self.spec.height)) - 1).min(self.labels.len());
        self.labels[..end].iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        if self.spec != other.spec {
            return Err(GroupError::SpecMismatch { left: self.spec, right: other.spec });
        }
        let mut out = vec![0; self.labels.len()];
        if !out.is_empty() {
            mul_into(&self.spec, &self.labels, 0, &other.labels, 0, &mut out, 0);
        }
        Ok(Self { spec: self.spec, labels: out })
    }

    pub fn inverse(&self) -> Self {
        let mut out = vec![0; self.labels.len()];
        if !out.is_empty() {
            inv_into(&self.spec, &self.labels, 0, &mut out, 0);
        }
        Self { spec: self.spec, labels: out }
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.spec);
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base).expect("same spec");
        }
        acc
    }

    /// Coordinate-wise reduction `U -> H`, `U -> W` or `H -> W`.
    pub fn reduce_modulus(&self, target: GroupSpec) -> Result<Self, GroupError> {
        let invalid = GroupError::InvalidTransition { from: self.spec, to: target };
        if target.height != self.spec.height {
            return Err(invalid);
        }
        match (self.spec.modulus, target.modulus) {
            (a, b) if a == b => Ok(self.clone()),
            (Modulus::Infinite, Modulus::Finite(_)) => Self::from_labels(target, self.labels.clone()),
            (Modulus::Finite(n), Modulus::Finite(m)) if n % m == 0 => {
                Self::from_labels(target, self.labels.clone())
            }
            _ => Err(invalid),
        }
    }

    /// Reinterprets the (canonical) labels as an element of `U`.
    pub fn embed_in_u(&self) -> Self {
        Self { spec: GroupSpec::u(self.spec.height), labels: self.labels.clone() }
    }

    /// Membership in the positive cone of `U`: `(a, b, x)` is positive when
    /// `x > 0`, or `x = 0` and `b` is positive, or `x = 0`, `b = I` and `a`
    /// is positive. The height-0 identity is not positive.
    pub fn is_positive(&self) -> Result<bool, GroupError> {
        if self.spec.modulus != Modulus::Infinite {
            return Err(GroupError::NotInfinite(self.spec));
        }
        Ok(positive_at(&self.labels, 0, self.spec.height))
    }

    /// Labels in post-order (left subtree, right subtree, root).
    pub fn cone_coordinates(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.labels.len());
        post_order(&self.labels, 0, self.spec.height, &mut out);
        out
    }

    /// The left-invariant order on `U`: `a < b` iff `a^{-1} b` is positive.
    /// Finite elements are compared through their canonical representatives
    /// in `U`; that restriction is a linear order but not left-invariant.
    pub fn compare(&self, other: &Self) -> Result<Ordering, GroupError> {
        if self.spec != other.spec {
            return Err(GroupError::SpecMismatch { left: self.spec, right: other.spec });
        }
        if self.labels == other.labels {
            return Ok(Ordering::Equal);
        }
        let (a, b) = match self.spec.modulus {
            Modulus::Infinite => (self.clone(), other.clone()),
            Modulus::Finite(_) => (self.embed_in_u(), other.embed_in_u()),
        };
        let diff = a.inverse().mul(&b)?;
        if positive_at(&diff.labels, 0, diff.spec.height) {
            Ok(Ordering::Less)
        } else {
            Ok(Ordering::Greater)
        }
    }

    /// Uniform sample; `U` labels are drawn from `-bound..=bound`.
    pub fn random<R: Rng + ?Sized>(spec: GroupSpec, bound: i64, rng: &mut R) -> Self {
        let labels = (0..spec.dim())
            .map(|_| match spec.modulus {
                Modulus::Infinite => rng.gen_range(-bound..=bound),
                Modulus::Finite(n) => rng.gen_range(0..n as i64),
            })
            .collect();
        Self { spec, labels }
    }
}

fn width_depth(width: usize, height: u32) -> Result<u32, GroupError> {
    if width == 0 || !width.is_power_of_two() || width.trailing_zeros() >= height {
        return Err(GroupError::InvalidWidth { width, height });
    }
    Ok(width.trailing_zeros())
}

fn is_odd(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

fn mul_into(spec: &GroupSpec, a: &[i64], ia: usize, b: &[i64], ib: usize, out: &mut [i64], io: usize) {
    out[io] = spec.reduce(a[ia] + b[ib]);
    if 2 * io + 1 >= out.len() {
        return;
    }
    let (al, ar) = (2 * ia + 1, 2 * ia + 2);
    let (bl, br) = (2 * ib + 1, 2 * ib + 2);
    if is_odd(a[ia]) {
        mul_into(spec, a, al, b, br, out, 2 * io + 1);
        mul_into(spec, a, ar, b, bl, out, 2 * io + 2);
    } else {
        mul_into(spec, a, al, b, bl, out, 2 * io + 1);
        mul_into(spec, a, ar, b, br, out, 2 * io + 2);
    }
}

fn inv_into(spec: &GroupSpec, a: &[i64], ia: usize, out: &mut [i64], io: usize) {
    out[io] = spec.reduce(-a[ia]);
    if 2 * io + 1 >= out.len() {
        return;
    }
    if is_odd(a[ia]) {
        inv_into(spec, a, 2 * ia + 2, out, 2 * io + 1);
        inv_into(spec, a, 2 * ia + 1, out, 2 * io + 2);
    } else {
        inv_into(spec, a, 2 * ia + 1, out, 2 * io + 1);
        inv_into(spec, a, 2 * ia + 2, out, 2 * io + 2);
    }
}

fn subtree_is_zero(labels: &[i64], root: usize, height: u32) -> bool {
    (0..height).all(|t| {
        let start = ((root + 1) << t) - 1;
        labels[start..start + (1usize << t)].iter().all(|&x| x == 0)
    })
}

fn positive_at(labels: &[i64], node: usize, height: u32) -> bool {
    if height == 0 {
        return false;
    }
    match labels[node].cmp(&0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let right = 2 * node + 2;
            if !subtree_is_zero(labels, right, height - 1) {
                positive_at(labels, right, height - 1)
            } else {
                positive_at(labels, 2 * node + 1, height - 1)
            }
        }
    }
}

fn post_order(labels: &[i64], node: usize, height: u32, out: &mut Vec<i64>) {
    if height == 0 {
        return;
    }
    post_order(labels, 2 * node + 1, height - 1, out);
    post_order(labels, 2 * node + 2, height - 1, out);
    out.push(labels[node]);
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[", self.spec)?;
        for (k, x) in self.labels.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// `U:3`, `H6:3`, `W:3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::Parse(s.to_string());
        let (tag, height) = s.trim().split_once(':').ok_or_else(bad)?;
        let height: u32 = height.trim().parse().map_err(|_| bad())?;
        if height > 30 {
            return Err(bad());
        }
        let modulus = match tag.trim() {
            "U" => Modulus::Infinite,
            "W" => Modulus::Finite(2),
            t if t.starts_with('H') => Modulus::Finite(t[1..].parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        Self::new(height, modulus)
    }
}

impl FromStr for GroupElement {
    type Err = GroupError;

    /// `U:3:[1,0,2,0,0,0,-1]`; the label list is breadth-first.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::Parse(s.to_string());
        let s = s.trim();
        let open = s.find('[').ok_or_else(bad)?;
        let head = s[..open].trim().strip_suffix(':').ok_or_else(bad)?;
        let body = s[open..].strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let spec: GroupSpec = head.parse()?;
        let labels = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::from_labels(spec, labels)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn x_slot_places_single_one() {
        let x = GroupElement::x_slot(GroupSpec::w(2), 3, 4);
        // depth 2 does not exist in a height-2 tree
        assert!(matches!(x, Err(GroupError::InvalidWidth { .. })));
        let x = GroupElement::x_slot(GroupSpec::w(3), 3, 4).unwrap();
        assert_eq!(x.labels(), &[0, 0, 0, 0, 0, 1, 0]);
        let v = GroupElement::x_vector(GroupSpec::w(3), &[0, 0, 1, 0]).unwrap();
        assert_eq!(x, v);
        // [[X(0), X(0)], [X(1), X(0)]]
        let w1 = GroupSpec::w(1);
        let x0 = GroupElement::x(w1, 0).unwrap();
        let x1 = GroupElement::x(w1, 1).unwrap();
        let nested = GroupElement::bracket(
            &GroupElement::bracket(&x0, &x0).unwrap(),
            &GroupElement::bracket(&x1, &x0).unwrap(),
        )
        .unwrap();
        assert_eq!(nested, x);
        assert!(matches!(
            GroupElement::x_slot(GroupSpec::w(3), 5, 4),
            Err(GroupError::SlotOutOfRange { .. })
        ));
        assert!(matches!(
            GroupElement::x_slot(GroupSpec::w(3), 0, 4),
            Err(GroupError::SlotOutOfRange { .. })
        ));
    }

    #[test]
    fn constructors_reduce_and_validate() {
        assert!(GroupElement::identity(GroupSpec::u(3)).is_identity());
        let h1 = GroupSpec::h(1, 6).unwrap();
        assert_eq!(GroupElement::x(h1, 8).unwrap().labels(), &[2]);
        assert!(GroupSpec::h(1, 3).is_err());
        assert!(GroupSpec::h(1, 1).is_err());
        assert!(GroupSpec::h(1, 0).is_err());
        assert!(matches!(GroupElement::x(GroupSpec::u(0), 1), Err(GroupError::NoRoot)));
        let a = GroupElement::identity(GroupSpec::u(1));
        let b = GroupElement::identity(GroupSpec::u(2));
        assert!(GroupElement::bracket(&a, &b).is_err());
        let c = GroupElement::identity(GroupSpec::w(1));
        assert!(GroupElement::bracket(&a, &c).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let w1 = GroupSpec::w(1);
        let x1 = GroupElement::x(w1, 1).unwrap();
        assert!(x1.mul(&x1).unwrap().is_identity());

        let h1 = GroupSpec::h(1, 6).unwrap();
        let p = GroupElement::x(h1, 3).unwrap().mul(&GroupElement::x(h1, 5).unwrap()).unwrap();
        assert_eq!(p.labels(), &[2]);

        // X(1)[X(1), I] = (I, X(1), 1) = [I, X(1)] X(1)
        let u1 = GroupSpec::u(1);
        let u2 = GroupSpec::u(2);
        let ix = GroupElement::bracket(&GroupElement::x(u1, 1).unwrap(), &GroupElement::identity(u1)).unwrap();
        let xi = GroupElement::bracket(&GroupElement::identity(u1), &GroupElement::x(u1, 1).unwrap()).unwrap();
        let root = GroupElement::x(u2, 1).unwrap();
        let lhs = root.mul(&ix).unwrap();
        assert_eq!(lhs.labels(), &[1, 0, 1]);
        assert_eq!(lhs, xi.mul(&root).unwrap());
        assert!(root.mul(&GroupElement::identity(GroupSpec::u(3))).is_err());
    }

    #[test]
    fn inverse_examples() {
        let x = GroupElement::x(GroupSpec::u(1), 5).unwrap();
        assert_eq!(x.inverse().labels(), &[-5]);
        let a = el("U:2:[1,1,0]");
        let inv = a.inverse();
        assert_eq!(inv.labels(), &[-1, 0, -1]);
        assert!(a.mul(&inv).unwrap().is_identity());
        for slot in 1..=4 {
            let x = GroupElement::x_slot(GroupSpec::w(4), slot, 4).unwrap();
            assert_eq!(x.inverse(), x);
        }
    }

    #[test]
    fn reduce_modulus_transitions() {
        let a = GroupElement::x(GroupSpec::u(1), 7).unwrap();
        let h = a.reduce_modulus(GroupSpec::h(1, 6).unwrap()).unwrap();
        assert_eq!(h.labels(), &[1]);
        let w = GroupElement::identity(GroupSpec::w(2));
        assert!(w.reduce_modulus(GroupSpec::h(2, 6).unwrap()).is_err());
        assert!(w.reduce_modulus(GroupSpec::u(2)).is_err());
        assert!(h.reduce_modulus(GroupSpec::w(2)).is_err());
        let id = GroupElement::identity(GroupSpec::u(3));
        assert!(id.reduce_modulus(GroupSpec::w(3)).unwrap().is_identity());
        let h12 = GroupElement::x(GroupSpec::h(1, 12).unwrap(), 9).unwrap();
        assert_eq!(h12.reduce_modulus(GroupSpec::h(1, 6).unwrap()).unwrap().labels(), &[3]);
        assert!(h12.reduce_modulus(GroupSpec::h(1, 8).unwrap()).is_err());
    }

    #[test]
    fn positivity_rules() {
        assert!(el("U:1:[1]").is_positive().unwrap());
        assert!(!el("U:1:[-1]").is_positive().unwrap());
        assert!(el("U:2:[0,1,0]").is_positive().unwrap());
        assert!(!el("U:2:[0,1,-1]").is_positive().unwrap());
        assert!(!GroupElement::identity(GroupSpec::u(2)).is_positive().unwrap());
        assert!(!GroupElement::identity(GroupSpec::u(0)).is_positive().unwrap());
        assert!(matches!(
            el("W:1:[1]").is_positive(),
            Err(GroupError::NotInfinite(_))
        ));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(el("U:1:[0]").compare(&el("U:1:[1]")).unwrap(), Ordering::Less);
        let a = el("U:2:[3,-1,2]");
        assert_eq!(a.compare(&a).unwrap(), Ordering::Equal);
        assert!(a.compare(&el("U:1:[1]")).is_err());
        // H_1 = Z_n restricted order is the natural order on 0..n
        let h = GroupSpec::h(1, 6).unwrap();
        for x in 0..5 {
            let a = GroupElement::x(h, x).unwrap();
            let b = GroupElement::x(h, x + 1).unwrap();
            assert_eq!(a.compare(&b).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn subtree_and_zero_above() {
        let a = el("U:3:[1,2,3,4,5,6,7]");
        assert_eq!(a.subtree(1, 0).unwrap().labels(), &[2, 4, 5]);
        assert_eq!(a.subtree(1, 1).unwrap().labels(), &[3, 6, 7]);
        assert_eq!(a.subtree(2, 3).unwrap().labels(), &[7]);
        assert_eq!(a.subtree(3, 5).unwrap().labels(), &[] as &[i64]);
        assert!(a.subtree(2, 4).is_err());
        let (l, r) = a.children().unwrap();
        assert_eq!(GroupElement::bracket(&l, &r).unwrap().labels(), &[0, 2, 3, 4, 5, 6, 7]);
        assert!(!a.is_zero_above(1));
        assert!(el("U:3:[0,2,3,4,5,6,7]").is_zero_above(1));
        assert!(a.is_zero_above(0));
    }

    #[test]
    fn text_round_trip() {
        for s in ["U:3:[1,0,2,0,0,0,-1]", "H6:2:[5,0,3]", "W:1:[1]", "U:0:[]"] {
            assert_eq!(el(s).to_string(), s);
        }
        assert_eq!(el("H6:1:[7]").to_string(), "H6:1:[1]");
        assert!("U:2:[1,2]".parse::<GroupElement>().is_err());
        assert!("Q:2:[1,2,3]".parse::<GroupElement>().is_err());
        assert!("H5:1:[1]".parse::<GroupElement>().is_err());
    }

    #[test]
    fn closed_form_cone_agrees_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for height in 0..5 {
            for _ in 0..200 {
                let a = GroupElement::random(GroupSpec::u(height), 1, &mut rng);
                let closed = a.cone_coordinates().iter().rev().find(|&&x| x != 0).is_some_and(|&x| x > 0);
                assert_eq!(a.is_positive().unwrap(), closed, "{a}");
            }
        }
    }
}
