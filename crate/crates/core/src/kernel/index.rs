use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the three series variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn position(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_char(c: char) -> Option<Axis> {
        match c {
            'x' | 'X' => Some(Axis::X),
            'y' | 'Y' => Some(Axis::Y),
            'z' | 'Z' => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Exponent triple of `x^m y^n z^p`.
///
/// Ordering is graded lexicographic: total degree first, then `m`, `n`, `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct MultiIndex3 {
    pub m: u32,
    pub n: u32,
    pub p: u32,
}

impl MultiIndex3 {
    pub const ZERO: MultiIndex3 = MultiIndex3 { m: 0, n: 0, p: 0 };

    pub const fn new(m: u32, n: u32, p: u32) -> Self {
        Self { m, n, p }
    }

    pub fn unit(axis: Axis) -> Self {
        let mut out = Self::ZERO;
        *out.get_mut(axis) = 1;
        out
    }

    pub fn total(&self) -> u32 {
        self.m + self.n + self.p
    }

    pub fn get(&self, axis: Axis) -> u32 {
        match axis {
            Axis::X => self.m,
            Axis::Y => self.n,
            Axis::Z => self.p,
        }
    }

    pub fn get_mut(&mut self, axis: Axis) -> &mut u32 {
        match axis {
            Axis::X => &mut self.m,
            Axis::Y => &mut self.n,
            Axis::Z => &mut self.p,
        }
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.m, self.n, self.p]
    }

    pub fn checked_sub(&self, other: &MultiIndex3) -> Option<MultiIndex3> {
        Some(MultiIndex3 {
            m: self.m.checked_sub(other.m)?,
            n: self.n.checked_sub(other.n)?,
            p: self.p.checked_sub(other.p)?,
        })
    }

    /// Indices of total degree exactly `s`, in graded-lex order.
    pub fn shell(s: u32) -> impl Iterator<Item = MultiIndex3> {
        (0..=s).rev().flat_map(move |m| {
            (0..=s - m).rev().map(move |n| MultiIndex3::new(m, n, s - m - n))
        })
    }

    /// Indices of total degree `<= cap`, in graded-lex order.
    pub fn graded(cap: u32) -> impl Iterator<Item = MultiIndex3> {
        (0..=cap).flat_map(MultiIndex3::shell)
    }
}

impl std::ops::Add for MultiIndex3 {
    type Output = MultiIndex3;
    fn add(self, rhs: MultiIndex3) -> MultiIndex3 {
        MultiIndex3::new(self.m + rhs.m, self.n + rhs.n, self.p + rhs.p)
    }
}

impl Ord for MultiIndex3 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.m.cmp(&self.m))
            .then_with(|| other.n.cmp(&self.n))
            .then_with(|| other.p.cmp(&self.p))
    }
}

impl PartialOrd for MultiIndex3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[u32; 3]> for MultiIndex3 {
    fn from(a: [u32; 3]) -> Self {
        MultiIndex3::new(a[0], a[1], a[2])
    }
}

impl From<MultiIndex3> for [u32; 3] {
    fn from(i: MultiIndex3) -> Self {
        i.as_array()
    }
}

impl fmt::Display for MultiIndex3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.m, self.n, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_count_is_tetrahedral() {
        for cap in 0..12u32 {
            let expected = (cap + 1) * (cap + 2) * (cap + 3) / 6;
            assert_eq!(MultiIndex3::graded(cap).count() as u32, expected);
        }
    }

    #[test]
    fn iteration_order_matches_ord() {
        let v: Vec<_> = MultiIndex3::graded(5).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v[0], MultiIndex3::ZERO);
        assert_eq!(&v[1..4], &[
            MultiIndex3::new(1, 0, 0),
            MultiIndex3::new(0, 1, 0),
            MultiIndex3::new(0, 0, 1)
        ]);
    }

    #[test]
    fn serde_as_triple() {
        let i = MultiIndex3::new(1, 2, 3);
        assert_eq!(serde_json::to_string(&i).unwrap(), "[1,2,3]");
        assert_eq!(serde_json::from_str::<MultiIndex3>("[1,2,3]").unwrap(), i);
    }
}
