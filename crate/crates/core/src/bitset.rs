//! Fixed-width index sets used for edge subsets and vertex subsets.

use alloc::vec::Vec;
use core::fmt;

/// Maximum number of elements addressable by [`EdgeSet`] and [`VertexSet`].
pub const MAX_INDEX: usize = 128;

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(u128);

        impl $name {
            pub const fn empty() -> Self {
                Self(0)
            }

            /// The set `{0, .., n-1}`.
            pub fn full(n: usize) -> Self {
                assert!(n <= MAX_INDEX);
                if n == MAX_INDEX {
                    Self(u128::MAX)
                } else {
                    Self((1u128 << n) - 1)
                }
            }

            pub const fn from_bits(bits: u128) -> Self {
                Self(bits)
            }

            pub const fn bits(self) -> u128 {
                self.0
            }

            pub fn singleton(i: usize) -> Self {
                Self(1u128 << i)
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
                it.into_iter().fold(Self::empty(), |s, i| s.with(i))
            }

            #[inline]
            pub fn contains(self, i: usize) -> bool {
                i < MAX_INDEX && self.0 >> i & 1 == 1
            }

            #[inline]
            pub fn with(self, i: usize) -> Self {
                Self(self.0 | 1u128 << i)
            }

            #[inline]
            pub fn without(self, i: usize) -> Self {
                Self(self.0 & !(1u128 << i))
            }

            pub fn insert(&mut self, i: usize) {
                *self = self.with(i);
            }

            pub fn remove(&mut self, i: usize) {
                *self = self.without(i);
            }

            #[inline]
            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            #[inline]
            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            pub fn intersection(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            pub fn difference(self, other: Self) -> Self {
                Self(self.0 & !other.0)
            }

            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            /// Complement inside `{0, .., n-1}`.
            pub fn complement(self, n: usize) -> Self {
                Self::full(n).difference(self)
            }

            /// Indices in increasing order.
            pub fn iter(self) -> impl Iterator<Item = usize> {
                let mut bits = self.0;
                core::iter::from_fn(move || {
                    if bits == 0 {
                        None
                    } else {
                        let i = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        Some(i)
                    }
                })
            }

            pub fn to_vec(self) -> Vec<usize> {
                self.iter().collect()
            }

            pub fn first(self) -> Option<usize> {
                if self.0 == 0 {
                    None
                } else {
                    Some(self.0.trailing_zeros() as usize)
                }
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                Self::from_indices(iter)
            }
        }
    };
}

index_set!(
    /// A subset of the edges of a graph, addressed by edge index.
    EdgeSet
);
index_set!(
    /// A subset of the vertices of a graph, addressed by vertex index.
    VertexSet
);

/// All subsets of `{0, .., n-1}` as bit patterns, in increasing numeric order.
pub(crate) fn all_subsets(n: usize) -> impl Iterator<Item = u128> {
    assert!(n < 64, "subset enumeration over {n} elements is out of reach");
    0..(1u128 << n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_sorted() {
        let s = EdgeSet::from_indices([5, 1, 64, 3]);
        assert_eq!(s.to_vec(), vec![1, 3, 5, 64]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(64));
        assert!(!s.contains(2));
    }

    #[test]
    fn complement_and_subset() {
        let s = VertexSet::from_indices([0, 2]);
        assert_eq!(s.complement(4).to_vec(), vec![1, 3]);
        assert!(s.is_subset(VertexSet::full(3)));
        assert!(!VertexSet::full(4).is_subset(s));
        assert_eq!(VertexSet::full(128).len(), 128);
    }
}
