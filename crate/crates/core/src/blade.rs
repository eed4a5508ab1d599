//! Increasing index sets `I = (i1 < ... < ip)` stored as bitmasks.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// A basis element `dx^I` or `∂_I`. Bit `i` set means index `i` belongs to `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Blade(pub u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Blade {
        Blade(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Blade {
        Blade(indices.iter().fold(0u32, |acc, &i| acc | (1 << i)))
    }

    pub fn full(n: usize) -> Blade {
        if n >= 32 {
            Blade(u32::MAX)
        } else {
            Blade((1u32 << n) - 1)
        }
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Blade) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn minus(self, other: Blade) -> Blade {
        Blade(self.0 & !other.0)
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << i))
    }

    pub fn with(self, i: usize) -> Blade {
        Blade(self.0 | (1 << i))
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut bits = self.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out.push(i);
            bits &= bits - 1;
        }
        out
    }

    /// Number of elements of `self` strictly below `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }

    /// Sign of the permutation that sorts the concatenation `(self, other)`.
    /// Zero when the two sets intersect.
    pub fn merge_sign(self, other: Blade) -> i32 {
        if self.intersects(other) {
            return 0;
        }
        // each element of `other` passes over the elements of `self` larger than it
        let mut inversions = 0u32;
        for j in other.indices() {
            inversions += (self.0 >> j).count_ones();
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All blades of degree `p` in `n` indices, ordered lexicographically.
    pub fn all_of_degree(n: usize, p: usize) -> Vec<Blade> {
        let mut out = Vec::new();
        if p > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..p).collect();
        loop {
            out.push(Blade::from_indices(&idx));
            // next combination
            let mut k = p;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if idx[k] < n - p + k {
                    idx[k] += 1;
                    for j in k + 1..p {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if k == 0 {
                    return out;
                }
            }
        }
    }

    /// Position lookup for the lexicographic basis returned by [`Blade::all_of_degree`].
    pub fn index_map(n: usize, p: usize) -> BTreeMap<Blade, usize> {
        Blade::all_of_degree(n, p)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect()
    }
}

impl Ord for Blade {
    /// Lexicographic order on the sorted index tuples; shorter prefixes come first.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0;
        let mut b = other.0;
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
            let ia = a.trailing_zeros();
            let ib = b.trailing_zeros();
            if ia != ib {
                return ia.cmp(&ib);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_sign(v: &[usize]) -> i32 {
        let mut s = 1;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] == v[j] {
                    return 0;
                }
                if v[i] > v[j] {
                    s = -s;
                }
            }
        }
        s
    }

    #[test]
    fn merge_sign_matches_inversion_count() {
        for a in 0u32..64 {
            for b in 0u32..64 {
                let (ba, bb) = (Blade(a), Blade(b));
                let mut cat = ba.indices();
                cat.extend(bb.indices());
                assert_eq!(ba.merge_sign(bb), perm_sign(&cat), "{a} {b}");
            }
        }
    }

    #[test]
    fn lexicographic_enumeration() {
        let blades = Blade::all_of_degree(4, 2);
        let idx: Vec<Vec<usize>> = blades.iter().map(|b| b.indices()).collect();
        assert_eq!(
            idx,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut sorted = blades.clone();
        sorted.sort();
        assert_eq!(sorted, blades);
        for n in 0..7 {
            for p in 0..=n + 1 {
                assert_eq!(Blade::all_of_degree(n, p).len(), binomial(n, p));
            }
        }
    }
}
