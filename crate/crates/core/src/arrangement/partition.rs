//! Set partitions of `[n]` enumerated as restricted-growth strings.

use serde::{Deserialize, Serialize};

/// A set partition, blocks sorted by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Decodes a restricted-growth string `a` (block label per element).
    pub fn from_rgs(a: &[usize]) -> Self {
        let nblocks = a.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in a.iter().enumerate() {
            blocks[b].push(i);
        }
        Partition { blocks }
    }

    pub fn single_block(n: usize) -> Self {
        Partition {
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block bitmasks.
    pub fn masks(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &i| m | (1 << i)))
            .collect()
    }

    /// True when the blocks are nonempty, pairwise disjoint, and cover `0..n`.
    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.is_empty() {
                return false;
            }
            for &i in b {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|x| x)
    }
}

/// Lending enumerator over restricted-growth strings of length `n`:
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`. Each string is one set
/// partition; they come out in lexicographic order.
pub struct RestrictedGrowth {
    a: Vec<usize>,
    /// `prefix_max[i] = max(a[..=i])`.
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            a: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    /// Advances and returns the next string, or `None` when exhausted.
    pub fn next_rgs(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.a);
        }
        let n = self.a.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.a[i] <= self.prefix_max[i - 1] {
                self.a[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return Some(&self.a);
            }
        }
        self.done = true;
        None
    }
}

/// Bell numbers, for sizing enumerations.
pub fn bell_number(n: usize) -> u128 {
    // Bell triangle.
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize) -> u128 {
        let mut e = RestrictedGrowth::new(n);
        let mut c = 0;
        while e.next_rgs().is_some() {
            c += 1;
        }
        c
    }

    #[test]
    fn counts_are_bell_numbers() {
        let bell = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(count(n), b, "n = {n}");
            assert_eq!(bell_number(n), b);
        }
        assert_eq!(bell_number(12), 4_213_597);
    }

    #[test]
    fn strings_are_distinct_partitions() {
        let mut e = RestrictedGrowth::new(5);
        let mut seen = std::collections::HashSet::new();
        while let Some(a) = e.next_rgs() {
            let p = Partition::from_rgs(a);
            assert!(p.is_partition_of(5));
            assert!(seen.insert(p.blocks.clone()));
        }
        assert_eq!(seen.len(), 52);
    }

    #[test]
    fn lexicographic_order_for_three() {
        let mut e = RestrictedGrowth::new(3);
        let mut all = Vec::new();
        while let Some(a) = e.next_rgs() {
            all.push(a.to_vec());
        }
        assert_eq!(
            all,
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 2]]
        );
    }

    #[test]
    fn partition_validity() {
        assert!(Partition::single_block(3).is_partition_of(3));
        let bad = Partition { blocks: vec![vec![0, 1], vec![1, 2]] };
        assert!(!bad.is_partition_of(3));
        let gap = Partition { blocks: vec![vec![0], vec![2]] };
        assert!(!gap.is_partition_of(3));
        assert_eq!(Partition::from_rgs(&[0, 1, 0]).masks(), vec![0b101, 0b010]);
    }
}
