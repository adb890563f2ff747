//! Disjoint-set forest with union by rank and path compression.

use std::hash::Hash;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Disjoint sets over arbitrary hashable elements.
///
/// Elements are registered with [`DisjointSet::set`] and addressed either by
/// value or by the dense index `set` returns. Set identifiers are the dense
/// index of the class representative.
#[derive(Debug, Clone)]
pub struct DisjointSet<K> {
    index: FxHashMap<K, usize>,
    elements: Vec<K>,
    parent: Vec<usize>,
    rank: Vec<u8>,
    classes: usize,
}

impl<K: Hash + Eq + Clone> Default for DisjointSet<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Hash + Eq + Clone> DisjointSet<K> {
    pub fn new() -> Self {
        Self {
            index: FxHashMap::default(),
            elements: Vec::new(),
            parent: Vec::new(),
            rank: Vec::new(),
            classes: 0,
        }
    }

    /// SET: registers `x` as a singleton class. Registering an element twice
    /// returns the existing index.
    pub fn set(&mut self, x: K) -> usize {
        if let Some(&i) = self.index.get(&x) {
            return i;
        }
        let i = self.elements.len();
        self.index.insert(x.clone(), i);
        self.elements.push(x);
        self.parent.push(i);
        self.rank.push(0);
        self.classes += 1;
        i
    }

    #[inline]
    pub fn index_of(&self, x: &K) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn element(&self, i: usize) -> &K {
        &self.elements[i]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of classes currently in the partition.
    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// FIND by value.
    pub fn find(&mut self, x: &K) -> Result<usize> {
        let i = self.index_of(x).ok_or(Error::UnregisteredElement)?;
        Ok(self.find_index(i))
    }

    /// FIND by dense index, compressing the path by halving.
    #[inline]
    pub fn find_index(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            let grand = self.parent[self.parent[i]];
            self.parent[i] = grand;
            i = grand;
        }
        i
    }

    /// UNION of the classes with representatives `a` and `b` (as returned by
    /// FIND). Returns the representative of the merged class.
    #[inline]
    pub fn union_roots(&mut self, a: usize, b: usize) -> usize {
        debug_assert!(self.parent[a] == a && self.parent[b] == b);
        if a == b {
            return a;
        }
        self.classes -= 1;
        let (hi, lo) = if self.rank[a] >= self.rank[b] {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        hi
    }

    /// Merges the classes containing `x` and `y`.
    pub fn union(&mut self, x: &K, y: &K) -> Result<usize> {
        let a = self.find(x)?;
        let b = self.find(y)?;
        Ok(self.union_roots(a, b))
    }

    pub fn same(&mut self, x: &K, y: &K) -> Result<bool> {
        Ok(self.find(x)? == self.find(y)?)
    }

    /// Classes as lists of element indices, ordered by smallest member.
    pub fn partition(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: FxHashMap<usize, usize> = FxHashMap::default();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.len() {
            let r = self.find_index(i);
            let slot = *by_root.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[slot].push(i);
        }
        out
    }
}
