use std::collections::HashMap;
use std::hash::Hash;

use super::BitMatrix;

/// Incremental builder for a sparse `F₂` system whose equations are
/// identified by arbitrary keys. Equations are created on first mention.
#[derive(Clone, Debug)]
pub struct LinearSystem<K> {
    rows: HashMap<K, usize>,
    entries: Vec<(usize, usize)>,
    rhs: Vec<bool>,
    cols: usize,
}

impl<K: Hash + Eq> Default for LinearSystem<K> {
    fn default() -> Self {
        Self {
            rows: HashMap::new(),
            entries: Vec::new(),
            rhs: Vec::new(),
            cols: 0,
        }
    }
}

impl<K: Hash + Eq> LinearSystem<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self) -> usize {
        self.cols += 1;
        self.cols - 1
    }

    pub fn variable_count(&self) -> usize {
        self.cols
    }

    pub fn equation_count(&self) -> usize {
        self.rhs.len()
    }

    fn row(&mut self, key: K) -> usize {
        let next = self.rhs.len();
        let r = *self.rows.entry(key).or_insert(next);
        if r == next {
            self.rhs.push(false);
        }
        r
    }

    /// Adds variable `col` to the left-hand side of equation `key`.
    pub fn toggle(&mut self, key: K, col: usize) {
        debug_assert!(col < self.cols);
        let r = self.row(key);
        self.entries.push((r, col));
    }

    /// Adds a constant 1 to the right-hand side of equation `key`.
    pub fn toggle_rhs(&mut self, key: K) {
        let r = self.row(key);
        self.rhs[r] ^= true;
    }

    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::from_entries(self.rhs.len(), self.cols, self.entries.iter().copied())
            .expect("entries are in range by construction")
    }

    /// A solution with all free variables zero, or `None` if inconsistent.
    pub fn solve(&self) -> Option<Vec<bool>> {
        self.matrix()
            .solve(&self.rhs)
            .expect("right-hand side has one entry per equation")
    }

    /// A basis of solutions of the homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<bool>> {
        self.matrix().nullspace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyed_equations() {
        let mut s = LinearSystem::new();
        let x = s.add_variable();
        let y = s.add_variable();
        s.toggle("a", x);
        s.toggle("a", y);
        s.toggle_rhs("a");
        s.toggle("b", y);
        assert_eq!(s.solve(), Some(vec![true, false]));
        s.toggle_rhs("b");
        assert_eq!(s.solve(), Some(vec![false, true]));
        s.toggle("c", x);
        s.toggle("c", x);
        s.toggle_rhs("c");
        assert_eq!(s.solve(), None);
    }
}
