use std::collections::BTreeMap;
use std::ops::Range;

use crate::kernel::{Element, PathAlgebra};

/// A sparse matrix with algebra-element entries, indexed by
/// `(source generator, target generator)`.
///
/// Composition is in application order: `a.then(b, alg)` applies `a` first,
/// and an entry `u → w` of the result is `Σ_v a[u][v] · b[v][w]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoeffMap {
    entries: BTreeMap<(usize, usize), Element>,
}

impl CoeffMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// The map sending each listed generator to itself with the given
    /// idempotent coefficient.
    pub fn diagonal(idempotents: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::new();
        for (i, e) in idempotents {
            m.toggle(i, i, e);
        }
        m
    }

    pub fn from_triples(triples: impl IntoIterator<Item = (usize, usize, usize)>) -> Self {
        let mut m = Self::new();
        for (u, v, b) in triples {
            m.toggle(u, v, b);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&Element> {
        self.entries.get(&(u, v))
    }

    pub fn coeff(&self, u: usize, v: usize) -> Element {
        self.get(u, v).cloned().unwrap_or_default()
    }

    pub fn toggle(&mut self, u: usize, v: usize, b: usize) {
        let e = self.entries.entry((u, v)).or_default();
        e.toggle(b);
        if e.is_zero() {
            self.entries.remove(&(u, v));
        }
    }

    pub fn add_element(&mut self, u: usize, v: usize, e: &Element) {
        for b in e.terms() {
            self.toggle(u, v, b);
        }
    }

    pub fn set(&mut self, u: usize, v: usize, e: Element) {
        if e.is_zero() {
            self.entries.remove(&(u, v));
        } else {
            self.entries.insert((u, v), e);
        }
    }

    pub fn remove(&mut self, u: usize, v: usize) -> Option<Element> {
        self.entries.remove(&(u, v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Element)> + '_ {
        self.entries.iter().map(|(&(u, v), e)| (u, v, e))
    }

    /// Entries leaving generator `u`.
    pub fn row(&self, u: usize) -> impl Iterator<Item = (usize, &Element)> + '_ {
        self.entries
            .range((u, 0)..(u + 1, 0))
            .map(|(&(_, v), e)| (v, e))
    }

    /// Every `(source, target, basis)` triple, in sorted order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries
            .iter()
            .flat_map(|(&(u, v), e)| e.terms().map(move |b| (u, v, b)))
    }

    pub fn term_count(&self) -> usize {
        self.entries.values().map(Element::len).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (u, v, e) in other.iter() {
            self.add_element(u, v, e);
        }
    }

    /// `self` followed by `next`, coefficients multiplied in `alg`.
    pub fn then(&self, next: &Self, alg: &PathAlgebra) -> Self {
        let mut out = Self::new();
        for (u, v, a) in self.iter() {
            for (w, b) in next.row(v) {
                for x in a.terms() {
                    for y in b.terms() {
                        if let Some(z) = alg.mul_basis(x, y) {
                            out.toggle(u, w, z);
                        }
                    }
                }
            }
        }
        out
    }

    /// The sub-block with sources in `rows` and targets in `cols`,
    /// re-indexed from zero.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        let mut out = Self::new();
        for (u, v, e) in self.iter() {
            if rows.contains(&u) && cols.contains(&v) {
                out.set(u - rows.start, v - cols.start, e.clone());
            }
        }
        out
    }

    /// Shifts all source indices by `row_off` and target indices by
    /// `col_off`.
    pub fn shifted(&self, row_off: usize, col_off: usize) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(&(u, v), e)| ((u + row_off, v + col_off), e.clone()))
                .collect(),
        }
    }

    /// Renames indices and basis elements.
    pub fn map_indices(
        &self,
        src: impl Fn(usize) -> usize,
        tgt: impl Fn(usize) -> usize,
        basis: impl Fn(usize) -> usize,
    ) -> Self {
        let mut out = Self::new();
        for (u, v, b) in self.triples() {
            out.toggle(src(u), tgt(v), basis(b));
        }
        out
    }

    pub fn max_source(&self) -> Option<usize> {
        self.entries.keys().map(|&(u, _)| u).max()
    }

    pub fn max_target(&self) -> Option<usize> {
        self.entries.keys().map(|&(_, v)| v).max()
    }

    pub fn max_basis(&self) -> Option<usize> {
        self.triples().map(|(_, _, b)| b).max()
    }
}
