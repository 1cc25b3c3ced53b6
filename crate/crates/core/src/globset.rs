//! Finite globular sets: graded cell tables with source and target maps.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Report;

/// A cell of a graded table, by dimension and position.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CellRef {
    pub dim: usize,
    pub index: usize,
}

impl CellRef {
    pub fn new(dim: usize, index: usize) -> Self {
        CellRef { dim, index }
    }
}

/// Cells are the positions `0..count(k)` in each dimension `0..=dims`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GlobularSet {
    counts: Vec<usize>,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
}

impl GlobularSet {
    pub fn empty(dims: usize) -> Self {
        GlobularSet {
            counts: vec![0; dims + 1],
            src: vec![Vec::new(); dims + 1],
            tgt: vec![Vec::new(); dims + 1],
        }
    }

    /// `src[k]` and `tgt[k]` map k-cells to (k-1)-cells; row 0 must be empty.
    pub fn new(counts: Vec<usize>, src: Vec<Vec<usize>>, tgt: Vec<Vec<usize>>) -> Result<Self> {
        if counts.is_empty() || src.len() != counts.len() || tgt.len() != counts.len() {
            return Err(Error::Malformed("one src/tgt row per dimension".into()));
        }
        for k in 0..counts.len() {
            let want = if k == 0 { 0 } else { counts[k] };
            if src[k].len() != want || tgt[k].len() != want {
                return Err(Error::Malformed(format!("face rows of dimension {k} have the wrong length")));
            }
            if k > 0 {
                if let Some(&bad) = src[k].iter().chain(&tgt[k]).find(|&&x| x >= counts[k - 1]) {
                    return Err(Error::Malformed(format!("face {bad} out of range at dimension {k}")));
                }
            }
        }
        Ok(GlobularSet { counts, src, tgt })
    }

    pub fn dims(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn src(&self, k: usize, i: usize) -> usize {
        self.src[k][i]
    }

    pub fn tgt(&self, k: usize, i: usize) -> usize {
        self.tgt[k][i]
    }

    /// Appends a cell and returns its position.
    pub fn push(&mut self, k: usize, src: usize, tgt: usize) -> usize {
        self.counts[k] += 1;
        if k > 0 {
            self.src[k].push(src);
            self.tgt[k].push(tgt);
        }
        self.counts[k] - 1
    }

    pub fn truncate(&self, k: usize) -> Self {
        let n = (k + 1).min(self.counts.len());
        GlobularSet {
            counts: self.counts[..n].to_vec(),
            src: self.src[..n].to_vec(),
            tgt: self.tgt[..n].to_vec(),
        }
    }

    pub fn parallel(&self, a: CellRef, b: CellRef) -> Result<bool> {
        if a.dim != b.dim {
            return Err(Error::DimensionMismatch(a.dim, b.dim));
        }
        if a.index >= self.count(a.dim) || b.index >= self.count(b.dim) {
            return Err(Error::Malformed("cell out of range".into()));
        }
        Ok(a.dim == 0 || (self.src(a.dim, a.index) == self.src(b.dim, b.index) && self.tgt(a.dim, a.index) == self.tgt(b.dim, b.index)))
    }

    pub fn check_globularity(&self) -> Report {
        let mut report = Report::new("globularity");
        for k in 2..self.counts.len() {
            for x in 0..self.counts[k] {
                let (s, t) = (self.src[k][x], self.tgt[k][x]);
                if self.src[k - 1][s] != self.src[k - 1][t] {
                    report.violation("ss!=st", format!("cell {k}#{x}"));
                }
                if self.tgt[k - 1][s] != self.tgt[k - 1][t] {
                    report.violation("ts!=tt", format!("cell {k}#{x}"));
                }
            }
        }
        report
    }
}

/// JSON form: `{"dims": D, "cells": [[ids]...], "src": [[ids]...], "tgt": [[ids]...]}`
/// where `src[k]` lists the source id of each k-cell.
#[derive(Serialize, Deserialize)]
struct GlobSetDoc {
    dims: usize,
    cells: Vec<Vec<u64>>,
    src: Vec<Vec<u64>>,
    tgt: Vec<Vec<u64>>,
}

impl GlobularSet {
    pub fn to_json(&self) -> serde_json::Value {
        let ids = |n: usize| (0..n as u64).collect::<Vec<_>>();
        let doc = GlobSetDoc {
            dims: self.dims(),
            cells: self.counts.iter().map(|&n| ids(n)).collect(),
            src: self.src.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect(),
            tgt: self.tgt.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect(),
        };
        serde_json::to_value(doc).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: GlobSetDoc = serde_json::from_value(v.clone())?;
        if doc.cells.len() != doc.dims + 1 {
            return Err(Error::Malformed(format!("{} cell rows for dims {}", doc.cells.len(), doc.dims)));
        }
        let positions: Vec<HashMap<u64, usize>> = doc
            .cells
            .iter()
            .map(|row| row.iter().enumerate().map(|(i, &id)| (id, i)).collect())
            .collect();
        for (k, row) in doc.cells.iter().enumerate() {
            if positions[k].len() != row.len() {
                return Err(Error::Malformed(format!("duplicate ids at dimension {k}")));
            }
        }
        let resolve = |rows: &[Vec<u64>]| -> Result<Vec<Vec<usize>>> {
            let mut out = vec![Vec::new()];
            for k in 1..=doc.dims {
                let row = rows.get(k).cloned().unwrap_or_default();
                out.push(
                    row.iter()
                        .map(|id| {
                            positions[k - 1]
                                .get(id)
                                .copied()
                                .ok_or_else(|| Error::Malformed(format!("unknown face id {id} at dimension {k}")))
                        })
                        .collect::<Result<_>>()?,
                );
            }
            Ok(out)
        };
        let src = resolve(&doc.src)?;
        let tgt = resolve(&doc.tgt)?;
        GlobularSet::new(doc.cells.iter().map(|r| r.len()).collect(), src, tgt)
    }
}

/// Per-dimension maps between two globular sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GlobMorphism {
    pub maps: Vec<Vec<usize>>,
}

impl GlobMorphism {
    pub fn identity(a: &GlobularSet) -> Self {
        GlobMorphism {
            maps: a.counts.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    pub fn apply(&self, c: CellRef) -> CellRef {
        CellRef::new(c.dim, self.maps[c.dim][c.index])
    }

    pub fn compose(&self, then: &GlobMorphism) -> GlobMorphism {
        GlobMorphism {
            maps: self
                .maps
                .iter()
                .enumerate()
                .map(|(k, row)| row.iter().map(|&x| then.maps[k][x]).collect())
                .collect(),
        }
    }

    /// Checks the maps are total, in range, and commute with sources and targets.
    pub fn check(&self, from: &GlobularSet, to: &GlobularSet) -> Report {
        let mut report = Report::new("glob-morphism");
        if self.maps.len() != from.counts.len() {
            report.violation("shape", format!("{} maps for {} dimensions", self.maps.len(), from.counts.len()));
            return report;
        }
        for (k, row) in self.maps.iter().enumerate() {
            if row.len() != from.count(k) {
                report.violation("partial", format!("dimension {k}"));
                continue;
            }
            for (x, &y) in row.iter().enumerate() {
                if y >= to.count(k) {
                    report.violation("range", format!("cell {k}#{x} -> {y}"));
                } else if k > 0 {
                    if self.maps[k - 1][from.src(k, x)] != to.src(k, y) {
                        report.violation("src", format!("cell {k}#{x}"));
                    }
                    if self.maps[k - 1][from.tgt(k, x)] != to.tgt(k, y) {
                        report.violation("tgt", format!("cell {k}#{x}"));
                    }
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two arrows f, g: 0 -> 1 and a 2-cell f => g.
    fn globe() -> GlobularSet {
        GlobularSet::new(vec![2, 2, 1], vec![vec![], vec![0, 0], vec![0]], vec![vec![], vec![1, 1], vec![1]]).unwrap()
    }

    #[test]
    fn parallelism() {
        let g = globe();
        assert!(g.parallel(CellRef::new(0, 0), CellRef::new(0, 1)).unwrap());
        assert!(g.parallel(CellRef::new(1, 0), CellRef::new(1, 0)).unwrap());
        assert!(g.parallel(CellRef::new(1, 0), CellRef::new(1, 1)).unwrap());
        let h = GlobularSet::new(vec![3, 2], vec![vec![], vec![0, 1]], vec![vec![], vec![2, 2]]).unwrap();
        assert!(!h.parallel(CellRef::new(1, 0), CellRef::new(1, 1)).unwrap());
        assert!(matches!(h.parallel(CellRef::new(0, 0), CellRef::new(1, 1)), Err(Error::DimensionMismatch(0, 1))));
    }

    #[test]
    fn globularity_reports() {
        assert!(GlobularSet::empty(3).check_globularity().pass);
        assert!(globe().check_globularity().pass);
        // g now runs 1 -> 1, so ss != st for the 2-cell
        let bad = GlobularSet::new(vec![2, 2, 1], vec![vec![], vec![0, 1], vec![0]], vec![vec![], vec![1, 1], vec![1]]).unwrap();
        let r = bad.check_globularity();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, "ss!=st");
    }

    #[test]
    fn json_round_trip() {
        let g = globe();
        let v = g.to_json();
        assert_eq!(v["dims"], 2);
        assert_eq!(GlobularSet::from_json(&v).unwrap(), g);
        let custom = serde_json::json!({"dims": 1, "cells": [[7, 9], [3]], "src": [[], [9]], "tgt": [[], [7]]});
        let parsed = GlobularSet::from_json(&custom).unwrap();
        assert_eq!(parsed.src(1, 0), 1);
        assert_eq!(parsed.tgt(1, 0), 0);
    }

    #[test]
    fn morphisms_commute_with_faces() {
        let g = globe();
        assert!(GlobMorphism::identity(&g).check(&g, &g).pass);
        let swap = GlobMorphism { maps: vec![vec![1, 0], vec![0, 1], vec![0]] };
        assert!(!swap.check(&g, &g).pass);
    }
}
