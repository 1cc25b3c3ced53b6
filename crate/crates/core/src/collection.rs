//! Collections: globular sets lying over the pasting diagrams, their unit
//! and tensor product, and truncation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::globset::{GlobMorphism, GlobularSet};
use crate::pasting::{restrict_labels, shape_info, Composite, Labels, PastingDiagram};
use crate::report::Report;

/// Size limits applied to every bounded construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Bounds {
    pub max_dim: usize,
    pub max_arity_size: usize,
    pub max_term_size: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_dim: 2,
            max_arity_size: 5,
            max_term_size: 2,
        }
    }
}

impl Bounds {
    pub fn new(max_dim: usize, max_arity_size: usize, max_term_size: usize) -> Self {
        Bounds {
            max_dim,
            max_arity_size,
            max_term_size,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_arity_size == 0 {
            return Err(Error::Bounds("max_arity_size must be positive".into()));
        }
        if self.max_term_size == 0 {
            return Err(Error::Bounds("max_term_size must be positive for generators to embed".into()));
        }
        Ok(())
    }

    pub fn with_dim(self, max_dim: usize) -> Self {
        Bounds { max_dim, ..self }
    }
}

/// A globular set with an arity map into the pasting diagrams.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Collection {
    carrier: GlobularSet,
    arity: Vec<Vec<PastingDiagram>>,
}

impl Collection {
    pub fn empty(dims: usize) -> Self {
        Collection {
            carrier: GlobularSet::empty(dims),
            arity: vec![Vec::new(); dims + 1],
        }
    }

    pub fn new(carrier: GlobularSet, arity: Vec<Vec<PastingDiagram>>) -> Result<Self> {
        if arity.len() != carrier.dims() + 1 || arity.iter().enumerate().any(|(k, r)| r.len() != carrier.count(k)) {
            return Err(Error::Malformed("one arity per cell".into()));
        }
        Ok(Collection { carrier, arity })
    }

    pub fn carrier(&self) -> &GlobularSet {
        &self.carrier
    }

    pub fn dims(&self) -> usize {
        self.carrier.dims()
    }

    pub fn count(&self, k: usize) -> usize {
        self.carrier.count(k)
    }

    pub fn src(&self, k: usize, i: usize) -> usize {
        self.carrier.src(k, i)
    }

    pub fn tgt(&self, k: usize, i: usize) -> usize {
        self.carrier.tgt(k, i)
    }

    pub fn arity(&self, k: usize, i: usize) -> &PastingDiagram {
        &self.arity[k][i]
    }

    pub fn push(&mut self, k: usize, src: usize, tgt: usize, arity: PastingDiagram) -> usize {
        self.arity[k].push(arity);
        self.carrier.push(k, src, tgt)
    }

    pub fn truncate(&self, k: usize) -> Self {
        let carrier = self.carrier.truncate(k);
        let n = carrier.dims() + 1;
        Collection {
            carrier,
            arity: self.arity[..n].to_vec(),
        }
    }

    /// Checks that the arity map is a map of globular sets into the pasting diagrams.
    pub fn check(&self) -> Report {
        let mut report = Report::new("collection");
        report.absorb("carrier", self.carrier.check_globularity());
        for k in 0..=self.dims() {
            for x in 0..self.count(k) {
                let a = &self.arity[k][x];
                if a.dim() != k {
                    report.violation("arity-dim", format!("cell {k}#{x} has a {}-diagram", a.dim()));
                    continue;
                }
                if k == 0 {
                    continue;
                }
                let b = a.boundary().expect("k >= 1");
                if self.arity[k - 1][self.src(k, x)] != b {
                    report.violation("arity-src", format!("cell {k}#{x}: arity {a} but source arity {}", self.arity[k - 1][self.src(k, x)]));
                }
                if self.arity[k - 1][self.tgt(k, x)] != b {
                    report.violation("arity-tgt", format!("cell {k}#{x}: arity {a} but target arity {}", self.arity[k - 1][self.tgt(k, x)]));
                }
            }
        }
        report
    }

    /// Positions of k-cells keyed by their (source, target); all 0-cells share one key.
    pub fn face_index(&self) -> Vec<HashMap<(usize, usize), Vec<usize>>> {
        (0..=self.dims())
            .map(|k| {
                let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
                for x in 0..self.count(k) {
                    let key = if k == 0 { (0, 0) } else { (self.src(k, x), self.tgt(k, x)) };
                    m.entry(key).or_default().push(x);
                }
                m
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.carrier.to_json();
        v["arity"] = Value::Array(
            self.arity
                .iter()
                .map(|row| Value::Array(row.iter().map(|a| a.to_json()).collect()))
                .collect(),
        );
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let carrier = GlobularSet::from_json(v)?;
        let rows = v["arity"]
            .as_array()
            .ok_or_else(|| Error::Json("missing \"arity\"".into()))?;
        let arity = rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                row.as_array()
                    .ok_or_else(|| Error::Json("arity rows must be arrays".into()))?
                    .iter()
                    .map(|t| PastingDiagram::from_json(t, k))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Collection::new(carrier, arity)
    }
}

/// The collection with one cell in each dimension `0..=max_dim`, of arity the single-cell diagram.
pub fn unit_collection(max_dim: usize) -> Collection {
    let mut c = Collection::empty(max_dim);
    for k in 0..=max_dim {
        c.push(k, 0, 0, PastingDiagram::unit_tree(k));
    }
    c
}

/// Enumerates labellings of `shape` in ascending dimension. `cands` proposes
/// labels for a cell given the labels already placed on its faces.
pub fn for_each_labelling(
    shape: &PastingDiagram,
    cands: &mut dyn FnMut(usize, usize, Option<(usize, usize)>, &Labels<usize>) -> Vec<usize>,
    visit: &mut dyn FnMut(&Labels<usize>),
) {
    let info = shape_info(shape);
    let order: Vec<(usize, usize)> = (0..=shape.dim())
        .flat_map(|j| (0..info.count(j)).map(move |c| (j, c)))
        .collect();
    let mut partial: Labels<usize> = (0..=shape.dim()).map(|j| vec![usize::MAX; info.count(j)]).collect();
    fn go(
        at: usize,
        order: &[(usize, usize)],
        src: &[Vec<usize>],
        tgt: &[Vec<usize>],
        partial: &mut Labels<usize>,
        cands: &mut dyn FnMut(usize, usize, Option<(usize, usize)>, &Labels<usize>) -> Vec<usize>,
        visit: &mut dyn FnMut(&Labels<usize>),
    ) {
        let Some(&(j, c)) = order.get(at) else {
            visit(partial);
            return;
        };
        let faces = (j > 0).then(|| (partial[j - 1][src[j][c]], partial[j - 1][tgt[j][c]]));
        for x in cands(j, c, faces, partial) {
            partial[j][c] = x;
            go(at + 1, order, src, tgt, partial, cands, visit);
        }
        partial[j][c] = usize::MAX;
    }
    go(0, &order, &info.src, &info.tgt, &mut partial, cands, visit);
}

/// All labellings of `shape` by cells of `c` that form a map of globular sets.
pub fn labellings(c: &Collection, index: &[HashMap<(usize, usize), Vec<usize>>], shape: &PastingDiagram) -> Vec<Labels<usize>> {
    let mut out = Vec::new();
    for_each_labelling(
        shape,
        &mut |j, _, faces, _| {
            if j > c.dims() {
                return Vec::new();
            }
            index[j].get(&faces.unwrap_or((0, 0))).cloned().unwrap_or_default()
        },
        &mut |l| out.push(l.clone()),
    );
    out
}

/// Read access to a graded table of cells lying over pasting diagrams.
pub trait CellSource {
    fn cell_count(&self, d: usize) -> usize;
    fn cell_src(&self, d: usize, x: usize) -> usize;
    fn cell_tgt(&self, d: usize, x: usize) -> usize;
    fn cell_arity(&self, d: usize, x: usize) -> &PastingDiagram;
}

impl CellSource for Collection {
    fn cell_count(&self, d: usize) -> usize {
        self.count(d)
    }

    fn cell_src(&self, d: usize, x: usize) -> usize {
        self.src(d, x)
    }

    fn cell_tgt(&self, d: usize, x: usize) -> usize {
        self.tgt(d, x)
    }

    fn cell_arity(&self, d: usize, x: usize) -> &PastingDiagram {
        self.arity(d, x)
    }
}

struct DescPlan {
    k: usize,
    order: Vec<(usize, usize)>,
    /// `cofaces[j][c]`: (upper cell, is_target) pairs having `c` as a face.
    cofaces: Vec<Vec<Vec<(usize, bool)>>>,
}

/// Enumerates globular labellings of `shape` by cells of `cells`, top
/// dimension first. `top(c, chosen)` proposes labels for top cell `c` given the
/// labels of the earlier top cells; every lower cell is either forced by the
/// faces of a label above it or ranges over all cells of its dimension.
pub fn for_each_labelling_desc<C: CellSource + ?Sized>(
    cells: &C,
    shape: &PastingDiagram,
    top: &mut dyn FnMut(usize, &[usize]) -> Vec<usize>,
    visit: &mut dyn FnMut(&Labels<usize>),
) {
    let info = shape_info(shape);
    let k = shape.dim();
    let mut cofaces: Vec<Vec<Vec<(usize, bool)>>> = (0..=k).map(|j| vec![Vec::new(); info.count(j)]).collect();
    for j in 1..=k {
        for u in 0..info.count(j) {
            cofaces[j - 1][info.src[j][u]].push((u, false));
            cofaces[j - 1][info.tgt[j][u]].push((u, true));
        }
    }
    let plan = DescPlan {
        k,
        order: (0..=k).rev().flat_map(|j| (0..info.count(j)).map(move |c| (j, c))).collect(),
        cofaces,
    };
    let mut partial: Labels<usize> = (0..=k).map(|j| vec![usize::MAX; info.count(j)]).collect();
    desc_rec(cells, &plan, &info.src, &info.tgt, 0, &mut partial, top, visit);
}

#[allow(clippy::too_many_arguments)]
fn desc_rec<C: CellSource + ?Sized>(
    cells: &C,
    plan: &DescPlan,
    src: &[Vec<usize>],
    tgt: &[Vec<usize>],
    at: usize,
    partial: &mut Labels<usize>,
    top: &mut dyn FnMut(usize, &[usize]) -> Vec<usize>,
    visit: &mut dyn FnMut(&Labels<usize>),
) {
    let Some(&(j, c)) = plan.order.get(at) else {
        visit(partial);
        return;
    };
    let k = plan.k;
    let face_of = |y: usize, is_tgt: bool| if is_tgt { cells.cell_tgt(j + 1, y) } else { cells.cell_src(j + 1, y) };
    let cands = if j == k {
        top(c, &partial[k][..c])
    } else {
        let mut forced = None;
        for &(u, is_tgt) in &plan.cofaces[j][c] {
            let f = face_of(partial[j + 1][u], is_tgt);
            match forced {
                None => forced = Some(f),
                Some(prev) if prev != f => return,
                Some(_) => {}
            }
        }
        match forced {
            Some(f) => vec![f],
            None => (0..cells.cell_count(j)).collect(),
        }
    };
    'next: for x in cands {
        if j == k && k > 0 {
            // reject early when an earlier top cell disagrees on a shared face
            for (is_tgt, f) in [(false, src[k][c]), (true, tgt[k][c])] {
                let mine = if is_tgt { cells.cell_tgt(k, x) } else { cells.cell_src(k, x) };
                for &(u, u_tgt) in &plan.cofaces[k - 1][f] {
                    if u < c {
                        let y = partial[k][u];
                        let theirs = if u_tgt { cells.cell_tgt(k, y) } else { cells.cell_src(k, y) };
                        if theirs != mine {
                            continue 'next;
                        }
                    }
                }
            }
        }
        partial[j][c] = x;
        desc_rec(cells, plan, src, tgt, at + 1, partial, top, visit);
    }
    partial[j][c] = usize::MAX;
}

/// The tensor product of two collections, materialized within a bound on arity size.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub collection: Collection,
    /// `pairs[k][x]` is the (cell of the left factor, labelling by the right factor) behind cell `x`.
    pub pairs: Vec<Vec<(usize, Labels<usize>)>>,
    /// Number of pairs whose arity exceeded the bound.
    pub overflow: usize,
    index: Vec<HashMap<(usize, Labels<usize>), usize>>,
}

impl Tensor {
    pub fn lookup(&self, k: usize, a: usize, labels: &Labels<usize>) -> Option<usize> {
        self.index.get(k)?.get(&(a, labels.clone())).copied()
    }
}

/// `A ⊗ B`: k-cells are a k-cell `a` of `A` together with a labelling of
/// `arity(a)` by cells of `B`; the arity is the composite of the label arities.
pub fn tensor(a: &Collection, b: &Collection, max_arity_size: usize) -> Tensor {
    let dims = a.dims();
    let bidx = b.face_index();
    let mut out = Collection::empty(dims);
    let mut pairs: Vec<Vec<(usize, Labels<usize>)>> = vec![Vec::new(); dims + 1];
    let mut index: Vec<HashMap<(usize, Labels<usize>), usize>> = vec![HashMap::new(); dims + 1];
    let mut overflow = 0;
    for k in 0..=dims {
        for x in 0..a.count(k) {
            let shape = a.arity(k, x);
            for labels in labellings(b, &bidx, shape) {
                let refs: Vec<Vec<&PastingDiagram>> = labels
                    .iter()
                    .enumerate()
                    .map(|(j, row)| row.iter().map(|&y| b.arity(j, y)).collect())
                    .collect();
                let arity = Composite::new(shape, &refs).into_result();
                if arity.size() > max_arity_size {
                    overflow += 1;
                    continue;
                }
                let (s, t) = if k == 0 {
                    (0, 0)
                } else {
                    let sl = restrict_labels(shape, &labels, false);
                    let tl = restrict_labels(shape, &labels, true);
                    (
                        index[k - 1][&(a.src(k, x), sl)],
                        index[k - 1][&(a.tgt(k, x), tl)],
                    )
                };
                let id = out.push(k, s, t, arity);
                index[k].insert((x, labels.clone()), id);
                pairs[k].push((x, labels));
            }
        }
    }
    Tensor {
        collection: out,
        pairs,
        overflow,
        index,
    }
}

/// Builds the canonical bijection `A ⊗ (B ⊗ C) -> (A ⊗ B) ⊗ C` within the bound
/// and reports any cell that fails to map, collides, or changes arity.
pub fn tensor_associativity(a: &Collection, b: &Collection, c: &Collection, max_arity_size: usize) -> Report {
    let mut report = Report::new("tensor-associativity");
    let ab = tensor(a, b, usize::MAX);
    let bc = tensor(b, c, usize::MAX);
    let left = tensor(&ab.collection, c, max_arity_size);
    let right = tensor(a, &bc.collection, max_arity_size);
    for k in 0..=a.dims() {
        let mut hit = vec![false; left.collection.count(k)];
        for (x, (ax, chi)) in right.pairs[k].iter().enumerate() {
            let shape = a.arity(k, *ax);
            let phi: Labels<usize> = chi
                .iter()
                .enumerate()
                .map(|(j, row)| row.iter().map(|&y| bc.pairs[j][y].0).collect())
                .collect();
            let Some(abx) = ab.lookup(k, *ax, &phi) else {
                report.violation("missing-left-factor", format!("cell {k}#{x}"));
                continue;
            };
            let refs: Vec<Vec<&PastingDiagram>> = phi
                .iter()
                .enumerate()
                .map(|(j, row)| row.iter().map(|&y| b.arity(j, y)).collect())
                .collect();
            let comp = Composite::new(shape, &refs);
            let target = comp.result();
            let mut psi: Labels<usize> = (0..=k).map(|e| vec![usize::MAX; target.cell_count(e)]).collect();
            for (j, row) in chi.iter().enumerate() {
                for (cell, &y) in row.iter().enumerate() {
                    let inner = &bc.pairs[j][y].1;
                    for (e, xs) in comp.slice(j, cell).iter().enumerate() {
                        for (p, &r) in xs.iter().enumerate() {
                            psi[e][r] = inner[e][p];
                        }
                    }
                }
            }
            match left.lookup(k, abx, &psi) {
                None => report.violation("unmapped", format!("cell {k}#{x}")),
                Some(z) => {
                    if left.collection.arity(k, z) != right.collection.arity(k, x) {
                        report.violation("arity", format!("cell {k}#{x} -> {z}"));
                    }
                    if std::mem::replace(&mut hit[z], true) {
                        report.violation("collision", format!("cell {k}#{x} -> {z}"));
                    }
                }
            }
        }
        if right.collection.count(k) != left.collection.count(k) {
            report.violation(
                "cardinality",
                format!("dimension {k}: {} vs {}", right.collection.count(k), left.collection.count(k)),
            );
        }
    }
    report
}

/// The comparison `unit ⊗ B -> B` (or `A ⊗ unit -> A`) as a morphism of carriers,
/// checked to be a bijection preserving arity.
pub fn unit_law(t: &Tensor, expected: &Collection, left: bool) -> Report {
    let mut report = Report::new(if left { "left-unit" } else { "right-unit" });
    let mut maps = Vec::new();
    for k in 0..=expected.dims() {
        let mut row = Vec::new();
        let mut hit = vec![false; expected.count(k)];
        for (x, (ax, labels)) in t.pairs[k].iter().enumerate() {
            // left: the label on the single top cell; right: the left factor itself
            let y = if left { labels[k][0] } else { *ax };
            if expected.arity(k, y) != t.collection.arity(k, x) {
                report.violation("arity", format!("cell {k}#{x}"));
            }
            if std::mem::replace(&mut hit[y], true) {
                report.violation("collision", format!("cell {k}#{x}"));
            }
            row.push(y);
        }
        if hit.iter().any(|h| !h) {
            report.violation("not-surjective", format!("dimension {k}"));
        }
        maps.push(row);
    }
    report.absorb("morphism", GlobMorphism { maps }.check(t.collection.carrier(), expected.carrier()));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> Collection {
        let mut c = Collection::empty(0);
        c.push(0, 0, 0, PastingDiagram::dot());
        c
    }

    /// One 0-cell x and two arrows x -> x of arities chain(1) and chain(2).
    fn arrows() -> Collection {
        let mut c = Collection::empty(1);
        c.push(0, 0, 0, PastingDiagram::dot());
        c.push(1, 0, 0, PastingDiagram::chain(1));
        c.push(1, 0, 0, PastingDiagram::chain(2));
        c
    }

    #[test]
    fn checks() {
        assert!(Collection::empty(3).check().pass);
        assert!(point().check().pass);
        let u = unit_collection(3);
        assert!(u.check().pass);
        assert_eq!(u.arity(0, 0), &PastingDiagram::dot());
        assert_eq!(u.arity(2, 0), &PastingDiagram::unit_tree(2));

        let mut bad = Collection::empty(2);
        bad.push(0, 0, 0, PastingDiagram::dot());
        bad.push(1, 0, 0, PastingDiagram::chain(1));
        bad.push(2, 0, 0, PastingDiagram::columns(&[1, 1]));
        let r = bad.check();
        assert!(!r.pass);
        assert!(r.violations.iter().any(|v| v.kind == "arity-src"));
    }

    #[test]
    fn truncation() {
        assert_eq!(Collection::empty(3).truncate(1), Collection::empty(1));
        let t = unit_collection(3).truncate(1);
        assert_eq!((0..=t.dims()).map(|k| t.count(k)).sum::<usize>(), 2);
        assert_eq!(t.truncate(1), t);
        assert!(t.check().pass);
    }

    #[test]
    fn point_tensor_point() {
        let t = tensor(&point(), &point(), 9);
        assert_eq!(t.collection.count(0), 1);
        assert_eq!(t.overflow, 0);
    }

    #[test]
    fn unit_laws_hold_up_to_bijection() {
        let b = arrows();
        let u = unit_collection(1);
        let left = tensor(&u, &b, 9);
        assert!(unit_law(&left, &b, true).pass);
        let right = tensor(&b, &u, 9);
        assert!(unit_law(&right, &b, false).pass);
    }

    #[test]
    fn tensor_cells_lie_over_composites() {
        let b = arrows();
        let t = tensor(&b, &b, 7);
        assert!(t.collection.check().pass);
        // arrows of arity 2 labelled by two arrows of arity 2 compose to arity 4 (size 9)
        assert!(t.overflow > 0);
        assert!(t.collection.count(1) > 0);
    }

    #[test]
    fn associativity_small() {
        let b = arrows();
        let r = tensor_associativity(&b, &b, &b, 5);
        assert!(r.pass, "{:?}", r.violations);
    }

    #[test]
    fn json_round_trip() {
        let b = arrows();
        let v = b.to_json();
        assert_eq!(v["arity"][1][1].to_string(), "[[],[]]");
        assert_eq!(Collection::from_json(&v).unwrap(), b);
    }
}
