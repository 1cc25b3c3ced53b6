//! Bounded truncations of operads-with-contraction: the per-dimension cell
//! tables shared by the operad, contraction and interleave modules.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::collection::{for_each_labelling_desc, Bounds, CellSource, Collection};
use crate::error::{Error, Result};
use crate::pasting::{restrict_labels, shape_info, Composite, Labels, PastingDiagram};

/// A required contraction cell: a lift of the parallel pair `(a, b)` along `theta`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CtrCell {
    pub a: usize,
    pub b: usize,
    pub theta: PastingDiagram,
}

impl CtrCell {
    pub fn to_json(&self) -> Value {
        json!({"ctr": {"a": self.a, "b": self.b, "theta": self.theta.to_json()}})
    }
}

/// Where a generator of some dimension came from.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GenKey {
    Input(usize),
    Ctr(CtrCell),
}

impl GenKey {
    pub fn to_json(&self) -> Value {
        match self {
            GenKey::Input(i) => json!({"input": i}),
            GenKey::Ctr(c) => c.to_json(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Input,
    ContractionStep(usize),
    OperadStep { dim: usize, depth: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub key: GenKey,
    pub src: usize,
    pub tgt: usize,
    pub arity: PastingDiagram,
    pub provenance: Provenance,
}

/// A normal-form term: the operad unit, or a generator grafted onto a
/// labelling of its arity whose top labels are terms and whose lower labels
/// are cells one dimension down or more.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TermKey {
    Unit,
    Node { gen: usize, labels: Labels<usize> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TermEntry {
    pub key: TermKey,
    pub src: usize,
    pub tgt: usize,
    pub arity: PastingDiagram,
    /// Number of `Node` constructors.
    pub size: usize,
    pub depth: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TermTable {
    pub entries: Vec<TermEntry>,
    index: HashMap<TermKey, usize>,
    /// `embed[g]`: the term `Node(g, units)`, when it is within bounds.
    pub embed: Vec<Option<usize>>,
    /// Cumulative table size after each stratum; `strata[0] == 1` holds the unit.
    pub strata: Vec<usize>,
    pub overflow: usize,
}

impl TermTable {
    pub fn new() -> Self {
        TermTable::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, key: &TermKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn insert(&mut self, entry: TermEntry) -> usize {
        if let Some(&id) = self.index.get(&entry.key) {
            return id;
        }
        let id = self.entries.len();
        self.index.insert(entry.key.clone(), id);
        self.entries.push(entry);
        id
    }

    /// Number of strata after which the table stopped growing.
    pub fn stabilization_depth(&self) -> usize {
        self.strata.len() - 1
    }
}

/// All data of one dimension: its generators and, once the operad step has
/// run there, the normal-form terms over them.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Level {
    pub generators: Vec<Generator>,
    ctr_index: HashMap<CtrCell, usize>,
    pub terms: Option<TermTable>,
}

impl Level {
    pub fn push_generator(&mut self, g: Generator) -> usize {
        let id = self.generators.len();
        if let GenKey::Ctr(c) = &g.key {
            self.ctr_index.insert(c.clone(), id);
        }
        self.generators.push(g);
        id
    }

    pub fn ctr_generator(&self, c: &CtrCell) -> Option<usize> {
        self.ctr_index.get(c).copied()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct StepLog {
    pub step: String,
    pub added: usize,
    pub overflow: usize,
    pub depth: Option<usize>,
}

/// A collection with an operad structure up to `operad_dim` and a
/// contraction up to `contraction_dim`, held as immutable per-dimension levels.
#[derive(Clone, Debug)]
pub struct OwcState {
    pub bounds: Bounds,
    levels: Vec<Arc<Level>>,
    pub operad_dim: Option<usize>,
    pub contraction_dim: usize,
    pub log: Vec<StepLog>,
}

fn exempt(a: &PastingDiagram) -> bool {
    *a == PastingDiagram::unit_tree(a.dim())
}

/// Whether an arity may be materialized: within the size bound, or a unit shape.
pub fn arity_admissible(a: &PastingDiagram, bounds: &Bounds) -> bool {
    a.size() <= bounds.max_arity_size || exempt(a)
}

impl OwcState {
    /// Wraps a collection as generators. Cells above `max_dim`, with an
    /// inadmissible arity, or over a dropped face are left out and counted.
    pub fn from_collection(a: &Collection, bounds: Bounds) -> Result<Self> {
        bounds.validate()?;
        let report = a.check();
        if !report.pass {
            return Err(Error::Malformed(format!("input collection: {:?}", report.violations)));
        }
        let mut levels: Vec<Level> = (0..=bounds.max_dim).map(|_| Level::default()).collect();
        let mut dropped = 0;
        let mut renumber: Vec<Vec<Option<usize>>> = Vec::new();
        for k in 0..=a.dims() {
            let mut row = Vec::with_capacity(a.count(k));
            for x in 0..a.count(k) {
                let faces = if k == 0 {
                    Some((0, 0))
                } else {
                    renumber[k - 1][a.src(k, x)].zip(renumber[k - 1][a.tgt(k, x)])
                };
                let keep = k <= bounds.max_dim && arity_admissible(a.arity(k, x), &bounds);
                match faces.filter(|_| keep) {
                    Some((s, t)) => row.push(Some(levels[k].push_generator(Generator {
                        key: GenKey::Input(x),
                        src: s,
                        tgt: t,
                        arity: a.arity(k, x).clone(),
                        provenance: Provenance::Input,
                    }))),
                    None => {
                        dropped += 1;
                        row.push(None);
                    }
                }
            }
            renumber.push(row);
        }
        Ok(OwcState {
            bounds,
            levels: levels.into_iter().map(Arc::new).collect(),
            operad_dim: None,
            contraction_dim: 0,
            log: vec![StepLog {
                step: "input".into(),
                added: a.carrier().counts().iter().sum::<usize>() - dropped,
                overflow: dropped,
                depth: None,
            }],
        })
    }

    pub fn max_dim(&self) -> usize {
        self.bounds.max_dim
    }

    pub fn level(&self, d: usize) -> &Level {
        &self.levels[d]
    }

    pub fn level_arc(&self, d: usize) -> &Arc<Level> {
        &self.levels[d]
    }

    pub(crate) fn replace_level(&mut self, d: usize, level: Level) {
        self.levels[d] = Arc::new(level);
    }

    pub fn stage(&self) -> (usize, Option<usize>) {
        (self.contraction_dim, self.operad_dim)
    }

    pub fn terms(&self, d: usize) -> Option<&TermTable> {
        self.levels.get(d)?.terms.as_ref()
    }

    pub fn count(&self, d: usize) -> usize {
        match self.levels.get(d) {
            None => 0,
            Some(l) => l.terms.as_ref().map_or(l.generators.len(), |t| t.len()),
        }
    }

    pub fn src(&self, d: usize, x: usize) -> usize {
        let l = &self.levels[d];
        l.terms.as_ref().map_or_else(|| l.generators[x].src, |t| t.entries[x].src)
    }

    pub fn tgt(&self, d: usize, x: usize) -> usize {
        let l = &self.levels[d];
        l.terms.as_ref().map_or_else(|| l.generators[x].tgt, |t| t.entries[x].tgt)
    }

    pub fn arity(&self, d: usize, x: usize) -> &PastingDiagram {
        let l = &self.levels[d];
        match &l.terms {
            Some(t) => &t.entries[x].arity,
            None => &l.generators[x].arity,
        }
    }

    pub fn provenance(&self, d: usize, x: usize) -> Provenance {
        let l = &self.levels[d];
        let Some(t) = &l.terms else {
            return l.generators[x].provenance;
        };
        let e = &t.entries[x];
        match &e.key {
            TermKey::Node { gen, .. } if t.embed[*gen] == Some(x) => l.generators[*gen].provenance,
            _ => Provenance::OperadStep { dim: d, depth: e.depth },
        }
    }

    /// The cell a generator denotes: itself, or its embedding once terms exist.
    pub fn generator_cell(&self, d: usize, g: usize) -> Option<usize> {
        match &self.levels[d].terms {
            None => Some(g),
            Some(t) => t.embed[g],
        }
    }

    pub fn collection(&self) -> Collection {
        let mut c = Collection::empty(self.max_dim());
        for d in 0..=self.max_dim() {
            for x in 0..self.count(d) {
                let (s, t) = if d == 0 { (0, 0) } else { (self.src(d, x), self.tgt(d, x)) };
                c.push(d, s, t, self.arity(d, x).clone());
            }
        }
        c
    }

    pub fn unit(&self, d: usize) -> Option<usize> {
        self.terms(d).map(|_| 0)
    }

    /// Operad composition of the d-term `a` with a labelling of its arity.
    /// `None` when the composite falls outside the bounds.
    pub fn mult(&self, d: usize, a: usize, labels: &Labels<usize>) -> Option<usize> {
        let table = self.terms(d)?;
        match &table.entries.get(a)?.key {
            TermKey::Unit => labels.get(d)?.first().copied(),
            TermKey::Node { gen, labels: psi } => {
                let g = &self.levels[d].generators[*gen];
                let refs: Vec<Vec<&PastingDiagram>> = psi
                    .iter()
                    .enumerate()
                    .map(|(j, row)| row.iter().map(|&y| self.arity(j, y)).collect())
                    .collect();
                let comp = Composite::new(&g.arity, &refs);
                let mut out: Labels<usize> = Vec::with_capacity(psi.len());
                for (j, row) in psi.iter().enumerate() {
                    let mut r = Vec::with_capacity(row.len());
                    for (c, &y) in row.iter().enumerate() {
                        r.push(self.mult(j, y, &comp.pull(j, c, labels))?);
                    }
                    out.push(r);
                }
                table.lookup(&TermKey::Node { gen: *gen, labels: out })
            }
        }
    }

    /// Composition with every label checked against the arity of `a` and the faces.
    pub fn compose(&self, d: usize, a: usize, labels: &Labels<usize>) -> Result<Option<usize>> {
        if self.terms(d).is_none() {
            return Err(Error::NotOperad(format!("no operad structure at dimension {d}")));
        }
        if a >= self.count(d) {
            return Err(Error::Malformed(format!("no {d}-cell {a}")));
        }
        self.check_labelling(self.arity(d, a), labels)?;
        Ok(self.mult(d, a, labels))
    }

    /// Checks a labelling of `shape` by cells of this state is a globular map.
    pub fn check_labelling(&self, shape: &PastingDiagram, labels: &Labels<usize>) -> Result<()> {
        let info = shape_info(shape);
        if labels.len() != shape.dim() + 1 || (0..=shape.dim()).any(|j| labels[j].len() != info.count(j)) {
            return Err(Error::LabelCount(format!("labelling does not match {shape}")));
        }
        for (j, row) in labels.iter().enumerate() {
            if let Some(&bad) = row.iter().find(|&&x| x >= self.count(j)) {
                return Err(Error::Malformed(format!("no {j}-cell {bad}")));
            }
        }
        for j in 1..=shape.dim() {
            for c in 0..info.count(j) {
                let x = labels[j][c];
                if self.src(j, x) != labels[j - 1][info.src[j][c]] || self.tgt(j, x) != labels[j - 1][info.tgt[j][c]] {
                    return Err(Error::Incompatible(info.cells[j][c].to_string()));
                }
            }
        }
        Ok(())
    }

    /// Source and target of `Node(g, labels)`: the generator's faces composed
    /// with the boundary restrictions of the labelling.
    pub fn node_faces(&self, d: usize, g: &Generator, labels: &Labels<usize>) -> Option<(usize, usize)> {
        if d == 0 {
            return Some((0, 0));
        }
        let s = self.mult(d - 1, g.src, &restrict_labels(&g.arity, labels, false))?;
        let t = self.mult(d - 1, g.tgt, &restrict_labels(&g.arity, labels, true))?;
        Some((s, t))
    }

    /// The contraction cell chosen for `(a, b, theta)` at dimension `d`, if materialized.
    pub fn gamma(&self, d: usize, c: &CtrCell) -> Option<usize> {
        if d == 0 || d > self.contraction_dim {
            return None;
        }
        let g = self.levels.get(d)?.ctr_generator(c)?;
        self.generator_cell(d, g)
    }

    /// Every materialized contraction cell at dimension `d`, in generator order.
    pub fn gamma_entries(&self, d: usize) -> Vec<(CtrCell, usize)> {
        if d == 0 || d > self.contraction_dim || d > self.max_dim() {
            return Vec::new();
        }
        self.levels[d]
            .generators
            .iter()
            .enumerate()
            .filter_map(|(g, gen)| match &gen.key {
                GenKey::Ctr(c) => self.generator_cell(d, g).map(|x| (c.clone(), x)),
                GenKey::Input(_) => None,
            })
            .collect()
    }

    /// The term encoding of a cell: `{"unit": d}`, `{"gen": g}` or `{"node": ...}`.
    pub fn cell_term_json(&self, d: usize, x: usize) -> Value {
        let l = &self.levels[d];
        let Some(t) = &l.terms else {
            return json!({"gen": x});
        };
        match &t.entries[x].key {
            TermKey::Unit => json!({"unit": d}),
            TermKey::Node { gen, .. } if t.embed[*gen] == Some(x) => json!({"gen": gen}),
            TermKey::Node { gen, labels } => json!({"node": {"gen": gen, "labels": labels}}),
        }
    }

    /// All defined compositions `(a, labels) -> result` at dimension `d`, in canonical order.
    pub fn mult_entries(&self, d: usize) -> Vec<(usize, Labels<usize>, usize)> {
        let Some(table) = self.terms(d) else {
            return Vec::new();
        };
        let cap = self.bounds.max_term_size;
        let mut out = Vec::new();
        for (a, e) in table.entries.iter().enumerate() {
            let budget = cap - e.size.min(cap);
            for_each_labelling_desc(
                self,
                &e.arity,
                &mut |_, chosen| {
                    let used: usize = chosen.iter().map(|&y| table.entries[y].size).sum();
                    (0..table.len())
                        .filter(|&y| used + table.entries[y].size <= budget)
                        .collect()
                },
                &mut |labels| {
                    if let Some(r) = self.mult(d, a, labels) {
                        out.push((a, labels.clone(), r));
                    }
                },
            );
        }
        out
    }

    /// Composition tables of dimensions below `dims` that carry an operad structure.
    pub fn mult_table_json(&self, dims: usize) -> Value {
        let dims = dims.min(self.operad_dim.map_or(0, |j| j + 1));
        Value::Array(
            (0..dims)
                .map(|d| {
                    Value::Array(
                        self.mult_entries(d)
                            .into_iter()
                            .map(|(a, labels, r)| json!({"a": a, "labels": labels, "result": r}))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Contraction tables of dimensions `1..=upto`.
    pub fn gamma_table_json(&self, upto: usize) -> Value {
        Value::Array(
            (1..=upto.min(self.contraction_dim).min(self.max_dim()))
                .map(|d| {
                    Value::Array(
                        self.gamma_entries(d)
                            .into_iter()
                            .map(|(c, x)| {
                                json!({"a": c.a, "b": c.b, "theta": c.theta.to_json(), "cell": self.cell_term_json(d, x)})
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// The cells of one dimension with their generators, faces, arities and provenance.
    pub fn dim_json(&self, d: usize) -> Value {
        let l = &self.levels[d];
        let generators: Vec<Value> = l
            .generators
            .iter()
            .map(|g| {
                json!({"key": g.key.to_json(), "src": g.src, "tgt": g.tgt, "arity": g.arity.to_json(), "provenance": g.provenance})
            })
            .collect();
        let cells: Vec<Value> = (0..self.count(d))
            .map(|x| {
                json!({
                    "term": self.cell_term_json(d, x),
                    "src": self.src(d, x),
                    "tgt": self.tgt(d, x),
                    "arity": self.arity(d, x).to_json(),
                    "provenance": self.provenance(d, x),
                })
            })
            .collect();
        json!({"dim": d, "generators": generators, "cells": cells})
    }

    /// Full serialization; identical states give byte-identical documents.
    pub fn to_json(&self) -> Value {
        json!({
            "stage": [self.contraction_dim, self.operad_dim],
            "bounds": self.bounds,
            "cells": (0..=self.max_dim()).map(|d| self.dim_json(d)).collect::<Vec<_>>(),
            "mult": self.mult_table_json(usize::MAX),
            "gamma": self.gamma_table_json(usize::MAX),
            "log": self.log,
        })
    }

    /// Serialization of dimensions `0..=k` only: cells, compositions and contraction cells.
    pub fn lower_json(&self, k: usize) -> Value {
        json!({
            "cells": (0..=k.min(self.max_dim())).map(|d| self.dim_json(d)).collect::<Vec<_>>(),
            "mult": self.mult_table_json(k + 1),
            "gamma": self.gamma_table_json(k),
        })
    }
}

impl CellSource for OwcState {
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
