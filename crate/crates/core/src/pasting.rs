//! Globular pasting diagrams encoded as Batanin trees.
//!
//! A k-dimensional pasting diagram is a plane tree of height at most k. The
//! children of a k-diagram are its columns, each a (k-1)-diagram; a column
//! with no children is a degenerate (identity) column. The unique 0-diagram
//! is the dot.
//!
//! Cells of a diagram are addressed by paths: a 0-cell is `[p]` with `p` a
//! boundary point `0..=m`, and a j-cell (j >= 1) is `[i, ..rest]` with `i` a
//! 1-based column index and `rest` a (j-1)-address inside column `i`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PastingDiagram {
    dim: usize,
    children: Vec<PastingDiagram>,
}

impl PastingDiagram {
    pub fn dot() -> Self {
        PastingDiagram {
            dim: 0,
            children: Vec::new(),
        }
    }

    pub fn new(dim: usize, children: Vec<PastingDiagram>) -> Result<Self> {
        if dim == 0 && !children.is_empty() {
            return Err(Error::ChildDimension {
                parent: 0,
                child: children[0].dim,
            });
        }
        if let Some(bad) = children.iter().find(|c| c.dim + 1 != dim) {
            return Err(Error::ChildDimension {
                parent: dim,
                child: bad.dim,
            });
        }
        Ok(PastingDiagram { dim, children })
    }

    /// A composable chain of `n` arrows.
    pub fn chain(n: usize) -> Self {
        PastingDiagram {
            dim: 1,
            children: vec![Self::dot(); n],
        }
    }

    /// A 2-diagram whose i-th column holds `heights[i]` vertically composable 2-cells.
    pub fn columns(heights: &[usize]) -> Self {
        PastingDiagram {
            dim: 2,
            children: heights.iter().map(|&h| Self::chain(h)).collect(),
        }
    }

    /// The single k-cell diagram.
    pub fn unit_tree(k: usize) -> Self {
        let mut d = Self::dot();
        for dim in 1..=k {
            d = PastingDiagram {
                dim,
                children: vec![d],
            };
        }
        d
    }

    /// The same tree viewed one dimension higher, i.e. the identity on this diagram.
    pub fn degenerate(&self) -> Self {
        PastingDiagram {
            dim: self.dim + 1,
            children: self.children.iter().map(|c| c.degenerate()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn children(&self) -> &[PastingDiagram] {
        &self.children
    }

    pub fn column_count(&self) -> usize {
        self.children.len()
    }

    pub fn is_dot(&self) -> bool {
        self.dim == 0
    }

    pub fn boundary(&self) -> Result<Self> {
        match self.dim {
            0 => Err(Error::BoundaryOfDot),
            1 => Ok(Self::dot()),
            d => Ok(PastingDiagram {
                dim: d - 1,
                children: self
                    .children
                    .iter()
                    .map(|c| c.boundary().expect("children have positive dimension"))
                    .collect(),
            }),
        }
    }

    /// Number of j-cells; zero when `j` exceeds the dimension.
    pub fn cell_count(&self, j: usize) -> usize {
        if j > self.dim {
            0
        } else if j == 0 {
            self.children.len() + 1
        } else {
            self.children.iter().map(|c| c.cell_count(j - 1)).sum()
        }
    }

    /// Total number of cells over all dimensions.
    pub fn size(&self) -> usize {
        self.children.len() + 1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Number of cells of the top dimension.
    pub fn top_cells(&self) -> usize {
        self.cell_count(self.dim)
    }

    pub fn cells(&self, j: usize) -> Result<Vec<CellAddr>> {
        if j > self.dim {
            return Err(Error::CellDimension {
                requested: j,
                dim: self.dim,
            });
        }
        let mut out = Vec::with_capacity(self.cell_count(j));
        let mut prefix = Vec::with_capacity(j + 1);
        self.push_cells(j, &mut prefix, &mut out);
        Ok(out)
    }

    fn push_cells(&self, j: usize, prefix: &mut Vec<usize>, out: &mut Vec<CellAddr>) {
        if j == 0 {
            for p in 0..=self.children.len() {
                let mut path = prefix.clone();
                path.push(p);
                out.push(CellAddr(path));
            }
            return;
        }
        for (i, child) in self.children.iter().enumerate() {
            prefix.push(i + 1);
            child.push_cells(j - 1, prefix, out);
            prefix.pop();
        }
    }

    pub fn contains(&self, c: &CellAddr) -> bool {
        let path = c.path();
        if path.is_empty() || c.dim() > self.dim {
            return false;
        }
        let mut d = self;
        for &i in &path[..path.len() - 1] {
            if i == 0 || i > d.children.len() {
                return false;
            }
            d = &d.children[i - 1];
        }
        path[path.len() - 1] <= d.children.len()
    }

    fn require(&self, c: &CellAddr) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::InvalidAddress(format!("{c} in {self}")))
        }
    }

    pub fn cell_src(&self, c: &CellAddr) -> Result<CellAddr> {
        self.require(c)?;
        if c.dim() == 0 {
            return Err(Error::InvalidAddress(format!("{c} has no source")));
        }
        Ok(self.face(c.path(), false))
    }

    pub fn cell_tgt(&self, c: &CellAddr) -> Result<CellAddr> {
        self.require(c)?;
        if c.dim() == 0 {
            return Err(Error::InvalidAddress(format!("{c} has no target")));
        }
        Ok(self.face(c.path(), true))
    }

    fn face(&self, path: &[usize], target: bool) -> CellAddr {
        let i = path[0];
        if path.len() == 2 {
            return CellAddr(vec![if target { i } else { i - 1 }]);
        }
        let inner = self.children[i - 1].face(&path[1..], target);
        let mut out = Vec::with_capacity(path.len() - 1);
        out.push(i);
        out.extend_from_slice(inner.path());
        CellAddr(out)
    }

    /// Where a cell of the boundary sits in this diagram, as its source (or target).
    pub fn boundary_embed(&self, e: &CellAddr, target: bool) -> Result<CellAddr> {
        if self.dim == 0 {
            return Err(Error::BoundaryOfDot);
        }
        let path = e.path();
        if self.dim == 1 {
            if path != [0] {
                return Err(Error::InvalidAddress(format!("{e} in boundary of {self}")));
            }
            return Ok(CellAddr(vec![if target { self.children.len() } else { 0 }]));
        }
        if path.len() == 1 {
            if path[0] > self.children.len() {
                return Err(Error::InvalidAddress(format!("{e} in boundary of {self}")));
            }
            return Ok(e.clone());
        }
        let i = path[0];
        if i == 0 || i > self.children.len() {
            return Err(Error::InvalidAddress(format!("{e} in boundary of {self}")));
        }
        let inner = self.children[i - 1].boundary_embed(&CellAddr(path[1..].to_vec()), target)?;
        let mut out = vec![i];
        out.extend_from_slice(inner.path());
        Ok(CellAddr(out))
    }

    /// Reads the nested-array encoding at ambient dimension `dim`.
    pub fn from_json(value: &Value, dim: usize) -> Result<Self> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Json(format!("expected an array, found {value}")))?;
        if dim == 0 {
            if !items.is_empty() {
                return Err(Error::Json(format!("tree {value} is too tall")));
            }
            return Ok(Self::dot());
        }
        let children = items
            .iter()
            .map(|v| Self::from_json(v, dim - 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(PastingDiagram { dim, children })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.children.iter().map(|c| c.to_json()).collect())
    }
}

impl Serialize for PastingDiagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.children.len()))?;
        for c in &self.children {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl fmt::Display for PastingDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PastingDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dim, self)
    }
}

/// Address of a cell inside a pasting diagram; the dimension is `path.len() - 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CellAddr(Vec<usize>);

impl CellAddr {
    pub fn point(p: usize) -> Self {
        CellAddr(vec![p])
    }

    /// The address `(column, inner)`.
    pub fn in_column(column: usize, inner: &CellAddr) -> Self {
        let mut path = Vec::with_capacity(inner.0.len() + 1);
        path.push(column);
        path.extend_from_slice(&inner.0);
        CellAddr(path)
    }

    pub fn from_path(path: Vec<usize>) -> Result<Self> {
        if path.is_empty() {
            return Err(Error::InvalidAddress("empty path".into()));
        }
        Ok(CellAddr(path))
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    /// JSON form `[j, path...]`.
    pub fn to_json(&self) -> Value {
        let mut v = vec![Value::from(self.dim())];
        v.extend(self.0.iter().map(|&x| Value::from(x)));
        Value::Array(v)
    }
}

impl fmt::Display for CellAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.dim(), self.0)
    }
}

/// Cell tables of one diagram in canonical order, with faces and boundary
/// embeddings resolved to ordinals.
#[derive(Debug)]
pub struct ShapeInfo {
    pub cells: Vec<Vec<CellAddr>>,
    /// `src[j][c]` is the ordinal of the source (j-1)-cell; empty for j = 0.
    pub src: Vec<Vec<usize>>,
    pub tgt: Vec<Vec<usize>>,
    /// `bsrc[j][e]`: ordinal here of the j-cell `e` of the boundary under the source embedding.
    pub bsrc: Vec<Vec<usize>>,
    pub btgt: Vec<Vec<usize>>,
}

impl ShapeInfo {
    fn build(d: &PastingDiagram) -> Self {
        let cells: Vec<Vec<CellAddr>> = (0..=d.dim).map(|j| d.cells(j).expect("j <= dim")).collect();
        let ord = |a: &CellAddr| cells[a.dim()].binary_search(a).expect("valid cell");
        let mut src = vec![Vec::new()];
        let mut tgt = vec![Vec::new()];
        for j in 1..=d.dim {
            src.push(cells[j].iter().map(|c| ord(&d.face(c.path(), false))).collect());
            tgt.push(cells[j].iter().map(|c| ord(&d.face(c.path(), true))).collect());
        }
        let (mut bsrc, mut btgt) = (Vec::new(), Vec::new());
        if d.dim > 0 {
            let b = d.boundary().expect("positive dimension");
            for j in 0..d.dim {
                let bc = b.cells(j).expect("j < dim");
                bsrc.push(bc.iter().map(|e| ord(&d.boundary_embed(e, false).unwrap())).collect());
                btgt.push(bc.iter().map(|e| ord(&d.boundary_embed(e, true).unwrap())).collect());
            }
        }
        ShapeInfo {
            cells,
            src,
            tgt,
            bsrc,
            btgt,
        }
    }

    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn count(&self, j: usize) -> usize {
        self.cells.get(j).map_or(0, |c| c.len())
    }

    pub fn ordinal(&self, a: &CellAddr) -> Option<usize> {
        self.cells.get(a.dim())?.binary_search(a).ok()
    }
}

thread_local! {
    static SHAPES: RefCell<HashMap<PastingDiagram, Rc<ShapeInfo>>> = RefCell::new(HashMap::new());
}

/// Memoized cell tables for `d`.
pub fn shape_info(d: &PastingDiagram) -> Rc<ShapeInfo> {
    if let Some(info) = SHAPES.with(|s| s.borrow().get(d).cloned()) {
        return info;
    }
    let info = Rc::new(ShapeInfo::build(d));
    SHAPES.with(|s| s.borrow_mut().insert(d.clone(), info.clone()));
    info
}

/// Per-dimension label table aligned with the canonical cell order of a shape.
pub type Labels<L> = Vec<Vec<L>>;

/// A pasting diagram with a label on every cell.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LabelledDiagram<L> {
    shape: PastingDiagram,
    labels: Labels<L>,
}

impl<L: Clone> LabelledDiagram<L> {
    pub fn new(shape: PastingDiagram, labels: Labels<L>) -> Result<Self> {
        if labels.len() != shape.dim + 1 {
            return Err(Error::LabelCount(format!(
                "{} label rows for a {}-diagram",
                labels.len(),
                shape.dim
            )));
        }
        for (j, row) in labels.iter().enumerate() {
            if row.len() != shape.cell_count(j) {
                return Err(Error::LabelCount(format!(
                    "{} labels for {} cells of dimension {j}",
                    row.len(),
                    shape.cell_count(j)
                )));
            }
        }
        Ok(LabelledDiagram { shape, labels })
    }

    pub fn from_fn(shape: PastingDiagram, mut f: impl FnMut(&CellAddr) -> L) -> Self {
        let info = shape_info(&shape);
        let labels = info.cells.iter().map(|row| row.iter().map(&mut f).collect()).collect();
        LabelledDiagram { shape, labels }
    }

    pub fn shape(&self) -> &PastingDiagram {
        &self.shape
    }

    pub fn labels(&self) -> &Labels<L> {
        &self.labels
    }

    pub fn into_labels(self) -> Labels<L> {
        self.labels
    }

    pub fn label(&self, a: &CellAddr) -> Option<&L> {
        let ord = shape_info(&self.shape).ordinal(a)?;
        Some(&self.labels[a.dim()][ord])
    }

    /// The labelling of the source boundary.
    pub fn restrict_source(&self) -> Result<Self> {
        self.restrict(false)
    }

    pub fn restrict_target(&self) -> Result<Self> {
        self.restrict(true)
    }

    fn restrict(&self, target: bool) -> Result<Self> {
        let b = self.shape.boundary()?;
        let labels = restrict_labels(&self.shape, &self.labels, target);
        Ok(LabelledDiagram { shape: b, labels })
    }

    pub fn map<M>(&self, mut f: impl FnMut(usize, &L) -> M) -> LabelledDiagram<M> {
        LabelledDiagram {
            shape: self.shape.clone(),
            labels: self
                .labels
                .iter()
                .enumerate()
                .map(|(j, row)| row.iter().map(|l| f(j, l)).collect())
                .collect(),
        }
    }

    /// Checks that every label sits over the labels of its faces.
    pub fn check_compatible(
        &self,
        src: impl Fn(&L) -> Option<L>,
        tgt: impl Fn(&L) -> Option<L>,
    ) -> Result<()>
    where
        L: PartialEq,
    {
        let info = shape_info(&self.shape);
        for j in 1..=self.shape.dim {
            for c in 0..info.count(j) {
                let l = &self.labels[j][c];
                let s = &self.labels[j - 1][info.src[j][c]];
                let t = &self.labels[j - 1][info.tgt[j][c]];
                if src(l).as_ref() != Some(s) || tgt(l).as_ref() != Some(t) {
                    return Err(Error::Incompatible(info.cells[j][c].to_string()));
                }
            }
        }
        Ok(())
    }
}

/// Restricts a label table of `shape` along its source (or target) boundary embedding.
pub fn restrict_labels<L: Clone>(shape: &PastingDiagram, labels: &Labels<L>, target: bool) -> Labels<L> {
    let info = shape_info(shape);
    let emb = if target { &info.btgt } else { &info.bsrc };
    emb.iter()
        .enumerate()
        .map(|(j, row)| row.iter().map(|&o| labels[j][o].clone()).collect())
        .collect()
}

impl<L: Serialize> Serialize for LabelledDiagram<L> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a, L> {
            addr: Value,
            label: &'a L,
        }
        #[derive(Serialize)]
        struct Doc<'a, L> {
            shape: &'a PastingDiagram,
            labels: Vec<Entry<'a, L>>,
        }
        let info = shape_info(&self.shape);
        let mut labels = Vec::new();
        for (j, row) in info.cells.iter().enumerate() {
            for (c, addr) in row.iter().enumerate() {
                labels.push(Entry {
                    addr: addr.to_json(),
                    label: &self.labels[j][c],
                });
            }
        }
        Doc {
            shape: &self.shape,
            labels,
        }
        .serialize(serializer)
    }
}

/// The result of composing a labelled diagram, together with where each
/// label's cells land in the composite.
#[derive(Debug, Clone)]
pub struct Composite {
    result: PastingDiagram,
    /// `slices[j][c][e][x]`: ordinal in the result of the e-cell `x` of the label on outer j-cell `c`.
    slices: Vec<Vec<Vec<Vec<usize>>>>,
}

impl Composite {
    /// Composes `shape` with the diagrams in `labels` without validating them.
    pub fn new(shape: &PastingDiagram, labels: &[Vec<&PastingDiagram>]) -> Self {
        let info = shape_info(shape);
        compose(shape, &info, labels)
    }

    pub fn result(&self) -> &PastingDiagram {
        &self.result
    }

    pub fn into_result(self) -> PastingDiagram {
        self.result
    }

    /// Result ordinals, per dimension, of the cells of the label on outer cell `(j, c)`.
    pub fn slice(&self, j: usize, c: usize) -> &[Vec<usize>] {
        &self.slices[j][c]
    }

    /// Pulls a labelling of the composite back along one outer cell's slice.
    pub fn pull<L: Clone>(&self, j: usize, c: usize, labels: &Labels<L>) -> Labels<L> {
        self.slices[j][c]
            .iter()
            .enumerate()
            .map(|(e, row)| row.iter().map(|&x| labels[e][x].clone()).collect())
            .collect()
    }
}

fn compose(shape: &PastingDiagram, info: &ShapeInfo, labels: &[Vec<&PastingDiagram>]) -> Composite {
    if shape.dim == 0 {
        return Composite {
            result: PastingDiagram::dot(),
            slices: vec![vec![vec![vec![0]]]],
        };
    }
    let k = shape.dim;
    let m = shape.children.len();

    // Contiguous block of each column inside the outer j-cells (j >= 1).
    let mut block_start = vec![vec![0usize; m + 1]; k + 1];
    for j in 1..=k {
        for (i, child) in shape.children.iter().enumerate() {
            block_start[j][i + 1] = block_start[j][i] + child.cell_count(j - 1);
        }
    }
    let widths: Vec<usize> = (0..m)
        .map(|i| labels[1][block_start[1][i]].column_count())
        .collect();
    let mut offsets = vec![0usize; m + 1];
    for i in 0..m {
        offsets[i + 1] = offsets[i] + widths[i];
    }

    let mut subs: Vec<Vec<Composite>> = Vec::with_capacity(m);
    for (i, child) in shape.children.iter().enumerate() {
        let child_info = shape_info(child);
        let mut per_t = Vec::with_capacity(widths[i]);
        for t in 0..widths[i] {
            let sublabels: Vec<Vec<&PastingDiagram>> = (0..k)
                .map(|jj| {
                    (0..child_info.count(jj))
                        .map(|o| &labels[jj + 1][block_start[jj + 1][i] + o].children[t])
                        .collect()
                })
                .collect();
            per_t.push(compose(child, &child_info, &sublabels));
        }
        subs.push(per_t);
    }

    let columns: Vec<PastingDiagram> = subs
        .iter()
        .flat_map(|row| row.iter().map(|s| s.result.clone()))
        .collect();
    // res_start[e][col]: first result e-cell (e >= 1) lying in result column `col`.
    let mut res_start = vec![vec![0usize; columns.len() + 1]; k + 1];
    for e in 1..=k {
        for (col, c) in columns.iter().enumerate() {
            res_start[e][col + 1] = res_start[e][col] + c.cell_count(e - 1);
        }
    }

    let mut slices: Vec<Vec<Vec<Vec<usize>>>> = Vec::with_capacity(k + 1);
    slices.push((0..=m).map(|p| vec![vec![offsets[p]]]).collect());
    for j in 1..=k {
        let mut row = Vec::with_capacity(info.count(j));
        for i in 0..m {
            let child_cells = block_start[j][i + 1] - block_start[j][i];
            for local in 0..child_cells {
                let label = labels[j][block_start[j][i] + local];
                let mut per_e: Vec<Vec<usize>> = Vec::with_capacity(j + 1);
                per_e.push((0..=widths[i]).map(|q| offsets[i] + q).collect());
                for e in 1..=j {
                    let mut xs = Vec::with_capacity(label.cell_count(e));
                    for t in 0..widths[i] {
                        let col = offsets[i] + t;
                        for &x in &subs[i][t].slices[j - 1][local][e - 1] {
                            xs.push(res_start[e][col] + x);
                        }
                    }
                    per_e.push(xs);
                }
                row.push(per_e);
            }
        }
        slices.push(row);
    }

    Composite {
        result: PastingDiagram {
            dim: k,
            children: columns,
        },
        slices,
    }
}

/// Validates a diagram labelled by diagrams: a j-cell carries a j-diagram and
/// every face carries the boundary of the label above it.
pub fn check_diagram_labels(d: &LabelledDiagram<PastingDiagram>) -> Result<()> {
    let info = shape_info(&d.shape);
    for (j, row) in d.labels.iter().enumerate() {
        for (c, l) in row.iter().enumerate() {
            if l.dim != j {
                return Err(Error::LabelDimension {
                    addr: info.cells[j][c].to_string(),
                    expected: j,
                    found: l.dim,
                });
            }
        }
    }
    for j in 1..=d.shape.dim {
        for c in 0..info.count(j) {
            let b = d.labels[j][c].boundary()?;
            if d.labels[j - 1][info.src[j][c]] != b || d.labels[j - 1][info.tgt[j][c]] != b {
                return Err(Error::Incompatible(info.cells[j][c].to_string()));
            }
        }
    }
    Ok(())
}

/// Composes a diagram of diagrams into a single diagram.
pub fn substitute(d: &LabelledDiagram<PastingDiagram>) -> Result<PastingDiagram> {
    check_diagram_labels(d)?;
    let refs: Vec<Vec<&PastingDiagram>> = d.labels.iter().map(|r| r.iter().collect()).collect();
    Ok(Composite::new(&d.shape, &refs).into_result())
}

/// Composes a diagram labelled by labelled diagrams into one labelled diagram.
pub fn flatten<L: Clone + PartialEq>(d: &LabelledDiagram<LabelledDiagram<L>>) -> Result<LabelledDiagram<L>> {
    let info = shape_info(&d.shape);
    for (j, row) in d.labels.iter().enumerate() {
        for (c, l) in row.iter().enumerate() {
            if l.shape.dim != j {
                return Err(Error::LabelDimension {
                    addr: info.cells[j][c].to_string(),
                    expected: j,
                    found: l.shape.dim,
                });
            }
        }
    }
    for j in 1..=d.shape.dim {
        for c in 0..info.count(j) {
            let l = &d.labels[j][c];
            if d.labels[j - 1][info.src[j][c]] != l.restrict_source()?
                || d.labels[j - 1][info.tgt[j][c]] != l.restrict_target()?
            {
                return Err(Error::Incompatible(info.cells[j][c].to_string()));
            }
        }
    }
    let refs: Vec<Vec<&PastingDiagram>> = d.labels.iter().map(|r| r.iter().map(|l| &l.shape).collect()).collect();
    let comp = Composite::new(&d.shape, &refs);
    let result = comp.result.clone();
    let mut out: Vec<Vec<Option<L>>> = (0..=result.dim).map(|e| vec![None; result.cell_count(e)]).collect();
    for (j, row) in d.labels.iter().enumerate() {
        for (c, l) in row.iter().enumerate() {
            for (e, xs) in comp.slice(j, c).iter().enumerate() {
                for (x, &r) in xs.iter().enumerate() {
                    let v = &l.labels[e][x];
                    match &out[e][r] {
                        Some(prev) if prev != v => {
                            return Err(Error::Incompatible(format!("composite cell {e}#{r}")))
                        }
                        Some(_) => {}
                        None => out[e][r] = Some(v.clone()),
                    }
                }
            }
        }
    }
    let labels = out
        .into_iter()
        .map(|row| row.into_iter().map(|l| l.expect("every composite cell lies in some label")).collect())
        .collect();
    Ok(LabelledDiagram { shape: result, labels })
}

/// All diagrams of dimension exactly `k` with at most `max_size` cells,
/// ordered by size and then structurally.
pub fn enumerate_trees(k: usize, max_size: usize) -> Vec<PastingDiagram> {
    let mut out = trees_upto(k, max_size);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    out
}

fn trees_upto(k: usize, max_size: usize) -> Vec<PastingDiagram> {
    if max_size == 0 {
        return Vec::new();
    }
    if k == 0 {
        return vec![PastingDiagram::dot()];
    }
    // size = 1 + sum over columns of (1 + size(column))
    let pool = trees_upto(k - 1, max_size.saturating_sub(2));
    let mut out = Vec::new();
    let mut stack = Vec::new();
    sequences(&pool, max_size - 1, &mut stack, &mut |cols| {
        out.push(PastingDiagram {
            dim: k,
            children: cols.to_vec(),
        })
    });
    out
}

fn sequences(
    pool: &[PastingDiagram],
    budget: usize,
    stack: &mut Vec<PastingDiagram>,
    emit: &mut dyn FnMut(&[PastingDiagram]),
) {
    emit(stack);
    for c in pool {
        let cost = 1 + c.size();
        if cost <= budget {
            stack.push(c.clone());
            sequences(pool, budget - cost, stack, emit);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d201() -> PastingDiagram {
        PastingDiagram::columns(&[2, 0, 1])
    }

    #[test]
    fn unit_trees() {
        assert_eq!(PastingDiagram::unit_tree(0), PastingDiagram::dot());
        assert_eq!(PastingDiagram::unit_tree(1), PastingDiagram::chain(1));
        assert_eq!(PastingDiagram::unit_tree(2), PastingDiagram::columns(&[1]));
        assert_eq!(PastingDiagram::unit_tree(3).boundary().unwrap(), PastingDiagram::unit_tree(2));
    }

    #[test]
    fn boundaries() {
        assert_eq!(PastingDiagram::chain(3).boundary().unwrap(), PastingDiagram::dot());
        assert_eq!(d201().boundary().unwrap(), PastingDiagram::chain(3));
        assert_eq!(PastingDiagram::dot().boundary(), Err(Error::BoundaryOfDot));
    }

    #[test]
    fn cell_counts_and_size() {
        let d = d201();
        assert_eq!(d.cells(0).unwrap().len(), 4);
        assert_eq!(d.cells(1).unwrap().len(), 6);
        assert_eq!(d.cells(2).unwrap().len(), 3);
        assert_eq!(d.size(), 13);
        assert_eq!(PastingDiagram::dot().size(), 1);
        for m in 0..6 {
            assert_eq!(PastingDiagram::chain(m).size(), 2 * m + 1);
        }
        assert!(d.cells(3).is_err());
        // the globe: two points, two parallel arrows, one 2-cell
        let u2 = PastingDiagram::unit_tree(2);
        assert_eq!((0..=2).map(|j| u2.cells(j).unwrap().len()).collect::<Vec<_>>(), vec![2, 2, 1]);
    }

    #[test]
    fn faces() {
        let c3 = PastingDiagram::chain(3);
        let arrow2 = CellAddr(vec![2, 0]);
        assert_eq!(c3.cell_src(&arrow2).unwrap(), CellAddr::point(1));
        assert_eq!(c3.cell_tgt(&arrow2).unwrap(), CellAddr::point(2));

        let d = d201();
        let two_cell = CellAddr(vec![1, 2, 0]);
        assert_eq!(d.cell_src(&two_cell).unwrap(), CellAddr(vec![1, 1]));
        assert_eq!(d.cell_tgt(&two_cell).unwrap(), CellAddr(vec![1, 2]));
        assert!(d.cell_src(&CellAddr(vec![2, 1, 0])).is_err());
        assert!(d.cell_src(&CellAddr::point(0)).is_err());

        let u2 = PastingDiagram::unit_tree(2);
        let top = CellAddr(vec![1, 1, 0]);
        assert_eq!(u2.cell_src(&top).unwrap(), CellAddr(vec![1, 0]));
        assert_eq!(u2.cell_tgt(&top).unwrap(), CellAddr(vec![1, 1]));
    }

    #[test]
    fn globularity_inside_diagrams() {
        for k in 2..=4 {
            for d in enumerate_trees(k, 13) {
                for j in 2..=k {
                    for c in d.cells(j).unwrap() {
                        let s = d.cell_src(&c).unwrap();
                        let t = d.cell_tgt(&c).unwrap();
                        assert_eq!(d.cell_src(&s).unwrap(), d.cell_src(&t).unwrap(), "{d:?} {c}");
                        assert_eq!(d.cell_tgt(&s).unwrap(), d.cell_tgt(&t).unwrap(), "{d:?} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_embeddings_are_faces_of_top_cells() {
        // every top cell of a column lies between the column's source and target boundary
        let d = d201();
        let b = d.boundary().unwrap();
        let first: Vec<_> = b.cells(1).unwrap().iter().map(|e| d.boundary_embed(e, false).unwrap()).collect();
        let last: Vec<_> = b.cells(1).unwrap().iter().map(|e| d.boundary_embed(e, true).unwrap()).collect();
        assert_eq!(first, vec![CellAddr(vec![1, 0]), CellAddr(vec![2, 0]), CellAddr(vec![3, 0])]);
        assert_eq!(last, vec![CellAddr(vec![1, 2]), CellAddr(vec![2, 0]), CellAddr(vec![3, 1])]);
    }

    #[test]
    fn chain_substitution_concatenates() {
        let shape = PastingDiagram::chain(2);
        let d = LabelledDiagram::new(
            shape,
            vec![vec![PastingDiagram::dot(); 3], vec![PastingDiagram::chain(3), PastingDiagram::chain(0)]],
        )
        .unwrap();
        assert_eq!(substitute(&d).unwrap(), PastingDiagram::chain(3));
    }

    #[test]
    fn unit_labels_reproduce_the_shape() {
        for d in enumerate_trees(2, 11) {
            let l = LabelledDiagram::from_fn(d.clone(), |a| PastingDiagram::unit_tree(a.dim()));
            assert_eq!(substitute(&l).unwrap(), d);
        }
    }

    #[test]
    fn substitution_splices_columns() {
        let shape = PastingDiagram::columns(&[1, 1]);
        let l = LabelledDiagram::from_fn(shape, |a| match a.dim() {
            0 => PastingDiagram::dot(),
            1 => PastingDiagram::chain(1),
            _ => PastingDiagram::columns(&[2]),
        });
        assert_eq!(substitute(&l).unwrap(), PastingDiagram::columns(&[2, 2]));
    }

    #[test]
    fn substitute_rejects_bad_labels() {
        let shape = PastingDiagram::chain(1);
        let wrong_dim = LabelledDiagram::new(
            shape.clone(),
            vec![vec![PastingDiagram::dot(); 2], vec![PastingDiagram::columns(&[1])]],
        )
        .unwrap();
        assert!(matches!(substitute(&wrong_dim), Err(Error::LabelDimension { .. })));

        let shape = PastingDiagram::columns(&[1]);
        let l = LabelledDiagram::from_fn(shape, |a| match a.dim() {
            0 => PastingDiagram::dot(),
            1 => PastingDiagram::chain(2),
            _ => PastingDiagram::columns(&[1]),
        });
        assert!(matches!(substitute(&l), Err(Error::Incompatible(_))));
    }

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_trees(0, 1), vec![PastingDiagram::dot()]);
        assert_eq!(
            enumerate_trees(1, 5),
            vec![PastingDiagram::chain(0), PastingDiagram::chain(1), PastingDiagram::chain(2)]
        );
        let all = enumerate_trees(2, 9);
        assert!(all.iter().all(|d| d.size() <= 9 && d.dim() == 2));
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn json_round_trip_matches_documented_encoding() {
        assert_eq!(PastingDiagram::dot().to_json().to_string(), "[]");
        assert_eq!(PastingDiagram::chain(3).to_json().to_string(), "[[],[],[]]");
        assert_eq!(d201().to_json().to_string(), "[[[],[]],[],[[]]]");
        assert_eq!(PastingDiagram::from_json(&d201().to_json(), 2).unwrap(), d201());
        assert!(PastingDiagram::from_json(&d201().to_json(), 1).is_err());
    }

    #[test]
    fn labelled_json_lists_canonical_addresses() {
        let l = LabelledDiagram::from_fn(PastingDiagram::chain(1), |a| a.dim());
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(
            v.to_string(),
            r#"{"shape":[[]],"labels":[{"addr":[0,0],"label":0},{"addr":[0,1],"label":0},{"addr":[1,1,0],"label":1}]}"#
        );
    }
}
