//! Brute-force reference implementations for dimensions at most 2.
//!
//! Nothing here calls into the tree-based machinery of the pipeline beyond
//! the shared base types: diagrams are column-height lists, substitution
//! splices columns directly, terms are plain recursive values generated by
//! recursion on size, and contraction triples come from a filtered product.

use std::collections::{BTreeSet, HashSet};

use crate::globset::GlobularSet;
use crate::pasting::PastingDiagram;

/// A diagram of dimension at most 2 as a column-height list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum OShape {
    Dot,
    /// `m` composable arrows.
    Chain(usize),
    /// Columns of vertically stacked 2-cells, by height.
    Cols(Vec<usize>),
}

impl OShape {
    pub fn dim(&self) -> usize {
        match self {
            OShape::Dot => 0,
            OShape::Chain(_) => 1,
            OShape::Cols(_) => 2,
        }
    }

    pub fn points(&self) -> usize {
        match self {
            OShape::Dot => 1,
            OShape::Chain(m) => m + 1,
            OShape::Cols(h) => h.len() + 1,
        }
    }

    pub fn arrows(&self) -> usize {
        match self {
            OShape::Dot => 0,
            OShape::Chain(m) => *m,
            OShape::Cols(h) => h.iter().map(|x| x + 1).sum(),
        }
    }

    pub fn faces2(&self) -> usize {
        match self {
            OShape::Cols(h) => h.iter().sum(),
            _ => 0,
        }
    }

    pub fn count(&self, j: usize) -> usize {
        [self.points(), self.arrows(), self.faces2()][j]
    }

    pub fn size(&self) -> usize {
        self.points() + self.arrows() + self.faces2()
    }

    pub fn boundary(&self) -> Option<OShape> {
        match self {
            OShape::Dot => None,
            OShape::Chain(_) => Some(OShape::Dot),
            OShape::Cols(h) => Some(OShape::Chain(h.len())),
        }
    }

    pub fn unit(d: usize) -> OShape {
        match d {
            0 => OShape::Dot,
            1 => OShape::Chain(1),
            _ => OShape::Cols(vec![1]),
        }
    }

    /// `(src, tgt)` ordinals of every cell of dimension `j >= 1`.
    pub fn faces(&self, j: usize) -> Vec<(usize, usize)> {
        match (self, j) {
            (OShape::Chain(m), 1) => (1..=*m).map(|i| (i - 1, i)).collect(),
            (OShape::Cols(h), 1) => h
                .iter()
                .enumerate()
                .flat_map(|(i, &hi)| (0..=hi).map(move |_| (i, i + 1)))
                .collect(),
            (OShape::Cols(h), 2) => {
                let mut out = Vec::new();
                let mut base = 0;
                for &hi in h {
                    for r in 1..=hi {
                        out.push((base + r - 1, base + r));
                    }
                    base += hi + 1;
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Ordinals of the cells of the boundary inside this diagram, as source or target.
    pub fn boundary_cells(&self, target: bool) -> Vec<Vec<usize>> {
        match self {
            OShape::Dot => Vec::new(),
            OShape::Chain(m) => vec![vec![if target { *m } else { 0 }]],
            OShape::Cols(h) => {
                let mut arrows = Vec::new();
                let mut base = 0;
                for &hi in h {
                    arrows.push(base + if target { hi } else { 0 });
                    base += hi + 1;
                }
                vec![(0..=h.len()).collect(), arrows]
            }
        }
    }

    pub fn to_tree(&self) -> PastingDiagram {
        match self {
            OShape::Dot => PastingDiagram::dot(),
            OShape::Chain(m) => PastingDiagram::chain(*m),
            OShape::Cols(h) => PastingDiagram::columns(h),
        }
    }

    /// Reads a tree of dimension at most 2.
    pub fn from_tree(t: &PastingDiagram) -> Option<OShape> {
        match t.dim() {
            0 => Some(OShape::Dot),
            1 => Some(OShape::Chain(t.column_count())),
            2 => Some(OShape::Cols(t.children().iter().map(|c| c.column_count()).collect())),
            _ => None,
        }
    }
}

/// An explicit dimension-at-most-2 diagram: its shape and cell tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExplicitDiagram2 {
    pub shape: OShape,
    pub cells: GlobularSet,
}

impl ExplicitDiagram2 {
    pub fn new(shape: OShape) -> Self {
        let d = shape.dim();
        let counts: Vec<usize> = (0..=d).map(|j| shape.count(j)).collect();
        let mut src = vec![Vec::new()];
        let mut tgt = vec![Vec::new()];
        for j in 1..=d {
            let f = shape.faces(j);
            src.push(f.iter().map(|p| p.0).collect());
            tgt.push(f.iter().map(|p| p.1).collect());
        }
        let cells = GlobularSet::new(counts, src, tgt).expect("faces in range");
        ExplicitDiagram2 { shape, cells }
    }

    pub fn to_tree(&self) -> PastingDiagram {
        self.shape.to_tree()
    }
}

/// All diagrams of dimension `k <= 2` with at most `max_size` cells, by column-list recursion.
pub fn oracle_trees(k: usize, max_size: usize) -> Vec<ExplicitDiagram2> {
    oracle_shapes(k, max_size).into_iter().map(ExplicitDiagram2::new).collect()
}

pub fn oracle_shapes(k: usize, max_size: usize) -> Vec<OShape> {
    let mut out = Vec::new();
    match k {
        0 => {
            if max_size >= 1 {
                out.push(OShape::Dot);
            }
        }
        1 => {
            let mut m = 0;
            while 2 * m < max_size {
                out.push(OShape::Chain(m));
                m += 1;
            }
        }
        2 => {
            fn extend(prefix: &mut Vec<usize>, size: usize, max_size: usize, out: &mut Vec<OShape>) {
                out.push(OShape::Cols(prefix.clone()));
                // another column of height h costs one point, h + 1 arrows and h faces
                let mut h = 0;
                while size + 2 + 2 * h <= max_size {
                    prefix.push(h);
                    extend(prefix, size + 2 + 2 * h, max_size, out);
                    prefix.pop();
                    h += 1;
                }
            }
            if max_size >= 1 {
                extend(&mut Vec::new(), 1, max_size, &mut out);
            }
        }
        _ => panic!("oracle shapes stop at dimension 2"),
    }
    out
}

/// Substitution by column splicing. `labels[j][c]` sits on the j-cell `c`.
/// Returns the composite and, for each label cell, its ordinal in the composite
/// (`emb[j][c][e][x]`), or `None` when the labels do not fit together.
#[allow(clippy::type_complexity)]
pub fn oracle_splice(shape: &OShape, labels: &[Vec<OShape>]) -> Option<(OShape, Vec<Vec<Vec<Vec<usize>>>>)> {
    match shape {
        OShape::Dot => {
            if labels[0][0] != OShape::Dot {
                return None;
            }
            Some((OShape::Dot, vec![vec![vec![vec![0]]]]))
        }
        OShape::Chain(m) => {
            let widths: Vec<usize> = labels[1]
                .iter()
                .map(|l| match l {
                    OShape::Chain(w) => Some(*w),
                    _ => None,
                })
                .collect::<Option<_>>()?;
            if labels[0].iter().any(|l| *l != OShape::Dot) {
                return None;
            }
            let off: Vec<usize> = (0..=*m).map(|i| widths[..i].iter().sum()).collect();
            let points = (0..=*m).map(|p| vec![vec![off[p]]]).collect();
            let arrows = (0..*m)
                .map(|i| {
                    vec![
                        (0..=widths[i]).map(|t| off[i] + t).collect(),
                        (0..widths[i]).map(|t| off[i] + t).collect(),
                    ]
                })
                .collect();
            Some((OShape::Chain(off[*m]), vec![points, arrows]))
        }
        OShape::Cols(h) => {
            let m = h.len();
            // arrows and faces of column i in the outer shape
            let mut arrow_at = Vec::new();
            let mut face_at = Vec::new();
            let (mut a, mut f) = (0, 0);
            for &hi in h {
                arrow_at.push(a);
                face_at.push(f);
                a += hi + 1;
                f += hi;
            }
            if labels[0].iter().any(|l| *l != OShape::Dot) {
                return None;
            }
            let mut widths = Vec::with_capacity(m);
            for i in 0..m {
                let OShape::Chain(w) = labels[1][arrow_at[i]] else {
                    return None;
                };
                for q in 0..=h[i] {
                    if labels[1][arrow_at[i] + q] != OShape::Chain(w) {
                        return None;
                    }
                }
                for r in 0..h[i] {
                    match &labels[2][face_at[i] + r] {
                        OShape::Cols(l) if l.len() == w => {}
                        _ => return None,
                    }
                }
                widths.push(w);
            }
            let heights_of = |i: usize, r: usize| -> &Vec<usize> {
                match &labels[2][face_at[i] + r] {
                    OShape::Cols(l) => l,
                    _ => unreachable!("checked above"),
                }
            };
            let off: Vec<usize> = (0..=m).map(|i| widths[..i].iter().sum()).collect();
            // stacked[i][t][r]: faces of result column (i, t) below outer face r
            let mut stacked: Vec<Vec<Vec<usize>>> = Vec::with_capacity(m);
            let mut result = Vec::new();
            for i in 0..m {
                let mut per_t = Vec::with_capacity(widths[i]);
                for t in 0..widths[i] {
                    let mut acc = vec![0];
                    for r in 0..h[i] {
                        acc.push(acc[r] + heights_of(i, r)[t]);
                    }
                    result.push(acc[h[i]]);
                    per_t.push(acc);
                }
                stacked.push(per_t);
            }
            let mut col_arrow = vec![0];
            let mut col_face = vec![0];
            for &hh in &result {
                col_arrow.push(col_arrow.last().unwrap() + hh + 1);
                col_face.push(col_face.last().unwrap() + hh);
            }
            let points = (0..=m).map(|p| vec![vec![off[p]]]).collect();
            let mut arrows = Vec::new();
            let mut faces = Vec::new();
            for i in 0..m {
                let pts: Vec<usize> = (0..=widths[i]).map(|t| off[i] + t).collect();
                for q in 0..=h[i] {
                    let xs = (0..widths[i]).map(|t| col_arrow[off[i] + t] + stacked[i][t][q]).collect();
                    arrows.push(vec![pts.clone(), xs]);
                }
                for r in 0..h[i] {
                    let l = heights_of(i, r);
                    let mut xs1 = Vec::new();
                    let mut xs2 = Vec::new();
                    for t in 0..widths[i] {
                        let col = off[i] + t;
                        for q in 0..=l[t] {
                            xs1.push(col_arrow[col] + stacked[i][t][r] + q);
                        }
                        for s in 1..=l[t] {
                            xs2.push(col_face[col] + stacked[i][t][r] + s - 1);
                        }
                    }
                    faces.push(vec![pts.clone(), xs1, xs2]);
                }
            }
            Some((OShape::Cols(result), vec![points, arrows, faces]))
        }
    }
}

/// Explicit substitution for dimensions at most 2.
pub fn oracle_substitute2(shape: &OShape, labels: &[Vec<OShape>]) -> Option<ExplicitDiagram2> {
    oracle_splice(shape, labels).map(|(s, _)| ExplicitDiagram2::new(s))
}

/// A term as a plain value; every label, at every dimension, is itself a term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum OTerm {
    Unit,
    Node(usize, Vec<Vec<OTerm>>),
}

impl OTerm {
    pub fn size(&self) -> usize {
        match self {
            OTerm::Unit => 0,
            OTerm::Node(_, labels) => 1 + labels.last().map_or(0, |top| top.iter().map(|t| t.size()).sum()),
        }
    }
}

/// A generator for the oracle: its arity and, above dimension 0, its faces as terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OGen {
    pub arity: OShape,
    pub src: OTerm,
    pub tgt: OTerm,
}

/// Terms of every dimension up to 2 over the given generators, with their
/// arities and faces, generated by recursion on size.
#[derive(Clone, Debug, Default)]
pub struct OracleTerms {
    /// `terms[d]`: every admissible d-term with (arity, src, tgt).
    pub terms: Vec<Vec<(OTerm, OShape, OTerm, OTerm)>>,
}

impl OracleTerms {
    pub fn set(&self, d: usize) -> BTreeSet<OTerm> {
        self.terms[d].iter().map(|t| t.0.clone()).collect()
    }
}

struct Tower<'a> {
    gens: &'a [Vec<OGen>],
    max_term: usize,
    max_arity: usize,
    known: Vec<HashSet<OTerm>>,
    rows: Vec<Vec<(OTerm, OShape, OTerm, OTerm)>>,
}

impl Tower<'_> {
    fn arity(&self, d: usize, t: &OTerm) -> OShape {
        match t {
            OTerm::Unit => OShape::unit(d),
            OTerm::Node(g, labels) => {
                let ls: Vec<Vec<OShape>> = labels
                    .iter()
                    .enumerate()
                    .map(|(j, row)| row.iter().map(|l| self.arity(j, l)).collect())
                    .collect();
                oracle_splice(&self.gens[d][*g].arity, &ls).expect("compatible").0
            }
        }
    }

    fn graft(&self, d: usize, a: &OTerm, phi: &[Vec<OTerm>]) -> OTerm {
        match a {
            OTerm::Unit => phi[d][0].clone(),
            OTerm::Node(g, psi) => {
                let ls: Vec<Vec<OShape>> = psi
                    .iter()
                    .enumerate()
                    .map(|(j, row)| row.iter().map(|l| self.arity(j, l)).collect())
                    .collect();
                let (_, emb) = oracle_splice(&self.gens[d][*g].arity, &ls).expect("compatible");
                let new = psi
                    .iter()
                    .enumerate()
                    .map(|(j, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(c, l)| {
                                let pulled: Vec<Vec<OTerm>> = emb[j][c]
                                    .iter()
                                    .enumerate()
                                    .map(|(e, xs)| xs.iter().map(|&x| phi[e][x].clone()).collect())
                                    .collect();
                                self.graft(j, l, &pulled)
                            })
                            .collect()
                    })
                    .collect();
                OTerm::Node(*g, new)
            }
        }
    }

    fn faces(&self, d: usize, g: usize, labels: &[Vec<OTerm>]) -> (OTerm, OTerm) {
        let gen = &self.gens[d][g];
        let restrict = |target: bool| -> Vec<Vec<OTerm>> {
            gen.arity
                .boundary_cells(target)
                .iter()
                .enumerate()
                .map(|(j, xs)| xs.iter().map(|&x| labels[j][x].clone()).collect())
                .collect()
        };
        (self.graft(d - 1, &gen.src, &restrict(false)), self.graft(d - 1, &gen.tgt, &restrict(true)))
    }

    fn admissible(&self, a: &OShape) -> bool {
        a.size() <= self.max_arity || *a == OShape::unit(a.dim())
    }

    fn build(&mut self, d: usize) {
        let mut by_size: Vec<Vec<OTerm>> = vec![vec![OTerm::Unit]];
        let mut rows = vec![(OTerm::Unit, OShape::unit(d), OTerm::Unit, OTerm::Unit)];
        for n in 1..=self.max_term {
            let mut level = Vec::new();
            for g in 0..self.gens.get(d).map_or(0, |v| v.len()) {
                let arity = self.gens[d][g].arity.clone();
                let mut labels: Vec<Vec<OTerm>> = (0..=d).map(|_| Vec::new()).collect();
                self.product(d, &arity, 0, 0, n - 1, &by_size, &mut labels, &mut |tower, labels| {
                    let t = OTerm::Node(g, labels.to_vec());
                    let ar = tower.arity(d, &t);
                    if !tower.admissible(&ar) {
                        return;
                    }
                    let (s, tt) = if d == 0 {
                        (OTerm::Unit, OTerm::Unit)
                    } else {
                        let (s, tt) = tower.faces(d, g, labels);
                        if !tower.known[d - 1].contains(&s) || !tower.known[d - 1].contains(&tt) {
                            return;
                        }
                        (s, tt)
                    };
                    level.push((t, ar, s, tt));
                });
            }
            by_size.push(level.iter().map(|r| r.0.clone()).collect());
            rows.extend(level);
        }
        self.known.push(rows.iter().map(|r| r.0.clone()).collect());
        self.rows.push(rows);
    }

    /// Walks the product of label choices, dimension by dimension from 0,
    /// keeping only globular choices; top labels must have sizes summing to `want`.
    #[allow(clippy::too_many_arguments)]
    fn product(
        &self,
        d: usize,
        arity: &OShape,
        j: usize,
        c: usize,
        want: usize,
        by_size: &[Vec<OTerm>],
        labels: &mut Vec<Vec<OTerm>>,
        visit: &mut dyn FnMut(&Self, &[Vec<OTerm>]),
    ) {
        if j > d {
            let used: usize = labels[d].iter().map(|t| t.size()).sum();
            if used == want {
                visit(self, labels);
            }
            return;
        }
        if c == arity.count(j) {
            self.product(d, arity, j + 1, 0, want, by_size, labels, visit);
            return;
        }
        let pool: Vec<(OTerm, OTerm, OTerm)> = if j == d {
            let used: usize = labels[d].iter().map(|t| t.size()).sum();
            by_size
                .iter()
                .take(want.saturating_sub(used) + 1)
                .flatten()
                .map(|t| {
                    let row = self.row_of(d, t);
                    (t.clone(), row.0, row.1)
                })
                .collect()
        } else {
            self.rows[j].iter().map(|r| (r.0.clone(), r.2.clone(), r.3.clone())).collect()
        };
        let faces = if j == 0 { Vec::new() } else { arity.faces(j) };
        for (t, s, tt) in pool {
            if j > 0 {
                let (fs, ft) = faces[c];
                if labels[j - 1][fs] != s || labels[j - 1][ft] != tt {
                    continue;
                }
            }
            labels[j].push(t);
            self.product(d, arity, j, c + 1, want, by_size, labels, visit);
            labels[j].pop();
        }
    }

    /// Faces of a term of the dimension under construction.
    fn row_of(&self, d: usize, t: &OTerm) -> (OTerm, OTerm) {
        match t {
            OTerm::Unit => (OTerm::Unit, OTerm::Unit),
            OTerm::Node(g, labels) => {
                if d == 0 {
                    (OTerm::Unit, OTerm::Unit)
                } else {
                    self.faces(d, *g, labels)
                }
            }
        }
    }
}

/// Every normal-form term of dimension `0..gens.len()` within the bounds.
/// `gens[d]` lists the d-dimensional generators; their faces name (d-1)-terms.
pub fn oracle_terms(gens: &[Vec<OGen>], max_term_size: usize, max_arity_size: usize) -> OracleTerms {
    assert!(gens.len() <= 3, "the oracle stops at dimension 2");
    let mut tower = Tower {
        gens,
        max_term: max_term_size,
        max_arity: max_arity_size,
        known: Vec::new(),
        rows: Vec::new(),
    };
    for d in 0..gens.len() {
        tower.build(d);
    }
    OracleTerms { terms: tower.rows }
}

/// A cell of dimension `d - 1` for the triple filter: faces (ignored at
/// dimension 0) and arity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OCell {
    pub src: usize,
    pub tgt: usize,
    pub arity: OShape,
}

/// Every `(a, b, theta)` with `a`, `b` parallel, `theta` of dimension `d` and
/// size at most `max_arity_size`, and boundary of `theta` equal to both arities.
pub fn oracle_triples(cells: &[OCell], d: usize, max_arity_size: usize) -> BTreeSet<(usize, usize, OShape)> {
    let thetas = oracle_shapes(d, max_arity_size);
    let mut out = BTreeSet::new();
    for (a, ca) in cells.iter().enumerate() {
        for (b, cb) in cells.iter().enumerate() {
            for theta in &thetas {
                let parallel = d == 1 || (ca.src == cb.src && ca.tgt == cb.tgt);
                let fits = theta.boundary().as_ref() == Some(&ca.arity) && theta.boundary().as_ref() == Some(&cb.arity);
                if parallel && fits {
                    out.insert((a, b, theta.clone()));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(oracle_trees(1, 5).len(), 3);
        assert_eq!(oracle_trees(0, 1).len(), 1);
        for e in oracle_trees(2, 9) {
            assert!(e.cells.check_globularity().pass);
            assert_eq!(OShape::from_tree(&e.to_tree()), Some(e.shape.clone()));
            assert_eq!(e.shape.size(), e.to_tree().size());
        }
    }

    #[test]
    fn splicing() {
        let chain = |n| OShape::Chain(n);
        let (r, _) = oracle_splice(&chain(2), &[vec![OShape::Dot; 3], vec![chain(3), chain(0)]]).unwrap();
        assert_eq!(r, chain(3));
        let h = OShape::Cols(vec![1, 2]);
        let units = vec![vec![OShape::Dot; 3], vec![chain(1); 5], vec![OShape::Cols(vec![1]); 3]];
        assert_eq!(oracle_substitute2(&h, &units).unwrap().shape, h);
        // columns (1,1) with each face replaced by a two-high column
        let shape = OShape::Cols(vec![1, 1]);
        let labels = vec![vec![OShape::Dot; 3], vec![chain(1); 4], vec![OShape::Cols(vec![2]); 2]];
        assert_eq!(oracle_substitute2(&shape, &labels).unwrap().shape, OShape::Cols(vec![2, 2]));
        let bad = vec![vec![OShape::Dot; 3], vec![chain(1), chain(2), chain(1), chain(1)], vec![OShape::Cols(vec![2]); 2]];
        assert!(oracle_splice(&shape, &bad).is_none());
    }

    #[test]
    fn terms() {
        assert_eq!(oracle_terms(&[vec![]], 3, 7).set(0).len(), 1);
        // one 0-cell and one unary arrow on it
        let x = OTerm::Node(0, vec![vec![OTerm::Unit]]);
        let gens = vec![
            vec![OGen { arity: OShape::Dot, src: OTerm::Unit, tgt: OTerm::Unit }],
            vec![OGen { arity: OShape::Chain(1), src: x.clone(), tgt: x }],
        ];
        let t = oracle_terms(&gens, 3, 7);
        assert_eq!(t.set(0).len(), 4);
        assert_eq!(t.set(1).len(), 4);
    }

    #[test]
    fn triples() {
        let point = OCell { src: 0, tgt: 0, arity: OShape::Dot };
        assert_eq!(oracle_triples(std::slice::from_ref(&point), 1, 5).len(), 3);
        assert!(oracle_triples(&[], 1, 5).is_empty());
        let arrows = vec![
            OCell { src: 0, tgt: 1, arity: OShape::Chain(1) },
            OCell { src: 1, tgt: 1, arity: OShape::Chain(1) },
        ];
        // (0, 1) and (1, 0) are not parallel
        let t = oracle_triples(&arrows, 2, 7);
        assert!(t.iter().all(|(a, b, _)| a == b));
    }
}
