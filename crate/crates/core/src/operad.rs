//! Operad structures on collections and the dimension-wise free operad steps.
//!
//! The free step at dimension d builds normal-form terms over the d-cells
//! present in the state (its generators) stratum by stratum: stratum 0 is the
//! unit, and stratum n grafts a generator onto labels of depth below n.

use std::collections::HashMap;

use crate::collection::{for_each_labelling_desc, CellSource};
use crate::error::{Error, Result};
use crate::pasting::{enumerate_trees, restrict_labels, shape_info, Composite, Labels, PastingDiagram};
use crate::report::Report;
use crate::state::{arity_admissible, CtrCell, GenKey, Level, OwcState, Provenance, StepLog, TermEntry, TermKey, TermTable};

/// A collection with units and a (bounded, hence partial) composition up to some dimension.
pub trait OperadStructure: CellSource {
    fn operad_dim(&self) -> Option<usize>;
    fn unit(&self, d: usize) -> Option<usize>;
    /// Composite of `a` with a labelling of its arity; `None` when out of bounds.
    fn mult(&self, d: usize, a: usize, labels: &Labels<usize>) -> Option<usize>;
    /// Additive measure of top labels used to cut enumeration off.
    fn weight(&self, d: usize, x: usize) -> usize;
    /// Total weight the top labels of a composite with `a` may carry.
    fn label_budget(&self, d: usize, a: usize) -> usize;
}

/// Lifts of parallel pairs along diagrams, up to some dimension.
pub trait ContractionStructure {
    fn contraction_dim(&self) -> usize;
    fn gamma(&self, d: usize, c: &CtrCell) -> Option<usize>;
}

impl OperadStructure for OwcState {
    fn operad_dim(&self) -> Option<usize> {
        self.operad_dim
    }

    fn unit(&self, d: usize) -> Option<usize> {
        OwcState::unit(self, d)
    }

    fn mult(&self, d: usize, a: usize, labels: &Labels<usize>) -> Option<usize> {
        OwcState::mult(self, d, a, labels)
    }

    fn weight(&self, d: usize, x: usize) -> usize {
        self.terms(d).map_or(1, |t| t.entries[x].size)
    }

    fn label_budget(&self, d: usize, a: usize) -> usize {
        self.bounds.max_term_size.saturating_sub(self.weight(d, a))
    }
}

impl ContractionStructure for OwcState {
    fn contraction_dim(&self) -> usize {
        self.contraction_dim
    }

    fn gamma(&self, d: usize, c: &CtrCell) -> Option<usize> {
        OwcState::gamma(self, d, c)
    }
}

/// The terminal operad-with-contraction truncated at an arity bound: its
/// d-cells are the d-diagrams, composition is substitution and every
/// contraction cell is its own diagram.
#[derive(Clone, Debug)]
pub struct TerminalOperad {
    max_arity_size: usize,
    cells: Vec<Vec<PastingDiagram>>,
    index: Vec<HashMap<PastingDiagram, usize>>,
    src: Vec<Vec<usize>>,
}

impl TerminalOperad {
    pub fn new(max_dim: usize, max_arity_size: usize) -> Self {
        let mut cells = Vec::new();
        let mut index = Vec::new();
        let mut src = Vec::new();
        for d in 0..=max_dim {
            let mut row = enumerate_trees(d, max_arity_size);
            let unit = PastingDiagram::unit_tree(d);
            if !row.contains(&unit) {
                row.push(unit);
            }
            let idx: HashMap<PastingDiagram, usize> = row.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            src.push(if d == 0 {
                Vec::new()
            } else {
                let lower: &HashMap<PastingDiagram, usize> = &index[d - 1];
                row.iter().map(|t| lower[&t.boundary().expect("d > 0")]).collect()
            });
            index.push(idx);
            cells.push(row);
        }
        TerminalOperad {
            max_arity_size,
            cells,
            index,
            src,
        }
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn lookup(&self, d: usize, t: &PastingDiagram) -> Option<usize> {
        self.index.get(d)?.get(t).copied()
    }
}

impl CellSource for TerminalOperad {
    fn cell_count(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, |r| r.len())
    }

    fn cell_src(&self, d: usize, x: usize) -> usize {
        self.src[d][x]
    }

    fn cell_tgt(&self, d: usize, x: usize) -> usize {
        self.src[d][x]
    }

    fn cell_arity(&self, d: usize, x: usize) -> &PastingDiagram {
        &self.cells[d][x]
    }
}

impl OperadStructure for TerminalOperad {
    fn operad_dim(&self) -> Option<usize> {
        Some(self.max_dim())
    }

    fn unit(&self, d: usize) -> Option<usize> {
        self.lookup(d, &PastingDiagram::unit_tree(d))
    }

    fn mult(&self, d: usize, a: usize, labels: &Labels<usize>) -> Option<usize> {
        let refs: Vec<Vec<&PastingDiagram>> = labels
            .iter()
            .enumerate()
            .map(|(j, row)| row.iter().map(|&y| &self.cells[j][y]).collect())
            .collect();
        let r = Composite::new(&self.cells[d][a], &refs).into_result();
        self.lookup(d, &r)
    }

    fn weight(&self, d: usize, x: usize) -> usize {
        self.cells[d][x].top_cells()
    }

    fn label_budget(&self, _d: usize, _a: usize) -> usize {
        self.max_arity_size
    }
}

impl ContractionStructure for TerminalOperad {
    fn contraction_dim(&self) -> usize {
        self.max_dim()
    }

    fn gamma(&self, d: usize, c: &CtrCell) -> Option<usize> {
        if d == 0 || c.a >= self.cell_count(d - 1) || c.b >= self.cell_count(d - 1) {
            return None;
        }
        let b = c.theta.boundary().ok()?;
        if self.cells[d - 1][c.a] != b || self.cells[d - 1][c.b] != b {
            return None;
        }
        self.lookup(d, &c.theta)
    }
}

/// `M_0`: the free operad structure on the 0-cells.
pub fn free_operad_dim0(state: &OwcState) -> Result<OwcState> {
    free_operad_step(state, 0)
}

/// `M_d`: replaces the d-cells by the normal-form d-terms over them, within
/// bounds, and re-points the faces of (d+1)-cells through the generator embedding.
pub fn free_operad_step(state: &OwcState, d: usize) -> Result<OwcState> {
    if state.operad_dim != d.checked_sub(1) {
        return Err(Error::Stage {
            expected: format!("operad structure up to dimension {}", d as i64 - 1),
            found: format!("{:?}", state.operad_dim),
        });
    }
    if d > state.max_dim() {
        return Err(Error::Bounds(format!("dimension {d} exceeds max_dim {}", state.max_dim())));
    }
    let table = build_terms(state, d);
    let mut next = state.clone();
    let mut level: Level = state.level(d).clone();
    let added = table.len();
    let overflow = table.overflow;
    let depth = table.stabilization_depth();
    let embed = table.embed.clone();
    level.terms = Some(table);
    next.replace_level(d, level);
    if d < state.max_dim() {
        let upper = state.level(d + 1);
        if !upper.generators.is_empty() {
            let map = |x: usize| embed[x].ok_or_else(|| Error::Malformed(format!("generator {d}#{x} fell outside the bounds")));
            let mut re = Level::default();
            for g in &upper.generators {
                let mut g = g.clone();
                g.src = map(g.src)?;
                g.tgt = map(g.tgt)?;
                if let GenKey::Ctr(c) = &mut g.key {
                    c.a = map(c.a)?;
                    c.b = map(c.b)?;
                }
                re.push_generator(g);
            }
            next.replace_level(d + 1, re);
        }
    }
    next.operad_dim = Some(d);
    next.log.push(StepLog {
        step: format!("operad-{d}"),
        added,
        overflow,
        depth: Some(depth),
    });
    Ok(next)
}

fn build_terms(state: &OwcState, d: usize) -> TermTable {
    let bounds = state.bounds;
    let gens = &state.level(d).generators;
    let mut table = TermTable::new();
    table.insert(TermEntry {
        key: TermKey::Unit,
        src: 0,
        tgt: 0,
        arity: PastingDiagram::unit_tree(d),
        size: 0,
        depth: 0,
    });
    table.strata.push(1);
    let mut overflow = 0;
    for n in 1.. {
        let start = table.len();
        let frozen: Vec<(usize, usize)> = table.entries.iter().map(|e| (e.size, e.depth)).collect();
        for (g, gen) in gens.iter().enumerate() {
            let budget = bounds.max_term_size.saturating_sub(1);
            let mut found: Vec<TermEntry> = Vec::new();
            let view = StateView { state, d, table: &table };
            // composite sizes add up, so faces too large for the lower table are known early
            let face_sizes = (d > 0).then(|| {
                let info = shape_info(&gen.arity);
                let lower = state.terms(d - 1).expect("operad structure below d");
                let size = |x: usize| lower.entries[x].size;
                (size(gen.src), info.bsrc[d - 1].clone(), size(gen.tgt), info.btgt[d - 1].clone())
            });
            for_each_labelling_desc(
                &view,
                &gen.arity,
                &mut |_, chosen| {
                    let used: usize = chosen.iter().map(|&y| frozen[y].0).sum();
                    (0..start).filter(|&y| used + frozen[y].0 <= budget).collect()
                },
                &mut |labels| {
                    let top = &labels[d];
                    let depth = top.iter().map(|&y| frozen[y].1).max().unwrap_or(0);
                    if depth != n - 1 {
                        return;
                    }
                    if let Some((s0, bs, t0, bt)) = &face_sizes {
                        let lower = state.terms(d - 1).expect("operad structure below d");
                        let weigh = |base: usize, cells: &[usize]| base + cells.iter().map(|&e| lower.entries[labels[d - 1][e]].size).sum::<usize>();
                        if weigh(*s0, bs) > bounds.max_term_size || weigh(*t0, bt) > bounds.max_term_size {
                            overflow += 1;
                            return;
                        }
                    }
                    let size = 1 + top.iter().map(|&y| frozen[y].0).sum::<usize>();
                    let refs: Vec<Vec<&PastingDiagram>> = labels
                        .iter()
                        .enumerate()
                        .map(|(j, row)| {
                            row.iter()
                                .map(|&y| if j == d { &table.entries[y].arity } else { state.arity(j, y) })
                                .collect()
                        })
                        .collect();
                    let arity = Composite::new(&gen.arity, &refs).into_result();
                    if !arity_admissible(&arity, &bounds) {
                        overflow += 1;
                        return;
                    }
                    let Some((src, tgt)) = state.node_faces(d, gen, labels) else {
                        overflow += 1;
                        return;
                    };
                    found.push(TermEntry {
                        key: TermKey::Node {
                            gen: g,
                            labels: labels.clone(),
                        },
                        src,
                        tgt,
                        arity,
                        size,
                        depth: n,
                    });
                },
            );
            for e in found {
                table.insert(e);
            }
        }
        if table.len() == start {
            break;
        }
        table.strata.push(table.len());
    }
    table.overflow = overflow;
    table.embed = gens
        .iter()
        .enumerate()
        .map(|(g, gen)| table.lookup(&TermKey::Node { gen: g, labels: unit_labels(&gen.arity) }))
        .collect();
    table
}

/// The labelling of `shape` with the unit on every cell.
pub fn unit_labels(shape: &PastingDiagram) -> Labels<usize> {
    (0..=shape.dim()).map(|j| vec![0; shape.cell_count(j)]).collect()
}

/// Cell access for the free step: the lower dimensions of the state, and the
/// partial term table at dimension `d`.
struct StateView<'a> {
    state: &'a OwcState,
    d: usize,
    table: &'a TermTable,
}

impl CellSource for StateView<'_> {
    fn cell_count(&self, j: usize) -> usize {
        if j == self.d {
            self.table.len()
        } else {
            self.state.count(j)
        }
    }

    fn cell_src(&self, j: usize, x: usize) -> usize {
        if j == self.d {
            self.table.entries[x].src
        } else {
            self.state.src(j, x)
        }
    }

    fn cell_tgt(&self, j: usize, x: usize) -> usize {
        if j == self.d {
            self.table.entries[x].tgt
        } else {
            self.state.tgt(j, x)
        }
    }

    fn cell_arity(&self, j: usize, x: usize) -> &PastingDiagram {
        if j == self.d {
            &self.table.entries[x].arity
        } else {
            self.state.arity(j, x)
        }
    }
}

/// A term as a standalone tree: the unit, or a generator with its lower
/// labels (cells) and top labels (terms).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TermCell {
    Unit,
    Node {
        gen: usize,
        lower: Labels<usize>,
        top: Vec<TermCell>,
    },
}

impl TermCell {
    /// `Gen(g)`: the generator applied to units everywhere.
    pub fn generator(gen: usize, arity: &PastingDiagram) -> Self {
        let d = arity.dim();
        TermCell::Node {
            gen,
            lower: (0..d).map(|j| vec![0; arity.cell_count(j)]).collect(),
            top: vec![TermCell::Unit; arity.cell_count(d)],
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TermCell::Unit => 0,
            TermCell::Node { top, .. } => 1 + top.iter().map(|t| t.size()).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TermCell::Unit => 0,
            TermCell::Node { top, .. } => 1 + top.iter().map(|t| t.depth()).max().unwrap_or(0),
        }
    }

    pub fn map_gens(&self, f: &dyn Fn(usize) -> usize) -> TermCell {
        match self {
            TermCell::Unit => TermCell::Unit,
            TermCell::Node { gen, lower, top } => TermCell::Node {
                gen: f(*gen),
                lower: lower.clone(),
                top: top.iter().map(|t| t.map_gens(f)).collect(),
            },
        }
    }
}

/// Decodes term `x` of dimension `d` into a standalone tree.
pub fn term_cell(state: &OwcState, d: usize, x: usize) -> Option<TermCell> {
    let e = state.terms(d)?.entries.get(x)?;
    Some(match &e.key {
        TermKey::Unit => TermCell::Unit,
        TermKey::Node { gen, labels } => TermCell::Node {
            gen: *gen,
            lower: labels[..d].to_vec(),
            top: labels[d].iter().map(|&y| term_cell(state, d, y)).collect::<Option<_>>()?,
        },
    })
}

/// Looks a standalone tree up in the term table of dimension `d`.
pub fn term_id(state: &OwcState, d: usize, t: &TermCell) -> Option<usize> {
    let table = state.terms(d)?;
    match t {
        TermCell::Unit => Some(0),
        TermCell::Node { gen, lower, top } => {
            let mut labels = lower.clone();
            labels.push(top.iter().map(|s| term_id(state, d, s)).collect::<Option<_>>()?);
            table.lookup(&TermKey::Node { gen: *gen, labels })
        }
    }
}

/// The counit: evaluates a term over generators that name cells of `y`
/// (through `gen_cell`) using `y`'s units and composition.
pub fn counit_eval<O: OperadStructure + ?Sized>(
    y: &O,
    d: usize,
    t: &TermCell,
    gen_cell: &dyn Fn(usize) -> Option<usize>,
) -> Result<usize> {
    match t {
        TermCell::Unit => y.unit(d).ok_or_else(|| Error::NotOperad(format!("no unit at dimension {d}"))),
        TermCell::Node { gen, lower, top } => {
            let x = gen_cell(*gen).ok_or(Error::UnknownGenerator(*gen))?;
            let mut labels = lower.clone();
            labels.push(top.iter().map(|s| counit_eval(y, d, s, gen_cell)).collect::<Result<_>>()?);
            y.mult(d, x, &labels)
                .ok_or_else(|| Error::NotReceptive(format!("composite at dimension {d} of cell {x} with {labels:?}")))
        }
    }
}

/// Every defined composite `(a, labels) -> result` at dimension `d` within the weight budget.
pub fn composites<O: OperadStructure + ?Sized>(o: &O, d: usize) -> Vec<(usize, Labels<usize>, usize)> {
    let mut out = Vec::new();
    for a in 0..o.cell_count(d) {
        let budget = o.label_budget(d, a);
        let n = o.cell_count(d);
        for_each_labelling_desc(
            o,
            &o.cell_arity(d, a).clone(),
            &mut |_, chosen| {
                let used: usize = chosen.iter().map(|&y| o.weight(d, y)).sum();
                (0..n).filter(|&y| used + o.weight(d, y) <= budget).collect()
            },
            &mut |labels| {
                if let Some(r) = o.mult(d, a, labels) {
                    out.push((a, labels.clone(), r));
                }
            },
        );
    }
    out
}

/// Checks units, the arity and face conditions on composites, and
/// associativity on every configuration within the weight budget.
pub fn check_operad_laws<O: OperadStructure + ?Sized>(o: &O) -> Report {
    let mut report = Report::new("operad-laws");
    let Some(top_dim) = o.operad_dim() else {
        return report;
    };
    for d in 0..=top_dim {
        let Some(u) = o.unit(d) else {
            report.violation("unit-missing", format!("dimension {d}"));
            continue;
        };
        if *o.cell_arity(d, u) != PastingDiagram::unit_tree(d) {
            report.violation("unit-arity", format!("dimension {d}"));
        }
        if d > 0 {
            let lower = o.unit(d - 1);
            if Some(o.cell_src(d, u)) != lower || Some(o.cell_tgt(d, u)) != lower {
                report.violation("unit-faces", format!("dimension {d}"));
            }
        }
        let unit_tree = PastingDiagram::unit_tree(d);
        for a in 0..o.cell_count(d) {
            let arity = o.cell_arity(d, a).clone();
            let units: Labels<usize> = (0..=d)
                .map(|j| vec![o.unit(j).unwrap_or(usize::MAX); arity.cell_count(j)])
                .collect();
            if o.mult(d, a, &units) != Some(a) {
                report.violation("right-unit", format!("dimension {d}, cell {a}"));
            }
            let mut left = None;
            for_each_labelling_desc(o, &unit_tree, &mut |_, _| vec![a], &mut |l| left = Some(l.clone()));
            match left {
                Some(l) if o.mult(d, u, &l) == Some(a) => {}
                _ => report.violation("left-unit", format!("dimension {d}, cell {a}")),
            }
        }
        for (a, phi, r) in composites(o, d) {
            let witness = || format!("dimension {d}, cell {a}, labels {phi:?}");
            let arity = o.cell_arity(d, a);
            let refs: Vec<Vec<&PastingDiagram>> = phi
                .iter()
                .enumerate()
                .map(|(j, row)| row.iter().map(|&y| o.cell_arity(j, y)).collect())
                .collect();
            let comp = Composite::new(arity, &refs);
            if comp.result() != o.cell_arity(d, r) {
                report.violation("arity", witness());
                continue;
            }
            if d > 0 {
                let s = o.mult(d - 1, o.cell_src(d, a), &restrict_labels(arity, &phi, false));
                let t = o.mult(d - 1, o.cell_tgt(d, a), &restrict_labels(arity, &phi, true));
                if s != Some(o.cell_src(d, r)) || t != Some(o.cell_tgt(d, r)) {
                    report.violation("faces", witness());
                }
            }
            let budget = o.label_budget(d, r);
            let n = o.cell_count(d);
            let info = shape_info(arity);
            for_each_labelling_desc(
                o,
                comp.result(),
                &mut |_, chosen| {
                    let used: usize = chosen.iter().map(|&y| o.weight(d, y)).sum();
                    (0..n).filter(|&y| used + o.weight(d, y) <= budget).collect()
                },
                &mut |psi| {
                    let outer = o.mult(d, r, psi);
                    let mut inner: Option<Labels<usize>> = Some(Vec::with_capacity(d + 1));
                    for j in 0..=d {
                        let row: Option<Vec<usize>> = (0..info.count(j))
                            .map(|c| o.mult(j, phi[j][c], &comp.pull(j, c, psi)))
                            .collect();
                        match (row, inner.as_mut()) {
                            (Some(row), Some(acc)) => acc.push(row),
                            _ => inner = None,
                        }
                    }
                    let other = inner.and_then(|l| o.mult(d, a, &l));
                    if outer != other {
                        report.violation("associativity", format!("{}, then {psi:?}: {outer:?} vs {other:?}", witness()));
                    }
                },
            );
        }
    }
    report
}

/// Provenance of each term at dimension `d`, for audits.
pub fn provenance_counts(state: &OwcState, d: usize) -> HashMap<Provenance, usize> {
    let mut m = HashMap::new();
    for x in 0..state.count(d) {
        *m.entry(state.provenance(d, x)).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{Bounds, Collection};

    fn bounds(dim: usize, arity: usize, term: usize) -> Bounds {
        Bounds::new(dim, arity, term)
    }

    /// One 0-cell x and 1-cells x -> x of the given chain arities.
    fn arrows(chains: &[usize]) -> Collection {
        let mut c = Collection::empty(1);
        c.push(0, 0, 0, PastingDiagram::dot());
        for &n in chains {
            c.push(1, 0, 0, PastingDiagram::chain(n));
        }
        c
    }

    #[test]
    fn dim0_over_nothing_is_the_unit() {
        let s = OwcState::from_collection(&Collection::empty(0), bounds(0, 5, 2)).unwrap();
        let m = free_operad_dim0(&s).unwrap();
        assert_eq!(m.count(0), 1);
        assert_eq!(m.terms(0).unwrap().entries[0].key, TermKey::Unit);
        assert_eq!(m.arity(0, 0), &PastingDiagram::dot());
    }

    #[test]
    fn dim0_over_one_cell() {
        let s = OwcState::from_collection(&arrows(&[]), bounds(0, 5, 2)).unwrap();
        let m = free_operad_dim0(&s).unwrap();
        assert_eq!(m.count(0), 3);
        let sizes: Vec<usize> = m.terms(0).unwrap().entries.iter().map(|e| e.size).collect();
        assert_eq!(sizes, vec![0, 1, 2]);
        // unit composed into the single slot collapses
        assert_eq!(m.mult(0, 1, &vec![vec![0]]), Some(1));
        assert_eq!(m.mult(0, 0, &vec![vec![1]]), Some(1));
        assert_eq!(m.mult(0, 1, &vec![vec![1]]), Some(2));
        assert_eq!(m.mult(0, 2, &vec![vec![1]]), None);
    }

    #[test]
    fn one_unary_generator_gives_a_linear_chain() {
        let s = OwcState::from_collection(&arrows(&[1]), bounds(1, 7, 3)).unwrap();
        let s = free_operad_step(&free_operad_dim0(&s).unwrap(), 1).unwrap();
        let t = s.terms(1).unwrap();
        assert_eq!(t.len(), 4);
        let trees: Vec<TermCell> = (0..4).map(|x| term_cell(&s, 1, x).unwrap()).collect();
        assert_eq!(trees[0], TermCell::Unit);
        assert_eq!(trees.iter().map(|t| t.size()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(t.strata, vec![1, 2, 3, 4]);
        assert!(check_operad_laws(&s).pass);
    }

    #[test]
    fn no_generators_only_unit() {
        let s = OwcState::from_collection(&arrows(&[]), bounds(1, 7, 3)).unwrap();
        let s = free_operad_step(&free_operad_dim0(&s).unwrap(), 1).unwrap();
        assert_eq!(s.count(1), 1);
        assert_eq!(s.arity(1, 0), &PastingDiagram::unit_tree(1));
        assert_eq!(s.terms(1).unwrap().stabilization_depth(), 0);
    }

    #[test]
    fn grafting_composes_arities() {
        let s = OwcState::from_collection(&arrows(&[1, 2]), bounds(1, 7, 3)).unwrap();
        let s = free_operad_step(&free_operad_dim0(&s).unwrap(), 1).unwrap();
        let embed = &s.terms(1).unwrap().embed;
        let (g1, g2) = (embed[0].unwrap(), embed[1].unwrap());
        let x = s.src(1, g1);
        let labels = vec![vec![x, x, x], vec![g1, g1]];
        let r = s.compose(1, g2, &labels).unwrap().unwrap();
        assert_eq!(s.arity(1, r), &PastingDiagram::chain(2));
        assert_eq!(term_cell(&s, 1, r).unwrap().size(), 3);
        assert!(s.compose(1, g2, &vec![vec![0, 0, 0], vec![g1, g1]]).is_err());
        assert!(check_operad_laws(&s).pass);
    }

    #[test]
    fn counit_into_terminal_gives_arity() {
        let s = OwcState::from_collection(&arrows(&[0, 1, 2]), bounds(1, 7, 2)).unwrap();
        let s = free_operad_step(&free_operad_dim0(&s).unwrap(), 1).unwrap();
        let term = TerminalOperad::new(1, 7);
        let gens = &s.level(1).generators;
        for x in 0..s.count(1) {
            let t = term_cell(&s, 1, x).unwrap();
            // lower labels are 0-terms; send them all to the dot of the terminal operad
            let flat = strip_lower(&t);
            let got = counit_eval(&term, 1, &flat, &|g| term.lookup(1, &gens[g].arity));
            match got {
                Ok(y) => assert_eq!(term.cell_arity(1, y), s.arity(1, x)),
                Err(e) => panic!("{e}"),
            }
        }
    }

    fn strip_lower(t: &TermCell) -> TermCell {
        match t {
            TermCell::Unit => TermCell::Unit,
            TermCell::Node { gen, lower, top } => TermCell::Node {
                gen: *gen,
                lower: lower.iter().map(|r| vec![0; r.len()]).collect(),
                top: top.iter().map(strip_lower).collect(),
            },
        }
    }

    #[test]
    fn terminal_operad_laws() {
        let t = TerminalOperad::new(2, 7);
        let r = check_operad_laws(&t);
        assert!(r.pass, "{:?}", &r.violations[..r.violations.len().min(3)]);
    }

    #[test]
    fn corrupted_mult_is_caught() {
        struct Skewed(TerminalOperad);
        impl CellSource for Skewed {
            fn cell_count(&self, d: usize) -> usize {
                self.0.cell_count(d)
            }
            fn cell_src(&self, d: usize, x: usize) -> usize {
                self.0.cell_src(d, x)
            }
            fn cell_tgt(&self, d: usize, x: usize) -> usize {
                self.0.cell_tgt(d, x)
            }
            fn cell_arity(&self, d: usize, x: usize) -> &PastingDiagram {
                self.0.cell_arity(d, x)
            }
        }
        impl OperadStructure for Skewed {
            fn operad_dim(&self) -> Option<usize> {
                Some(1)
            }
            fn unit(&self, d: usize) -> Option<usize> {
                self.0.unit(d)
            }
            fn mult(&self, d: usize, a: usize, labels: &Labels<usize>) -> Option<usize> {
                let r = self.0.mult(d, a, labels)?;
                // chain-1 composed with chain-2 claims to be chain-0
                let two = self.0.lookup(1, &PastingDiagram::chain(2));
                if d == 1 && self.0.cell_arity(1, a) == &PastingDiagram::chain(1) && labels[1] == vec![two?] {
                    return self.0.lookup(1, &PastingDiagram::chain(0));
                }
                Some(r)
            }
            fn weight(&self, d: usize, x: usize) -> usize {
                self.0.weight(d, x)
            }
            fn label_budget(&self, d: usize, a: usize) -> usize {
                self.0.label_budget(d, a)
            }
        }
        let r = check_operad_laws(&Skewed(TerminalOperad::new(1, 7)));
        assert!(!r.pass);
        assert!(r.violations.iter().any(|v| v.kind == "arity" || v.kind == "left-unit"));
    }
}
