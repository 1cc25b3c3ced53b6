//! Named verification suites. Each suite collects the invariants of one area
//! into a [`Report`]; `ms` is the only field that varies between runs.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::Value;

use crate::collection::{for_each_labelling_desc, Bounds, CellSource, Collection};
use crate::contraction::{check_contraction, free_contraction_step, triangle_identities};
use crate::error::{Error, Result};
use crate::globset::GlobularSet;
use crate::interleave::{count_morphisms, free_owc, induced_morphism, initial_owc, check_morphism, OwcState};
use crate::operad::{check_operad_laws, OperadStructure, counit_eval, free_operad_dim0, free_operad_step, term_cell, TermCell, TerminalOperad};
use crate::oracle::{oracle_shapes, oracle_splice, oracle_terms, oracle_triples, ExplicitDiagram2, OCell, OGen, OShape, OTerm};
use crate::pasting::{enumerate_trees, shape_info, substitute, Composite, LabelledDiagram, Labels, PastingDiagram};
use crate::report::Report;
use crate::state::{GenKey, TermKey};

pub const SUITES: [&str; 10] = [
    "globularity",
    "monoid-laws",
    "operad-laws",
    "contraction-laws",
    "triangle-identities",
    "stability-contraction",
    "stability-operad",
    "ladder-coherence",
    "oracle-equivalence",
    "initiality-probe",
];

pub fn run_suite(name: &str, bounds: &Bounds) -> Result<Report> {
    run_suite_with(name, bounds, None)
}

/// Runs a suite, optionally over an input document: a globular set for
/// `globularity`, a collection for the suites that build states.
pub fn run_suite_with(name: &str, bounds: &Bounds, input: Option<&Value>) -> Result<Report> {
    bounds.validate()?;
    let start = Instant::now();
    let mut report = match name {
        "globularity" => globularity(bounds, input)?,
        "monoid-laws" => monoid_laws(bounds.max_dim.min(2), 9, bounds.max_arity_size),
        "operad-laws" => operad_laws(bounds, &base(input)?)?,
        "contraction-laws" => contraction_laws(bounds, &base(input)?)?,
        "triangle-identities" => triangles(bounds, &base(input)?)?,
        "stability-contraction" => stability(bounds, &base(input)?, false)?,
        "stability-operad" => stability(bounds, &base(input)?, true)?,
        "ladder-coherence" => ladder_coherence(bounds, &base(input)?)?,
        "oracle-equivalence" => oracle_equivalence()?,
        "initiality-probe" => initiality_probe(bounds)?,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    report.suite = name.to_string();
    report.ms = start.elapsed().as_millis();
    Ok(report)
}

fn base(input: Option<&Value>) -> Result<Collection> {
    match input {
        None => Ok(Collection::empty(0)),
        Some(v) => Collection::from_json(v),
    }
}

fn globularity(bounds: &Bounds, input: Option<&Value>) -> Result<Report> {
    if let Some(v) = input {
        return Ok(GlobularSet::from_json(v)?.check_globularity());
    }
    let mut report = Report::new("globularity");
    report.absorb("quantifier", globularity_equivalence(2, 3));
    report.absorb("quantifier", globularity_equivalence(3, 2));
    let s = initial_owc(*bounds)?;
    report.absorb("initial", s.collection().carrier().check_globularity());
    for k in 0..=2 {
        for shape in oracle_shapes(k, 9) {
            report.absorb("diagram", ExplicitDiagram2::new(shape).cells.check_globularity());
        }
    }
    Ok(report)
}

/// Compares `check_globularity` with a literal reading of `ss = st, ts = tt`
/// on every table with the given number of dimensions and at most
/// `max_cells` cells per dimension.
pub fn globularity_equivalence(dims: usize, max_cells: usize) -> Report {
    let mut report = Report::new("globularity-equivalence");
    let mut counts = vec![0; dims + 1];
    loop {
        if counts[0] > 0 {
            each_table(&counts, &mut |g| {
                let mut direct = 0;
                for k in 2..=dims {
                    for x in 0..g.count(k) {
                        let (s, t) = (g.src(k, x), g.tgt(k, x));
                        direct += usize::from(g.src(k - 1, s) != g.src(k - 1, t));
                        direct += usize::from(g.tgt(k - 1, s) != g.tgt(k - 1, t));
                    }
                }
                let r = g.check_globularity();
                if r.violations.len() != direct || r.pass != (direct == 0) {
                    report.violation("disagree", format!("{:?}", g.to_json()));
                }
            });
        }
        // odometer over counts in 0..=max_cells
        let mut i = 0;
        while i <= dims && counts[i] == max_cells {
            counts[i] = 0;
            i += 1;
        }
        if i > dims {
            break;
        }
        counts[i] += 1;
    }
    report
}

fn each_table(counts: &[usize], visit: &mut dyn FnMut(&GlobularSet)) {
    // every assignment of faces, one (src, tgt) pair per cell of positive dimension
    let slots: Vec<(usize, usize)> = (1..counts.len()).flat_map(|k| (0..counts[k]).map(move |_| (k, counts[k - 1]))).collect();
    if slots.iter().any(|&(_, n)| n == 0) {
        return;
    }
    let mut choice = vec![0usize; 2 * slots.len()];
    loop {
        let mut src = vec![Vec::new(); counts.len()];
        let mut tgt = vec![Vec::new(); counts.len()];
        for (i, &(k, _)) in slots.iter().enumerate() {
            src[k].push(choice[2 * i]);
            tgt[k].push(choice[2 * i + 1]);
        }
        visit(&GlobularSet::new(counts.to_vec(), src, tgt).expect("faces in range"));
        let mut i = 0;
        while i < choice.len() && choice[i] + 1 == slots[i / 2].1 {
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
        choice[i] += 1;
    }
}

fn iterated_boundary(t: &PastingDiagram, times: usize) -> PastingDiagram {
    (0..times).fold(t.clone(), |b, _| b.boundary().expect("positive dimension"))
}

/// Unit laws for every shape of dimension at most `max_dim` and size at most
/// `max_shape`, and associativity of substitution for every shape whose first
/// composite stays within `max_shape`, with every label of size at most `max_label`.
pub fn monoid_laws(max_dim: usize, max_shape: usize, max_label: usize) -> Report {
    let mut report = Report::new("monoid-laws");
    let labels = TerminalOperad::new(max_dim, max_label);
    for d in 0..=max_dim {
        let tops: Vec<usize> = (0..labels.cell_count(d)).collect();
        for shape in enumerate_trees(d, max_shape) {
            let units = LabelledDiagram::from_fn(shape.clone(), |a| PastingDiagram::unit_tree(a.dim()));
            if substitute(&units).as_ref() != Ok(&shape) {
                report.violation("right-unit", shape.to_string());
            }
            let around = LabelledDiagram::from_fn(PastingDiagram::unit_tree(d), |a| iterated_boundary(&shape, d - a.dim()));
            if substitute(&around).as_ref() != Ok(&shape) {
                report.violation("left-unit", shape.to_string());
            }
            let cell = |j: usize, y: usize| labels.cell_arity(j, y);
            for_each_labelling_desc(&labels, &shape, &mut |_, _| tops.clone(), &mut |l| {
                let refs: Vec<Vec<&PastingDiagram>> = l
                    .iter()
                    .enumerate()
                    .map(|(j, row)| row.iter().map(|&y| cell(j, y)).collect())
                    .collect();
                let comp = Composite::new(&shape, &refs);
                let r = comp.result();
                if r.size() > max_shape {
                    return;
                }
                for_each_labelling_desc(&labels, r, &mut |_, _| tops.clone(), &mut |n| {
                    let outer: Vec<Vec<&PastingDiagram>> = n
                        .iter()
                        .enumerate()
                        .map(|(j, row)| row.iter().map(|&y| cell(j, y)).collect())
                        .collect();
                    let lhs = Composite::new(r, &outer).into_result();
                    let inner: Labels<PastingDiagram> = l
                        .iter()
                        .enumerate()
                        .map(|(j, row)| {
                            row.iter()
                                .enumerate()
                                .map(|(c, &y)| {
                                    let pulled = comp.pull(j, c, n);
                                    let refs: Vec<Vec<&PastingDiagram>> = pulled
                                        .iter()
                                        .enumerate()
                                        .map(|(e, row)| row.iter().map(|&z| cell(e, z)).collect())
                                        .collect();
                                    Composite::new(cell(j, y), &refs).into_result()
                                })
                                .collect()
                        })
                        .collect();
                    let rhs = LabelledDiagram::new(shape.clone(), inner).and_then(|ld| substitute(&ld));
                    if rhs.as_ref() != Ok(&lhs) {
                        report.violation("associativity", format!("{shape} with {l:?} then {n:?}"));
                    }
                });
            });
        }
    }
    report
}

fn operad_laws(bounds: &Bounds, a: &Collection) -> Result<Report> {
    let mut report = Report::new("operad-laws");
    let s = free_owc(a, *bounds)?;
    report.absorb("free", check_operad_laws(&s));
    report.absorb("terminal", check_operad_laws(&TerminalOperad::new(bounds.max_dim.min(2), bounds.max_arity_size)));
    Ok(report)
}

fn contraction_laws(bounds: &Bounds, a: &Collection) -> Result<Report> {
    let mut report = Report::new("contraction-laws");
    let s = free_owc(a, *bounds)?;
    report.absorb("free", check_contraction(&s, &s, bounds.max_arity_size));
    let t = TerminalOperad::new(bounds.max_dim.min(2), bounds.max_arity_size);
    report.absorb("terminal", check_contraction(&t, &t, bounds.max_arity_size));
    for m in 0..=6 {
        let added = contraction_cells_over_a_point(2 * m + 1)?;
        if added != m + 1 {
            report.violation("count-law", format!("chains up to length {m}: {added} cells"));
        }
    }
    Ok(report)
}

/// Number of 1-cells the first contraction step adds over a single 0-cell.
pub fn contraction_cells_over_a_point(max_arity_size: usize) -> Result<usize> {
    let s = free_operad_dim0(&OwcState::from_collection(&Collection::empty(0), Bounds::new(1, max_arity_size, 1))?)?;
    Ok(free_contraction_step(&s, 1)?.level(1).generators.len())
}

/// Every state of the construction, built with the unchecked steps so
/// that the stability suites can observe any damage themselves.
fn raw_ladder(a: &Collection, bounds: &Bounds) -> Result<Vec<(String, OwcState)>> {
    let input = OwcState::from_collection(a, *bounds)?;
    let m0 = free_operad_dim0(&input)?;
    let mut out = vec![("input".to_string(), input), ("operad-0".to_string(), m0)];
    for k in 1..=bounds.max_dim {
        let h = free_contraction_step(&out.last().expect("nonempty").1, k)?;
        let m = free_operad_step(&h, k)?;
        out.push((format!("contraction-{k}"), h));
        out.push((format!("operad-{k}"), m));
    }
    Ok(out)
}

fn triangles(bounds: &Bounds, a: &Collection) -> Result<Report> {
    let mut report = Report::new("triangle-identities");
    let states = raw_ladder(a, bounds)?;
    for w in states.windows(2) {
        let ((_, x), (step, y)) = (&w[0], &w[1]);
        if let Some(k) = step.strip_prefix("contraction-") {
            let k: usize = k.parse().expect("step name");
            report.absorb(&format!("H{k}"), triangle_identities(&x.collection(), k, bounds.max_arity_size));
        } else if let Some(k) = step.strip_prefix("operad-") {
            let k: usize = k.parse().expect("step name");
            report.absorb(&format!("M{k}"), operad_triangles(x, y, k));
        }
    }
    let t = TerminalOperad::new(bounds.max_dim.min(2), bounds.max_arity_size);
    for d in 0..=t.max_dim() {
        for y in 0..t.cell_count(d) {
            let g = generator_term(&t, d, y);
            if g.and_then(|g| counit_eval(&t, d, &g, &|c| Some(c)).ok()) != Some(y) {
                report.violation("terminal/N(eps).eta", format!("cell {d}#{y}"));
            }
        }
    }
    Ok(report)
}

/// The one-node term on cell `y` of an operad, with its units on every other cell.
fn generator_term<O: OperadStructure + ?Sized>(o: &O, d: usize, y: usize) -> Option<TermCell> {
    let arity = o.cell_arity(d, y);
    Some(TermCell::Node {
        gen: y,
        lower: (0..d).map(|j| o.unit(j).map(|u| vec![u; arity.cell_count(j)])).collect::<Option<_>>()?,
        top: vec![TermCell::Unit; arity.cell_count(d)],
    })
}

/// Triangle identities for the free operad step `x -> mx` at dimension `k`.
/// The unit sends a generator to its one-node term; the counit evaluates a
/// term over cells of an operad by composing them.
pub fn operad_triangles(x: &OwcState, mx: &OwcState, k: usize) -> Report {
    let mut report = Report::new("operad-triangles");
    let gens = &x.level(k).generators;
    let eta: Vec<Option<usize>> = (0..gens.len()).map(|g| mx.generator_cell(k, g)).collect();
    for (g, gen) in gens.iter().enumerate() {
        match eta[g] {
            None => report.violation("eta-missing", format!("generator {k}#{g}")),
            Some(c) => {
                if mx.arity(k, c) != &gen.arity {
                    report.violation("eta-arity", format!("generator {k}#{g}"));
                }
                if k > 0 && (mx.src(k, c) != gen.src || mx.tgt(k, c) != gen.tgt) {
                    report.violation("eta-faces", format!("generator {k}#{g}"));
                }
            }
        }
    }
    for t in 0..mx.count(k) {
        let Some(term) = term_cell(mx, k, t) else {
            report.violation("decode", format!("cell {k}#{t}"));
            continue;
        };
        // eps_{MX} . M(eta_X) = id
        let relabelled = term.map_gens(&|g| eta[g].unwrap_or(usize::MAX));
        if counit_eval(mx, k, &relabelled, &|c| Some(c)).ok() != Some(t) {
            report.violation("eps.M(eta)", format!("cell {k}#{t}"));
        }
        // N(eps_Y) . eta_{NY} = id for Y = MX
        let g = generator_term(mx, k, t);
        if g.and_then(|g| counit_eval(mx, k, &g, &|c| Some(c)).ok()) != Some(t) {
            report.violation("N(eps).eta", format!("cell {k}#{t}"));
        }
    }
    report
}

fn stability(bounds: &Bounds, a: &Collection, operad_steps: bool) -> Result<Report> {
    let mut report = Report::new(if operad_steps { "stability-operad" } else { "stability-contraction" });
    let states = raw_ladder(a, bounds)?;
    for w in states.windows(2) {
        let ((_, before), (step, after)) = (&w[0], &w[1]);
        if step.starts_with("operad-") != operad_steps {
            continue;
        }
        let k = before.operad_dim.map_or(0, |j| j + 1);
        if before.mult_table_json(k) != after.mult_table_json(k) {
            report.violation("mult", format!("{step}: composition below dimension {k} changed"));
        }
        let c = before.contraction_dim;
        if before.gamma_table_json(c) != after.gamma_table_json(c) {
            report.violation("gamma", format!("{step}: contraction up to dimension {c} changed"));
        }
        for d in 0..k {
            if before.dim_json(d) != after.dim_json(d) {
                report.violation("cells", format!("{step}: dimension {d} changed"));
            }
        }
    }
    Ok(report)
}

fn ladder_coherence(bounds: &Bounds, a: &Collection) -> Result<Report> {
    let mut report = Report::new("ladder-coherence");
    for k in 0..=1 {
        let small = free_owc(a, bounds.with_dim(k))?.lower_json(k);
        let large = free_owc(a, bounds.with_dim(k + 2))?.lower_json(k);
        if serde_json::to_string(&small)? != serde_json::to_string(&large)? {
            report.violation("diff", format!("dimension {k} data differs between max_dim {k} and {}", k + 2));
        }
    }
    Ok(report)
}

fn oracle_equivalence() -> Result<Report> {
    let mut report = Report::new("oracle-equivalence");
    report.absorb("trees", trees_equivalence(9));
    report.absorb("substitution", substitution_equivalence(7, 5));
    report.absorb("terms", terms_equivalence()?);
    report.absorb("triples", triples_equivalence(7)?);
    Ok(report)
}

/// Pipeline trees against the column-list oracle, as sets and as explicit cell tables.
pub fn trees_equivalence(max_size: usize) -> Report {
    let mut report = Report::new("trees");
    for k in 0..=2 {
        let trees = enumerate_trees(k, max_size);
        let ours: BTreeSet<OShape> = trees.iter().filter_map(OShape::from_tree).collect();
        let theirs: BTreeSet<OShape> = oracle_shapes(k, max_size).into_iter().collect();
        if ours.len() != trees.len() {
            report.violation("duplicates", format!("dimension {k}"));
        }
        for s in ours.symmetric_difference(&theirs) {
            report.violation("set", format!("dimension {k}: {s:?}"));
        }
        for t in &trees {
            let Some(shape) = OShape::from_tree(t) else { continue };
            let explicit = ExplicitDiagram2::new(shape);
            if &explicit.to_tree() != t {
                report.violation("round-trip", t.to_string());
            }
            let info = shape_info(t);
            let tables = GlobularSet::new((0..=k).map(|j| info.count(j)).collect(), info.src.clone(), info.tgt.clone());
            if tables.as_ref() != Ok(&explicit.cells) {
                report.violation("cell-tables", t.to_string());
            }
        }
    }
    report
}

/// Substitution and label embeddings against column splicing, for every
/// labelling of every shape up to `max_shape` by labels up to `max_label`.
pub fn substitution_equivalence(max_shape: usize, max_label: usize) -> Report {
    let mut report = Report::new("substitution");
    let labels = TerminalOperad::new(2, max_label);
    for d in 0..=2 {
        let tops: Vec<usize> = (0..labels.cell_count(d)).collect();
        for shape in enumerate_trees(d, max_shape) {
            let outer = OShape::from_tree(&shape).expect("dimension at most 2");
            for_each_labelling_desc(&labels, &shape, &mut |_, _| tops.clone(), &mut |l| {
                let refs: Vec<Vec<&PastingDiagram>> = l
                    .iter()
                    .enumerate()
                    .map(|(j, row)| row.iter().map(|&y| labels.cell_arity(j, y)).collect())
                    .collect();
                let os: Vec<Vec<OShape>> = refs
                    .iter()
                    .map(|row| row.iter().map(|t| OShape::from_tree(t).expect("dimension at most 2")).collect())
                    .collect();
                let comp = Composite::new(&shape, &refs);
                let Some((r, emb)) = oracle_splice(&outer, &os) else {
                    report.violation("oracle-rejects", format!("{shape} with {l:?}"));
                    return;
                };
                if OShape::from_tree(comp.result()).as_ref() != Some(&r) {
                    report.violation("result", format!("{shape} with {l:?}"));
                    return;
                }
                for (j, row) in emb.iter().enumerate() {
                    for (c, slice) in row.iter().enumerate() {
                        if comp.slice(j, c) != slice.as_slice() {
                            report.violation("embedding", format!("{shape} with {l:?}, cell {j}#{c}"));
                        }
                    }
                }
            });
        }
    }
    report
}

fn oterm(s: &OwcState, d: usize, x: usize) -> OTerm {
    match s.terms(d).map(|t| &t.entries[x].key) {
        Some(TermKey::Node { gen, labels }) => OTerm::Node(
            *gen,
            labels
                .iter()
                .enumerate()
                .map(|(j, row)| row.iter().map(|&y| oterm(s, j, y)).collect())
                .collect(),
        ),
        _ => OTerm::Unit,
    }
}

type TermRow = (OTerm, OShape, OTerm, OTerm);

fn pipeline_rows(s: &OwcState, d: usize) -> BTreeSet<TermRow> {
    (0..s.count(d))
        .map(|x| {
            let faces = if d == 0 {
                (OTerm::Unit, OTerm::Unit)
            } else {
                (oterm(s, d - 1, s.src(d, x)), oterm(s, d - 1, s.tgt(d, x)))
            };
            (oterm(s, d, x), OShape::from_tree(s.arity(d, x)).expect("dimension at most 2"), faces.0, faces.1)
        })
        .collect()
}

/// Compares every term table of `s` with the oracle run on the same generators.
pub fn compare_terms(s: &OwcState) -> Report {
    let mut report = Report::new("terms");
    let top = s.operad_dim.expect("operad structure");
    let gens: Vec<Vec<OGen>> = (0..=top)
        .map(|d| {
            s.level(d)
                .generators
                .iter()
                .map(|g| OGen {
                    arity: OShape::from_tree(&g.arity).expect("dimension at most 2"),
                    src: if d == 0 { OTerm::Unit } else { oterm(s, d - 1, g.src) },
                    tgt: if d == 0 { OTerm::Unit } else { oterm(s, d - 1, g.tgt) },
                })
                .collect()
        })
        .collect();
    let oracle = oracle_terms(&gens, s.bounds.max_term_size, s.bounds.max_arity_size);
    for d in 0..=top {
        let ours = pipeline_rows(s, d);
        let theirs: BTreeSet<TermRow> = oracle.terms[d].iter().cloned().collect();
        if ours.len() != s.count(d) {
            report.violation("duplicates", format!("dimension {d}"));
        }
        for t in ours.symmetric_difference(&theirs) {
            let side = if ours.contains(t) { "pipeline-only" } else { "oracle-only" };
            report.violation(side, format!("dimension {d}: {t:?}"));
        }
    }
    report
}

/// Small collections with at most three generators per dimension.
pub fn sample_collections() -> Vec<(&'static str, Collection)> {
    let chain = PastingDiagram::chain;
    let cols = |h: &[usize]| PastingDiagram::columns(h);
    let mut out = vec![("empty", Collection::empty(0))];
    let mut point = Collection::empty(0);
    point.push(0, 0, 0, PastingDiagram::dot());
    out.push(("point", point));
    let mut loops = Collection::empty(1);
    loops.push(0, 0, 0, PastingDiagram::dot());
    for m in [0, 1, 2] {
        loops.push(1, 0, 0, chain(m));
    }
    out.push(("loops", loops));
    let mut cycle = Collection::empty(1);
    cycle.push(0, 0, 0, PastingDiagram::dot());
    cycle.push(0, 0, 0, PastingDiagram::dot());
    cycle.push(1, 0, 1, chain(1));
    cycle.push(1, 1, 0, chain(1));
    cycle.push(1, 0, 0, chain(2));
    out.push(("cycle", cycle));
    let mut globes = Collection::empty(2);
    globes.push(0, 0, 0, PastingDiagram::dot());
    globes.push(1, 0, 0, chain(1));
    for h in [1, 2, 0] {
        globes.push(2, 0, 0, cols(&[h]));
    }
    out.push(("globes", globes));
    let mut swap = Collection::empty(2);
    swap.push(0, 0, 0, PastingDiagram::dot());
    swap.push(1, 0, 0, chain(1));
    swap.push(1, 0, 0, chain(1));
    swap.push(2, 0, 1, cols(&[1]));
    swap.push(2, 1, 0, cols(&[1]));
    out.push(("swap", swap));
    out
}

/// Free operad steps on the sample collections and on the first contraction
/// cells of the initial run, against the oracle.
pub fn terms_equivalence() -> Result<Report> {
    let mut report = Report::new("terms");
    for term in 1..=3 {
        for arity in [5, 7] {
            let bounds = Bounds::new(2, arity, term);
            for (name, c) in sample_collections() {
                let mut s = free_operad_dim0(&OwcState::from_collection(&c, bounds)?)?;
                for d in 1..=2 {
                    s = free_operad_step(&s, d)?;
                }
                report.absorb(&format!("{name}/T{term}/A{arity}"), compare_terms(&s));
            }
        }
        let bounds = Bounds::new(1, 5, term);
        let s = free_operad_dim0(&OwcState::from_collection(&Collection::empty(0), bounds)?)?;
        let s = free_operad_step(&free_contraction_step(&s, 1)?, 1)?;
        report.absorb(&format!("initial/T{term}"), compare_terms(&s));
    }
    Ok(report)
}

/// Contraction steps of the initial run at dimensions 1 and 2 against the
/// flat triple filter, for every arity bound up to `max_arity_size`.
pub fn triples_equivalence(max_arity_size: usize) -> Result<Report> {
    let mut report = Report::new("triples");
    for arity in 1..=max_arity_size {
        let bounds = Bounds::new(2, arity, 2);
        let mut s = free_operad_dim0(&OwcState::from_collection(&Collection::empty(0), bounds)?)?;
        for d in 1..=2 {
            let h = free_contraction_step(&s, d)?;
            let cells: Vec<OCell> = (0..s.count(d - 1))
                .map(|x| OCell {
                    src: if d == 1 { 0 } else { s.src(d - 1, x) },
                    tgt: if d == 1 { 0 } else { s.tgt(d - 1, x) },
                    arity: OShape::from_tree(s.arity(d - 1, x)).expect("dimension at most 2"),
                })
                .collect();
            let theirs = oracle_triples(&cells, d, arity);
            let added: Vec<_> = h.level(d).generators[s.level(d).generators.len()..]
                .iter()
                .filter_map(|g| match &g.key {
                    GenKey::Ctr(c) => Some((c.a, c.b, OShape::from_tree(&c.theta).expect("dimension at most 2"))),
                    GenKey::Input(_) => None,
                })
                .collect();
            let ours: BTreeSet<_> = added.iter().cloned().collect();
            if ours.len() != added.len() {
                report.violation("duplicates", format!("A{arity} dimension {d}"));
            }
            for t in ours.symmetric_difference(&theirs) {
                report.violation("set", format!("A{arity} dimension {d}: {t:?}"));
            }
            s = free_operad_step(&h, d)?;
        }
    }
    for m in 0..=6 {
        let point = OCell { src: 0, tgt: 0, arity: OShape::Dot };
        let n = oracle_triples(&[point], 1, 2 * m + 1).len();
        let ours = contraction_cells_over_a_point(2 * m + 1)?;
        if n != m + 1 || ours != n {
            report.violation("count-law", format!("m={m}: pipeline {ours}, oracle {n}"));
        }
    }
    Ok(report)
}

fn initiality_probe(bounds: &Bounds) -> Result<Report> {
    let mut report = Report::new("initiality-probe");
    let s = initial_owc(*bounds)?;
    let mut point = Collection::empty(0);
    point.push(0, 0, 0, PastingDiagram::dot());
    let t = free_owc(&point, *bounds)?;
    match induced_morphism(&s, &t, &|_, _| None) {
        Ok(f) => report.absorb("free-on-a-point", check_morphism(&s, &t, &f)),
        Err(e) => report.violation("free-on-a-point/induce", e.to_string()),
    }
    let terminal = TerminalOperad::new(bounds.max_dim.min(2), bounds.max_arity_size);
    if bounds.max_dim <= 2 {
        match induced_morphism(&s, &terminal, &|_, _| None) {
            Ok(f) => report.absorb("terminal", check_morphism(&s, &terminal, &f)),
            Err(e) => report.violation("terminal/induce", e.to_string()),
        }
    }
    let probe = Bounds::new(1, 3, 2);
    let n = uniqueness_count(probe)?;
    if n != 1 {
        report.violation("uniqueness", format!("{n} morphisms at {probe:?}"));
    }
    Ok(report)
}

/// Number of structure-preserving maps from the initial state into the
/// free state on one 0-cell, counted up to 2.
pub fn uniqueness_count(bounds: Bounds) -> Result<usize> {
    let s = initial_owc(bounds)?;
    let mut point = Collection::empty(0);
    point.push(0, 0, 0, PastingDiagram::dot());
    let t = free_owc(&point, bounds)?;
    Ok(count_morphisms(&s, &t, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &Bounds::default()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn globularity_agrees_on_small_tables() {
        assert!(globularity_equivalence(2, 2).pass);
    }

    #[test]
    fn corrupted_globset_input() {
        let v = serde_json::json!({"dims": 2, "cells": [[0, 1], [0, 1], [0]], "src": [[], [0, 1], [0]], "tgt": [[], [1, 1], [1]]});
        let r = run_suite_with("globularity", &Bounds::default(), Some(&v)).unwrap();
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn small_oracle_checks() {
        assert!(trees_equivalence(7).pass);
        assert!(substitution_equivalence(5, 5).pass);
        let r = triples_equivalence(5).unwrap();
        assert!(r.pass, "{:?}", r.violations);
    }

    #[test]
    fn small_laws() {
        let r = monoid_laws(2, 7, 5);
        assert!(r.pass, "{:?}", &r.violations[..r.violations.len().min(3)]);
    }
}
