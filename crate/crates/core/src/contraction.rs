//! Contraction structures and the dimension-wise free contraction steps.
//!
//! A contraction at dimension d assigns to each parallel pair `(a, b)` of
//! (d-1)-cells and each d-diagram `theta` whose boundary is the common arity
//! of `a` and `b` a d-cell from `a` to `b` of arity `theta`.

use std::collections::{BTreeMap, HashMap};

use crate::collection::{CellSource, Collection};
use crate::error::{Error, Result};
use crate::globset::GlobMorphism;
use crate::operad::ContractionStructure;
use crate::pasting::{enumerate_trees, PastingDiagram};
use crate::report::Report;
use crate::state::{CtrCell, GenKey, Generator, OwcState, Provenance, StepLog};

/// All admissible triples with `a`, `b` cells of dimension `d - 1` and
/// `theta` a d-diagram of size at most `max_arity_size`, ordered by `(a, b, theta)`.
pub fn admissible_triples<C: CellSource + ?Sized>(cells: &C, d: usize, max_arity_size: usize) -> Vec<CtrCell> {
    assert!(d >= 1, "contraction cells have positive dimension");
    let mut by_boundary: BTreeMap<PastingDiagram, Vec<PastingDiagram>> = BTreeMap::new();
    for theta in enumerate_trees(d, max_arity_size) {
        by_boundary.entry(theta.boundary().expect("d >= 1")).or_default().push(theta);
    }
    let k = d - 1;
    let n = cells.cell_count(k);
    // group the (d-1)-cells by faces and arity so only parallel, equal-arity pairs meet
    let mut groups: HashMap<(usize, usize, &PastingDiagram), Vec<usize>> = HashMap::new();
    for x in 0..n {
        let faces = if k == 0 { (0, 0) } else { (cells.cell_src(k, x), cells.cell_tgt(k, x)) };
        groups.entry((faces.0, faces.1, cells.cell_arity(k, x))).or_default().push(x);
    }
    let mut out = Vec::new();
    for a in 0..n {
        let faces = if k == 0 { (0, 0) } else { (cells.cell_src(k, a), cells.cell_tgt(k, a)) };
        let arity = cells.cell_arity(k, a);
        let Some(thetas) = by_boundary.get(arity) else {
            continue;
        };
        for &b in &groups[&(faces.0, faces.1, arity)] {
            for theta in thetas {
                out.push(CtrCell {
                    a,
                    b,
                    theta: theta.clone(),
                });
            }
        }
    }
    out
}

/// `H_d`: adds a contraction cell for every admissible triple at dimension `d`
/// not already present. Dimensions other than `d` are untouched.
pub fn free_contraction_step(state: &OwcState, d: usize) -> Result<OwcState> {
    if d == 0 || d > state.max_dim() {
        return Err(Error::Bounds(format!("no contraction step at dimension {d} under max_dim {}", state.max_dim())));
    }
    if state.contraction_dim + 1 < d {
        return Err(Error::Stage {
            expected: format!("contraction up to dimension {}", d - 1),
            found: format!("contraction up to dimension {}", state.contraction_dim),
        });
    }
    if state.operad_dim.is_some_and(|j| j >= d) {
        return Err(Error::Stage {
            expected: format!("no operad structure at dimension {d}"),
            found: format!("operad up to dimension {:?}", state.operad_dim),
        });
    }
    let mut level = state.level(d).clone();
    let mut added = 0;
    for c in admissible_triples(state, d, state.bounds.max_arity_size) {
        if level.ctr_generator(&c).is_some() {
            continue;
        }
        level.push_generator(Generator {
            src: c.a,
            tgt: c.b,
            arity: c.theta.clone(),
            key: GenKey::Ctr(c),
            provenance: Provenance::ContractionStep(d),
        });
        added += 1;
    }
    let mut next = state.clone();
    next.replace_level(d, level);
    next.contraction_dim = next.contraction_dim.max(d);
    next.log.push(StepLog {
        step: format!("contraction-{d}"),
        added,
        overflow: 0,
        depth: None,
    });
    Ok(next)
}

/// An explicit contraction table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Contraction {
    pub up_to_dim: usize,
    /// `gamma[d]` for `d >= 1`; row 0 is always empty.
    pub gamma: Vec<HashMap<CtrCell, usize>>,
}

impl Contraction {
    pub fn from_structure<G: ContractionStructure + ?Sized, C: CellSource + ?Sized>(
        g: &G,
        cells: &C,
        max_arity_size: usize,
    ) -> Self {
        let mut gamma = vec![HashMap::new()];
        for d in 1..=g.contraction_dim() {
            gamma.push(
                admissible_triples(cells, d, max_arity_size)
                    .into_iter()
                    .filter_map(|c| g.gamma(d, &c).map(|x| (c, x)))
                    .collect(),
            );
        }
        Contraction {
            up_to_dim: g.contraction_dim(),
            gamma,
        }
    }
}

impl ContractionStructure for Contraction {
    fn contraction_dim(&self) -> usize {
        self.up_to_dim
    }

    fn gamma(&self, d: usize, c: &CtrCell) -> Option<usize> {
        self.gamma.get(d)?.get(c).copied()
    }
}

/// Totality over admissible triples within the bound, plus the arity and face conditions.
pub fn check_contraction<C: CellSource + ?Sized, G: ContractionStructure + ?Sized>(
    cells: &C,
    g: &G,
    max_arity_size: usize,
) -> Report {
    let mut report = Report::new("contraction");
    for d in 1..=g.contraction_dim() {
        for c in admissible_triples(cells, d, max_arity_size) {
            let w = || format!("dimension {d}: a={} b={} theta={}", c.a, c.b, c.theta);
            let Some(x) = g.gamma(d, &c) else {
                report.violation("totality", w());
                continue;
            };
            if x >= cells.cell_count(d) {
                report.violation("range", w());
                continue;
            }
            if cells.cell_arity(d, x) != &c.theta {
                report.violation("arity", w());
            }
            if cells.cell_src(d, x) != c.a || cells.cell_tgt(d, x) != c.b {
                report.violation("faces", w());
            }
        }
    }
    report
}

/// Checks `f(gamma(a, b, theta)) = gamma'(f a, f b, theta)` on every admissible triple of the source.
pub fn contraction_morphism_check<C, G, H>(f: &GlobMorphism, cells: &C, s: &G, t: &H, max_arity_size: usize) -> Report
where
    C: CellSource + ?Sized,
    G: ContractionStructure + ?Sized,
    H: ContractionStructure + ?Sized,
{
    let mut report = Report::new("contraction-morphism");
    for d in 1..=s.contraction_dim().min(f.maps.len().saturating_sub(1)) {
        for c in admissible_triples(cells, d, max_arity_size) {
            let Some(x) = s.gamma(d, &c) else {
                continue;
            };
            let image = CtrCell {
                a: f.maps[d - 1][c.a],
                b: f.maps[d - 1][c.b],
                theta: c.theta.clone(),
            };
            if t.gamma(d, &image) != Some(f.maps[d][x]) {
                report.violation("gamma", format!("dimension {d}: a={} b={} theta={}", c.a, c.b, c.theta));
            }
        }
    }
    report
}

/// The free contraction at dimension `d` on a plain collection: a copy with one
/// new d-cell per admissible triple, appended after the existing d-cells.
pub fn free_contraction_collection(c: &Collection, d: usize, max_arity_size: usize) -> (Collection, Vec<CtrCell>) {
    let triples = admissible_triples(c, d, max_arity_size);
    let mut out = c.clone();
    for t in &triples {
        out.push(d, t.a, t.b, t.theta.clone());
    }
    (out, triples)
}

/// The contraction carried by the output of [`free_contraction_collection`].
pub fn tautological(c: &Collection, d: usize, triples: &[CtrCell]) -> Contraction {
    let first = c.count(d) - triples.len();
    let mut gamma = vec![HashMap::new(); d + 1];
    gamma[d] = triples.iter().enumerate().map(|(i, t)| (t.clone(), first + i)).collect();
    Contraction { up_to_dim: d, gamma }
}

/// Pointwise triangle identities of the free/forgetful pair at dimension `d`
/// for the collection `a`, whose d-cells (if any) carry no contraction.
pub fn triangle_identities(a: &Collection, d: usize, max_arity_size: usize) -> Report {
    let mut report = Report::new("contraction-triangles");
    let (ha, ta) = free_contraction_collection(a, d, max_arity_size);
    let gamma_ha = tautological(&ha, d, &ta);
    let (hkha, tk) = free_contraction_collection(&ha, d, max_arity_size);
    let identity = GlobMorphism::identity(ha.carrier());
    // H(eta_A): old cells to themselves, each new cell to the new cell of the same triple
    let first_new = a.count(d);
    let first_kk = ha.count(d);
    let pos: HashMap<&CtrCell, usize> = tk.iter().enumerate().map(|(i, t)| (t, first_kk + i)).collect();
    let mut h_eta = identity.clone();
    for (i, t) in ta.iter().enumerate() {
        match pos.get(t) {
            Some(&y) => h_eta.maps[d][first_new + i] = y,
            None => report.violation("unit-image", format!("triple {t:?}")),
        }
    }
    // counit at HA: old cells fixed, new triples sent to HA's own contraction cells
    let mut eps = GlobMorphism::identity(hkha.carrier());
    for (i, t) in tk.iter().enumerate() {
        match gamma_ha.gamma(d, t) {
            Some(y) => eps.maps[d][first_kk + i] = y,
            None => report.violation("counit-gamma", format!("triple {t:?}")),
        }
    }
    report.absorb("H-eta", h_eta.check(ha.carrier(), hkha.carrier()));
    report.absorb("eps", eps.check(hkha.carrier(), ha.carrier()));
    if h_eta.compose(&eps) != identity {
        report.violation("eps.H(eta)", format!("dimension {d}"));
    }
    for x in 0..hkha.count(d) {
        if hkha.arity(d, x) != ha.arity(d, eps.maps[d][x]) {
            report.violation("eps-arity", format!("cell {d}#{x}"));
        }
    }
    // K(eps_B) . eta_KB for B = HA: the inclusion followed by the counit is the identity
    let eta = GlobMorphism::identity(ha.carrier());
    let back = eta.compose(&GlobMorphism {
        maps: eps.maps.iter().enumerate().map(|(k, row)| row[..ha.count(k)].to_vec()).collect(),
    });
    if back != identity {
        report.violation("K(eps).eta", format!("dimension {d}"));
    }
    report
}
