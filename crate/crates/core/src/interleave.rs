//! The interleaved construction: alternating contraction and operad steps,
//! one dimension at a time, and the bounded initial operad-with-contraction.

use std::collections::HashMap;
use std::sync::Arc;

use crate::collection::{Bounds, CellSource, Collection};
use crate::contraction::{admissible_triples, contraction_morphism_check, free_contraction_step};
use crate::error::{Error, Result};
use crate::globset::GlobMorphism;
use crate::operad::{composites, free_operad_dim0, free_operad_step, ContractionStructure, OperadStructure};
use crate::pasting::Labels;
use crate::report::Report;
pub use crate::state::{CtrCell, GenKey, OwcState, Provenance, StepLog};
use crate::state::TermKey;

fn stage_error(state: &OwcState, expected: String) -> Error {
    Error::Stage {
        expected,
        found: format!("({}, {:?})", state.contraction_dim, state.operad_dim),
    }
}

/// `F_{k+1,k}`: from stage `(k, k)` to `(k+1, k)`.
pub fn step_contraction(state: &OwcState) -> Result<OwcState> {
    let Some(k) = state.operad_dim else {
        return Err(stage_error(state, "an operad structure".into()));
    };
    if state.contraction_dim != k {
        return Err(stage_error(state, format!("({k}, {k})")));
    }
    let next = free_contraction_step(state, k + 1)?;
    for d in 0..=k {
        if !Arc::ptr_eq(state.level_arc(d), next.level_arc(d)) {
            return Err(Error::Stage {
                expected: format!("dimension {d} untouched by the contraction step"),
                found: "modified".into(),
            });
        }
    }
    Ok(next)
}

/// `F_{k+1,k+1}`: from stage `(k+1, k)` to `(k+1, k+1)`.
pub fn step_operad(state: &OwcState) -> Result<OwcState> {
    let Some(k) = state.operad_dim else {
        return Err(stage_error(state, "an operad structure".into()));
    };
    if state.contraction_dim != k + 1 {
        return Err(stage_error(state, format!("({}, {k})", k + 1)));
    }
    let before = state.gamma_table_json(k + 1);
    let next = free_operad_step(state, k + 1)?;
    if next.gamma_table_json(k + 1) != before {
        return Err(Error::Stage {
            expected: format!("contraction up to dimension {} unchanged by the operad step", k + 1),
            found: "modified".into(),
        });
    }
    Ok(next)
}

/// Every intermediate state of the ladder, starting from the input.
pub fn ladder(a: &Collection, bounds: Bounds) -> Result<Vec<OwcState>> {
    let mut states = vec![OwcState::from_collection(a, bounds)?];
    states.push(free_operad_dim0(&states[0])?);
    for _ in 0..bounds.max_dim {
        let h = step_contraction(states.last().expect("nonempty"))?;
        let m = step_operad(&h)?;
        states.push(h);
        states.push(m);
    }
    Ok(states)
}

/// `F`: the free operad-with-contraction on `a`, truncated at the bounds.
pub fn free_owc(a: &Collection, bounds: Bounds) -> Result<OwcState> {
    Ok(ladder(a, bounds)?.pop().expect("nonempty"))
}

/// `F` applied to the empty collection.
pub fn initial_owc(bounds: Bounds) -> Result<OwcState> {
    free_owc(&Collection::empty(0), bounds)
}

/// Anything an operad-with-contraction state can be mapped into.
pub trait Target: OperadStructure + ContractionStructure {}
impl<T: OperadStructure + ContractionStructure> Target for T {}

/// The map out of `s` forced by the structure: units to units, contraction
/// cells to their lifts in `t`, composites to composites. Input generators
/// are sent wherever `seed` says.
pub fn induced_morphism<T: Target + ?Sized>(
    s: &OwcState,
    t: &T,
    seed: &dyn Fn(usize, usize) -> Option<usize>,
) -> Result<GlobMorphism> {
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for d in 0..=s.max_dim() {
        let level = s.level(d);
        let gen_image = |g: usize, maps: &Vec<Vec<usize>>| -> Result<usize> {
            match &level.generators[g].key {
                GenKey::Input(i) => seed(d, *i).ok_or(Error::UnknownGenerator(*i)),
                GenKey::Ctr(c) => {
                    let image = CtrCell {
                        a: maps[d - 1][c.a],
                        b: maps[d - 1][c.b],
                        theta: c.theta.clone(),
                    };
                    t.gamma(d, &image)
                        .ok_or_else(|| Error::NotReceptive(format!("no lift of {image:?} at dimension {d}")))
                }
            }
        };
        let mut row = Vec::with_capacity(s.count(d));
        match s.terms(d) {
            None => {
                for g in 0..level.generators.len() {
                    let y = gen_image(g, &maps)?;
                    row.push(y);
                }
            }
            Some(table) => {
                let mut gens: HashMap<usize, usize> = HashMap::new();
                for e in &table.entries {
                    let y = match &e.key {
                        TermKey::Unit => t
                            .unit(d)
                            .ok_or_else(|| Error::NotReceptive(format!("no unit at dimension {d}")))?,
                        TermKey::Node { gen, labels } => {
                            let fg = match gens.get(gen) {
                                Some(&y) => y,
                                None => {
                                    let y = gen_image(*gen, &maps)?;
                                    gens.insert(*gen, y);
                                    y
                                }
                            };
                            let image: Labels<usize> = labels
                                .iter()
                                .enumerate()
                                .map(|(j, r)| r.iter().map(|&x| if j == d { row[x] } else { maps[j][x] }).collect())
                                .collect();
                            t.mult(d, fg, &image).ok_or_else(|| {
                                Error::NotReceptive(format!("no composite of {fg} with {image:?} at dimension {d}"))
                            })?
                        }
                    };
                    row.push(y);
                }
            }
        }
        maps.push(row);
    }
    Ok(GlobMorphism { maps })
}

/// Collection, operad and contraction morphism checks for `f: s -> t`.
pub fn check_morphism<T: Target + CellSource + ?Sized>(s: &OwcState, t: &T, f: &GlobMorphism) -> Report {
    let mut report = Report::new("morphism");
    for d in 0..=s.max_dim() {
        for x in 0..s.count(d) {
            let y = f.maps[d][x];
            if y >= t.cell_count(d) {
                report.violation("collection/range", format!("cell {d}#{x}"));
                continue;
            }
            if t.cell_arity(d, y) != s.arity(d, x) {
                report.violation("collection/arity", format!("cell {d}#{x}"));
            }
            if d > 0 && (t.cell_src(d, y) != f.maps[d - 1][s.src(d, x)] || t.cell_tgt(d, y) != f.maps[d - 1][s.tgt(d, x)]) {
                report.violation("collection/faces", format!("cell {d}#{x}"));
            }
        }
    }
    if !report.pass {
        return report;
    }
    for d in 0..=s.operad_dim.unwrap_or(0).min(s.max_dim()) {
        if s.unit(d).map(|u| f.maps[d][u]) != t.unit(d) {
            report.violation("operad/unit", format!("dimension {d}"));
        }
        for (a, phi, r) in composites(s, d) {
            let image: Labels<usize> = phi
                .iter()
                .enumerate()
                .map(|(j, row)| row.iter().map(|&x| f.maps[j][x]).collect())
                .collect();
            if t.mult(d, f.maps[d][a], &image) != Some(f.maps[d][r]) {
                report.violation("operad/mult", format!("dimension {d}, cell {a}, labels {phi:?}"));
            }
        }
    }
    report.absorb(
        "contraction",
        contraction_morphism_check(f, s, s, t, s.bounds.max_arity_size),
    );
    report
}

/// Counts structure-preserving maps `s -> t` by exhaustive search, stopping at `limit`.
pub fn count_morphisms<T: Target + CellSource + ?Sized>(s: &OwcState, t: &T, limit: usize) -> usize {
    // each constraint is checked once the last cell it mentions is assigned
    enum C {
        Unit(usize),
        Gamma(usize, CtrCell, usize),
        Mult(usize, usize, Labels<usize>, usize),
    }
    let order: Vec<(usize, usize)> = (0..=s.max_dim()).flat_map(|d| (0..s.count(d)).map(move |x| (d, x))).collect();
    let pos: HashMap<(usize, usize), usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut at: Vec<Vec<C>> = (0..order.len()).map(|_| Vec::new()).collect();
    for d in 0..=s.max_dim() {
        if let Some(u) = s.unit(d) {
            at[pos[&(d, u)]].push(C::Unit(d));
        }
        if d >= 1 {
            for c in admissible_triples(s, d, s.bounds.max_arity_size) {
                if let Some(x) = s.gamma(d, &c) {
                    let last = pos[&(d, x)].max(pos[&(d - 1, c.a)]).max(pos[&(d - 1, c.b)]);
                    at[last].push(C::Gamma(d, c, x));
                }
            }
        }
        if s.terms(d).is_some() {
            for (a, phi, r) in composites(s, d) {
                let mut last = pos[&(d, a)].max(pos[&(d, r)]);
                for (j, row) in phi.iter().enumerate() {
                    for &y in row {
                        last = last.max(pos[&(j, y)]);
                    }
                }
                at[last].push(C::Mult(d, a, phi, r));
            }
        }
    }
    let mut f: Vec<Vec<usize>> = (0..=s.max_dim()).map(|d| vec![usize::MAX; s.count(d)]).collect();
    #[allow(clippy::too_many_arguments)]
    fn go<T: Target + CellSource + ?Sized>(
        i: usize,
        order: &[(usize, usize)],
        at: &[Vec<C>],
        s: &OwcState,
        t: &T,
        f: &mut Vec<Vec<usize>>,
        found: &mut usize,
        limit: usize,
    ) {
        if *found >= limit {
            return;
        }
        let Some(&(d, x)) = order.get(i) else {
            *found += 1;
            return;
        };
        for y in 0..t.cell_count(d) {
            if t.cell_arity(d, y) != s.arity(d, x) {
                continue;
            }
            if d > 0 && (t.cell_src(d, y) != f[d - 1][s.src(d, x)] || t.cell_tgt(d, y) != f[d - 1][s.tgt(d, x)]) {
                continue;
            }
            f[d][x] = y;
            let ok = at[i].iter().all(|c| match c {
                C::Unit(d) => t.unit(*d) == Some(f[*d][s.unit(*d).expect("unit")]),
                C::Gamma(d, c, x) => {
                    let image = CtrCell {
                        a: f[d - 1][c.a],
                        b: f[d - 1][c.b],
                        theta: c.theta.clone(),
                    };
                    t.gamma(*d, &image) == Some(f[*d][*x])
                }
                C::Mult(d, a, phi, r) => {
                    let image: Labels<usize> = phi
                        .iter()
                        .enumerate()
                        .map(|(j, row)| row.iter().map(|&z| f[j][z]).collect())
                        .collect();
                    t.mult(*d, f[*d][*a], &image) == Some(f[*d][*r])
                }
            });
            if ok {
                go(i + 1, order, at, s, t, f, found, limit);
            }
        }
        f[d][x] = usize::MAX;
    }
    let mut found = 0;
    go(0, &order, &at, s, t, &mut f, &mut found, limit);
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_operad_laws, TerminalOperad};
    use crate::contraction::check_contraction;
    use crate::pasting::PastingDiagram;

    #[test]
    fn initial_counts() {
        let s = initial_owc(Bounds::new(0, 5, 1)).unwrap();
        assert_eq!(s.count(0), 1);
        let s = initial_owc(Bounds::new(1, 5, 1)).unwrap();
        assert_eq!((s.count(0), s.count(1)), (1, 4));
        let s = initial_owc(Bounds::new(1, 5, 2)).unwrap();
        assert_eq!(s.count(1), 11);
        assert_eq!(s.stage(), (1, Some(1)));
    }

    #[test]
    fn stage_rules() {
        let s = initial_owc(Bounds::new(1, 5, 1)).unwrap();
        assert!(matches!(step_operad(&s), Err(Error::Stage { .. })));
        let raw = OwcState::from_collection(&Collection::empty(0), Bounds::new(1, 5, 1)).unwrap();
        assert!(step_contraction(&raw).is_err());
    }

    #[test]
    fn dim2_arities_sit_over_their_faces() {
        let s = initial_owc(Bounds::new(2, 5, 1)).unwrap();
        for x in 0..s.count(2) {
            let b = s.arity(2, x).boundary().unwrap();
            assert_eq!(&b, s.arity(1, s.src(2, x)));
            assert_eq!(&b, s.arity(1, s.tgt(2, x)));
        }
        assert!(check_operad_laws(&s).pass);
        assert!(check_contraction(&s, &s, 5).pass);
    }

    #[test]
    fn unit_collection_generators_survive() {
        let u = crate::collection::unit_collection(2);
        let s = free_owc(&u, Bounds::new(2, 5, 1)).unwrap();
        for d in 0..=2 {
            let inputs = (0..s.count(d)).filter(|&x| s.provenance(d, x) == Provenance::Input).count();
            assert_eq!(inputs, 1, "dimension {d}");
        }
    }

    #[test]
    fn into_terminal_is_arity() {
        let b = Bounds::new(2, 5, 2);
        let s = initial_owc(b).unwrap();
        let t = TerminalOperad::new(2, 5);
        let f = induced_morphism(&s, &t, &|_, _| None).unwrap();
        for d in 0..=2 {
            for x in 0..s.count(d) {
                assert_eq!(t.cell_arity(d, f.maps[d][x]), s.arity(d, x));
            }
        }
        assert!(check_morphism(&s, &t, &f).pass);
    }

    #[test]
    fn into_free_on_a_point() {
        let b = Bounds::new(1, 3, 2);
        let s = initial_owc(b).unwrap();
        let mut c = Collection::empty(0);
        c.push(0, 0, 0, PastingDiagram::dot());
        let t = free_owc(&c, b).unwrap();
        let f = induced_morphism(&s, &t, &|_, _| None).unwrap();
        let r = check_morphism(&s, &t, &f);
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(count_morphisms(&s, &t, 8), 1);
    }
}
