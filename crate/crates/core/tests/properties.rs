use owc_core::collection::{Bounds, Collection};
use owc_core::contraction::check_contraction;
use owc_core::globset::GlobularSet;
use owc_core::interleave::{free_owc, OwcState};
use owc_core::operad::{check_operad_laws, free_operad_dim0, free_operad_step};
use owc_core::oracle::{oracle_splice, ExplicitDiagram2, OShape};
use owc_core::pasting::{shape_info, substitute, Composite, LabelledDiagram, PastingDiagram};
use owc_core::verify::compare_terms;
use proptest::prelude::*;

fn tree(dim: usize) -> BoxedStrategy<PastingDiagram> {
    if dim == 0 {
        return Just(PastingDiagram::dot()).boxed();
    }
    prop::collection::vec(tree(dim - 1), 0..3)
        .prop_map(move |cs| PastingDiagram::new(dim, cs).unwrap())
        .boxed()
}

fn any_tree() -> BoxedStrategy<PastingDiagram> {
    (0..=3usize).prop_flat_map(tree).boxed()
}

/// A 2-diagram with a compatible labelling: each column gets a width, its
/// arrows are chains of that width and its faces columns of that many heights.
fn labelled_columns() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<Vec<Vec<usize>>>)> {
    prop::collection::vec((0..3usize, 0..3usize), 0..3).prop_flat_map(|cols| {
        let heights: Vec<usize> = cols.iter().map(|c| c.0).collect();
        let widths: Vec<usize> = cols.iter().map(|c| c.1).collect();
        let faces: Vec<_> = cols
            .iter()
            .map(|&(h, w)| prop::collection::vec(prop::collection::vec(0..3usize, w), h))
            .collect();
        (Just(heights), Just(widths), faces)
    })
}

fn small_collection() -> impl Strategy<Value = Collection> {
    let arrows = prop::collection::vec((0..2usize, 0..2usize, 0..3usize), 0..4);
    let faces = prop::collection::vec((0..3usize, prop::collection::vec(0..3usize, 3)), 0..3);
    (1..=2usize, arrows, faces).prop_map(|(points, arrows, faces)| {
        let mut c = Collection::empty(2);
        for _ in 0..points {
            c.push(0, 0, 0, PastingDiagram::dot());
        }
        for &(s, t, m) in &arrows {
            c.push(1, s % points, t % points, PastingDiagram::chain(m));
        }
        for (i, heights) in faces {
            if arrows.is_empty() {
                break;
            }
            let i = i % arrows.len();
            let m = arrows[i].2;
            c.push(2, i, i, PastingDiagram::columns(&heights[..m]));
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_laws(t in any_tree()) {
        let d = t.dim();
        let units = LabelledDiagram::from_fn(t.clone(), |a| PastingDiagram::unit_tree(a.dim()));
        prop_assert_eq!(substitute(&units).unwrap(), t.clone());
        let around = LabelledDiagram::from_fn(PastingDiagram::unit_tree(d), |a| {
            (a.dim()..d).fold(t.clone(), |b, _| b.boundary().unwrap())
        });
        prop_assert_eq!(substitute(&around).unwrap(), t);
    }

    #[test]
    fn cell_tables_are_globular(t in any_tree()) {
        let info = shape_info(&t);
        let counts: Vec<usize> = (0..=t.dim()).map(|j| info.count(j)).collect();
        prop_assert_eq!(counts.iter().sum::<usize>(), t.size());
        let g = GlobularSet::new(counts, info.src.clone(), info.tgt.clone()).unwrap();
        prop_assert!(g.check_globularity().pass);
        prop_assert_eq!(PastingDiagram::from_json(&t.to_json(), t.dim()).unwrap(), t);
    }

    #[test]
    fn explicit_tables_match(t in (0..=2usize).prop_flat_map(tree)) {
        let shape = OShape::from_tree(&t).unwrap();
        let e = ExplicitDiagram2::new(shape);
        prop_assert_eq!(&e.to_tree(), &t);
        let info = shape_info(&t);
        for j in 1..=t.dim() {
            for c in 0..info.count(j) {
                prop_assert_eq!(e.cells.src(j, c), info.src[j][c]);
                prop_assert_eq!(e.cells.tgt(j, c), info.tgt[j][c]);
            }
        }
    }

    #[test]
    fn splicing_matches_substitution((heights, widths, faces) in labelled_columns()) {
        let shape = PastingDiagram::columns(&heights);
        let mut labels = vec![vec![PastingDiagram::dot(); heights.len() + 1], Vec::new(), Vec::new()];
        for (i, &h) in heights.iter().enumerate() {
            labels[1].extend(std::iter::repeat_n(PastingDiagram::chain(widths[i]), h + 1));
            labels[2].extend(faces[i].iter().map(|f| PastingDiagram::columns(f)));
        }
        let ld = LabelledDiagram::new(shape.clone(), labels.clone()).unwrap();
        let ours = substitute(&ld).unwrap();
        let os: Vec<Vec<OShape>> = labels.iter().map(|r| r.iter().map(|t| OShape::from_tree(t).unwrap()).collect()).collect();
        let (theirs, emb) = oracle_splice(&OShape::from_tree(&shape).unwrap(), &os).unwrap();
        prop_assert_eq!(OShape::from_tree(&ours).unwrap(), theirs);
        let refs: Vec<Vec<&PastingDiagram>> = labels.iter().map(|r| r.iter().collect()).collect();
        let comp = Composite::new(&shape, &refs);
        for (j, row) in emb.iter().enumerate() {
            for (c, slice) in row.iter().enumerate() {
                prop_assert_eq!(comp.slice(j, c), slice.as_slice());
            }
        }
    }

    #[test]
    fn globularity_counts_offending_cells(
        counts in (1..4usize, 1..4usize, 0..4usize),
        faces in prop::collection::vec(0..100usize, 14),
    ) {
        let (c0, c1, c2) = counts;
        let src1: Vec<usize> = (0..c1).map(|i| faces[i] % c0).collect();
        let tgt1: Vec<usize> = (0..c1).map(|i| faces[3 + i] % c0).collect();
        let src2: Vec<usize> = (0..c2).map(|i| faces[6 + i] % c1).collect();
        let tgt2: Vec<usize> = (0..c2).map(|i| faces[10 + i] % c1).collect();
        let mut bad = 0;
        for x in 0..c2 {
            bad += usize::from(src1[src2[x]] != src1[tgt2[x]]);
            bad += usize::from(tgt1[src2[x]] != tgt1[tgt2[x]]);
        }
        let g = GlobularSet::new(vec![c0, c1, c2], vec![vec![], src1, src2], vec![vec![], tgt1, tgt2]).unwrap();
        let r = g.check_globularity();
        prop_assert_eq!(r.violations.len(), bad);
        prop_assert_eq!(r.pass, bad == 0);
        prop_assert_eq!(GlobularSet::from_json(&g.to_json()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_operad_matches_oracle(c in small_collection(), term in 1..=2usize) {
        let bounds = Bounds::new(2, 5, term);
        let mut s = free_operad_dim0(&OwcState::from_collection(&c, bounds).unwrap()).unwrap();
        for d in 1..=2 {
            s = free_operad_step(&s, d).unwrap();
        }
        let r = compare_terms(&s);
        prop_assert!(r.pass, "{:?}", r.violations);
    }

    #[test]
    fn free_structure_satisfies_laws(c in small_collection()) {
        let bounds = Bounds::new(1, 5, 1);
        let s = free_owc(&c, bounds).unwrap();
        let r = check_operad_laws(&s);
        prop_assert!(r.pass, "{:?}", r.violations);
        prop_assert!(check_contraction(&s, &s, 5).pass);
        prop_assert_eq!(s.to_json(), free_owc(&c, bounds).unwrap().to_json());
    }
}

#[test]
fn degenerate_bounds_are_rejected() {
    assert!(Bounds::new(2, 0, 1).validate().is_err());
    assert!(Bounds::new(2, 5, 0).validate().is_err());
    assert!(Bounds::default().validate().is_ok());
}
