//! Inputs shared by the benchmarks under `benches/`.

use owc_core::collection::Collection;
use owc_core::pasting::PastingDiagram;

/// The collection with a single 0-cell.
pub fn point() -> Collection {
    let mut c = Collection::empty(0);
    c.push(0, 0, 0, PastingDiagram::dot());
    c
}
