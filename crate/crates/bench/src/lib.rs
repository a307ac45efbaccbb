//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use qcanon::{DynkinDiagram, PbwBasis, QuantumGroup};

/// A PBW basis for the default word of a diagram.
pub fn basis(t: &str, bound: u32) -> Arc<PbwBasis> {
    let d = DynkinDiagram::parse(t).expect("diagram");
    let w = d.default_word();
    let qg = Arc::new(QuantumGroup::new(d, bound));
    Arc::new(PbwBasis::new(qg, w).expect("PBW basis"))
}
