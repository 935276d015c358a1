//! Shared inputs for the benchmarks.

use fgcoh::{catalog_group, FiniteGroup, KGModule};
use std::sync::Arc;

pub fn group(name: &str) -> Arc<FiniteGroup> {
    catalog_group(name).expect("catalog group")
}

/// The radical of the regular module.
pub fn radical_module(g: &Arc<FiniteGroup>) -> KGModule {
    let reg = KGModule::regular(g);
    let rad = fgcoh::kgmod::radical(&reg).expect("radical");
    reg.submodule(&rad).expect("submodule")
}
