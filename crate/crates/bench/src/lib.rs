//! Workloads shared by the benchmarks.

use distinguish::families;
use distinguish::Graph;

/// Named graph families at a given size: wheels, series-parallel chains and cycles with
/// one pendant vertex per cycle vertex.
pub fn workloads(n: usize) -> Vec<(&'static str, Graph)> {
    vec![
        ("wheel", families::wheel(n.max(4))),
        ("sp_chain", families::sp_chain_with_n(n)),
        ("pendant_cycle", families::pendant_cycle((n / 2).max(3), &[1])),
    ]
}
