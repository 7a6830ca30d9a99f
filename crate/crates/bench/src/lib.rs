//! Shared instance builders for the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use snlkit_core::instances::{
    contraction_graph, involution_instance, random_contraction, InvolutionInstance,
};
use snlkit_core::Subspace;

/// A reproducible involution space with a maximal contraction graph.
pub fn benchmark_instance(n: usize, seed: u64) -> (InvolutionInstance, Subspace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus = n / 2 + 1;
    let inst = involution_instance(n, plus.min(n), &mut rng);
    let t = random_contraction(inst.minus.dim(), inst.plus.dim(), 0.8, &mut rng);
    let graph = contraction_graph(&inst, &t);
    (inst, graph)
}
