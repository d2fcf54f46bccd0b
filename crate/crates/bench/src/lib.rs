//! Fixed random inputs shared by the benchmarks.

use qtrans_core::random::RandomModel;
use qtrans_core::{DensityOperator, QEffect, QOperation, Quantum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct QuantumInputs {
    pub rho: DensityOperator,
    pub sigma: DensityOperator,
    pub a: QEffect,
    pub b: QEffect,
    pub kraus: QOperation,
    pub luders: QOperation,
    pub holevo: QOperation,
}

pub fn quantum_inputs(dim: usize) -> QuantumInputs {
    let mut rng = ChaCha8Rng::seed_from_u64(dim as u64);
    QuantumInputs {
        rho: Quantum::random_state(&mut rng, dim),
        sigma: Quantum::random_state(&mut rng, dim),
        a: Quantum::random_effect(&mut rng, dim),
        b: Quantum::random_effect(&mut rng, dim),
        kraus: QOperation::Kraus(Quantum::random_kraus(&mut rng, dim, 3)),
        luders: QOperation::Luders(Quantum::random_luders(&mut rng, dim)),
        holevo: QOperation::Holevo(Quantum::random_holevo(&mut rng, dim)),
    }
}
