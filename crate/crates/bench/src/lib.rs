//! Seeded inputs shared by the benchmarks.

use permcirc_core::{random_circuit, Circuit, Gf2Poly, IntMatrix, Monomial, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n × n` matrix with entries in `[-3, 3]`.
pub fn random_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect())
        .collect();
    IntMatrix::from_rows(&rows).expect("square")
}

/// Cubic polynomial with `2v` monomials over variables `0..v`.
pub fn random_poly(v: u32, seed: u64) -> (Gf2Poly, Vec<VarId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monomials = (0..2 * v).filter_map(|_| {
        let degree = rng.random_range(1..=3);
        let vars: Vec<VarId> = (0..degree).map(|_| VarId(rng.random_range(0..v))).collect();
        Monomial::new(&vars)
    });
    (Gf2Poly::from_monomials(monomials, false), (0..v).map(VarId).collect())
}

pub fn circuit(q: usize, gates: usize, seed: u64) -> Circuit {
    random_circuit(q, gates, 0.4, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_seeded() {
        assert_eq!(random_matrix(5, 1), random_matrix(5, 1));
        assert_eq!(random_poly(10, 2), random_poly(10, 2));
        assert_eq!(circuit(4, 20, 3), circuit(4, 20, 3));
    }
}
