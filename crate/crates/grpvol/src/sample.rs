use grpvol_core::linalg::Rational;
use grpvol_core::simplicial::{Cochain, Triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random integral 1-cochain with entries in `[-max, max]`.
pub fn random_potential(t: &Triangulation, seed: u64, max: i64) -> Cochain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..t.edges().len())
        .map(|_| Rational::from_integer(rng.gen_range(-max..=max).into()))
        .collect();
    Cochain::from_dense(1, values)
}

/// `d` of [`random_potential`]: a 2-cocycle on any triangulation.
pub fn random_cocycle(t: &Triangulation, seed: u64, max: i64) -> Cochain {
    random_potential(t, seed, max).coboundary(t)
}
