//! Seeded random sentences for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sentence::{Atom, QcspSentence, Quantifier};

#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub max_vars: usize,
    pub max_atoms: usize,
    /// Probability that an atom is an equality instead of an edge.
    pub equality_rate: f64,
}

impl RandomSpec {
    pub fn new(max_vars: usize, max_atoms: usize) -> Self {
        RandomSpec {
            max_vars,
            max_atoms,
            equality_rate: 0.0,
        }
    }

    pub fn with_equality_rate(mut self, rate: f64) -> Self {
        self.equality_rate = rate;
        self
    }
}

/// Variable count uniform in `1..=max_vars`, quantifiers uniform, atom count
/// uniform in `1..=max_atoms`, endpoints uniform over ordered pairs.
pub fn random_sentence(rng: &mut impl Rng, spec: &RandomSpec) -> QcspSentence {
    let k = rng.gen_range(1..=spec.max_vars.max(1));
    let quantifiers: Vec<Quantifier> = (0..k)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            }
        })
        .collect();
    let count = rng.gen_range(1..=spec.max_atoms.max(1));
    let atoms = (0..count)
        .map(|_| {
            let a = rng.gen_range(0..k);
            let b = rng.gen_range(0..k);
            if spec.equality_rate > 0.0 && rng.gen_bool(spec.equality_rate) {
                Atom::Eq(a, b)
            } else {
                Atom::Edge(a, b)
            }
        })
        .collect();
    QcspSentence::from_indices(&quantifiers, atoms)
}

/// `count` sentences from a fixed seed.
pub fn random_sentences(seed: u64, count: usize, spec: &RandomSpec) -> Vec<QcspSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_sentence(&mut rng, spec)).collect()
}
