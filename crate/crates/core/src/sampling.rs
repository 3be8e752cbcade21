//! Seeded random elements of the polarizing cone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::rational::rat;
use crate::exact::Rational;
use crate::hl::{cone_contains, HLModule};
use crate::mixed::OperatorTuple;

const MAX_ATTEMPTS: u32 = 12;

/// Draws `λ·c₀ + δ` around the reference coefficients `c₀`, shrinking the
/// perturbation `δ` until cone membership is certified.
pub struct ConeSampler<'a> {
    module: &'a HLModule,
    rng: ChaCha8Rng,
}

impl<'a> ConeSampler<'a> {
    pub fn new(module: &'a HLModule, seed: u64) -> Self {
        ConeSampler {
            module,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A certified cone element, as coefficients over the generators.
    pub fn sample(&mut self) -> Result<Vec<Rational>> {
        let reference = self.module.reference().to_vec();
        let lambda = rat(self.rng.gen_range(1..=6), 2);
        let base: Vec<Rational> = reference.iter().map(|c| c * &lambda).collect();
        for attempt in 0..MAX_ATTEMPTS {
            let den = 4i64 << attempt;
            let c: Vec<Rational> = base
                .iter()
                .map(|b| b + rat(self.rng.gen_range(-3..=3), den))
                .collect();
            if cone_contains(self.module, &c)? {
                return Ok(c);
            }
        }
        if cone_contains(self.module, &base)? {
            return Ok(base);
        }
        Err(Error::Precondition(
            "reference element is not in the polarizing cone".into(),
        ))
    }

    /// `len` independent samples as a certified tuple.
    pub fn tuple(&mut self, len: usize) -> Result<OperatorTuple> {
        let coeffs = (0..len)
            .map(|_| self.sample())
            .collect::<Result<Vec<_>>>()?;
        OperatorTuple::new(self.module, coeffs)
    }
}
