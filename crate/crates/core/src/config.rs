//! Configuration shared by the checker, the usage engines and extraction.

use crate::grades::{well_behaved_zero, Grade, Modality};
use crate::reduce::DEFAULT_FUEL;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ModeStructure {
    /// One mode; Σ-family grades must be `1`.
    #[default]
    Plain,
    /// Two modes `0ᵐ`/`1ᵐ` with graded Σ-types.
    Moded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    NonStrict,
    Strict,
}

/// Which `(p, q)` pairs Π- and Σ-types may carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PiSigmaRel {
    #[default]
    Any,
    /// Only `q = p`.
    Equal,
}

/// Side conditions of the usage rules and type formers. Predicates are
/// stored per grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restrictions {
    pub prodrec: Vec<bool>,
    pub unitrec: Vec<bool>,
    pub emptyrec: Vec<bool>,
    pub pisigma: PiSigmaRel,
    pub strong_sigma: bool,
    pub weak_sigma: bool,
    pub strong_unit: bool,
    pub weak_unit: bool,
}

impl Restrictions {
    pub fn allow_all(m: &Modality) -> Restrictions {
        let all = vec![true; m.size()];
        Restrictions {
            prodrec: all.clone(),
            unitrec: all.clone(),
            emptyrec: all,
            pisigma: PiSigmaRel::Any,
            strong_sigma: true,
            weak_sigma: true,
            strong_unit: true,
            weak_unit: true,
        }
    }

    /// Forbids matching at grade 0 (`prodrec` and `unitrec`).
    pub fn no_erased_matches(mut self, m: &Modality) -> Restrictions {
        self.prodrec[m.zero().0 as usize] = false;
        self.unitrec[m.zero().0 as usize] = false;
        self
    }

    pub fn no_emptyrec_zero(mut self, m: &Modality) -> Restrictions {
        self.emptyrec[m.zero().0 as usize] = false;
        self
    }

    pub fn prodrec_ok(&self, r: Grade) -> bool {
        self.prodrec[r.0 as usize]
    }
    pub fn unitrec_ok(&self, p: Grade) -> bool {
        self.unitrec[p.0 as usize]
    }
    pub fn emptyrec_ok(&self, p: Grade) -> bool {
        self.emptyrec[p.0 as usize]
    }
    pub fn pisigma_ok(&self, p: Grade, q: Grade) -> bool {
        match self.pisigma {
            PiSigmaRel::Any => true,
            PiSigmaRel::Equal => p == q,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub modality: Arc<Modality>,
    pub modes: ModeStructure,
    pub strictness: Strictness,
    pub restrictions: Restrictions,
    pub fuel: u64,
    pub seed: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("the two-mode structure needs a modality with a well-behaved zero; `{0}` has none")]
    ModesNeedWellBehavedZero(String),
}

impl Config {
    pub fn new(m: Modality) -> Config {
        let restrictions = Restrictions::allow_all(&m);
        Config {
            modality: Arc::new(m),
            modes: ModeStructure::Plain,
            strictness: Strictness::NonStrict,
            restrictions,
            fuel: DEFAULT_FUEL,
            seed: 0,
        }
    }

    pub fn moded(mut self) -> Config {
        self.modes = ModeStructure::Moded;
        self
    }

    pub fn strict(mut self) -> Config {
        self.strictness = Strictness::Strict;
        self
    }

    pub fn no_erased_matches(mut self) -> Config {
        self.restrictions = self.restrictions.no_erased_matches(&self.modality);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.modes == ModeStructure::Moded && !well_behaved_zero(&self.modality).all_hold() {
            return Err(ConfigError::ModesNeedWellBehavedZero(self.modality.name().to_string()));
        }
        Ok(())
    }

    pub fn m(&self) -> &Modality {
        &self.modality
    }
}
