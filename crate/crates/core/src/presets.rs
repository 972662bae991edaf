//! Named systems: the two √2 examples and the Fibonacci interval-window
//! reference.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qfield::{Field, FieldVal, QuadInt};
use crate::renorm::CutoffRule;
use crate::substitution::SubstitutionSystem;

#[derive(Clone, Debug, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub rule: &'static str,
    pub seed: &'static str,
    #[serde(skip)]
    pub cutoff: CutoffRule,
}

impl Preset {
    pub fn system(&self) -> SubstitutionSystem {
        SubstitutionSystem::parse(self.rule).expect("preset rules are valid")
    }
}

pub const NAMES: [&str; 3] = ["ssm", "sigma", "fibonacci"];

pub fn ssm() -> Preset {
    Preset {
        name: "ssm",
        rule: "a -> bba; b -> ab",
        seed: "a|a",
        cutoff: CutoffRule::Inflated,
    }
}

/// The σ core uses the radius `2λ + 1 = 3 + 2√2`; the inflated rule would give
/// a larger core with the same values.
pub fn sigma() -> Preset {
    Preset {
        name: "sigma",
        rule: "a -> aaaaabb; b -> baa",
        seed: "a|a",
        cutoff: CutoffRule::Fixed(FieldVal::from(QuadInt::new(Field::SQRT2, 3, 2))),
    }
}

pub fn fibonacci() -> Preset {
    Preset {
        name: "fibonacci",
        rule: "a -> ab; b -> a",
        seed: "a|a",
        cutoff: CutoffRule::Inflated,
    }
}

pub fn by_name(name: &str) -> Result<Preset> {
    match name {
        "ssm" => Ok(ssm()),
        "sigma" => Ok(sigma()),
        "fibonacci" => Ok(fibonacci()),
        _ => Err(Error::Parse(format!(
            "unknown preset '{name}' (known: {})",
            NAMES.join(", ")
        ))),
    }
}
