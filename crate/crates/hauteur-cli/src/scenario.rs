//! Scenario file format: a TOML document describing a tower scenario.
//!
//! ```toml
//! p = 3        # the rational prime
//! M = 1        # modulus bound
//!
//! [base]       # base-field data at the chosen prime
//! deg_K = 1    # [K : Q]
//! local_deg = 1
//! e_p = 1
//! f_p = 1
//! class_order = 1
//!
//! [[towers]]   # one block per tower family
//! d = 2        # degree over the base field
//! e = 1        # ramification index of the unique prime above p
//! count = "krasner"   # completion count: integer or "krasner"
//!
//! [[moduli]]   # optional; required when deg_K > 1
//! g = 1
//! eps = 1
//! ```
//!
//! Unknown keys are rejected.

use hauteur::heightbound::{
    BaseFieldData, CompletionCount, ModulusData, ModulusEntry, TowerEntry, TowerScenario,
};
use num::bigint::BigUint;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub p: u64,
    #[serde(rename = "M")]
    pub modulus_bound: u64,
    pub base: BaseSection,
    pub towers: Vec<TowerSection>,
    #[serde(default)]
    pub moduli: Option<Vec<ModulusSection>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    #[serde(rename = "deg_K")]
    pub deg_k: u64,
    pub local_deg: u64,
    pub e_p: u64,
    pub f_p: u64,
    pub class_order: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSection {
    pub d: u64,
    pub e: u64,
    pub count: CountField,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CountField {
    Explicit(u64),
    Keyword(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusSection {
    pub g: u64,
    pub eps: u8,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("bad scenario file: {e}")))
    }

    pub fn to_scenario(&self) -> Result<TowerScenario, CliError> {
        let base = BaseFieldData::new(
            self.base.deg_k,
            self.base.local_deg,
            self.base.e_p,
            self.base.f_p,
            self.base.class_order,
        )?;
        let mut towers = Vec::with_capacity(self.towers.len());
        for t in &self.towers {
            let count = match &t.count {
                CountField::Explicit(n) => CompletionCount::Explicit(BigUint::from(*n)),
                CountField::Keyword(k) if k == "krasner" => CompletionCount::Krasner,
                CountField::Keyword(k) => {
                    return Err(CliError::Input(format!(
                        "unknown count keyword '{k}' (expected an integer or \"krasner\")"
                    )))
                }
            };
            towers.push(TowerEntry {
                degree: t.d,
                ram_index: t.e,
                count,
            });
        }
        let moduli = match &self.moduli {
            None => ModulusData::RationalBase,
            Some(entries) => ModulusData::Explicit(
                entries
                    .iter()
                    .map(|m| ModulusEntry {
                        order: m.g,
                        sign_factor: m.eps,
                    })
                    .collect(),
            ),
        };
        let scenario = TowerScenario {
            p: self.p,
            base,
            towers,
            modulus_bound: self.modulus_bound,
            moduli,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Parse a scenario document straight into a validated scenario.
pub fn load_scenario(text: &str) -> Result<TowerScenario, CliError> {
    ScenarioFile::parse(text)?.to_scenario()
}
