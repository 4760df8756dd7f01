use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::families::{DecreasingInstance, IncreasingInstance};
use crate::setcore::{random_k_subset, GroundSize, Subset, SubsetSpec};
use crate::value::ExactValue;

/// `m` used when an increasing descriptor leaves it out.
pub const DEFAULT_M: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Decreasing,
    Increasing,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Decreasing => "decreasing",
            Family::Increasing => "increasing",
        }
    }
}

/// Either an explicit element list or a seed for a uniform draw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlantSpec {
    Elements(SubsetSpec),
    Seeded { seed: u64 },
}

/// JSON instance description; rationals are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDescriptor {
    pub family: Family,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<ExactValue>,
    pub epsilon: ExactValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plant: Option<PlantSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolvedInstance {
    Decreasing(DecreasingInstance),
    Increasing(IncreasingInstance),
}

impl ResolvedInstance {
    pub fn family(&self) -> Family {
        match self {
            ResolvedInstance::Decreasing(_) => Family::Decreasing,
            ResolvedInstance::Increasing(_) => Family::Increasing,
        }
    }

    pub fn n(&self) -> GroundSize {
        match self {
            ResolvedInstance::Decreasing(i) => i.n(),
            ResolvedInstance::Increasing(i) => i.n(),
        }
    }

    pub fn plant(&self) -> Option<Subset> {
        match self {
            ResolvedInstance::Decreasing(i) => i.plant(),
            ResolvedInstance::Increasing(i) => i.plant(),
        }
    }
}

impl InstanceDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance descriptor: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    /// Plant cardinality for this family: `α` or `⌊n/2⌋`.
    fn plant_size(&self) -> Result<usize> {
        match self.family {
            Family::Decreasing => self
                .alpha
                .map(|a| a as usize)
                .ok_or_else(|| Error::Parameter("decreasing family needs alpha".into())),
            Family::Increasing => Ok(self.n / 2),
        }
    }

    /// Validates against the family invariants and builds the instance.
    pub fn resolve(&self) -> Result<ResolvedInstance> {
        let n = GroundSize::new(self.n)?;
        let plant = match &self.plant {
            None => None,
            Some(PlantSpec::Elements(spec)) => Some(spec.bind(n)?),
            Some(PlantSpec::Seeded { seed }) => Some(random_k_subset(n, self.plant_size()?, *seed)?),
        };
        match self.family {
            Family::Decreasing => {
                if self.m.is_some() {
                    return Err(Error::Parameter("m is not a parameter of the decreasing family".into()));
                }
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Parameter("decreasing family needs alpha".into()))?;
                let beta = self
                    .beta
                    .ok_or_else(|| Error::Parameter("decreasing family needs beta".into()))?;
                let inst = DecreasingInstance::new(n, alpha, beta, self.epsilon.clone(), plant)?;
                Ok(ResolvedInstance::Decreasing(inst))
            }
            Family::Increasing => {
                if self.alpha.is_some() || self.beta.is_some() {
                    return Err(Error::Parameter(
                        "alpha/beta are not parameters of the increasing family".into(),
                    ));
                }
                let m = self.m.clone().unwrap_or_else(|| ExactValue::from_int(DEFAULT_M));
                let inst = IncreasingInstance::new(n, m, self.epsilon.clone(), plant)?;
                Ok(ResolvedInstance::Increasing(inst))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::q;

    #[test]
    fn parses_both_plant_forms() {
        let d = InstanceDescriptor::from_json(
            r#"{"family":"decreasing","n":8,"alpha":3,"beta":1,"epsilon":"1/2","plant":[0,1,2]}"#,
        )
        .unwrap();
        let r = d.resolve().unwrap();
        assert_eq!(r.plant().unwrap().mask(), 0b111);

        let d = InstanceDescriptor::from_json(
            r#"{"family":"increasing","n":10,"m":"1000/1","epsilon":"1/2","plant":{"seed":7}}"#,
        )
        .unwrap();
        let r = d.resolve().unwrap();
        assert_eq!(r.plant().unwrap().cardinality(), 5);
        assert_eq!(r.plant(), d.resolve().unwrap().plant());
    }

    #[test]
    fn round_trips() {
        let d = InstanceDescriptor {
            family: Family::Increasing,
            n: 8,
            alpha: None,
            beta: None,
            m: Some(q("100")),
            epsilon: q("1/2"),
            plant: Some(PlantSpec::Seeded { seed: 3 }),
        };
        let text = d.to_json();
        assert_eq!(
            text,
            r#"{"family":"increasing","n":8,"m":"100/1","epsilon":"1/2","plant":{"seed":3}}"#
        );
        assert_eq!(InstanceDescriptor::from_json(&text).unwrap(), d);
    }

    #[test]
    fn rejects_invalid() {
        let bad = [
            r#"{"family":"decreasing","n":8,"alpha":3,"beta":3,"epsilon":"1/2"}"#,
            r#"{"family":"decreasing","n":8,"beta":1,"epsilon":"1/2"}"#,
            r#"{"family":"increasing","n":8,"alpha":3,"epsilon":"1/2"}"#,
            r#"{"family":"increasing","n":8,"epsilon":"9/10"}"#,
            r#"{"family":"increasing","n":0,"epsilon":"1/2"}"#,
            r#"{"family":"increasing","n":8,"epsilon":"1/2","plant":[0,1]}"#,
            r#"{"family":"increasing","n":8,"epsilon":"1/2","bogus":1}"#,
        ];
        for text in bad {
            let res = InstanceDescriptor::from_json(text).and_then(|d| d.resolve());
            assert!(res.is_err(), "{text} should be rejected");
        }
    }
}
