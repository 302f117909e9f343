use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Family, SubsetMask};
use crate::error::{Error, Result};

/// Wire form of a family: `{"n": 4, "sets": [[1, 2], [3]]}` or
/// `{"n": 4, "masks": ["3", "4"]}` (hex, optional `0x` prefix).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masks: Option<Vec<String>>,
}

impl FamilyJson {
    pub fn sets_form(f: &Family) -> Self {
        FamilyJson { n: f.n(), sets: Some(f.to_sets()), masks: None }
    }

    pub fn masks_form(f: &Family) -> Self {
        let masks = f.masks().iter().map(|m| format!("{m:x}")).collect();
        FamilyJson { n: f.n(), sets: None, masks: Some(masks) }
    }

    pub fn to_family(&self) -> Result<Family> {
        match (&self.sets, &self.masks) {
            (Some(sets), None) => Family::from_sets(self.n, sets),
            (None, Some(masks)) => {
                let bits = masks.iter().map(|s| parse_hex(s)).collect::<Result<Vec<_>>>()?;
                Family::new(self.n, bits)
            }
            (Some(_), Some(_)) => Err(Error::Format("family has both \"sets\" and \"masks\"".into())),
            (None, None) => Err(Error::Format("family needs \"sets\" or \"masks\"".into())),
        }
    }
}

fn parse_hex(s: &str) -> Result<u32> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|_| Error::Format(format!("bad hex mask {s:?}")))
}

impl Family {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FamilyJson::sets_form(self)).expect("plain data")
    }

    pub fn from_json_str(s: &str) -> Result<Family> {
        let j: FamilyJson = serde_json::from_str(s)?;
        j.to_family()
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson::sets_form(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = FamilyJson::deserialize(deserializer)?;
        j.to_family().map_err(serde::de::Error::custom)
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}
