//! JSON algebra documents and serde helpers.
//!
//! ```json
//! {"labels": ["v0","v1","v2"],
//!  "brackets": {"01": [0,0,0], "02": [0,0,0], "12": [-1,0,0]},
//!  "xi": [[0,1,0],[0,0,1]],
//!  "alpha": [1,0,0]}
//! ```
//!
//! Only the brackets `01`, `02`, `12` are given; the rest follow by
//! antisymmetry. `alpha` may be omitted, in which case `xi[0] x xi[1]` is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{ContactData, Mat3, StructureConstants, Vec3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub brackets: BTreeMap<String, [f64; 3]>,
    pub xi: [[f64; 3]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 3]>,
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_parts(c: &StructureConstants, data: &ContactData) -> Self {
        let [b01, b02, b12] = c.independent_brackets();
        let brackets = [("01", b01), ("02", b02), ("12", b12)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self {
            labels: Some(c.labels.to_vec()),
            brackets,
            xi: [vec3_array(&data.xi[0]), vec3_array(&data.xi[1])],
            alpha: Some(vec3_array(&data.alpha)),
        }
    }

    pub fn into_parts(&self) -> Result<(StructureConstants, ContactData)> {
        for key in self.brackets.keys() {
            if !matches!(key.as_str(), "01" | "02" | "12") {
                return Err(Error::InvalidInput(format!(
                    "unknown bracket key `{key}` (expected 01, 02, 12)"
                )));
            }
        }
        let get = |k: &str| self.brackets.get(k).copied().unwrap_or([0.0; 3]);
        let mut c = StructureConstants::from_brackets(get("01"), get("02"), get("12"));
        if let Some(labels) = &self.labels {
            if labels.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "expected 3 labels, got {}",
                    labels.len()
                )));
            }
            c.labels = [labels[0].clone(), labels[1].clone(), labels[2].clone()];
        }
        let xi = [Vec3::from(self.xi[0]), Vec3::from(self.xi[1])];
        let data = match self.alpha {
            Some(a) => ContactData::new(xi, Vec3::from(a))?,
            None => ContactData::from_plane(xi)?,
        };
        Ok((c, data))
    }
}

pub fn vec3_array(v: &Vec3) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

/// Rows of `m`.
pub fn mat3_rows(m: &Mat3) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]])
}

pub fn ser_mat3<S: Serializer>(m: &Mat3, s: S) -> std::result::Result<S::Ok, S::Error> {
    mat3_rows(m).serialize(s)
}

pub fn ser_vec3<S: Serializer>(v: &Vec3, s: S) -> std::result::Result<S::Ok, S::Error> {
    vec3_array(v).serialize(s)
}

pub fn ser_opt_vec3<S: Serializer>(
    v: &Option<Vec3>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(vec3_array).serialize(s)
}

pub fn ser_vec3_pair<S: Serializer>(
    v: &Option<[Vec3; 2]>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref()
        .map(|[a, b]| [vec3_array(a), vec3_array(b)])
        .serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn parses_heisenberg_document() {
        let doc = AlgebraDocument::parse(
            r#"{"labels":["z","x","y"],"brackets":{"01":[0,0,0],"02":[0,0,0],"12":[-1,0,0]},
                "xi":[[0,1,0],[0,0,1]],"alpha":[1,0,0]}"#,
        )
        .unwrap();
        let (c, data) = doc.into_parts().unwrap();
        assert_eq!(c.c[0][1][2], -1.0);
        assert_eq!(c.c[0][2][1], 1.0);
        assert_eq!(c.labels[0], "z");
        assert_eq!(data.alpha, Vec3::x());
    }

    #[test]
    fn alpha_defaults_to_plane_normal() {
        let doc = AlgebraDocument::parse(
            r#"{"brackets":{"12":[-1,0,0]},"xi":[[0,1,0],[0,0,1]]}"#,
        )
        .unwrap();
        let (_, data) = doc.into_parts().unwrap();
        assert_eq!(data.alpha, Vec3::x());
    }

    #[test]
    fn rejects_bad_keys_and_malformed_json() {
        let doc = AlgebraDocument::parse(
            r#"{"brackets":{"10":[1,0,0]},"xi":[[0,1,0],[0,0,1]]}"#,
        )
        .unwrap();
        assert!(matches!(doc.into_parts(), Err(Error::InvalidInput(_))));
        assert!(matches!(AlgebraDocument::parse("{"), Err(Error::Json(_))));
    }

    #[test]
    fn round_trips_presets() {
        for p in presets::all() {
            let doc = AlgebraDocument::from_parts(&p.constants, &p.contact);
            let text = serde_json::to_string(&doc).unwrap();
            let (c, data) = AlgebraDocument::parse(&text).unwrap().into_parts().unwrap();
            assert_eq!(c, p.constants);
            assert_eq!(data, p.contact);
        }
    }
}
