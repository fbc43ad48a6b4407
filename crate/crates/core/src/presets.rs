//! Named example algebras with their contact data.
//!
//! Every preset is written in a basis `(v0, v1, v2)` with contact plane
//! `span{v1, v2}` and contact form `theta_0`.

use crate::algebra::{ContactData, StructureConstants, Vec3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub constants: StructureConstants,
    pub contact: ContactData,
}

/// Preset names, in catalog order.
pub const NAMES: [&str; 7] = [
    "heisenberg",
    "su2",
    "sl2",
    "sl2_hyperbolic",
    "case1",
    "case2",
    "euclidean",
];

fn standard_contact() -> ContactData {
    ContactData::new([Vec3::y(), Vec3::z()], Vec3::x()).expect("standard plane is valid")
}

pub fn get(name: &str) -> Result<Preset> {
    let constants = match name {
        // [v1, v2] = -v0
        "heisenberg" => StructureConstants::canonical(0.0, 0.0, 0.0, 0.0),
        // [v1,v0] = v2, [v2,v0] = -v1, [v2,v1] = v0
        "su2" => StructureConstants::canonical(-1.0, 1.0, 0.0, 0.0).with_labels(["e0", "e1", "e2"]),
        // [v1,v0] = -v2, [v2,v0] = v1, [v2,v1] = v0
        "sl2" => StructureConstants::canonical(1.0, -1.0, 0.0, 0.0),
        // [h,u1] = u1, [h,u2] = -u2, [u1,u2] = -h
        "sl2_hyperbolic" => {
            StructureConstants::from_brackets([0.0, 1.0, 0.0], [0.0, 0.0, -1.0], [-1.0, 0.0, 0.0])
                .with_labels(["h", "u1", "u2"])
        }
        "case1" => StructureConstants::canonical(0.0, 1.0, 1.0, 0.0),
        "case2" => StructureConstants::canonical(1.0, 0.0, 0.0, 1.0),
        // translations t1, t2 and rotation r: [t1,r] = -t2, [t2,r] = t1
        "euclidean" => {
            StructureConstants::from_brackets([0.0; 3], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0])
                .with_labels(["t1", "t2", "r"])
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    let name = NAMES.iter().copied().find(|n| *n == name).unwrap();
    Ok(Preset {
        name,
        constants,
        contact: standard_contact(),
    })
}

pub fn all() -> Vec<Preset> {
    NAMES.iter().map(|n| get(n).unwrap()).collect()
}
