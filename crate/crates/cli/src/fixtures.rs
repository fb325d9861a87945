//! Fixture documents compiled into the binary.

use crate::input::Kind;

pub struct Fixture {
    pub name: &'static str,
    pub kind: Kind,
    pub description: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($name:literal, $kind:expr, $description:literal) => {
        Fixture {
            name: $name,
            kind: $kind,
            description: $description,
            text: include_str!(concat!("../../../fixtures/", $name, ".json")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!(
        "rp2-pair-closed",
        Kind::Query,
        "RP2 with e = 2 and e = -2 in a closed simply-connected manifold: not cobordant"
    ),
    fixture!(
        "rp2-pair-boundary",
        Kind::Query,
        "the same RP2 pair once the ambient boundary is nonempty: cobordant"
    ),
    fixture!(
        "massey-rp2-s4",
        Kind::Query,
        "RP2 in S4 with e = 0, outside the Massey range {-2, 2}; reported as a warning"
    ),
    fixture!(
        "hopf-annuli",
        Kind::Query,
        "one Hopf-link annulus described at the framings +1 and -1 of both components"
    ),
    fixture!(
        "extends-balance-yes",
        Kind::Query,
        "extension of a boundary cobordism with (e0, e_Z, e1) = (2, -2, 0)"
    ),
    fixture!(
        "extends-balance-no",
        Kind::Query,
        "extension of a boundary cobordism with (e0, e_Z, e1) = (0, 0, 1)"
    ),
    fixture!(
        "p11-t00",
        Kind::Diagram,
        "two components joined by two double points, both targets 0"
    ),
    fixture!(
        "three-column-self",
        Kind::Diagram,
        "three-column diagram with a self double point and no uniform assignment before finger moves"
    ),
    fixture!("z-mod-2", Kind::Homology, "H1 of a complex with boundary map [2]"),
    fixture!(
        "rp2-cellular-f2",
        Kind::Homology,
        "H1 of the cellular RP2 complex over F2, with the class of the 1-cell"
    ),
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}
