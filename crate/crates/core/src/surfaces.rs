//! Compact surfaces: classification of components, surface specifications
//! with their homological and Euler data, puncturing arithmetic, and the
//! verdict type returned by the decision procedures.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framing::{Framing, FramingError, Link, RelEulerDatum};
use crate::json::JsonInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("component {id}: {reason}")]
    InvalidComponent { id: String, reason: String },
    #[error("boundary curve {0:?} is claimed by more than one component")]
    SharedBoundary(String),
    #[error("surface has boundary but no boundary framing")]
    MissingBoundaryFraming,
    #[error("boundary framing does not match the components' boundary curves")]
    BoundaryMismatch,
    #[error("embedded surface has self_count {0}")]
    EmbeddedWithSelfIntersections(u64),
    #[error("Massey range applies to closed non-orientable surfaces, got chi = {0}")]
    MasseyDomain(i64),
    #[error(transparent)]
    Framing(#[from] FramingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Orientable,
    Nonorientable,
}

/// Genus (orientable) or number of crosscaps (non-orientable), with the
/// number of boundary circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub kind: SurfaceKind,
    pub genus_or_crosscaps: i64,
    pub boundary_count: usize,
}

impl CanonicalForm {
    pub fn euler_characteristic(&self) -> i64 {
        let b = self.boundary_count as i64;
        match self.kind {
            SurfaceKind::Orientable => 2 - 2 * self.genus_or_crosscaps - b,
            SurfaceKind::Nonorientable => 2 - self.genus_or_crosscaps - b,
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SurfaceKind::Orientable => {
                write!(f, "O(g={},b={})", self.genus_or_crosscaps, self.boundary_count)
            }
            SurfaceKind::Nonorientable => {
                write!(f, "N(k={},b={})", self.genus_or_crosscaps, self.boundary_count)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub orientable: bool,
    pub euler_characteristic: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<String>,
    /// Normal Euler number: absolute when closed, otherwise relative to
    /// the surface's boundary framing.
    #[serde(default)]
    pub euler: i64,
}

impl ComponentSpec {
    pub fn closed(orientable: bool, chi: i64, euler: i64) -> Self {
        ComponentSpec {
            id: None,
            orientable,
            euler_characteristic: chi,
            boundary: Vec::new(),
            euler,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }
}

pub fn canonical_form(c: &ComponentSpec) -> Result<CanonicalForm, SurfaceError> {
    let b = c.boundary.len() as i64;
    let chi = c.euler_characteristic;
    let invalid = |reason: String| SurfaceError::InvalidComponent {
        id: c.id.clone().unwrap_or_default(),
        reason,
    };
    if chi > 2 {
        return Err(invalid(format!("Euler characteristic {chi} exceeds 2")));
    }
    if c.orientable {
        let twice_g = 2 - chi - b;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(invalid(format!(
                "no orientable surface has chi = {chi} and {b} boundary circles"
            )));
        }
        Ok(CanonicalForm {
            kind: SurfaceKind::Orientable,
            genus_or_crosscaps: twice_g / 2,
            boundary_count: c.boundary.len(),
        })
    } else {
        let k = 2 - chi - b;
        if k < 1 {
            return Err(invalid(format!(
                "no non-orientable surface has chi = {chi} and {b} boundary circles"
            )));
        }
        Ok(CanonicalForm {
            kind: SurfaceKind::Nonorientable,
            genus_or_crosscaps: k,
            boundary_count: c.boundary.len(),
        })
    }
}

/// A properly embedded (or immersed, when `embedded` is false) compact
/// surface. Homology classes are coordinate vectors in the groups named by
/// the ambient specification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub id: String,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
    /// Base framing of `∂Σ`; required exactly when some component has boundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_framing: Option<Framing>,
    /// Class in `H₂(X, ∂X; 𝔽₂)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_mod2: Option<Vec<JsonInt>>,
    /// Class in `H₂(X; 𝔽₂)`, for surfaces whose class is absolute.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_mod2_abs: Option<Vec<JsonInt>>,
    /// Oriented class in `H₂(X, ∂X; ℤ)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_int: Option<Vec<JsonInt>>,
    /// Oriented class in `H₂(X; ℤ)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_int_abs: Option<Vec<JsonInt>>,
    #[serde(default)]
    pub self_count: u64,
    #[serde(default = "default_true")]
    pub embedded: bool,
}

fn default_true() -> bool {
    true
}

impl Default for SurfaceSpec {
    fn default() -> Self {
        SurfaceSpec {
            id: String::new(),
            components: Vec::new(),
            boundary_framing: None,
            class_mod2: None,
            class_mod2_abs: None,
            class_int: None,
            class_int_abs: None,
            self_count: 0,
            embedded: true,
        }
    }
}

impl SurfaceSpec {
    pub fn closed(id: &str, components: Vec<ComponentSpec>) -> Self {
        SurfaceSpec {
            id: id.to_string(),
            components,
            ..Default::default()
        }
    }

    pub fn component_id(&self, index: usize) -> String {
        self.components[index]
            .id
            .clone()
            .unwrap_or_else(|| format!("c{index}"))
    }

    pub fn is_closed(&self) -> bool {
        self.components.iter().all(ComponentSpec::is_closed)
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        let mut seen = BTreeSet::new();
        for (i, c) in self.components.iter().enumerate() {
            canonical_form(c).map_err(|e| match e {
                SurfaceError::InvalidComponent { reason, .. } => SurfaceError::InvalidComponent {
                    id: self.component_id(i),
                    reason,
                },
                other => other,
            })?;
            for k in &c.boundary {
                if !seen.insert(k.clone()) {
                    return Err(SurfaceError::SharedBoundary(k.clone()));
                }
            }
        }
        match &self.boundary_framing {
            None if !seen.is_empty() => return Err(SurfaceError::MissingBoundaryFraming),
            None => {}
            Some(f) => {
                let declared: BTreeSet<String> = f.link().components().iter().cloned().collect();
                if declared != seen {
                    return Err(SurfaceError::BoundaryMismatch);
                }
            }
        }
        if self.embedded && self.self_count > 0 {
            return Err(SurfaceError::EmbeddedWithSelfIntersections(self.self_count));
        }
        Ok(())
    }

    /// `∂Σ`, the empty link for closed surfaces.
    pub fn boundary_link(&self) -> Link {
        self.boundary_framing
            .as_ref()
            .map(|f| f.link().clone())
            .unwrap_or_else(Link::empty)
    }

    /// The base framing, the trivial framing of the empty link when closed.
    pub fn base_framing(&self) -> Framing {
        self.boundary_framing
            .clone()
            .unwrap_or_else(|| Framing::base(&Link::empty()))
    }

    /// Total normal Euler number at the base framing.
    pub fn total_euler(&self) -> i64 {
        self.components.iter().map(|c| c.euler).sum()
    }

    /// Total normal Euler number at the framing `s` of `∂Σ`.
    pub fn euler_at(&self, s: &Framing) -> Result<i64, SurfaceError> {
        Ok(self.total_euler() + s.difference(&self.base_framing())?)
    }

    /// Per-component datum against the restriction of the base framing.
    pub fn euler_datum(&self, index: usize) -> Result<RelEulerDatum, SurfaceError> {
        let c = &self.components[index];
        Ok(RelEulerDatum {
            surface_id: format!("{}/{}", self.id, self.component_id(index)),
            base_framing: self.base_framing().restrict(&c.boundary)?,
            e_base: c.euler,
        })
    }

    pub fn canonical_forms(&self) -> Result<Vec<CanonicalForm>, SurfaceError> {
        self.components.iter().map(canonical_form).collect()
    }

    /// The same surface with its base framing twisted by `n` on every
    /// boundary curve, Euler data adjusted so the surface is unchanged.
    pub fn rebase(&self, n: i64) -> SurfaceSpec {
        let mut out = self.clone();
        if let Some(f) = &self.boundary_framing {
            out.boundary_framing = Some(f.twist_all(n));
            for c in &mut out.components {
                c.euler += n * c.boundary.len() as i64;
            }
        }
        out
    }
}

/// Equality of the multisets of canonical forms.
pub fn diffeomorphic(a: &SurfaceSpec, b: &SurfaceSpec) -> bool {
    match (a.canonical_forms(), b.canonical_forms()) {
        (Ok(mut x), Ok(mut y)) => {
            x.sort();
            y.sort();
            x == y
        }
        _ => false,
    }
}

/// Euler number after puncturing at a double point whose Hopf link carries
/// framings `fr_K0` and `fr_K1`.
pub fn puncture_adjust(e: i64, fr_k0: i64, fr_k1: i64) -> i64 {
    e + fr_k0 + fr_k1
}

/// `(e − 2·self) mod 4`, preserved by regular homotopy.
pub fn homotopy_invariant(e: i64, self_count: u64) -> u8 {
    (e as i128 - 2 * self_count as i128).rem_euclid(4) as u8
}

/// Possible normal Euler numbers of a closed non-orientable surface of
/// Euler characteristic `chi` in S⁴: `2χ−4, 2χ, …, 4−2χ`.
pub fn massey_range(chi: i64) -> Result<Vec<i64>, SurfaceError> {
    if chi > 1 {
        return Err(SurfaceError::MasseyDomain(chi));
    }
    Ok((2 * chi - 4..=4 - 2 * chi).step_by(4).collect())
}

/// Warnings for components of a surface in S⁴ whose Euler numbers fall
/// outside the Massey range. Never an error.
pub fn massey_warnings(s: &SurfaceSpec) -> Vec<String> {
    s.components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_closed() && !c.orientable)
        .filter_map(|(i, c)| {
            let range = massey_range(c.euler_characteristic).ok()?;
            (!range.contains(&c.euler)).then(|| {
                format!(
                    "component {} of {}: e = {} is outside the S4 range {:?}",
                    s.component_id(i),
                    s.id,
                    c.euler,
                    range
                )
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    NotApplicable,
}

/// Named conditions a verdict can fail on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    H2RelMod2,
    H2AbsMod2,
    H2RelInt,
    H2AbsInt,
    Euler,
    EulerBalance,
    ComponentEuler,
    Diffeomorphism,
    NotSimplyConnected,
    DisconnectedSurface,
    NonOrientableAmbient,
    DisconnectedAmbient,
}

impl Obstruction {
    pub fn name(self) -> &'static str {
        match self {
            Obstruction::H2RelMod2 => "h2_rel_mod2",
            Obstruction::H2AbsMod2 => "h2_abs_mod2",
            Obstruction::H2RelInt => "h2_rel_int",
            Obstruction::H2AbsInt => "h2_abs_int",
            Obstruction::Euler => "euler",
            Obstruction::EulerBalance => "euler_balance",
            Obstruction::ComponentEuler => "component_euler",
            Obstruction::Diffeomorphism => "diffeomorphism",
            Obstruction::NotSimplyConnected => "not_simply_connected",
            Obstruction::DisconnectedSurface => "disconnected_surface",
            Obstruction::NonOrientableAmbient => "non_orientable_ambient",
            Obstruction::DisconnectedAmbient => "disconnected_ambient",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub obstructions: Vec<Obstruction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn yes(certificate: Option<serde_json::Value>) -> Self {
        Verdict {
            answer: Answer::Yes,
            obstructions: Vec::new(),
            certificate,
            warnings: Vec::new(),
        }
    }

    /// `no` when any obstruction is present, `yes` otherwise.
    pub fn from_obstructions(obstructions: Vec<Obstruction>, certificate: Option<serde_json::Value>) -> Self {
        if obstructions.is_empty() {
            Verdict::yes(certificate)
        } else {
            Verdict {
                answer: Answer::No,
                obstructions,
                certificate: None,
                warnings: Vec::new(),
            }
        }
    }

    pub fn not_applicable(reason: Obstruction) -> Self {
        Verdict {
            answer: Answer::NotApplicable,
            obstructions: vec![reason],
            certificate: None,
            warnings: Vec::new(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framing::{hopf_seifert_framings, Ambient};
    use proptest::prelude::*;

    fn comp(orientable: bool, chi: i64, b: usize) -> ComponentSpec {
        ComponentSpec {
            id: None,
            orientable,
            euler_characteristic: chi,
            boundary: (0..b).map(|i| format!("K{i}")).collect(),
            euler: 0,
        }
    }

    fn form(kind: SurfaceKind, n: i64, b: usize) -> CanonicalForm {
        CanonicalForm {
            kind,
            genus_or_crosscaps: n,
            boundary_count: b,
        }
    }

    #[test]
    fn canonical_form_examples() {
        use SurfaceKind::*;
        assert_eq!(canonical_form(&comp(true, 2, 0)).unwrap(), form(Orientable, 0, 0));
        assert_eq!(canonical_form(&comp(false, 1, 0)).unwrap(), form(Nonorientable, 1, 0));
        assert_eq!(canonical_form(&comp(true, -1, 1)).unwrap(), form(Orientable, 1, 1));
        assert_eq!(form(Orientable, 3, 0).to_string(), "O(g=3,b=0)");
        assert_eq!(form(Nonorientable, 2, 1).to_string(), "N(k=2,b=1)");
    }

    #[test]
    fn inconsistent_components_rejected() {
        assert!(canonical_form(&comp(true, 1, 0)).is_err());
        assert!(canonical_form(&comp(true, 3, 0)).is_err());
        assert!(canonical_form(&comp(false, 2, 0)).is_err());
        assert!(canonical_form(&comp(false, 1, 1)).is_err());
        assert!(canonical_form(&comp(true, 2, 2)).is_err());
    }

    #[test]
    fn diffeomorphism_examples() {
        let torus = SurfaceSpec::closed("T", vec![ComponentSpec::closed(true, 0, 0)]);
        let sphere = SurfaceSpec::closed("S", vec![ComponentSpec::closed(true, 2, 0)]);
        let klein = SurfaceSpec::closed("K", vec![ComponentSpec::closed(false, 0, 0)]);
        assert!(diffeomorphic(&torus, &torus));
        assert!(!diffeomorphic(&torus, &sphere));
        assert!(!diffeomorphic(&klein, &torus));
    }

    #[test]
    fn puncture_and_invariant_examples() {
        assert_eq!(puncture_adjust(5, -1, -1), 3);
        assert_eq!(puncture_adjust(0, 0, 0), 0);
        assert_eq!(puncture_adjust(2, 1, 1), 4);
        assert_eq!(homotopy_invariant(0, 0), 0);
        assert_eq!(homotopy_invariant(6, 1), 0);
        assert_eq!(homotopy_invariant(-1, 0), 3);
        for e in -5..5 {
            for s in 0..4 {
                assert_eq!(homotopy_invariant(e, s), homotopy_invariant(e, s + 2));
            }
        }
    }

    #[test]
    fn hopf_punctures_shift_by_two() {
        for f in hopf_seifert_framings() {
            let e = 7;
            let shifted = puncture_adjust(e, f.offset("K").unwrap(), f.offset("K'").unwrap());
            assert_eq!((shifted - e).abs(), 2);
        }
    }

    #[test]
    fn massey_examples() {
        assert_eq!(massey_range(1).unwrap(), vec![-2, 2]);
        assert_eq!(massey_range(0).unwrap(), vec![-4, 0, 4]);
        assert!(!massey_range(1).unwrap().contains(&0));
        assert!(massey_range(2).is_err());
    }

    #[test]
    fn massey_warnings_flag_out_of_range() {
        let s = SurfaceSpec::closed("P", vec![ComponentSpec::closed(false, 1, 0)]);
        assert_eq!(massey_warnings(&s).len(), 1);
        let ok = SurfaceSpec::closed("P", vec![ComponentSpec::closed(false, 1, 2)]);
        assert!(massey_warnings(&ok).is_empty());
    }

    #[test]
    fn surface_validation() {
        let mut s = SurfaceSpec::closed("D", vec![comp(true, 1, 1)]);
        assert_eq!(s.validate(), Err(SurfaceError::MissingBoundaryFraming));
        let link = Link::new(["K0"], Ambient::Generic).unwrap();
        s.boundary_framing = Some(Framing::base(&link));
        assert!(s.validate().is_ok());
        s.self_count = 2;
        assert!(s.validate().is_err());
        s.embedded = false;
        assert!(s.validate().is_ok());
        assert!(SurfaceSpec::default().validate().is_ok());
    }

    #[test]
    fn rebase_preserves_euler_at_fixed_framing() {
        let link = Link::new(["K0", "K1"], Ambient::Generic).unwrap();
        let mut s = SurfaceSpec::closed("A", vec![comp(true, 0, 2)]);
        s.boundary_framing = Some(Framing::base(&link));
        s.components[0].euler = 3;
        let s0 = Framing::base(&link).twist("K1", 5).unwrap();
        assert_eq!(s.euler_at(&s0).unwrap(), 8);
        assert_eq!(s.rebase(-4).euler_at(&s0).unwrap(), 8);
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::from_obstructions(vec![Obstruction::Euler], None);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"answer":"no","obstructions":["euler"]}"#);
        assert_eq!(Obstruction::H2RelMod2.name(), "h2_rel_mod2");
        assert_eq!(
            serde_json::to_string(&Obstruction::H2RelMod2).unwrap(),
            "\"h2_rel_mod2\""
        );
    }

    fn arb_component() -> impl Strategy<Value = ComponentSpec> {
        (any::<bool>(), 0i64..4, 0usize..3).prop_map(|(orientable, n, b)| {
            let chi = if orientable { 2 - 2 * n - b as i64 } else { 2 - (n + 1) - b as i64 };
            comp(orientable, chi, b)
        })
    }

    fn arb_surface() -> impl Strategy<Value = SurfaceSpec> {
        prop::collection::vec(arb_component(), 0..3)
            .prop_map(|cs| SurfaceSpec::closed("S", cs))
    }

    proptest! {
        #[test]
        fn canonical_form_round_trips(c in arb_component()) {
            let f = canonical_form(&c).unwrap();
            prop_assert_eq!(f.euler_characteristic(), c.euler_characteristic);
        }

        #[test]
        fn diffeomorphic_is_an_equivalence(a in arb_surface(), b in arb_surface(), c in arb_surface()) {
            prop_assert!(diffeomorphic(&a, &a));
            prop_assert_eq!(diffeomorphic(&a, &b), diffeomorphic(&b, &a));
            if diffeomorphic(&a, &b) && diffeomorphic(&b, &c) {
                prop_assert!(diffeomorphic(&a, &c));
            }
        }

        #[test]
        fn homotopy_invariant_moves(e in -1000i64..1000, s in 0u64..1000, up in any::<bool>()) {
            prop_assert_eq!(homotopy_invariant(e, s), homotopy_invariant(e, s + 2));
            // A cusp shifts e and 2·self by 2 mod 4 each; their difference is fixed.
            let cusp = if up { e + 2 } else { e - 2 };
            prop_assert_eq!((cusp - e).rem_euclid(4), 2);
            prop_assert_eq!(homotopy_invariant(cusp, s + 1), homotopy_invariant(e, s));
        }
    }
}
