//! The classification theorems as decision procedures.
//!
//! Every decider returns a [`Verdict`]. A failed hypothesis on the ambient
//! manifold or the surfaces gives `not_applicable`; a failed classification
//! condition gives `no` with the condition named. Missing or malformed data
//! is an error.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::diagrams::{normalize, DiagramError, DoublePointDiagram, Mode};
use crate::framing::{boundary_euler_balance, FramingError, Link};
use crate::homology::{
    classes_equal, mod2_reduce, AbelianGroupPresentation, HomologyClass, HomologyError, IntMatrix,
    ReductionMap,
};
use crate::json::{ints_to_json, JsonInt};
use crate::surfaces::{diffeomorphic, massey_warnings, Obstruction, SurfaceError, SurfaceSpec, Verdict};

mod audit;
mod random;

pub use audit::{consistency_audit, AuditCheck, AuditReport, AuditStatus};
pub use random::{random_queries, random_query};

/// Version string accepted in query files.
pub const SCHEMA_VERSION: &str = "1.0";

/// Largest `|e|` for which an almost-extendability certificate is built.
pub const CERTIFICATE_LIMIT: u64 = 4096;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error("unsupported schema_version {0:?}")]
    UnsupportedSchema(String),
    #[error("invalid ambient manifold: {0}")]
    InvalidAmbient(String),
    #[error("ambient group {0} is required for this question")]
    MissingGroup(&'static str),
    #[error("{owner}: {field} is required for this question")]
    MissingClass { owner: String, field: &'static str },
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("boundary links differ: {0}")]
    LinkMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("question {question} needs {expected} surface(s), got {found}")]
    SurfaceCount {
        question: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("immersed input ({0}); use the feasibility checks for two- or three-column diagrams")]
    ImmersedInput(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Framing(#[from] FramingError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl DecideError {
    /// True for failures of the engine's own invariants, as opposed to bad
    /// or incomplete input.
    pub fn is_internal(&self) -> bool {
        matches!(self, DecideError::Diagram(DiagramError::Internal(_)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    RelF2,
    AbsF2,
    RelZ,
    AbsZ,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::RelF2 => "h2_rel_f2",
            GroupKind::AbsF2 => "h2_f2",
            GroupKind::RelZ => "h2_rel_z",
            GroupKind::AbsZ => "h2_z",
        }
    }

    /// The same coefficients with the other boundary condition. The two
    /// coincide when `∂X = ∅`.
    fn counterpart(self) -> GroupKind {
        match self {
            GroupKind::RelF2 => GroupKind::AbsF2,
            GroupKind::AbsF2 => GroupKind::RelF2,
            GroupKind::RelZ => GroupKind::AbsZ,
            GroupKind::AbsZ => GroupKind::RelZ,
        }
    }

    fn surface_field(self) -> &'static str {
        match self {
            GroupKind::RelF2 => "class_mod2",
            GroupKind::AbsF2 => "class_mod2_abs",
            GroupKind::RelZ => "class_int",
            GroupKind::AbsZ => "class_int_abs",
        }
    }
}

/// `H₂` presentations of the ambient manifold, each optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientGroups {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_rel_f2: Option<AbelianGroupPresentation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_f2: Option<AbelianGroupPresentation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_rel_z: Option<AbelianGroupPresentation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_z: Option<AbelianGroupPresentation>,
}

impl AmbientGroups {
    fn get(&self, kind: GroupKind) -> Option<&AbelianGroupPresentation> {
        match kind {
            GroupKind::RelF2 => self.h2_rel_f2.as_ref(),
            GroupKind::AbsF2 => self.h2_f2.as_ref(),
            GroupKind::RelZ => self.h2_rel_z.as_ref(),
            GroupKind::AbsZ => self.h2_z.as_ref(),
        }
    }
}

/// Mod-2 reduction matrices, rows indexed by 𝔽₂ coordinates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientReductions {
    /// `H₂(X, ∂X; ℤ) → H₂(X, ∂X; 𝔽₂)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel: Option<IntMatrix>,
    /// `H₂(X; ℤ) → H₂(X; 𝔽₂)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs: Option<IntMatrix>,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub orientable: bool,
    pub simply_connected: bool,
    pub boundary_nonempty: bool,
    #[serde(default = "default_true")]
    pub connected: bool,
    #[serde(default, rename = "is_S4", alias = "is_s4")]
    pub is_s4: bool,
    #[serde(default)]
    pub groups: AmbientGroups,
    #[serde(default)]
    pub reductions: AmbientReductions,
}

impl AmbientSpec {
    pub fn s4() -> Self {
        AmbientSpec {
            orientable: true,
            simply_connected: true,
            boundary_nonempty: false,
            connected: true,
            is_s4: true,
            groups: AmbientGroups::default(),
            reductions: AmbientReductions::default(),
        }
    }

    /// A connected orientable manifold whose four `H₂` groups are all
    /// presented by `f2` and `z`.
    pub fn with_groups(
        simply_connected: bool,
        boundary_nonempty: bool,
        f2: AbelianGroupPresentation,
        z: AbelianGroupPresentation,
    ) -> Self {
        AmbientSpec {
            orientable: true,
            simply_connected,
            boundary_nonempty,
            connected: true,
            is_s4: false,
            groups: AmbientGroups {
                h2_rel_f2: Some(f2.clone()),
                h2_f2: Some(f2),
                h2_rel_z: Some(z.clone()),
                h2_z: Some(z),
            },
            reductions: AmbientReductions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), DecideError> {
        if self.simply_connected && !self.orientable {
            return Err(DecideError::InvalidAmbient(
                "a simply-connected manifold is orientable".into(),
            ));
        }
        if self.is_s4 && (!self.simply_connected || self.boundary_nonempty || !self.connected) {
            return Err(DecideError::InvalidAmbient(
                "S4 is closed, connected and simply-connected".into(),
            ));
        }
        for kind in [GroupKind::RelF2, GroupKind::AbsF2] {
            if let Some(g) = self.groups.get(kind) {
                if g.f2_dim().is_none() {
                    return Err(DecideError::InvalidAmbient(format!(
                        "{} must be an F2 vector space, got {g}",
                        kind.name()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The named group, falling back to trivial groups for S⁴ and to the
    /// counterpart group when `∂X = ∅`.
    pub fn group(&self, kind: GroupKind) -> Result<AbelianGroupPresentation, DecideError> {
        if let Some(g) = self.groups.get(kind) {
            return Ok(g.clone());
        }
        if self.is_s4 {
            return Ok(AbelianGroupPresentation::trivial());
        }
        if !self.boundary_nonempty {
            if let Some(g) = self.groups.get(kind.counterpart()) {
                return Ok(g.clone());
            }
        }
        Err(DecideError::MissingGroup(kind.name()))
    }

    /// Mod-2 reduction for relative (`rel = true`) or absolute classes.
    pub fn reduction(&self, rel: bool) -> Result<ReductionMap, DecideError> {
        let (source, target) = if rel {
            (self.group(GroupKind::RelZ)?, self.group(GroupKind::RelF2)?)
        } else {
            (self.group(GroupKind::AbsZ)?, self.group(GroupKind::AbsF2)?)
        };
        let (own, other) = if rel {
            (&self.reductions.rel, &self.reductions.abs)
        } else {
            (&self.reductions.abs, &self.reductions.rel)
        };
        let matrix = match (own, other) {
            (Some(m), _) => m.clone(),
            (None, Some(m)) if !self.boundary_nonempty => m.clone(),
            _ => {
                let dim = target.coordinate_len();
                if dim == 0 || source.coordinate_len() == 0 {
                    IntMatrix::zeros(dim, source.coordinate_len())
                } else {
                    return Err(DecideError::MissingData(format!(
                        "reductions.{} is required for this question",
                        if rel { "rel" } else { "abs" }
                    )));
                }
            }
        };
        Ok(ReductionMap::new(source, target, &matrix)?)
    }

    fn class(
        &self,
        kind: GroupKind,
        coords: Option<&Vec<JsonInt>>,
        owner: &str,
        field: &'static str,
    ) -> Result<HomologyClass, DecideError> {
        let group = self.group(kind)?;
        match coords {
            Some(c) => Ok(HomologyClass::new(group, c.iter().map(|v| v.0.clone()).collect())?),
            None if group.coordinate_len() == 0 => Ok(HomologyClass::zero(&group)),
            None => Err(DecideError::MissingClass {
                owner: owner.to_string(),
                field,
            }),
        }
    }

    /// The class of `s` in the named group, read from the matching field or,
    /// when `∂X = ∅`, from the counterpart field.
    fn surface_class(&self, s: &SurfaceSpec, kind: GroupKind) -> Result<HomologyClass, DecideError> {
        let field = |k: GroupKind| match k {
            GroupKind::RelF2 => s.class_mod2.as_ref(),
            GroupKind::AbsF2 => s.class_mod2_abs.as_ref(),
            GroupKind::RelZ => s.class_int.as_ref(),
            GroupKind::AbsZ => s.class_int_abs.as_ref(),
        };
        let coords = field(kind).or_else(|| {
            if self.boundary_nonempty {
                None
            } else {
                field(kind.counterpart())
            }
        });
        self.class(kind, coords, &surface_name(s), kind.surface_field())
    }
}

fn surface_name(s: &SurfaceSpec) -> String {
    if s.id.is_empty() {
        "surface".to_string()
    } else {
        format!("surface {}", s.id)
    }
}

/// The data of a cobordism `Z ⊂ ∂X × I` between the boundary links, or of
/// a spanning surface `Z ⊂ ∂X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryCobordismSpec {
    #[serde(default = "Link::empty", alias = "from_link")]
    pub from: Link,
    #[serde(default = "Link::empty", alias = "to_link")]
    pub to: Link,
    /// `e(Z, s₀ ∪ s₁)` at the two surfaces' base framings.
    #[serde(default)]
    pub e_z: i64,
    /// `[Σ₀ ∪ pr_X(Z) ∪ Σ₁]` in `H₂(X; 𝔽₂)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_f2: Option<Vec<JsonInt>>,
    /// `[−Σ₀ ∪ −pr_X(Z) ∪ Σ₁]` in `H₂(X; ℤ)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_int: Option<Vec<JsonInt>>,
    #[serde(default)]
    pub is_concordance: bool,
    /// `e(Σ_C, s^Z)` against the Seifert framing of `Z`, keyed by component
    /// id (spanning) or surface id (almost-extendable).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub seifert_euler: BTreeMap<String, i64>,
}

impl BoundaryCobordismSpec {
    /// The product concordance `∂Σ₀ × I`, with the Euler number forced by
    /// the two base framings and the given class of `Σ₀ ∪ Σ₁`.
    pub fn product(a: &SurfaceSpec, b: &SurfaceSpec, union_class: Option<Vec<JsonInt>>) -> Result<Self, DecideError> {
        let link = a.boundary_link();
        if link != b.boundary_link() {
            return Err(DecideError::LinkMismatch("product concordance needs ∂Σ₀ = ∂Σ₁".into()));
        }
        Ok(BoundaryCobordismSpec {
            from: link.clone(),
            to: link,
            e_z: b.base_framing().difference(&a.base_framing())?,
            class_f2: union_class,
            class_int: None,
            is_concordance: true,
            seifert_euler: BTreeMap::new(),
        })
    }

    /// The same cobordism after twisting both surfaces' base framings by `n`
    /// on every boundary curve.
    pub fn rebase(&self, n: i64) -> Self {
        let mut out = self.clone();
        out.e_z += n * (self.to.len() as i64 - self.from.len() as i64);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    Cobordant,
    CobordantRelBoundary,
    Extends,
    OrientedCobordant,
    OrientedExtends,
    SpanningExtends,
    AlmostExtendable,
    Concordant,
}

impl Question {
    pub const ALL: [Question; 8] = [
        Question::Cobordant,
        Question::CobordantRelBoundary,
        Question::Extends,
        Question::OrientedCobordant,
        Question::OrientedExtends,
        Question::SpanningExtends,
        Question::AlmostExtendable,
        Question::Concordant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Question::Cobordant => "cobordant",
            Question::CobordantRelBoundary => "cobordant_rel_boundary",
            Question::Extends => "extends",
            Question::OrientedCobordant => "oriented_cobordant",
            Question::OrientedExtends => "oriented_extends",
            Question::SpanningExtends => "spanning_extends",
            Question::AlmostExtendable => "almost_extendable",
            Question::Concordant => "concordant",
        }
    }

    fn surface_count(self) -> usize {
        match self {
            Question::SpanningExtends => 1,
            _ => 2,
        }
    }

    /// Symmetric relations: swapping the two surfaces cannot change the answer.
    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            Question::Cobordant | Question::CobordantRelBoundary | Question::Concordant
        )
    }
}

/// A decision query as read from a query file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub schema_version: String,
    pub question: Question,
    pub ambient: AmbientSpec,
    pub surfaces: Vec<SurfaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<BoundaryCobordismSpec>,
    /// `[Σ₀ ∪ Σ₁]` in `H₂(X; 𝔽₂)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union_class: Option<Vec<JsonInt>>,
}

impl Query {
    pub fn new(question: Question, ambient: AmbientSpec, surfaces: Vec<SurfaceSpec>) -> Self {
        Query {
            schema_version: SCHEMA_VERSION.to_string(),
            question,
            ambient,
            surfaces,
            z: None,
            union_class: None,
        }
    }

    pub fn validate(&self) -> Result<(), DecideError> {
        if self.schema_version != SCHEMA_VERSION && self.schema_version != "1" {
            return Err(DecideError::UnsupportedSchema(self.schema_version.clone()));
        }
        self.ambient.validate()?;
        for s in &self.surfaces {
            s.validate()?;
        }
        let expected = self.question.surface_count();
        if self.surfaces.len() != expected {
            return Err(DecideError::SurfaceCount {
                question: self.question.name(),
                expected,
                found: self.surfaces.len(),
            });
        }
        Ok(())
    }

    fn z(&self) -> Result<&BoundaryCobordismSpec, DecideError> {
        self.z
            .as_ref()
            .ok_or_else(|| DecideError::MissingData(format!("{} needs z", self.question.name())))
    }

    /// The same query with the two surfaces exchanged.
    pub fn swapped(&self) -> Query {
        let mut q = self.clone();
        q.surfaces.reverse();
        q
    }
}

/// Validate and answer a query.
pub fn decide(q: &Query) -> Result<Verdict, DecideError> {
    q.validate()?;
    let x = &q.ambient;
    let s = &q.surfaces;
    let verdict = match q.question {
        Question::Cobordant => decide_cobordant(x, &s[0], &s[1])?,
        Question::CobordantRelBoundary => {
            decide_cobordant_rel_boundary(x, &s[0], &s[1], q.union_class.as_ref())?
        }
        Question::Extends => decide_extends_cobordism(x, &s[0], &s[1], q.z()?)?,
        Question::OrientedCobordant => decide_oriented_cobordant(x, &s[0], &s[1])?,
        Question::OrientedExtends => decide_oriented_extends(x, &s[0], &s[1], q.z()?)?,
        Question::SpanningExtends => {
            let z = q.z()?;
            decide_spanning_extends(x, &s[0], &z.seifert_euler, z.class_f2.as_ref())?
        }
        Question::AlmostExtendable => {
            let z = q.z()?;
            let e = |t: &SurfaceSpec| {
                z.seifert_euler.get(&t.id).copied().ok_or_else(|| {
                    DecideError::MissingData(format!("z.seifert_euler has no entry for {:?}", t.id))
                })
            };
            decide_almost_extendable(x, &s[0], &s[1], z.class_f2.as_ref(), e(&s[0])?, e(&s[1])?)?
        }
        Question::Concordant => decide_concordant(x, &s[0], &s[1], q.z.as_ref(), q.union_class.as_ref())?,
    };
    let warnings = if x.is_s4 {
        s.iter().flat_map(massey_warnings).collect()
    } else {
        Vec::new()
    };
    Ok(verdict.with_warnings(warnings))
}

fn orientable_connected(x: &AmbientSpec) -> Option<Verdict> {
    if !x.orientable {
        Some(Verdict::not_applicable(Obstruction::NonOrientableAmbient))
    } else if !x.connected {
        Some(Verdict::not_applicable(Obstruction::DisconnectedAmbient))
    } else {
        None
    }
}

fn orientable(x: &AmbientSpec) -> Option<Verdict> {
    (!x.orientable).then(|| Verdict::not_applicable(Obstruction::NonOrientableAmbient))
}

fn coords(c: &HomologyClass) -> serde_json::Value {
    json!(ints_to_json(c.coords()))
}

fn check_link(what: &str, expected: &Link, found: &Link) -> Result<(), DecideError> {
    if expected == found {
        Ok(())
    } else {
        Err(DecideError::LinkMismatch(format!(
            "{what}: expected {:?}, found {:?}",
            expected.components(),
            found.components()
        )))
    }
}

/// Unrestricted cobordism: equal classes in `H₂(X, ∂X; 𝔽₂)` and, when `X`
/// is closed, equal Euler numbers.
pub fn decide_cobordant(x: &AmbientSpec, a: &SurfaceSpec, b: &SurfaceSpec) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable_connected(x) {
        return Ok(v);
    }
    for s in [a, b] {
        if !s.is_closed() && !x.boundary_nonempty {
            return Err(DecideError::Precondition(format!(
                "{} has boundary but the ambient manifold is closed",
                surface_name(s)
            )));
        }
    }
    let ca = x.surface_class(a, GroupKind::RelF2)?;
    let cb = x.surface_class(b, GroupKind::RelF2)?;
    let (ea, eb) = (a.total_euler(), b.total_euler());
    let mut obs = Vec::new();
    if !classes_equal(&ca, &cb)? {
        obs.push(Obstruction::H2RelMod2);
    }
    if !x.boundary_nonempty && ea != eb {
        obs.push(Obstruction::Euler);
    }
    Ok(Verdict::from_obstructions(
        obs,
        Some(json!({ "class": coords(&ca), "euler": [ea, eb], "boundary_nonempty": x.boundary_nonempty })),
    ))
}

fn union_class(
    x: &AmbientSpec,
    a: &SurfaceSpec,
    b: &SurfaceSpec,
    given: Option<&Vec<JsonInt>>,
) -> Result<HomologyClass, DecideError> {
    if given.is_some() || !(a.is_closed() && b.is_closed()) {
        return x.class(GroupKind::AbsF2, given, "query", "union_class");
    }
    let ca = x.surface_class(a, GroupKind::AbsF2)?;
    let cb = x.surface_class(b, GroupKind::AbsF2)?;
    Ok(ca.add(&cb)?)
}

/// Cobordism rel boundary: `[Σ₀ ∪ Σ₁] = 0` in `H₂(X; 𝔽₂)` and equal Euler
/// numbers at a common framing of `∂Σ₀ = ∂Σ₁`.
pub fn decide_cobordant_rel_boundary(
    x: &AmbientSpec,
    a: &SurfaceSpec,
    b: &SurfaceSpec,
    union: Option<&Vec<JsonInt>>,
) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable(x) {
        return Ok(v);
    }
    check_link("boundary of the second surface", &a.boundary_link(), &b.boundary_link())?;
    let u = union_class(x, a, b, union)?;
    let s = a.base_framing();
    let (ea, eb) = (a.total_euler(), b.euler_at(&s)?);
    let mut obs = Vec::new();
    if !u.is_zero() {
        obs.push(Obstruction::H2AbsMod2);
    }
    if ea != eb {
        obs.push(Obstruction::Euler);
    }
    Ok(Verdict::from_obstructions(
        obs,
        Some(json!({ "union_class": coords(&u), "euler_at_common_framing": [ea, eb] })),
    ))
}

/// Extension of a boundary cobordism `Z`: vanishing class and the Euler
/// balance `e(Σ₁, s₁) = e(Σ₀, s₀) + e(Z, s₀ ∪ s₁)`.
pub fn decide_extends_cobordism(
    x: &AmbientSpec,
    a: &SurfaceSpec,
    b: &SurfaceSpec,
    z: &BoundaryCobordismSpec,
) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable_connected(x) {
        return Ok(v);
    }
    check_link("z.from", &a.boundary_link(), &z.from)?;
    check_link("z.to", &b.boundary_link(), &z.to)?;
    let c = x.class(GroupKind::AbsF2, z.class_f2.as_ref(), "z", "class_f2")?;
    let (e0, e1) = (a.total_euler(), b.total_euler());
    let mut obs = Vec::new();
    if !c.is_zero() {
        obs.push(Obstruction::H2AbsMod2);
    }
    if !boundary_euler_balance(e0, z.e_z, e1) {
        obs.push(Obstruction::EulerBalance);
    }
    Ok(Verdict::from_obstructions(
        obs,
        Some(json!({ "class": coords(&c), "e0": e0, "e_z": z.e_z, "e1": e1 })),
    ))
}

fn require_orientable_surfaces(a: &SurfaceSpec, b: &SurfaceSpec) -> Result<(), DecideError> {
    for s in [a, b] {
        if s.components.iter().any(|c| !c.orientable) {
            return Err(DecideError::Precondition(format!(
                "{} is non-orientable and has no integral class",
                surface_name(s)
            )));
        }
    }
    Ok(())
}

/// Oriented cobordism: equal classes in `H₂(X, ∂X; ℤ)`.
pub fn decide_oriented_cobordant(x: &AmbientSpec, a: &SurfaceSpec, b: &SurfaceSpec) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable(x) {
        return Ok(v);
    }
    require_orientable_surfaces(a, b)?;
    let ca = x.surface_class(a, GroupKind::RelZ)?;
    let cb = x.surface_class(b, GroupKind::RelZ)?;
    let obs = if classes_equal(&ca, &cb)? {
        Vec::new()
    } else {
        vec![Obstruction::H2RelInt]
    };
    Ok(Verdict::from_obstructions(obs, Some(json!({ "class": coords(&ca) }))))
}

/// Oriented extension of `Z`: `[−Σ₀ ∪ −pr_X(Z) ∪ Σ₁] = 0` in `H₂(X; ℤ)`.
pub fn decide_oriented_extends(
    x: &AmbientSpec,
    a: &SurfaceSpec,
    b: &SurfaceSpec,
    z: &BoundaryCobordismSpec,
) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable(x) {
        return Ok(v);
    }
    require_orientable_surfaces(a, b)?;
    check_link("z.from", &a.boundary_link(), &z.from)?;
    check_link("z.to", &b.boundary_link(), &z.to)?;
    let c = x.class(GroupKind::AbsZ, z.class_int.as_ref(), "z", "class_int")?;
    let obs = if c.is_zero() {
        Vec::new()
    } else {
        vec![Obstruction::H2AbsInt]
    };
    Ok(Verdict::from_obstructions(obs, Some(json!({ "class": coords(&c) }))))
}

/// A spanning surface `Z` for `∂Σ` extends to a spanning manifold when
/// `[Z ∪ Σ] = 0` and every component has `e(Σ_C, s^Z) = 0`.
pub fn decide_spanning_extends(
    x: &AmbientSpec,
    s: &SurfaceSpec,
    sz_euler: &BTreeMap<String, i64>,
    zclass: Option<&Vec<JsonInt>>,
) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable(x) {
        return Ok(v);
    }
    let mut values = Vec::with_capacity(s.components.len());
    for i in 0..s.components.len() {
        let cid = s.component_id(i);
        let e = sz_euler
            .get(&format!("{}/{cid}", s.id))
            .or_else(|| sz_euler.get(&cid))
            .copied()
            .ok_or_else(|| DecideError::MissingData(format!("z.seifert_euler has no entry for component {cid:?}")))?;
        values.push((cid, e));
    }
    let c = x.class(GroupKind::AbsF2, zclass, "z", "class_f2")?;
    let mut obs = Vec::new();
    if !c.is_zero() {
        obs.push(Obstruction::H2AbsMod2);
    }
    if values.iter().any(|(_, e)| *e != 0) {
        obs.push(Obstruction::ComponentEuler);
    }
    let per_component: BTreeMap<String, i64> = values.into_iter().collect();
    Ok(Verdict::from_obstructions(
        obs,
        Some(json!({ "class": coords(&c), "seifert_euler": per_component })),
    ))
}

/// Almost-extendability of `Z` over isotoped copies of two embedded
/// surfaces: `[Σ₀ ∪ Z ∪ Σ₁] = 0` and `e(Σ₀, s^Z) = e(Σ₁, s^Z)`. A `yes`
/// carries a normalized two-column diagram.
pub fn decide_almost_extendable(
    x: &AmbientSpec,
    a: &SurfaceSpec,
    b: &SurfaceSpec,
    zclass: Option<&Vec<JsonInt>>,
    e_a: i64,
    e_b: i64,
) -> Result<Verdict, DecideError> {
    if let Some(v) = orientable(x) {
        return Ok(v);
    }
    for s in [a, b] {
        if !s.embedded || s.self_count > 0 {
            return Err(DecideError::ImmersedInput(format!(
                "{} has self_count {}",
                surface_name(s),
                s.self_count
            )));
        }
    }
    let c = x.class(GroupKind::AbsF2, zclass, "z", "class_f2")?;
    let mut obs = Vec::new();
    if !c.is_zero() {
        obs.push(Obstruction::H2AbsMod2);
    }
    if e_a != e_b {
        obs.push(Obstruction::Euler);
    }
    if !obs.is_empty() {
        return Ok(Verdict::from_obstructions(obs, None));
    }
    if e_a.unsigned_abs() > CERTIFICATE_LIMIT {
        return Ok(Verdict::yes(None).with_warnings(vec![format!(
            "|e| = {} exceeds {CERTIFICATE_LIMIT}; no diagram certificate attached",
            e_a.unsigned_abs()
        )]));
    }
    Ok(Verdict::yes(Some(almost_extendable_certificate(a, b, e_a)?)))
}

/// Each surface becomes one component of its column with target `e`; the
/// two are joined by `|e|` double points.
fn almost_extendable_certificate(a: &SurfaceSpec, b: &SurfaceSpec, e: i64) -> Result<serde_json::Value, DecideError> {
    let d = if a.is_empty() || b.is_empty() {
        DoublePointDiagram::build(Mode::TwoColumn, &[], &[])?
    } else {
        let (na, nb) = if a.id.is_empty() || a.id == b.id {
            ("sigma0".to_string(), "sigma1".to_string())
        } else {
            (a.id.clone(), b.id.clone())
        };
        let ids: Vec<String> = (1..=e.unsigned_abs()).map(|k| format!("p{k}")).collect();
        let points: Vec<(&str, &str, &str)> = ids.iter().map(|p| (p.as_str(), na.as_str(), nb.as_str())).collect();
        DoublePointDiagram::build(Mode::TwoColumn, &[(&na, 0, e), (&nb, 1, e)], &points)?
    };
    let out = normalize(&d)?;
    Ok(json!({
        "diagram": out.diagram,
        "assignment": out.assignment,
        "trace": out.trace,
    }))
}

/// Concordance rel boundary of connected surfaces in a simply-connected
/// manifold, or extension of a boundary concordance `Z`.
pub fn decide_concordant(
    x: &AmbientSpec,
    a: &SurfaceSpec,
    b: &SurfaceSpec,
    z: Option<&BoundaryCobordismSpec>,
    union: Option<&Vec<JsonInt>>,
) -> Result<Verdict, DecideError> {
    if !x.simply_connected {
        return Ok(Verdict::not_applicable(Obstruction::NotSimplyConnected));
    }
    if !a.is_connected() || !b.is_connected() {
        return Ok(Verdict::not_applicable(Obstruction::DisconnectedSurface));
    }
    match z {
        Some(z) => {
            if !z.is_concordance {
                return Err(DecideError::Precondition("z is not marked as a concordance".into()));
            }
            check_link("z.from", &a.boundary_link(), &z.from)?;
            check_link("z.to", &b.boundary_link(), &z.to)?;
            check_link("concordance ends", &z.from, &z.to)?;
        }
        None => check_link("boundary of the second surface", &a.boundary_link(), &b.boundary_link())?,
    }
    if !diffeomorphic(a, b) {
        return Ok(Verdict::from_obstructions(vec![Obstruction::Diffeomorphism], None));
    }
    let form = a.canonical_forms()?[0];
    if a.components[0].orientable {
        if let Some(z) = z {
            let v = decide_oriented_extends(x, a, b, z)?;
            return Ok(with_form(v, &form));
        }
        let kind = if a.is_closed() && b.is_closed() {
            GroupKind::AbsZ
        } else {
            GroupKind::RelZ
        };
        let ca = x.surface_class(a, kind)?;
        let cb = x.surface_class(b, kind)?;
        let same = classes_equal(&ca, &cb)?;
        let opposite = classes_equal(&ca, &cb.neg())?;
        let obs = if same || opposite {
            Vec::new()
        } else if kind == GroupKind::AbsZ {
            vec![Obstruction::H2AbsInt]
        } else {
            vec![Obstruction::H2RelInt]
        };
        let v = Verdict::from_obstructions(
            obs,
            Some(json!({ "class": coords(&ca), "orientation": if same { "same" } else { "reversed" } })),
        );
        Ok(with_form(v, &form))
    } else {
        let v = match z {
            Some(z) => decide_extends_cobordism(x, a, b, z)?,
            None => decide_cobordant_rel_boundary(x, a, b, union)?,
        };
        Ok(with_form(v, &form))
    }
}

fn with_form(mut v: Verdict, form: &crate::surfaces::CanonicalForm) -> Verdict {
    if let Some(serde_json::Value::Object(m)) = &mut v.certificate {
        m.insert("surface".into(), json!(form.to_string()));
    }
    v
}

/// Expose a class read for callers outside the deciders (the audit).
pub(crate) fn surface_class(x: &AmbientSpec, s: &SurfaceSpec, kind: GroupKind) -> Result<HomologyClass, DecideError> {
    x.surface_class(s, kind)
}

pub(crate) fn reduce(x: &AmbientSpec, c: &HomologyClass, rel: bool) -> Result<HomologyClass, DecideError> {
    Ok(mod2_reduce(c, &x.reduction(rel)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{Answer, ComponentSpec};

    fn rp2(id: &str, e: i64) -> SurfaceSpec {
        SurfaceSpec::closed(id, vec![ComponentSpec::closed(false, 1, e)])
    }

    fn closed_x(boundary: bool) -> AmbientSpec {
        AmbientSpec {
            boundary_nonempty: boundary,
            ..AmbientSpec::with_groups(
                true,
                boundary,
                AbelianGroupPresentation::f2(1),
                AbelianGroupPresentation::free(1),
            )
        }
    }

    fn zero1() -> Option<Vec<JsonInt>> {
        Some(vec![JsonInt(0.into())])
    }

    fn rp2_zero(id: &str, e: i64) -> SurfaceSpec {
        let mut s = rp2(id, e);
        s.class_mod2 = zero1();
        s.class_mod2_abs = zero1();
        s
    }

    #[test]
    fn rp2_pair_closed_and_bounded() {
        let (a, b) = (rp2_zero("a", 2), rp2_zero("b", -2));
        let v = decide_cobordant(&closed_x(false), &a, &b).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.obstructions, vec![Obstruction::Euler]);
        assert!(decide_cobordant(&closed_x(true), &a, &b).unwrap().is_yes());
        assert!(decide_cobordant(&closed_x(false), &a, &a).unwrap().is_yes());
    }

    #[test]
    fn s4_defaults_to_trivial_groups() {
        let v = decide_cobordant(&AmbientSpec::s4(), &rp2("a", 2), &rp2("b", 2)).unwrap();
        assert!(v.is_yes());
        let q = Query::new(Question::Cobordant, AmbientSpec::s4(), vec![rp2("a", 6), rp2("b", 6)]);
        let v = decide(&q).unwrap();
        assert_eq!(v.warnings.len(), 2);
    }

    #[test]
    fn missing_group_is_an_error() {
        let x = AmbientSpec {
            is_s4: false,
            simply_connected: false,
            ..AmbientSpec::s4()
        };
        assert!(matches!(
            decide_cobordant(&x, &rp2("a", 0), &rp2("b", 0)),
            Err(DecideError::MissingGroup("h2_rel_f2"))
        ));
    }

    #[test]
    fn extends_examples() {
        let x = closed_x(true);
        let a = rp2_zero("a", 2);
        let b = rp2_zero("b", 0);
        let z = |e_z: i64, c: i64| BoundaryCobordismSpec {
            from: Link::empty(),
            to: Link::empty(),
            e_z,
            class_f2: Some(vec![JsonInt(c.into())]),
            class_int: None,
            is_concordance: false,
            seifert_euler: BTreeMap::new(),
        };
        assert!(decide_extends_cobordism(&x, &a, &b, &z(-2, 0)).unwrap().is_yes());
        let v = decide_extends_cobordism(&x, &rp2_zero("a", 0), &rp2_zero("b", 1), &z(0, 0)).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::EulerBalance]);
        let v = decide_extends_cobordism(&x, &a, &b, &z(-2, 1)).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::H2AbsMod2]);
    }

    #[test]
    fn rel_boundary_examples() {
        let x = closed_x(true);
        let a = rp2_zero("a", 2);
        assert!(decide_cobordant_rel_boundary(&x, &a, &a, None).unwrap().is_yes());
        let v = decide_cobordant_rel_boundary(&x, &a, &rp2_zero("b", 3), None).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::Euler]);
        let one = Some(vec![JsonInt(1.into())]);
        let v = decide_cobordant_rel_boundary(&x, &a, &a, one.as_ref()).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::H2AbsMod2]);
    }

    fn torus(id: &str, class: i64) -> SurfaceSpec {
        let mut s = SurfaceSpec::closed(id, vec![ComponentSpec::closed(true, 0, 0)]);
        s.class_int = Some(vec![JsonInt(class.into())]);
        s.class_mod2 = Some(vec![JsonInt((class.rem_euclid(2)).into())]);
        s
    }

    #[test]
    fn oriented_examples() {
        let x = closed_x(false);
        assert!(decide_oriented_cobordant(&x, &torus("a", 3), &torus("b", 3)).unwrap().is_yes());
        let v = decide_oriented_cobordant(&x, &torus("a", 3), &torus("b", -3)).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::H2RelInt]);
        assert!(decide_oriented_cobordant(&x, &torus("a", 0), &torus("b", 0)).unwrap().is_yes());

        let zx = AmbientSpec::with_groups(
            true,
            false,
            AbelianGroupPresentation::f2(2),
            AbelianGroupPresentation::from_i64(1, &[2]).unwrap(),
        );
        let z = |c: [i64; 2]| BoundaryCobordismSpec {
            from: Link::empty(),
            to: Link::empty(),
            e_z: 0,
            class_f2: None,
            class_int: Some(c.iter().map(|&v| JsonInt(v.into())).collect()),
            is_concordance: false,
            seifert_euler: BTreeMap::new(),
        };
        let s = SurfaceSpec::closed("s", vec![ComponentSpec::closed(true, 2, 0)]);
        assert!(decide_oriented_extends(&zx, &s, &s, &z([0, 0])).unwrap().is_yes());
        assert!(!decide_oriented_extends(&zx, &s, &s, &z([1, 0])).unwrap().is_yes());
        assert!(decide_oriented_extends(&zx, &s, &s, &z([0, 2])).unwrap().is_yes());
    }

    #[test]
    fn concordance_examples() {
        let x = closed_x(false);
        let v = decide_concordant(&x, &rp2_zero("a", 2), &rp2_zero("b", -2), None, None).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::Euler]);
        assert!(decide_concordant(&x, &torus("a", 1), &torus("b", 1), None, None).unwrap().is_yes());
        assert!(decide_concordant(&x, &torus("a", 1), &torus("b", -1), None, None).unwrap().is_yes());
        let klein = SurfaceSpec::closed("k", vec![ComponentSpec::closed(false, 0, 0)]);
        let v = decide_concordant(&x, &torus("a", 0), &klein, None, None).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::Diffeomorphism]);

        let not_sc = AmbientSpec {
            simply_connected: false,
            ..x.clone()
        };
        let v = decide_concordant(&not_sc, &torus("a", 0), &torus("a", 0), None, None).unwrap();
        assert_eq!(v.answer, Answer::NotApplicable);
        let two = SurfaceSpec::closed(
            "two",
            vec![ComponentSpec::closed(true, 2, 0), ComponentSpec::closed(true, 2, 0)],
        );
        let v = decide_concordant(&x, &two, &two, None, None).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::DisconnectedSurface]);
    }

    #[test]
    fn spanning_examples() {
        let x = closed_x(true);
        let s = SurfaceSpec::closed(
            "s",
            vec![ComponentSpec::closed(true, 2, 0), ComponentSpec::closed(false, 1, 2)],
        );
        let mut m: BTreeMap<String, i64> = [("c0".to_string(), 0), ("c1".to_string(), 0)].into();
        assert!(decide_spanning_extends(&x, &s, &m, zero1().as_ref()).unwrap().is_yes());
        m.insert("c1".into(), 2);
        let v = decide_spanning_extends(&x, &s, &m, zero1().as_ref()).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::ComponentEuler]);
        m.insert("c1".into(), 0);
        let one = Some(vec![JsonInt(1.into())]);
        let v = decide_spanning_extends(&x, &s, &m, one.as_ref()).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::H2AbsMod2]);
        m.remove("c1");
        assert!(matches!(
            decide_spanning_extends(&x, &s, &m, zero1().as_ref()),
            Err(DecideError::MissingData(_))
        ));
    }

    #[test]
    fn almost_extendable_examples() {
        let x = closed_x(true);
        let (a, b) = (rp2("a", 2), rp2("b", 2));
        let v = decide_almost_extendable(&x, &a, &b, zero1().as_ref(), 3, 3).unwrap();
        assert!(v.is_yes());
        let cert = v.certificate.unwrap();
        assert_eq!(cert["assignment"].as_array().unwrap().len() >= 3, true);
        let v = decide_almost_extendable(&x, &a, &b, zero1().as_ref(), 4, 2).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction::Euler]);
        let empty = SurfaceSpec::default();
        let v = decide_almost_extendable(&x, &empty, &empty, zero1().as_ref(), 0, 0).unwrap();
        assert!(v.is_yes());
        assert_eq!(v.certificate.unwrap()["assignment"], json!([]));
        let mut immersed = rp2("i", 2);
        immersed.embedded = false;
        immersed.self_count = 2;
        assert!(matches!(
            decide_almost_extendable(&x, &immersed, &b, zero1().as_ref(), 0, 0),
            Err(DecideError::ImmersedInput(_))
        ));
    }
}
