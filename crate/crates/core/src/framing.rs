//! Framings of links as a ℤ-torsor over a chosen base framing, and the
//! relative normal Euler number arithmetic built on it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FramingError {
    #[error("duplicate link component {0:?}")]
    DuplicateComponent(String),
    #[error("unknown link component {0:?}")]
    UnknownComponent(String),
    #[error("framing is missing an offset for component {0:?}")]
    MissingOffset(String),
    #[error("framings live on different links")]
    LinkMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Ambient {
    #[serde(rename = "S3", alias = "s3")]
    S3,
    #[serde(rename = "generic")]
    #[default]
    Generic,
}

/// A link as a set of named components; equality ignores listing order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "LinkRepr", into = "LinkRepr")]
pub struct Link {
    components: Vec<String>,
    ambient: Ambient,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkRepr {
    components: Vec<String>,
    #[serde(default)]
    ambient: Ambient,
}

impl TryFrom<LinkRepr> for Link {
    type Error = FramingError;
    fn try_from(r: LinkRepr) -> Result<Self, FramingError> {
        Link::new(r.components, r.ambient)
    }
}

impl From<Link> for LinkRepr {
    fn from(l: Link) -> Self {
        LinkRepr {
            components: l.components,
            ambient: l.ambient,
        }
    }
}

impl PartialEq for Link {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.sorted() == other.sorted()
    }
}

impl Eq for Link {}

impl std::hash::Hash for Link {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.sorted().hash(state);
    }
}

impl Link {
    fn sorted(&self) -> Vec<&String> {
        let mut v: Vec<&String> = self.components.iter().collect();
        v.sort();
        v
    }

    pub fn new<S: Into<String>>(
        components: impl IntoIterator<Item = S>,
        ambient: Ambient,
    ) -> Result<Self, FramingError> {
        let components: Vec<String> = components.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert(c) {
                return Err(FramingError::DuplicateComponent(c.clone()));
            }
        }
        Ok(Link { components, ambient })
    }

    pub fn empty() -> Self {
        Link {
            components: Vec::new(),
            ambient: Ambient::Generic,
        }
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn contains(&self, id: &str) -> bool {
        self.components.iter().any(|c| c == id)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Sub-link on the named components, in this link's order.
    pub fn restrict(&self, ids: &[String]) -> Result<Link, FramingError> {
        for id in ids {
            if !self.contains(id) {
                return Err(FramingError::UnknownComponent(id.clone()));
            }
        }
        Ok(Link {
            components: self
                .components
                .iter()
                .filter(|c| ids.contains(c))
                .cloned()
                .collect(),
            ambient: self.ambient,
        })
    }
}

/// Offsets per component relative to the link's base framing. In `S3` the
/// base is the 0-framing, so offsets are the absolute values `fr_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FramingRepr", into = "FramingRepr")]
pub struct Framing {
    link: Link,
    offsets: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FramingRepr {
    link: Link,
    offsets: BTreeMap<String, i64>,
}

impl TryFrom<FramingRepr> for Framing {
    type Error = FramingError;
    fn try_from(r: FramingRepr) -> Result<Self, FramingError> {
        Framing::new(r.link, r.offsets)
    }
}

impl From<Framing> for FramingRepr {
    fn from(f: Framing) -> Self {
        FramingRepr {
            link: f.link,
            offsets: f.offsets,
        }
    }
}

impl Framing {
    pub fn new(link: Link, offsets: BTreeMap<String, i64>) -> Result<Self, FramingError> {
        if let Some(extra) = offsets.keys().find(|k| !link.contains(k)) {
            return Err(FramingError::UnknownComponent(extra.clone()));
        }
        if let Some(missing) = link.components.iter().find(|c| !offsets.contains_key(*c)) {
            return Err(FramingError::MissingOffset(missing.clone()));
        }
        Ok(Framing { link, offsets })
    }

    /// The base framing itself.
    pub fn base(link: &Link) -> Self {
        Framing {
            offsets: link.components.iter().map(|c| (c.clone(), 0)).collect(),
            link: link.clone(),
        }
    }

    pub fn link(&self) -> &Link {
        &self.link
    }

    pub fn offsets(&self) -> &BTreeMap<String, i64> {
        &self.offsets
    }

    pub fn offset(&self, component: &str) -> Option<i64> {
        self.offsets.get(component).copied()
    }

    pub fn total_offset(&self) -> i64 {
        self.offsets.values().sum()
    }

    /// `n ⋆ s` on a single component.
    pub fn twist(&self, component: &str, n: i64) -> Result<Framing, FramingError> {
        let mut out = self.clone();
        *out
            .offsets
            .get_mut(component)
            .ok_or_else(|| FramingError::UnknownComponent(component.to_string()))? += n;
        Ok(out)
    }

    /// Twist every component by the same `n`.
    pub fn twist_all(&self, n: i64) -> Framing {
        let mut out = self.clone();
        out.offsets.values_mut().for_each(|v| *v += n);
        out
    }

    /// Total twist from `other` to `self`: `Σ_K (self[K] − other[K])`.
    pub fn difference(&self, other: &Framing) -> Result<i64, FramingError> {
        if self.link != other.link {
            return Err(FramingError::LinkMismatch);
        }
        Ok(self.total_offset() - other.total_offset())
    }

    pub fn restrict(&self, ids: &[String]) -> Result<Framing, FramingError> {
        let link = self.link.restrict(ids)?;
        let offsets = link
            .components
            .iter()
            .map(|c| (c.clone(), self.offsets[c]))
            .collect();
        Ok(Framing { link, offsets })
    }
}

/// `e(Σ, s)` recorded at one framing, from which every other framing's
/// value follows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelEulerDatum {
    pub surface_id: String,
    pub base_framing: Framing,
    pub e_base: i64,
}

/// `e(Σ, s) = e_base + Σ_K (s[K] − base[K])`.
pub fn euler_under_framing(d: &RelEulerDatum, s: &Framing) -> Result<i64, FramingError> {
    Ok(d.e_base + s.difference(&d.base_framing)?)
}

/// Hopf link components around a transverse double point.
pub const HOPF_COMPONENTS: [&str; 2] = ["K", "K'"];

/// The framings induced by the two spanning annuli of the Hopf link:
/// `fr_K = fr_K' = +1` and `fr_K = fr_K' = −1`.
pub fn hopf_seifert_framings() -> [Framing; 2] {
    let link = Link::new(HOPF_COMPONENTS, Ambient::S3).expect("distinct names");
    [1, -1].map(|v| {
        Framing::new(
            link.clone(),
            HOPF_COMPONENTS.iter().map(|c| (c.to_string(), v)).collect(),
        )
        .expect("offsets cover the link")
    })
}

/// `e₁ = e₀ + e_Z`, the relation forced by a cobordism extending `Z`.
pub fn boundary_euler_balance(e0: i64, e_z: i64, e1: i64) -> bool {
    e0.checked_add(e_z) == Some(e1)
}

/// `[Σ₀]·[Σ₁] ≡ e₀ ≡ e₁ (mod 2)`.
pub fn mod2_intersection_consistent(int01: i64, e0: i64, e1: i64) -> bool {
    let p = int01.rem_euclid(2);
    e0.rem_euclid(2) == p && e1.rem_euclid(2) == p
}
