//! Double-point diagrams: components arranged in columns, double points as
//! arcs between them, and per-component sign tables.
//!
//! `P^C_i` is the multiplicity of component `C` among the two ends of double
//! point `i`. A sign table assigns `ε^C_i ∈ {±1}` to every pair, including
//! pairs with `P^C_i = 0`.

mod moves;
mod normalize;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use moves::{flip_zero, replay, split_swap, swap_signs, state_hash, Move, MoveTrace, TraceStep};
pub use normalize::{normalize, normalize_with_signs, Normalized};
pub use oracle::{oracle_assign, ORACLE_LIMIT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown component {0:?}")]
    UnknownComponent(String),
    #[error("unknown double point {0:?}")]
    UnknownPoint(String),
    #[error("component {id:?} has column {column}, mode allows 0..{limit}")]
    ColumnOutOfRange { id: String, column: u8, limit: u8 },
    #[error("column {0} has no components")]
    EmptyColumn(u8),
    #[error("finger moves between {0:?} and {1:?} are not allowed: same column")]
    SameColumn(String, String),
    #[error("operation requires two-column mode")]
    WrongMode,
    #[error("parity condition fails for component {0:?}")]
    Parity(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("exhaustive search is limited to {limit} double points, got {n}")]
    TooManyPoints { n: usize, limit: usize },
    #[error("sign table: {0}")]
    SignTable(String),
    #[error("diagram is infeasible: {0}")]
    Infeasible(Infeasibility),
    #[error("trace replay diverged at step {step}: {reason}")]
    Replay { step: usize, reason: String },
    #[error("internal logic error: {0}")]
    Internal(String),
}

/// The condition a diagram fails when no sequence of moves can make it
/// uniformly signed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Infeasibility {
    Parity,
    Mod4,
    Range,
}

impl Infeasibility {
    pub fn name(self) -> &'static str {
        match self {
            Infeasibility::Parity => "parity",
            Infeasibility::Mod4 => "mod4",
            Infeasibility::Range => "range",
        }
    }
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TwoColumn,
    ThreeColumn,
}

impl Mode {
    pub fn columns(self) -> u8 {
        match self {
            Mode::TwoColumn => 2,
            Mode::ThreeColumn => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub id: String,
    pub column: u8,
    pub target: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoublePoint {
    pub id: String,
    /// Component indices of the two preimages.
    pub ends: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointType {
    I,
    II,
    III,
    IV,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramSpec", into = "DiagramSpec")]
pub struct DoublePointDiagram {
    mode: Mode,
    components: Vec<Component>,
    points: Vec<DoublePoint>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramSpec {
    mode: Mode,
    components: Vec<Component>,
    #[serde(default)]
    double_points: Vec<PointSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointSpec {
    id: String,
    ends: [String; 2],
}

impl TryFrom<DiagramSpec> for DoublePointDiagram {
    type Error = DiagramError;
    fn try_from(spec: DiagramSpec) -> Result<Self, DiagramError> {
        let index: BTreeMap<&str, usize> = spec
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.as_str(), i))
            .collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| DiagramError::UnknownComponent(id.to_string()))
        };
        let points = spec
            .double_points
            .iter()
            .map(|p| {
                Ok(DoublePoint {
                    id: p.id.clone(),
                    ends: [lookup(&p.ends[0])?, lookup(&p.ends[1])?],
                })
            })
            .collect::<Result<Vec<_>, DiagramError>>()?;
        DoublePointDiagram::new(spec.mode, spec.components, points)
    }
}

impl From<DoublePointDiagram> for DiagramSpec {
    fn from(d: DoublePointDiagram) -> Self {
        let double_points = d
            .points
            .iter()
            .map(|p| PointSpec {
                id: p.id.clone(),
                ends: p.ends.map(|c| d.components[c].id.clone()),
            })
            .collect();
        DiagramSpec {
            mode: d.mode,
            components: d.components,
            double_points,
        }
    }
}

impl DoublePointDiagram {
    pub fn new(mode: Mode, components: Vec<Component>, points: Vec<DoublePoint>) -> Result<Self, DiagramError> {
        let mut ids = BTreeSet::new();
        for c in &components {
            if !ids.insert(c.id.as_str()) {
                return Err(DiagramError::DuplicateId(c.id.clone()));
            }
            if c.column >= mode.columns() {
                return Err(DiagramError::ColumnOutOfRange {
                    id: c.id.clone(),
                    column: c.column,
                    limit: mode.columns(),
                });
            }
        }
        for p in &points {
            if !ids.insert(p.id.as_str()) {
                return Err(DiagramError::DuplicateId(p.id.clone()));
            }
            if let Some(&e) = p.ends.iter().find(|&&e| e >= components.len()) {
                return Err(DiagramError::UnknownComponent(format!("#{e}")));
            }
        }
        // A single component is column-agnostic in three-column mode.
        let agnostic = mode == Mode::ThreeColumn && components.len() == 1;
        if !components.is_empty() && !agnostic {
            for col in 0..mode.columns() {
                if components.iter().all(|c| c.column != col) {
                    return Err(DiagramError::EmptyColumn(col));
                }
            }
        }
        Ok(DoublePointDiagram {
            mode,
            components,
            points,
        })
    }

    /// Build from `(id, column, target)` triples and `(id, end, end)` arcs.
    pub fn build(
        mode: Mode,
        components: &[(&str, u8, i64)],
        points: &[(&str, &str, &str)],
    ) -> Result<Self, DiagramError> {
        let spec = DiagramSpec {
            mode,
            components: components
                .iter()
                .map(|&(id, column, target)| Component {
                    id: id.to_string(),
                    column,
                    target,
                })
                .collect(),
            double_points: points
                .iter()
                .map(|&(id, a, b)| PointSpec {
                    id: id.to_string(),
                    ends: [a.to_string(), b.to_string()],
                })
                .collect(),
        };
        spec.try_into()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn points(&self) -> &[DoublePoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn component_index(&self, id: &str) -> Result<usize, DiagramError> {
        self.components
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| DiagramError::UnknownComponent(id.to_string()))
    }

    pub fn point_index(&self, id: &str) -> Result<usize, DiagramError> {
        self.points
            .iter()
            .position(|p| p.id == id)
            .ok_or_else(|| DiagramError::UnknownPoint(id.to_string()))
    }

    fn is_agnostic(&self) -> bool {
        self.mode == Mode::ThreeColumn && self.components.len() == 1
    }

    /// `P^C_i`.
    pub fn p(&self, point: usize, component: usize) -> i64 {
        self.points[point].ends.iter().filter(|&&e| e == component).count() as i64
    }

    /// `P^C = Σ_i P^C_i`.
    pub fn p_total(&self, component: usize) -> i64 {
        self.points
            .iter()
            .map(|p| p.ends.iter().filter(|&&e| e == component).count() as i64)
            .sum()
    }

    pub fn target(&self, component: usize) -> i64 {
        self.components[component].target
    }

    pub fn column(&self, component: usize) -> u8 {
        self.components[component].column
    }

    /// Whether two distinct components share a column.
    fn same_column(&self, a: usize, b: usize) -> bool {
        self.components[a].column == self.components[b].column
    }

    /// Finger moves are allowed between components in different columns,
    /// and for a lone three-column component, with itself.
    pub fn finger_allowed(&self, a: usize, b: usize) -> bool {
        if self.is_agnostic() {
            return true;
        }
        !self.same_column(a, b)
    }

    /// Whether both ends of the point lie in one column.
    pub fn within_column(&self, point: usize) -> bool {
        let [a, b] = self.points[point].ends;
        self.same_column(a, b)
    }

    /// `T`: number of double points with both ends in one column.
    pub fn within_column_count(&self) -> usize {
        (0..self.n()).filter(|&i| self.within_column(i)).count()
    }

    /// `Δ = Σ_{column 0} t_C − Σ_{column 1} t_C`.
    pub fn column_delta(&self) -> i64 {
        self.components
            .iter()
            .map(|c| match c.column {
                0 => c.target,
                1 => -c.target,
                _ => 0,
            })
            .sum()
    }

    fn fresh_point_id(&self, counter: &mut usize) -> String {
        loop {
            *counter += 1;
            let id = format!("fm{counter}");
            if self.points.iter().all(|p| p.id != id) && self.components.iter().all(|c| c.id != id) {
                return id;
            }
        }
    }

    /// Append the two double points of a finger move between `a` and `b`.
    /// Returns their indices.
    pub(crate) fn add_finger_pair(&mut self, a: usize, b: usize) -> Result<(usize, usize), DiagramError> {
        if a >= self.components.len() || b >= self.components.len() {
            return Err(DiagramError::UnknownComponent(format!("#{}", a.max(b))));
        }
        if !self.finger_allowed(a, b) {
            return Err(DiagramError::SameColumn(
                self.components[a].id.clone(),
                self.components[b].id.clone(),
            ));
        }
        let mut counter = 0;
        let first = self.fresh_point_id(&mut counter);
        self.points.push(DoublePoint { id: first, ends: [a, b] });
        let second = self.fresh_point_id(&mut counter);
        self.points.push(DoublePoint { id: second, ends: [a, b] });
        Ok((self.n() - 2, self.n() - 1))
    }
}

/// `Σ_i P^C_i` for the named component.
pub fn p_count(d: &DoublePointDiagram, component: &str) -> Result<i64, DiagramError> {
    Ok(d.p_total(d.component_index(component)?))
}

/// Sign table `ε`, indexed `[point][component]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignTable {
    signs: Vec<Vec<Sign>>,
}

/// Interchange form: `{"p1": {"C": 1, "D": -1}}`.
pub type SignMap = BTreeMap<String, BTreeMap<String, Sign>>;

impl SignTable {
    pub fn uniform(d: &DoublePointDiagram, sign: Sign) -> Self {
        SignTable {
            signs: vec![vec![sign; d.components.len()]; d.n()],
        }
    }

    /// Table with `ε^C_i = v_i` for every component.
    pub fn from_vector(d: &DoublePointDiagram, v: &[Sign]) -> Result<Self, DiagramError> {
        if v.len() != d.n() {
            return Err(DiagramError::SignTable(format!(
                "vector has {} entries for {} double points",
                v.len(),
                d.n()
            )));
        }
        Ok(SignTable {
            signs: v.iter().map(|&s| vec![s; d.components.len()]).collect(),
        })
    }

    pub fn get(&self, point: usize, component: usize) -> Sign {
        self.signs[point][component]
    }

    pub fn set(&mut self, point: usize, component: usize, s: Sign) {
        self.signs[point][component] = s;
    }

    pub(crate) fn push_point(&mut self, components: usize, s: Sign) {
        self.signs.push(vec![s; components]);
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn from_map(d: &DoublePointDiagram, map: &SignMap) -> Result<Self, DiagramError> {
        for pid in map.keys() {
            d.point_index(pid)?;
        }
        let mut signs = Vec::with_capacity(d.n());
        for p in &d.points {
            let row = map
                .get(&p.id)
                .ok_or_else(|| DiagramError::SignTable(format!("no signs for double point {:?}", p.id)))?;
            for cid in row.keys() {
                d.component_index(cid)?;
            }
            signs.push(
                d.components
                    .iter()
                    .map(|c| {
                        row.get(&c.id).copied().ok_or_else(|| {
                            DiagramError::SignTable(format!("no sign for ({:?}, {:?})", p.id, c.id))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(SignTable { signs })
    }

    pub fn to_map(&self, d: &DoublePointDiagram) -> SignMap {
        d.points
            .iter()
            .zip(&self.signs)
            .map(|(p, row)| {
                (
                    p.id.clone(),
                    d.components.iter().zip(row).map(|(c, &s)| (c.id.clone(), s)).collect(),
                )
            })
            .collect()
    }

    fn check_shape(&self, d: &DoublePointDiagram) -> Result<(), DiagramError> {
        if self.signs.len() != d.n() || self.signs.iter().any(|r| r.len() != d.components.len()) {
            return Err(DiagramError::SignTable("table shape does not match the diagram".into()));
        }
        Ok(())
    }

    /// `Σ_i P^C_i ε^C_i` for every component.
    pub fn component_sums(&self, d: &DoublePointDiagram) -> Vec<i64> {
        let mut sums = vec![0; d.components.len()];
        for (i, p) in d.points.iter().enumerate() {
            for &c in &p.ends {
                sums[c] += self.signs[i][c].value();
            }
        }
        sums
    }

    /// Whether every component sum hits its target.
    pub fn satisfies(&self, d: &DoublePointDiagram) -> bool {
        self.component_sums(d)
            .iter()
            .zip(&d.components)
            .all(|(s, c)| *s == c.target)
    }

    /// The common sign of each point, when every point is of type I.
    pub fn uniform_vector(&self) -> Option<Vec<Sign>> {
        self.signs
            .iter()
            .map(|row| {
                let first = *row.first()?;
                row.iter().all(|&s| s == first).then_some(first)
            })
            .collect()
    }
}

/// Type of double point `i` under the sign table.
pub fn classify_type(d: &DoublePointDiagram, eps: &SignTable, i: usize) -> PointType {
    let row = &eps.signs[i];
    let all_agree = row.windows(2).all(|w| w[0] == w[1]);
    if all_agree {
        return PointType::I;
    }
    let [a, b] = d.points[i].ends;
    if a == b || row[a] == row[b] {
        return PointType::II;
    }
    if d.same_column(a, b) {
        PointType::IV
    } else {
        PointType::III
    }
}

/// `t_C ≡ P^C (mod 2)` for every component.
pub fn parity_valid(d: &DoublePointDiagram) -> bool {
    first_parity_failure(d).is_none()
}

fn first_parity_failure(d: &DoublePointDiagram) -> Option<usize> {
    (0..d.components.len()).find(|&c| (d.target(c) - d.p_total(c)).rem_euclid(2) != 0)
}

/// `Σ_C t_C ≡ 2n (mod 4)`. Errors when parity already fails.
pub fn feasible_three(d: &DoublePointDiagram) -> Result<bool, DiagramError> {
    if let Some(c) = first_parity_failure(d) {
        return Err(DiagramError::Parity(d.components[c].id.clone()));
    }
    let total: i64 = d.components.iter().map(|c| c.target).sum();
    Ok((total - 2 * d.n() as i64).rem_euclid(4) == 0)
}

/// `Δ ≡ 2T (mod 4)` and `|Δ| ≤ 2T`, together with [`feasible_three`].
pub fn feasible_two(d: &DoublePointDiagram) -> Result<bool, DiagramError> {
    if d.mode != Mode::TwoColumn {
        return Err(DiagramError::WrongMode);
    }
    Ok(feasible_three(d)? && two_column_residue(d).is_none())
}

fn two_column_residue(d: &DoublePointDiagram) -> Option<Infeasibility> {
    let t = 2 * d.within_column_count() as i64;
    let delta = d.column_delta();
    if (delta - t).rem_euclid(4) != 0 {
        Some(Infeasibility::Mod4)
    } else if delta.abs() > t {
        Some(Infeasibility::Range)
    } else {
        None
    }
}

/// The first failed feasibility condition, if any.
pub fn infeasibility(d: &DoublePointDiagram) -> Option<Infeasibility> {
    if !parity_valid(d) {
        return Some(Infeasibility::Parity);
    }
    if !feasible_three(d).unwrap_or(false) {
        return Some(Infeasibility::Mod4);
    }
    if d.mode == Mode::TwoColumn {
        return two_column_residue(d);
    }
    None
}

/// Apply a finger move between components `a` and `b`. The first new point
/// is signed `+1` and the second `−1` for every component.
pub fn finger_move(
    d: &DoublePointDiagram,
    eps: &SignTable,
    a: &str,
    b: &str,
) -> Result<(DoublePointDiagram, SignTable), DiagramError> {
    eps.check_shape(d)?;
    let (ai, bi) = (d.component_index(a)?, d.component_index(b)?);
    let mut d2 = d.clone();
    let mut e2 = eps.clone();
    d2.add_finger_pair(ai, bi)?;
    e2.push_point(d.components.len(), Sign::Plus);
    e2.push_point(d.components.len(), Sign::Minus);
    Ok((d2, e2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf_pair(t0: i64, t1: i64) -> DoublePointDiagram {
        DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("C", 0, t0), ("D", 1, t1)],
            &[("p1", "C", "D"), ("p2", "C", "D")],
        )
        .unwrap()
    }

    /// Type read straight off the case analysis, quantifying over all pairs.
    fn classify_by_definition(d: &DoublePointDiagram, eps: &SignTable, i: usize) -> PointType {
        let m = d.components().len();
        let mut disagree = false;
        let mut strong = Vec::new();
        for c in 0..m {
            for c2 in c + 1..m {
                if eps.get(i, c) != eps.get(i, c2) {
                    disagree = true;
                    if d.p(i, c) * d.p(i, c2) != 0 {
                        strong.push((c, c2));
                    }
                }
            }
        }
        if !disagree {
            PointType::I
        } else if strong.is_empty() {
            PointType::II
        } else if strong.iter().all(|&(c, c2)| d.column(c) != d.column(c2)) {
            PointType::III
        } else {
            PointType::IV
        }
    }

    #[test]
    fn p_count_examples() {
        let d = DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("A", 0, 0), ("B", 1, 0), ("C", 0, 0), ("E", 1, 0)],
            &[("p1", "A", "A"), ("p2", "B", "C"), ("p3", "C", "E")],
        )
        .unwrap();
        assert_eq!(p_count(&d, "E").unwrap(), 1);
        assert_eq!(p_count(&d, "A").unwrap(), 2);
        assert_eq!(p_count(&d, "C").unwrap(), 2);
        assert!(p_count(&d, "Z").is_err());
        let lone = DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("A", 0, 0), ("B", 1, 0)],
            &[("p1", "A", "A")],
        )
        .unwrap();
        assert_eq!(p_count(&lone, "B").unwrap(), 0);
    }

    #[test]
    fn classify_examples() {
        let d = hopf_pair(0, 0);
        let eps = SignTable::uniform(&d, Sign::Plus);
        assert_eq!(classify_type(&d, &eps, 0), PointType::I);
        let mut mixed = eps.clone();
        mixed.set(0, 1, Sign::Minus);
        assert_eq!(classify_type(&d, &mixed, 0), PointType::III);

        let within = DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("C", 0, 0), ("C'", 0, 0), ("D", 1, 0)],
            &[("p1", "C", "C'")],
        )
        .unwrap();
        let mut e = SignTable::uniform(&within, Sign::Plus);
        e.set(0, 1, Sign::Minus);
        assert_eq!(classify_type(&within, &e, 0), PointType::IV);
        let mut e2 = SignTable::uniform(&within, Sign::Plus);
        e2.set(0, 2, Sign::Minus);
        assert_eq!(classify_type(&within, &e2, 0), PointType::II);
    }

    #[test]
    fn classification_agrees_with_definition() {
        let d = DoublePointDiagram::build(
            Mode::ThreeColumn,
            &[("A", 0, 0), ("B", 1, 0), ("C", 2, 0), ("A2", 0, 0)],
            &[("p1", "A", "A2"), ("p2", "A", "B"), ("p3", "C", "C")],
        )
        .unwrap();
        for mask in 0u32..(1 << 12) {
            let mut eps = SignTable::uniform(&d, Sign::Plus);
            for bit in 0..12 {
                if mask >> bit & 1 == 1 {
                    eps.set(bit / 4, bit % 4, Sign::Minus);
                }
            }
            for i in 0..3 {
                assert_eq!(classify_type(&d, &eps, i), classify_by_definition(&d, &eps, i));
            }
        }
    }

    #[test]
    fn parity_and_feasibility_examples() {
        assert!(parity_valid(&hopf_pair(0, 0)));
        let one = DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("C", 0, 1), ("D", 1, 1)],
            &[("p1", "C", "D")],
        )
        .unwrap();
        assert!(parity_valid(&one));
        assert!(feasible_three(&one).unwrap());
        let bad = hopf_pair(1, 0);
        assert!(!parity_valid(&bad));
        assert!(matches!(feasible_three(&bad), Err(DiagramError::Parity(_))));

        let empty = DoublePointDiagram::build(Mode::ThreeColumn, &[("S", 0, 0)], &[]).unwrap();
        assert!(feasible_three(&empty).unwrap());
        let zero = DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("C", 0, -1), ("D", 1, 1)],
            &[("p1", "C", "D")],
        )
        .unwrap();
        assert!(!feasible_three(&zero).unwrap());
    }

    #[test]
    fn feasible_two_examples() {
        // T = 1 with Δ = ±2 is feasible, Δ = 0 is not.
        let mk = |t0, t1| {
            DoublePointDiagram::build(
                Mode::TwoColumn,
                &[("C", 0, t0), ("D", 1, t1)],
                &[("p1", "C", "C")],
            )
            .unwrap()
        };
        assert!(feasible_two(&mk(2, 0)).unwrap());
        assert!(feasible_two(&mk(-2, 0)).unwrap());
        assert!(!feasible_two(&mk(0, 0)).unwrap());
        // T = 0 forces Δ = 0.
        assert!(feasible_two(&hopf_pair(2, 2)).unwrap());
        assert!(!feasible_two(&hopf_pair(2, -2)).unwrap());
        let three = DoublePointDiagram::build(Mode::ThreeColumn, &[("S", 0, 0)], &[]).unwrap();
        assert_eq!(feasible_two(&three), Err(DiagramError::WrongMode));
    }

    #[test]
    fn finger_move_properties() {
        let d = hopf_pair(0, 0);
        let mut eps = SignTable::uniform(&d, Sign::Plus);
        eps.set(1, 0, Sign::Minus);
        eps.set(1, 1, Sign::Minus);
        let (d2, e2) = finger_move(&d, &eps, "C", "D").unwrap();
        assert_eq!(d2.n(), d.n() + 2);
        assert_eq!(e2.component_sums(&d2), eps.component_sums(&d));
        assert_eq!(classify_type(&d2, &e2, 2), PointType::I);
        assert_eq!(classify_type(&d2, &e2, 3), PointType::I);
        assert_eq!(d2.p_total(0), d.p_total(0) + 2);
        assert_eq!(finger_move(&d, &eps, "C", "C").unwrap_err(), DiagramError::SameColumn("C".into(), "C".into()));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"mode":"two_column","components":[{"id":"C","column":0,"target":2},{"id":"D","column":1,"target":0}],"double_points":[{"id":"p1","ends":["C","D"]}]}"#;
        let d: DoublePointDiagram = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), text);
        let eps = SignTable::uniform(&d, Sign::Minus);
        let map = eps.to_map(&d);
        assert_eq!(serde_json::to_string(&map).unwrap(), r#"{"p1":{"C":-1,"D":-1}}"#);
        assert_eq!(SignTable::from_map(&d, &map).unwrap(), eps);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            DoublePointDiagram::build(Mode::TwoColumn, &[("C", 0, 0)], &[]),
            Err(DiagramError::EmptyColumn(1))
        ));
        assert!(matches!(
            DoublePointDiagram::build(Mode::TwoColumn, &[("C", 0, 0), ("D", 2, 0)], &[]),
            Err(DiagramError::ColumnOutOfRange { .. })
        ));
        assert!(matches!(
            DoublePointDiagram::build(Mode::TwoColumn, &[("C", 0, 0), ("D", 1, 0)], &[("p", "C", "X")]),
            Err(DiagramError::UnknownComponent(_))
        ));
        assert!(matches!(
            DoublePointDiagram::build(Mode::TwoColumn, &[("C", 0, 0), ("C", 1, 0)], &[]),
            Err(DiagramError::DuplicateId(_))
        ));
        assert!(DoublePointDiagram::build(Mode::ThreeColumn, &[("S", 2, 0)], &[("p", "S", "S")]).is_ok());
        assert!(DoublePointDiagram::build(Mode::TwoColumn, &[], &[]).is_ok());
    }
}
