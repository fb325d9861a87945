//! Sign moves, move traces, and trace replay.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DiagramError, DoublePointDiagram, Sign, SignMap, SignTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    FingerMove {
        a: String,
        b: String,
    },
    SwapSigns {
        component: String,
        i: String,
        j: String,
    },
    /// Negate `ε^C_ℓ` with `P^C_ℓ = 2` against two entries `s`, `t` with
    /// `P = 1` and the opposite sign. Leaves `Σ_i P^C_i ε^C_i` unchanged.
    SplitSwap {
        component: String,
        double: String,
        s: String,
        t: String,
    },
    FlipZero {
        component: String,
        point: String,
    },
}

/// One applied move with the hash of the state it produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(flatten)]
    pub op: Move,
    pub hash: String,
}

/// Finger moves applied before signs exist, the sign table they were
/// followed by, and the moves applied after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct MoveTrace {
    #[serde(default)]
    pub padding: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_signs: Option<SignMap>,
    #[serde(default)]
    pub moves: Vec<TraceStep>,
}

impl MoveTrace {
    /// No finger moves and no sign moves.
    pub fn is_empty(&self) -> bool {
        self.padding.is_empty() && self.moves.is_empty()
    }

    pub fn len(&self) -> usize {
        self.padding.len() + self.moves.len()
    }

    pub fn finger_moves(&self) -> usize {
        self.padding
            .iter()
            .chain(&self.moves)
            .filter(|s| matches!(s.op, Move::FingerMove { .. }))
            .count()
    }
}

/// SHA-256 of the canonical JSON of the diagram and, if present, its signs.
pub fn state_hash(d: &DoublePointDiagram, eps: Option<&SignTable>) -> String {
    let state = serde_json::json!({
        "diagram": d,
        "signs": eps.map(|e| e.to_map(d)),
    });
    let text = serde_json::to_string(&state).expect("diagram state serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub(crate) fn swap_at(
    d: &DoublePointDiagram,
    eps: &mut SignTable,
    c: usize,
    i: usize,
    j: usize,
) -> Result<(), DiagramError> {
    if i >= d.n() || j >= d.n() {
        return Err(DiagramError::UnknownPoint(format!("#{}", i.max(j))));
    }
    if d.p(i, c) != d.p(j, c) {
        return Err(DiagramError::IllegalMove(format!(
            "swap on {:?} needs equal multiplicities at {:?} and {:?}",
            d.components[c].id, d.points[i].id, d.points[j].id
        )));
    }
    if eps.get(i, c) != -eps.get(j, c) {
        return Err(DiagramError::IllegalMove(format!(
            "swap on {:?} needs opposite signs at {:?} and {:?}",
            d.components[c].id, d.points[i].id, d.points[j].id
        )));
    }
    let (a, b) = (eps.get(i, c), eps.get(j, c));
    eps.set(i, c, b);
    eps.set(j, c, a);
    Ok(())
}

pub(crate) fn split_swap_at(
    d: &DoublePointDiagram,
    eps: &mut SignTable,
    c: usize,
    l: usize,
    s: usize,
    t: usize,
) -> Result<(), DiagramError> {
    let legal = s != t
        && d.p(l, c) == 2
        && d.p(s, c) == 1
        && d.p(t, c) == 1
        && eps.get(s, c) == -eps.get(l, c)
        && eps.get(t, c) == -eps.get(l, c);
    if !legal {
        return Err(DiagramError::IllegalMove(format!(
            "split swap on {:?} needs P = 2 at {:?}, P = 1 at {:?} and {:?}, opposite signs",
            d.components[c].id, d.points[l].id, d.points[s].id, d.points[t].id
        )));
    }
    for p in [l, s, t] {
        eps.set(p, c, -eps.get(p, c));
    }
    Ok(())
}

pub(crate) fn flip_at(d: &DoublePointDiagram, eps: &mut SignTable, c: usize, i: usize) -> Result<(), DiagramError> {
    if d.p(i, c) != 0 {
        return Err(DiagramError::IllegalMove(format!(
            "flip needs P = 0, {:?} meets {:?}",
            d.components[c].id, d.points[i].id
        )));
    }
    eps.set(i, c, -eps.get(i, c));
    Ok(())
}

/// Exchange `ε^C_i` and `ε^C_j`. Requires `P^C_i = P^C_j` and opposite signs.
pub fn swap_signs(
    d: &DoublePointDiagram,
    eps: &SignTable,
    component: &str,
    i: &str,
    j: &str,
) -> Result<SignTable, DiagramError> {
    eps.check_shape(d)?;
    let mut out = eps.clone();
    swap_at(d, &mut out, d.component_index(component)?, d.point_index(i)?, d.point_index(j)?)?;
    Ok(out)
}

pub fn split_swap(
    d: &DoublePointDiagram,
    eps: &SignTable,
    component: &str,
    double: &str,
    s: &str,
    t: &str,
) -> Result<SignTable, DiagramError> {
    eps.check_shape(d)?;
    let mut out = eps.clone();
    split_swap_at(
        d,
        &mut out,
        d.component_index(component)?,
        d.point_index(double)?,
        d.point_index(s)?,
        d.point_index(t)?,
    )?;
    Ok(out)
}

/// Negate `ε^C_i` where `P^C_i = 0`.
pub fn flip_zero(d: &DoublePointDiagram, eps: &SignTable, component: &str, i: &str) -> Result<SignTable, DiagramError> {
    eps.check_shape(d)?;
    let mut out = eps.clone();
    flip_at(d, &mut out, d.component_index(component)?, d.point_index(i)?)?;
    Ok(out)
}

pub(crate) fn apply(
    d: &mut DoublePointDiagram,
    eps: Option<&mut SignTable>,
    op: &Move,
) -> Result<(), DiagramError> {
    match (op, eps) {
        (Move::FingerMove { a, b }, eps) => {
            let (ai, bi) = (d.component_index(a)?, d.component_index(b)?);
            d.add_finger_pair(ai, bi)?;
            if let Some(e) = eps {
                e.push_point(d.components.len(), Sign::Plus);
                e.push_point(d.components.len(), Sign::Minus);
            }
            Ok(())
        }
        (_, None) => Err(DiagramError::IllegalMove("sign move before signs were assigned".into())),
        (Move::SwapSigns { component, i, j }, Some(e)) => {
            let (c, i, j) = (d.component_index(component)?, d.point_index(i)?, d.point_index(j)?);
            swap_at(d, e, c, i, j)
        }
        (Move::SplitSwap { component, double, s, t }, Some(e)) => {
            let c = d.component_index(component)?;
            let (l, s, t) = (d.point_index(double)?, d.point_index(s)?, d.point_index(t)?);
            split_swap_at(d, e, c, l, s, t)
        }
        (Move::FlipZero { component, point }, Some(e)) => {
            let (c, i) = (d.component_index(component)?, d.point_index(point)?);
            flip_at(d, e, c, i)
        }
    }
}

/// Re-apply a trace to its initial diagram, checking every recorded hash.
pub fn replay(
    initial: &DoublePointDiagram,
    trace: &MoveTrace,
) -> Result<(DoublePointDiagram, Option<SignTable>), DiagramError> {
    let mut d = initial.clone();
    for (k, step) in trace.padding.iter().enumerate() {
        if !matches!(step.op, Move::FingerMove { .. }) {
            return Err(DiagramError::Replay {
                step: k,
                reason: "only finger moves may precede the sign table".into(),
            });
        }
        apply(&mut d, None, &step.op).map_err(|e| DiagramError::Replay {
            step: k,
            reason: e.to_string(),
        })?;
        check_hash(k, &step.hash, state_hash(&d, None))?;
    }
    let offset = trace.padding.len();
    let Some(map) = &trace.initial_signs else {
        if trace.moves.is_empty() {
            return Ok((d, None));
        }
        return Err(DiagramError::Replay {
            step: offset,
            reason: "sign moves without an initial sign table".into(),
        });
    };
    let mut eps = SignTable::from_map(&d, map)?;
    for (k, step) in trace.moves.iter().enumerate() {
        apply(&mut d, Some(&mut eps), &step.op).map_err(|e| DiagramError::Replay {
            step: offset + k,
            reason: e.to_string(),
        })?;
        check_hash(offset + k, &step.hash, state_hash(&d, Some(&eps)))?;
    }
    Ok((d, Some(eps)))
}

fn check_hash(step: usize, recorded: &str, actual: String) -> Result<(), DiagramError> {
    if recorded != actual {
        return Err(DiagramError::Replay {
            step,
            reason: format!("hash {actual} differs from recorded {recorded}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::Mode;

    fn diagram() -> DoublePointDiagram {
        DoublePointDiagram::build(
            Mode::TwoColumn,
            &[("C", 0, 0), ("D", 1, 0), ("E", 0, 0)],
            &[("p1", "C", "D"), ("p2", "C", "D"), ("p3", "C", "C"), ("p4", "C", "C"), ("p5", "E", "D")],
        )
        .unwrap()
    }

    fn signs(d: &DoublePointDiagram, minus: &[(usize, usize)]) -> SignTable {
        let mut e = SignTable::uniform(d, Sign::Plus);
        for &(i, c) in minus {
            e.set(i, c, Sign::Minus);
        }
        e
    }

    #[test]
    fn swap_examples() {
        let d = diagram();
        let e = signs(&d, &[(1, 0)]);
        let out = swap_signs(&d, &e, "C", "p1", "p2").unwrap();
        assert_eq!(out.get(0, 0), Sign::Minus);
        assert_eq!(out.get(1, 0), Sign::Plus);
        assert_eq!(out.component_sums(&d), e.component_sums(&d));

        let e2 = signs(&d, &[(3, 0)]);
        let out2 = swap_signs(&d, &e2, "C", "p3", "p4").unwrap();
        assert_eq!(out2.component_sums(&d), e2.component_sums(&d));

        assert!(matches!(swap_signs(&d, &e2, "C", "p1", "p4"), Err(DiagramError::IllegalMove(_))));
        assert!(swap_signs(&d, &e, "C", "p1", "p5").is_err());
    }

    #[test]
    fn flip_examples() {
        let d = diagram();
        let e = SignTable::uniform(&d, Sign::Plus);
        let out = flip_zero(&d, &e, "E", "p1").unwrap();
        assert_eq!(out.component_sums(&d), e.component_sums(&d));
        assert!(flip_zero(&d, &e, "C", "p1").is_err());
    }

    #[test]
    fn split_swap_preserves_sums() {
        let d = diagram();
        let e = signs(&d, &[(2, 0)]);
        let out = split_swap(&d, &e, "C", "p3", "p1", "p2").unwrap();
        assert_eq!(out.component_sums(&d), e.component_sums(&d));
        assert_eq!(out.get(2, 0), Sign::Plus);
        assert!(split_swap(&d, &e, "C", "p3", "p1", "p1").is_err());
    }

    #[test]
    fn replay_detects_tampering() {
        let d = diagram();
        let mut d1 = d.clone();
        apply(&mut d1, None, &Move::FingerMove { a: "C".into(), b: "D".into() }).unwrap();
        let eps = SignTable::uniform(&d1, Sign::Plus);
        let mut trace = MoveTrace {
            padding: vec![TraceStep {
                op: Move::FingerMove { a: "C".into(), b: "D".into() },
                hash: state_hash(&d1, None),
            }],
            initial_signs: Some(eps.to_map(&d1)),
            moves: Vec::new(),
        };
        let (out, e) = replay(&d, &trace).unwrap();
        assert_eq!(out, d1);
        assert_eq!(e.unwrap(), eps);
        trace.padding[0].hash = "00".into();
        assert!(matches!(replay(&d, &trace), Err(DiagramError::Replay { step: 0, .. })));
    }

    #[test]
    fn move_json() {
        let step = TraceStep {
            op: Move::SwapSigns {
                component: "C".into(),
                i: "p1".into(),
                j: "p2".into(),
            },
            hash: "ab".into(),
        };
        let text = serde_json::to_string(&step).unwrap();
        assert_eq!(text, r#"{"op":"swap_signs","component":"C","i":"p1","j":"p2","hash":"ab"}"#);
        assert_eq!(serde_json::from_str::<TraceStep>(&text).unwrap(), step);
    }
}
