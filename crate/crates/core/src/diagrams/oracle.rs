//! Exhaustive search for a component-independent sign vector.

use super::{DiagramError, DoublePointDiagram, Sign};

/// Largest number of double points the oracle accepts.
pub const ORACLE_LIMIT: usize = 24;

/// The lexicographically first `(ε₁, …, εₙ)`, ordering `+1` before `−1`,
/// with `Σ_i P^C_i ε_i = t_C` for every component, or `None`.
pub fn oracle_assign(d: &DoublePointDiagram) -> Result<Option<Vec<Sign>>, DiagramError> {
    let n = d.n();
    if n > ORACLE_LIMIT {
        return Err(DiagramError::TooManyPoints { n, limit: ORACLE_LIMIT });
    }
    let m = d.components().len();
    // remaining[i][c]: Σ_{k ≥ i} P^C_k, the most the suffix can still move C.
    let mut remaining = vec![vec![0i64; m]; n + 1];
    for i in (0..n).rev() {
        remaining[i] = remaining[i + 1].clone();
        for &c in &d.points()[i].ends {
            remaining[i][c] += 1;
        }
    }
    let mut need: Vec<i64> = (0..m).map(|c| d.target(c)).collect();
    let mut chosen = Vec::with_capacity(n);
    Ok(search(d, &remaining, &mut need, &mut chosen).then_some(chosen))
}

fn search(d: &DoublePointDiagram, remaining: &[Vec<i64>], need: &mut [i64], chosen: &mut Vec<Sign>) -> bool {
    let i = chosen.len();
    let reachable = need
        .iter()
        .zip(&remaining[i])
        .all(|(&r, &cap)| r.abs() <= cap && (cap - r).rem_euclid(2) == 0);
    if !reachable {
        return false;
    }
    if i == d.n() {
        return true;
    }
    let [a, b] = d.points()[i].ends;
    for s in [Sign::Plus, Sign::Minus] {
        need[a] -= s.value();
        need[b] -= s.value();
        chosen.push(s);
        if search(d, remaining, need, chosen) {
            return true;
        }
        chosen.pop();
        need[a] += s.value();
        need[b] += s.value();
    }
    false
}
