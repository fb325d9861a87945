//! Normalization: finger moves and sign moves that bring a feasible diagram
//! to a state where every double point is of type I.
//!
//! Stages, in order:
//! 1. finger moves until `P^C ≥ |t_C|`;
//! 2. finger moves until `P^C ≡ t_C (mod 4)`;
//! 3. an initial sign table from a subset of multiplicities summing to
//!    `(P^C − t_C)/2`;
//! 4. removal of type IV, then type III, then type II points.
//!
//! Choices are deterministic: points are processed in ascending index, and a
//! finger-move partner is the lowest-index component of the lowest column
//! that is allowed.

use serde::{Deserialize, Serialize};

use super::moves::{flip_at, split_swap_at, state_hash, swap_at, Move, MoveTrace, TraceStep};
use super::{classify_type, infeasibility, DiagramError, DoublePointDiagram, Mode, PointType, Sign, SignTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub diagram: DoublePointDiagram,
    #[serde(skip)]
    pub signs: Option<SignTable>,
    pub assignment: Vec<Sign>,
    pub trace: MoveTrace,
}

impl Normalized {
    pub fn sign_table(&self) -> &SignTable {
        self.signs.as_ref().expect("normalization always produces signs")
    }
}

/// Normalize from an unsigned diagram.
pub fn normalize(d: &DoublePointDiagram) -> Result<Normalized, DiagramError> {
    if let Some(kind) = infeasibility(d) {
        return Err(DiagramError::Infeasible(kind));
    }
    let mut w = Work::new(d.clone(), None);
    w.pad_to_range()?;
    w.pad_to_residues()?;
    w.assign_initial_signs()?;
    w.eliminate()?;
    w.finish()
}

/// Normalize from a sign table that already meets every component target.
pub fn normalize_with_signs(d: &DoublePointDiagram, eps: &SignTable) -> Result<Normalized, DiagramError> {
    eps.check_shape(d)?;
    if !eps.satisfies(d) {
        return Err(DiagramError::SignTable(
            "component sums do not match the targets".into(),
        ));
    }
    if let Some(kind) = infeasibility(d) {
        return Err(DiagramError::Infeasible(kind));
    }
    let mut w = Work::new(d.clone(), Some(eps.clone()));
    w.trace.initial_signs = Some(eps.to_map(d));
    w.eliminate()?;
    w.finish()
}

struct Work {
    d: DoublePointDiagram,
    eps: Option<SignTable>,
    trace: MoveTrace,
}

fn internal(msg: impl Into<String>) -> DiagramError {
    DiagramError::Internal(msg.into())
}

impl Work {
    fn new(d: DoublePointDiagram, eps: Option<SignTable>) -> Self {
        Work {
            d,
            eps,
            trace: MoveTrace::default(),
        }
    }

    fn eps(&self) -> &SignTable {
        self.eps.as_ref().expect("signs assigned")
    }

    fn sign(&self, point: usize, c: usize) -> Sign {
        self.eps().get(point, c)
    }

    fn record(&mut self, op: Move) {
        let hash = state_hash(&self.d, self.eps.as_ref());
        let step = TraceStep { op, hash };
        if self.eps.is_some() {
            self.trace.moves.push(step);
        } else {
            self.trace.padding.push(step);
        }
    }

    fn cid(&self, c: usize) -> String {
        self.d.components[c].id.clone()
    }

    fn pid(&self, p: usize) -> String {
        self.d.points[p].id.clone()
    }

    /// Returns the new points, signed `+1` and `−1` respectively.
    fn finger(&mut self, a: usize, b: usize) -> Result<(usize, usize), DiagramError> {
        let pair = self.d.add_finger_pair(a, b)?;
        let m = self.d.components.len();
        if let Some(e) = &mut self.eps {
            e.push_point(m, Sign::Plus);
            e.push_point(m, Sign::Minus);
        }
        self.record(Move::FingerMove {
            a: self.cid(a),
            b: self.cid(b),
        });
        Ok(pair)
    }

    /// A fresh finger-move point between `a` and `b` carrying sign `s`.
    fn finger_point(&mut self, a: usize, b: usize, s: Sign) -> Result<usize, DiagramError> {
        let (plus, minus) = self.finger(a, b)?;
        Ok(if s == Sign::Plus { plus } else { minus })
    }

    fn swap(&mut self, c: usize, i: usize, j: usize) -> Result<(), DiagramError> {
        let eps = self.eps.as_mut().expect("signs assigned");
        swap_at(&self.d, eps, c, i, j)?;
        self.record(Move::SwapSigns {
            component: self.cid(c),
            i: self.pid(i),
            j: self.pid(j),
        });
        Ok(())
    }

    fn split(&mut self, c: usize, l: usize, s: usize, t: usize) -> Result<(), DiagramError> {
        let eps = self.eps.as_mut().expect("signs assigned");
        split_swap_at(&self.d, eps, c, l, s, t)?;
        self.record(Move::SplitSwap {
            component: self.cid(c),
            double: self.pid(l),
            s: self.pid(s),
            t: self.pid(t),
        });
        Ok(())
    }

    fn flip(&mut self, c: usize, i: usize) -> Result<(), DiagramError> {
        let eps = self.eps.as_mut().expect("signs assigned");
        flip_at(&self.d, eps, c, i)?;
        self.record(Move::FlipZero {
            component: self.cid(c),
            point: self.pid(i),
        });
        Ok(())
    }

    /// Lowest-index component in the lowest column other than `c`'s; `c`
    /// itself for a lone three-column component.
    fn partner(&self, c: usize) -> Result<usize, DiagramError> {
        if self.d.is_agnostic() {
            return Ok(c);
        }
        self.partner_avoiding(&[self.d.column(c)])
    }

    fn partner_avoiding(&self, columns: &[u8]) -> Result<usize, DiagramError> {
        (0..self.d.mode.columns())
            .filter(|col| !columns.contains(col))
            .find_map(|col| (0..self.d.components.len()).find(|&k| self.d.column(k) == col))
            .ok_or_else(|| internal(format!("no component outside columns {columns:?}")))
    }

    fn pad_to_range(&mut self) -> Result<(), DiagramError> {
        for c in 0..self.d.components.len() {
            while self.d.p_total(c) < self.d.target(c).abs() {
                let p = self.partner(c)?;
                self.finger(c, p)?;
            }
        }
        Ok(())
    }

    fn pad_to_residues(&mut self) -> Result<(), DiagramError> {
        let off: Vec<usize> = (0..self.d.components.len())
            .filter(|&c| (self.d.p_total(c) - self.d.target(c)).rem_euclid(4) != 0)
            .collect();
        if off.len() % 2 != 0 {
            return Err(internal("odd number of components off by 2 mod 4"));
        }
        for pair in off.chunks(2) {
            let (c, c2) = (pair[0], pair[1]);
            if self.d.finger_allowed(c, c2) && c != c2 {
                self.finger(c, c2)?;
            } else {
                let p = self.partner(c)?;
                self.finger(c, p)?;
                self.finger(c2, p)?;
            }
        }
        Ok(())
    }

    fn assign_initial_signs(&mut self) -> Result<(), DiagramError> {
        let mut eps = SignTable::uniform(&self.d, Sign::Plus);
        for c in 0..self.d.components.len() {
            let excess = self.d.p_total(c) - self.d.target(c);
            if excess < 0 || excess % 4 != 0 {
                return Err(internal(format!("component {} not padded", self.cid(c))));
            }
            // Choose points whose multiplicities sum to excess / 2; they get −1.
            let mut rem = excess / 2;
            for want in [2, 1] {
                for i in 0..self.d.n() {
                    if rem >= want && self.d.p(i, c) == want {
                        eps.set(i, c, Sign::Minus);
                        rem -= want;
                    }
                }
            }
            if rem != 0 {
                return Err(internal(format!("no subset for component {}", self.cid(c))));
            }
        }
        self.trace.initial_signs = Some(eps.to_map(&self.d));
        self.eps = Some(eps);
        Ok(())
    }

    fn first_of_type(&self, ty: PointType, skip: &[usize]) -> Option<usize> {
        (0..self.d.n()).find(|&i| !skip.contains(&i) && classify_type(&self.d, self.eps(), i) == ty)
    }

    /// First point, not in `skip`, joining distinct `a` and `b` with sign `s`
    /// at both ends.
    fn find_arc(&self, a: usize, b: usize, s: Sign, skip: &[usize]) -> Option<usize> {
        (0..self.d.n()).find(|&k| {
            let [x, y] = self.d.points[k].ends;
            !skip.contains(&k)
                && ((x == a && y == b) || (x == b && y == a))
                && self.sign(k, a) == s
                && self.sign(k, b) == s
        })
    }

    fn arc_or_finger(&mut self, a: usize, b: usize, s: Sign, skip: &[usize]) -> Result<usize, DiagramError> {
        match self.find_arc(a, b, s, skip) {
            Some(k) => Ok(k),
            None => self.finger_point(a, b, s),
        }
    }

    fn eliminate(&mut self) -> Result<(), DiagramError> {
        self.eliminate_type_iv()?;
        match self.d.mode {
            Mode::ThreeColumn => self.eliminate_type_iii_three()?,
            Mode::TwoColumn => self.eliminate_type_iii_two()?,
        }
        self.eliminate_type_ii()
    }

    fn eliminate_type_iv(&mut self) -> Result<(), DiagramError> {
        while let Some(i) = self.first_of_type(PointType::IV, &[]) {
            let [a, b] = self.d.points[i].ends;
            let c = a.min(b);
            let sigma = self.sign(i, c);
            let existing = (0..self.d.n()).find(|&j| {
                let [x, y] = self.d.points[j].ends;
                let other = if x == c { y } else { x };
                j != i
                    && self.d.p(j, c) == 1
                    && self.d.column(other) != self.d.column(c)
                    && self.sign(j, c) == -sigma
            });
            let j = match existing {
                Some(j) => j,
                None => {
                    let p = self.partner(c)?;
                    self.finger_point(c, p, -sigma)?
                }
            };
            self.swap(c, i, j)?;
        }
        Ok(())
    }

    fn eliminate_type_iii_three(&mut self) -> Result<(), DiagramError> {
        while let Some(i) = self.first_of_type(PointType::III, &[]) {
            let [a, b] = self.d.points[i].ends;
            let c = if self.d.column(a) <= self.d.column(b) { a } else { b };
            let sigma = self.sign(i, c);
            let j = self
                .first_of_type(PointType::III, &[i])
                .ok_or_else(|| internal("odd number of type III points"))?;
            let [x, y] = self.d.points[j].ends;
            let dd = if self.sign(j, x) == -sigma { x } else { y };
            let f = self.partner_avoiding(&[self.d.column(c), self.d.column(dd)])?;
            let s = self.arc_or_finger(c, f, -sigma, &[i, j])?;
            let t = self.arc_or_finger(dd, f, sigma, &[i, j, s])?;
            self.swap(c, i, s)?;
            self.swap(f, s, t)?;
            self.swap(dd, t, j)?;
        }
        Ok(())
    }

    /// Ends of a cross-column point, column 0 first.
    fn split_ends(&self, point: usize) -> (usize, usize) {
        let [a, b] = self.d.points[point].ends;
        if self.d.column(a) == 0 {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn eliminate_type_iii_two(&mut self) -> Result<(), DiagramError> {
        while let Some(i) = self.first_of_type(PointType::III, &[]) {
            let (c, c1) = self.split_ends(i);
            let sigma = self.sign(i, c);
            let others: Vec<usize> = (0..self.d.n())
                .filter(|&k| k != i && classify_type(&self.d, self.eps(), k) == PointType::III)
                .collect();
            if others.is_empty() {
                return Err(internal("odd number of type III points"));
            }

            // Another type III point whose column-0 end disagrees with C.
            if let Some(&j) = others.iter().find(|&&k| self.sign(k, self.split_ends(k).0) == -sigma) {
                let dd = self.split_ends(j).0;
                let l = self.arc_or_finger(c1, dd, sigma, &[i, j])?;
                self.swap(c1, i, l)?;
                self.swap(dd, j, l)?;
                continue;
            }

            let j = others[0];
            let (_, d1) = self.split_ends(j);
            let d0 = self.split_ends(j).0;
            // Side A is the column holding a same-column point signed against
            // the side's end of p_i: column 0 first, then column 1.
            let sides = [(0u8, sigma, c1, d1), (1u8, -sigma, c, d0)];
            let found = sides.iter().find_map(|&(col, tau, y, v)| {
                (0..self.d.n()).find_map(|l| {
                    let [e0, e1] = self.d.points[l].ends;
                    if self.d.column(e0) != col || self.d.column(e1) != col {
                        return None;
                    }
                    let f = [e0, e1].into_iter().find(|&e| self.sign(l, e) == -tau)?;
                    let g = if f == e0 { e1 } else { e0 };
                    Some((l, f, g, tau, y, v))
                })
            });
            let Some((l, f, g, tau, y, v)) = found else {
                return Err(internal(
                    "no same-column double point available to clear a type III pair",
                ));
            };
            if self.sign(l, g) != -tau {
                return Err(internal("same-column double point has disagreeing ends"));
            }
            let s = self.arc_or_finger(f, y, tau, &[i, j, l])?;
            let t = self.arc_or_finger(g, v, tau, &[i, j, l, s])?;
            self.swap(y, i, s)?;
            self.swap(v, j, t)?;
            if f == g {
                self.split(f, l, s, t)?;
            } else {
                self.swap(f, l, s)?;
                self.swap(g, l, t)?;
            }
        }
        Ok(())
    }

    fn eliminate_type_ii(&mut self) -> Result<(), DiagramError> {
        for i in 0..self.d.n() {
            if classify_type(&self.d, self.eps(), i) != PointType::II {
                continue;
            }
            let s = self.sign(i, self.d.points[i].ends[0]);
            for c in 0..self.d.components.len() {
                if self.sign(i, c) != s {
                    self.flip(c, i)?;
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<Normalized, DiagramError> {
        let eps = self.eps.ok_or_else(|| internal("signs never assigned"))?;
        let assignment = eps
            .uniform_vector()
            .ok_or_else(|| internal("a double point is not of type I"))?;
        if !eps.satisfies(&self.d) {
            return Err(internal("final signs miss a component target"));
        }
        Ok(Normalized {
            diagram: self.d,
            signs: Some(eps),
            assignment,
            trace: self.trace,
        })
    }
}
