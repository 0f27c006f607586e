//! Small dense linear programs solved exactly over the rationals.
//!
//! Two-phase primal simplex on a full tableau with Bland's rule, so it
//! terminates on degenerate problems. Intended for the few dozen variables
//! the max-flow enumeration produces per support labeling.

use num_traits::{Signed, Zero};

use crate::rational::{zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// `maximize objective · x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
    #[error("variable index {0} out of range")]
    BadVariable(usize),
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            ..Default::default()
        }
    }

    pub fn add_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn constrain(&mut self, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        self.constraints.push(Constraint { terms, sense, rhs });
    }

    pub fn maximize(&self) -> Result<LpOutcome, LpError> {
        Tableau::build(self)?.solve(self.num_vars)
    }
}

const MAX_PIVOTS: usize = 50_000;
const DEGENERATE_RUN: usize = 32;

struct Tableau {
    /// `rows[i]` has `cols + 1` entries; the last one is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    first_artificial: usize,
    objective: Vec<Rational>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Self, LpError> {
        let n = lp.num_vars;
        let mut slack_count = 0;
        let mut art_count = 0;
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            match (c.sense, flip) {
                (Sense::Le, false) | (Sense::Ge, true) => slack_count += 1,
                (Sense::Ge, false) | (Sense::Le, true) => {
                    slack_count += 1;
                    art_count += 1
                }
                (Sense::Eq, _) => art_count += 1,
            }
        }
        let first_artificial = n + slack_count;
        let cols = first_artificial + art_count;
        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut basis = Vec::with_capacity(lp.constraints.len());
        let (mut next_slack, mut next_art) = (n, first_artificial);
        for c in &lp.constraints {
            let mut row = vec![zero(); cols + 1];
            let flip = c.rhs.is_negative();
            for (j, a) in &c.terms {
                if *j >= n {
                    return Err(LpError::BadVariable(*j));
                }
                if flip {
                    row[*j] -= a;
                } else {
                    row[*j] += a;
                }
            }
            row[cols] = if flip { -c.rhs.clone() } else { c.rhs.clone() };
            let sense = match (c.sense, flip) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            };
            match sense {
                Sense::Le => {
                    row[next_slack] = Rational::from_integer(1.into());
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    row[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = Rational::from_integer(1.into());
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        let mut objective = vec![zero(); cols];
        for (j, a) in &lp.objective {
            if *j >= n {
                return Err(LpError::BadVariable(*j));
            }
            objective[*j] += a;
        }
        Ok(Tableau {
            rows,
            basis,
            cols,
            first_artificial,
            objective,
        })
    }

    /// Reduced costs `c_j - c_B · column_j` for the given cost vector.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut r: Vec<Rational> = cost.to_vec();
        r.push(zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    r[j] -= cb * a;
                }
            }
        }
        r
    }

    fn pivot(&mut self, reduced: &mut [Rational], pr: usize, pc: usize) {
        let p = self.rows[pr][pc].clone();
        for a in self.rows[pr].iter_mut() {
            if !a.is_zero() {
                *a /= &p;
            }
        }
        let pivot_row = self.rows[pr].clone();
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == pr || row[pc].is_zero() {
                continue;
            }
            let factor = row[pc].clone();
            for &j in &nz {
                row[j] -= &factor * &pivot_row[j];
            }
        }
        if !reduced[pc].is_zero() {
            let factor = reduced[pc].clone();
            for &j in &nz {
                reduced[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations on columns `< allowed`. Returns false if unbounded.
    fn iterate(
        &mut self,
        reduced: &mut [Rational],
        allowed: usize,
        pivots: &mut usize,
    ) -> Result<bool, LpError> {
        // Dantzig's rule, falling back to Bland's after a run of degenerate pivots.
        let mut degenerate = 0;
        loop {
            let entering = if degenerate < DEGENERATE_RUN {
                (0..allowed).filter(|&j| reduced[j].is_positive()).fold(
                    None,
                    |best: Option<usize>, j| match best {
                        Some(b) if reduced[b] >= reduced[j] => Some(b),
                        _ => Some(j),
                    },
                )
            } else {
                (0..allowed).find(|&j| reduced[j].is_positive())
            };
            let Some(pc) = entering else {
                return Ok(true);
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[pc].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[pc];
                let take = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if take {
                    best = Some((i, ratio));
                }
            }
            let Some((pr, ratio)) = best else {
                return Ok(false);
            };
            if ratio.is_zero() {
                degenerate += 1;
            } else if degenerate < DEGENERATE_RUN {
                degenerate = 0;
            }
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit(MAX_PIVOTS));
            }
            self.pivot(reduced, pr, pc);
        }
    }

    fn solve(mut self, num_vars: usize) -> Result<LpOutcome, LpError> {
        let mut pivots = 0;
        if self.first_artificial < self.cols {
            let mut phase1 = vec![zero(); self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = Rational::from_integer((-1).into());
            }
            let mut reduced = self.reduced_costs(&phase1);
            self.iterate(&mut reduced, self.cols, &mut pivots)?;
            // reduced[cols] holds -(phase-1 objective value)
            let infeasibility: Rational = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.first_artificial)
                .map(|(row, _)| row[self.cols].clone())
                .sum();
            if infeasibility.is_positive() {
                return Ok(LpOutcome::Infeasible);
            }
            // Drive zero-valued artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => {
                            let mut dummy = vec![zero(); self.cols + 1];
                            self.pivot(&mut dummy, i, j);
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let cost = self.objective.clone();
        let mut reduced = self.reduced_costs(&cost);
        if !self.iterate(&mut reduced, self.first_artificial, &mut pivots)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![zero(); num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                x[b] = self.rows[i][self.cols].clone();
            }
        }
        let value = cost.iter().take(num_vars).zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpOutcome::Optimal { x, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![(0, int(3)), (1, int(5))];
        lp.constrain(vec![(0, int(1))], Sense::Le, int(4));
        lp.constrain(vec![(1, int(2))], Sense::Le, int(12));
        lp.constrain(vec![(0, int(3)), (1, int(2))], Sense::Le, int(18));
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, int(36));
                assert_eq!(x, vec![int(2), int(6)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equalities_and_fractions() {
        // max x + y, x + 2y = 3, x - y >= -1/2, x <= 5/2
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![(0, int(1)), (1, int(1))];
        lp.constrain(vec![(0, int(1)), (1, int(2))], Sense::Eq, int(3));
        lp.constrain(vec![(0, int(1)), (1, int(-1))], Sense::Ge, q(-1, 2));
        lp.constrain(vec![(0, int(1))], Sense::Le, q(5, 2));
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(5, 2), q(1, 4)]);
                assert_eq!(value, q(11, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![(0, int(1))];
        lp.constrain(vec![(0, int(1))], Sense::Ge, int(2));
        lp.constrain(vec![(0, int(1))], Sense::Le, int(1));
        assert_eq!(lp.maximize().unwrap(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.objective = vec![(0, int(1))];
        lp.constrain(vec![(0, int(1)), (1, int(-1))], Sense::Le, int(1));
        assert_eq!(lp.maximize().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![(1, int(1))];
        lp.constrain(vec![(0, int(1)), (1, int(1))], Sense::Eq, int(2));
        lp.constrain(vec![(0, int(2)), (1, int(2))], Sense::Eq, int(4));
        lp.constrain(vec![(0, int(1))], Sense::Ge, q(1, 3));
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(5, 3)),
            other => panic!("{other:?}"),
        }
    }

    /// Brute force over vertices of a 2-variable LP: every pair of tight
    /// constraints (including x >= 0, y >= 0) is intersected and the best
    /// feasible intersection kept.
    fn brute_2d(
        rows: &[(Rational, Rational, Rational)],
        c: (Rational, Rational),
    ) -> Option<Rational> {
        let mut lines = rows.to_vec();
        lines.push((int(-1), int(0), int(0)));
        lines.push((int(0), int(-1), int(0)));
        let feasible =
            |x: &Rational, y: &Rational| lines.iter().all(|(a, b, r)| &(a * x + b * y) <= r);
        let mut best: Option<Rational> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, r1) = &lines[i];
                let (a2, b2, r2) = &lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let x = (r1 * b2 - r2 * b1) / &det;
                let y = (a1 * r2 - a2 * r1) / &det;
                if feasible(&x, &y) {
                    let v = &c.0 * &x + &c.1 * &y;
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    proptest::proptest! {
        #[test]
        fn matches_vertex_enumeration(
            coeffs in proptest::collection::vec((-4i64..5, -4i64..5, 0i64..9), 1..5),
            c in (-3i64..4, -3i64..4),
        ) {
            // Box keeps everything bounded.
            let mut rows: Vec<_> = coeffs.iter().map(|&(a, b, r)| (int(a), int(b), int(r))).collect();
            rows.push((int(1), int(0), int(6)));
            rows.push((int(0), int(1), int(6)));
            let mut lp = LinearProgram::new(2);
            lp.objective = vec![(0, int(c.0)), (1, int(c.1))];
            for (a, b, r) in &rows {
                lp.constrain(vec![(0, a.clone()), (1, b.clone())], Sense::Le, r.clone());
            }
            let expected = brute_2d(&rows, (int(c.0), int(c.1)));
            match lp.maximize().unwrap() {
                LpOutcome::Optimal { value, .. } => proptest::prop_assert_eq!(Some(value), expected),
                LpOutcome::Infeasible => proptest::prop_assert_eq!(None, expected),
                LpOutcome::Unbounded => proptest::prop_assert!(false, "box-bounded LP reported unbounded"),
            }
        }
    }
}
