//! Exact feasibility of `Ax = b, x ≥ 0` by phase-one simplex with Bland's rule.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Equality constraints over nonnegative variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinSystem {
    pub vars: usize,
    pub rows: Vec<(Vec<Rational>, Rational)>,
}

impl LinSystem {
    pub fn new(vars: usize) -> Self {
        LinSystem { vars, rows: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.rows.push((coeffs, rhs));
    }

    /// Add `Σ_{j ∈ vars} x_j = rhs`.
    pub fn push_sum(&mut self, vars: impl IntoIterator<Item = usize>, rhs: Rational) {
        let mut c = vec![Rational::zero(); self.vars];
        for j in vars {
            c[j] = Rational::one();
        }
        self.rows.push((c, rhs));
    }

    /// `true` if `x` is nonnegative and satisfies every row exactly.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|(c, b)| c.iter().zip(x).map(|(a, v)| a * v).sum::<Rational>() == *b)
    }
}

/// A nonnegative solution, or `None` when the system is infeasible.
pub fn feasible(sys: &LinSystem) -> Result<Option<Vec<Rational>>> {
    let n = sys.vars;
    let m = sys.rows.len();
    if sys.rows.iter().any(|(c, _)| c.len() != n) {
        return Err(Error::Model("constraint width differs from the variable count".into()));
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (c, b)) in sys.rows.iter().enumerate() {
        let flip = b.is_negative();
        let mut row = vec![Rational::zero(); width];
        for (j, a) in c.iter().enumerate() {
            row[j] = if flip { -a.clone() } else { a.clone() };
        }
        row[n + i] = Rational::one();
        row[rhs] = if flip { -b.clone() } else { b.clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // w = d[rhs] - Σ d_j v_j, w being the sum of the artificials
    let mut d = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            d[j] += &row[j];
        }
        d[rhs] += &row[rhs];
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| d[j].is_positive() && !basis.contains(&j)) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one objective is bounded below");
        let p = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &(&f * pv);
                }
            }
        }
        if !d[enter].is_zero() {
            let f = d[enter].clone();
            for (v, pv) in d.iter_mut().zip(&pivot_row) {
                *v -= &(&f * pv);
            }
        }
        basis[r] = enter;
    }
    if !d[rhs].is_zero() {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][rhs].clone();
        }
    }
    assert!(sys.satisfied_by(&x), "simplex returned a non-solution");
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn sys(vars: usize, rows: &[(&[i64], i64)]) -> LinSystem {
        LinSystem {
            vars,
            rows: rows.iter().map(|(c, b)| (c.iter().map(|&a| Rational::from_int(a)).collect(), Rational::from_int(*b))).collect(),
        }
    }

    #[test]
    fn small_examples() {
        let s = sys(2, &[(&[1, 0], 1), (&[1, 1], 1)]);
        assert_eq!(feasible(&s).unwrap(), Some(vec![r(1, 1), r(0, 1)]));
        let s = sys(1, &[(&[1], 1), (&[1], 2)]);
        assert_eq!(feasible(&s).unwrap(), None);
        let s = sys(1, &[(&[1], -1)]);
        assert_eq!(feasible(&s).unwrap(), None);
        assert!(feasible(&sys(2, &[(&[1], 1)])).is_err());
    }

    #[test]
    fn transportation() {
        // cells (r0c0, r0c1, r1c0, r1c1)
        let mut s = LinSystem::new(4);
        s.push_sum([0, 1], r(1, 2));
        s.push_sum([2, 3], r(1, 2));
        s.push_sum([0, 2], r(1, 4));
        s.push_sum([1, 3], r(3, 4));
        let x = feasible(&s).unwrap().unwrap();
        assert!(s.satisfied_by(&x));
    }

    #[test]
    fn redundant_rows_are_fine() {
        let mut s = LinSystem::new(2);
        s.push_sum([0, 1], r(1, 3));
        s.push_sum([0, 1], r(1, 3));
        s.push_sum([0], r(1, 3));
        assert_eq!(feasible(&s).unwrap(), Some(vec![r(1, 3), r(0, 1)]));
    }

    /// Solve a square-or-tall system restricted to `cols` by elimination;
    /// `Some` only when the solution is unique.
    fn solve_on(sys: &LinSystem, cols: &[usize]) -> Option<Vec<Rational>> {
        let k = cols.len();
        let mut a: Vec<Vec<Rational>> = sys
            .rows
            .iter()
            .map(|(c, b)| cols.iter().map(|&j| c[j].clone()).chain([b.clone()]).collect())
            .collect();
        let mut row = 0;
        for col in 0..k {
            let piv = (row..a.len()).find(|&i| !a[i][col].is_zero())?;
            a.swap(row, piv);
            let p = a[row][col].clone();
            for v in a[row].iter_mut() {
                *v = &*v / &p;
            }
            for i in 0..a.len() {
                if i != row && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    let pr = a[row].clone();
                    for (v, pv) in a[i].iter_mut().zip(&pr) {
                        *v -= &(&f * pv);
                    }
                }
            }
            row += 1;
        }
        if a[row..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); sys.vars];
        for (i, &j) in cols.iter().enumerate() {
            x[j] = a[i][k].clone();
        }
        Some(x)
    }

    /// Feasible iff some basic solution is nonnegative.
    fn vertex_oracle(sys: &LinSystem) -> bool {
        if sys.rows.iter().all(|(_, b)| b.is_zero()) {
            return true;
        }
        (1u32..1 << sys.vars).any(|mask| {
            let cols: Vec<usize> = (0..sys.vars).filter(|j| mask >> j & 1 == 1).collect();
            cols.len() <= sys.rows.len() && solve_on(sys, &cols).is_some_and(|x| sys.satisfied_by(&x))
        })
    }

    proptest! {
        #[test]
        fn agrees_with_vertex_enumeration(
            vars in 1usize..=6,
            rows in proptest::collection::vec((proptest::collection::vec(-2i64..=3, 6), -2i64..=4), 1..=4),
        ) {
            let s = LinSystem {
                vars,
                rows: rows.iter().map(|(c, b)| (c[..vars].iter().map(|&a| Rational::from_int(a)).collect(), Rational::new(*b, 2))).collect(),
            };
            let got = feasible(&s).unwrap();
            if let Some(x) = &got {
                prop_assert!(s.satisfied_by(x));
            }
            prop_assert_eq!(got.is_some(), vertex_oracle(&s));
        }
    }
}
