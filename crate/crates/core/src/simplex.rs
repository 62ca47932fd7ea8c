//! Exact feasibility kernel for systems `A x >= 1, x >= 0` over the
//! rationals.
//!
//! This is a dense Phase-I simplex on arbitrary-precision rationals: every
//! row `A_i x >= 1` gets a slack and an artificial variable
//! (`A_i x - s_i + a_i = 1`), and the kernel minimizes the sum of the
//! artificials. Optimum zero means the system is feasible and the structural
//! part of the basic solution is returned. A positive optimum means the
//! system is infeasible, and the simplex multipliers at optimality form a
//! certificate: a vector `m >= 0` with `mᵀA <= 0` componentwise and
//! `sum(m) > 0`, so `mᵀ(Ax)` can never reach `mᵀ1` for any `x >= 0`.
//!
//! Pivoting is deterministic: Dantzig's rule (most negative reduced cost,
//! smallest column on ties) with a hard switch to Bland's rule after a fixed
//! iteration budget, which guarantees termination from any basis. All
//! arithmetic is exact, so there are no tolerances anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of [`solve_geq_one`].
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Feasibility {
    /// A nonnegative rational point satisfying every row at `>= 1`.
    Feasible(Vec<BigRational>),
    /// Nonnegative multipliers, one per row, with `mᵀA <= 0` and
    /// `sum(m) > 0`.
    Infeasible { multipliers: Vec<BigRational> },
}

/// Decides `{ x : A x >= 1 (rowwise), x >= 0 }` exactly.
///
/// # Panics
///
/// Panics if a row's length differs from `column_count`.
pub(crate) fn solve_geq_one(column_count: usize, rows: &[Vec<BigRational>]) -> Feasibility {
    for row in rows {
        assert_eq!(row.len(), column_count, "ragged row in inequality system");
    }
    let n = column_count;
    let m = rows.len();
    if m == 0 {
        return Feasibility::Feasible(vec![BigRational::zero(); n]);
    }

    // Column layout: structural | slack | artificial, then the right-hand
    // side as a final virtual column.
    let total = n + 2 * m;
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let mut t = vec![BigRational::zero(); total + 1];
        t[..n].clone_from_slice(row);
        t[n + i] = -BigRational::one();
        t[n + m + i] = BigRational::one();
        t[total] = BigRational::one();
        tableau.push(t);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // Reduced-cost row for the Phase-I objective (sum of artificials), with
    // the basic artificial columns already priced out; its rhs cell holds
    // minus the current objective value.
    let mut cost = vec![BigRational::zero(); total + 1];
    for j in n + m..total {
        cost[j] = BigRational::one();
    }
    for t in &tableau {
        for j in 0..=total {
            if !t[j].is_zero() {
                let delta = t[j].clone();
                cost[j] -= delta;
            }
        }
    }

    // Dantzig pivoting is fast in practice but can cycle on degenerate bases;
    // Bland's rule cannot. Switch permanently once the budget is exhausted.
    let dantzig_budget = 64 + 8 * (m + n);
    let mut iterations = 0usize;

    loop {
        let entering = if iterations < dantzig_budget {
            most_negative_column(&cost, total)
        } else {
            first_negative_column(&cost, total)
        };
        let Some(entering) = entering else {
            break; // optimal
        };
        iterations += 1;

        // Ratio test: among rows with a positive pivot entry, the smallest
        // rhs/entry ratio; ties go to the row whose basic variable has the
        // smallest index (Bland-compatible).
        let mut leaving: Option<usize> = None;
        for i in 0..m {
            if !tableau[i][entering].is_positive() {
                continue;
            }
            leaving = match leaving {
                None => Some(i),
                Some(best) => {
                    // Compare rhs_i / t_i < rhs_best / t_best without
                    // materializing the quotients.
                    let lhs = &tableau[i][total] * &tableau[best][entering];
                    let rhs = &tableau[best][total] * &tableau[i][entering];
                    if lhs < rhs || (lhs == rhs && basis[i] < basis[best]) {
                        Some(i)
                    } else {
                        Some(best)
                    }
                }
            };
        }
        let leaving = leaving.expect(
            "Phase-I objective is bounded below by zero, so some ratio must bind",
        );

        pivot(&mut tableau, &mut cost, &mut basis, leaving, entering, total);
    }

    let objective = -cost[total].clone();
    debug_assert!(!objective.is_negative(), "Phase-I objective is a sum of nonnegatives");

    if objective.is_zero() {
        let mut x = vec![BigRational::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = tableau[i][total].clone();
            }
        }
        debug_assert!(x.iter().all(|v| !v.is_negative()));
        debug_assert!(rows
            .iter()
            .all(|row| dot(row, &x) >= BigRational::one()));
        Feasibility::Feasible(x)
    } else {
        // Simplex multipliers, read off the artificial columns' reduced
        // costs: cost[artificial i] = 1 - y_i at optimality.
        let multipliers: Vec<BigRational> = (0..m)
            .map(|i| BigRational::one() - &cost[n + m + i])
            .collect();
        debug_assert!(multipliers.iter().all(|y| !y.is_negative()));
        debug_assert!(multipliers.iter().fold(BigRational::zero(), |acc, y| acc + y).is_positive());
        debug_assert!((0..n).all(|j| {
            !(0..m)
                .fold(BigRational::zero(), |acc, i| acc + &multipliers[i] * &rows[i][j])
                .is_positive()
        }));
        Feasibility::Infeasible { multipliers }
    }
}

fn most_negative_column(cost: &[BigRational], total: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for j in 0..total {
        if cost[j].is_negative() && best.map_or(true, |b| cost[j] < cost[b]) {
            best = Some(j);
        }
    }
    best
}

fn first_negative_column(cost: &[BigRational], total: usize) -> Option<usize> {
    (0..total).find(|&j| cost[j].is_negative())
}

fn pivot(
    tableau: &mut [Vec<BigRational>],
    cost: &mut [BigRational],
    basis: &mut [usize],
    row: usize,
    col: usize,
    total: usize,
) {
    let pivot_value = tableau[row][col].clone();
    debug_assert!(pivot_value.is_positive());
    if !pivot_value.is_one() {
        for cell in tableau[row].iter_mut() {
            if !cell.is_zero() {
                *cell /= &pivot_value;
            }
        }
    }
    for i in 0..tableau.len() {
        if i == row || tableau[i][col].is_zero() {
            continue;
        }
        let factor = tableau[i][col].clone();
        eliminate(row, &factor, tableau, i, total);
    }
    if !cost[col].is_zero() {
        let factor = cost[col].clone();
        for j in 0..=total {
            if !tableau[row][j].is_zero() {
                let delta = &factor * &tableau[row][j];
                cost[j] -= delta;
            }
        }
    }
    basis[row] = col;
}

/// `tableau[target] -= factor * tableau[source]`, written around the borrow
/// checker by splitting the slice.
fn eliminate(
    source: usize,
    factor: &BigRational,
    tableau: &mut [Vec<BigRational>],
    target: usize,
    total: usize,
) {
    debug_assert_ne!(source, target);
    let (source_row, target_row) = if source < target {
        let (a, b) = tableau.split_at_mut(target);
        (&a[source], &mut b[0])
    } else {
        let (a, b) = tableau.split_at_mut(source);
        (&b[0], &mut a[target])
    };
    for j in 0..=total {
        if !source_row[j].is_zero() {
            let delta = factor * &source_row[j];
            target_row[j] -= delta;
        }
    }
}

fn dot(row: &[BigRational], x: &[BigRational]) -> BigRational {
    row.iter()
        .zip(x)
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

#[allow(dead_code)]
pub(crate) fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn system(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().copied().map(int).collect()).collect()
    }

    /// Confirms that the answer carries its own proof: a feasible point must
    /// satisfy every row, an infeasibility certificate must be nonnegative,
    /// nonzero, and price every column nonpositively.
    fn check_answer(column_count: usize, rows: &[Vec<BigRational>], outcome: &Feasibility) {
        match outcome {
            Feasibility::Feasible(x) => {
                assert_eq!(x.len(), column_count);
                assert!(x.iter().all(|v| !v.is_negative()), "negative coordinate");
                for row in rows {
                    assert!(dot(row, x) >= BigRational::one(), "row not satisfied");
                }
            }
            Feasibility::Infeasible { multipliers } => {
                assert_eq!(multipliers.len(), rows.len());
                assert!(multipliers.iter().all(|y| !y.is_negative()));
                let total: BigRational =
                    multipliers.iter().fold(BigRational::zero(), |acc, y| acc + y);
                assert!(total.is_positive(), "certificate is all zeros");
                for j in 0..column_count {
                    let priced = multipliers
                        .iter()
                        .zip(rows)
                        .fold(BigRational::zero(), |acc, (y, row)| acc + y * &row[j]);
                    assert!(!priced.is_positive(), "column {j} priced positively");
                }
            }
        }
    }

    #[test]
    fn single_variable_lower_bound_is_feasible() {
        let rows = system(&[&[1]]);
        let outcome = solve_geq_one(1, &rows);
        check_answer(1, &rows, &outcome);
        assert!(matches!(outcome, Feasibility::Feasible(_)));
    }

    #[test]
    fn negated_variable_is_infeasible() {
        let rows = system(&[&[-1]]);
        let outcome = solve_geq_one(1, &rows);
        check_answer(1, &rows, &outcome);
        assert!(matches!(outcome, Feasibility::Infeasible { .. }));
    }

    #[test]
    fn opposed_differences_are_infeasible() {
        // x - y >= 1 and y - x >= 1 cannot both hold.
        let rows = system(&[&[1, -1], &[-1, 1]]);
        let outcome = solve_geq_one(2, &rows);
        check_answer(2, &rows, &outcome);
        match outcome {
            Feasibility::Infeasible { multipliers } => {
                // The canonical certificate adds the two rows.
                assert_eq!(multipliers.len(), 2);
                assert!(multipliers[0].is_positive() && multipliers[1].is_positive());
            }
            Feasibility::Feasible(_) => panic!("system is infeasible"),
        }
    }

    #[test]
    fn chain_of_differences_is_feasible() {
        // x0 - x1 >= 1, x1 - x2 >= 1, x2 >= 1.
        let rows = system(&[&[1, -1, 0], &[0, 1, -1], &[0, 0, 1]]);
        let outcome = solve_geq_one(3, &rows);
        check_answer(3, &rows, &outcome);
        assert!(matches!(outcome, Feasibility::Feasible(_)));
    }

    #[test]
    fn empty_system_is_vacuously_feasible() {
        let outcome = solve_geq_one(3, &[]);
        assert_eq!(outcome, Feasibility::Feasible(vec![BigRational::zero(); 3]));
    }

    #[test]
    fn zero_columns_make_rows_unsatisfiable() {
        let rows = system(&[&[], &[]]);
        let outcome = solve_geq_one(0, &rows);
        check_answer(0, &rows, &outcome);
        assert!(matches!(outcome, Feasibility::Infeasible { .. }));
    }

    #[test]
    fn all_zero_row_is_unsatisfiable() {
        let rows = system(&[&[1, 1], &[0, 0]]);
        let outcome = solve_geq_one(2, &rows);
        check_answer(2, &rows, &outcome);
        assert!(matches!(outcome, Feasibility::Infeasible { .. }));
    }

    #[test]
    fn fractional_coefficients_are_exact() {
        // (1/3)x >= 1 forces x >= 3 exactly.
        let rows = vec![vec![rational(1, 3)]];
        match solve_geq_one(1, &rows) {
            Feasibility::Feasible(x) => assert_eq!(x[0], int(3)),
            Feasibility::Infeasible { .. } => panic!("feasible system"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        /// Whatever the kernel answers, the answer certifies itself.
        #[test]
        fn answers_are_self_certifying(
            raw in proptest::collection::vec(
                proptest::collection::vec(-3i64..=3, 1..=6),
                0..=8,
            )
        ) {
            let columns = raw.first().map_or(3, |r| r.len());
            let rows: Vec<Vec<BigRational>> = raw
                .iter()
                .map(|r| {
                    let mut row = r.clone();
                    row.resize(columns, 0);
                    row.into_iter().map(int).collect()
                })
                .collect();
            let outcome = solve_geq_one(columns, &rows);
            check_answer(columns, &rows, &outcome);
        }
    }
}
