//! Exact linear algebra over `F = F_p(t_1,...,t_m)`.
//!
//! Rank is computed fraction-free: each row is cleared of denominators and
//! the resulting polynomial matrix is reduced with Bareiss elimination, so
//! no rational-function gcds are needed on the way. RREF and nullspaces use
//! the fraction-free Gauss-Jordan variant and divide by the common pivot
//! only once per entry at the end. Pivots are always the first nonzero entry
//! in column order.

use crate::base_field::{poly_gcd, Polynomial, RationalFunction};

pub type Row = Vec<RationalFunction>;

fn row_lcm_denominator(row: &[RationalFunction]) -> Option<Polynomial> {
    let mut acc: Option<Polynomial> = None;
    for a in row.iter().filter(|a| !a.is_zero()) {
        let d = a.denominator();
        acc = Some(match acc {
            None => d.clone(),
            Some(l) if d.is_one() => l,
            Some(l) => {
                let g = poly_gcd(&l, d);
                &l * &d.exact_div(&g).expect("gcd divides")
            }
        });
    }
    acc
}

/// Clears denominators row by row (row scaling does not change the rank).
fn to_polynomial_rows(rows: &[Row]) -> Vec<Vec<Polynomial>> {
    rows.iter()
        .filter_map(|row| {
            let l = row_lcm_denominator(row)?;
            Some(
                row.iter()
                    .map(|a| {
                        if a.is_zero() {
                            Polynomial::zero(a.characteristic(), a.nvars())
                        } else {
                            a.numerator() * &l.exact_div(a.denominator()).expect("lcm is a multiple")
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Rank over `F` by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Row]) -> usize {
    let mut a = to_polynomial_rows(rows);
    let nrows = a.len();
    let Some(ncols) = a.first().map(Vec::len) else {
        return 0;
    };
    let (p, n) = (a[0][0].characteristic(), a[0][0].nvars());
    let mut prev = Polynomial::one(p, n);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let t = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = Polynomial::zero(p, n);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Fraction-free Gauss-Jordan on a polynomial matrix: every row update is
/// `(a_rc a_ij - a_ic a_rj) / prev` with exact division, so no gcds are
/// taken. On return all pivot entries equal the last pivot `det` and the
/// other entries of pivot columns are zero; zero rows are dropped.
struct FfReduced {
    rows: Vec<Vec<Polynomial>>,
    pivots: Vec<usize>,
    det: Option<Polynomial>,
}

fn ff_gauss_jordan(mut a: Vec<Vec<Polynomial>>) -> FfReduced {
    let nrows = a.len();
    let Some(ncols) = a.first().map(Vec::len) else {
        return FfReduced {
            rows: Vec::new(),
            pivots: Vec::new(),
            det: None,
        };
    };
    let (p, n) = (a[0][0].characteristic(), a[0][0].nvars());
    let mut prev = Polynomial::one(p, n);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        let (pivot_row, piv) = (a[r].clone(), a[r][c].clone());
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let mut t = &piv * &row[j];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    t = &t - &(&f * &pivot_row[j]);
                }
                row[j] = if prev.is_one() {
                    t
                } else {
                    t.exact_div(&prev).expect("fraction-free division is exact")
                };
            }
            row[c] = Polynomial::zero(p, n);
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    FfReduced {
        rows: a,
        det: (r > 0).then_some(prev),
        pivots,
    }
}

/// Reduced row echelon form over `F`; zero rows are dropped.
///
/// Returns the nonzero rows together with their pivot columns.
pub fn rref(rows: &[Row]) -> (Vec<Row>, Vec<usize>) {
    let ff = ff_gauss_jordan(to_polynomial_rows(rows));
    let Some(det) = ff.det else {
        return (Vec::new(), Vec::new());
    };
    let reduced = ff
        .rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| RationalFunction::new(x, det.clone()).expect("det is nonzero"))
                .collect()
        })
        .collect();
    (reduced, ff.pivots)
}

/// Basis of `{ x : A x = 0 }` for the `ncols`-column matrix `A` given by rows.
///
/// One vector per free column `f`: `det` at `f` and `-a_{i f}` at the pivot
/// column of row `i`, read off the fraction-free reduced form.
pub fn nullspace(rows: &[Row], ncols: usize, zero: &RationalFunction) -> Vec<Row> {
    let (p, n) = (zero.characteristic(), zero.nvars());
    let ff = ff_gauss_jordan(to_polynomial_rows(rows));
    let det = ff.det.clone().unwrap_or_else(|| Polynomial::one(p, n));
    (0..ncols)
        .filter(|c| !ff.pivots.contains(c))
        .map(|free| {
            let mut v = vec![zero.clone(); ncols];
            v[free] = RationalFunction::from_poly(det.clone());
            for (row, &pc) in ff.rows.iter().zip(&ff.pivots) {
                if !row[free].is_zero() {
                    v[pc] = -&RationalFunction::from_poly(row[free].clone());
                }
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `sum_i c_i * rows[i] = target`, if they exist.
pub fn solve_combination(rows: &[Row], target: &[RationalFunction]) -> Option<Vec<RationalFunction>> {
    let k = rows.len();
    let zero = target.first()?.clone();
    let zero = &zero - &zero;
    // transpose: unknowns are the row coefficients, one equation per column
    let system: Vec<Row> = (0..target.len())
        .map(|j| {
            let mut eq: Row = rows.iter().map(|r| r[j].clone()).collect();
            eq.push(target[j].clone());
            eq
        })
        .collect();
    let (reduced, pivots) = rref(&system);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![zero; k];
    for (row, &pc) in reduced.iter().zip(&pivots) {
        sol[pc] = row[k].clone();
    }
    Some(sol)
}
