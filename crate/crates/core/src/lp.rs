//! Dense phase-1 simplex for linear feasibility: find `t ≥ 0` with
//! `A t = b`. Uses Bland's rule, so it terminates on degenerate systems
//! (channel factorization systems always carry one redundant row per
//! input).

const PIVOT_TOL: f64 = 1e-12;

/// Row-major `m × n` constraint matrix.
#[derive(Debug, Clone)]
pub(crate) struct Equalities {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Equalities {
    pub fn new(rows: usize, cols: usize) -> Self {
        Equalities {
            rows,
            cols,
            a: vec![0.0; rows * cols],
            b: vec![0.0; rows],
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.cols + c] = v;
    }
}

/// Returns a nonnegative solution if the residual of phase 1 is at most
/// `feas_tol`, otherwise `None`.
pub(crate) fn find_feasible(sys: &Equalities, feas_tol: f64) -> Option<Vec<f64>> {
    let m = sys.rows;
    let n = sys.cols;
    let width = n + m + 1;
    let rhs = n + m;
    let mut tab = vec![0.0f64; m * width];
    for i in 0..m {
        let sign = if sys.b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            tab[i * width + j] = sign * sys.a[i * n + j];
        }
        tab[i * width + n + i] = 1.0;
        tab[i * width + rhs] = sign * sys.b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced-cost row of the phase-1 objective (sum of artificials)
    let mut obj = vec![0.0f64; width];
    for i in 0..m {
        for j in 0..n {
            obj[j] += tab[i * width + j];
        }
        obj[rhs] += tab[i * width + rhs];
    }

    let max_iters = 50 * (m + n) + 1000;
    for _ in 0..max_iters {
        // Bland: lowest-index improving column among original variables
        let Some(enter) = (0..n).find(|&j| obj[j] > PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let aij = tab[i * width + enter];
            if aij > PIVOT_TOL {
                let ratio = tab[i * width + rhs] / aij;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - 1e-15
                            || ((ratio - best).abs() <= 1e-15 && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // unbounded direction cannot happen for phase 1; stop
            break;
        };
        pivot(&mut tab, &mut obj, width, m, r, enter);
        basis[r] = enter;
    }

    if obj[rhs] > feas_tol {
        return None;
    }
    let mut t = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            t[bv] = tab[i * width + rhs].max(0.0);
        }
    }
    Some(t)
}

fn pivot(tab: &mut [f64], obj: &mut [f64], width: usize, m: usize, r: usize, c: usize) {
    let p = tab[r * width + c];
    for j in 0..width {
        tab[r * width + j] /= p;
    }
    let pivot_row: Vec<f64> = tab[r * width..(r + 1) * width].to_vec();
    for i in 0..m {
        if i == r {
            continue;
        }
        let f = tab[i * width + c];
        if f != 0.0 {
            let row = &mut tab[i * width..(i + 1) * width];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[c] = 0.0;
        }
    }
    let f = obj[c];
    if f != 0.0 {
        for (v, &pv) in obj.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        obj[c] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible() {
        // t0 + t1 = 1, t0 - t1 = 0.5
        let mut s = Equalities::new(2, 2);
        s.set(0, 0, 1.0);
        s.set(0, 1, 1.0);
        s.set(1, 0, 1.0);
        s.set(1, 1, -1.0);
        s.b = vec![1.0, 0.5];
        let t = find_feasible(&s, 1e-9).unwrap();
        assert!((t[0] - 0.75).abs() < 1e-12);
        assert!((t[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn infeasible_nonnegativity() {
        // t0 + t1 = 1, t0 + t1 = 2
        let mut s = Equalities::new(2, 2);
        for r in 0..2 {
            s.set(r, 0, 1.0);
            s.set(r, 1, 1.0);
        }
        s.b = vec![1.0, 2.0];
        assert!(find_feasible(&s, 1e-9).is_none());
        // t0 = -1 has no nonnegative solution
        let mut s = Equalities::new(1, 1);
        s.set(0, 0, 1.0);
        s.b = vec![-1.0];
        assert!(find_feasible(&s, 1e-9).is_none());
    }

    #[test]
    fn redundant_rows() {
        let mut s = Equalities::new(3, 2);
        for r in 0..3 {
            s.set(r, 0, 1.0);
            s.set(r, 1, 2.0);
        }
        s.b = vec![2.0, 2.0, 2.0];
        let t = find_feasible(&s, 1e-9).unwrap();
        assert!((t[0] + 2.0 * t[1] - 2.0).abs() < 1e-12);
    }
}
