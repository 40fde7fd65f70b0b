//! A small dense two-phase simplex with bounded variables.
//!
//! Written for the fidelity LP: a few thousand rows at most, every variable
//! boxed, two-sided range rows encoded through bounded slacks. Dantzig
//! pricing with a Bland fallback against cycling.

use crate::error::{RangeError, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarStatus {
    Basic(usize),
    AtLower,
    AtUpper,
}

/// maximize c x subject to A x = b and lower <= x <= upper.
#[derive(Debug, Clone)]
pub struct BoundedLp {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objective: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
    /// Largest feasibility violation of the returned point.
    pub feasibility_residual: f64,
    /// Largest violated optimality (reduced cost) condition.
    pub optimality_residual: f64,
}

struct Tableau {
    m: usize,
    n: usize,
    t: Vec<Vec<f64>>, // B^{-1} A, m x n
    xb: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<VarStatus>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Tableau {
    fn value_of(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::Basic(r) => self.xb[r],
            VarStatus::AtLower => self.lower[j],
            VarStatus::AtUpper => self.upper[j],
        }
    }

    fn reduced_costs(&self, costs: &[f64]) -> Vec<f64> {
        // d_j = c_j - c_B . T_j
        let cb: Vec<f64> = self.basis.iter().map(|&j| costs[j]).collect();
        let mut d = costs.to_vec();
        for (r, row) in self.t.iter().enumerate() {
            let w = cb[r];
            if w == 0.0 {
                continue;
            }
            for j in 0..self.n {
                d[j] -= w * row[j];
            }
        }
        d
    }

    /// One simplex iteration; returns false at optimality.
    fn iterate(&mut self, costs: &[f64], bland: bool) -> Result<bool> {
        let d = self.reduced_costs(costs);
        let mut entering: Option<(usize, f64)> = None; // (var, direction)
        let mut best_score = COST_TOL;
        for j in 0..self.n {
            let (improving, dir) = match self.status[j] {
                VarStatus::Basic(_) => (false, 0.0),
                VarStatus::AtLower => (d[j] > COST_TOL, 1.0),
                VarStatus::AtUpper => (d[j] < -COST_TOL, -1.0),
            };
            if !improving {
                continue;
            }
            if bland {
                entering = Some((j, dir));
                break;
            }
            if d[j].abs() > best_score {
                best_score = d[j].abs();
                entering = Some((j, dir));
            }
        }
        let Some((e, dir)) = entering else {
            return Ok(false);
        };

        // ratio test: x_B <- x_B - dir * t * col_e, entering moves by dir * t
        let mut t_best = self.upper[e] - self.lower[e]; // bound flip
        let mut leave: Option<(usize, bool)> = None; // (row, hits_lower)
        for r in 0..self.m {
            let coeff = dir * self.t[r][e];
            let bi = self.basis[r];
            if coeff > PIVOT_TOL {
                let slack = self.xb[r] - self.lower[bi];
                let t = slack / coeff;
                if t < t_best - 1e-13 || (bland && t <= t_best && leave.map_or(true, |(lr, _)| self.basis[lr] > bi)) {
                    t_best = t.max(0.0);
                    leave = Some((r, true));
                }
            } else if coeff < -PIVOT_TOL {
                let slack = self.upper[bi] - self.xb[r];
                let t = slack / (-coeff);
                if t < t_best - 1e-13 || (bland && t <= t_best && leave.map_or(true, |(lr, _)| self.basis[lr] > bi)) {
                    t_best = t.max(0.0);
                    leave = Some((r, false));
                }
            }
        }
        if !t_best.is_finite() {
            return Err(RangeError::SolverFailure("unbounded direction".into()));
        }

        match leave {
            None => {
                // bound flip of the entering variable
                for r in 0..self.m {
                    self.xb[r] -= dir * t_best * self.t[r][e];
                }
                self.status[e] = match self.status[e] {
                    VarStatus::AtLower => VarStatus::AtUpper,
                    VarStatus::AtUpper => VarStatus::AtLower,
                    VarStatus::Basic(_) => unreachable!(),
                };
                Ok(true)
            }
            Some((r, hits_lower)) => {
                // update basic values
                for i in 0..self.m {
                    self.xb[i] -= dir * t_best * self.t[i][e];
                }
                let leaving = self.basis[r];
                let pivot = self.t[r][e];
                if pivot.abs() <= PIVOT_TOL {
                    return Err(RangeError::SolverFailure("singular pivot".into()));
                }
                // entering takes value: bound + dir * t
                let enter_val = match self.status[e] {
                    VarStatus::AtLower => self.lower[e] + t_best,
                    VarStatus::AtUpper => self.upper[e] - t_best,
                    VarStatus::Basic(_) => unreachable!(),
                };
                // pivot row r on column e
                let inv = 1.0 / pivot;
                for j in 0..self.n {
                    self.t[r][j] *= inv;
                }
                for i in 0..self.m {
                    if i == r {
                        continue;
                    }
                    let f = self.t[i][e];
                    if f == 0.0 {
                        continue;
                    }
                    for j in 0..self.n {
                        self.t[i][j] -= f * self.t[r][j];
                    }
                }
                self.status[leaving] = if hits_lower {
                    VarStatus::AtLower
                } else {
                    VarStatus::AtUpper
                };
                self.status[e] = VarStatus::Basic(r);
                self.basis[r] = e;
                self.xb[r] = enter_val;
                Ok(true)
            }
        }
    }

    fn run(&mut self, costs: &[f64], max_iters: usize) -> Result<()> {
        let mut degenerate = 0usize;
        let mut last_obj = f64::NEG_INFINITY;
        for _ in 0..max_iters {
            let obj: f64 = (0..self.n).map(|j| costs[j] * self.value_of(j)).sum();
            if obj <= last_obj + 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            last_obj = obj;
            let bland = degenerate > 60;
            if !self.iterate(costs, bland)? {
                return Ok(());
            }
        }
        Err(RangeError::SolverFailure("iteration limit reached".into()))
    }
}

/// Solves the bounded LP by the two-phase method.
pub fn solve(lp: &BoundedLp) -> Result<LpSolution> {
    let m = lp.rows.len();
    let n_struct = lp.objective.len();
    for row in &lp.rows {
        if row.len() != n_struct {
            return Err(RangeError::DimensionMismatch("ragged LP rows".into()));
        }
    }
    if lp.rhs.iter().any(|&b| b < 0.0) {
        return Err(RangeError::SolverFailure(
            "right-hand sides must be nonnegative".into(),
        ));
    }
    let n = n_struct + m; // structural + artificial
    let mut t = vec![vec![0.0f64; n]; m];
    for (r, row) in lp.rows.iter().enumerate() {
        t[r][..n_struct].copy_from_slice(row);
        t[r][n_struct + r] = 1.0;
    }
    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();
    lower.extend(std::iter::repeat(0.0).take(m));
    upper.extend(std::iter::repeat(f64::INFINITY).take(m));

    let mut tab = Tableau {
        m,
        n,
        t,
        xb: lp.rhs.clone(),
        basis: (n_struct..n).collect(),
        status: (0..n)
            .map(|j| {
                if j >= n_struct {
                    VarStatus::Basic(j - n_struct)
                } else {
                    VarStatus::AtLower
                }
            })
            .collect(),
        lower,
        upper,
    };
    for (r, &b) in lp.rhs.iter().enumerate() {
        tab.status[n_struct + r] = VarStatus::Basic(r);
        tab.xb[r] = b;
    }

    // nonzero lower bounds of structural variables shift the rhs
    for j in 0..n_struct {
        if lp.lower[j] != 0.0 {
            for r in 0..m {
                tab.xb[r] -= lp.rows[r][j] * lp.lower[j];
            }
        }
    }
    if tab.xb.iter().any(|&v| v < -1e-12) {
        return Err(RangeError::SolverFailure(
            "phase-1 start infeasible; reformulate with nonnegative residuals".into(),
        ));
    }

    // phase 1: minimize the artificials
    let mut costs1 = vec![0.0f64; n];
    for c in costs1.iter_mut().skip(n_struct) {
        *c = -1.0;
    }
    let iters = 200 + 40 * (m + n);
    tab.run(&costs1, iters)?;
    let art_sum: f64 = (n_struct..n).map(|j| tab.value_of(j)).sum();
    if art_sum > 1e-8 {
        return Err(RangeError::SolverFailure(format!(
            "phase 1 ended infeasible (artificial mass {art_sum:.3e})"
        )));
    }
    // freeze artificials at zero
    for j in n_struct..n {
        tab.upper[j] = 0.0;
        if let VarStatus::AtUpper = tab.status[j] {
            tab.status[j] = VarStatus::AtLower;
        }
    }

    // phase 2
    let mut costs2 = vec![0.0f64; n];
    costs2[..n_struct].copy_from_slice(&lp.objective);
    tab.run(&costs2, iters)?;

    let x: Vec<f64> = (0..n_struct).map(|j| tab.value_of(j)).collect();
    let objective: f64 = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();

    // certificates: feasibility and reduced-cost optimality
    let mut feas: f64 = 0.0;
    for (r, row) in lp.rows.iter().enumerate() {
        let mut lhs: f64 = row.iter().zip(&x).map(|(a, v)| a * v).sum();
        lhs += tab.value_of(n_struct + r); // artificials are zero
        feas = feas.max((lhs - lp.rhs[r]).abs());
    }
    for j in 0..n_struct {
        feas = feas.max(lp.lower[j] - x[j]).max(x[j] - lp.upper[j]);
    }
    let d = tab.reduced_costs(&costs2);
    let mut opt: f64 = 0.0;
    for j in 0..n {
        match tab.status[j] {
            VarStatus::Basic(_) => {}
            VarStatus::AtLower => opt = opt.max(d[j]),
            VarStatus::AtUpper => opt = opt.max(-d[j]),
        }
    }

    Ok(LpSolution {
        objective,
        x,
        feasibility_residual: feas.max(0.0),
        optimality_residual: opt.max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_box_lp() {
        // max x + y, x + y <= 1.5 (slack in [0, 1.5]), x, y in [0, 1]
        let lp = BoundedLp {
            rows: vec![vec![1.0, 1.0, 1.0]],
            rhs: vec![1.5],
            lower: vec![0.0, 0.0, 0.0],
            upper: vec![1.0, 1.0, 1.5],
            objective: vec![1.0, 1.0, 0.0],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective - 1.5).abs() < 1e-10);
        assert!(sol.feasibility_residual < 1e-10);
        assert!(sol.optimality_residual < 1e-9);
    }

    #[test]
    fn equality_and_range_rows() {
        // max 2x + y with x + y = 1, 0.2 <= x <= 0.6 (range row via slack)
        let lp = BoundedLp {
            rows: vec![vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]],
            rhs: vec![1.0, 0.6],
            lower: vec![0.0, 0.0, 0.0],
            upper: vec![1.0, 1.0, 0.4],
            objective: vec![2.0, 1.0, 0.0],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective - (2.0 * 0.6 + 0.4)).abs() < 1e-10);
        assert!((sol.x[0] - 0.6).abs() < 1e-10);
    }

    #[test]
    fn infeasible_reported() {
        // x = 2 with x in [0, 1]
        let lp = BoundedLp {
            rows: vec![vec![1.0]],
            rhs: vec![2.0],
            lower: vec![0.0],
            upper: vec![1.0],
            objective: vec![1.0],
        };
        assert!(solve(&lp).is_err());
    }

    #[test]
    fn random_lps_match_vertex_enumeration() {
        // small random boxed LPs: max c x, A x + s = b; compare against brute
        // force over active-set vertex candidates
        use rand::Rng;
        let mut rng = crate::random::substream(71, 0);
        for _ in 0..20 {
            let nv = 3usize;
            let mrows = 2usize;
            let a: Vec<Vec<f64>> = (0..mrows)
                .map(|_| (0..nv).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let b: Vec<f64> = (0..mrows).map(|_| rng.gen_range(0.5..2.0)).collect();
            let c: Vec<f64> = (0..nv).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut rows = Vec::new();
            for (r, row) in a.iter().enumerate() {
                let mut full = row.clone();
                full.extend((0..mrows).map(|k| if k == r { 1.0 } else { 0.0 }));
                rows.push(full);
            }
            let mut lower = vec![0.0; nv + mrows];
            let mut upper = vec![1.0; nv];
            upper.extend(b.iter().copied());
            lower.iter_mut().for_each(|l| *l = 0.0);
            let mut obj = c.clone();
            obj.extend(std::iter::repeat(0.0).take(mrows));
            let lp = BoundedLp {
                rows,
                rhs: b.clone(),
                lower,
                upper,
                objective: obj,
            };
            let sol = solve(&lp).unwrap();
            // brute force over a fine grid of the box
            let steps = 24usize;
            let mut best = f64::NEG_INFINITY;
            for i in 0..=steps {
                for j in 0..=steps {
                    for k in 0..=steps {
                        let x = [
                            i as f64 / steps as f64,
                            j as f64 / steps as f64,
                            k as f64 / steps as f64,
                        ];
                        let feasible = (0..mrows).all(|r| {
                            let lhs: f64 = (0..nv).map(|v| a[r][v] * x[v]).sum();
                            lhs <= b[r] + 1e-12
                        });
                        if feasible {
                            let val: f64 = (0..nv).map(|v| c[v] * x[v]).sum();
                            best = best.max(val);
                        }
                    }
                }
            }
            assert!(
                sol.objective >= best - 1e-9,
                "simplex {} below grid {}",
                sol.objective,
                best
            );
            assert!(sol.feasibility_residual < 1e-9);
            assert!(sol.optimality_residual < 1e-8);
        }
    }
}
