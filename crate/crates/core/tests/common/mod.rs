//! Independent oracles shared by the integration tests, written from the
//! definitions rather than from the library's formulas.
#![allow(dead_code)]

use choquet_core::capacity::Capacity;
use choquet_core::lp::{LinearProgram, LpStatus, Relation};
use choquet_core::mobius::{zeta, MobiusRepresentation};
use rand::Rng;

pub fn random_capacity(n: usize, rng: &mut impl Rng) -> Capacity<f64> {
    // Monotone by construction: nonnegative Möbius masses, normalized.
    let mut c: Vec<f64> = (0..1usize << n).map(|a| if a == 0 { 0.0 } else { rng.gen::<f64>() }).collect();
    let total: f64 = c.iter().sum();
    c.iter_mut().for_each(|x| *x /= total);
    let mut v = zeta(&MobiusRepresentation::from_coeffs(n, c).unwrap()).into_values();
    v[(1 << n) - 1] = 1.0;
    Capacity::from_values(n, v).unwrap()
}

/// Monotone values built bottom-up with random increments; generically
/// neither super- nor submodular.
pub fn random_generic_capacity(n: usize, rng: &mut impl Rng) -> Capacity<f64> {
    let full = (1usize << n) - 1;
    let mut v = vec![0.0; full + 1];
    for a in 1..=full {
        let floor = (0..n).filter(|i| a >> i & 1 == 1).map(|i| v[a & !(1 << i)]).fold(0.0, f64::max);
        v[a] = floor + rng.gen::<f64>();
    }
    let top = v[full];
    v.iter_mut().for_each(|x| *x /= top);
    v[full] = 1.0;
    Capacity::from_values(n, v).unwrap()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Average marginal contribution over all arrival orders.
pub fn shapley_oracle(cap: &Capacity<f64>) -> Vec<f64> {
    let n = cap.n();
    let perms = permutations(n);
    let mut phi = vec![0.0; n];
    for p in &perms {
        let mut before = 0usize;
        for &i in p {
            phi[i] += cap.get(before | 1 << i) - cap.get(before);
            before |= 1 << i;
        }
    }
    phi.iter().map(|x| x / perms.len() as f64).collect()
}

/// `m(A) = Σ_{B ⊆ A} (-1)^{|A∖B|} ν(B)`, by explicit subset enumeration.
pub fn mobius_oracle(cap: &Capacity<f64>) -> Vec<f64> {
    (0..1usize << cap.n())
        .map(|a| {
            (0..=a)
                .filter(|b| b & !a == 0)
                .map(|b| {
                    let sign = if (a & !b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    sign * cap.get(b)
                })
                .sum()
        })
        .collect()
}

/// `∫_0^∞ ν({i : p_i ≥ t}) dt` summed over the distinct profile values.
pub fn choquet_oracle(cap: &Capacity<f64>, p: &[f64]) -> f64 {
    let mut levels: Vec<f64> = p.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut prev = 0.0;
    let mut total = 0.0;
    for t in levels {
        let set = (0..p.len()).filter(|&i| p[i] >= t).fold(0, |m, i| m | 1 << i);
        total += (t - prev) * cap.get(set);
        prev = t;
    }
    total
}

/// Pair interaction as the average discrete second derivative.
pub fn pair_interaction_oracle(cap: &Capacity<f64>, i: usize, j: usize) -> f64 {
    let n = cap.n();
    let fact = |k: usize| (1..=k).product::<usize>() as f64;
    let rest = ((1usize << n) - 1) & !(1 << i) & !(1 << j);
    (0..=rest)
        .filter(|s| s & !rest == 0)
        .map(|s| {
            let k = s.count_ones() as usize;
            let w = fact(n - k - 2) * fact(k) / fact(n - 1);
            w * (cap.get(s | 1 << i | 1 << j) - cap.get(s | 1 << i) - cap.get(s | 1 << j) + cap.get(s))
        })
        .sum()
}

/// Sorting oracle for the `k`-th smallest value.
pub fn kth_smallest(p: &[f64], k: usize) -> f64 {
    let mut v = p.to_vec();
    v.sort_by(f64::total_cmp);
    v[k - 1]
}

/// Bounded random program over at most three variables.
pub fn random_program(rng: &mut impl Rng) -> LinearProgram<f64> {
    let nv = rng.gen_range(1..=3);
    let mut lp = LinearProgram::new();
    for j in 0..nv {
        let lower = if rng.gen_bool(0.2) { -10.0 } else { 0.0 };
        lp.add_var(format!("x{j}"), lower, 10.0, rng.gen_range(-5..=5) as f64);
    }
    for r in 0..rng.gen_range(1..=4) {
        let terms = (0..nv).map(|j| (j, rng.gen_range(-5..=5) as f64)).collect();
        let relation = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        lp.add_constraint(terms, relation, rng.gen_range(-5..=10) as f64, format!("r{r}"));
    }
    lp
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-9 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Optimal objective by enumerating every vertex of the (bounded) region:
/// each choice of `nv` tight constraints among rows and bounds.
pub fn vertex_oracle(lp: &LinearProgram<f64>) -> Option<f64> {
    let nv = lp.num_vars();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in lp.constraints() {
        let mut row = vec![0.0; nv];
        for &(j, a) in &c.terms {
            row[j] += a;
        }
        planes.push((row, c.rhs));
    }
    for j in 0..nv {
        let (lo, hi) = lp.bounds(j);
        let mut unit = vec![0.0; nv];
        unit[j] = 1.0;
        planes.push((unit.clone(), lo));
        planes.push((unit, hi));
    }
    let feasible = |x: &[f64]| {
        lp.max_violation(x) <= 1e-7
            && (0..nv).all(|j| {
                let (lo, hi) = lp.bounds(j);
                x[j] >= lo - 1e-7 && x[j] <= hi + 1e-7
            })
    };
    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; nv];
    fn next(pick: &mut [usize], m: usize) -> bool {
        let k = pick.len();
        for i in (0..k).rev() {
            if pick[i] < m - (k - i) {
                pick[i] += 1;
                for t in i + 1..k {
                    pick[t] = pick[t - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, p) in pick.iter_mut().enumerate() {
        *p = i;
    }
    loop {
        let a = pick.iter().map(|&k| planes[k].0.clone()).collect();
        let b = pick.iter().map(|&k| planes[k].1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let v = lp.evaluate(&x);
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
        if !next(&mut pick, planes.len()) {
            break;
        }
    }
    best
}

/// Status and objective of the library solve, in oracle terms.
pub fn solver_value(lp: &LinearProgram<f64>) -> Option<f64> {
    let sol = lp.solve().expect("solver runs");
    match sol.status {
        LpStatus::Optimal => Some(sol.objective),
        LpStatus::Infeasible => None,
        LpStatus::Unbounded => panic!("bounded program reported unbounded"),
    }
}
