#![allow(dead_code, clippy::needless_range_loop)]

use rainbowfrac::{Hypergraph, Rational, WeightSystem};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random `r`-uniform hypergraph with `edges` distinct edges on `vertices`
/// vertices, or fewer if the vertex set is too small.
pub fn random_hypergraph<R: Rng>(rng: &mut R, r: usize, vertices: usize, edges: usize) -> Hypergraph {
    let mut list: Vec<Vec<usize>> = Vec::new();
    let all: Vec<usize> = (0..vertices).collect();
    for _ in 0..edges * 20 {
        if list.len() == edges {
            break;
        }
        let mut e: Vec<usize> = all.choose_multiple(rng, r).copied().collect();
        e.sort_unstable();
        if !list.contains(&e) {
            list.push(e);
        }
    }
    Hypergraph::new(vertices, r, list).unwrap()
}

/// Random `r`-partite hypergraph with sides of size `side`; vertex
/// `s * side + j` is the `j`-th vertex of side `s`.
pub fn random_partite<R: Rng>(rng: &mut R, r: usize, side: usize, edges: usize) -> Hypergraph {
    let mut list: Vec<Vec<usize>> = Vec::new();
    for _ in 0..edges * 20 {
        if list.len() == edges {
            break;
        }
        let e: Vec<usize> = (0..r).map(|s| s * side + rng.gen_range(0..side)).collect();
        if !list.contains(&e) {
            list.push(e);
        }
    }
    let partition = (0..r * side).map(|v| v / side).collect();
    Hypergraph::new(r * side, r, list)
        .unwrap()
        .with_partition(partition)
        .unwrap()
}

/// Random rational in `[lo, hi]` with denominator at most `max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(lo * q..=hi * q);
    Rational::new(p, q)
}

/// Solves the square system `rows · x = rhs` by Gaussian elimination, or
/// returns `None` when it is singular.
pub fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        for i in 0..n {
            if i == col || rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] / &rows[col][col];
            for j in col..n {
                let t = &factor * &rows[col][j];
                rows[i][j] -= t;
            }
            let t = &factor * &rhs[col];
            rhs[i] -= t;
        }
    }
    Some((0..n).map(|i| &rhs[i] / &rows[i][i]).collect())
}

/// `ν*` by enumerating every basic solution: each choice of `|edges|`
/// constraints (vertex capacities or `f_e ≥ 0`) made tight.
pub fn brute_force_nu_star(h: &Hypergraph, edges: &[usize], w: &WeightSystem) -> Rational {
    let m = edges.len();
    let mut constraints: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for v in 0..h.vertex_count() {
        let row: Vec<Rational> = edges
            .iter()
            .map(|&e| Rational::from(h.edge(e).contains(&v) as i64))
            .collect();
        if row.iter().any(|x| !x.is_zero()) {
            constraints.push((row, w.vertex_weight(v).clone()));
        }
    }
    for j in 0..m {
        let mut row = vec![Rational::zero(); m];
        row[j] = Rational::one();
        constraints.push((row, Rational::zero()));
    }
    let mut best = Rational::zero();
    let k = constraints.len();
    let mut choice: Vec<usize> = (0..m).collect();
    if m == 0 {
        return best;
    }
    loop {
        let rows = choice.iter().map(|&i| constraints[i].0.clone()).collect();
        let rhs = choice.iter().map(|&i| constraints[i].1.clone()).collect();
        if let Some(x) = solve_square(rows, rhs) {
            let feasible = x.iter().all(|t| !t.is_negative())
                && constraints[..k - m].iter().all(|(row, b)| {
                    let lhs: Rational = row.iter().zip(&x).map(|(a, t)| a * t).sum();
                    lhs <= *b
                });
            if feasible {
                let value: Rational = edges.iter().zip(&x).map(|(&e, t)| w.edge_weight(e) * t).sum();
                best = best.max(value);
            }
        }
        let Some(i) = (0..m).rev().find(|&i| choice[i] < k - m + i) else {
            break;
        };
        choice[i] += 1;
        for j in i + 1..m {
            choice[j] = choice[j - 1] + 1;
        }
    }
    best
}

/// Random subset of `pool` of size `size`, sorted.
pub fn sample<R: Rng>(rng: &mut R, pool: &[usize], size: usize) -> Vec<usize> {
    let mut s: Vec<usize> = pool.choose_multiple(rng, size).copied().collect();
    s.sort_unstable();
    s
}
