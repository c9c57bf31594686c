use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::whitney::{dist, long_distance, WhitneyDecomposition};
use crate::error::{Error, Result};

/// Neighbor path `Q = Q_1, ..., Q_n = S` with its central cube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub cubes: Vec<usize>,
    /// Position of the central cube `Q_S`.
    pub central_index: usize,
    /// Largest ε for which both admissibility conditions hold.
    pub eps_achieved: f64,
}

impl Chain {
    pub fn first(&self) -> usize {
        self.cubes[0]
    }

    pub fn last(&self) -> usize {
        *self.cubes.last().unwrap()
    }

    pub fn central(&self) -> usize {
        self.cubes[self.central_index]
    }

    /// The same chain traversed from the other end.
    pub fn reversed(&self, w: &WhitneyDecomposition) -> Chain {
        let cubes: Vec<usize> = self.cubes.iter().rev().copied().collect();
        let j0 = cubes.len() - 1 - self.central_index;
        Chain { eps_achieved: chain_eps(w, &cubes, j0), cubes, central_index: j0 }
    }

    /// Sum of side lengths `l([Q,S])`.
    pub fn length(&self, w: &WhitneyDecomposition) -> f64 {
        self.cubes.iter().map(|&i| w.cubes[i].side).sum()
    }
}

/// ε achieved by a chain with central position `j0`:
/// the minimum of `D(Q,S)/l([Q,S])`, `l(Q_j)/D(Q,Q_j)` for `j ≤ j0` and
/// `l(Q_j)/D(Q_j,S)` for `j ≥ j0`.
pub fn chain_eps(w: &WhitneyDecomposition, cubes: &[usize], j0: usize) -> f64 {
    let q = &w.cubes[cubes[0]];
    let s = &w.cubes[*cubes.last().unwrap()];
    let len: f64 = cubes.iter().map(|&i| w.cubes[i].side).sum();
    let mut eps = long_distance(q, s) / len;
    for (j, &c) in cubes.iter().enumerate() {
        let p = &w.cubes[c];
        if j <= j0 {
            eps = eps.min(p.side / long_distance(q, p));
        }
        if j >= j0 {
            eps = eps.min(p.side / long_distance(p, s));
        }
    }
    eps
}

fn best_central(w: &WhitneyDecomposition, cubes: &[usize]) -> (usize, f64) {
    let top = cubes.iter().map(|&i| w.cubes[i].side).fold(0.0, f64::max);
    let mut best = (0, f64::NEG_INFINITY);
    for (j, &c) in cubes.iter().enumerate() {
        if w.cubes[c].side == top {
            let e = chain_eps(w, cubes, j);
            if e > best.1 {
                best = (j, e);
            }
        }
    }
    best
}

/// Climbs from `start` to larger neighbors while the side is below `limit`.
/// Ties prefer the neighbor closest to `target`, then the smaller center in
/// lexicographic order.
fn ascend(w: &WhitneyDecomposition, start: usize, target: &[f64], limit: f64) -> Vec<usize> {
    let mut path = vec![start];
    let mut cur = start;
    while w.cubes[cur].side < limit {
        let side = w.cubes[cur].side;
        let next = w.neighbors[cur].iter().copied().filter(|&j| w.cubes[j].side > side).min_by(|&a, &b| {
            let (ca, cb) = (&w.cubes[a], &w.cubes[b]);
            cb.side
                .partial_cmp(&ca.side)
                .unwrap()
                .then(dist(&ca.center(), target).partial_cmp(&dist(&cb.center(), target)).unwrap())
                .then(ca.center().partial_cmp(&cb.center()).unwrap())
        });
        match next {
            Some(j) => {
                path.push(j);
                cur = j;
            }
            None => break,
        }
    }
    path
}

fn bfs(w: &WhitneyDecomposition, from: usize, to: usize, min_side: f64) -> Option<Vec<usize>> {
    let n = w.len();
    let mut prev = vec![usize::MAX; n];
    let mut q = VecDeque::new();
    prev[from] = from;
    q.push_back(from);
    let target = w.cubes[to].center();
    while let Some(u) = q.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut c = to;
            while c != from {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return Some(path);
        }
        // expand toward the target first so equal-hop paths are straight
        let mut nb: Vec<usize> = w.neighbors[u]
            .iter()
            .copied()
            .filter(|&j| prev[j] == usize::MAX && (w.cubes[j].side >= min_side || j == to))
            .collect();
        nb.sort_by(|&a, &b| {
            dist(&w.cubes[a].center(), &target).partial_cmp(&dist(&w.cubes[b].center(), &target)).unwrap()
        });
        for j in nb {
            prev[j] = u;
            q.push_back(j);
        }
    }
    None
}

fn remove_loops(path: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(path.len());
    for c in path {
        if let Some(pos) = out.iter().position(|&x| x == c) {
            out.truncate(pos + 1);
        } else {
            out.push(c);
        }
    }
    out
}

/// Builds a chain from `q` to `s`: both ends climb to cubes of side about
/// `D(Q,S)/4`, and the two apexes are joined by a shortest neighbor path
/// through cubes no smaller than half the smaller apex.
pub fn admissible_chain(w: &WhitneyDecomposition, q: usize, s: usize) -> Result<Chain> {
    let n = w.len();
    if q >= n || s >= n {
        return Err(Error::InvalidArgument(format!("cube id out of range ({q}, {s}) for {n} cubes")));
    }
    if q == s {
        return Ok(Chain { cubes: vec![q], central_index: 0, eps_achieved: chain_eps(w, &[q], 0) });
    }
    let dqs = long_distance(&w.cubes[q], &w.cubes[s]);
    let up_q = ascend(w, q, &w.cubes[s].center(), dqs / 4.0);
    let up_s = ascend(w, s, &w.cubes[q].center(), dqs / 4.0);
    let (aq, as_) = (*up_q.last().unwrap(), *up_s.last().unwrap());
    let min_side = 0.5 * w.cubes[aq].side.min(w.cubes[as_].side);
    let join = bfs(w, aq, as_, min_side).or_else(|| bfs(w, aq, as_, 0.0)).ok_or(Error::NoChain { from: q, to: s })?;
    let mut path = up_q;
    path.extend_from_slice(&join[1..]);
    path.extend(up_s.iter().rev().skip(1));
    let cubes = remove_loops(path);
    let (j0, eps) = best_central(w, &cubes);
    Ok(Chain { cubes, central_index: j0, eps_achieved: eps })
}
