use std::cmp::Ordering;

use super::Individual;
use crate::error::{Error, Result};

/// Pareto dominance under maximization of every objective.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strictly = true;
        }
    }
    strictly
}

/// Non-dominated sorting of evaluated individuals.
pub fn fast_nondominated_sort(pop: &[Individual]) -> Result<Vec<Vec<usize>>> {
    let m = pop.first().map_or(0, |p| p.objectives.len());
    for (i, ind) in pop.iter().enumerate() {
        if ind.objectives.is_empty() {
            return Err(Error::Unevaluated(i));
        }
        if ind.objectives.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: ind.objectives.len(),
            });
        }
    }
    let objs: Vec<&[f64]> = pop.iter().map(|p| p.objectives.as_slice()).collect();
    Ok(nondominated_fronts(&objs))
}

/// Partition objective vectors into rank-ordered fronts. Front 0 is the
/// non-dominated set; indices within each front are ascending.
pub fn nondominated_fronts<V: AsRef<[f64]>>(objs: &[V]) -> Vec<Vec<usize>> {
    let n = objs.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (objs[i].as_ref(), objs[j].as_ref());
            if dominates_unchecked(a, b) {
                dominates_list[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates_unchecked(b, a) {
                dominates_list[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Front index of every member.
pub fn front_ranks(fronts: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    for (r, front) in fronts.iter().enumerate() {
        for &i in front {
            rank[i] = r;
        }
    }
    rank
}

/// Indices of the non-dominated members. Uses a sort-and-sweep for two
/// objectives and pairwise comparison otherwise.
pub fn nondominated_indices<V: AsRef<[f64]>>(objs: &[V]) -> Vec<usize> {
    let n = objs.len();
    if n == 0 {
        return Vec::new();
    }
    if objs[0].as_ref().len() != 2 {
        return (0..n)
            .filter(|&i| !(0..n).any(|j| dominates_unchecked(objs[j].as_ref(), objs[i].as_ref())))
            .collect();
    }
    let mut order: Vec<usize> = (0..n).collect();
    let key = |i: usize| (objs[i].as_ref()[0], objs[i].as_ref()[1]);
    order.sort_by(|&a, &b| {
        let (a0, a1) = key(a);
        let (b0, b1) = key(b);
        b0.total_cmp(&a0).then(b1.total_cmp(&a1))
    });
    let mut keep = Vec::new();
    // Highest second objective among points with a strictly larger first objective.
    let mut best_above = f64::NEG_INFINITY;
    let mut g = 0;
    while g < n {
        let f0 = key(order[g]).0;
        let mut end = g;
        while end < n && key(order[end]).0 == f0 {
            end += 1;
        }
        let top = key(order[g]).1;
        if top > best_above {
            for &i in &order[g..end] {
                if key(i).1 == top {
                    keep.push(i);
                }
            }
        }
        best_above = best_above.max(top);
        g = end;
    }
    keep.sort_unstable();
    keep
}

/// Crowding distance of each member of one front.
///
/// Per objective, members are sorted; the two extremes get infinity and
/// interior members add `(next - prev) / (max - min)`. Objectives with zero
/// range add nothing. Fronts of two or fewer members are all infinite.
pub fn crowding_distance<V: AsRef<[f64]>>(front: &[V]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut dist = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let v = |i: usize| front[i].as_ref()[k];
        order.sort_by(|&a, &b| v(a).partial_cmp(&v(b)).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
        let lo = v(order[0]);
        let hi = v(order[n - 1]);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] += (v(order[w + 1]) - v(order[w - 1])) / range;
            }
        }
    }
    dist
}

/// Area dominated by `points` and dominating `reference`, for two maximized
/// objectives. Points not strictly better than the reference in both
/// objectives contribute nothing.
pub fn hypervolume_2d<V: AsRef<[f64]>>(points: &[V], reference: [f64; 2]) -> f64 {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.as_ref()[0], p.as_ref()[1]))
        .filter(|&(a, b)| a > reference[0] && b > reference[1])
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let mut area = 0.0;
    let mut floor = reference[1];
    for (a, b) in pts {
        if b > floor {
            area += (a - reference[0]) * (b - floor);
            floor = b;
        }
    }
    area
}
