//! Exhaustive optima for small payloads.

use serde_json::Value;

use super::oracle::{distance_matrix, keyed, num, nums};

/// Largest index set summing to the target, by enumeration.
pub fn subset_sum(p: &Value) -> Option<u64> {
    let xs: Vec<u64> = keyed(&p["numbers"]).into_iter().map(num).collect();
    let target = num(&p["target"]);
    let n = xs.len();
    assert!(n <= 22);
    let mut sums = vec![0u64; 1 << n];
    let mut best = None;
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + xs[low];
        if sums[mask] == target {
            best = best.max(Some(mask.count_ones() as u64));
        }
    }
    best
}

pub fn knapsack(p: &Value) -> u64 {
    let items: Vec<(u64, u64)> = keyed(&p["items"]).into_iter().map(|it| (num(&it[0]), num(&it[1]))).collect();
    let cap = num(&p["capacity"]);
    let n = items.len();
    assert!(n <= 22);
    let mut w = vec![0u64; 1 << n];
    let mut v = vec![0u64; 1 << n];
    let mut best = 0;
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        w[mask] = w[rest] + items[low].0;
        v[mask] = v[rest] + items[low].1;
        if w[mask] <= cap {
            best = best.max(v[mask]);
        }
    }
    best
}

/// Smallest cover size, or `None` when the subsets cannot cover U.
pub fn set_cover(p: &Value) -> Option<u64> {
    let u = num(&p["universe_size"]) as usize;
    let masks: Vec<u64> = keyed(&p["subsets"])
        .into_iter()
        .map(|s| nums(s).into_iter().fold(0u64, |m, e| m | 1 << e))
        .collect();
    assert!(masks.len() <= 20 && u <= 64);
    let full = if u == 64 { u64::MAX } else { (1u64 << u) - 1 };
    (0usize..1 << masks.len())
        .filter(|&sel| (0..masks.len()).filter(|i| sel >> i & 1 == 1).fold(0, |m, i| m | masks[i]) == full)
        .map(|sel| sel.count_ones() as u64)
        .min()
}

/// Held-Karp tour length.
pub fn tsp(p: &Value) -> u64 {
    let d = distance_matrix(p);
    let n = d.len();
    if n <= 1 {
        return 0;
    }
    let m = n - 1;
    const INF: u64 = u64::MAX / 4;
    // dp[mask][j]: shortest path from city 0 through `mask` (over cities 1..n) ending at j+1
    let mut dp = vec![vec![INF; m]; 1 << m];
    for j in 0..m {
        dp[1 << j][j] = d[0][j + 1];
    }
    for mask in 1usize..1 << m {
        for j in 0..m {
            let cur = dp[mask][j];
            if cur == INF || mask >> j & 1 == 0 {
                continue;
            }
            for k in 0..m {
                if mask >> k & 1 == 0 {
                    let next = mask | 1 << k;
                    let cand = cur + d[j + 1][k + 1];
                    if cand < dp[next][k] {
                        dp[next][k] = cand;
                    }
                }
            }
        }
    }
    (0..m).map(|j| dp[(1 << m) - 1][j] + d[j + 1][0]).min().unwrap()
}

/// Minimum balanced cut by enumerating every balanced split.
pub fn bisection(p: &Value) -> u64 {
    let n = num(&p["n"]) as usize;
    let mut w = vec![vec![0u64; n]; n];
    for (u, row) in keyed(&p["weights"]).into_iter().enumerate() {
        for (v, x) in row.as_object().unwrap() {
            w[u][v.parse::<usize>().unwrap()] = num(x);
        }
    }
    assert!(n <= 20);
    (0usize..1 << n)
        .filter(|m| {
            let k = m.count_ones() as usize;
            k == n / 2 || k == n.div_ceil(2)
        })
        .map(|m| {
            let mut cut = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if (m >> u & 1) != (m >> v & 1) {
                        cut += w[u][v];
                    }
                }
            }
            cut
        })
        .min()
        .unwrap()
}

/// Maximum clique size by enumerating vertex subsets.
pub fn clique(p: &Value) -> u64 {
    let n = num(&p["n"]) as usize;
    assert!(n <= 22);
    let adj: Vec<u32> = keyed(&p["adjacency"])
        .into_iter()
        .map(|row| nums(row).into_iter().fold(0u32, |m, v| m | 1 << v))
        .collect();
    let mut best = 0;
    for mask in 0u32..1 << n {
        let k = mask.count_ones();
        if k <= best {
            continue;
        }
        if (0..n).all(|v| mask >> v & 1 == 0 || (mask & !(1 << v)) & !adj[v] == 0) {
            best = k;
        }
    }
    best as u64
}
