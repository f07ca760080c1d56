//! Independent shortest-path oracles.

pub fn floyd_warshall(n: usize, edges: &[(usize, usize, i64)]) -> Vec<Vec<Option<i64>>> {
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(a, b, c) in edges {
        for (x, y) in [(a, b), (b, a)] {
            if d[x][y].is_none_or(|old| c < old) {
                d[x][y] = Some(c);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|old| a + b < old) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Lexicographically smallest shortest path, built greedily from the
/// all-pairs table.
pub fn oracle_path(n: usize, edges: &[(usize, usize, i64)], d: &[Vec<Option<i64>>], from: usize, to: usize) -> Vec<usize> {
    let mut cost = vec![vec![None::<i64>; n]; n];
    for &(a, b, c) in edges {
        for (x, y) in [(a, b), (b, a)] {
            if cost[x][y].is_none_or(|old| c < old) {
                cost[x][y] = Some(c);
            }
        }
    }
    let mut path = vec![from];
    let mut at = from;
    while at != to {
        at = (0..n)
            .find(|&v| match (cost[at][v], d[v][to], d[at][to]) {
                (Some(w), Some(rest), Some(total)) => w + rest == total,
                _ => false,
            })
            .expect("some neighbour lies on a shortest path");
        path.push(at);
    }
    path
}

pub fn random_connected_graph(rng: &mut impl FnMut(u64) -> u64) -> (usize, Vec<(usize, usize, i64)>) {
    let n = 2 + rng(49) as usize;
    let mut edges = Vec::new();
    // spanning tree first, then extra edges
    for v in 1..n {
        let u = rng(v as u64) as usize;
        edges.push((u, v, 1 + rng(20) as i64));
    }
    let extra = rng(2 * n as u64) as usize;
    for _ in 0..extra {
        let (a, b) = (rng(n as u64) as usize, rng(n as u64) as usize);
        if a != b {
            edges.push((a, b, 1 + rng(20) as i64));
        }
    }
    (n, edges)
}

/// Xorshift generator returning values below `bound`; independent of the
/// game's generator.
pub fn xorshift(seed: u64) -> impl FnMut(u64) -> u64 {
    let mut state = seed;
    move |bound: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % bound.max(1)
    }
}
