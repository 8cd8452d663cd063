//! Partitions of graphs into pieces of exactly `k` vertices and diameter at
//! most `2(k - 1)`, cut one at a time from a spanning tree.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, Vertex};
use crate::seed;

/// A finite tree on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

impl Tree {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a tree needs a vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidGraph(format!("{} edges on {n} vertices", edges.len())));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidGraph(format!("bad edge {a} - {b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let tree = Tree { adj };
        let alive = vec![true; n];
        if bfs(&tree.adj, &alive, 0).reached != n {
            return Err(Error::InvalidGraph("edges do not connect the vertices".into()));
        }
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn diameter(&self) -> usize {
        let alive = vec![true; self.len()];
        let a = bfs(&self.adj, &alive, 0).farthest;
        bfs(&self.adj, &alive, a).dist[bfs(&self.adj, &alive, a).farthest]
    }
}

struct Search {
    dist: Vec<usize>,
    parent: Vec<usize>,
    farthest: usize,
    reached: usize,
}

/// BFS over live vertices; the farthest vertex is the smallest index among
/// those at maximal distance.
fn bfs(adj: &[Vec<usize>], alive: &[bool], root: usize) -> Search {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([root]);
    dist[root] = 0;
    let mut farthest = root;
    let mut reached = 0;
    while let Some(v) = queue.pop_front() {
        reached += 1;
        if dist[v] > dist[farthest] || (dist[v] == dist[farthest] && v < farthest) {
            farthest = v;
        }
        for &w in &adj[v] {
            if alive[w] && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    Search {
        dist,
        parent,
        farthest,
        reached,
    }
}

/// First `k` vertices of the live subtree in the cutting order: pick a
/// diametral path `u_0 .. u_d`; list `u_0`; then for `i = 1 .. d-1` the
/// vertices hanging off `u_i`, farthest from `u_i` first and `u_i` last; then
/// `u_d`. Every prefix of this order leaves a connected remainder.
fn cut_prefix(adj: &[Vec<usize>], alive: &[bool], start: usize, k: usize) -> Vec<usize> {
    let a = bfs(adj, alive, start).farthest;
    let from_a = bfs(adj, alive, a);
    let mut path = vec![from_a.farthest];
    while *path.last().unwrap() != a {
        path.push(from_a.parent[*path.last().unwrap()]);
    }
    let mut on_path = vec![false; adj.len()];
    for &u in &path {
        on_path[u] = true;
    }
    let mut order = vec![path[0]];
    let d = path.len() - 1;
    for &u in &path[1..d.max(1)] {
        if order.len() >= k {
            break;
        }
        let mut hanging = vec![(0usize, u)];
        let mut i = 0;
        while i < hanging.len() {
            let (dv, v) = hanging[i];
            for &w in &adj[v] {
                if alive[w] && !on_path[w] && !hanging.iter().any(|&(_, h)| h == w) {
                    hanging.push((dv + 1, w));
                }
            }
            i += 1;
        }
        hanging.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        order.extend(hanging.into_iter().map(|(_, v)| v));
    }
    if d >= 1 {
        order.push(path[d]);
    }
    order.truncate(k);
    order
}

/// A set `S` of `k` vertices with `diam(S) <= 2(k - 1)` and `T \ S` connected.
/// Requires `diam(T) > k`.
pub fn tree_cut(tree: &Tree, k: usize) -> Result<Vec<usize>> {
    let diameter = tree.diameter();
    if k == 0 || diameter <= k {
        return Err(Error::DiameterTooSmall { diameter, k });
    }
    let alive = vec![true; tree.len()];
    let mut s = cut_prefix(&tree.adj, &alive, 0, k);
    s.sort_unstable();
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub k: usize,
    /// Pieces as sorted vertex lists, in the order they were cut.
    pub pieces: Vec<Vec<Vertex>>,
    /// Diameter of each piece, measured in the window.
    pub diameters: Vec<u32>,
    /// Index of the one piece of size other than `k`, if any.
    pub remainder: Option<usize>,
}

impl Partition {
    /// Piece index of every window vertex.
    pub fn piece_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (i, p) in self.pieces.iter().enumerate() {
            for &v in p {
                out[v as usize] = i;
            }
        }
        out
    }

    /// Largest diameter over all pieces, the remainder included.
    pub fn max_diameter(&self) -> u32 {
        self.diameters.iter().copied().max().unwrap_or(0)
    }
}

/// Cuts a breadth-first spanning tree, rooted at a seeded random vertex, into
/// pieces of `k` vertices. When fewer than `k` vertices are left over they
/// form the remainder piece.
pub fn partition_window(window: &GraphWindow, k: usize, seed: u64) -> Result<Partition> {
    if k == 0 {
        return Err(Error::InvalidArgument("piece size must be positive".into()));
    }
    let n = window.len();
    let root = seed::stream(seed, 0).gen_range(0..n);
    let mut adj = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        for &w in window.neighbors(v as Vertex) {
            let w = w as usize;
            if !seen[w] {
                seen[w] = true;
                adj[v].push(w);
                adj[w].push(v);
                queue.push_back(w);
            }
        }
    }

    let mut alive = vec![true; n];
    let mut left = n;
    let mut start = 0;
    let mut pieces = Vec::new();
    while left > k {
        while !alive[start] {
            start += 1;
        }
        let cut = cut_prefix(&adj, &alive, start, k);
        for &v in &cut {
            alive[v] = false;
        }
        left -= k;
        let mut piece: Vec<Vertex> = cut.into_iter().map(|v| v as Vertex).collect();
        piece.sort_unstable();
        pieces.push(piece);
    }
    let mut remainder = None;
    if left > 0 {
        let last: Vec<Vertex> = (0..n).filter(|&v| alive[v]).map(|v| v as Vertex).collect();
        if last.len() != k {
            remainder = Some(pieces.len());
        }
        pieces.push(last);
    }
    let diameters = pieces.iter().map(|p| piece_diameter(window, p)).collect();
    Ok(Partition {
        k,
        pieces,
        diameters,
        remainder,
    })
}

/// Largest window distance between two vertices of `piece`.
fn piece_diameter(window: &GraphWindow, piece: &[Vertex]) -> u32 {
    let mut best = 0;
    let mut dist: alloc::collections::BTreeMap<Vertex, u32> = alloc::collections::BTreeMap::new();
    for &s in piece {
        dist.clear();
        dist.insert(s, 0);
        let mut queue = VecDeque::from([s]);
        let mut found = 1;
        while let Some(v) = queue.pop_front() {
            if found == piece.len() {
                break;
            }
            let dv = dist[&v];
            for &w in window.neighbors(v) {
                if let alloc::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(dv + 1);
                    if piece.binary_search(&w).is_ok() {
                        found += 1;
                        best = best.max(dv + 1);
                    }
                    queue.push_back(w);
                }
            }
        }
    }
    best
}

pub mod verify {
    //! Checks a [`Partition`] against its window from scratch.

    use alloc::format;
    use alloc::string::String;
    use alloc::vec;
    use alloc::vec::Vec;

    use super::Partition;
    use crate::graph::GraphWindow;

    /// All problems found; empty means the partition is valid.
    pub fn verify_partition(window: &GraphWindow, p: &Partition) -> Vec<String> {
        let mut problems = Vec::new();
        let n = window.len();
        let mut owner = vec![usize::MAX; n];
        for (i, piece) in p.pieces.iter().enumerate() {
            for &v in piece {
                let v = v as usize;
                if v >= n {
                    problems.push(format!("piece {i} has foreign vertex {v}"));
                } else if owner[v] != usize::MAX {
                    problems.push(format!("vertex {v} is in pieces {} and {i}", owner[v]));
                } else {
                    owner[v] = i;
                }
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            problems.push(format!("vertex {} is in no piece", window.id(v as u32)));
        }
        let odd: Vec<usize> = (0..p.pieces.len()).filter(|&i| p.pieces[i].len() != p.k).collect();
        match (odd.as_slice(), p.remainder) {
            ([], None) => {}
            ([i], Some(r)) if *i == r && p.pieces[r].len() < p.k => {}
            _ => problems.push(format!(
                "pieces {odd:?} have the wrong size, declared remainder {:?}",
                p.remainder
            )),
        }
        if p.diameters.len() != p.pieces.len() {
            problems.push("one diameter per piece is required".into());
            return problems;
        }
        let limit = 2 * (p.k as u32).saturating_sub(1);
        for (i, piece) in p.pieces.iter().enumerate() {
            if piece.iter().any(|&v| v as usize >= n) {
                continue;
            }
            let d = diameter(window, piece);
            if d != p.diameters[i] {
                problems.push(format!("piece {i} has diameter {d}, reported {}", p.diameters[i]));
            }
            if Some(i) != p.remainder && d > limit {
                problems.push(format!("piece {i} has diameter {d} > {limit}"));
            }
        }
        problems
    }

    fn diameter(window: &GraphWindow, piece: &[u32]) -> u32 {
        let mut dist = vec![u32::MAX; window.len()];
        let mut best = 0;
        for &s in piece {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            dist[s as usize] = 0;
            let mut frontier = vec![s];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for v in frontier {
                    for &w in window.neighbors(v) {
                        if dist[w as usize] == u32::MAX {
                            dist[w as usize] = dist[v as usize] + 1;
                            next.push(w);
                        }
                    }
                }
                frontier = next;
            }
            for &t in piece {
                best = best.max(dist[t as usize]);
            }
        }
        best
    }
}
