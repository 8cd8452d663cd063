//! Finite windows of bounded-degree graphs, measured by counting vertices.
//!
//! A [`GraphWindow`] is an explicitly enumerated ball of some host graph. It
//! holds every host vertex within `interior_radius` of its center, and every
//! vertex at depth strictly below `interior_radius` carries its complete host
//! neighbor list. Vertices at depth `interior_radius` or more form the fringe:
//! they are present, but their neighbor lists may be truncated. Operations that
//! would have to expand a fringe vertex fail with [`Error::OutOfInterior`]
//! instead of silently under-counting.
//!
//! Under this convention a breadth-first search that only expands complete
//! vertices computes host distances exactly, so balls, neighborhoods and
//! boundaries agree with the host graph whenever they succeed.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub type Vertex = u32;

static NEXT_TOKEN: AtomicU64 = AtomicU64::new(1);

/// Identity of a window instance; vertex sets remember the window they index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowToken(u64);

impl WindowToken {
    fn fresh() -> Self {
        WindowToken(NEXT_TOKEN.fetch_add(1, Ordering::Relaxed))
    }
}

/// Vertex ids packed into one buffer, plus an id-sorted permutation for lookup.
#[derive(Clone, Debug, Default)]
struct IdTable {
    buf: String,
    ends: Vec<usize>,
    sorted: Vec<Vertex>,
}

impl IdTable {
    fn push(&mut self, id: &str) {
        self.buf.push_str(id);
        self.ends.push(self.buf.len());
    }

    fn len(&self) -> usize {
        self.ends.len()
    }

    fn get(&self, v: Vertex) -> &str {
        let v = v as usize;
        let start = if v == 0 { 0 } else { self.ends[v - 1] };
        &self.buf[start..self.ends[v]]
    }

    fn index(&mut self) -> Result<()> {
        let mut sorted: Vec<Vertex> = (0..self.len() as Vertex).collect();
        sorted.sort_unstable_by(|&a, &b| self.get(a).cmp(self.get(b)));
        for pair in sorted.windows(2) {
            if self.get(pair[0]) == self.get(pair[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate vertex id {}",
                    self.get(pair[0])
                )));
            }
        }
        self.sorted = sorted;
        Ok(())
    }

    fn find(&self, id: &str) -> Option<Vertex> {
        self.sorted
            .binary_search_by(|&v| self.get(v).cmp(id))
            .ok()
            .map(|i| self.sorted[i])
    }
}

/// Incremental constructor for [`GraphWindow`]. Vertices are numbered in push
/// order; neighbor lists may refer to vertices pushed later.
#[derive(Debug)]
pub struct WindowBuilder {
    host: String,
    ids: IdTable,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl WindowBuilder {
    pub fn new(host: impl Into<String>) -> Self {
        WindowBuilder {
            host: host.into(),
            ids: IdTable::default(),
            offsets: vec![0],
            targets: Vec::new(),
        }
    }

    pub fn push_vertex(&mut self, id: &str, neighbors: &[Vertex]) -> Vertex {
        let v = self.ids.len() as Vertex;
        self.ids.push(id);
        self.targets.extend_from_slice(neighbors);
        self.offsets.push(self.targets.len());
        v
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.len() == 0
    }

    /// Validates the graph and computes depths from `center`.
    pub fn finish(
        mut self,
        center: Vertex,
        interior_radius: u32,
        degree_bound: u32,
    ) -> Result<GraphWindow> {
        let n = self.ids.len();
        if n == 0 {
            return Err(Error::InvalidGraph("window has no vertices".into()));
        }
        if n > Vertex::MAX as usize {
            return Err(Error::InvalidGraph("too many vertices".into()));
        }
        if center as usize >= n {
            return Err(Error::InvalidGraph("center is not a vertex".into()));
        }
        if self.host.is_empty() || self.host.chars().any(char::is_whitespace) {
            return Err(Error::InvalidGraph(format!("bad host name {:?}", self.host)));
        }
        for v in 0..n as Vertex {
            let id = self.ids.get(v);
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(Error::InvalidGraph(format!("bad vertex id {id:?}")));
            }
        }
        self.ids.index()?;
        let window = GraphWindow {
            token: WindowToken::fresh(),
            host: self.host,
            ids: self.ids,
            offsets: self.offsets,
            targets: self.targets,
            center,
            interior_radius,
            degree_bound,
            depth: Vec::new(),
        };
        window.check_adjacency()?;
        let depth = window.bfs_depths();
        if let Some(v) = depth.iter().position(|&d| d == u32::MAX) {
            return Err(Error::InvalidGraph(format!(
                "window is disconnected: {} unreachable from center",
                window.ids.get(v as Vertex)
            )));
        }
        Ok(GraphWindow { depth, ..window })
    }
}

/// A finite, explicitly enumerated ball of a bounded-degree host graph.
#[derive(Clone, Debug)]
pub struct GraphWindow {
    token: WindowToken,
    host: String,
    ids: IdTable,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    center: Vertex,
    interior_radius: u32,
    degree_bound: u32,
    depth: Vec<u32>,
}

/// Sorted set of distinct vertices of one window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    window: WindowToken,
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn window(&self) -> WindowToken {
        self.window
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.window == other.window && self.iter().all(|v| other.contains(v))
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.members
    }
}

/// Minimum and maximum ball sizes over the interior centers of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryBounds {
    pub rows: Vec<BallBounds>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallBounds {
    pub radius: u32,
    pub min: u64,
    pub max: u64,
}

impl GeometryBounds {
    /// `v_r`, the smallest ball of radius `r`.
    pub fn min_ball(&self, r: u32) -> Option<u64> {
        self.rows.iter().find(|b| b.radius == r).map(|b| b.min)
    }

    /// `V_r`, the largest ball of radius `r`.
    pub fn max_ball(&self, r: u32) -> Option<u64> {
        self.rows.iter().find(|b| b.radius == r).map(|b| b.max)
    }
}

/// Visited-set for breadth-first searches: a bitmap for large searches and a
/// tree set when only a handful of vertices will be touched.
enum Visited {
    Dense(Vec<u64>),
    Sparse(BTreeSet<Vertex>),
}

impl Visited {
    fn for_search(n: usize, sources: usize, degree: u32, radius: u32) -> Self {
        let mut estimate = sources as u64;
        for _ in 0..radius.min(8) {
            estimate = estimate.saturating_mul(degree as u64 + 1);
        }
        if estimate.saturating_mul(16) < n as u64 {
            Visited::Sparse(BTreeSet::new())
        } else {
            Visited::Dense(vec![0; n.div_ceil(64)])
        }
    }

    /// Marks `v`; returns `true` if it was not marked before.
    fn insert(&mut self, v: Vertex) -> bool {
        match self {
            Visited::Dense(bits) => {
                let (word, bit) = (v as usize / 64, v % 64);
                let fresh = bits[word] & (1 << bit) == 0;
                bits[word] |= 1 << bit;
                fresh
            }
            Visited::Sparse(set) => set.insert(v),
        }
    }
}

/// Membership bitmap for a vertex set.
struct Membership(Vec<u64>);

impl Membership {
    fn new(n: usize, members: &[Vertex]) -> Self {
        let mut bits = vec![0u64; n.div_ceil(64)];
        for &v in members {
            bits[v as usize / 64] |= 1 << (v % 64);
        }
        Membership(bits)
    }

    fn contains(&self, v: Vertex) -> bool {
        self.0[v as usize / 64] & (1 << (v % 64)) != 0
    }
}

impl GraphWindow {
    /// Builds a window from explicit adjacency lists.
    pub fn from_adjacency(
        host: &str,
        ids: &[&str],
        adjacency: &[Vec<Vertex>],
        center: Vertex,
        interior_radius: u32,
        degree_bound: u32,
    ) -> Result<Self> {
        if ids.len() != adjacency.len() {
            return Err(Error::InvalidGraph(
                "id list and adjacency have different lengths".into(),
            ));
        }
        let mut builder = WindowBuilder::new(host);
        for (id, nbrs) in ids.iter().zip(adjacency) {
            builder.push_vertex(id, nbrs);
        }
        builder.finish(center, interior_radius, degree_bound)
    }

    /// Wraps a finite connected graph as a closed window: nothing lies outside
    /// it, so every vertex counts as complete.
    pub fn closed(
        host: &str,
        ids: &[&str],
        adjacency: &[Vec<Vertex>],
        center: Vertex,
    ) -> Result<Self> {
        let degree = adjacency.iter().map(Vec::len).max().unwrap_or(0).max(1) as u32;
        let provisional = Self::from_adjacency(host, ids, adjacency, center, 0, degree)?;
        let eccentricity = provisional.depth.iter().copied().max().unwrap_or(0);
        Ok(GraphWindow {
            interior_radius: eccentricity + 1,
            ..provisional
        })
    }

    fn check_adjacency(&self) -> Result<()> {
        let n = self.len();
        for v in 0..n as Vertex {
            let nbrs = self.neighbors(v);
            if nbrs.len() > self.degree_bound as usize {
                return Err(Error::InvalidGraph(format!(
                    "vertex {} has degree {} > {}",
                    self.id(v),
                    nbrs.len(),
                    self.degree_bound
                )));
            }
            for (i, &w) in nbrs.iter().enumerate() {
                if w as usize >= n {
                    return Err(Error::InvalidGraph(format!(
                        "vertex {} has out-of-range neighbor {w}",
                        self.id(v)
                    )));
                }
                if w == v {
                    return Err(Error::InvalidGraph(format!("self-loop at {}", self.id(v))));
                }
                if nbrs[..i].contains(&w) {
                    return Err(Error::InvalidGraph(format!(
                        "repeated edge {} - {}",
                        self.id(v),
                        self.id(w)
                    )));
                }
                if !self.neighbors(w).contains(&v) {
                    return Err(Error::InvalidGraph(format!(
                        "edge {} - {} is not symmetric",
                        self.id(v),
                        self.id(w)
                    )));
                }
            }
        }
        Ok(())
    }

    fn bfs_depths(&self) -> Vec<u32> {
        let mut depth = vec![u32::MAX; self.len()];
        let mut queue = vec![self.center];
        depth[self.center as usize] = 0;
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &w in self.neighbors(v) {
                if depth[w as usize] == u32::MAX {
                    depth[w as usize] = depth[v as usize] + 1;
                    queue.push(w);
                }
            }
        }
        depth
    }

    pub fn token(&self) -> WindowToken {
        self.token
    }

    pub fn host(&self) -> &str {
        &self.host
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.len() == 0
    }

    pub fn center(&self) -> Vertex {
        self.center
    }

    pub fn interior_radius(&self) -> u32 {
        self.interior_radius
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.len() as Vertex
    }

    pub fn id(&self, v: Vertex) -> &str {
        self.ids.get(v)
    }

    pub fn vertex(&self, id: &str) -> Option<Vertex> {
        self.ids.find(id)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Graph distance from the center.
    pub fn depth(&self, v: Vertex) -> u32 {
        self.depth[v as usize]
    }

    /// Whether the neighbor list of `v` is the full host neighbor list.
    pub fn is_complete(&self, v: Vertex) -> bool {
        self.depth[v as usize] < self.interior_radius
    }

    pub fn is_interior(&self, v: Vertex) -> bool {
        self.depth[v as usize] <= self.interior_radius
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn set_from_vertices(&self, vertices: impl IntoIterator<Item = Vertex>) -> Result<VertexSet> {
        let mut members: Vec<Vertex> = vertices.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| v as usize >= self.len()) {
            return Err(Error::InvalidArgument(format!("vertex {v} is not in the window")));
        }
        members.sort_unstable();
        members.dedup();
        Ok(self.set_sorted(members))
    }

    pub fn set_from_ids<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<VertexSet> {
        let members = ids
            .into_iter()
            .map(|id| {
                self.vertex(id)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex id {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.set_from_vertices(members)
    }

    pub fn empty_set(&self) -> VertexSet {
        self.set_sorted(Vec::new())
    }

    pub(crate) fn set_sorted(&self, members: Vec<Vertex>) -> VertexSet {
        debug_assert!(members.windows(2).all(|p| p[0] < p[1]));
        VertexSet {
            window: self.token,
            members,
        }
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<()> {
        if set.window != self.token {
            return Err(Error::WindowMismatch(format!(
                "vertex set does not belong to window {}",
                self.host
            )));
        }
        Ok(())
    }

    fn out_of_interior(&self, v: Vertex, radius: u32) -> Error {
        Error::OutOfInterior {
            vertex: self.id(v).to_string(),
            radius,
        }
    }

    /// Multi-source search out to `radius`; every vertex that gets expanded
    /// must be complete. Returns the visited vertices, unsorted.
    fn collar(&self, sources: &[Vertex], radius: u32) -> Result<Vec<Vertex>> {
        let mut visited = Visited::for_search(self.len(), sources.len(), self.degree_bound, radius);
        let mut layer: Vec<Vertex> = sources.iter().copied().filter(|&v| visited.insert(v)).collect();
        let mut reached = layer.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for &v in &layer {
                if !self.is_complete(v) {
                    return Err(self.out_of_interior(v, radius));
                }
                next.extend(self.neighbors(v).iter().copied().filter(|&w| visited.insert(w)));
            }
            if next.is_empty() {
                break;
            }
            reached.extend_from_slice(&next);
            layer = next;
        }
        Ok(reached)
    }

    /// Breadth-first distances from `x` up to `limit`, expanding complete
    /// vertices only. Never fails; near the fringe the result is partial.
    pub fn reach(&self, x: Vertex, limit: u32) -> Vec<(Vertex, u32)> {
        let mut visited = Visited::for_search(self.len(), 1, self.degree_bound, limit);
        visited.insert(x);
        let mut out = vec![(x, 0)];
        let mut head = 0;
        while head < out.len() {
            let (v, d) = out[head];
            head += 1;
            if d == limit || !self.is_complete(v) {
                continue;
            }
            for &w in self.neighbors(v) {
                if visited.insert(w) {
                    out.push((w, d + 1));
                }
            }
        }
        out
    }

    /// The closed ball `B(x, r)`.
    pub fn ball(&self, x: Vertex, r: u32) -> Result<VertexSet> {
        if x as usize >= self.len() {
            return Err(Error::InvalidArgument(format!("vertex {x} is not in the window")));
        }
        if self.depth(x).saturating_add(r) > self.interior_radius {
            return Err(self.out_of_interior(x, r));
        }
        let mut members = self.collar(&[x], r)?;
        members.sort_unstable();
        Ok(self.set_sorted(members))
    }

    /// The `r`-neighborhood `A^{+r} = {x : d(x, A) <= r}`.
    pub fn neighborhood(&self, set: &VertexSet, r: u32) -> Result<VertexSet> {
        self.check_set(set)?;
        let mut members = self.collar(set.as_slice(), r)?;
        members.sort_unstable();
        Ok(self.set_sorted(members))
    }

    /// The outer vertex boundary `A^{+1} \ A`.
    pub fn outer_boundary(&self, set: &VertexSet) -> Result<VertexSet> {
        let grown = self.neighborhood(set, 1)?;
        let members = grown.iter().filter(|&v| !set.contains(v)).collect();
        Ok(self.set_sorted(members))
    }

    /// The `r`-boundary `A^{+r} ∩ (X \ A)^{+r}`, computed as the union of the
    /// outer collar `A^{+r} \ A` and the inner collar of points of `A` within
    /// `r` of the complement.
    pub fn boundary(&self, set: &VertexSet, r: u32) -> Result<VertexSet> {
        self.check_set(set)?;
        if r == 0 || set.is_empty() {
            return Ok(self.empty_set());
        }
        let inside = Membership::new(self.len(), set.as_slice());
        let mut members: Vec<Vertex> = self
            .collar(set.as_slice(), r)?
            .into_iter()
            .filter(|&v| !inside.contains(v))
            .collect();

        // Points of A adjacent to the complement sit at distance 1 from it;
        // a shortest path from any a in A to the complement stays in A until
        // its last step, so the inner collar is a search confined to A.
        let mut visited = Visited::for_search(self.len(), set.len(), self.degree_bound, 0);
        let mut layer = Vec::new();
        for a in set.iter() {
            if !self.is_complete(a) {
                return Err(self.out_of_interior(a, r));
            }
            if self.neighbors(a).iter().any(|&w| !inside.contains(w)) {
                visited.insert(a);
                layer.push(a);
            }
        }
        for _ in 1..r {
            let mut next = Vec::new();
            for &v in &layer {
                next.extend(
                    self.neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&w| inside.contains(w) && visited.insert(w)),
                );
            }
            members.extend_from_slice(&layer);
            layer = next;
        }
        members.extend_from_slice(&layer);
        members.sort_unstable();
        members.dedup();
        let result = self.set_sorted(members);
        debug_assert_eq!(
            Ok(&result),
            self.boundary_by_definition(set, r).as_ref(),
            "boundary decomposition disagrees with the definition"
        );
        Ok(result)
    }

    /// `A^{+r} ∩ (X \ A)^{+r}` evaluated literally, one ball per point of `A`.
    pub fn boundary_by_definition(&self, set: &VertexSet, r: u32) -> Result<VertexSet> {
        self.check_set(set)?;
        if r == 0 || set.is_empty() {
            return Ok(self.empty_set());
        }
        let inside = Membership::new(self.len(), set.as_slice());
        let mut members = Vec::new();
        for x in self.neighborhood(set, r)?.iter() {
            if !inside.contains(x) || self.collar(&[x], r)?.iter().any(|&y| !inside.contains(y)) {
                members.push(x);
            }
        }
        Ok(self.set_sorted(members))
    }

    /// Ball-size bounds `v_r <= |B(x, r)| <= V_r` for `r = 1..=r_max`, over
    /// every center whose `r_max`-ball lies in the interior.
    pub fn verify_geometry(&self, r_max: u32) -> Result<GeometryBounds> {
        if r_max == 0 {
            return Ok(GeometryBounds { rows: Vec::new() });
        }
        if 2 * r_max > self.interior_radius {
            return Err(Error::InvalidArgument(format!(
                "r_max = {r_max} exceeds half the interior radius {}",
                self.interior_radius
            )));
        }
        let mut min = vec![u64::MAX; r_max as usize];
        let mut max = vec![0u64; r_max as usize];
        for x in self.vertices().filter(|&x| self.depth(x) + r_max <= self.interior_radius) {
            let mut per_layer = vec![0u64; r_max as usize + 1];
            for (_, d) in self.reach(x, r_max) {
                per_layer[d as usize] += 1;
            }
            let mut size = per_layer[0];
            for r in 1..=r_max as usize {
                size += per_layer[r];
                min[r - 1] = min[r - 1].min(size);
                max[r - 1] = max[r - 1].max(size);
            }
        }
        let rows = (1..=r_max)
            .map(|r| BallBounds {
                radius: r,
                min: min[r as usize - 1],
                max: max[r as usize - 1],
            })
            .collect();
        Ok(GeometryBounds { rows })
    }

    /// The sub-window `B(center, radius)`, with vertex order preserved. Also
    /// returns the parent index of every vertex of the sub-window.
    pub fn sub_ball(&self, radius: u32) -> Result<(GraphWindow, Vec<Vertex>)> {
        if radius > self.interior_radius {
            return Err(Error::WindowTooSmall(format!(
                "sub-ball radius {radius} exceeds interior radius {}",
                self.interior_radius
            )));
        }
        let kept: Vec<Vertex> = self.vertices().filter(|&v| self.depth(v) <= radius).collect();
        let mut new_index = vec![Vertex::MAX; self.len()];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v as usize] = i as Vertex;
        }
        let mut builder = WindowBuilder::new(self.host.clone());
        let mut nbrs = Vec::new();
        for &v in &kept {
            nbrs.clear();
            nbrs.extend(
                self.neighbors(v)
                    .iter()
                    .map(|&w| new_index[w as usize])
                    .filter(|&w| w != Vertex::MAX),
            );
            builder.push_vertex(self.id(v), &nbrs);
        }
        let center = new_index[self.center as usize];
        let window = builder.finish(center, radius, self.degree_bound)?;
        Ok((window, kept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path `-n..=n` as a window of the integers with interior radius `n`.
    fn line(n: i64) -> GraphWindow {
        let ids: Vec<String> = (-n..=n).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let adjacency: Vec<Vec<Vertex>> = (0..ids.len())
            .map(|i| {
                let mut nb = Vec::new();
                if i + 1 < ids.len() {
                    nb.push(i as Vertex + 1);
                }
                if i > 0 {
                    nb.push(i as Vertex - 1);
                }
                nb
            })
            .collect();
        GraphWindow::from_adjacency("z1", &refs, &adjacency, n as Vertex, n as u32, 2).unwrap()
    }

    fn ids(w: &GraphWindow, s: &VertexSet) -> Vec<i64> {
        s.iter().map(|v| w.id(v).parse().unwrap()).collect()
    }

    fn interval(w: &GraphWindow, lo: i64, hi: i64) -> VertexSet {
        let ids: Vec<String> = (lo..=hi).map(|i| i.to_string()).collect();
        w.set_from_ids(ids.iter().map(String::as_str)).unwrap()
    }

    #[test]
    fn ball_on_the_line() {
        let w = line(10);
        let b = w.ball(w.vertex("0").unwrap(), 2).unwrap();
        assert_eq!(ids(&w, &b), [-2, -1, 0, 1, 2]);
    }

    #[test]
    fn ball_refuses_the_fringe() {
        let w = line(5);
        let x = w.vertex("4").unwrap();
        assert!(matches!(w.ball(x, 2), Err(Error::OutOfInterior { .. })));
        assert!(w.ball(x, 1).is_ok());
    }

    #[test]
    fn neighborhood_of_interval() {
        let w = line(10);
        let a = interval(&w, 0, 5);
        assert_eq!(ids(&w, &w.neighborhood(&a, 1).unwrap()), (-1..=6).collect::<Vec<_>>());
        assert_eq!(w.neighborhood(&a, 0).unwrap(), a);
    }

    #[test]
    fn boundaries_of_intervals() {
        let w = line(20);
        let a = interval(&w, 0, 5);
        assert_eq!(ids(&w, &w.boundary(&a, 1).unwrap()), [-1, 0, 5, 6]);
        let n = 9;
        let b = interval(&w, 0, n - 1);
        assert_eq!(
            ids(&w, &w.boundary(&b, 2).unwrap()),
            [-2, -1, 0, 1, n - 2, n - 1, n, n + 1]
        );
        assert_eq!(ids(&w, &w.outer_boundary(&a).unwrap()), [-1, 6]);
    }

    #[test]
    fn boundary_near_fringe_is_refused() {
        let w = line(6);
        let a = interval(&w, 0, 5);
        assert_eq!(ids(&w, &w.boundary(&a, 1).unwrap()), [-1, 0, 5, 6]);
        let a = interval(&w, 0, 6);
        assert!(matches!(w.boundary(&a, 1), Err(Error::OutOfInterior { .. })));
    }

    #[test]
    fn geometry_of_the_line() {
        let w = line(12);
        let g = w.verify_geometry(3).unwrap();
        for r in 1..=3u32 {
            assert_eq!(g.min_ball(r), Some(2 * r as u64 + 1));
            assert_eq!(g.max_ball(r), Some(2 * r as u64 + 1));
        }
        assert!(w.verify_geometry(0).unwrap().rows.is_empty());
        assert!(w.verify_geometry(7).is_err());
    }

    #[test]
    fn builder_rejects_asymmetric_edges() {
        let err = GraphWindow::from_adjacency("g", &["a", "b"], &[vec![1], vec![]], 0, 1, 1);
        assert!(matches!(err, Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn builder_rejects_disconnected_and_duplicates() {
        let err = GraphWindow::from_adjacency("g", &["a", "b"], &[vec![], vec![]], 0, 1, 1);
        assert!(matches!(err, Err(Error::InvalidGraph(_))));
        let err = GraphWindow::from_adjacency("g", &["a", "a"], &[vec![1], vec![0]], 0, 1, 1);
        assert!(matches!(err, Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn sets_from_other_windows_are_rejected() {
        let w1 = line(5);
        let w2 = line(5);
        let a = interval(&w1, 0, 1);
        assert!(matches!(w2.neighborhood(&a, 1), Err(Error::WindowMismatch(_))));
    }

    #[test]
    fn sub_ball_keeps_ids_and_depths() {
        let w = line(10);
        let (s, parent) = w.sub_ball(4).unwrap();
        assert_eq!(s.len(), 9);
        for v in s.vertices() {
            assert_eq!(s.id(v), w.id(parent[v as usize]));
            assert_eq!(s.depth(v), w.depth(parent[v as usize]));
        }
        assert_eq!(s.interior_radius(), 4);
    }

    #[test]
    fn closed_windows_are_complete() {
        let w = GraphWindow::closed("tri", &["a", "b", "c"], &[vec![1, 2], vec![0, 2], vec![0, 1]], 0)
            .unwrap();
        assert!(w.vertices().all(|v| w.is_complete(v)));
        let all = w.set_from_vertices(w.vertices()).unwrap();
        assert!(w.boundary(&all, 2).unwrap().is_empty());
    }
}
