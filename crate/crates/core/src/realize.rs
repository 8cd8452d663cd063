//! Bijections at bounded distance from quasi-one-to-one maps, found by
//! bipartite matching with an escalating displacement radius, and the
//! piece-wise form for maps that scale measure by `m/n`.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::cayley::{product_with_cyclic, CyclicLayers};
use crate::error::{Error, Result};
use crate::graph::{GraphWindow, Vertex, WindowBuilder};
use crate::maps::{compose, Expansion, QiMap, QiParams};
use crate::partition::{partition_window, Partition};
use crate::seed;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Domain,
    Codomain,
}

/// A set violating Hall's condition at displacement `radius`: `neighbors`
/// is all of `N(set)` and is smaller than `set`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallWitness {
    pub side: Side,
    pub radius: u32,
    pub set: Vec<Vertex>,
    pub neighbors: Vec<Vertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EscalationStep {
    pub l: u32,
    pub matched: usize,
    /// Core vertices left unmatched.
    pub deficiency: usize,
}

/// Vertices kept out of the matching on either side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Exclusions {
    pub domain: Vec<Vertex>,
    pub codomain: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationFailure {
    pub l_max: u32,
    pub witness: HallWitness,
    pub escalation: Vec<EscalationStep>,
    pub excluded: Exclusions,
}

impl RealizationFailure {
    /// Recomputes `N(A)` from the map and confirms `|N(A)| < |A|`.
    pub fn check(&self, f: &QiMap) -> bool {
        let w = &self.witness;
        let y = f.codomain();
        let skip_x = mask(f.domain().len(), &self.excluded.domain);
        let skip_y = mask(y.len(), &self.excluded.codomain);
        let mut found: Vec<Vertex> = Vec::new();
        match w.side {
            Side::Domain => {
                for &x in &w.set {
                    let Some(fx) = f.apply(x).filter(|_| f.is_known(x)) else {
                        return false;
                    };
                    if y.depth(fx) + w.radius > y.interior_radius() {
                        return false;
                    }
                    found.extend(reach_plain(y, fx, w.radius).into_iter().filter(|&v| !skip_y[v as usize]));
                }
            }
            Side::Codomain => {
                for &t in &w.set {
                    if y.depth(t) + w.radius >= y.interior_radius()
                        || !f.certified_radius().is_some_and(|r| y.depth(t) + w.radius <= r)
                    {
                        return false;
                    }
                    for z in reach_plain(y, t, w.radius) {
                        found.extend(f.fibre(z).iter().filter(|&&x| f.is_known(x) && !skip_x[x as usize]));
                    }
                }
            }
        }
        found.sort_unstable();
        found.dedup();
        found == w.neighbors && found.len() < w.set.len()
    }
}

/// A bijection between `domain_core` and `codomain_core`, extended to the
/// extra vertices listed in `pairs`, with `d(f x, y) <= l` on every pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationResult {
    pub l: u32,
    /// Sorted by domain vertex.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub domain_core: Vec<Vertex>,
    pub codomain_core: Vec<Vertex>,
    pub escalation: Vec<EscalationStep>,
}

impl RealizationResult {
    /// Problems found by an exhaustive check; empty means valid.
    pub fn verify(&self, f: &QiMap) -> Vec<String> {
        let mut problems = Vec::new();
        let (nx, ny) = (f.domain().len(), f.codomain().len());
        let mut used_x = vec![false; nx];
        let mut used_y = vec![false; ny];
        for &(x, y) in &self.pairs {
            if x as usize >= nx || y as usize >= ny {
                problems.push(format!("pair ({x}, {y}) is out of range"));
                continue;
            }
            if core::mem::replace(&mut used_x[x as usize], true) {
                problems.push(format!("domain vertex {} is used twice", f.domain().id(x)));
            }
            if core::mem::replace(&mut used_y[y as usize], true) {
                problems.push(format!("codomain vertex {} is used twice", f.codomain().id(y)));
            }
            let close = f
                .apply(x)
                .is_some_and(|fx| reach_plain(f.codomain(), fx, self.l).contains(&y));
            if !close {
                problems.push(format!(
                    "{} -> {} moves further than {}",
                    f.domain().id(x),
                    f.codomain().id(y),
                    self.l
                ));
            }
        }
        for &x in &self.domain_core {
            if !used_x.get(x as usize).copied().unwrap_or(false) {
                problems.push(format!("domain core vertex {} is unmatched", f.domain().id(x)));
            }
        }
        for &y in &self.codomain_core {
            if !used_y.get(y as usize).copied().unwrap_or(false) {
                problems.push(format!("codomain core vertex {} is unmatched", f.codomain().id(y)));
            }
        }
        problems
    }

    pub fn partner(&self, x: Vertex) -> Option<Vertex> {
        self.pairs
            .binary_search_by_key(&x, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    /// The bijection as a map, trusted up to just below the shallowest
    /// unmatched domain vertex.
    pub fn to_map(&self, f: &QiMap) -> Result<QiMap> {
        let x = f.domain();
        let mut table = vec![None; x.len()];
        for &(a, b) in &self.pairs {
            table[a as usize] = Some(b);
        }
        let mut known = f.known_radius();
        for v in x.vertices() {
            if table[v as usize].is_none() {
                let d = x.depth(v).checked_sub(1).ok_or_else(|| {
                    Error::WindowTooSmall("the center is unmatched".into())
                })?;
                known = known.min(d);
            }
        }
        let (p, e) = (f.params(), f.expansion());
        QiMap::with_known_radius(
            x.clone(),
            f.codomain().clone(),
            table,
            QiParams { c: p.c, k: p.k + 2 * self.l },
            Expansion { slack: e.slack + 2 * self.l as u64, ..e },
            known,
        )
    }
}

fn mask(n: usize, list: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in list {
        if let Some(slot) = m.get_mut(v as usize) {
            *slot = true;
        }
    }
    m
}

/// Vertices within `limit` of `x` by plain breadth-first search over the
/// window. Distances found are upper bounds for host distances.
fn reach_plain(w: &GraphWindow, x: Vertex, limit: u32) -> Vec<Vertex> {
    let mut seen = alloc::collections::BTreeSet::from([x]);
    let mut layer = vec![x];
    for _ in 0..limit {
        let mut next = Vec::new();
        for v in layer {
            for &u in w.neighbors(v) {
                if seen.insert(u) {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    seen.into_iter().collect()
}

/// Window distance from `a` to `b`, if at most `limit`.
fn window_distance(w: &GraphWindow, a: Vertex, b: Vertex, limit: u32) -> Option<u32> {
    let mut seen = alloc::collections::BTreeSet::from([a]);
    let mut layer = vec![a];
    for d in 0..=limit {
        if layer.contains(&b) {
            return Some(d);
        }
        let mut next = Vec::new();
        for v in layer {
            for &u in w.neighbors(v) {
                if seen.insert(u) {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    None
}

struct Bipartite {
    /// Candidate partners of each domain vertex, nearest first.
    x_offsets: Vec<u32>,
    x_targets: Vec<Vertex>,
    y_offsets: Vec<u32>,
    y_targets: Vec<Vertex>,
}

impl Bipartite {
    fn build(f: &QiMap, l: u32, skip_x: &[bool], skip_y: &[bool]) -> Self {
        let (x, y) = (f.domain(), f.codomain());
        let mut x_offsets = vec![0u32];
        let mut x_targets = Vec::new();
        for v in x.vertices() {
            if !skip_x[v as usize] && f.is_known(v) {
                if let Some(fv) = f.apply(v) {
                    x_targets.extend(
                        y.reach(fv, l).into_iter().map(|(t, _)| t).filter(|&t| !skip_y[t as usize]),
                    );
                }
            }
            x_offsets.push(x_targets.len() as u32);
        }
        let mut counts = vec![0u32; y.len() + 1];
        for &t in &x_targets {
            counts[t as usize + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut y_targets = vec![0; x_targets.len()];
        for v in 0..x.len() {
            for &t in &x_targets[x_offsets[v] as usize..x_offsets[v + 1] as usize] {
                y_targets[fill[t as usize] as usize] = v as Vertex;
                fill[t as usize] += 1;
            }
        }
        Bipartite {
            x_offsets,
            x_targets,
            y_offsets: counts,
            y_targets,
        }
    }

    fn of_x(&self, v: Vertex) -> &[Vertex] {
        &self.x_targets[self.x_offsets[v as usize] as usize..self.x_offsets[v as usize + 1] as usize]
    }

    fn of_y(&self, v: Vertex) -> &[Vertex] {
        &self.y_targets[self.y_offsets[v as usize] as usize..self.y_offsets[v as usize + 1] as usize]
    }
}

struct Matcher<'a> {
    g: &'a Bipartite,
    mate_x: Vec<u32>,
    mate_y: Vec<u32>,
    y_core: &'a [bool],
}

impl Matcher<'_> {
    /// Augments from an unmatched domain vertex. On failure returns the
    /// visited domain and codomain vertices.
    fn augment_x(&mut self, root: Vertex) -> core::result::Result<(), (Vec<Vertex>, Vec<Vertex>)> {
        let mut parent_y: alloc::collections::BTreeMap<Vertex, Vertex> = Default::default();
        let mut xs = vec![root];
        let mut head = 0;
        while head < xs.len() {
            let v = xs[head];
            head += 1;
            for &t in self.g.of_x(v) {
                if parent_y.contains_key(&t) {
                    continue;
                }
                parent_y.insert(t, v);
                if self.mate_y[t as usize] == NONE {
                    let mut t = t;
                    loop {
                        let v = parent_y[&t];
                        let prev = self.mate_x[v as usize];
                        self.mate_x[v as usize] = t;
                        self.mate_y[t as usize] = v;
                        if prev == NONE {
                            return Ok(());
                        }
                        t = prev;
                    }
                }
                xs.push(self.mate_y[t as usize]);
            }
        }
        xs.sort_unstable();
        Err((xs, parent_y.into_keys().collect()))
    }

    /// Augments from an unmatched codomain vertex without unmatching any
    /// domain vertex; a matched codomain vertex outside the core may be
    /// released instead.
    fn augment_y(&mut self, root: Vertex) -> core::result::Result<(), (Vec<Vertex>, Vec<Vertex>)> {
        let mut parent_x: alloc::collections::BTreeMap<Vertex, Vertex> = Default::default();
        let mut ys = vec![root];
        let mut head = 0;
        while head < ys.len() {
            let t = ys[head];
            head += 1;
            for &v in self.g.of_y(t) {
                if parent_x.contains_key(&v) {
                    continue;
                }
                parent_x.insert(v, t);
                let held = self.mate_x[v as usize];
                if held == NONE || !self.y_core[held as usize] {
                    if held != NONE {
                        self.mate_y[held as usize] = NONE;
                    }
                    let mut v = v;
                    loop {
                        let t = parent_x[&v];
                        let prev = self.mate_y[t as usize];
                        self.mate_y[t as usize] = v;
                        self.mate_x[v as usize] = t;
                        if prev == NONE {
                            return Ok(());
                        }
                        v = prev;
                    }
                }
                ys.push(held);
            }
        }
        ys.sort_unstable();
        Err((ys, parent_x.into_keys().collect()))
    }
}

/// Matches with `L = 0, 1, ..., l_max` until every core vertex on both sides
/// is matched. At displacement `L` the domain core is the set of `x` whose
/// `L`-ball around `f(x)` lies in the codomain interior, and the codomain
/// core the set of `y` whose `L`-ball is interior and certified.
pub fn realize_bijection(f: &QiMap, l_max: u32) -> Result<RealizationResult> {
    realize_bijection_excluding(f, l_max, &Exclusions::default())
}

pub fn realize_bijection_excluding(f: &QiMap, l_max: u32, excluded: &Exclusions) -> Result<RealizationResult> {
    let (x, y) = (f.domain(), f.codomain());
    let skip_x = mask(x.len(), &excluded.domain);
    let skip_y = mask(y.len(), &excluded.codomain);
    let ry = y.interior_radius();
    let Some(rho) = f.certified_radius() else {
        return Err(Error::WindowTooSmall("no certified codomain region".into()));
    };
    let mut escalation = Vec::new();
    let mut witness = None;
    for l in 0..=l_max {
        let x_core: Vec<Vertex> = x
            .vertices()
            .filter(|&v| !skip_x[v as usize] && f.is_known(v))
            .filter(|&v| f.apply(v).is_some_and(|fv| y.depth(fv) + l <= ry))
            .collect();
        let y_core: Vec<Vertex> = y
            .vertices()
            .filter(|&t| !skip_y[t as usize] && y.depth(t) + l < ry && y.depth(t) + l <= rho)
            .collect();
        if x_core.is_empty() && y_core.is_empty() {
            return Err(Error::WindowTooSmall(format!("empty interior at displacement {l}")));
        }
        let g = Bipartite::build(f, l, &skip_x, &skip_y);
        let core_mask = mask(y.len(), &y_core);
        let mut m = Matcher {
            g: &g,
            mate_x: vec![NONE; x.len()],
            mate_y: vec![NONE; y.len()],
            y_core: &core_mask,
        };
        let mut deficiency = 0;
        let mut first = None;
        for &v in &x_core {
            if let Err((set, neighbors)) = m.augment_x(v) {
                deficiency += 1;
                first.get_or_insert(HallWitness { side: Side::Domain, radius: l, set, neighbors });
            }
        }
        for &t in &y_core {
            if m.mate_y[t as usize] == NONE {
                if let Err((set, neighbors)) = m.augment_y(t) {
                    deficiency += 1;
                    first.get_or_insert(HallWitness { side: Side::Codomain, radius: l, set, neighbors });
                }
            }
        }
        let pairs: Vec<(Vertex, Vertex)> = x
            .vertices()
            .filter(|&v| m.mate_x[v as usize] != NONE)
            .map(|v| (v, m.mate_x[v as usize]))
            .collect();
        escalation.push(EscalationStep { l, matched: pairs.len(), deficiency });
        match first {
            None => {
                return Ok(RealizationResult {
                    l,
                    pairs,
                    domain_core: x_core,
                    codomain_core: y_core,
                    escalation,
                })
            }
            Some(w) => witness = Some(w),
        }
    }
    Err(Error::NoBijectionWithinL(alloc::boxed::Box::new(RealizationFailure {
        l_max,
        witness: witness.expect("at least one radius is tried"),
        escalation,
        excluded: excluded.clone(),
    })))
}

/// `iota ∘ f ∘ pi : X x C_n -> Y x C_m`, with the product windows.
#[derive(Clone, Debug)]
pub struct Lift {
    pub source: CyclicLayers,
    pub target: CyclicLayers,
    pub map: QiMap,
}

pub fn lift_to_products(f: &QiMap, m: u32, n: u32) -> Result<Lift> {
    let source = product_with_cyclic(f.domain(), n)?;
    let target = product_with_cyclic(f.codomain(), m)?;
    let map = compose(&compose(&source.project, f)?, &target.embed)?;
    Ok(Lift { source, target, map })
}

/// The quotient graph of a partition: one vertex `p<i>` per piece, adjacent
/// when some edge joins the pieces.
#[derive(Clone, Debug)]
pub struct PieceGraph {
    pub window: Arc<GraphWindow>,
    pub piece_of: Vec<u32>,
    /// Smallest vertex of each piece.
    pub basepoints: Vec<Vertex>,
}

pub fn piece_graph(window: &GraphWindow, p: &Partition) -> Result<PieceGraph> {
    let piece_of: Vec<u32> = p.piece_of(window.len()).into_iter().map(|i| i as u32).collect();
    if piece_of.contains(&(usize::MAX as u32)) || p.pieces.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument("partition does not cover the window".into()));
    }
    let count = p.pieces.len();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); count];
    let mut open = vec![false; count];
    for v in window.vertices() {
        let a = piece_of[v as usize];
        open[a as usize] |= !window.is_complete(v);
        for &w in window.neighbors(v) {
            let b = piece_of[w as usize];
            if a != b {
                adj[a as usize].push(b);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let center = piece_of[window.center() as usize];
    let mut depth = vec![NONE; count];
    depth[center as usize] = 0;
    let mut queue = VecDeque::from([center]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a as usize] {
            if depth[b as usize] == NONE {
                depth[b as usize] = depth[a as usize] + 1;
                queue.push_back(b);
            }
        }
    }
    let interior = (0..count)
        .filter(|&i| open[i])
        .map(|i| depth[i])
        .min()
        .unwrap_or_else(|| depth.iter().max().copied().unwrap_or(0) + 1);
    let mut builder = WindowBuilder::new(format!("pieces:{}:{}", window.host(), p.k));
    for (i, list) in adj.iter().enumerate() {
        builder.push_vertex(&format!("p{i}"), list);
    }
    let degree = adj.iter().map(Vec::len).max().unwrap_or(0) as u32;
    Ok(PieceGraph {
        window: Arc::new(builder.finish(center, interior, degree)?),
        piece_of,
        basepoints: p.pieces.iter().map(|q| q[0]).collect(),
    })
}

/// Output of [`realize_mn`].
#[derive(Clone, Debug)]
pub struct MnRealization {
    pub px: Partition,
    pub py: Partition,
    pub pieces_x: PieceGraph,
    pub pieces_y: PieceGraph,
    /// `P -> piece containing f(basepoint of P)`.
    pub piece_map: QiMap,
    pub matching: RealizationResult,
    /// `psi` on domain pieces; `None` for unmatched pieces.
    pub psi: Vec<Option<u32>>,
    /// `g` on the ball of the domain where every piece is matched.
    pub g: QiMap,
    /// Vertex of the full domain window for each vertex of `g`'s domain.
    pub g_parent: Vec<Vertex>,
    /// Largest piece diameter on either side.
    pub d: u32,
    /// `C D + K + (L + 1) D`.
    pub proof_bound: u32,
    /// `proof_bound + L`, counting the edges between consecutive pieces.
    pub sound_bound: u32,
    /// Largest `d(f x, g x)` seen, or `sound_bound + 1` if some pair is
    /// further apart than `sound_bound`.
    pub displacement: u32,
}

impl MnRealization {
    /// Problems found; empty means `g(P) ⊆ psi(P)` on every exact piece in
    /// `g`'s domain, `psi` is injective and the displacement is within
    /// `proof_bound`.
    pub fn verify(&self, f: &QiMap) -> Vec<String> {
        let mut problems = self.matching.verify(&self.piece_map);
        let y_owner = self.py.piece_of(f.codomain().len());
        let x_owner = self.px.piece_of(f.domain().len());
        let mut hit = vec![false; self.py.pieces.len()];
        for q in self.psi.iter().flatten() {
            if core::mem::replace(&mut hit[*q as usize], true) {
                problems.push(format!("piece {q} is hit twice"));
            }
        }
        for (i, &x) in self.g_parent.iter().enumerate() {
            let piece = x_owner[x as usize];
            if Some(piece) == self.px.remainder {
                continue;
            }
            let target = self.psi[piece].map(|q| q as usize);
            let got = self.g.apply(i as Vertex).map(|y| y_owner[y as usize]);
            if got.is_none() || got != target {
                problems.push(format!("g({}) is outside psi of its piece", f.domain().id(x)));
            }
        }
        if self.displacement > self.proof_bound {
            problems.push(format!(
                "displacement {} exceeds the bound {}",
                self.displacement, self.proof_bound
            ));
        }
        problems
    }
}

/// Partitions the domain into pieces of `m` and the codomain into pieces of
/// `n`, matches pieces through the basepoint map and sends each `x` to the
/// basepoint of the piece matched with its own. Remainder pieces are left
/// out of the matching.
pub fn realize_mn(f: &QiMap, m: u32, n: u32, l_max: u32, seed: u64) -> Result<MnRealization> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("piece sizes must be positive".into()));
    }
    let (x, y) = (f.domain(), f.codomain());
    let px = partition_window(x, m as usize, seed::split(seed, 0))?;
    let py = partition_window(y, n as usize, seed::split(seed, 1))?;
    let pieces_x = piece_graph(x, &px)?;
    let pieces_y = piece_graph(y, &py)?;
    let (dx, dy) = (px.max_diameter(), py.max_diameter());

    let mut table = Vec::with_capacity(px.pieces.len());
    let mut known = u32::MAX;
    for (i, &b) in pieces_x.basepoints.iter().enumerate() {
        if !f.is_known(b) {
            let depth = pieces_x.window.depth(i as Vertex);
            known = known.min(depth.checked_sub(1).ok_or_else(|| {
                Error::WindowTooSmall("center piece has an untrusted basepoint".into())
            })?);
        }
        table.push(f.apply(b).map(|fb| pieces_y.piece_of[fb as usize]));
    }
    let (p, e) = (f.params(), f.expansion());
    let grow = dy as u64 + 1;
    let c = (p.c as u64 * (dx as u64 + 1)).max((e.den * grow).div_ceil(e.num));
    let params = QiParams {
        c: u32::try_from(c).map_err(|_| Error::Overflow)?,
        k: p.c * dx + 2 * p.k,
    };
    let expansion = Expansion {
        num: e.num,
        den: e.den * grow,
        slack: (e.slack + dy as u64).div_ceil(grow),
    };
    let piece_map = QiMap::with_known_radius(
        pieces_x.window.clone(),
        pieces_y.window.clone(),
        table,
        params,
        expansion,
        known,
    )?;
    let excluded = Exclusions {
        domain: px.remainder.map(|r| r as Vertex).into_iter().collect(),
        codomain: py.remainder.map(|r| r as Vertex).into_iter().collect(),
    };
    let matching = realize_bijection_excluding(&piece_map, l_max, &excluded)?;
    let mut psi = vec![None; px.pieces.len()];
    for &(a, b) in &matching.pairs {
        psi[a as usize] = Some(b);
    }

    let x_owner = &pieces_x.piece_of;
    let mut radius = x.interior_radius();
    for v in x.vertices() {
        if psi[x_owner[v as usize] as usize].is_none() {
            radius = radius.min(x.depth(v).checked_sub(1).ok_or_else(|| {
                Error::WindowTooSmall("the center piece is unmatched".into())
            })?);
        }
    }
    let (sub, g_parent) = x.sub_ball(radius)?;
    let sub = Arc::new(sub);
    let d = dx.max(dy);
    let l = matching.l;
    let proof_bound = p.c * d + p.k + (l + 1) * d;
    let sound_bound = proof_bound + l;
    let g_table: Vec<Option<Vertex>> = g_parent
        .iter()
        .map(|&v| psi[x_owner[v as usize] as usize].map(|q| pieces_y.basepoints[q as usize]))
        .collect();
    let g = QiMap::new(
        sub,
        y.clone(),
        g_table,
        QiParams { c: p.c, k: p.k + 2 * sound_bound },
        Expansion { slack: e.slack + 2 * sound_bound as u64, ..e },
    )?;

    let mut displacement = 0;
    for (i, &v) in g_parent.iter().enumerate() {
        if let (Some(fv), Some(gv)) = (f.apply(v).filter(|_| f.is_known(v)), g.apply(i as Vertex)) {
            let dist = window_distance(y, fv, gv, sound_bound).unwrap_or(sound_bound + 1);
            displacement = displacement.max(dist);
        }
    }
    Ok(MnRealization {
        px,
        py,
        pieces_x,
        pieces_y,
        piece_map,
        matching,
        psi,
        g,
        g_parent,
        d,
        proof_bound,
        sound_bound,
        displacement,
    })
}
