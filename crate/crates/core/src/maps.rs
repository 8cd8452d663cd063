//! Tabulated quasi-isometries between windows, and the measurements made on
//! them: metric verification, preimage-count defects, Følner estimates of the
//! scaling factor, composition and quasi-inverses.
//!
//! A [`QiMap`] may leave some domain vertices unmapped: an entry of `None`
//! means the image lies outside the codomain window. Counting preimages of a
//! codomain set is only exact when every preimage of every point lies inside
//! the tabulated part of the domain. The map derives that guarantee from its
//! declared lower distance bound (its [`Expansion`]) and exposes it as the
//! certified radius; preimage queries outside it fail instead of undercounting.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::folner::FolnerFamily;
use crate::graph::{GraphWindow, Vertex, VertexSet};
use crate::seed;
use crate::test_sets::LabeledSet;
use crate::Rational;

/// Constants of a `(C, K)`-quasi-isometry:
/// `d/C - K <= d(f x, f y) <= C d + K`, with `K`-dense image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QiParams {
    pub c: u32,
    pub k: u32,
}

/// Lower distance bound `d(f x, f y) >= (num/den) d(x, y) - slack`, which is
/// usually sharper than the one implied by [`QiParams`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub num: u64,
    pub den: u64,
    pub slack: u64,
}

impl Expansion {
    pub fn from_params(p: QiParams) -> Self {
        Expansion {
            num: 1,
            den: p.c as u64,
            slack: p.k as u64,
        }
    }

    /// Whether `d_y >= (num/den) d_x - slack`.
    pub fn holds(&self, d_x: u64, d_y: u64) -> bool {
        self.den * (d_y + self.slack) >= self.num * d_x
    }
}

#[derive(Clone, Debug)]
pub struct QiMap {
    domain: Arc<GraphWindow>,
    codomain: Arc<GraphWindow>,
    table: Vec<Option<Vertex>>,
    params: QiParams,
    expansion: Expansion,
    known_radius: u32,
    fibre_offsets: Vec<u32>,
    fibre_members: Vec<Vertex>,
    certified_radius: Option<u32>,
}

impl QiMap {
    /// A `None` entry asserts that the image is not a vertex of the codomain.
    pub fn new(
        domain: Arc<GraphWindow>,
        codomain: Arc<GraphWindow>,
        table: Vec<Option<Vertex>>,
        params: QiParams,
        expansion: Expansion,
    ) -> Result<Self> {
        Self::with_known_radius(domain, codomain, table, params, expansion, u32::MAX)
    }

    /// As [`QiMap::new`], but entries are only trusted for domain vertices at
    /// depth at most `known_radius`.
    pub fn with_known_radius(
        domain: Arc<GraphWindow>,
        codomain: Arc<GraphWindow>,
        table: Vec<Option<Vertex>>,
        params: QiParams,
        expansion: Expansion,
        known_radius: u32,
    ) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::InvalidArgument(format!(
                "table has {} entries for a domain of {} vertices",
                table.len(),
                domain.len()
            )));
        }
        if let Some(y) = table.iter().flatten().find(|&&y| y as usize >= codomain.len()) {
            return Err(Error::InvalidArgument(format!("table entry {y} is not a codomain vertex")));
        }
        if params.c == 0 || expansion.num == 0 || expansion.den == 0 {
            return Err(Error::InvalidArgument("C and the expansion ratio must be positive".into()));
        }
        let mut counts = vec![0u32; codomain.len() + 1];
        for &y in table.iter().flatten() {
            counts[y as usize + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut members = vec![0; counts[codomain.len()] as usize];
        for (x, y) in table.iter().enumerate() {
            if let Some(y) = y {
                members[fill[*y as usize] as usize] = x as Vertex;
                fill[*y as usize] += 1;
            }
        }
        let mut map = QiMap {
            domain,
            codomain,
            table,
            params,
            expansion,
            known_radius,
            fibre_offsets: counts,
            fibre_members: members,
            certified_radius: None,
        };
        map.certified_radius = map.compute_certified_radius();
        Ok(map)
    }

    pub fn from_fn(
        domain: Arc<GraphWindow>,
        codomain: Arc<GraphWindow>,
        f: impl FnMut(Vertex) -> Option<Vertex>,
        params: QiParams,
        expansion: Expansion,
    ) -> Result<Self> {
        let table = domain.vertices().map(f).collect();
        Self::new(domain, codomain, table, params, expansion)
    }

    /// Every `y` with `depth(y) <= t` has all its preimages tabulated when
    /// `den (t + depth(f c) + slack) < num (R + 1)`, `R` being the radius up to
    /// which the domain is complete and its entries trusted.
    fn compute_certified_radius(&self) -> Option<u32> {
        let fc = self.table[self.domain.center() as usize]?;
        let e = self.expansion;
        let r = self.domain.interior_radius().min(self.known_radius) as u64;
        let reach = (e.num * (r + 1)).div_ceil(e.den);
        let t = reach.checked_sub(1 + self.codomain.depth(fc) as u64 + e.slack)?;
        Some(t.min(self.codomain.interior_radius() as u64) as u32)
    }

    pub fn domain(&self) -> &Arc<GraphWindow> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<GraphWindow> {
        &self.codomain
    }

    pub fn params(&self) -> QiParams {
        self.params
    }

    pub fn expansion(&self) -> Expansion {
        self.expansion
    }

    pub fn known_radius(&self) -> u32 {
        self.known_radius
    }

    pub fn table(&self) -> &[Option<Vertex>] {
        &self.table
    }

    pub fn apply(&self, x: Vertex) -> Option<Vertex> {
        self.table[x as usize]
    }

    /// Whether the entry for `x` is trusted.
    pub fn is_known(&self, x: Vertex) -> bool {
        self.domain.depth(x) <= self.known_radius
    }

    /// Tabulated preimages of `y`, in increasing order. Complete only when
    /// `y` is certified.
    pub fn fibre(&self, y: Vertex) -> &[Vertex] {
        let y = y as usize;
        &self.fibre_members[self.fibre_offsets[y] as usize..self.fibre_offsets[y + 1] as usize]
    }

    pub fn certified_radius(&self) -> Option<u32> {
        self.certified_radius
    }

    pub fn is_certified(&self, y: Vertex) -> bool {
        self.certified_radius.is_some_and(|r| self.codomain.depth(y) <= r)
    }

    fn check_certified(&self, y: Vertex) -> Result<()> {
        if self.is_certified(y) {
            Ok(())
        } else {
            Err(Error::OutOfInterior {
                vertex: self.codomain.id(y).to_string(),
                radius: self.certified_radius.unwrap_or(0),
            })
        }
    }

    /// `f^-1(A)`.
    pub fn preimage(&self, set: &VertexSet) -> Result<VertexSet> {
        self.codomain.check_set(set)?;
        let mut out = Vec::new();
        for y in set.iter() {
            self.check_certified(y)?;
            out.extend_from_slice(self.fibre(y));
        }
        out.sort_unstable();
        Ok(self.domain.set_sorted(out))
    }

    pub fn preimage_count(&self, set: &VertexSet) -> Result<u64> {
        self.codomain.check_set(set)?;
        let mut n = 0;
        for y in set.iter() {
            self.check_certified(y)?;
            n += self.fibre(y).len() as u64;
        }
        Ok(n)
    }

    /// `f(A)` for a domain set; fails if some entry is unmapped or untrusted.
    pub fn image(&self, set: &VertexSet) -> Result<VertexSet> {
        self.domain.check_set(set)?;
        let mut out = Vec::with_capacity(set.len());
        for x in set.iter() {
            match self.apply(x) {
                Some(y) if self.is_known(x) => out.push(y),
                _ => {
                    return Err(Error::OutOfInterior {
                        vertex: self.domain.id(x).to_string(),
                        radius: self.known_radius.min(self.domain.interior_radius()),
                    })
                }
            }
        }
        self.codomain.set_from_vertices(out)
    }

    /// Checks the declared constants on every pair of domain vertices at
    /// distance at most `pair_radius` whose distances can be computed exactly,
    /// and `K`-density of the image on codomain vertices at least `margin`
    /// inside the certified radius.
    pub fn verify_qi(&self, margin: u32, pair_radius: u32) -> Result<QiReport> {
        let QiParams { c, k } = self.params;
        if margin < k {
            return Err(Error::InvalidArgument(format!("margin {margin} is below K = {k}")));
        }
        let x_win = &self.domain;
        let y_win = &self.codomain;
        let upper = c as u64 * pair_radius as u64 + k as u64;
        let upper = u32::try_from(upper).map_err(|_| Error::Overflow)?;
        let mut report = QiReport {
            ok: true,
            pairs_checked: 0,
            violation: None,
            density_radius: None,
            density_checked: 0,
        };
        let mut dist_y = vec![u32::MAX; y_win.len()];
        for x in x_win.vertices() {
            if x_win.depth(x) + pair_radius > x_win.interior_radius() || !self.is_known(x) {
                continue;
            }
            let Some(fx) = self.apply(x) else { continue };
            if y_win.depth(fx) as u64 + upper as u64 > y_win.interior_radius() as u64 {
                continue;
            }
            let near_y = y_win.reach(fx, upper);
            for &(y, d) in &near_y {
                dist_y[y as usize] = d;
            }
            for (x2, dx) in x_win.reach(x, pair_radius) {
                if x2 <= x || !self.is_known(x2) {
                    continue;
                }
                let Some(fx2) = self.apply(x2) else { continue };
                report.pairs_checked += 1;
                let dy = dist_y[fx2 as usize];
                let fine = dy != u32::MAX
                    && (c as u64) * (dy as u64 + k as u64) >= dx as u64
                    && self.expansion.holds(dx as u64, dy as u64);
                if !fine && report.violation.is_none() {
                    report.ok = false;
                    report.violation = Some(PairCheck {
                        x: x_win.id(x).to_string(),
                        x2: x_win.id(x2).to_string(),
                        d_domain: dx,
                        d_codomain: (dy != u32::MAX).then_some(dy),
                    });
                }
            }
            for &(y, _) in &near_y {
                dist_y[y as usize] = u32::MAX;
            }
        }

        if let Some(rho) = self.certified_radius {
            let checked: Vec<Vertex> = y_win
                .vertices()
                .filter(|&y| {
                    let d = y_win.depth(y);
                    d + margin <= rho && d + k < y_win.interior_radius()
                })
                .collect();
            let dist = self.distance_to_image(k + 1);
            report.density_checked = checked.len();
            let worst = checked.iter().map(|&y| dist[y as usize]).max();
            report.density_radius = worst.filter(|&d| d != u32::MAX);
            if worst.is_some_and(|d| d > k) {
                report.ok = false;
            }
        }
        Ok(report)
    }

    /// Codomain distance to the image, up to `limit`; `u32::MAX` beyond it.
    fn distance_to_image(&self, limit: u32) -> Vec<u32> {
        let y_win = &self.codomain;
        let mut dist = vec![u32::MAX; y_win.len()];
        let mut layer = Vec::new();
        for x in self.domain.vertices() {
            if let (Some(y), true) = (self.apply(x), self.is_known(x)) {
                if dist[y as usize] != 0 {
                    dist[y as usize] = 0;
                    layer.push(y);
                }
            }
        }
        for d in 1..=limit {
            let mut next = Vec::new();
            for &v in &layer {
                if !y_win.is_complete(v) {
                    continue;
                }
                for &w in y_win.neighbors(v) {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = d;
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        dist
    }

    /// Rows `|kappa |A| - |f^-1(A)|| / |boundary_R A|` over a family of
    /// codomain sets. Sets too close to the edge of the windows are skipped
    /// and listed, not truncated.
    pub fn defect(&self, kappa: Rational, family: &[LabeledSet], radius: u32) -> Result<DefectReport> {
        let mut rows = Vec::new();
        let mut skipped = Vec::new();
        for item in family {
            self.codomain.check_set(&item.set)?;
            let counted = self
                .preimage_count(&item.set)
                .and_then(|pre| Ok((pre, self.codomain.boundary(&item.set, radius)?.len() as u64)));
            match counted {
                Ok((preimage, boundary)) => {
                    let size = item.set.len() as u64;
                    let defect = abs_diff(kappa * Rational::from_integer(size), Rational::from_integer(preimage));
                    let ratio = if boundary > 0 {
                        Some(defect / Rational::from_integer(boundary))
                    } else if defect == Rational::from_integer(0) {
                        Some(defect)
                    } else {
                        None
                    };
                    rows.push(DefectRow {
                        label: item.label.clone(),
                        size,
                        preimage,
                        boundary,
                        defect,
                        ratio,
                    });
                }
                Err(e @ Error::OutOfInterior { .. }) => skipped.push(SkippedRow {
                    label: item.label.clone(),
                    error: e,
                }),
                Err(e) => return Err(e),
            }
        }
        let unbounded = rows.iter().any(|r| r.ratio.is_none());
        let sup_constant = if unbounded {
            None
        } else {
            rows.iter().filter_map(|r| r.ratio).max()
        };
        Ok(DefectReport {
            kappa,
            radius,
            rows,
            skipped,
            sup_constant,
            unbounded,
        })
    }

    /// The ratios `|f^-1(A_n)| / |A_n|` along a Følner family of the codomain,
    /// with the oscillation over the second half of the sequence.
    pub fn scaling_estimate(&self, family: &FolnerFamily, tolerance: Rational) -> Result<ScalingEstimate> {
        if family.window() != self.codomain.token() {
            return Err(Error::WindowMismatch("Følner family is not in the codomain".into()));
        }
        if family.is_empty() {
            return Err(Error::EmptySet);
        }
        let last = family.len() - 1;
        for &y in family.members(last) {
            self.check_certified(y)?;
        }
        let mut level = vec![u32::MAX; self.codomain.len()];
        for i in 0..family.len() {
            for &y in family.layer(i) {
                level[y as usize] = i as u32;
            }
        }
        let mut hits = vec![0u64; family.len()];
        for &y in self.table.iter().flatten() {
            if let Some(h) = hits.get_mut(level[y as usize] as usize) {
                *h += 1;
            }
        }
        let mut preimages = Vec::with_capacity(hits.len());
        let mut acc = 0;
        for h in hits {
            acc += h;
            preimages.push(acc);
        }
        let sizes: Vec<u64> = (0..family.len()).map(|i| family.size(i) as u64).collect();
        let ratios: Vec<Rational> = preimages
            .iter()
            .zip(&sizes)
            .map(|(&p, &s)| Rational::new(p, s))
            .collect();
        let tail = &ratios[ratios.len() / 2..];
        let oscillation = *tail.iter().max().unwrap() - *tail.iter().min().unwrap();
        Ok(ScalingEstimate {
            labels: family.labels().to_vec(),
            sizes,
            preimages,
            ratios,
            oscillation,
            tolerance,
            stable: oscillation <= tolerance,
        })
    }
}

pub(crate) fn abs_diff(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub x: String,
    pub x2: String,
    pub d_domain: u32,
    /// `None` when the images are farther apart than the upper bound allows.
    pub d_codomain: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiReport {
    pub ok: bool,
    pub pairs_checked: u64,
    /// First pair found breaking one of the distance bounds.
    pub violation: Option<PairCheck>,
    /// Largest distance from a checked codomain vertex to the image.
    pub density_radius: Option<u32>,
    pub density_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectRow {
    pub label: String,
    pub size: u64,
    pub preimage: u64,
    pub boundary: u64,
    pub defect: Rational,
    /// `defect / boundary`; `None` if the boundary is empty and the defect is not.
    pub ratio: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedRow {
    pub label: String,
    pub error: Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub kappa: Rational,
    pub radius: u32,
    pub rows: Vec<DefectRow>,
    pub skipped: Vec<SkippedRow>,
    /// Smallest constant satisfying the inequality on every counted row.
    pub sup_constant: Option<Rational>,
    pub unbounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingEstimate {
    pub labels: Vec<u64>,
    pub sizes: Vec<u64>,
    pub preimages: Vec<u64>,
    pub ratios: Vec<Rational>,
    pub oscillation: Rational,
    pub tolerance: Rational,
    pub stable: bool,
}

impl ScalingEstimate {
    pub fn last(&self) -> Rational {
        *self.ratios.last().expect("estimates are never empty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Both families settle on the same value; the first estimate is kept.
    Consistent(Rational),
    /// Two families give different limits, so there is no scaling factor.
    Inconsistent(Rational, Rational),
}

/// Compares the final terms of two estimates of the same map.
pub fn compare_estimates(a: &ScalingEstimate, b: &ScalingEstimate, tolerance: Rational) -> Agreement {
    if a.stable && b.stable && abs_diff(a.last(), b.last()) <= tolerance {
        Agreement::Consistent(a.last())
    } else {
        Agreement::Inconsistent(a.last(), b.last())
    }
}

/// `g ∘ f`, with constants `(C_f C_g, C_g K_f + K_g)`.
pub fn compose(f: &QiMap, g: &QiMap) -> Result<QiMap> {
    if f.codomain.token() != g.domain.token() {
        return Err(Error::WindowMismatch(format!(
            "cannot compose: codomain {} is not the domain {}",
            f.codomain.host(),
            g.domain.host()
        )));
    }
    let (pf, pg) = (f.params, g.params);
    let mul = |a: u32, b: u32| a.checked_mul(b).ok_or(Error::Overflow);
    let params = QiParams {
        c: mul(pf.c, pg.c)?,
        k: mul(pg.c, pf.k)?.checked_add(pg.k).ok_or(Error::Overflow)?,
    };
    let (ef, eg) = (f.expansion, g.expansion);
    let expansion = Expansion {
        num: ef.num * eg.num,
        den: ef.den * eg.den,
        slack: (eg.num * ef.slack).div_ceil(eg.den) + eg.slack,
    };

    // An entry with f(x) outside Y is still known if g provably sends every
    // point beyond Y's interior outside Z's window.
    let y = &g.domain;
    let z = &g.codomain;
    let beyond_y = y.interior_radius() as u64 + 1;
    let far_z = z.vertices().map(|v| z.depth(v)).max().unwrap_or(0) as u64;
    let gc = g.apply(y.center()).filter(|_| g.is_known(y.center()));
    let escapes = gc.is_some_and(|gc| {
        eg.num * beyond_y > eg.den * (far_z + z.depth(gc) as u64 + eg.slack)
    });

    let mut table = Vec::with_capacity(f.domain.len());
    let mut known = u32::MAX;
    for x in f.domain.vertices() {
        let (entry, trusted) = match f.apply(x) {
            Some(fx) => (g.apply(fx), g.is_known(fx)),
            None => (None, escapes),
        };
        if !(trusted && f.is_known(x)) {
            known = known.min(f.domain.depth(x).saturating_sub(1));
        }
        table.push(entry);
    }
    QiMap::with_known_radius(f.domain.clone(), g.codomain.clone(), table, params, expansion, known)
}

/// A quasi-inverse together with the displacements measured while building it.
#[derive(Clone, Debug)]
pub struct QuasiInverse {
    pub map: QiMap,
    /// Parent index in `f`'s codomain of each vertex of the new domain.
    pub parent: Vec<Vertex>,
    /// `max d(y, f(g(y)))`.
    pub forward: u32,
    /// `max d(x, g(f(x)))` over the domain vertices where it was measured.
    pub backward: u32,
    pub backward_bound: u32,
    pub backward_checked: usize,
}

/// `g(y)` is a preimage of a nearest point of the image of `f`, ties broken by
/// the smallest vertex id. The domain of `g` is the ball of `f`'s codomain on
/// which every search stays within the certified radius.
pub fn quasi_inverse(f: &QiMap, search_radius: u32) -> Result<QuasiInverse> {
    let QiParams { c, k } = f.params;
    if search_radius < k {
        return Err(Error::InvalidArgument(format!("search radius {search_radius} is below K = {k}")));
    }
    let rho = f.certified_radius.unwrap_or(0);
    let radius = rho.checked_sub(search_radius).ok_or_else(|| {
        Error::WindowTooSmall(format!(
            "certified radius {rho} is smaller than the search radius {search_radius}"
        ))
    })?;
    let y_win = &f.codomain;
    let x_win = &f.domain;
    let (sub, parent) = y_win.sub_ball(radius)?;
    let sub = Arc::new(sub);
    let mut table = Vec::with_capacity(sub.len());
    let mut forward = 0;
    for &y in &parent {
        let mut found: Option<(u32, Vertex)> = None;
        for (z, d) in y_win.reach(y, search_radius) {
            if found.is_some_and(|(best, _)| d > best) {
                break;
            }
            for &x in f.fibre(z) {
                let better = match found {
                    None => true,
                    Some((_, cur)) => x_win.id(x) < x_win.id(cur),
                };
                if better {
                    found = Some((d, x));
                }
            }
        }
        let (d, x) = found.ok_or_else(|| Error::NoPreimageWithinRadius {
            vertex: y_win.id(y).to_string(),
            radius: search_radius,
        })?;
        forward = forward.max(d);
        table.push(Some(x));
    }
    let slack2 = 2 * forward as u64 + k as u64;
    let params = QiParams {
        c,
        k: u32::try_from(c as u64 * slack2).map_err(|_| Error::Overflow)?,
    };
    let expansion = Expansion {
        num: 1,
        den: c as u64,
        slack: slack2.div_ceil(c as u64),
    };
    let map = QiMap::new(sub.clone(), x_win.clone(), table, params, expansion)?;

    let mut position = vec![Vertex::MAX; y_win.len()];
    for (i, &y) in parent.iter().enumerate() {
        position[y as usize] = i as Vertex;
    }
    let backward_bound = c * (forward + k);
    let mut backward = 0;
    let mut backward_checked = 0;
    for x in x_win.vertices() {
        let Some(fx) = f.apply(x) else { continue };
        let p = position[fx as usize];
        if p == Vertex::MAX || x_win.depth(x) + backward_bound > x_win.interior_radius() {
            continue;
        }
        let gx = map.apply(p).expect("quasi-inverse is total");
        backward_checked += 1;
        let d = x_win
            .reach(x, backward_bound)
            .into_iter()
            .find(|&(v, _)| v == gx)
            .map_or(backward_bound + 1, |(_, d)| d);
        backward = backward.max(d);
    }
    Ok(QuasiInverse {
        map,
        parent,
        forward,
        backward,
        backward_bound,
        backward_checked,
    })
}

/// Random map within distance 1 of the identity: each vertex goes to itself
/// or to a uniformly chosen neighbor, with probability `moved` of moving.
pub fn perturbed_identity(window: &Arc<GraphWindow>, moved: f64, seed: u64) -> Result<QiMap> {
    if !(0.0..=1.0).contains(&moved) {
        return Err(Error::InvalidArgument("move probability must lie in [0, 1]".into()));
    }
    let mut rng = seed::stream(seed, 0);
    let table = window
        .vertices()
        .map(|x| {
            let nbrs = window.neighbors(x);
            if !nbrs.is_empty() && rng.gen_bool(moved) {
                Some(nbrs[rng.gen_range(0..nbrs.len())])
            } else {
                Some(x)
            }
        })
        .collect();
    QiMap::new(
        window.clone(),
        window.clone(),
        table,
        QiParams { c: 1, k: 2 },
        Expansion { num: 1, den: 1, slack: 2 },
    )
}
