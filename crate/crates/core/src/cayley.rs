//! Concrete finitely generated groups: normal forms, generator actions, ball
//! enumeration, and the canonical maps between them (lattice inclusions,
//! embeddings into and projections from products with a cycle).

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, Vertex, VertexSet, WindowBuilder};
use crate::maps::{Expansion, QiMap, QiParams};

/// Normal form of a group element; the layout depends on the [`GroupSpec`].
pub type Element = SmallVec<[i64; 4]>;

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
        }
        Ok(IntMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        IntMatrix { dim, entries }
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let mut m = Self::identity(diag.len());
        for (i, &a) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = a;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.entries.chunks(self.dim)
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<i64> {
        let n = self.dim;
        let mut a: Vec<i128> = self.entries.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                    Some(r) => {
                        for j in 0..n {
                            a.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(Error::Overflow)?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| Error::Overflow)
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.dim;
        let entries = (0..n)
            .filter(|&i| i != row)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        IntMatrix { dim: n - 1, entries }
    }

    /// The adjugate, so that `self * adj = det * I`.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let n = self.dim;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(i, j).determinant()?;
                entries[j * n + i] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        Ok(IntMatrix { dim: n, entries })
    }

    /// Operator norm for the l1 metric: the largest absolute column sum.
    pub fn norm1(&self) -> u64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).unsigned_abs()).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("matrix dimensions differ".into()));
        }
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0i64;
                for k in 0..n {
                    acc = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .and_then(|x| acc.checked_add(x))
                        .ok_or(Error::Overflow)?;
                }
                entries[i * n + j] = acc;
            }
        }
        Ok(IntMatrix { dim: n, entries })
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.dim {
            return Err(Error::InvalidArgument("vector length differs from matrix".into()));
        }
        self.rows()
            .map(|row| {
                row.iter().zip(v).try_fold(0i64, |acc, (&a, &b)| {
                    a.checked_mul(b).and_then(|x| acc.checked_add(x)).ok_or(Error::Overflow)
                })
            })
            .collect()
    }

    /// The integer solution of `self * c = v`, if there is one.
    pub fn solve(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        let det = self.determinant()?;
        if det == 0 {
            return Err(Error::InvalidArgument("singular matrix".into()));
        }
        let w = self.adjugate()?.apply(v)?;
        if w.iter().any(|x| x % det != 0) {
            return Ok(None);
        }
        Ok(Some(w.into_iter().map(|x| x / det).collect()))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('[')?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            f.write_char('[')?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_char(',')?;
                }
                write!(f, "{x}")?;
            }
            f.write_char(']')?;
        }
        f.write_char(']')
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("matrix {s:?} is not of the form [[..],..]")))?;
        let rows = inner
            .split("],[")
            .map(|row| {
                row.split(',')
                    .map(|x| x.parse::<i64>().map_err(|_| Error::Parse(format!("bad matrix entry {x:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::new(rows)
    }
}

/// A group together with its fixed finite symmetric generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// `Z^d` with the standard basis.
    FreeAbelian(u32),
    /// Integer Heisenberg group, generated by `x` and `y`.
    Heisenberg3,
    /// `Z/n wr Z` with generators `t`, `t^-1` and the lamp increment `s`
    /// (plus `s^-1` when `n >= 3`).
    Lamplighter(u32),
    /// `base x Z/n`, the cycle contributing `+1` and `-1`.
    CyclicProduct(Box<GroupSpec>, u32),
    /// The subgroup of `Z^d` spanned by the columns of the matrix, with those
    /// columns as its own generators.
    Sublattice(IntMatrix),
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::FreeAbelian(0) => Err(Error::InvalidArgument("zd needs d >= 1".into())),
            GroupSpec::Lamplighter(n) if *n < 2 => Err(Error::BadModulus(*n as u64)),
            GroupSpec::CyclicProduct(_, 0) => {
                Err(Error::InvalidArgument("cyclic factor needs n >= 1".into()))
            }
            GroupSpec::CyclicProduct(base, _) => base.validate(),
            GroupSpec::Sublattice(m) if m.determinant()? == 0 => {
                Err(Error::InvalidArgument("sublattice matrix is singular".into()))
            }
            _ => Ok(()),
        }
    }

    /// Number of generators; each generator is a distinct nontrivial element.
    pub fn generator_count(&self) -> usize {
        match self {
            GroupSpec::FreeAbelian(d) => 2 * *d as usize,
            GroupSpec::Sublattice(m) => 2 * m.dim(),
            GroupSpec::Heisenberg3 => 4,
            GroupSpec::Lamplighter(2) => 3,
            GroupSpec::Lamplighter(_) => 4,
            GroupSpec::CyclicProduct(base, n) => base.generator_count() + cyclic_generators(*n),
        }
    }

    /// The generator `h` with `g h = 1`.
    pub fn inverse_generator(&self, g: usize) -> usize {
        match self {
            GroupSpec::Lamplighter(2) if g == 2 => 2,
            GroupSpec::CyclicProduct(base, n) => {
                let b = base.generator_count();
                if g < b {
                    base.inverse_generator(g)
                } else if *n == 2 {
                    g
                } else {
                    b + (1 - (g - b))
                }
            }
            _ => g ^ 1,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupSpec::FreeAbelian(d) => SmallVec::from_elem(0, *d as usize),
            GroupSpec::Sublattice(m) => SmallVec::from_elem(0, m.dim()),
            GroupSpec::Heisenberg3 => SmallVec::from_slice(&[0, 0, 0]),
            GroupSpec::Lamplighter(_) => SmallVec::from_slice(&[0]),
            GroupSpec::CyclicProduct(base, _) => {
                let mut e = SmallVec::from_slice(&[0]);
                e.extend_from_slice(&base.identity());
                e
            }
        }
    }

    /// Right multiplication by generator `g`.
    pub fn apply(&self, e: &[i64], g: usize) -> Element {
        let mut out: Element = SmallVec::from_slice(e);
        match self {
            GroupSpec::FreeAbelian(_) | GroupSpec::Sublattice(_) => {
                out[g / 2] += if g.is_multiple_of(2) { 1 } else { -1 };
            }
            GroupSpec::Heisenberg3 => match g {
                0 => out[0] += 1,
                1 => out[0] -= 1,
                2 => {
                    out[1] += 1;
                    out[2] += out[0];
                }
                _ => {
                    out[1] -= 1;
                    out[2] -= out[0];
                }
            },
            GroupSpec::Lamplighter(n) => match g {
                0 => out[0] += 1,
                1 => out[0] -= 1,
                2 => toggle_lamp(&mut out, *n as i64, 1),
                _ => toggle_lamp(&mut out, *n as i64, -1),
            },
            GroupSpec::CyclicProduct(base, n) => {
                let b = base.generator_count();
                if g < b {
                    let moved = base.apply(&e[1..], g);
                    out.truncate(1);
                    out.extend_from_slice(&moved);
                } else {
                    let step = if g == b { 1 } else { -1 };
                    out[0] = (out[0] + step).rem_euclid(*n as i64);
                }
            }
        }
        out
    }

    /// Canonical string id of an element.
    pub fn encode(&self, e: &[i64]) -> String {
        let mut s = String::new();
        self.encode_into(e, &mut s);
        s
    }

    fn encode_into(&self, e: &[i64], s: &mut String) {
        match self {
            GroupSpec::FreeAbelian(_) | GroupSpec::Heisenberg3 => join_ints(s, e),
            GroupSpec::Sublattice(m) => {
                let ambient = m.apply(e).expect("sublattice coordinates overflow");
                join_ints(s, &ambient);
            }
            GroupSpec::Lamplighter(_) => {
                let _ = write!(s, "{}|", e[0]);
                for (i, pair) in e[1..].chunks(2).enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{}:{}", pair[0], pair[1]);
                }
            }
            GroupSpec::CyclicProduct(base, _) => {
                base.encode_into(&e[1..], s);
                let _ = write!(s, ";{}", e[0]);
            }
        }
    }

    /// Parses a canonical id; rejects anything `encode` would not produce.
    pub fn decode(&self, id: &str) -> Result<Element> {
        let bad = || Error::Parse(format!("{id:?} is not a canonical element of {self}"));
        let e: Element = match self {
            GroupSpec::FreeAbelian(d) => {
                let v = parse_ints(id).ok_or_else(bad)?;
                if v.len() != *d as usize {
                    return Err(bad());
                }
                v
            }
            GroupSpec::Heisenberg3 => {
                let v = parse_ints(id).ok_or_else(bad)?;
                if v.len() != 3 {
                    return Err(bad());
                }
                v
            }
            GroupSpec::Sublattice(m) => {
                let v = parse_ints(id).ok_or_else(bad)?;
                if v.len() != m.dim() {
                    return Err(bad());
                }
                let c = m.solve(&v)?.ok_or_else(bad)?;
                SmallVec::from_vec(c)
            }
            GroupSpec::Lamplighter(n) => {
                let (cursor, lamps) = id.split_once('|').ok_or_else(bad)?;
                let mut e: Element = SmallVec::new();
                e.push(cursor.parse().map_err(|_| bad())?);
                if !lamps.is_empty() {
                    for lamp in lamps.split(',') {
                        let (p, v) = lamp.split_once(':').ok_or_else(bad)?;
                        let p: i64 = p.parse().map_err(|_| bad())?;
                        let v: i64 = v.parse().map_err(|_| bad())?;
                        if v < 1 || v >= *n as i64 || (e.len() > 1 && e[e.len() - 2] >= p) {
                            return Err(bad());
                        }
                        e.push(p);
                        e.push(v);
                    }
                }
                e
            }
            GroupSpec::CyclicProduct(base, n) => {
                let (b, k) = id.rsplit_once(';').ok_or_else(bad)?;
                let k: i64 = k.parse().map_err(|_| bad())?;
                if k < 0 || k >= *n as i64 {
                    return Err(bad());
                }
                let mut e: Element = SmallVec::from_slice(&[k]);
                e.extend_from_slice(&base.decode(b)?);
                e
            }
        };
        if self.encode(&e) != id {
            return Err(bad());
        }
        Ok(e)
    }

    /// Matrix whose columns generate the lattice, for lattice specs.
    pub fn lattice_basis(&self) -> Option<IntMatrix> {
        match self {
            GroupSpec::FreeAbelian(d) => Some(IntMatrix::identity(*d as usize)),
            GroupSpec::Sublattice(m) => Some(m.clone()),
            _ => None,
        }
    }
}

fn cyclic_generators(n: u32) -> usize {
    match n {
        1 => 0,
        2 => 1,
        _ => 2,
    }
}

fn toggle_lamp(e: &mut Element, n: i64, delta: i64) {
    let cursor = e[0];
    let pairs = (e.len() - 1) / 2;
    let pos = (0..pairs).find(|&j| e[1 + 2 * j] >= cursor);
    match pos {
        Some(j) if e[1 + 2 * j] == cursor => {
            let v = (e[2 + 2 * j] + delta).rem_euclid(n);
            if v == 0 {
                e.remove(1 + 2 * j);
                e.remove(1 + 2 * j);
            } else {
                e[2 + 2 * j] = v;
            }
        }
        other => {
            let at = 1 + 2 * other.unwrap_or(pairs);
            e.insert(at, delta.rem_euclid(n));
            e.insert(at, cursor);
        }
    }
}

fn join_ints(s: &mut String, v: &[i64]) {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
}

fn parse_ints(s: &str) -> Option<Element> {
    s.split(',').map(|x| x.parse().ok()).collect()
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian(d) => write!(f, "zd:{d}"),
            GroupSpec::Heisenberg3 => f.write_str("heis"),
            GroupSpec::Lamplighter(n) => write!(f, "lamp:{n}"),
            GroupSpec::CyclicProduct(base, n) => write!(f, "prod:{base}:{n}"),
            GroupSpec::Sublattice(m) => write!(f, "sublattice:{}:{m}", m.dim()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown group spec {s:?}"));
        let int = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let spec = if s == "heis" {
            GroupSpec::Heisenberg3
        } else if let Some(d) = s.strip_prefix("zd:") {
            GroupSpec::FreeAbelian(int(d)?)
        } else if let Some(n) = s.strip_prefix("lamp:") {
            GroupSpec::Lamplighter(int(n)?)
        } else if let Some(rest) = s.strip_prefix("prod:") {
            let (base, n) = rest.rsplit_once(':').ok_or_else(bad)?;
            GroupSpec::CyclicProduct(Box::new(base.parse()?), int(n)?)
        } else if let Some(rest) = s.strip_prefix("sublattice:") {
            let (d, m) = rest.split_once(':').ok_or_else(bad)?;
            let m: IntMatrix = m.parse()?;
            if m.dim() != int(d)? as usize {
                return Err(Error::Parse(format!("matrix in {s:?} is not {d}x{d}")));
            }
            GroupSpec::Sublattice(m)
        } else {
            return Err(bad());
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Breadth-first enumeration of the ball of radius `radius` around the
/// identity. Vertex 0 is the identity; vertices are numbered in BFS order.
pub fn enumerate_window(spec: &GroupSpec, radius: u32, budget: usize) -> Result<GraphWindow> {
    spec.validate()?;
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let gens = spec.generator_count();
    let mut index: BTreeMap<Element, Vertex> = BTreeMap::new();
    let mut elements: Vec<Element> = Vec::new();
    let mut frontier_start = 0;
    index.insert(spec.identity(), 0);
    elements.push(spec.identity());
    for _ in 0..radius {
        let frontier_end = elements.len();
        for i in frontier_start..frontier_end {
            for g in 0..gens {
                let next = spec.apply(&elements[i], g);
                if !index.contains_key(&next) {
                    if elements.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            budget,
                            reached: elements.len(),
                        });
                    }
                    index.insert(next.clone(), elements.len() as Vertex);
                    elements.push(next);
                }
            }
        }
        frontier_start = frontier_end;
    }

    let mut builder = WindowBuilder::new(spec.to_string());
    let mut nbrs = Vec::with_capacity(gens);
    let mut id = String::new();
    for e in &elements {
        nbrs.clear();
        for g in 0..gens {
            if let Some(&w) = index.get(&spec.apply(e, g)) {
                nbrs.push(w);
            }
        }
        id.clear();
        spec.encode_into(e, &mut id);
        builder.push_vertex(&id, &nbrs);
    }
    builder.finish(0, radius, gens as u32)
}

/// Decodes every vertex of a window enumerated from `spec`.
pub fn elements(spec: &GroupSpec, window: &GraphWindow) -> Result<Vec<Element>> {
    window.vertices().map(|v| spec.decode(window.id(v))).collect()
}

/// Tabulates `x -> encode(f(decode(x)))` between two enumerated windows.
/// Images outside the codomain window are left unmapped.
pub fn element_map(
    dom_spec: &GroupSpec,
    domain: Arc<GraphWindow>,
    cod_spec: &GroupSpec,
    codomain: Arc<GraphWindow>,
    mut f: impl FnMut(&[i64]) -> Element,
    params: QiParams,
    expansion: Expansion,
) -> Result<QiMap> {
    let mut table = Vec::with_capacity(domain.len());
    for x in domain.vertices() {
        let e = dom_spec.decode(domain.id(x))?;
        table.push(codomain.vertex(&cod_spec.encode(&f(&e))));
    }
    QiMap::new(domain, codomain, table, params, expansion)
}

/// `f(n) = n` for `n >= 0` and `f(n) = 2n` for `n < 0`: a quasi-isometry of
/// the integers with different scaling on the two ends.
pub fn two_speed_map(domain: Arc<GraphWindow>, codomain: Arc<GraphWindow>) -> Result<QiMap> {
    let z = GroupSpec::FreeAbelian(1);
    element_map(
        &z,
        domain,
        &z,
        codomain,
        |e| SmallVec::from_slice(&[if e[0] >= 0 { e[0] } else { 2 * e[0] }]),
        QiParams { c: 2, k: 1 },
        Expansion { num: 1, den: 1, slack: 0 },
    )
}

/// `f(x) = floor(x / 2)` on the integers, two-to-one onto its image.
pub fn halving_map(domain: Arc<GraphWindow>, codomain: Arc<GraphWindow>) -> Result<QiMap> {
    let z = GroupSpec::FreeAbelian(1);
    element_map(
        &z,
        domain,
        &z,
        codomain,
        |e| SmallVec::from_slice(&[e[0].div_euclid(2)]),
        QiParams { c: 2, k: 1 },
        Expansion { num: 1, den: 2, slack: 1 },
    )
}

/// Inclusion of one lattice in another, with the exact constants of the
/// linear map between their coefficient spaces.
#[derive(Clone, Debug)]
pub struct LatticeInclusion {
    pub map: QiMap,
    /// `[Y : f(X)]`, so the map is expected to scale measure by `1/index`.
    pub index: u64,
    /// Coordinates of the domain generators in the codomain generators.
    pub relative: IntMatrix,
}

/// Builds the inclusion of a lattice window into a lattice window containing
/// it. Ids are ambient coordinates, so the table matches ids literally.
pub fn lattice_inclusion(
    dom_spec: &GroupSpec,
    domain: Arc<GraphWindow>,
    cod_spec: &GroupSpec,
    codomain: Arc<GraphWindow>,
) -> Result<LatticeInclusion> {
    let (bx, by) = match (dom_spec.lattice_basis(), cod_spec.lattice_basis()) {
        (Some(bx), Some(by)) if bx.dim() == by.dim() => (bx, by),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{dom_spec} -> {cod_spec} is not a pair of lattices of equal rank"
            )))
        }
    };
    let relative = relative_matrix(&bx, &by)?;
    let det = relative.determinant()?.unsigned_abs();
    let adj = relative.adjugate()?;
    let inverse_norm_num = adj.norm1();
    let c = relative.norm1().max(inverse_norm_num.div_ceil(det));
    let k = covering_radius(&adj, det)?;
    let params = QiParams {
        c: c.try_into().map_err(|_| Error::Overflow)?,
        k,
    };
    let expansion = Expansion {
        num: det,
        den: inverse_norm_num,
        slack: 0,
    };
    let table = domain.vertices().map(|x| codomain.vertex(domain.id(x))).collect();
    if domain.host() != dom_spec.to_string() || codomain.host() != cod_spec.to_string() {
        return Err(Error::WindowMismatch(format!(
            "windows {} -> {} were not enumerated from {dom_spec} -> {cod_spec}",
            domain.host(),
            codomain.host()
        )));
    }
    let map = QiMap::new(domain, codomain, table, params, expansion)?;
    Ok(LatticeInclusion {
        map,
        index: det,
        relative,
    })
}

/// `B_Y^-1 B_X`, required to be integral.
fn relative_matrix(bx: &IntMatrix, by: &IntMatrix) -> Result<IntMatrix> {
    let det_y = by.determinant()?;
    let scaled = by.adjugate()?.mul(bx)?;
    if det_y == 0 || scaled.entries.iter().any(|x| x % det_y != 0) {
        return Err(Error::InvalidArgument("domain lattice is not contained in the codomain".into()));
    }
    Ok(IntMatrix {
        dim: scaled.dim,
        entries: scaled.entries.iter().map(|x| x / det_y).collect(),
    })
}

/// Largest l1 distance from a point of `Z^d` to the lattice `R Z^d`, where
/// `adj` is the adjugate of `R` and `det = |det R|`. A point `y` lies in the
/// lattice iff `adj * y = 0 (mod det)`, so the search runs over those residues.
fn covering_radius(adj: &IntMatrix, det: u64) -> Result<u32> {
    if det == 0 {
        return Err(Error::InvalidArgument("singular lattice map".into()));
    }
    if det > 1 << 24 {
        return Err(Error::InvalidArgument(format!("index {det} is too large")));
    }
    let d = adj.dim();
    let m = det as i64;
    let steps: Vec<Vec<i64>> = (0..d)
        .flat_map(|j| {
            let col = adj.column(j);
            [
                col.iter().map(|x| x.rem_euclid(m)).collect(),
                col.iter().map(|x| (-x).rem_euclid(m)).collect(),
            ]
        })
        .collect();
    let mut seen: BTreeMap<Vec<i64>, u32> = BTreeMap::new();
    let start = vec![0i64; d];
    seen.insert(start.clone(), 0);
    let mut layer = vec![start];
    let mut radius = 0;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for key in &layer {
            for step in &steps {
                let moved: Vec<i64> = key.iter().zip(step).map(|(a, b)| (a + b) % m).collect();
                if !seen.contains_key(&moved) {
                    seen.insert(moved.clone(), radius + 1);
                    next.push(moved);
                }
            }
        }
        if !next.is_empty() {
            radius += 1;
        }
        layer = next;
    }
    Ok(radius)
}

/// Index `[Z^d : M Z^d] = |det M|`.
pub fn lattice_index(m: &IntMatrix) -> Result<u64> {
    Ok(m.determinant()?.unsigned_abs())
}

/// Inclusion of `M Z^d` into `Z^d`. The codomain is the ball of radius
/// `radius`; the domain is the largest ball of the sublattice whose image
/// stays inside it.
pub fn sublattice_inclusion(
    d: u32,
    m: &IntMatrix,
    radius: u32,
    budget: usize,
) -> Result<LatticeInclusion> {
    let cod_spec = GroupSpec::FreeAbelian(d);
    let dom_spec = GroupSpec::Sublattice(m.clone());
    dom_spec.validate()?;
    let norm = m.norm1().max(1);
    let dom_radius = (radius as u64 / norm) as u32;
    if dom_radius == 0 {
        return Err(Error::WindowTooSmall(format!(
            "radius {radius} is below the generator length {norm}"
        )));
    }
    let codomain = Arc::new(enumerate_window(&cod_spec, radius, budget)?);
    let domain = Arc::new(enumerate_window(&dom_spec, dom_radius, budget)?);
    let inc = lattice_inclusion(&dom_spec, domain, &cod_spec, codomain)?;
    if let Some(x) = inc.map.domain().vertices().find(|&x| inc.map.apply(x).is_none()) {
        return Err(Error::WindowMismatch(format!(
            "image of {} leaves the codomain window",
            inc.map.domain().id(x)
        )));
    }
    Ok(inc)
}

/// Lattice inclusion with windows just large enough that every codomain
/// vertex within `rho` of the identity has all of its preimages tabulated,
/// and the codomain has `margin` further layers of complete vertices.
pub fn sized_lattice_inclusion(
    dom_spec: &GroupSpec,
    cod_spec: &GroupSpec,
    rho: u32,
    margin: u32,
    budget: usize,
) -> Result<LatticeInclusion> {
    let bx = dom_spec
        .lattice_basis()
        .ok_or_else(|| Error::InvalidArgument(format!("{dom_spec} is not a lattice")))?;
    let by = cod_spec
        .lattice_basis()
        .ok_or_else(|| Error::InvalidArgument(format!("{cod_spec} is not a lattice")))?;
    let relative = relative_matrix(&bx, &by)?;
    let det = relative.determinant()?.unsigned_abs();
    let den = relative.adjugate()?.norm1();
    let dom_radius = (den * rho as u64 / det).max(1);
    let dom_radius = u32::try_from(dom_radius).map_err(|_| Error::Overflow)?;
    let domain = Arc::new(enumerate_window(dom_spec, dom_radius, budget)?);
    let codomain = Arc::new(enumerate_window(cod_spec, rho + margin, budget)?);
    lattice_inclusion(dom_spec, domain, cod_spec, codomain)
}

/// `Y x C_n` built from a window of `Y`, with the embedding of layer 0 and
/// the projection to `Y`.
#[derive(Clone, Debug)]
pub struct CyclicLayers {
    pub product: Arc<GraphWindow>,
    pub base: Arc<GraphWindow>,
    pub n: u32,
    /// `y -> (y, 0)`.
    pub embed: QiMap,
    /// `(y, k) -> y`.
    pub project: QiMap,
}

impl CyclicLayers {
    pub fn layer(&self, v: Vertex, k: u32) -> Vertex {
        v * self.n + k
    }

    /// `A x C_n`.
    pub fn lift_set(&self, set: &VertexSet) -> Result<VertexSet> {
        if set.window() != self.base.token() {
            return Err(Error::WindowMismatch("set is not in the base window".into()));
        }
        self.product
            .set_from_vertices(set.iter().flat_map(|v| (0..self.n).map(move |k| v * self.n + k)))
    }
}

/// Cartesian product of a window with the cycle `C_n`. For `n = 1` the cycle
/// is a point and for `n = 2` a single edge.
pub fn product_with_cyclic(base: &Arc<GraphWindow>, n: u32) -> Result<CyclicLayers> {
    if n == 0 {
        return Err(Error::InvalidArgument("cycle length must be at least 1".into()));
    }
    if (base.len() as u64) * (n as u64) > Vertex::MAX as u64 {
        return Err(Error::Overflow);
    }
    let host = format!("prod:{}:{n}", base.host());
    let mut builder = WindowBuilder::new(host);
    let mut nbrs = Vec::new();
    let mut id = String::new();
    for v in base.vertices() {
        for k in 0..n {
            nbrs.clear();
            nbrs.extend(base.neighbors(v).iter().map(|&w| w * n + k));
            if n >= 2 {
                nbrs.push(v * n + (k + 1) % n);
            }
            if n >= 3 {
                nbrs.push(v * n + (k + n - 1) % n);
            }
            id.clear();
            let _ = write!(id, "{};{k}", base.id(v));
            builder.push_vertex(&id, &nbrs);
        }
    }
    let extra = cyclic_generators(n) as u32;
    let product = Arc::new(builder.finish(
        base.center() * n,
        base.interior_radius(),
        base.degree_bound() + extra,
    )?);
    let half = n / 2;
    let embed = QiMap::new(
        base.clone(),
        product.clone(),
        base.vertices().map(|v| Some(v * n)).collect(),
        QiParams { c: 1, k: half },
        Expansion { num: 1, den: 1, slack: 0 },
    )?;
    let project = QiMap::new(
        product.clone(),
        base.clone(),
        product.vertices().map(|p| Some(p / n)).collect(),
        QiParams { c: 1, k: half },
        Expansion { num: 1, den: 1, slack: half as u64 },
    )?;
    Ok(CyclicLayers {
        product,
        base: base.clone(),
        n,
        embed,
        project,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: usize = 1 << 22;

    #[test]
    fn spec_round_trip() {
        for s in ["zd:2", "heis", "lamp:3", "sublattice:2:[[2,0],[0,2]]", "prod:zd:1:3", "prod:sublattice:1:[[2]]:2"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("lamp:1".parse::<GroupSpec>().is_err());
        assert!("sublattice:2:[[1,2],[2,4]]".parse::<GroupSpec>().is_err());
        assert!("zd:x".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn small_windows() {
        assert_eq!(enumerate_window(&GroupSpec::FreeAbelian(1), 3, BUDGET).unwrap().len(), 7);
        assert_eq!(enumerate_window(&GroupSpec::FreeAbelian(2), 2, BUDGET).unwrap().len(), 13);
        assert_eq!(enumerate_window(&GroupSpec::Heisenberg3, 1, BUDGET).unwrap().len(), 5);
        assert_eq!(enumerate_window(&GroupSpec::Heisenberg3, 2, BUDGET).unwrap().len(), 17);
        assert_eq!(enumerate_window(&GroupSpec::Lamplighter(2), 1, BUDGET).unwrap().len(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_window(&GroupSpec::FreeAbelian(2), 10, 50).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 50, reached: 50 });
    }

    #[test]
    fn generators_invert() {
        for spec in ["zd:3", "heis", "lamp:2", "lamp:5", "prod:heis:2", "prod:lamp:3:4"] {
            let spec: GroupSpec = spec.parse().unwrap();
            let w = enumerate_window(&spec, 3, BUDGET).unwrap();
            for v in w.vertices() {
                let e = spec.decode(w.id(v)).unwrap();
                for g in 0..spec.generator_count() {
                    let back = spec.apply(&spec.apply(&e, g), spec.inverse_generator(g));
                    assert_eq!(back, e);
                    assert_ne!(spec.apply(&e, g), e);
                }
            }
        }
    }

    #[test]
    fn decode_rejects_non_canonical_ids() {
        let lamp = GroupSpec::Lamplighter(3);
        assert!(lamp.decode("0|1:1,0:2").is_err());
        assert!(lamp.decode("0|1:0").is_err());
        assert_eq!(lamp.decode("2|-1:2,4:1").unwrap().as_slice(), &[2, -1, 2, 4, 1]);
        let sub: GroupSpec = "sublattice:1:[[2]]".parse().unwrap();
        assert!(sub.decode("3").is_err());
        assert_eq!(sub.decode("-4").unwrap().as_slice(), &[-2]);
        assert!(GroupSpec::FreeAbelian(1).decode("+1").is_err());
    }

    #[test]
    fn determinants_and_adjugates() {
        let m: IntMatrix = "[[2,1],[0,3]]".parse().unwrap();
        assert_eq!(m.determinant().unwrap(), 6);
        let adj = m.adjugate().unwrap();
        assert_eq!(m.mul(&adj).unwrap(), IntMatrix::diagonal(&[6, 6]));
        let p: IntMatrix = "[[0,1,0],[1,0,0],[0,0,5]]".parse().unwrap();
        assert_eq!(p.determinant().unwrap(), -5);
        assert_eq!(m.norm1(), 4);
    }

    #[test]
    fn inclusion_constants() {
        let inc = sublattice_inclusion(1, &IntMatrix::diagonal(&[2]), 20, BUDGET).unwrap();
        assert_eq!(inc.index, 2);
        assert_eq!(inc.map.params(), QiParams { c: 2, k: 1 });
        let inc = sublattice_inclusion(2, &"[[2,1],[0,3]]".parse().unwrap(), 12, BUDGET).unwrap();
        assert_eq!(inc.index, 6);
        let inc = sublattice_inclusion(2, &IntMatrix::diagonal(&[2, 2]), 12, BUDGET).unwrap();
        assert_eq!(inc.index, 4);
        assert_eq!(inc.map.params().k, 2);
    }

    #[test]
    fn ladder_projection_fibres() {
        let base = Arc::new(enumerate_window(&GroupSpec::FreeAbelian(1), 6, BUDGET).unwrap());
        let layers = product_with_cyclic(&base, 2).unwrap();
        assert_eq!(layers.product.len(), 26);
        for v in base.vertices() {
            assert_eq!(layers.project.fibre(v).len(), 2);
        }
        let one = product_with_cyclic(&base, 1).unwrap();
        assert_eq!(one.product.len(), base.len());
    }
}
