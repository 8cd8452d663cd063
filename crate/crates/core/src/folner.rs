//! Nested families of finite sets with small boundary, and their pullback
//! along quasi-isometries.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Roots;

use crate::cayley::GroupSpec;
use crate::error::{Error, Result};
use crate::graph::{GraphWindow, Vertex, VertexSet, WindowToken};
use crate::maps::QiMap;
use crate::Rational;

/// `A_1 ⊆ A_2 ⊆ ...` stored as one vertex order and the prefix length of
/// each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerFamily {
    window: WindowToken,
    labels: Vec<u64>,
    order: Vec<Vertex>,
    cuts: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FolnerStats {
    pub label: u64,
    pub size: u64,
    pub boundary1: u64,
    pub boundary2: u64,
}

impl FolnerStats {
    pub fn ratio1(&self) -> Rational {
        Rational::new(self.boundary1, self.size)
    }

    pub fn ratio2(&self) -> Rational {
        Rational::new(self.boundary2, self.size)
    }
}

/// An index at which the `R`-isoperimetric ratio has dropped below `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FolnerWitness {
    pub eps: Rational,
    pub label: u64,
    pub radius: u32,
}

impl FolnerFamily {
    /// Member `i` is `{v : level[v] <= i}`; `None` levels belong to no member.
    pub fn from_levels(window: &GraphWindow, labels: Vec<u64>, level: &[Option<usize>]) -> Result<Self> {
        if level.len() != window.len() {
            return Err(Error::InvalidArgument("one level per vertex is required".into()));
        }
        let count = labels.len();
        let mut order: Vec<Vertex> = window
            .vertices()
            .filter(|&v| level[v as usize].is_some_and(|l| l < count))
            .collect();
        order.sort_by_key(|&v| (level[v as usize], v));
        let mut cuts = vec![0; count];
        for &v in &order {
            cuts[level[v as usize].unwrap()] += 1;
        }
        for i in 1..count {
            cuts[i] += cuts[i - 1];
        }
        let family = FolnerFamily {
            window: window.token(),
            labels,
            order,
            cuts,
        };
        family.check_nonempty()?;
        Ok(family)
    }

    /// Builds a family from explicit sets, which must be nested.
    pub fn from_sets(window: &GraphWindow, labels: Vec<u64>, sets: &[VertexSet]) -> Result<Self> {
        if labels.len() != sets.len() {
            return Err(Error::InvalidArgument("one label per set is required".into()));
        }
        let mut level = vec![None; window.len()];
        for (i, s) in sets.iter().enumerate().rev() {
            window.check_set(s)?;
            if i + 1 < sets.len() && !s.is_subset(&sets[i + 1]) {
                return Err(Error::InvalidArgument(format!("member {i} is not inside member {}", i + 1)));
            }
            for v in s.iter() {
                level[v as usize] = Some(i);
            }
        }
        Self::from_levels(window, labels, &level)
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.cuts.first() == Some(&0) {
            return Err(Error::EmptySet);
        }
        Ok(())
    }

    pub fn window(&self) -> WindowToken {
        self.window
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn size(&self, i: usize) -> usize {
        self.cuts[i]
    }

    /// Vertices of member `i`, in level order.
    pub fn members(&self, i: usize) -> &[Vertex] {
        &self.order[..self.cuts[i]]
    }

    /// Vertices of member `i` that are not in member `i - 1`.
    pub fn layer(&self, i: usize) -> &[Vertex] {
        let start = if i == 0 { 0 } else { self.cuts[i - 1] };
        &self.order[start..self.cuts[i]]
    }

    pub fn set(&self, window: &GraphWindow, i: usize) -> Result<VertexSet> {
        if window.token() != self.window {
            return Err(Error::WindowMismatch("family belongs to another window".into()));
        }
        window.set_from_vertices(self.members(i).iter().copied())
    }

    pub fn stats(&self, window: &GraphWindow, i: usize) -> Result<FolnerStats> {
        let a = self.set(window, i)?;
        Ok(FolnerStats {
            label: self.labels[i],
            size: a.len() as u64,
            boundary1: window.boundary(&a, 1)?.len() as u64,
            boundary2: window.boundary(&a, 2)?.len() as u64,
        })
    }

    pub fn all_stats(&self, window: &GraphWindow) -> Result<Vec<FolnerStats>> {
        (0..self.len()).map(|i| self.stats(window, i)).collect()
    }

    /// First member whose `R`-ratio is below `eps`, if any.
    pub fn witness(&self, window: &GraphWindow, radius: u32, eps: Rational) -> Result<Option<FolnerWitness>> {
        for i in 0..self.len() {
            let a = self.set(window, i)?;
            if isoperimetric_ratio(window, &a, radius)? < eps {
                return Ok(Some(FolnerWitness {
                    eps,
                    label: self.labels[i],
                    radius,
                }));
            }
        }
        Ok(None)
    }
}

/// Smallest index from which the sequence is strictly decreasing.
pub fn decreasing_from(values: &[Rational]) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let mut start = values.len() - 1;
    while start > 0 && values[start - 1] > values[start] {
        start -= 1;
    }
    Some(start)
}

/// `|boundary_R A| / |A|`.
pub fn isoperimetric_ratio(window: &GraphWindow, set: &VertexSet, radius: u32) -> Result<Rational> {
    window.check_set(set)?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let b = window.boundary(set, radius)?;
    Ok(Rational::new(b.len() as u64, set.len() as u64))
}

/// Level of an element in the standard family: the least `n >= 1` whose
/// member contains it.
fn standard_level(spec: &GroupSpec, e: &[i64]) -> Option<u64> {
    let raw = match spec {
        GroupSpec::FreeAbelian(_) | GroupSpec::Sublattice(_) => {
            e.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
        }
        GroupSpec::Heisenberg3 => {
            let c = e[2].unsigned_abs();
            let mut root = c.sqrt();
            if root * root < c {
                root += 1;
            }
            e[0].unsigned_abs().max(e[1].unsigned_abs()).max(root)
        }
        GroupSpec::Lamplighter(_) => {
            let cursor = e[0];
            let positions = e[1..].iter().step_by(2);
            if cursor < 0 || positions.clone().any(|&p| p < 0) {
                return None;
            }
            positions.fold(cursor, |m, &p| m.max(p)) as u64
        }
        GroupSpec::CyclicProduct(base, _) => return standard_level(base, &e[1..]),
    };
    Some(raw.max(1))
}

/// Size of member `n` of the standard family.
pub fn standard_size(spec: &GroupSpec, n: u64) -> Option<u64> {
    match spec {
        GroupSpec::FreeAbelian(d) => (2 * n + 1).checked_pow(*d),
        GroupSpec::Sublattice(m) => (2 * n + 1).checked_pow(m.dim() as u32),
        GroupSpec::Heisenberg3 => (2 * n + 1).checked_pow(2)?.checked_mul(2 * n * n + 1),
        GroupSpec::Lamplighter(m) => (*m as u64).checked_pow(u32::try_from(n + 1).ok()?)?.checked_mul(n + 1),
        GroupSpec::CyclicProduct(base, k) => standard_size(base, n)?.checked_mul(*k as u64),
    }
}

/// The standard Følner family with members `n = 1..=count`: coordinate boxes
/// `[-n, n]^d` for lattices (in the lattice's own coordinates), the boxes
/// `|a|, |b| <= n, |c| <= n^2` for the Heisenberg group, configurations with
/// cursor and lamps in `[0, n]` for lamplighters, and `A_n x C_k` for products.
/// Fails unless every member lies in the window with two layers to spare.
pub fn standard_folner(spec: &GroupSpec, window: &GraphWindow, count: u64) -> Result<FolnerFamily> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut level = Vec::with_capacity(window.len());
    let mut per_level = vec![0u64; count as usize];
    let mut deepest = 0;
    for v in window.vertices() {
        let e = spec.decode(window.id(v))?;
        let l = standard_level(spec, &e).filter(|&l| l <= count);
        if let Some(l) = l {
            per_level[l as usize - 1] += 1;
            deepest = deepest.max(window.depth(v));
        }
        level.push(l.map(|l| l as usize - 1));
    }
    let mut total = 0;
    for n in 1..=count {
        total += per_level[n as usize - 1];
        let expected = standard_size(spec, n).ok_or(Error::Overflow)?;
        if total != expected {
            return Err(Error::WindowTooSmall(format!(
                "member {n} has {total} of its {expected} elements in the window"
            )));
        }
    }
    if deepest + 2 > window.interior_radius() {
        return Err(Error::WindowTooSmall(format!(
            "member {count} reaches depth {deepest}; interior radius {} leaves no margin",
            window.interior_radius()
        )));
    }
    FolnerFamily::from_levels(window, (1..=count).collect(), &level)
}

/// `A_n = f^-1(G_n^{+K})^{+1}` together with
/// `Q' = max |boundary_2 A_n| / |boundary_2 G_n|`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub family: FolnerFamily,
    pub q_prime: Option<Rational>,
}

pub fn pullback_folner(f: &QiMap, family: &FolnerFamily, k: u32) -> Result<Pullback> {
    let x_win = f.domain();
    let y_win = f.codomain();
    if family.window() != y_win.token() {
        return Err(Error::WindowMismatch("Følner family is not in the codomain".into()));
    }
    let mut sets = Vec::with_capacity(family.len());
    let mut q_prime: Option<Rational> = None;
    for i in 0..family.len() {
        let g = family.set(y_win, i)?;
        let grown = y_win.neighborhood(&g, k)?;
        let a = x_win.neighborhood(&f.preimage(&grown)?, 1)?;
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        let bg = y_win.boundary(&g, 2)?.len() as u64;
        let ba = x_win.boundary(&a, 2)?.len() as u64;
        if bg > 0 {
            let q = Rational::new(ba, bg);
            q_prime = Some(q_prime.map_or(q, |p| p.max(q)));
        }
        sets.push(a);
    }
    let family = FolnerFamily::from_sets(x_win, family.labels().to_vec(), &sets)?;
    Ok(Pullback { family, q_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::enumerate_window;

    const BUDGET: usize = 1 << 22;

    #[test]
    fn line_boxes() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(1), 30, BUDGET).unwrap();
        let fam = standard_folner(&GroupSpec::FreeAbelian(1), &w, 20).unwrap();
        for (i, s) in fam.all_stats(&w).unwrap().iter().enumerate() {
            let n = i as u64 + 1;
            assert_eq!(s.ratio1(), Rational::new(4, 2 * n + 1));
            assert_eq!(s.boundary1, 4);
        }
        let ratios: Vec<Rational> = (0..fam.len())
            .map(|i| isoperimetric_ratio(&w, &fam.set(&w, i).unwrap(), 1).unwrap())
            .collect();
        assert_eq!(decreasing_from(&ratios), Some(0));
    }

    #[test]
    fn square_boxes() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(2), 24, BUDGET).unwrap();
        let fam = standard_folner(&GroupSpec::FreeAbelian(2), &w, 10).unwrap();
        let s = fam.stats(&w, 4).unwrap();
        let side = 11;
        assert_eq!(s.size, side * side);
        assert_eq!(s.boundary1, 8 * side - 4);
    }

    #[test]
    fn lamplighter_sizes() {
        let spec = GroupSpec::Lamplighter(2);
        let w = enumerate_window(&spec, 12, BUDGET).unwrap();
        let fam = standard_folner(&spec, &w, 2).unwrap();
        assert_eq!(fam.size(1), 24);
        assert_eq!(fam.size(0), 8);
    }

    #[test]
    fn too_small_windows_are_rejected() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(1), 10, BUDGET).unwrap();
        assert!(matches!(
            standard_folner(&GroupSpec::FreeAbelian(1), &w, 9),
            Err(Error::WindowTooSmall(_))
        ));
        assert!(standard_folner(&GroupSpec::FreeAbelian(1), &w, 8).is_ok());
    }

    #[test]
    fn nesting_is_checked() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(1), 5, BUDGET).unwrap();
        let a = w.set_from_ids(["0", "1"]).unwrap();
        let b = w.set_from_ids(["1", "2"]).unwrap();
        assert!(FolnerFamily::from_sets(&w, vec![1, 2], &[a.clone(), b]).is_err());
        let c = w.set_from_ids(["0", "1", "2"]).unwrap();
        assert!(FolnerFamily::from_sets(&w, vec![1, 2], &[a, c]).is_ok());
    }

    #[test]
    fn ratio_of_empty_set() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(1), 5, BUDGET).unwrap();
        assert_eq!(isoperimetric_ratio(&w, &w.empty_set(), 1), Err(Error::EmptySet));
        let a = w.set_from_ids(["0", "1", "2", "3"]).unwrap();
        assert_eq!(isoperimetric_ratio(&w, &a, 1).unwrap(), Rational::new(4, 4));
    }
}
