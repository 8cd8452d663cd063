//! Seeded families of finite test sets: random connected sets, small balls,
//! and their thickenings.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, Vertex, VertexSet};
use crate::seed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSet {
    pub label: String,
    pub set: VertexSet,
}

fn region(window: &GraphWindow, depth: u32) -> Result<Vec<Vertex>> {
    let v: Vec<Vertex> = window.vertices().filter(|&v| window.depth(v) <= depth).collect();
    if v.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(v)
}

/// Grows `count` connected sets inside the ball of radius `depth`, each from a
/// random start by repeatedly adding a random vertex adjacent to the set.
/// Sizes are uniform in `1..=max_size`. Set `i` uses sub-stream `i` of `seed`.
pub fn random_connected_sets(
    window: &GraphWindow,
    count: usize,
    max_size: usize,
    depth: u32,
    seed: u64,
) -> Result<Vec<LabeledSet>> {
    if max_size == 0 {
        return Err(Error::InvalidArgument("max_size must be positive".into()));
    }
    let starts = region(window, depth)?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = seed::stream(seed, i as u64);
        let target = rng.gen_range(1..=max_size);
        let start = *starts.choose(&mut rng).unwrap();
        let mut members = alloc::vec![start];
        let mut frontier: Vec<Vertex> = Vec::new();
        let push_frontier = |v: Vertex, members: &[Vertex], frontier: &mut Vec<Vertex>| {
            for &w in window.neighbors(v) {
                if window.depth(w) <= depth && !members.contains(&w) && !frontier.contains(&w) {
                    frontier.push(w);
                }
            }
        };
        push_frontier(start, &members, &mut frontier);
        while members.len() < target && !frontier.is_empty() {
            let v = frontier.swap_remove(rng.gen_range(0..frontier.len()));
            members.push(v);
            push_frontier(v, &members, &mut frontier);
        }
        out.push(LabeledSet {
            label: format!("random-{i}"),
            set: window.set_from_vertices(members)?,
        })
    }
    Ok(out)
}

/// Balls `B(x, r)` for `count` random centers of depth at most `depth`, with
/// radii cycling through `0..=max_radius`.
pub fn random_balls(
    window: &GraphWindow,
    count: usize,
    max_radius: u32,
    depth: u32,
    seed: u64,
) -> Result<Vec<LabeledSet>> {
    let centers = region(window, depth)?;
    let mut rng = seed::stream(seed, u64::MAX);
    (0..count)
        .map(|i| {
            let x = *centers.choose(&mut rng).unwrap();
            let r = i as u32 % (max_radius + 1);
            Ok(LabeledSet {
                label: format!("ball-{}-{r}", window.id(x)),
                set: window.ball(x, r)?,
            })
        })
        .collect()
}

/// `S^{+1}`, the union of the closed unit balls centred in `S`.
pub fn thicken(window: &GraphWindow, item: &LabeledSet) -> Result<LabeledSet> {
    Ok(LabeledSet {
        label: format!("{}+1", item.label),
        set: window.neighborhood(&item.set, 1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{enumerate_window, GroupSpec};

    #[test]
    fn sets_are_connected_and_reproducible() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(2), 12, 1 << 20).unwrap();
        let a = random_connected_sets(&w, 20, 30, 6, 9).unwrap();
        let b = random_connected_sets(&w, 20, 30, 6, 9).unwrap();
        assert_eq!(a, b);
        for item in &a {
            let s = item.set.as_slice();
            assert!(!s.is_empty() && s.len() <= 30);
            let mut seen = alloc::vec![s[0]];
            let mut i = 0;
            while i < seen.len() {
                for &n in w.neighbors(seen[i]) {
                    if item.set.contains(n) && !seen.contains(&n) {
                        seen.push(n);
                    }
                }
                i += 1;
            }
            assert_eq!(seen.len(), s.len());
        }
    }

    #[test]
    fn thickening_contains_the_set() {
        let w = enumerate_window(&GroupSpec::FreeAbelian(1), 12, 1 << 20).unwrap();
        for item in random_connected_sets(&w, 10, 5, 6, 1).unwrap() {
            let t = thicken(&w, &item).unwrap();
            assert!(item.set.is_subset(&t.set));
            assert_eq!(t.set.len(), item.set.len() + 2);
        }
    }
}
