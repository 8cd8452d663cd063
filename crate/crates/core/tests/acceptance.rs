//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;
use std::time::{Duration, Instant};

use qiscale_core::cayley::{
    enumerate_window, halving_map, lattice_inclusion, sized_lattice_inclusion, two_speed_map,
    GroupSpec, IntMatrix,
};
use qiscale_core::folner::{standard_folner, FolnerFamily};
use qiscale_core::maps::{compose, perturbed_identity, quasi_inverse};
use qiscale_core::partition::verify::verify_partition;
use qiscale_core::partition::{partition_window, tree_cut, Tree};
use qiscale_core::realize::{lift_to_products, realize_bijection, realize_mn};
use qiscale_core::scaling::{lamplighter_sc, qi_lamplighter_predicate, Ends, ScalingGroup};
use qiscale_core::test_sets::{random_connected_sets, random_balls, thicken, LabeledSet};
use qiscale_core::{seed, Error, GraphWindow, Rational, Vertex};
use rand::Rng;

const BUDGET: usize = 1 << 23;
const SEED: u64 = 20_240_601;

const ESTIMATE_TOL: (u64, u64) = (1, 100);
const ESTIMATE_TIME: Duration = Duration::from_secs(5);
const PRODUCT_TOL: (u64, u64) = (2, 100);
const TREE_TIME: Duration = Duration::from_secs(60);
const BIJECTION_L: u32 = 2;
const HALL_L: u32 = 5;
const LIFT_BOUND: u64 = 4;

fn tol((a, b): (u64, u64)) -> Rational {
    Rational::new(a, b)
}

fn dist(a: Rational, b: Rational) -> Rational {
    if a > b {
        a - b
    } else {
        b - a
    }
}

fn report(n: u32, name: &str, result: Result<String, String>, failed: &mut bool) {
    match result {
        Ok(detail) => println!("PASS {n} {name}: {detail}"),
        Err(detail) => {
            *failed = true;
            println!("FAIL {n} {name}: {detail}");
        }
    }
}

fn window(spec: &GroupSpec, r: u32) -> Arc<GraphWindow> {
    Arc::new(enumerate_window(spec, r, BUDGET).unwrap())
}

fn estimator() -> Result<String, String> {
    let cases: Vec<(GroupSpec, IntMatrix)> = vec![
        (GroupSpec::FreeAbelian(1), IntMatrix::diagonal(&[2])),
        (GroupSpec::FreeAbelian(1), IntMatrix::diagonal(&[4])),
        (GroupSpec::FreeAbelian(1), IntMatrix::diagonal(&[6])),
        (GroupSpec::FreeAbelian(2), IntMatrix::diagonal(&[2, 1])),
        (GroupSpec::FreeAbelian(2), IntMatrix::diagonal(&[2, 2])),
        (GroupSpec::FreeAbelian(2), IntMatrix::new(vec![vec![2, 1], vec![0, 3]]).unwrap()),
    ];
    let mut lines = Vec::new();
    for (cod, m) in cases {
        let start = Instant::now();
        let d = m.dim() as u32;
        let rho = 200 * d + 2;
        let inc = sized_lattice_inclusion(&GroupSpec::Sublattice(m.clone()), &cod, rho, 2, BUDGET)
            .map_err(|e| e.to_string())?;
        let family = standard_folner(&cod, inc.map.codomain(), 200).map_err(|e| e.to_string())?;
        let est = inc.map.scaling_estimate(&family, tol(ESTIMATE_TOL)).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let target = Rational::new(1, inc.index);
        let err = dist(est.last(), target);
        let line = format!("index {} estimate {:.4} in {:.2}s", inc.index, to_f64(est.last()), elapsed.as_secs_f64());
        if err > tol(ESTIMATE_TOL) || elapsed > ESTIMATE_TIME {
            return Err(line);
        }
        lines.push(line);
    }
    Ok(lines.join("; "))
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn interval_family(y: &GraphWindow, ns: &[i64], negative: bool) -> FolnerFamily {
    let sets: Vec<_> = ns
        .iter()
        .map(|&n| {
            let ids: Vec<String> = if negative { (-n..0).map(|i| i.to_string()).collect() } else { (0..n).map(|i| i.to_string()).collect() };
            y.set_from_ids(ids.iter().map(String::as_str)).unwrap()
        })
        .collect();
    FolnerFamily::from_sets(y, ns.iter().map(|&n| n as u64).collect(), &sets).unwrap()
}

fn uniqueness() -> Result<String, String> {
    let z = GroupSpec::FreeAbelian(1);
    let x = window(&z, 212);
    let y = window(&z, 212);
    let f = two_speed_map(x, y.clone()).map_err(|e| e.to_string())?;
    let ns: Vec<i64> = (1..=200).collect();
    let right = f.scaling_estimate(&interval_family(&y, &ns, false), tol(ESTIMATE_TOL)).map_err(|e| e.to_string())?;
    let left = f.scaling_estimate(&interval_family(&y, &ns, true), tol(ESTIMATE_TOL)).map_err(|e| e.to_string())?;
    if dist(right.last(), Rational::from_integer(1)) > tol(ESTIMATE_TOL)
        || dist(left.last(), Rational::new(1, 2)) > tol(ESTIMATE_TOL)
    {
        return Err(format!("estimates {} and {}", right.last(), left.last()));
    }
    let mut growth = Vec::new();
    for q in 1..=6u64 {
        let kappa = Rational::new(q, 4);
        let mut sup = Vec::new();
        for n in [50i64, 100, 200] {
            let sets = vec![
                LabeledSet { label: format!("[0,{n})"), set: interval_family(&y, &[n], false).set(&y, 0).unwrap() },
                LabeledSet { label: format!("[-{n},0)"), set: interval_family(&y, &[n], true).set(&y, 0).unwrap() },
            ];
            let rep = f.defect(kappa, &sets, 2).map_err(|e| e.to_string())?;
            if !rep.skipped.is_empty() {
                return Err(format!("rows skipped at n = {n}"));
            }
            sup.push((n, rep.sup_constant.unwrap_or_default()));
        }
        let (n0, s0) = sup[0];
        let linear = s0 > Rational::from_integer(0)
            && sup[1..].iter().all(|&(n, s)| s * Rational::from_integer(n0 as u64) >= s0 * Rational::from_integer(n as u64));
        if !linear {
            return Err(format!("kappa {kappa}: {sup:?}"));
        }
        growth.push(format!("{kappa}:{}", sup[2].1));
    }
    Ok(format!("estimates {} / {}; defect ratios at n=200 {}", right.last(), left.last(), growth.join(" ")))
}

fn composition() -> Result<String, String> {
    let mut worst_product = Rational::from_integer(0);
    let mut worst_inverse = Rational::from_integer(0);
    let z = GroupSpec::FreeAbelian(1);
    let zw = window(&z, 210);
    let z_family = standard_folner(&z, &zw, 200).map_err(|e| e.to_string())?;
    for i in 0..20u64 {
        let mut rng = seed::stream(SEED, 300 + i);
        let a: i64 = rng.gen_range(1..=5);
        let b: i64 = rng.gen_range(2..=5);
        let sy = if a == 1 { z.clone() } else { GroupSpec::Sublattice(IntMatrix::diagonal(&[a])) };
        let sx = GroupSpec::Sublattice(IntMatrix::diagonal(&[a * b]));
        let xw = window(&sx, 210);
        let yw = window(&sy, 210 * b as u32 + 20);
        let f = lattice_inclusion(&sx, xw.clone(), &sy, yw.clone()).map_err(|e| e.to_string())?.map;
        let g = lattice_inclusion(&sy, yw.clone(), &z, zw.clone()).map_err(|e| e.to_string())?.map;
        let gf = compose(&f, &g).map_err(|e| e.to_string())?;
        let t = tol(PRODUCT_TOL);
        let y_family = standard_folner(&sy, &yw, 200).map_err(|e| e.to_string())?;
        let x_family = standard_folner(&sx, &xw, 200).map_err(|e| e.to_string())?;
        let kf = f.scaling_estimate(&y_family, t).map_err(|e| e.to_string())?.last();
        let kg = g.scaling_estimate(&z_family, t).map_err(|e| e.to_string())?.last();
        let kgf = gf.scaling_estimate(&z_family, t).map_err(|e| e.to_string())?.last();
        let inv = quasi_inverse(&f, f.params().k).map_err(|e| e.to_string())?;
        let kinv = inv.map.scaling_estimate(&x_family, t).map_err(|e| e.to_string())?.last();
        let e1 = dist(kgf, kf * kg);
        let e2 = dist(kinv * kf, Rational::from_integer(1));
        if e1 > t || e2 > t {
            return Err(format!("pair {i} (a={a}, b={b}): |{kgf} - {kf}*{kg}|, |{kinv}*{kf} - 1|"));
        }
        worst_product = worst_product.max(e1);
        worst_inverse = worst_inverse.max(e2);
    }
    Ok(format!(
        "20 pairs, worst product error {:.5}, worst inverse error {:.5}",
        to_f64(worst_product),
        to_f64(worst_inverse)
    ))
}

/// Canonical form of a free tree: the smaller AHU code over its centers.
fn canonical(adj: &[Vec<usize>]) -> String {
    fn code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut parts: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| code(adj, w, v)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut left = n;
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| code(adj, c, usize::MAX)).min().unwrap()
}

fn all_trees(max_n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![vec![vec![]]];
    let mut level = vec![vec![vec![]]];
    for _ in 2..=max_n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.len() {
                let mut u: Vec<Vec<usize>> = t.clone();
                let leaf = u.len();
                u.push(vec![v]);
                u[v].push(leaf);
                if seen.insert(canonical(&u)) {
                    next.push(u);
                }
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn tree_distances(adj: &[Vec<usize>], a: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[a] = 0;
    let mut q = VecDeque::from([a]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// Size `k`, diameter at most `2(k - 1)` in the tree, connected complement.
fn valid_cut(adj: &[Vec<usize>], s: &[usize], k: usize) -> bool {
    let inside: BTreeSet<usize> = s.iter().copied().collect();
    if inside.len() != k {
        return false;
    }
    if s.iter().any(|&a| {
        let d = tree_distances(adj, a);
        s.iter().any(|&b| d[b] > 2 * (k - 1))
    }) {
        return false;
    }
    let rest: Vec<usize> = (0..adj.len()).filter(|v| !inside.contains(v)).collect();
    let Some(&r0) = rest.first() else { return false };
    let mut seen = BTreeSet::from([r0]);
    let mut q = VecDeque::from([r0]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if !inside.contains(&w) && seen.insert(w) {
                q.push_back(w);
            }
        }
    }
    seen.len() == rest.len()
}

fn tree_cuts() -> Result<String, String> {
    let start = Instant::now();
    let trees = all_trees(10);
    let mut checked = 0;
    for adj in &trees {
        let n = adj.len();
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|v| adj[v].iter().filter(move |&&w| v < w).map(move |&w| (v, w))).collect();
        let tree = Tree::from_edges(n, &edges).map_err(|e| e.to_string())?;
        let diameter = tree.diameter();
        for k in 1..diameter {
            let s = tree_cut(&tree, k).map_err(|e| format!("{n}-vertex tree, k = {k}: {e}"))?;
            let ours = valid_cut(adj, &s, k);
            let oracle = (0u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|m| {
                let s: Vec<usize> = (0..n).filter(|&v| m & (1 << v) != 0).collect();
                valid_cut(adj, &s, k)
            });
            if !ours || !oracle {
                return Err(format!("tree {}, k = {k}: cut valid {ours}, oracle {oracle}", canonical(adj)));
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > TREE_TIME {
        return Err(format!("took {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(format!("{} trees, {checked} (tree, k) cases, {:.2}s", trees.len(), elapsed.as_secs_f64()))
}

fn random_window(n: usize, s: u64) -> GraphWindow {
    let mut rng = seed::stream(s, 0);
    let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
    for v in 1..n {
        let p = rng.gen_range(0..v);
        adj[v].insert(p as Vertex);
        adj[p].insert(v as Vertex);
    }
    for _ in 0..n / 2 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            adj[a].insert(b as Vertex);
            adj[b].insert(a as Vertex);
        }
    }
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let adj: Vec<Vec<Vertex>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
    GraphWindow::closed("random", &refs, &adj, 0).unwrap()
}

fn window_partitions() -> Result<String, String> {
    let mut pieces = 0;
    let mut remainders = 0;
    for i in 0..50u64 {
        let n = seed::stream(SEED, 500 + i).gen_range(10..=300);
        let w = random_window(n, seed::split(SEED, 600 + i));
        for k in [2usize, 3, 5] {
            let p = partition_window(&w, k, seed::split(SEED, i)).map_err(|e| e.to_string())?;
            let problems = verify_partition(&w, &p);
            if !problems.is_empty() {
                return Err(format!("window {i}, k = {k}: {}", problems.join("; ")));
            }
            pieces += p.pieces.len();
            remainders += p.remainder.is_some() as usize;
        }
    }
    Ok(format!("150 partitions, {pieces} pieces, {remainders} remainders"))
}

fn realization() -> Result<String, String> {
    let mut worst = 0;
    for (spec, r) in [(GroupSpec::FreeAbelian(1), 60), (GroupSpec::FreeAbelian(2), 14)] {
        let w = window(&spec, r);
        for i in 0..20u64 {
            let h = perturbed_identity(&w, 0.4, seed::split(SEED, 700 + i)).map_err(|e| e.to_string())?;
            let res = realize_bijection(&h, BIJECTION_L).map_err(|e| format!("{spec} perturbation {i}: {e}"))?;
            let problems = res.verify(&h);
            if !problems.is_empty() {
                return Err(format!("{spec} perturbation {i}: {}", problems.join("; ")));
            }
            worst = worst.max(res.l);
        }
    }
    let inc = qiscale_core::cayley::sublattice_inclusion(1, &IntMatrix::diagonal(&[2]), 80, BUDGET)
        .map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for l in 0..=HALL_L {
        match realize_bijection(&inc.map, l) {
            Err(Error::NoBijectionWithinL(fail)) => {
                let w = &fail.witness;
                if !fail.check(&inc.map) || w.neighbors.len() >= w.set.len() {
                    return Err(format!("invalid witness at L = {l}"));
                }
                sizes.push(format!("{}<{}", w.neighbors.len(), w.set.len()));
            }
            Ok(r) => return Err(format!("2Z in Z matched at L = {}", r.l)),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("40 perturbations matched with L <= {worst}; 2Z in Z witnesses |N(A)|<|A|: {}", sizes.join(" ")))
}

fn rational_equivalences() -> Result<String, String> {
    let z = GroupSpec::FreeAbelian(1);
    let mut notes = Vec::new();
    for (r, s) in [(30u32, 1u64), (60, 2), (101, 3), (200, 4)] {
        let f = halving_map(window(&z, r), window(&z, r)).map_err(|e| e.to_string())?;
        let m = realize_mn(&f, 2, 1, 3, seed::split(SEED, s)).map_err(|e| e.to_string())?;
        let problems = m.verify(&f);
        if !problems.is_empty() {
            return Err(format!("radius {r}: {}", problems.join("; ")));
        }
        notes.push(format!("r={r}: L={} d(f,g)={}<={}", m.matching.l, m.displacement, m.proof_bound));
    }
    let f = halving_map(window(&z, 430), window(&z, 210)).map_err(|e| e.to_string())?;
    let lift = lift_to_products(&f, 2, 1).map_err(|e| e.to_string())?;
    let y = &lift.target.product;
    let mut family = Vec::new();
    for n in 1..=200i64 {
        for layers in [vec![0u32, 1], vec![0], vec![1]] {
            let ids: Vec<String> = (-n..=n).flat_map(|i| layers.iter().map(move |k| format!("{i};{k}"))).collect();
            family.push(LabeledSet {
                label: format!("[-{n},{n}]x{layers:?}"),
                set: y.set_from_ids(ids.iter().map(String::as_str)).map_err(|e| e.to_string())?,
            });
        }
    }
    let rep = lift.map.defect(Rational::from_integer(1), &family, 2).map_err(|e| e.to_string())?;
    let sup = rep.sup_constant.ok_or("no rows")?;
    if !rep.skipped.is_empty() || sup > Rational::from_integer(LIFT_BOUND) {
        return Err(format!("lift defect {sup}, {} rows skipped", rep.skipped.len()));
    }
    Ok(format!("{}; lift defect sup {sup} over {} intervals", notes.join(", "), family.len()))
}

/// Whether `n = k^r` and `m = k^s` for some base `k`, with `r/s` accepted.
fn common_base(n: u64, m: u64, accept: impl Fn(u64, u64) -> bool) -> bool {
    (2..=n.max(m)).any(|k| {
        let powers: Vec<(u64, u64)> = (1..=6u32).filter_map(|e| k.checked_pow(e).map(|p| (p, e as u64))).collect();
        let r = powers.iter().find(|p| p.0 == n).map(|p| p.1);
        let s = powers.iter().find(|p| p.0 == m).map(|p| p.1);
        matches!((r, s), (Some(r), Some(s)) if accept(r, s))
    })
}

fn scaling_arithmetic() -> Result<String, String> {
    let trivial = ScalingGroup::Trivial;
    let mut qi_pairs = 0;
    for n in 2..=64u64 {
        for m in 2..=64u64 {
            let v = qi_lamplighter_predicate(n, m, &trivial).map_err(|e| e.to_string())?;
            let w = qi_lamplighter_predicate(m, n, &trivial).map_err(|e| e.to_string())?;
            let expected = common_base(n, m, |r, s| r == s);
            if v.qi != expected || v.qi != w.qi {
                return Err(format!("n = {n}, m = {m}: got {}, expected {expected}", v.qi));
            }
            let two = ScalingGroup::PrimeGenerated(vec![2]);
            let v2 = qi_lamplighter_predicate(n, m, &two).map_err(|e| e.to_string())?;
            let power_of_two = |q: u64| q.is_power_of_two();
            let expected2 = common_base(n, m, |r, s| {
                let g = gcd(r, s);
                power_of_two(r / g) && power_of_two(s / g)
            });
            if v2.qi != expected2 {
                return Err(format!("n = {n}, m = {m} over {{2}}: got {}, expected {expected2}", v2.qi));
            }
            qi_pairs += v.qi as usize;
        }
    }
    let sc12 = lamplighter_sc(12, Ends::TwoEnded).map_err(|e| e.to_string())?;
    if sc12 != ScalingGroup::PrimeGenerated(vec![2, 3]) {
        return Err(format!("Sc(12) = {sc12}"));
    }
    Ok(format!("3969 ordered pairs, {qi_pairs} quasi-isometric over the trivial group, Sc(12) = {{{sc12}}}"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn boundary_calculus() -> Result<String, String> {
    let specs = [
        GroupSpec::FreeAbelian(1),
        GroupSpec::FreeAbelian(2),
        GroupSpec::Heisenberg3,
        GroupSpec::Lamplighter(2),
    ];
    let mut checks = 0;
    let mut sets = 0;
    for (j, spec) in specs.iter().enumerate() {
        let w = window(spec, 12);
        let geo = w.verify_geometry(6).map_err(|e| e.to_string())?;
        let v1 = geo.min_ball(1).unwrap();
        let big = |r: u32| geo.max_ball(r).unwrap();
        let seed_j = seed::split(SEED, 900 + j as u64);
        let mut family = random_connected_sets(&w, 100, 30, 3, seed_j).map_err(|e| e.to_string())?;
        family.extend(random_balls(&w, 25, 2, 1, seed_j).map_err(|e| e.to_string())?);
        let h = perturbed_identity(&w, 0.5, seed_j).map_err(|e| e.to_string())?;
        let (c, k) = (h.params().c, h.params().k);
        for item in &family {
            sets += 1;
            let a = &item.set;
            let thick = thicken(&w, item).map_err(|e| e.to_string())?;
            let b2 = w.boundary(a, 2).map_err(|e| e.to_string())?.len() as u64;
            for r in [2u32, 3] {
                // Thick-set growth bound, on A^{+1}.
                let grown = w.neighborhood(&thick.set, r).map_err(|e| e.to_string())?.len() as u64;
                if grown * v1 > big(r + 3) * thick.set.len() as u64 {
                    return Err(format!("{spec} {}: growth bound with R = {r}", thick.label));
                }
                // Boundary comparison.
                let br = w.boundary(a, r).map_err(|e| e.to_string())?.len() as u64;
                if br * v1 > 2 * big(r + 2) * b2 {
                    return Err(format!("{spec} {}: boundary comparison with R = {r}", item.label));
                }
                checks += 2;
            }
            for r in [1u32, 2] {
                // Boundary pullback for the perturbation.
                let pre = h.preimage(a).map_err(|e| e.to_string())?;
                let lhs = w.boundary(&pre, r).map_err(|e| e.to_string())?;
                let rhs = h.preimage(&w.boundary(a, c * r + k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                if !lhs.is_subset(&rhs) {
                    return Err(format!("{spec} {}: boundary pullback with R = {r}", item.label));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{sets} sets, {checks} inequalities, 0 violations"))
}

fn main() {
    let mut failed = false;
    report(1, "scaling estimator", estimator(), &mut failed);
    report(2, "uniqueness", uniqueness(), &mut failed);
    report(3, "composition algebra", composition(), &mut failed);
    report(4, "tree cuts", tree_cuts(), &mut failed);
    report(5, "window partitions", window_partitions(), &mut failed);
    report(6, "realization", realization(), &mut failed);
    report(7, "rational equivalences", rational_equivalences(), &mut failed);
    report(8, "scaling-group arithmetic", scaling_arithmetic(), &mut failed);
    report(9, "boundary calculus", boundary_calculus(), &mut failed);
    if failed {
        std::process::exit(1);
    }
}
