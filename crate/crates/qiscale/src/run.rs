//! Subcommand execution. Every command yields a JSON report plus an optional
//! CSV table and exported files; nothing here touches the filesystem except
//! to read inputs named on the command line.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use qiscale_core::cayley::{
    enumerate_window, halving_map, product_with_cyclic, sized_lattice_inclusion, two_speed_map, GroupSpec,
    IntMatrix,
};
use qiscale_core::folner::{standard_folner, FolnerFamily};
use qiscale_core::maps::{perturbed_identity, Expansion, QiMap, QiParams};
use qiscale_core::partition::partition_window;
use qiscale_core::partition::verify::verify_partition;
use qiscale_core::realize::{realize_bijection, realize_mn, HallWitness, Side};
use qiscale_core::scaling::{self, lamplighter_sc, qi_lamplighter_predicate, ScalingFactor, ScalingGroup};
use qiscale_core::test_sets::{random_balls, random_connected_sets, LabeledSet};
use qiscale_core::{Error, GraphWindow, Rational, Vertex};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{Cli, Command, Ends, Family, MapArgs, SetArgs};
use crate::error::CliError;
use crate::formats;

/// Default codomain radius for named maps outside `estimate`.
const DEFAULT_MAP_RADIUS: u32 = 30;

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Report {
    pub json: Value,
    pub rows: Option<Table>,
    /// Extra files for the output directory, as (name, contents).
    pub files: Vec<(String, String)>,
    /// Set when the run produced a report but must still exit nonzero.
    pub failure: Option<CliError>,
}

struct Outcome {
    fields: Map<String, Value>,
    rows: Option<Table>,
    files: Vec<(String, String)>,
    failure: Option<CliError>,
}

impl Outcome {
    fn new(fields: Value) -> Self {
        let Value::Object(fields) = fields else { unreachable!("reports are objects") };
        Outcome { fields, rows: None, files: Vec::new(), failure: None }
    }

    fn rows(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.rows = Some(Table { header, rows });
        self
    }

    fn file(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.into(), contents));
        self
    }
}

fn rat(r: Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn decimal(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    Ok(s.parse::<ScalingFactor>()?.ratio())
}

fn hex_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the canonical config JSON and the digests of its input files.
pub fn config_hash(cli: &Cli) -> Result<(Value, String), CliError> {
    let mut inputs = BTreeMap::new();
    if let Some(m) = cli.command.map_args() {
        for path in [&m.map_file, &m.domain, &m.codomain].into_iter().flatten() {
            inputs.insert(path.display().to_string(), hex_digest(&std::fs::read(path)?));
        }
    }
    let config = json!({ "args": cli, "inputs": inputs });
    let canonical = serde_json::to_string(&config).expect("config serializes");
    Ok((config, hex_digest(canonical.as_bytes())))
}

pub fn execute(cli: &Cli, budget: usize) -> Result<Report, CliError> {
    let (config, hash) = config_hash(cli)?;
    let seed = cli.seed;
    let outcome = match &cli.command {
        Command::Window { group, radius } => window(group, *radius, budget)?,
        Command::Folner { group, n, radius } => folner(group, *n, *radius, budget)?,
        Command::Estimate { map, family, n, tol } => estimate(map, *family, *n, tol, budget, seed)?,
        Command::Defect { map, kappa, sets, boundary_radius } => {
            defect(map, kappa, sets, *boundary_radius, budget, seed)?
        }
        Command::VerifyQi { map, margin, pair_radius } => verify_qi(map, *margin, *pair_radius, budget, seed)?,
        Command::Partition { group, radius, k } => partition(group, *radius, *k, budget, seed)?,
        Command::Realize { map, l_max } => realize(map, *l_max, budget, seed)?,
        Command::RealizeMn { map, m, n, l_max } => realize_pieces(map, *m, *n, *l_max, budget, seed)?,
        Command::ScLamp { n, ends } => sc_lamp(*n, *ends)?,
        Command::QiLamp { n, m, sc } => qi_lamp(*n, *m, sc)?,
    };
    let mut fields = outcome.fields;
    fields.insert("command".into(), cli.command.name().into());
    fields.insert("seed".into(), seed.into());
    fields.insert("config_hash".into(), hash.into());
    fields.insert("config".into(), config);
    Ok(Report { json: Value::Object(fields), rows: outcome.rows, files: outcome.files, failure: outcome.failure })
}

fn group_window(group: &str, radius: u32, budget: usize) -> Result<(GroupSpec, Arc<GraphWindow>), CliError> {
    let spec: GroupSpec = group.parse()?;
    let w = enumerate_window(&spec, radius, budget)?;
    Ok((spec, Arc::new(w)))
}

fn window(group: &str, radius: u32, budget: usize) -> Result<Outcome, CliError> {
    let (_, w) = group_window(group, radius, budget)?;
    let mut spheres = vec![0u64; radius as usize + 1];
    for v in w.vertices() {
        spheres[w.depth(v) as usize] += 1;
    }
    let mut ball = 0;
    let rows = spheres
        .iter()
        .enumerate()
        .map(|(r, &s)| {
            ball += s;
            vec![r.to_string(), s.to_string(), ball.to_string()]
        })
        .collect();
    Ok(Outcome::new(json!({
        "host": w.host(),
        "vertices": w.len(),
        "edges": w.edge_count(),
        "interior_radius": w.interior_radius(),
        "degree_bound": w.degree_bound(),
        "center": w.id(w.center()),
        "spheres": spheres,
    }))
    .rows(vec!["r", "sphere", "ball"], rows)
    .file("window.txt", formats::write_window(&w)))
}

fn folner(group: &str, n: u64, radius: Option<u32>, budget: usize) -> Result<Outcome, CliError> {
    let spec: GroupSpec = group.parse()?;
    let mut r = radius.unwrap_or(n.min(u32::MAX as u64) as u32 + 2);
    let (w, fam) = loop {
        let w = enumerate_window(&spec, r, budget)?;
        match standard_folner(&spec, &w, n) {
            Ok(fam) => break (w, fam),
            Err(Error::WindowTooSmall(_)) if radius.is_none() => r += (r / 4).max(1),
            Err(e) => return Err(e.into()),
        }
    };
    let stats = fam.all_stats(&w)?;
    let rows = stats
        .iter()
        .map(|s| {
            vec![
                s.label.to_string(),
                s.size.to_string(),
                s.boundary1.to_string(),
                s.boundary2.to_string(),
                format!("{}", s.ratio1()),
                format!("{}", s.ratio2()),
            ]
        })
        .collect();
    let last = stats.last().expect("count is positive");
    Ok(Outcome::new(json!({
        "group": spec.to_string(),
        "radius": r,
        "members": stats.len(),
        "last": {
            "n": last.label,
            "size": last.size,
            "boundary1": last.boundary1,
            "boundary2": last.boundary2,
            "ratio1": rat(last.ratio1()),
            "ratio2": rat(last.ratio2()),
        },
    }))
    .rows(vec!["n", "size", "boundary1", "boundary2", "ratio1", "ratio2"], rows))
}

enum Preset {
    Lattice(IntMatrix),
    Halving,
    TwoSpeed,
    Identity(GroupSpec),
    Project(u32),
    Perturb(GroupSpec, f64),
}

impl Preset {
    fn parse(name: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("unknown map {name:?}"));
        if let Some(k) = name.strip_suffix("z-in-z") {
            let k: i64 = k.parse().map_err(|_| bad())?;
            return Ok(Preset::Lattice(IntMatrix::diagonal(&[k])));
        }
        if let Some(m) = name.strip_prefix("lattice:") {
            return Ok(Preset::Lattice(m.parse()?));
        }
        if let Some(g) = name.strip_prefix("identity:") {
            return Ok(Preset::Identity(g.parse()?));
        }
        if let Some(n) = name.strip_prefix("project:") {
            return Ok(Preset::Project(n.parse().map_err(|_| bad())?));
        }
        if let Some(rest) = name.strip_prefix("perturb:") {
            let (g, p) = rest.rsplit_once(':').ok_or_else(bad)?;
            let p = parse_rational(p)?;
            return Ok(Preset::Perturb(g.parse()?, decimal(p)));
        }
        match name {
            "halving" => Ok(Preset::Halving),
            "two-speed" => Ok(Preset::TwoSpeed),
            _ => Err(bad()),
        }
    }

    fn codomain(&self) -> GroupSpec {
        match self {
            Preset::Lattice(m) => GroupSpec::FreeAbelian(m.dim() as u32),
            Preset::Identity(g) | Preset::Perturb(g, _) => g.clone(),
            _ => GroupSpec::FreeAbelian(1),
        }
    }
}

struct BuiltMap {
    map: QiMap,
    codomain_spec: Option<GroupSpec>,
    /// `[Y : f(X)]` for lattice inclusions.
    index: Option<u64>,
}

/// Loads or constructs the map. Named maps are tabulated so that the
/// codomain ball of radius `radius` (or `default_radius(codomain)`) is
/// covered with two complete layers to spare.
fn build_map(
    args: &MapArgs,
    default_radius: impl Fn(&GroupSpec) -> u32,
    budget: usize,
    seed: u64,
) -> Result<BuiltMap, CliError> {
    if let Some(path) = &args.map_file {
        let read = |p: &Option<std::path::PathBuf>| -> Result<Arc<GraphWindow>, CliError> {
            let p = p.as_ref().expect("clap requires both windows");
            Ok(Arc::new(formats::read_window(&read_text(p)?)?))
        };
        let (x, y) = (read(&args.domain)?, read(&args.codomain)?);
        let codomain_spec = y.host().parse().ok();
        let map = formats::read_map(&read_text(path)?, x, y)?;
        return Ok(BuiltMap { map, codomain_spec, index: None });
    }
    let preset = Preset::parse(args.map.as_deref().expect("clap requires --map or --map-file"))?;
    let spec = preset.codomain();
    let r = args.radius.unwrap_or_else(|| default_radius(&spec));
    let z = GroupSpec::FreeAbelian(1);
    let zw = |r: u32| -> Result<Arc<GraphWindow>, CliError> { Ok(Arc::new(enumerate_window(&z, r, budget)?)) };
    let mut index = None;
    let map = match preset {
        Preset::Lattice(m) => {
            let inc = sized_lattice_inclusion(&GroupSpec::Sublattice(m), &spec, r, 2, budget)?;
            index = Some(inc.index);
            inc.map
        }
        Preset::Halving => halving_map(zw(2 * r + 4)?, zw(r + 2)?)?,
        Preset::TwoSpeed => two_speed_map(zw(r + 2)?, zw(r + 2)?)?,
        Preset::Identity(g) => {
            let w = Arc::new(enumerate_window(&g, r + 2, budget)?);
            QiMap::from_fn(w.clone(), w, Some, QiParams { c: 1, k: 0 }, Expansion { num: 1, den: 1, slack: 0 })?
        }
        Preset::Project(n) => product_with_cyclic(&zw(r + 2)?, n)?.project,
        Preset::Perturb(g, p) => perturbed_identity(&Arc::new(enumerate_window(&g, r + 2, budget)?), p, seed)?,
    };
    Ok(BuiltMap { map, codomain_spec: Some(spec), index })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    Ok(std::fs::read_to_string(path)?)
}

fn codomain_spec(built: &BuiltMap) -> Result<&GroupSpec, CliError> {
    built
        .codomain_spec
        .as_ref()
        .ok_or_else(|| CliError::Usage("box families need a codomain that is a named group".into()))
}

fn interval_sets(y: &GraphWindow, n: u64, left: bool) -> Result<Vec<qiscale_core::VertexSet>, CliError> {
    (1..=n as i64)
        .map(|k| {
            let ids: Vec<String> = if left { (-k..0).map(|i| i.to_string()).collect() } else { (0..k).map(|i| i.to_string()).collect() };
            Ok(y.set_from_ids(ids.iter().map(String::as_str))?)
        })
        .collect()
}

fn folner_family(built: &BuiltMap, family: Family, n: u64) -> Result<FolnerFamily, CliError> {
    let y = built.map.codomain();
    match family {
        Family::Boxes => Ok(standard_folner(codomain_spec(built)?, y, n)?),
        Family::Intervals | Family::LeftIntervals => {
            let sets = interval_sets(y, n, family == Family::LeftIntervals)?;
            Ok(FolnerFamily::from_sets(y, (1..=n).collect(), &sets)?)
        }
        Family::Random | Family::Balls => {
            Err(CliError::Usage("estimates need a Følner family: boxes, intervals or left-intervals".into()))
        }
    }
}

fn estimate(args: &MapArgs, family: Family, n: u64, tol: &str, budget: usize, seed: u64) -> Result<Outcome, CliError> {
    let tol = parse_rational(tol)?;
    let reach = |spec: &GroupSpec| {
        let d = spec.lattice_basis().map_or(1, |b| b.dim() as u64);
        (n * d + 2).min(u32::MAX as u64) as u32
    };
    let built = build_map(args, reach, budget, seed)?;
    let fam = folner_family(&built, family, n)?;
    let est = built.map.scaling_estimate(&fam, tol)?;
    let rows = (0..est.ratios.len())
        .map(|i| {
            vec![
                est.labels[i].to_string(),
                est.sizes[i].to_string(),
                est.preimages[i].to_string(),
                format!("{}", est.ratios[i]),
                format!("{:.6}", decimal(est.ratios[i])),
            ]
        })
        .collect();
    Ok(Outcome::new(json!({
        "family": family,
        "members": est.ratios.len(),
        "final_ratio": rat(est.last()),
        "final_ratio_decimal": decimal(est.last()),
        "oscillation": rat(est.oscillation),
        "tolerance": rat(est.tolerance),
        "stable": est.stable,
        "verdict": if est.stable { "stable" } else { "unstable" },
        "index": built.index,
    }))
    .rows(vec!["n", "size", "preimage", "ratio", "ratio_decimal"], rows))
}

fn test_sets(built: &BuiltMap, sets: &SetArgs, seed: u64) -> Result<Vec<LabeledSet>, CliError> {
    let y = built.map.codomain();
    match sets.family {
        Family::Random => Ok(random_connected_sets(y, sets.count, sets.size, sets.depth, seed)?),
        Family::Balls => {
            let max_radius = u32::try_from(sets.size).map_err(|_| Error::Overflow)?;
            Ok(random_balls(y, sets.count, max_radius, sets.depth, seed)?)
        }
        family => {
            let fam = folner_family(built, family, sets.n)?;
            (0..fam.len())
                .map(|i| Ok(LabeledSet { label: format!("n={}", fam.labels()[i]), set: fam.set(y, i)? }))
                .collect()
        }
    }
}

fn defect(
    args: &MapArgs,
    kappas: &str,
    sets: &SetArgs,
    boundary_radius: u32,
    budget: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let kappas = kappas.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    let built = build_map(args, |_| DEFAULT_MAP_RADIUS, budget, seed)?;
    let family = test_sets(&built, sets, seed)?;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for kappa in kappas {
        let rep = built.map.defect(kappa, &family, boundary_radius)?;
        let mut json_rows = Vec::new();
        for row in &rep.rows {
            rows.push(vec![
                format!("{kappa}"),
                row.label.clone(),
                row.size.to_string(),
                row.preimage.to_string(),
                row.boundary.to_string(),
                format!("{}", row.defect),
                row.ratio.map_or(String::new(), |r| format!("{r}")),
            ]);
            json_rows.push(json!({
                "label": row.label,
                "size": row.size,
                "preimage": row.preimage,
                "boundary": row.boundary,
                "defect": rat(row.defect),
                "ratio": row.ratio.map(rat),
            }));
        }
        let skipped: Vec<Value> = rep
            .skipped
            .iter()
            .map(|s| json!({ "label": s.label, "error": s.error.code(), "message": s.error.to_string() }))
            .collect();
        reports.push(json!({
            "kappa": rat(rep.kappa),
            "sup_constant": rep.sup_constant.map(rat),
            "unbounded": rep.unbounded,
            "rows": json_rows,
            "skipped": skipped,
        }));
    }
    Ok(Outcome::new(json!({
        "family": sets.family,
        "boundary_radius": boundary_radius,
        "sets": family.len(),
        "reports": reports,
    }))
    .rows(vec!["kappa", "label", "size", "preimage", "boundary", "defect", "ratio"], rows))
}

fn verify_qi(args: &MapArgs, margin: Option<u32>, pair_radius: u32, budget: usize, seed: u64) -> Result<Outcome, CliError> {
    let built = build_map(args, |_| DEFAULT_MAP_RADIUS, budget, seed)?;
    let f = &built.map;
    let p = f.params();
    let rep = f.verify_qi(margin.unwrap_or(p.k), pair_radius)?;
    let violation = rep.violation.as_ref().map(|v| {
        json!({ "x": v.x, "x2": v.x2, "d_domain": v.d_domain, "d_codomain": v.d_codomain })
    });
    let mut out = Outcome::new(json!({
        "ok": rep.ok,
        "C": p.c,
        "K": p.k,
        "pairs_checked": rep.pairs_checked,
        "violation": violation,
        "density_radius": rep.density_radius,
        "density_checked": rep.density_checked,
        "certified_radius": f.certified_radius(),
        "domain_vertices": f.domain().len(),
        "codomain_vertices": f.codomain().len(),
    }))
    .file("map.tsv", formats::write_map(f))
    .file("domain.txt", formats::write_window(f.domain()))
    .file("codomain.txt", formats::write_window(f.codomain()));
    if !rep.ok {
        out.failure = Some(CliError::Failed("the map breaks its declared constants".into()));
    }
    Ok(out)
}

fn partition(group: &str, radius: u32, k: usize, budget: usize, seed: u64) -> Result<Outcome, CliError> {
    let (_, w) = group_window(group, radius, budget)?;
    let p = partition_window(&w, k, seed)?;
    let problems = verify_partition(&w, &p);
    let pieces: Vec<Vec<&str>> = p.pieces.iter().map(|piece| piece.iter().map(|&v| w.id(v)).collect()).collect();
    let rows = p
        .pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            vec![i.to_string(), piece.len().to_string(), p.diameters[i].to_string(), (p.remainder == Some(i)).to_string()]
        })
        .collect();
    let mut out = Outcome::new(json!({
        "k": p.k,
        "piece_count": p.pieces.len(),
        "pieces": pieces,
        "diameters": p.diameters,
        "remainder_index": p.remainder,
        "max_diameter": p.max_diameter(),
        "verifier": { "ok": problems.is_empty(), "problems": problems },
    }))
    .rows(vec!["piece", "size", "diameter", "remainder"], rows);
    if !problems.is_empty() {
        out.failure = Some(CliError::Failed(problems.join("; ")));
    }
    Ok(out)
}

fn witness_json(w: &HallWitness, f: &QiMap, checked: bool) -> Value {
    let (a, b) = match w.side {
        Side::Domain => (f.domain(), f.codomain()),
        Side::Codomain => (f.codomain(), f.domain()),
    };
    let ids = |g: &GraphWindow, vs: &[Vertex]| vs.iter().map(|&v| g.id(v).to_string()).collect::<Vec<_>>();
    json!({
        "side": match w.side { Side::Domain => "domain", Side::Codomain => "codomain" },
        "L": w.radius,
        "set": ids(a, &w.set),
        "neighbors": ids(b, &w.neighbors),
        "checked": checked,
    })
}

fn escalation_json(steps: &[qiscale_core::realize::EscalationStep]) -> Value {
    steps.iter().map(|s| json!({ "L": s.l, "matched": s.matched, "deficiency": s.deficiency })).collect()
}

fn realize(args: &MapArgs, l_max: u32, budget: usize, seed: u64) -> Result<Outcome, CliError> {
    let built = build_map(args, |_| DEFAULT_MAP_RADIUS, budget, seed)?;
    let f = &built.map;
    let (x, y) = (f.domain(), f.codomain());
    match realize_bijection(f, l_max) {
        Ok(r) => {
            let problems = r.verify(f);
            let pairs: Vec<[&str; 2]> = r.pairs.iter().map(|&(a, b)| [x.id(a), y.id(b)]).collect();
            let rows = pairs.iter().map(|p| vec![p[0].to_string(), p[1].to_string()]).collect();
            let mut out = Outcome::new(json!({
                "L": r.l,
                "bijection": pairs,
                "escalation": escalation_json(&r.escalation),
                "hall_witness": null,
                "domain_core": r.domain_core.len(),
                "codomain_core": r.codomain_core.len(),
                "verifier": { "ok": problems.is_empty(), "problems": problems },
            }))
            .rows(vec!["x", "y"], rows)
            .file("bijection.tsv", formats::write_map(&r.to_map(f)?));
            if !problems.is_empty() {
                out.failure = Some(CliError::Failed(problems.join("; ")));
            }
            Ok(out)
        }
        Err(Error::NoBijectionWithinL(fail)) => {
            let checked = fail.check(f);
            let mut out = Outcome::new(json!({
                "L": null,
                "bijection": [],
                "escalation": escalation_json(&fail.escalation),
                "hall_witness": witness_json(&fail.witness, f, checked),
            }));
            out.failure = Some(Error::NoBijectionWithinL(fail).into());
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn realize_pieces(args: &MapArgs, m: u32, n: u32, l_max: u32, budget: usize, seed: u64) -> Result<Outcome, CliError> {
    let built = build_map(args, |_| DEFAULT_MAP_RADIUS, budget, seed)?;
    let f = &built.map;
    let r = realize_mn(f, m, n, l_max, seed)?;
    let problems = r.verify(f);
    let (x, y) = (f.domain(), f.codomain());
    let x_owner = r.px.piece_of(x.len());
    let y_owner = r.py.piece_of(y.len());
    let rows = r
        .g_parent
        .iter()
        .enumerate()
        .map(|(i, &xv)| {
            let gy = r.g.apply(i as Vertex);
            vec![
                x.id(xv).to_string(),
                gy.map_or(String::new(), |v| y.id(v).to_string()),
                x_owner[xv as usize].to_string(),
                gy.map_or(String::new(), |v| y_owner[v as usize].to_string()),
            ]
        })
        .collect();
    let mut out = Outcome::new(json!({
        "m": m,
        "n": n,
        "L": r.matching.l,
        "pieces_x": r.px.pieces.len(),
        "pieces_y": r.py.pieces.len(),
        "remainder_x": r.px.remainder,
        "remainder_y": r.py.remainder,
        "matched_pieces": r.psi.iter().flatten().count(),
        "g_vertices": r.g.domain().len(),
        "D": r.d,
        "proof_bound": r.proof_bound,
        "sound_bound": r.sound_bound,
        "displacement": r.displacement,
        "verifier": { "ok": problems.is_empty(), "problems": problems },
    }))
    .rows(vec!["x", "g_x", "piece_x", "piece_y"], rows);
    if !problems.is_empty() {
        out.failure = Some(CliError::Failed(problems.join("; ")));
    }
    Ok(out)
}

fn sc_lamp(n: u64, ends: Ends) -> Result<Outcome, CliError> {
    let base = match ends {
        Ends::One => scaling::Ends::OneEnded,
        Ends::Two => scaling::Ends::TwoEnded,
    };
    let sc = lamplighter_sc(n, base)?;
    let primes = match &sc {
        ScalingGroup::PrimeGenerated(ps) => ps.clone(),
        _ => Vec::new(),
    };
    Ok(Outcome::new(json!({ "n": n, "ends": ends, "sc": sc.to_string(), "primes": primes })))
}

fn qi_lamp(n: u64, m: u64, sc: &str) -> Result<Outcome, CliError> {
    let group = match scaling::preset(sc) {
        Some(g) => g,
        None => sc.parse()?,
    };
    let v = qi_lamplighter_predicate(n, m, &group)?;
    let witness = v.witness.map(|w| json!({ "k": w.k, "r": w.r, "s": w.s }));
    Ok(Outcome::new(json!({
        "n": n,
        "m": m,
        "sc": group.to_string(),
        "qi": v.qi,
        "witness": witness,
        "symbolic": v.symbolic,
    })))
}
