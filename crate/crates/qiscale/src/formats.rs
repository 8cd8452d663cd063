//! Text formats for windows and map tables.
//!
//! A window file starts with
//! `window <host> <num_vertices> <interior_radius> <degree_bound> <center_id>`
//! followed by one `<id>: <neighbor ids>` line per vertex. A map file starts
//! with `map <domain_host> <codomain_host> <C> <K>` followed by
//! `<x_id>\t<f(x)_id>` lines; an image id that is not a codomain vertex
//! records that the image lies outside the codomain window.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use qiscale_core::graph::WindowBuilder;
use qiscale_core::maps::{Expansion, QiMap, QiParams};
use qiscale_core::{GraphWindow, Vertex};

use crate::error::CliError;

/// Written for images outside the codomain window.
pub const OUTSIDE: &str = "-";

pub fn write_window(w: &GraphWindow) -> String {
    let mut out = format!(
        "window {} {} {} {} {}\n",
        w.host(),
        w.len(),
        w.interior_radius(),
        w.degree_bound(),
        w.id(w.center())
    );
    for v in w.vertices() {
        out.push_str(w.id(v));
        out.push(':');
        for &u in w.neighbors(v) {
            out.push(' ');
            out.push_str(w.id(u));
        }
        out.push('\n');
    }
    out
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Format(format!("line {line}: {msg}"))
}

pub fn read_window(text: &str) -> Result<GraphWindow, CliError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty window file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [tag, host, n, radius, degree, center] = fields[..] else {
        return Err(bad(1, "expected `window <host> <n> <radius> <degree> <center>`"));
    };
    if tag != "window" {
        return Err(bad(1, "missing `window` header"));
    }
    let num = |s: &str| s.parse::<u32>().map_err(|_| bad(1, format!("bad number {s:?}")));
    let (n, radius, degree) = (num(n)? as usize, num(radius)?, num(degree)?);

    let mut rows: Vec<(usize, &str, Vec<&str>)> = Vec::with_capacity(n);
    let mut index: HashMap<&str, Vertex> = HashMap::with_capacity(n);
    for (i, line) in lines {
        // Ids may contain ':' themselves but never whitespace.
        let mut tokens = line.split_whitespace();
        let id = tokens
            .next()
            .and_then(|t| t.strip_suffix(':'))
            .filter(|id| !id.is_empty())
            .ok_or_else(|| bad(i + 1, "expected `<id>: <neighbors>`"))?;
        if index.insert(id, rows.len() as Vertex).is_some() {
            return Err(bad(i + 1, format!("duplicate vertex {id}")));
        }
        rows.push((i + 1, id, tokens.collect()));
    }
    if rows.len() != n {
        return Err(bad(1, format!("header announces {n} vertices, found {}", rows.len())));
    }
    let center = *index.get(center).ok_or_else(|| bad(1, format!("center {center} is not listed")))?;
    let mut builder = WindowBuilder::new(host);
    let mut nbrs = Vec::new();
    for (line, id, names) in &rows {
        nbrs.clear();
        for name in names {
            nbrs.push(*index.get(name).ok_or_else(|| bad(*line, format!("unknown neighbor {name}")))?);
        }
        builder.push_vertex(id, &nbrs);
    }
    Ok(builder.finish(center, radius, degree)?)
}

pub fn write_map(f: &QiMap) -> String {
    let (x, y) = (f.domain(), f.codomain());
    let p = f.params();
    let mut out = format!("map {} {} {} {}\n", x.host(), y.host(), p.c, p.k);
    for v in x.vertices().filter(|&v| f.is_known(v)) {
        let image = f.apply(v).map_or(OUTSIDE, |u| y.id(u));
        let _ = writeln!(out, "{}\t{}", x.id(v), image);
    }
    out
}

/// Reads a map table between two given windows. Domain vertices without a
/// line are unknown; entries are trusted up to the depth just below the
/// shallowest of them. The expansion bound is the one implied by `(C, K)`.
pub fn read_map(text: &str, domain: Arc<GraphWindow>, codomain: Arc<GraphWindow>) -> Result<QiMap, CliError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty map file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [tag, dom_host, cod_host, c, k] = fields[..] else {
        return Err(bad(1, "expected `map <domain_host> <codomain_host> <C> <K>`"));
    };
    if tag != "map" {
        return Err(bad(1, "missing `map` header"));
    }
    if dom_host != domain.host() || cod_host != codomain.host() {
        return Err(bad(
            1,
            format!("map is {dom_host} -> {cod_host}, windows are {} -> {}", domain.host(), codomain.host()),
        ));
    }
    let num = |s: &str| s.parse::<u32>().map_err(|_| bad(1, format!("bad constant {s:?}")));
    let params = QiParams { c: num(c)?, k: num(k)? };

    let mut table = vec![None; domain.len()];
    let mut known = vec![false; domain.len()];
    for (i, line) in lines {
        let (x, y) = line.split_once('\t').ok_or_else(|| bad(i + 1, "expected `<x>\\t<f(x)>`"))?;
        let x = domain
            .vertex(x.trim())
            .ok_or_else(|| bad(i + 1, format!("{x} is not a domain vertex")))?;
        if known[x as usize] {
            return Err(bad(i + 1, format!("{} is listed twice", domain.id(x))));
        }
        known[x as usize] = true;
        table[x as usize] = codomain.vertex(y.trim());
    }
    let known_radius = domain
        .vertices()
        .filter(|&v| !known[v as usize])
        .map(|v| domain.depth(v))
        .min()
        .map_or(u32::MAX, |d| d.saturating_sub(1));
    if !known[domain.center() as usize] {
        return Err(CliError::Format("map table has no entry for the domain center".into()));
    }
    Ok(QiMap::with_known_radius(
        domain,
        codomain,
        table,
        params,
        Expansion::from_params(params),
        known_radius,
    )?)
}
