use std::sync::Arc;

use qiscale::formats::{read_map, read_window, write_map, write_window};
use qiscale_core::cayley::{enumerate_window, halving_map, GroupSpec};
use qiscale_core::GraphWindow;

fn z(r: u32) -> Arc<GraphWindow> {
    Arc::new(enumerate_window(&GroupSpec::FreeAbelian(1), r, 1 << 16).unwrap())
}

#[test]
fn window_text_round_trips() {
    for spec in ["zd:2", "heis", "lamp:3", "prod:zd:1:3"] {
        let w = enumerate_window(&spec.parse().unwrap(), 3, 1 << 16).unwrap();
        let text = write_window(&w);
        let back = read_window(&text).unwrap();
        assert_eq!(write_window(&back), text);
        assert_eq!((back.host(), back.len(), back.interior_radius()), (w.host(), w.len(), w.interior_radius()));
        assert!(back.vertices().all(|v| back.depth(v) == w.depth(w.vertex(back.id(v)).unwrap())));
    }
}

#[test]
fn window_header_is_checked() {
    let ok = "window g 2 1 1 a\na: b\nb: a\n";
    assert_eq!(read_window(ok).unwrap().len(), 2);
    assert!(read_window("window g 3 1 1 a\na: b\nb: a\n").is_err());
    assert!(read_window("window g 2 1 1 c\na: b\nb: a\n").is_err());
    assert!(read_window("window g 2 1 1 a\na: c\nb: a\n").is_err());
    assert!(read_window("graph g 2 1 1 a\na: b\nb: a\n").is_err());
    // Adjacency must be symmetric.
    assert!(read_window("window g 2 1 1 a\na: b\nb:\n").is_err());
}

#[test]
fn map_table_round_trips() {
    let f = halving_map(z(20), z(8)).unwrap();
    let text = write_map(&f);
    assert!(text.starts_with("map zd:1 zd:1 2 1\n"));
    assert!(text.contains("\n-3\t-2\n"));
    assert!(text.contains("\n19\t-\n"));
    let g = read_map(&text, f.domain().clone(), f.codomain().clone()).unwrap();
    assert_eq!(g.table(), f.table());
    assert_eq!(g.params(), f.params());
}

#[test]
fn partial_tables_are_trusted_below_the_first_gap() {
    let f = halving_map(z(20), z(12)).unwrap();
    let x = f.domain();
    let text: String = write_map(&f)
        .lines()
        .filter(|l| !l.starts_with("15\t"))
        .map(|l| format!("{l}\n"))
        .collect();
    let g = read_map(&text, x.clone(), f.codomain().clone()).unwrap();
    assert_eq!(g.known_radius(), 14);
    assert!(!g.is_known(x.vertex("15").unwrap()));
}

#[test]
fn map_hosts_must_match() {
    let f = halving_map(z(10), z(6)).unwrap();
    let w = Arc::new(enumerate_window(&GroupSpec::FreeAbelian(2), 2, 1 << 16).unwrap());
    assert!(read_map(&write_map(&f), w, f.codomain().clone()).is_err());
    let dup = format!("{}0\t0\n", write_map(&f));
    assert!(read_map(&dup, f.domain().clone(), f.codomain().clone()).is_err());
}
