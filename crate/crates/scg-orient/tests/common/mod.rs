//! Shared helpers for the fixture-driven integration tests.
#![allow(dead_code)] // each test binary uses a different subset

use std::fs;
use std::path::PathBuf;

use scg_orient::discovery::{default_window, discover};
use scg_orient::format::{parse_scg, parse_template, SeriesNames};
use scg_orient::pdag::{Orientation, Pdag, RuleSet};
use scg_orient::scg::Scg;
use scg_orient::template::{SeriesId, TemplateGraph};
use scg_orient::unrolled::Vertex;

pub fn fixture_path(kind: &str, name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(kind)
        .join(name)
}

pub fn load_scg(name: &str) -> (Scg, SeriesNames) {
    let text = fs::read_to_string(fixture_path("scg", name)).unwrap();
    parse_scg(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_template(name: &str) -> (TemplateGraph, SeriesNames) {
    let text = fs::read_to_string(fixture_path("template", name)).unwrap();
    parse_template(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Run discovery on a template fixture with its own summary as background.
pub fn discover_fixture(name: &str) -> (Pdag, SeriesNames, TemplateGraph) {
    let (template, names) = load_template(name);
    let window = default_window(template.gamma_max());
    let p = discover(&template, None, window, RuleSet::All).unwrap();
    (p, names, template)
}

/// Orientation of the instantaneous pair at the last (present) slice.
pub fn present_orientation(p: &Pdag, names: &SeriesNames, x: &str, y: &str) -> Orientation {
    let k = p.window_len() - 1;
    let vx = Vertex {
        series: resolve(names, x),
        slice: k,
    };
    let vy = Vertex {
        series: resolve(names, y),
        slice: k,
    };
    p.orient_query(vx, vy).unwrap()
}

pub fn resolve(names: &SeriesNames, name: &str) -> SeriesId {
    names
        .resolve(name)
        .unwrap_or_else(|| panic!("no series named {name}"))
}
