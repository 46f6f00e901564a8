//! Text formats: templates, summary graphs, and the discovery dump.
//!
//! Template lines read `X[-k] -> Y`, one edge per line, meaning X lagged by
//! `k` steps causes Y now; `X -> Y` abbreviates `k = 0`. Summary lines read
//! `A -> B`, with `A <-> B` as sugar for both directions and `A -> A` for a
//! self-loop. `#` starts a comment. Series names are alphanumeric or
//! underscore tokens, mapped to indices in first-appearance order.

use crate::error::ParseError;
use crate::pdag::Pdag;
use crate::scg::Scg;
use crate::template::{SeriesId, TemplateEdge, TemplateGraph};

/// Names of the series of a parsed file, in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeriesNames {
    names: Vec<String>,
}

impl SeriesNames {
    pub fn intern(&mut self, name: &str) -> SeriesId {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            SeriesId(i as u32)
        } else {
            self.names.push(name.to_string());
            SeriesId(self.names.len() as u32 - 1)
        }
    }

    pub fn resolve(&self, name: &str) -> Option<SeriesId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| SeriesId(i as u32))
    }

    pub fn name(&self, id: SeriesId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn len(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SeriesId, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (SeriesId(i as u32), n.as_str()))
    }
}

fn is_name(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Split `X` or `X[-k]` into name and lag.
fn parse_endpoint(token: &str, line_no: usize) -> Result<(&str, u32), ParseError> {
    if let Some(open) = token.find('[') {
        let name = &token[..open];
        let rest = &token[open..];
        let inner = rest
            .strip_prefix("[-")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| {
                ParseError::new(line_no, format!("malformed lag suffix in `{token}`"))
            })?;
        let lag: u32 = inner.parse().map_err(|_| {
            ParseError::new(line_no, format!("lag must be a nonnegative integer in `{token}`"))
        })?;
        if !is_name(name) {
            return Err(ParseError::new(line_no, format!("bad series name `{name}`")));
        }
        Ok((name, lag))
    } else {
        if !is_name(token) {
            return Err(ParseError::new(line_no, format!("bad series name `{token}`")));
        }
        Ok((token, 0))
    }
}

/// Parse the template format. Returns the template and the name table.
pub fn parse_template(input: &str) -> Result<(TemplateGraph, SeriesNames), ParseError> {
    let mut names = SeriesNames::default();
    let mut edges: Vec<(String, u32, String)> = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 || parts[1] != "->" {
            return Err(ParseError::new(
                line_no,
                format!("expected `SRC[-k] -> DST`, got `{line}`"),
            ));
        }
        let (src, lag) = parse_endpoint(parts[0], line_no)?;
        let (dst, dst_lag) = parse_endpoint(parts[2], line_no)?;
        if dst_lag != 0 {
            return Err(ParseError::new(
                line_no,
                "the target of an edge is always at the present slice",
            ));
        }
        if src == dst && lag == 0 {
            return Err(ParseError::new(
                line_no,
                format!("instantaneous self-edge on `{src}` is not allowed"),
            ));
        }
        names.intern(src);
        names.intern(dst);
        edges.push((src.to_string(), lag, dst.to_string()));
    }
    let triples = edges.iter().map(|(s, l, t)| TemplateEdge {
        source: names.resolve(s).unwrap(),
        lag: *l,
        target: names.resolve(t).unwrap(),
    });
    let template = TemplateGraph::new(names.len(), triples)
        .map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok((template, names))
}

/// Parse the summary-graph format.
pub fn parse_scg(input: &str) -> Result<(Scg, SeriesNames), ParseError> {
    let mut names = SeriesNames::default();
    let mut edges: Vec<(String, String, bool)> = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 || (parts[1] != "->" && parts[1] != "<->") {
            return Err(ParseError::new(
                line_no,
                format!("expected `A -> B` or `A <-> B`, got `{line}`"),
            ));
        }
        for name in [parts[0], parts[2]] {
            if !is_name(name) {
                return Err(ParseError::new(line_no, format!("bad series name `{name}`")));
            }
        }
        if parts[1] == "<->" && parts[0] == parts[2] {
            return Err(ParseError::new(
                line_no,
                format!("`{}` <-> itself is just a self-loop; write `{} -> {}`", parts[0], parts[0], parts[0]),
            ));
        }
        names.intern(parts[0]);
        names.intern(parts[2]);
        edges.push((parts[0].to_string(), parts[2].to_string(), parts[1] == "<->"));
    }
    let mut scg = Scg::new(names.len());
    for (a, b, both) in edges {
        let a = names.resolve(&a).unwrap();
        let b = names.resolve(&b).unwrap();
        scg.add_edge(a, b).unwrap();
        if both {
            scg.add_edge(b, a).unwrap();
        }
    }
    Ok((scg, names))
}

/// Serialize a template in its own input format, sorted canonically.
pub fn write_template(template: &TemplateGraph, names: &SeriesNames) -> String {
    let mut out = String::new();
    for e in template.edges() {
        let src = names.name(e.source);
        let dst = names.name(e.target);
        if e.lag == 0 {
            out.push_str(&format!("{src} -> {dst}\n"));
        } else {
            out.push_str(&format!("{src}[-{}] -> {dst}\n", e.lag));
        }
    }
    out
}

/// Serialize a summary graph in its own input format. Mutual pairs use the
/// `<->` sugar; rows stream in index order.
pub fn write_scg(scg: &Scg, names: &SeriesNames) -> String {
    let mut out = String::new();
    for u in 0..scg.n_series() {
        for v in 0..scg.n_series() {
            let (u, v) = (SeriesId(u), SeriesId(v));
            if !scg.edge(u, v) {
                continue;
            }
            if u != v && scg.edge(v, u) {
                if u.0 < v.0 {
                    out.push_str(&format!("{} <-> {}\n", names.name(u), names.name(v)));
                }
            } else {
                out.push_str(&format!("{} -> {}\n", names.name(u), names.name(v)));
            }
        }
    }
    out
}

/// Discovery dump: `A[k] -> B[k']` per directed edge, `A[k] -- B[k]` per
/// undirected edge, sorted by canonical endpoint order.
pub fn write_pdag(p: &Pdag, names: &SeriesNames) -> String {
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Line {
        lo: u32,
        hi: u32,
        undirected: bool,
        text: String,
    }
    let mut lines = Vec::new();
    for (u, v) in p.directed_edges() {
        let (ui, vi) = (p.vertex_id(u), p.vertex_id(v));
        lines.push(Line {
            lo: ui.min(vi),
            hi: ui.max(vi),
            undirected: false,
            text: format!(
                "{}[{}] -> {}[{}]",
                names.name(u.series),
                u.slice,
                names.name(v.series),
                v.slice
            ),
        });
    }
    for (u, v) in p.undirected_edges() {
        lines.push(Line {
            lo: p.vertex_id(u),
            hi: p.vertex_id(v),
            undirected: true,
            text: format!(
                "{}[{}] -- {}[{}]",
                names.name(u.series),
                u.slice,
                names.name(v.series),
                v.slice
            ),
        });
    }
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l.text);
        out.push('\n');
    }
    out
}

/// Default names X, Y, Z, then S3, S4, ... for graphs built without a file.
pub fn default_names(n: u32) -> SeriesNames {
    let mut names = SeriesNames::default();
    for i in 0..n {
        let name = match i {
            0 => "X".to_string(),
            1 => "Y".to_string(),
            2 => "Z".to_string(),
            _ => format!("S{i}"),
        };
        names.intern(&name);
    }
    names
}
