use std::fmt::Write;

use super::{GraphError, LDigraph};

pub const DOT_VERTEX_LIMIT: usize = 200;

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Splits a comma-separated list of JSON strings.
fn parse_labels(text: &str, line: usize) -> Result<Vec<String>, GraphError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    serde_json::from_str::<Vec<String>>(&format!("[{text}]"))
        .map_err(|e| GraphError::Parse { line, message: format!("bad label list: {e}") })
}

/// Edge-list text: a `#ldigraph v=<count> L=<labels>` header, an `#ids`
/// line when ids are not `0..count`, then `tail head "label"` per edge.
pub fn write_edges(g: &LDigraph) -> String {
    let labels: Vec<String> = g.alphabet().iter().map(|l| quote(l)).collect();
    let mut out = format!("#ldigraph v={} L={}\n", g.vertex_count(), labels.join(","));
    if g.ids().iter().enumerate().any(|(i, &id)| id != i as u64) {
        let ids: Vec<String> = g.ids().iter().map(u64::to_string).collect();
        let _ = writeln!(out, "#ids {}", ids.join(" "));
    }
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.id(e.tail), g.id(e.head), quote(g.label_name(e.label)));
    }
    out
}

pub fn parse_edges(text: &str) -> Result<LDigraph, GraphError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or(GraphError::Parse { line: 1, message: "missing header".into() })?;
    let rest = header
        .trim()
        .strip_prefix("#ldigraph")
        .ok_or(GraphError::Parse { line: hl + 1, message: "expected #ldigraph header".into() })?
        .trim_start();
    let rest = rest.strip_prefix("v=").ok_or(GraphError::Parse { line: hl + 1, message: "expected v=".into() })?;
    let (count, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let count: usize =
        count.parse().map_err(|_| GraphError::Parse { line: hl + 1, message: format!("bad vertex count {count:?}") })?;
    let labels = rest.trim().strip_prefix("L=").unwrap_or("");
    let mut g = LDigraph::new(parse_labels(labels, hl + 1)?);

    let mut pending = Vec::new();
    let mut ids: Option<Vec<u64>> = None;
    for (i, line) in lines {
        let line = line.trim();
        if let Some(list) = line.strip_prefix("#ids") {
            let parsed: Result<Vec<u64>, _> = list.split_whitespace().map(str::parse).collect();
            ids = Some(parsed.map_err(|_| GraphError::Parse { line: i + 1, message: "bad id list".into() })?);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        pending.push((i + 1, line));
    }
    let ids = ids.unwrap_or_else(|| (0..count as u64).collect());
    if ids.len() != count {
        return Err(GraphError::Parse { line: hl + 1, message: format!("{} ids for {count} vertices", ids.len()) });
    }
    for id in ids {
        g.add_vertex(id)?;
    }
    for (line, text) in pending {
        let err = |m: &str| GraphError::Parse { line, message: m.to_string() };
        let mut parts = text.splitn(3, char::is_whitespace);
        let tail: u64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad tail"))?;
        let head: u64 = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(|| err("bad head"))?;
        let label: String =
            serde_json::from_str(parts.next().ok_or_else(|| err("missing label"))?.trim()).map_err(|_| err("bad label"))?;
        let (t, h) = (g.index_of(tail)?, g.index_of(head)?);
        g.add_edge(t, h, &label)?;
    }
    Ok(g)
}

/// Graphviz rendering; refused above the vertex limit.
pub fn to_dot(g: &LDigraph, ranks: Option<&[usize]>) -> Result<String, GraphError> {
    if g.vertex_count() > DOT_VERTEX_LIMIT {
        return Err(GraphError::Invalid(format!(
            "DOT export is limited to {DOT_VERTEX_LIMIT} vertices, graph has {}",
            g.vertex_count()
        )));
    }
    let mut out = String::from("digraph G {\n");
    for v in 0..g.vertex_count() {
        let label = match ranks {
            Some(r) => format!("{} [{}]", g.id(v), r[v]),
            None => g.id(v).to_string(),
        };
        let _ = writeln!(out, "  {} [label={}];", g.id(v), quote(&label));
    }
    for e in g.edges() {
        let _ = writeln!(out, "  {} -> {} [label={}];", g.id(e.tail), g.id(e.head), quote(g.label_name(e.label)));
    }
    out.push_str("}\n");
    Ok(out)
}

/// `vertex rank` lines in vertex order.
pub fn write_ranks(g: &LDigraph, ranks: &[usize]) -> String {
    let mut out = String::from("#order\n");
    for (v, r) in ranks.iter().enumerate() {
        let _ = writeln!(out, "{} {}", g.id(v), r);
    }
    out
}

/// Reads `vertex rank` lines; every vertex of `g` must be ranked once.
pub fn parse_ranks(g: &LDigraph, text: &str) -> Result<Vec<usize>, GraphError> {
    let mut ranks = vec![None; g.vertex_count()];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = || GraphError::Parse { line: i + 1, message: format!("expected `vertex rank`, got {line:?}") };
        let (v, r) = line.split_once(char::is_whitespace).ok_or_else(err)?;
        let v = g.index_of(v.parse().map_err(|_| err())?)?;
        let r: usize = r.trim().parse().map_err(|_| err())?;
        if ranks[v].replace(r).is_some() {
            return Err(GraphError::Parse { line: i + 1, message: "vertex ranked twice".into() });
        }
    }
    ranks
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or(GraphError::Invalid(format!("vertex {} has no rank", g.id(v)))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut g = LDigraph::new(["a", "(1,2)", "with \"quote\""]);
        for id in [10, 20, 30] {
            g.add_vertex(id).unwrap();
        }
        g.add_edge(0, 1, "a").unwrap();
        g.add_edge(1, 2, "(1,2)").unwrap();
        g.add_edge(2, 0, "with \"quote\"").unwrap();
        let text = write_edges(&g);
        assert!(text.starts_with("#ldigraph v=3 L=\"a\",\"(1,2)\""));
        assert_eq!(parse_edges(&text).unwrap(), g);

        let plain = LDigraph::with_vertices(2, ["x"]);
        assert!(!write_edges(&plain).contains("#ids"));
        assert_eq!(parse_edges(&write_edges(&plain)).unwrap(), plain);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_edges("").is_err());
        assert!(parse_edges("#ldigraph v=2 L=\"a\"\n0 5 \"a\"").is_err());
        assert!(parse_edges("#ldigraph v=2 L=\"a\"\n0 1 \"b\"").is_err());
        assert!(parse_edges("#ldigraph v=x L=\"a\"").is_err());
    }

    #[test]
    fn ranks_and_dot() {
        let g = LDigraph::with_vertices(3, ["a"]);
        let text = write_ranks(&g, &[2, 0, 1]);
        assert_eq!(parse_ranks(&g, &text).unwrap(), vec![2, 0, 1]);
        assert!(parse_ranks(&g, "0 1\n1 2").is_err());
        assert!(to_dot(&g, None).unwrap().starts_with("digraph"));
        assert!(to_dot(&LDigraph::with_vertices(201, ["a"]), None).is_err());
    }
}
