//! Plain edge-list and DIMACS `.col` text formats.
//!
//! Plain format: an optional header `p <n> <m>`, then one `u v` pair per
//! line with 0-based ids. DIMACS: `p edge <n> <m>` and `e u v` lines with
//! 1-based ids, `c` comment lines. The format is detected from the first
//! non-comment line. Blank lines and lines starting with `#` are skipped in
//! both.

use super::{ColoredGraph, Graph, GraphError, Result};

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<(usize, usize, usize)> = None;
    let mut dimacs = false;
    let mut seen_content = false;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "c" if dimacs || !seen_content => continue,
            "p" => {
                if declared.is_some() {
                    return Err(parse_err(line_no, "repeated header line"));
                }
                if seen_content {
                    return Err(parse_err(line_no, "header must precede edges"));
                }
                match toks.as_slice() {
                    ["p", "edge" | "col", n, m] => {
                        dimacs = true;
                        declared = Some((parse_num(n, line_no)?, parse_num(m, line_no)?, line_no));
                    }
                    ["p", n, m] => {
                        declared = Some((parse_num(n, line_no)?, parse_num(m, line_no)?, line_no));
                    }
                    _ => return Err(parse_err(line_no, "malformed header")),
                }
            }
            "e" if dimacs => {
                let [_, u, v] = toks.as_slice() else {
                    return Err(parse_err(line_no, "expected `e u v`"));
                };
                let (u, v) = (parse_num(u, line_no)?, parse_num(v, line_no)?);
                if u == 0 || v == 0 {
                    return Err(parse_err(line_no, "DIMACS vertex ids are 1-based"));
                }
                edges.push((u - 1, v - 1, line_no));
            }
            _ if dimacs => return Err(parse_err(line_no, "expected `e u v` or `c ...`")),
            _ => {
                let [u, v] = toks.as_slice() else {
                    return Err(parse_err(line_no, "expected `u v`"));
                };
                edges.push((parse_num(u, line_no)?, parse_num(v, line_no)?, line_no));
            }
        }
        seen_content = true;
    }

    let n = match declared {
        Some((n, _, _)) => n,
        None => edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0),
    };
    let mut seen = rustc_hash::FxHashSet::default();
    for &(u, v, line) in &edges {
        if u >= n || v >= n {
            return Err(parse_err(
                line,
                format!("vertex {} out of range for {n} vertices", u.max(v)),
            ));
        }
        if u == v {
            return Err(parse_err(line, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(line, format!("duplicate edge {{{u}, {v}}}")));
        }
    }
    if let Some((_, m, header_line)) = declared {
        if m != edges.len() {
            return Err(parse_err(
                header_line,
                format!("header declares {m} edges but {} were listed", edges.len()),
            ));
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v)))
}

/// Canonical plain form: header, then edges `u v` with `u < v` ascending.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses `vertex colour` lines into a coloured graph over `graph`.
pub fn parse_colors(graph: Graph, text: &str) -> Result<ColoredGraph> {
    let mut color_of = vec![None; graph.vertex_count()];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [v, c] = toks.as_slice() else {
            return Err(parse_err(line_no, "expected `vertex colour`"));
        };
        let (v, c) = (parse_num(v, line_no)?, parse_num(c, line_no)?);
        if v >= graph.vertex_count() {
            return Err(parse_err(line_no, format!("vertex {v} out of range")));
        }
        if color_of[v].is_some_and(|old| old != c) {
            return Err(parse_err(line_no, format!("vertex {v} given two colours")));
        }
        color_of[v] = Some(c);
    }
    ColoredGraph::from_color_map(graph, color_of)
}

/// Whitespace-separated vertex ids.
pub fn parse_vertex_list(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let v = parse_num(tok, idx + 1)?;
            if v >= n {
                return Err(parse_err(idx + 1, format!("vertex {v} out of range")));
            }
            out.push(v);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_lists() {
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(g, Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let iso = parse_edge_list("p 3 0\n").unwrap();
        assert_eq!(iso.vertex_count(), 3);
        assert_eq!(iso.edge_count(), 0);
        assert_eq!(parse_edge_list("").unwrap().vertex_count(), 0);
    }

    #[test]
    fn parses_dimacs() {
        let text = "c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_edge_list("0 1\n1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
        let err = parse_edge_list("0 1\n2 3\n1 0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_edge_list("0 1\nzero 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
        let err = parse_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }), "{err:?}");
        assert!(parse_edge_list("p 2 1\n0 5\n").is_err());
        assert!(parse_edge_list("p 3 2\n0 1\n").is_err());
    }

    #[test]
    fn serialize_is_canonical() {
        let g = parse_edge_list("2 1\n0 2\n").unwrap();
        assert_eq!(serialize_edge_list(&g), "p 3 2\n0 2\n1 2\n");
    }

    #[test]
    fn colours_file() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let cg = parse_colors(g.clone(), "0 1\n2 0\n").unwrap();
        assert_eq!(cg.color_of(0), Some(1));
        assert_eq!(cg.color_of(1), None);
        assert_eq!(cg.color_count(), 2);
        assert!(parse_colors(g, "0 1\n0 2\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..30, raw in proptest::collection::vec((0usize..30, 0usize..30), 0..60)) {
            let g = Graph::from_edges_lossy(n, raw);
            let text = serialize_edge_list(&g);
            let back = parse_edge_list(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(serialize_edge_list(&back), text);
        }
    }
}
