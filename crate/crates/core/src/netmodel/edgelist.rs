//! Plain-text edge lists.
//!
//! ```text
//! n m d        # node count, edge count, 0 = undirected / 1 = directed
//! u v          # m lines, 0-based ids, u infects v
//! ```
//!
//! Blank lines and `#` comments are ignored. Duplicate edges collapse to one,
//! so exports with repeated contacts load without preprocessing.

use std::io::{self, Write};

use super::Graph;
use crate::error::{Error, Result};

pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) =
        lines.next().ok_or(Error::Parse { line: 1, message: "missing header 'n m d'".into() })?;
    let fields = parse_fields::<3>(hline, header)?;
    let (n, m) = (fields[0], fields[1]);
    let directed = match fields[2] {
        0 => false,
        1 => true,
        d => return Err(parse_err(hline, format!("directedness flag must be 0 or 1, got {d}"))),
    };
    if n == 0 {
        return Err(parse_err(hline, "node count must be positive"));
    }

    let mut links = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if links.len() == m {
            return Err(parse_err(lineno, format!("more than the declared {m} edges")));
        }
        let [u, v] = parse_fields::<2>(lineno, line)?;
        if u >= n || v >= n {
            return Err(parse_err(lineno, format!("node id out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop at node {u}")));
        }
        links.push((u, v));
    }
    if links.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {m} edges, found {}", links.len()),
        });
    }
    Graph::new(n, directed, links)
}

fn parse_fields<const K: usize>(lineno: usize, line: &str) -> Result<[usize; K]> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != K {
        return Err(parse_err(lineno, format!("expected {K} fields, got {}: '{line}'", parts.len())));
    }
    let mut out = [0usize; K];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .parse()
            .map_err(|_| parse_err(lineno, format!("'{p}' is not a non-negative integer")))?;
    }
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    let links = g.links();
    writeln!(w, "{} {} {}", g.n(), links.len(), u8::from(g.is_directed()))?;
    for (u, v) in links {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::star;
    use proptest::prelude::*;

    #[test]
    fn undirected_star() {
        let g = load_edge_list("3 2 0\n0 1\n0 2\n").unwrap();
        assert_eq!(g, star(3));
    }

    #[test]
    fn directed_single_arc() {
        let g = load_edge_list("2 1 1\n0 1\n").unwrap();
        assert!(g.is_directed());
        assert!(g.has_entry(1, 0));
        assert!(!g.has_entry(0, 1));
    }

    #[test]
    fn self_loop_names_line() {
        let err = load_edge_list("2 1 0\n0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(load_edge_list(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("3 1\n0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("3 1 2\n0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("3 1 0\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("3 1 0\n0 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("3 1 0\n0 1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("3 1 0\n0 1\n1 2\n"), Err(Error::Parse { line: 3, .. })));
        assert!(load_edge_list("3 2 0\n0 1\n").is_err());
    }

    #[test]
    fn duplicates_collapse() {
        let g = load_edge_list("3 3 0\n0 1\n1 0\n0 1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = load_edge_list("# star\n3 2 0\n\n0 1 # hub\n0 2\n").unwrap();
        assert_eq!(g, star(3));
    }

    proptest! {
        #[test]
        fn write_then_load_is_identity(
            n in 2usize..12,
            directed in any::<bool>(),
            raw in prop::collection::vec((0usize..12, 0usize..12), 0..30),
        ) {
            let links: Vec<_> = raw.into_iter()
                .map(|(u, v)| (u % n, v % n))
                .filter(|(u, v)| u != v)
                .collect();
            let g = Graph::new(n, directed, links).unwrap();
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let back = load_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
