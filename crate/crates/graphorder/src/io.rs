//! Plain-text exchange formats.
//!
//! Poset/graph files: a header line `n <count>` followed by one `u v` pair
//! per line (1-indexed). A poset reader transitively closes whatever arcs it
//! is given, so files may carry either cover arcs or full relation lists; the
//! writer emits the sorted cover arcs, which makes write→read→write byte
//! stable. Realiser files: one order per line, labels separated by single
//! spaces. Set files: one label per line.

use crate::graph::Graph;
use crate::poset::{Poset, PosetError, Realiser, TotalOrder};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn parse_pairs(input: &str) -> Result<(usize, Vec<(usize, usize)>), TextError> {
    let mut lines = input.lines().enumerate();
    let (first_no, first) =
        lines
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .ok_or(TextError::Parse {
                line: 1,
                msg: "missing header".into(),
            })?;
    let mut head = first.split_whitespace();
    let n = match (head.next(), head.next(), head.next()) {
        (Some("n"), Some(v), None) => v.parse::<usize>().map_err(|e| TextError::Parse {
            line: first_no + 1,
            msg: format!("bad element count: {e}"),
        })?,
        _ => {
            return Err(TextError::Parse {
                line: first_no + 1,
                msg: format!("expected header `n <count>`, found `{}`", first.trim()),
            })
        }
    };
    let mut pairs = Vec::new();
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(TextError::Parse {
                    line: no + 1,
                    msg: format!("expected `u v`, found `{line}`"),
                })
            }
        };
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|e| TextError::Parse {
                line: no + 1,
                msg: format!("bad label: {e}"),
            })
        };
        pairs.push((parse(u)?, parse(v)?));
    }
    Ok((n, pairs))
}

/// Parses a poset file, transitively closing the listed arcs.
pub fn parse_poset(input: &str) -> Result<Poset, TextError> {
    let (n, arcs) = parse_pairs(input)?;
    Ok(Poset::from_dag(n, &arcs)?)
}

/// Canonical poset text: header plus sorted cover arcs.
pub fn format_poset(p: &Poset) -> String {
    let mut out = format!("n {}\n", p.n());
    for (u, v) in p.cover_arcs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses an edge-list file with the same `n <count>` / `u v` layout.
pub fn parse_graph(input: &str) -> Result<Graph, TextError> {
    let (n, edges) = parse_pairs(input)?;
    for &(u, v) in &edges {
        if u < 1 || u > n || v < 1 || v > n || u == v {
            return Err(TextError::Parse {
                line: 0,
                msg: format!("bad edge ({u},{v})"),
            });
        }
    }
    Ok(Graph::from_edges(n, &edges))
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a realiser file: one space-separated order per line.
pub fn parse_realiser(input: &str) -> Result<Realiser, TextError> {
    let mut orders = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut seq = Vec::new();
        for tok in line.split_whitespace() {
            seq.push(tok.parse::<usize>().map_err(|e| TextError::Parse {
                line: no + 1,
                msg: format!("bad label: {e}"),
            })?);
        }
        orders.push(TotalOrder::new(seq));
    }
    if orders.is_empty() {
        return Err(TextError::Poset(PosetError::EmptyRealiser));
    }
    Ok(Realiser::new(orders))
}

pub fn format_realiser(r: &Realiser) -> String {
    let mut out = String::new();
    for order in r.orders() {
        let toks: Vec<String> = order.seq().iter().map(|x| x.to_string()).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a set file: one element label per line.
pub fn parse_set(input: &str) -> Result<Vec<usize>, TextError> {
    let mut out = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse::<usize>().map_err(|e| TextError::Parse {
            line: no + 1,
            msg: format!("bad label: {e}"),
        })?);
    }
    Ok(out)
}

pub fn format_set(set: &[usize]) -> String {
    let mut out = String::new();
    for x in set {
        out.push_str(&format!("{x}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_text_round_trips() {
        let p = Poset::from_dag(5, &[(1, 2), (2, 3), (1, 4), (4, 3), (3, 5)]).unwrap();
        let text = format_poset(&p);
        let q = parse_poset(&text).unwrap();
        assert_eq!(p, q);
        // Canonical text is a fixed point of write∘read.
        assert_eq!(format_poset(&q), text);
        // A full relation list parses to the same poset.
        let mut full = format!("n {}\n", p.n());
        for (u, v) in p.relations() {
            full.push_str(&format!("{u} {v}\n"));
        }
        assert_eq!(parse_poset(&full).unwrap(), p);
    }

    #[test]
    fn poset_text_errors() {
        assert!(parse_poset("").is_err());
        assert!(parse_poset("m 3\n1 2\n").is_err());
        assert!(parse_poset("n 3\n1\n").is_err());
        assert!(parse_poset("n 3\n1 2 3\n").is_err());
        assert!(parse_poset("n 2\n1 2\n2 1\n").is_err()); // cycle
        assert!(parse_poset("n 2\n1 5\n").is_err()); // out of range
    }

    #[test]
    fn realiser_text_round_trips() {
        let r = Realiser::new(vec![
            TotalOrder::new(vec![1, 2, 3]),
            TotalOrder::new(vec![3, 2, 1]),
        ]);
        let text = format_realiser(&r);
        assert_eq!(text, "1 2 3\n3 2 1\n");
        assert_eq!(parse_realiser(&text).unwrap(), r);
        assert!(parse_realiser("\n\n").is_err());
    }

    #[test]
    fn set_and_graph_text() {
        assert_eq!(parse_set("2\n4\n\n7\n").unwrap(), vec![2, 4, 7]);
        assert_eq!(format_set(&[1, 9]), "1\n9\n");
        let g = Graph::from_edges(4, &[(1, 2), (3, 4)]);
        assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }
}
