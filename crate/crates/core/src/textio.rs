//! Line-oriented text formats.
//!
//! Digraphs:
//!
//! ```text
//! # optional comments
//! digraph <n> <m>
//! <u> <v>        (m lines, arc u→v)
//! ```
//!
//! Targets written by this crate carry metadata comments (`# kind ...`,
//! `# anti-twin a b`, `# landmark name v`) so they can be read back with
//! their structure. Color maps are `<vertex> <color>` lines in ascending
//! vertex order.

use std::fmt::Write as _;

use crate::digraph::{ColorMap, OrientedGraph, Vertex};
use crate::error::{Error, Result};
use crate::paley::build_paley;
use crate::target::{TargetGraph, TargetKind};
use crate::tromp::{t9_target, tromp_star_target, tromp_target};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Content lines with 1-based numbers; blanks and comments are skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn comment_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| l.trim().strip_prefix('#').map(|c| (i + 1, c.trim())))
}

fn two_numbers(line: usize, s: &str) -> Result<(usize, usize)> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| perr(line, "expected two integers"))?
            .parse()
            .map_err(|_| perr(line, "expected a non-negative integer"))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(perr(line, "trailing tokens"));
    }
    Ok(pair)
}

pub fn parse_digraph(text: &str) -> Result<OrientedGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing `digraph <n> <m>` header"))?;
    let rest = header
        .strip_prefix("digraph")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| perr(hl, "expected `digraph <n> <m>`"))?;
    let (n, m) = two_numbers(hl, rest)?;
    let mut g = OrientedGraph::new(n);
    let mut count = 0;
    for (ln, l) in lines {
        let (u, v) = two_numbers(ln, l)?;
        count += 1;
        if count > m {
            return Err(perr(ln, format!("more than the {m} declared arcs")));
        }
        if u >= n || v >= n {
            return Err(perr(ln, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(perr(ln, format!("loop at {u}")));
        }
        if g.has_arc(u, v) {
            return Err(perr(ln, format!("duplicate arc {u} {v}")));
        }
        if g.has_arc(v, u) {
            return Err(perr(ln, format!("arc {u} {v} is opposite to an earlier arc")));
        }
        g.add_arc(u, v)?;
    }
    if count < m {
        return Err(perr(text.lines().count().max(1), format!("expected {m} arcs, found {count}")));
    }
    Ok(g)
}

/// Arcs in ascending (src, dst) order after the given comment lines.
pub fn write_digraph(g: &OrientedGraph, comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        for l in c.lines() {
            let _ = writeln!(s, "# {l}");
        }
    }
    let _ = writeln!(s, "digraph {} {}", g.order(), g.arc_count());
    for a in g.arcs() {
        let _ = writeln!(s, "{} {}", a.src, a.dst);
    }
    s
}

fn kind_line(kind: TargetKind) -> Option<String> {
    Some(match kind {
        TargetKind::Paley { q } => format!("kind paley {q}"),
        TargetKind::Tromp { p } => format!("kind tromp {p}"),
        TargetKind::TrompStar { p } => format!("kind tromp-star {p}"),
        TargetKind::T9 => "kind t9".into(),
        TargetKind::Custom => return None,
    })
}

/// A target with its structure recorded in metadata comments.
pub fn write_target(t: &TargetGraph) -> String {
    let mut c = vec![format!("target {}", t.name())];
    c.extend(kind_line(t.kind));
    for (v, at) in t.anti_twin.iter().enumerate() {
        if let Some(at) = *at {
            if v < at {
                c.push(format!("anti-twin {v} {at}"));
            }
        }
    }
    let l = t.landmarks;
    for (name, v) in [
        ("infinity", l.infinity),
        ("infinity-prime", l.infinity_prime),
        ("t0", l.t0),
        ("t1", l.t1),
    ] {
        if let Some(v) = v {
            c.push(format!("landmark {name} {v}"));
        }
    }
    write_digraph(&t.graph, &c)
}

/// Reads a target. A `# kind` line is checked against a fresh build of that
/// graph; otherwise the graph is custom, with any `# anti-twin` pairs.
pub fn parse_target(text: &str) -> Result<TargetGraph> {
    let g = parse_digraph(text)?;
    let mut kind: Option<(usize, TargetKind)> = None;
    let mut pairs = Vec::new();
    for (ln, c) in comment_lines(text) {
        let words: Vec<&str> = c.split_whitespace().collect();
        match words.as_slice() {
            ["kind", "t9"] => kind = Some((ln, TargetKind::T9)),
            ["kind", name, x] => {
                let x: u64 = x.parse().map_err(|_| perr(ln, "expected an integer order"))?;
                kind = Some((
                    ln,
                    match *name {
                        "paley" => TargetKind::Paley { q: x },
                        "tromp" => TargetKind::Tromp { p: x },
                        "tromp-star" => TargetKind::TrompStar { p: x },
                        _ => return Err(perr(ln, format!("unknown target kind {name:?}"))),
                    },
                ));
            }
            ["anti-twin", a, b] => {
                let (a, b) = two_numbers(ln, &format!("{a} {b}"))?;
                pairs.push((ln, a, b));
            }
            _ => {}
        }
    }
    if let Some((ln, k)) = kind {
        let built = match k {
            TargetKind::Paley { q } => TargetGraph::from_paley(build_paley(q)?),
            TargetKind::Tromp { p } => tromp_target(p)?,
            TargetKind::TrompStar { p } => tromp_star_target(p)?,
            TargetKind::T9 => t9_target(),
            TargetKind::Custom => unreachable!(),
        };
        if built.graph != g {
            return Err(perr(ln, format!("graph does not match {}", built.name())));
        }
        return Ok(built);
    }
    let mut t = TargetGraph::custom(g);
    for (ln, a, b) in pairs {
        let n = t.order();
        if a >= n || b >= n || a == b {
            return Err(perr(ln, "anti-twin pair out of range"));
        }
        if t.graph.adjacent(a, b) {
            return Err(perr(ln, format!("anti-twins {a} and {b} are adjacent")));
        }
        for (x, y) in [(a, b), (b, a)] {
            if t.anti_twin[x].is_some_and(|z| z != y) {
                return Err(perr(ln, format!("vertex {x} has two anti-twins")));
            }
            t.anti_twin[x] = Some(y);
        }
    }
    Ok(t)
}

/// `<vertex> <color>` lines, preceded by a `# target` comment.
pub fn write_colormap(m: &ColorMap, comments: &[String]) -> String {
    let mut s = String::new();
    if !m.target_id.is_empty() {
        let _ = writeln!(s, "# target {}", m.target_id);
    }
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    for (v, c) in m.assignment.iter().enumerate() {
        let _ = writeln!(s, "{v} {c}");
    }
    s
}

pub fn parse_colormap(text: &str) -> Result<ColorMap> {
    let mut assignment: Vec<Vertex> = Vec::new();
    for (ln, l) in content_lines(text) {
        let (v, c) = two_numbers(ln, l)?;
        if v != assignment.len() {
            return Err(perr(ln, format!("expected vertex {}, found {v}", assignment.len())));
        }
        assignment.push(c);
    }
    let target = comment_lines(text)
        .find_map(|(_, c)| c.strip_prefix("target ").map(|s| s.trim().to_string()))
        .unwrap_or_default();
    Ok(ColorMap::new(assignment, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tromp::tromp_target;

    #[test]
    fn round_trip() {
        let g = OrientedGraph::from_arcs(4, [(2, 3), (0, 1), (3, 0)]).unwrap();
        let text = write_digraph(&g, &["hello".into()]);
        assert_eq!(text, "# hello\ndigraph 4 3\n0 1\n2 3\n3 0\n");
        assert_eq!(parse_digraph(&text).unwrap(), g);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            ("", "header"),
            ("graph 2 1\n0 1\n", "digraph"),
            ("digraph 2 1\n0 0\n", "loop"),
            ("digraph 2 2\n0 1\n0 1\n", "duplicate"),
            ("digraph 2 2\n0 1\n1 0\n", "opposite"),
            ("digraph 2 1\n0 2\n", "range"),
            ("digraph 3 2\n0 1\n", "expected 2 arcs"),
            ("digraph 3 1\n0 1\n1 2\n", "more than"),
            ("digraph 3 1\n0 x\n", "integer"),
        ];
        for (text, needle) in bad {
            let e = parse_digraph(text).unwrap_err().to_string();
            assert!(e.contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn target_metadata_round_trip() {
        let t = tromp_target(7).unwrap();
        let text = write_target(&t);
        assert!(text.contains("# kind tromp 7"));
        assert!(text.contains("# anti-twin 0 7"));
        assert!(text.contains("# landmark infinity 14"));
        let back = parse_target(&text).unwrap();
        assert_eq!(back.kind, t.kind);
        assert_eq!(back.anti_twin, t.anti_twin);

        // a custom copy keeps its anti-twins but loses the kind
        let custom: String = text.lines().filter(|l| !l.starts_with("# kind")).map(|l| format!("{l}\n")).collect();
        let c = parse_target(&custom).unwrap();
        assert_eq!(c.kind, TargetKind::Custom);
        assert_eq!(c.anti_twin, t.anti_twin);

        let lying = text.replace("# kind tromp 7", "# kind tromp 11");
        assert!(parse_target(&lying).is_err());
    }

    #[test]
    fn colormap_round_trip() {
        let m = ColorMap::new(vec![3, 0, 8], "T9");
        let text = write_colormap(&m, &[]);
        assert_eq!(text, "# target T9\n0 3\n1 0\n2 8\n");
        assert_eq!(parse_colormap(&text).unwrap(), m);
        assert!(parse_colormap("1 0\n").is_err());
    }
}
