//! Graphviz rendering of the convex hull of finitely many points.

use std::fmt::Write;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::metric::{leq, same_point, wedge};
use crate::rational::fmt_q;

/// Vertices are the inputs plus their pairwise wedges; each vertex is joined
/// to the highest vertex strictly below it, with the exact length.
pub fn hull_dot(names: &[String], points: &[Element]) -> Result<String> {
    if points.len() < 2 {
        return Err(Error::Domain("a hull drawing needs at least two points".into()));
    }
    let mut verts: Vec<(String, String, Element)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("p{i}"), names.get(i).cloned().unwrap_or_else(|| format!("p{i}")), p.clone()))
        .collect();
    let mut branch = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let w = wedge(&points[i], &points[j])?;
            let mut known = false;
            for v in &verts {
                if same_point(&v.2, &w)? {
                    known = true;
                    break;
                }
            }
            if !known {
                verts.push((format!("w{branch}"), format!("rho {}", fmt_q(w.rho())), w));
                branch += 1;
            }
        }
    }
    let mut out = String::from("graph hull {\n");
    for (id, label, _) in &verts {
        let shape = if id.starts_with('w') { "point" } else { "ellipse" };
        let _ = writeln!(out, "  {id} [label=\"{label}\", shape={shape}];");
    }
    for (k, (id, _, v)) in verts.iter().enumerate() {
        let mut parent: Option<usize> = None;
        for (j, (_, _, u)) in verts.iter().enumerate() {
            if j == k || u.rho() >= v.rho() || !leq(u, v)? {
                continue;
            }
            if parent.is_none_or(|p| verts[p].2.rho() < u.rho()) {
                parent = Some(j);
            }
        }
        if let Some(p) = parent {
            let len = v.rho() - verts[p].2.rho();
            let _ = writeln!(out, "  {} -- {id} [label=\"{}\"];", verts[p].0, fmt_q(&len));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{step, Alphabet};
    use crate::rational::q;

    const A3: Alphabet = Alphabet::Finite(3);

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn path() {
        let pts = [Element::const_ray(q(0), A3), Element::const_ray(q(1), A3)];
        let dot = hull_dot(&names(&["c0", "c1"]), &pts).unwrap();
        assert_eq!(
            dot,
            "graph hull {\n  p0 [label=\"c0\", shape=ellipse];\n  p1 [label=\"c1\", shape=ellipse];\n  p0 -- p1 [label=\"1\"];\n}\n"
        );
    }

    #[test]
    fn star() {
        let pts = [
            Element::new(q(1), vec![step(q(0), 1)], A3).unwrap(),
            Element::new(q(1), vec![step(q(0), 2)], A3).unwrap(),
            Element::const_ray(q(-1), A3),
        ];
        let dot = hull_dot(&names(&["E1", "E2", "c-1"]), &pts).unwrap();
        assert!(dot.contains("w0 [label=\"rho 0\", shape=point];"));
        assert!(dot.contains("w0 -- p0 [label=\"1\"];"));
        assert!(dot.contains("w0 -- p1 [label=\"1\"];"));
        assert!(dot.contains("p2 -- w0 [label=\"1\"];"));
        assert_eq!(dot.matches(" -- ").count(), 3);
    }

    #[test]
    fn needs_two() {
        assert!(hull_dot(&names(&["c0"]), &[Element::const_ray(q(0), A3)]).is_err());
    }
}
