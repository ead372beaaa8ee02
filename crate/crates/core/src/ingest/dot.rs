use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::families::{GroupDescriptor, Tree, Variant};

pub const MAX_DOT_LOG_ORDER: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DotError {
    #[error("logarithmic order bound {0} exceeds {MAX_DOT_LOG_ORDER}")]
    TooDeep(u32),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Constructible,
    Coordinates,
    Continuation,
}

struct Graph {
    max_lo: u32,
    /// id -> (lo, label, shape)
    nodes: BTreeMap<String, (u32, String, Shape)>,
    edges: BTreeSet<(String, String, String)>,
}

impl Graph {
    /// Adds a child of `parent` by step `-#s;j`; returns its id, or `None`
    /// when it lies beyond the bound.
    fn child(&mut self, parent: &str, s: u8, j: u32, label: impl Into<String>, shape: Shape) -> Option<String> {
        let (plo, _, _) = self.nodes[parent];
        let lo = plo + s as u32;
        if lo > self.max_lo {
            return None;
        }
        let id = format!("{parent}-#{s};{j}");
        self.nodes.entry(id.clone()).or_insert((lo, label.into(), shape));
        self.edges.insert((parent.to_string(), id.clone(), format!("#{s};{j}")));
        Some(id)
    }

    fn render(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph {name} {{").unwrap();
        writeln!(out, "  node [fontsize=10];").unwrap();
        let mut order: Vec<(&u32, &String, &String, &Shape)> =
            self.nodes.iter().map(|(id, (lo, l, s))| (lo, id, l, s)).collect();
        order.sort();
        for (lo, id, label, shape) in order {
            let attrs = match shape {
                Shape::Constructible => "shape=ellipse",
                Shape::Coordinates => "shape=box, style=dashed",
                Shape::Continuation => "shape=point",
            };
            writeln!(out, "  \"{id}\" [label=\"{label}\\nlo={lo}\", {attrs}];").unwrap();
        }
        for (a, b, l) in &self.edges {
            writeln!(out, "  \"{a}\" -> \"{b}\" [label=\"{l}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn simple_name(tree: Tree, i: u32) -> &'static str {
    match (tree, i) {
        (Tree::Q, 2) => "E.6",
        (Tree::Q, _) => "E.14",
        (Tree::U, 2) => "E.8",
        (Tree::U, _) => "E.9",
    }
}

fn complex_name(tree: Tree) -> &'static str {
    match tree {
        Tree::Q => "H.4",
        Tree::U => "G.16",
    }
}

/// Vertices of the coclass-2 tree of `tree` up to logarithmic order `max_lo`:
/// the constructible groups as ellipses, coordinate-only groups as dashed boxes.
pub fn emit_tree_dot(tree: Tree, max_lo: u32) -> Result<String, DotError> {
    use Shape::*;
    if max_lo > MAX_DOT_LOG_ORDER {
        return Err(DotError::TooDeep(max_lo));
    }
    let mut g = Graph {
        max_lo,
        nodes: BTreeMap::new(),
        edges: BTreeSet::new(),
    };
    if max_lo < 5 {
        return Ok(g.render(&tree.to_string()));
    }
    g.nodes.insert("R".into(), (5, "R = X_3^2".into(), Constructible));

    // mainline X_c, c >= 4
    let mut mainline = vec!["R".to_string()];
    let mut c = 4;
    loop {
        let label = if c == 4 { "F = X_4^2".to_string() } else { format!("X_{c}^2") };
        let parent = mainline.last().unwrap().clone();
        match g.child(&parent, 1, 1, label, Constructible) {
            Some(id) => mainline.push(id),
            None => break,
        }
        c += 1;
    }
    let last = mainline.last().unwrap().clone();
    let (llo, _, _) = g.nodes[&last];
    g.nodes.insert(format!("{last}..."), (llo + 1, "infinite mainline".into(), Continuation));
    g.edges.insert((last.clone(), format!("{last}..."), "#1;1".into()));

    // metabelian siblings of the mainline at odd class c = 2n+5
    for (k, parent) in mainline.iter().enumerate() {
        let cp = 3 + k as u32;
        if cp < 4 || cp % 2 == 1 {
            continue;
        }
        let n = (cp - 4) / 2;
        for i in 2..=4 {
            g.child(parent, 1, i, format!("M_{n}^{i} {}", simple_name(tree, i)), Constructible);
        }
        for (i, v) in [(5, Variant::ComplexA), (6, Variant::ComplexB)] {
            let d = GroupDescriptor::metabelian(tree, cp + 1, v);
            if let Some(h) = g.child(parent, 1, i, d.to_string(), Constructible) {
                if let Some(m) = g.child(&h, 1, 1, format!("M_{n}^{i} {}", complex_name(tree)), Coordinates) {
                    let children = if tree == Tree::Q { 3 } else { 2 };
                    for j in 1..=children {
                        g.child(&m, 1, j, format!("R_{{{n},{j}}}^{i}"), Coordinates);
                    }
                }
            }
        }
    }

    // Schur skeleton P_k = F(-#2;1-#1;1)^k and its hulls
    let mut p = mainline.get(1).cloned();
    let mut k = 0;
    while let Some(pk) = p {
        for i in 2..=4 {
            let constructible = i < 4 || tree == Tree::U;
            let shape = if constructible { Constructible } else { Coordinates };
            g.child(&pk, 2, i, format!("S_{k}^{i} {}", simple_name(tree, i)), shape);
        }
        for i in 5..=6 {
            let Some(h) = g.child(&pk, 2, i, format!("F(-#2;1-#1;1)^{k}-#2;{i}"), Coordinates) else {
                continue;
            };
            let mut hull = g.child(&h, 1, 1, format!("F(-#2;1-#1;1)^{k}[-#2;{i}-#1;1]"), Coordinates);
            let mut t = 0;
            while let Some(b) = hull {
                g.child(&b, 2, 2, format!("S_{{{k},{t}}}^{i} {}", complex_name(tree)), Coordinates);
                hull = g
                    .child(&b, 2, 1, format!("hull t={t}"), Coordinates)
                    .and_then(|x| g.child(&x, 1, 1, format!("hull t={}", t + 1), Coordinates));
                t += 1;
            }
        }
        // fork topology T_{n,u}^i from P_u, u = k >= 1
        if k >= 1 {
            let mut v = 0;
            let mut cur = Some(pk.clone());
            while let Some(q) = cur {
                let n = k + v;
                for i in 2..=4 {
                    g.child(&q, 1, i, format!("T_{{{n},{k}}}^{i}"), Coordinates);
                }
                for i in 5..=6 {
                    if let Some(h) = g.child(&q, 1, i, format!("T_{{{n},{k}}}^{i} parent"), Coordinates) {
                        g.child(&h, 1, 1, format!("T_{{{n},{k}}}^{i}"), Coordinates);
                    }
                }
                cur = g
                    .child(&q, 1, 1, "skeleton", Coordinates)
                    .and_then(|x| g.child(&x, 1, 1, "skeleton", Coordinates));
                v += 1;
            }
        }
        p = g
            .child(&pk, 2, 1, "skeleton", Coordinates)
            .and_then(|x| g.child(&x, 1, 1, format!("F(-#2;1-#1;1)^{}", k + 1), Coordinates));
        k += 1;
    }
    Ok(g.render(&tree.to_string()))
}
