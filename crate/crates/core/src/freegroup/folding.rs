//! Subgroup membership through a folded graph.
//!
//! Each edge carries, besides its generator, a word in the subgroup
//! generators `y_1..y_m` (a word of rank `m`). Reading a closed path at the
//! base vertex multiplies these words into an expression whose value under
//! `y_k -> Y[k]` is the word read along the path. Folding keeps that
//! property by re-gauging the labels at the vertex that disappears.

use serde::{Deserialize, Serialize};

use super::word::{FreeWord, GeneratorTuple};
use super::FreeGroupError;

#[derive(Debug, Clone)]
struct Edge {
    from: usize,
    to: usize,
    /// Positive generator index.
    gen: i32,
    label: FreeWord,
}

#[derive(Debug, Clone)]
pub struct FoldedGraph {
    edges: Vec<Edge>,
    vertices: usize,
    subgroup_rank: usize,
}

impl FoldedGraph {
    pub fn new(y: &GeneratorTuple) -> Self {
        let m = y.len();
        let mut edges = Vec::new();
        let mut vertices = 1;
        for (k, w) in y.words().iter().enumerate() {
            let l = w.letters();
            if l.is_empty() {
                continue;
            }
            let mut prev = 0;
            for (p, &g) in l.iter().enumerate() {
                let next = if p + 1 == l.len() {
                    0
                } else {
                    vertices += 1;
                    vertices - 1
                };
                let label = if p == 0 {
                    FreeWord::generator(k as i32 + 1, m.max(1)).unwrap()
                } else {
                    FreeWord::identity(m.max(1))
                };
                edges.push(if g > 0 {
                    Edge { from: prev, to: next, gen: g, label }
                } else {
                    Edge {
                        from: next,
                        to: prev,
                        gen: -g,
                        label: label.inverse(),
                    }
                });
                prev = next;
            }
        }
        let mut graph = FoldedGraph {
            edges,
            vertices,
            subgroup_rank: m.max(1),
        };
        graph.fold();
        graph
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of vertices still in use.
    pub fn vertex_count(&self) -> usize {
        let mut used = vec![false; self.vertices];
        used[0] = true;
        for e in &self.edges {
            used[e.from] = true;
            used[e.to] = true;
        }
        used.iter().filter(|u| **u).count()
    }

    /// Directed step out of `v` reading signed letter `g`: target and label.
    fn step(&self, v: usize, g: i32) -> Option<(usize, FreeWord)> {
        self.edges.iter().find_map(|e| {
            if g > 0 && e.gen == g && e.from == v {
                Some((e.to, e.label.clone()))
            } else if g < 0 && e.gen == -g && e.to == v {
                Some((e.from, e.label.inverse()))
            } else {
                None
            }
        })
    }

    fn find_fold(&self) -> Option<(usize, usize)> {
        for a in 0..self.edges.len() {
            for b in a + 1..self.edges.len() {
                let (ea, eb) = (&self.edges[a], &self.edges[b]);
                if ea.gen == eb.gen && (ea.from == eb.from || ea.to == eb.to) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Multiplies every label at `v` so that closed paths keep their
    /// expressions: outgoing labels become `g * label`, incoming labels
    /// `label * g^-1`.
    fn gauge(&mut self, v: usize, g: &FreeWord) {
        let gi = g.inverse();
        for e in &mut self.edges {
            if e.from == v {
                e.label = g.mul(&e.label);
            }
            if e.to == v {
                e.label = e.label.mul(&gi);
            }
        }
    }

    fn fold(&mut self) {
        while let Some((a, b)) = self.find_fold() {
            let (ea, eb) = (self.edges[a].clone(), self.edges[b].clone());
            // Both edges leave a common vertex (forward) or enter one.
            let forward = ea.from == eb.from;
            let (ua, ub) = if forward { (ea.to, eb.to) } else { (ea.from, eb.from) };
            // Path labels of the two edges read away from the shared vertex.
            let (la, lb) = if forward {
                (ea.label.clone(), eb.label.clone())
            } else {
                (ea.label.inverse(), eb.label.inverse())
            };
            let (keep, elim, l_keep, l_elim, drop) = if ub == 0 && ua != 0 {
                (ub, ua, lb, la, a)
            } else {
                (ua, ub, la, lb, b)
            };
            if keep != elim {
                self.gauge(elim, &l_keep.inverse().mul(&l_elim));
                for e in &mut self.edges {
                    if e.from == elim {
                        e.from = keep;
                    }
                    if e.to == elim {
                        e.to = keep;
                    }
                }
            }
            self.edges.remove(drop);
        }
    }

    /// Reads `w` from the base vertex; returns the expression if the path
    /// closes up.
    pub fn read(&self, w: &FreeWord) -> Option<FreeWord> {
        let mut v = 0;
        let mut expr = FreeWord::identity(self.subgroup_rank);
        for &g in w.letters() {
            let (next, label) = self.step(v, g)?;
            expr = expr.mul(&label);
            v = next;
        }
        (v == 0).then_some(expr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// `expression` is a word in `y_1..y_m` whose value is `w`.
    Member { expression: FreeWord },
    NonMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides whether `w` lies in the subgroup generated by `y`. A returned
/// expression has been checked by substitution.
pub fn subgroup_membership(y: &GeneratorTuple, w: &FreeWord) -> Result<Membership, FreeGroupError> {
    if y.rank() != w.rank() {
        return Err(FreeGroupError::RankMismatch);
    }
    let graph = FoldedGraph::new(y);
    match graph.read(w) {
        None => Ok(Membership::NonMember),
        Some(expression) => {
            check_expression(y, &expression, w)?;
            Ok(Membership::Member { expression })
        }
    }
}

/// Checks that `expression`, with `y_k -> Y[k]`, evaluates to `w`.
pub fn check_expression(y: &GeneratorTuple, expression: &FreeWord, w: &FreeWord) -> Result<(), FreeGroupError> {
    let images: Vec<FreeWord> = if y.is_empty() {
        vec![FreeWord::identity(y.rank())]
    } else {
        y.words().to_vec()
    };
    if expression.rank() != images.len() {
        return Err(FreeGroupError::SizeMismatch {
            expected: images.len(),
            found: expression.rank(),
        });
    }
    let value = expression.substitute(&images)?;
    if &value != w {
        return Err(FreeGroupError::TraceMismatch(format!(
            "expression {expression} evaluates to {value}, not {w}"
        )));
    }
    Ok(())
}

/// Whether the two tuples generate the same subgroup.
pub fn same_subgroup(a: &GeneratorTuple, b: &GeneratorTuple) -> Result<bool, FreeGroupError> {
    if a.rank() != b.rank() {
        return Err(FreeGroupError::RankMismatch);
    }
    for (x, y) in [(a, b), (b, a)] {
        for w in x.words() {
            if !subgroup_membership(y, w)?.is_member() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
