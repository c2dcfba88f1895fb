//! The isotropy graph of a 2-adic form: vertices are elements, and `γ -- γ+μ` is an edge when
//! `μ` is isotropic of order 2 and orthogonal to `γ`. A unit vector `e^γ` is a combination of
//! lifts exactly when the component of `γ` contains an odd cycle.

use std::collections::VecDeque;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::form::{DiscriminantForm, Elem};
use crate::lift::{isotropic_elements, Bounds};

const UNSEEN: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct GraphComponent {
    pub vertices: Vec<Elem>,
    pub bipartite: bool,
    /// A closed walk of odd length inside the component, when one exists.
    pub odd_cycle: Option<Vec<Elem>>,
}

#[derive(Clone, Debug)]
pub struct IsotropyGraph {
    adjacency: Vec<Vec<Elem>>,
    component: Vec<usize>,
    depth: Vec<usize>,
    components: Vec<GraphComponent>,
}

fn is_power_of_two(n: u64) -> bool {
    n.is_power_of_two()
}

pub fn build_isotropy_graph(d: &DiscriminantForm, bounds: &Bounds) -> Result<IsotropyGraph> {
    if !is_power_of_two(d.level()) {
        return Err(Error::NotTwoAdic(d.level()));
    }
    if d.order() > bounds.max_span_order {
        return Err(Error::BoundExceeded {
            what: "isotropy graph",
            order: d.order(),
            bound: bounds.max_span_order,
        });
    }
    let n = d.order();
    let iso2 = isotropic_elements(d, Some(2));
    let adjacency: Vec<Vec<Elem>> = (0..n)
        .map(|g| {
            let mut nb: Vec<Elem> = iso2
                .iter()
                .filter(|&&m| d.is_orthogonal(m, g))
                .map(|&m| d.add(g, m))
                .collect();
            nb.sort_unstable();
            nb
        })
        .collect();

    let mut component = vec![UNSEEN; n];
    let mut parent = vec![UNSEEN; n];
    let mut depth = vec![0usize; n];
    let mut components = Vec::new();
    for root in 0..n {
        if component[root] != UNSEEN {
            continue;
        }
        let id = components.len();
        let mut vertices = vec![root];
        let mut odd_edge = None;
        component[root] = id;
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if component[v] == UNSEEN {
                    component[v] = id;
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    vertices.push(v);
                    queue.push_back(v);
                } else if odd_edge.is_none() && depth[v] % 2 == depth[u] % 2 {
                    odd_edge = Some((u, v));
                }
            }
        }
        vertices.sort_unstable();
        let odd_cycle = odd_edge.map(|(u, v)| tree_cycle(&parent, &depth, u, v));
        components.push(GraphComponent {
            vertices,
            bipartite: odd_cycle.is_none(),
            odd_cycle,
        });
    }
    Ok(IsotropyGraph {
        adjacency,
        component,
        depth,
        components,
    })
}

/// Closes the BFS-tree paths from `u` and `v` to their common ancestor with the edge `v -- u`.
fn tree_cycle(parent: &[Elem], depth: &[usize], u: Elem, v: Elem) -> Vec<Elem> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

impl IsotropyGraph {
    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, g: Elem) -> &[Elem] {
        &self.adjacency[g]
    }

    pub fn has_edge(&self, a: Elem, b: Elem) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn components(&self) -> &[GraphComponent] {
        &self.components
    }

    pub fn component_of(&self, g: Elem) -> usize {
        self.component[g]
    }

    /// Two-colouring by BFS depth parity; meaningful on bipartite components.
    pub fn color(&self, g: Elem) -> u8 {
        (self.depth[g] % 2) as u8
    }

    pub fn is_in_bipartite_component(&self, g: Elem) -> bool {
        self.components[self.component[g]].bipartite
    }

    /// Graph-side membership verdict: the component of `γ` is not bipartite.
    pub fn gamma_in_image(&self, g: Elem) -> bool {
        !self.is_in_bipartite_component(g)
    }

    fn path_to(&self, from: Elem, to: Elem) -> Vec<Elem> {
        let n = self.order();
        let mut prev = vec![UNSEEN; n];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &v in &self.adjacency[u] {
                if prev[v] == UNSEEN {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![to];
        let mut x = to;
        while x != from {
            x = prev[x];
            path.push(x);
        }
        path.reverse();
        path
    }

    /// An odd closed walk starting at `γ`, when `γ` lies in a non-bipartite component.
    pub fn odd_cycle_through(&self, g: Elem) -> Option<Vec<Elem>> {
        let cycle = self.components[self.component[g]].odd_cycle.as_ref()?;
        if let Some(i) = cycle.iter().position(|&x| x == g) {
            let mut rotated = cycle[i..].to_vec();
            rotated.extend_from_slice(&cycle[..i]);
            return Some(rotated);
        }
        // γ … c0, around the cycle, back to c0, then retrace to γ
        let path = self.path_to(g, cycle[0]);
        let m = path.len() - 1;
        let mut walk: Vec<Elem> = path[..m].to_vec();
        walk.extend_from_slice(cycle);
        walk.push(cycle[0]);
        walk.extend(path[1..m].iter().rev());
        Some(walk)
    }

    /// DOT rendering; labels carry coefficient vectors and `q`, bipartite components are coloured.
    pub fn to_dot(&self, d: &DiscriminantForm) -> String {
        let mut s = String::from("graph isotropy {\n");
        for g in 0..self.order() {
            let c = self.component[g];
            let fill = if self.components[c].bipartite {
                if self.color(g) == 0 {
                    "lightblue"
                } else {
                    "lightpink"
                }
            } else {
                "lightgray"
            };
            let _ = writeln!(
                s,
                "  n{g} [label=\"{} q={}\", component={c}, style=filled, fillcolor={fill}];",
                d.label(g),
                d.q(g)
            );
        }
        for (a, nb) in self.adjacency.iter().enumerate() {
            for &b in nb {
                if a < b {
                    let _ = writeln!(s, "  n{a} -- n{b};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn gamma_in_image_by_graph(d: &DiscriminantForm, g: Elem, bounds: &Bounds) -> Result<bool> {
    Ok(build_isotropy_graph(d, bounds)?.gamma_in_image(g))
}
