//! Witness programs and bounded solution sets read off a solution graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::Error;
use crate::graph::{NodeId, NodeKind, SolutionGraph};
use crate::oracle::words_up_to;
use crate::word::{system_vars, Letter, NarrowingProgram, SystemState, Term, Var, Word};

/// A substitution for the system's variables. Values may mention the
/// variables in `residual_free`, which act as parameters: every ground
/// instantiation of them gives a solution.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution {
    pub assignment: BTreeMap<Var, Word>,
    pub residual_free: BTreeSet<Var>,
}

impl Solution {
    pub fn ground(assignment: BTreeMap<Var, Word>) -> Solution {
        Solution {
            assignment,
            residual_free: BTreeSet::new(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.residual_free.is_empty()
    }

    pub fn value(&self, x: Var) -> Option<&Word> {
        self.assignment.get(&x)
    }

    /// Substitutes ground words for the parameters, all at once.
    pub fn instantiate(&self, params: &BTreeMap<Var, Word>) -> Solution {
        let assignment = self
            .assignment
            .iter()
            .map(|(&x, w)| (x, w.substitute(|v| params.get(&v).cloned())))
            .collect();
        let residual_free = self
            .residual_free
            .iter()
            .copied()
            .filter(|v| !params.contains_key(v))
            .collect();
        Solution {
            assignment,
            residual_free,
        }
    }
}

/// `x=AB, y=, z=A`
impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, w)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}=")?;
            for t in w.terms() {
                write!(f, "{t}")?;
            }
        }
        Ok(())
    }
}

/// Follows child-edge choices from the root. Folded nodes are passed
/// through to their targets without consuming a choice.
pub fn extract_program(graph: &SolutionGraph, path: &[usize]) -> Result<NarrowingProgram, Error> {
    let mut cur = graph.resolve(graph.root);
    let mut steps = Vec::with_capacity(path.len());
    for (i, &choice) in path.iter().enumerate() {
        let edge = graph.out_edges(cur).nth(choice).ok_or_else(|| {
            Error::InvalidPath(format!("step {i}: node {cur} has no child {choice}"))
        })?;
        steps.push(edge.narrowing);
        cur = graph.resolve(edge.to);
    }
    if graph.node(cur).kind != NodeKind::TLeaf {
        return Err(Error::InvalidPath(format!(
            "walk ends at node {cur}, which is not a T leaf"
        )));
    }
    Ok(NarrowingProgram::new(steps))
}

/// Composes the program's values for `vars`.
pub fn path_solution(p: &NarrowingProgram, vars: &BTreeSet<Var>) -> Solution {
    let assignment: BTreeMap<Var, Word> = vars.iter().map(|&x| (x, p.compose_value(x))).collect();
    let residual_free = assignment.values().flat_map(|w| w.vars()).collect();
    Solution {
        assignment,
        residual_free,
    }
}

/// Shortest walk from the root to a T leaf.
pub fn min_witness(graph: &SolutionGraph) -> Option<NarrowingProgram> {
    let start = graph.resolve(graph.root);
    let mut came_from: HashMap<NodeId, (NodeId, usize)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    let mut seen = BTreeSet::from([start]);
    while let Some(cur) = queue.pop_front() {
        if graph.node(cur).kind == NodeKind::TLeaf {
            let mut steps = Vec::new();
            let mut at = cur;
            while let Some(&(prev, edge)) = came_from.get(&at) {
                steps.push(graph.tree_edges[edge].narrowing);
                at = prev;
            }
            steps.reverse();
            return Some(NarrowingProgram::new(steps));
        }
        for &e in &graph.children[cur] {
            let next = graph.resolve(graph.tree_edges[e].to);
            if seen.insert(next) {
                came_from.insert(next, (cur, e));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Every program labelling a walk of at most `max_len` edges that ends at a
/// T leaf, in depth-first narrowing order.
pub fn accepted_programs(graph: &SolutionGraph, max_len: usize) -> Vec<NarrowingProgram> {
    fn walk(
        g: &SolutionGraph,
        node: NodeId,
        left: usize,
        prefix: &mut Vec<crate::word::Narrowing>,
        out: &mut Vec<NarrowingProgram>,
    ) {
        if g.node(node).kind == NodeKind::TLeaf {
            out.push(NarrowingProgram::new(prefix.clone()));
            return;
        }
        if left == 0 {
            return;
        }
        for e in g.out_edges(node) {
            prefix.push(e.narrowing);
            walk(g, g.resolve(e.to), left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(
        graph,
        graph.resolve(graph.root),
        max_len,
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Ground solutions whose values all have length at most `max_value_len`,
/// read off walks of at most `max_path_len` edges. Variables left unbound at
/// a T leaf range over every word over `alphabet` up to `max_value_len`.
///
/// Walks are not unrolled one by one: layer `k` holds, per node, the ground
/// solutions of its label reachable in at most `k` edges. A solution of a
/// node only uses subwords of the values it induces upstream, so dropping
/// overlong assignments early loses nothing.
pub fn enumerate_solutions(
    graph: &SolutionGraph,
    max_value_len: usize,
    max_path_len: usize,
    alphabet: &BTreeSet<Letter>,
) -> BTreeSet<Solution> {
    let pool = words_up_to(alphabet, max_value_len);
    let node_vars: Vec<BTreeSet<Var>> = graph
        .nodes
        .iter()
        .map(|n| match &n.label {
            SystemState::Eqs(eqs) => system_vars(eqs),
            _ => BTreeSet::new(),
        })
        .collect();
    let live: Vec<NodeId> = (0..graph.len())
        .filter(|&id| graph.resolve(id) == id)
        .collect();

    let mut layer: Vec<BTreeSet<Assignment>> = vec![BTreeSet::new(); graph.len()];
    for &id in &live {
        if graph.node(id).kind == NodeKind::TLeaf {
            layer[id].insert(Assignment::new());
        }
    }
    for _ in 0..max_path_len {
        let mut next = layer.clone();
        let mut changed = false;
        for &id in &live {
            for e in graph.out_edges(id) {
                let to = graph.resolve(e.to);
                for sigma in &layer[to] {
                    let unbound: Vec<Var> = node_vars[id]
                        .iter()
                        .filter(|v| !sigma.contains_key(v))
                        .copied()
                        .collect();
                    for_each_extension(sigma, &unbound, &pool, |full| {
                        let lifted: Option<Assignment> = node_vars[id]
                            .iter()
                            .map(|&v| {
                                let w = Word::from_terms(vec![Term::Var(v)])
                                    .apply(&e.narrowing)
                                    .substitute(|u| full.get(&u).cloned());
                                (w.len() <= max_value_len).then_some((v, w))
                            })
                            .collect();
                        if let Some(a) = lifted {
                            changed |= next[id].insert(a);
                        }
                    });
                }
            }
        }
        layer = next;
        if !changed {
            break;
        }
    }

    let root = graph.resolve(graph.root);
    let unbound: Vec<Var> = graph
        .vars()
        .into_iter()
        .filter(|v| !node_vars[root].contains(v))
        .collect();
    let mut out = BTreeSet::new();
    for sigma in &layer[root] {
        for_each_extension(sigma, &unbound, &pool, |full| {
            out.insert(Solution::ground(full.clone()));
        });
    }
    out
}

type Assignment = BTreeMap<Var, Word>;

/// Calls `f` on `base` extended by every choice of `pool` words for `vars`.
fn for_each_extension(
    base: &Assignment,
    vars: &[Var],
    pool: &[Word],
    mut f: impl FnMut(&Assignment),
) {
    let mut full = base.clone();
    let mut choice = vec![0usize; vars.len()];
    loop {
        for (v, &c) in vars.iter().zip(&choice) {
            full.insert(*v, pool[c].clone());
        }
        f(&full);
        // Odometer over the choices.
        let mut i = 0;
        loop {
            if i == vars.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < pool.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
