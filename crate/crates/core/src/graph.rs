//! Solution graphs: depth-first unfolding with folding onto ancestors whose
//! labels are textually equal.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::time::Instant;

use crate::error::Error;
use crate::narrow::{compatible_narrowings, step_unchecked};
use crate::rewrite::{simplify, Scheme};
use crate::word::{system_vars, Equation, Narrowing, SystemState, Var};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Expanded; one outgoing tree edge per compatible narrowing.
    Internal,
    /// Label repeats an earlier node; `Node::folds_to` names it.
    Folded,
    /// Not expanded because a budget ran out.
    Open,
    /// All equations solved.
    TLeaf,
    /// Contradiction, or no compatible narrowing.
    FLeaf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub label: SystemState,
    pub kind: NodeKind,
    /// Tree edges from the root.
    pub depth: usize,
    pub parent: Option<NodeId>,
    pub folds_to: Option<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub from: NodeId,
    pub narrowing: Narrowing,
    pub to: NodeId,
}

/// A fold from a `Folded` node to the node carrying the same label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionGraph {
    pub root: NodeId,
    pub nodes: Vec<Node>,
    pub tree_edges: Vec<TreeEdge>,
    /// Folds onto proper ancestors.
    pub back_edges: Vec<Link>,
    /// Folds onto finished nodes off the current path (memo mode only).
    pub cross_edges: Vec<Link>,
    /// Outgoing tree edge indices per node, in narrowing order.
    pub children: Vec<Vec<usize>>,
    pub system: Vec<Equation>,
    pub scheme: Scheme,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    max_nodes: usize,
    max_depth: usize,
}

impl Budget {
    pub fn new(max_nodes: usize, max_depth: usize) -> Result<Budget, Error> {
        if max_nodes == 0 || max_depth == 0 {
            return Err(Error::InvalidBudget);
        }
        Ok(Budget {
            max_nodes,
            max_depth,
        })
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_nodes: 1_000_000,
            max_depth: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FoldMode {
    /// Fold only onto ancestors on the current path.
    #[default]
    Ancestor,
    /// Also reuse any finished node with the same label.
    Memo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub scheme: Scheme,
    pub budget: Budget,
    pub fold: FoldMode,
    /// Stop at the first T leaf.
    pub early_stop: bool,
    /// Checked cooperatively every few hundred nodes.
    pub deadline: Option<Instant>,
}

impl BuildOptions {
    pub fn new(scheme: Scheme) -> BuildOptions {
        BuildOptions {
            scheme,
            budget: Budget::default(),
            fold: FoldMode::Ancestor,
            early_stop: false,
            deadline: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustion {
    NodeLimit,
    DepthLimit,
    Timeout,
    FirstSolution,
}

impl fmt::Display for Exhaustion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exhaustion::NodeLimit => "node limit",
            Exhaustion::DepthLimit => "depth limit",
            Exhaustion::Timeout => "timeout",
            Exhaustion::FirstSolution => "first solution",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildStatus {
    Complete,
    BudgetExhausted(Exhaustion),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildOutcome {
    pub graph: SolutionGraph,
    pub status: BuildStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown(Exhaustion),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Unknown(_) => "UNKNOWN",
        })
    }
}

pub fn build(system: &[Equation], scheme: Scheme, budget: Budget) -> Result<BuildOutcome, Error> {
    build_with(
        system,
        BuildOptions {
            budget,
            ..BuildOptions::new(scheme)
        },
    )
}

struct Frame {
    node: NodeId,
    narrowings: Vec<Narrowing>,
    next: usize,
}

pub fn build_with(system: &[Equation], opts: BuildOptions) -> Result<BuildOutcome, Error> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let scheme = opts.scheme;
    let root_label = simplify(scheme, &SystemState::Eqs(system.to_vec()))?;
    let mut g = SolutionGraph {
        root: 0,
        nodes: Vec::new(),
        tree_edges: Vec::new(),
        back_edges: Vec::new(),
        cross_edges: Vec::new(),
        children: Vec::new(),
        system: system.to_vec(),
        scheme,
    };
    let mut status = BuildStatus::Complete;
    let mut on_path: HashMap<SystemState, NodeId> = HashMap::new();
    let mut finished: HashMap<SystemState, NodeId> = HashMap::new();
    let mut stack: Vec<Frame> = Vec::new();

    // Adds a node and, if it needs expanding, a frame for it.
    let add = |g: &mut SolutionGraph,
               stack: &mut Vec<Frame>,
               on_path: &mut HashMap<SystemState, NodeId>,
               finished: &HashMap<SystemState, NodeId>,
               status: &mut BuildStatus,
               label: SystemState,
               parent: Option<NodeId>|
     -> Result<NodeKind, Error> {
        let id = g.nodes.len();
        let depth = parent.map_or(0, |p| g.nodes[p].depth + 1);
        let mut folds_to = None;
        let mut frame = None;
        let kind = match &label {
            SystemState::Accepted => NodeKind::TLeaf,
            SystemState::Contradiction => NodeKind::FLeaf,
            SystemState::Eqs(_) => {
                if let Some(&anc) = on_path.get(&label) {
                    folds_to = Some(anc);
                    g.back_edges.push(Link { from: id, to: anc });
                    NodeKind::Folded
                } else if let Some(&done) = finished.get(&label) {
                    folds_to = Some(done);
                    g.cross_edges.push(Link { from: id, to: done });
                    NodeKind::Folded
                } else {
                    let narrowings = compatible_narrowings(&label)?;
                    if narrowings.is_empty() {
                        NodeKind::FLeaf
                    } else if depth >= opts.budget.max_depth {
                        *status = BuildStatus::BudgetExhausted(Exhaustion::DepthLimit);
                        NodeKind::Open
                    } else {
                        frame = Some(narrowings);
                        NodeKind::Internal
                    }
                }
            }
        };
        if let Some(narrowings) = frame {
            on_path.insert(label.clone(), id);
            stack.push(Frame {
                node: id,
                narrowings,
                next: 0,
            });
        }
        g.nodes.push(Node {
            id,
            label,
            kind,
            depth,
            parent,
            folds_to,
        });
        g.children.push(Vec::new());
        Ok(kind)
    };

    let root_kind = add(
        &mut g,
        &mut stack,
        &mut on_path,
        &finished,
        &mut status,
        root_label,
        None,
    )?;
    if root_kind == NodeKind::TLeaf && opts.early_stop {
        return Ok(BuildOutcome { graph: g, status });
    }

    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.narrowings.len() {
            let id = frame.node;
            stack.pop();
            let label = &g.nodes[id].label;
            on_path.remove(label);
            if opts.fold == FoldMode::Memo {
                finished.insert(label.clone(), id);
            }
            continue;
        }
        if g.nodes.len() >= opts.budget.max_nodes {
            status = BuildStatus::BudgetExhausted(Exhaustion::NodeLimit);
            break;
        }
        if let Some(deadline) = opts.deadline {
            if g.nodes.len().is_multiple_of(256) && Instant::now() >= deadline {
                status = BuildStatus::BudgetExhausted(Exhaustion::Timeout);
                break;
            }
        }
        let narrowing = frame.narrowings[frame.next];
        frame.next += 1;
        let parent = frame.node;
        let label = step_unchecked(&g.nodes[parent].label, &narrowing, scheme)?;
        let child = g.nodes.len();
        g.children[parent].push(g.tree_edges.len());
        g.tree_edges.push(TreeEdge {
            from: parent,
            narrowing,
            to: child,
        });
        let kind = add(
            &mut g,
            &mut stack,
            &mut on_path,
            &finished,
            &mut status,
            label,
            Some(parent),
        )?;
        if kind == NodeKind::TLeaf && opts.early_stop {
            status = BuildStatus::BudgetExhausted(Exhaustion::FirstSolution);
            break;
        }
    }
    // Frames left on the stack were cut short; their nodes stay Internal
    // with a partial child list, which only matters for incomplete builds.
    Ok(BuildOutcome { graph: g, status })
}

/// SAT iff a T leaf exists, UNSAT iff additionally the build completed.
pub fn verdict(outcome: &BuildOutcome) -> Verdict {
    if outcome.graph.has_tleaf() {
        return Verdict::Sat;
    }
    match outcome.status {
        BuildStatus::Complete => Verdict::Unsat,
        BuildStatus::BudgetExhausted(reason) => Verdict::Unknown(reason),
    }
}

impl SolutionGraph {
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Outgoing tree edges of `id`, in narrowing order.
    pub fn out_edges(&self, id: NodeId) -> impl Iterator<Item = &TreeEdge> {
        self.children[id].iter().map(move |&e| &self.tree_edges[e])
    }

    pub fn count_kind(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn has_tleaf(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == NodeKind::TLeaf)
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        system_vars(&self.system)
    }

    /// Follows a fold, if any, to the node that carries the subtree.
    pub fn resolve(&self, id: NodeId) -> NodeId {
        self.nodes[id].folds_to.unwrap_or(id)
    }

    fn is_ancestor(&self, anc: NodeId, mut id: NodeId) -> bool {
        while let Some(p) = self.nodes[id].parent {
            if p == anc {
                return true;
            }
            id = p;
        }
        false
    }

    /// Structural checks: tree edges form a tree rooted at `root`, every
    /// back edge targets a proper ancestor and every fold joins equal labels.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut incoming = vec![0usize; self.nodes.len()];
        for e in &self.tree_edges {
            incoming[e.to] += 1;
            if self.nodes[e.to].parent != Some(e.from) {
                return Err(format!(
                    "edge {} -> {} disagrees with parent link",
                    e.from, e.to
                ));
            }
        }
        for (id, &n) in incoming.iter().enumerate() {
            let expected = usize::from(id != self.root);
            if n != expected {
                return Err(format!("node {id} has {n} incoming tree edges"));
            }
        }
        for l in &self.back_edges {
            if !self.is_ancestor(l.to, l.from) {
                return Err(format!(
                    "back edge {} -> {} does not target an ancestor",
                    l.from, l.to
                ));
            }
        }
        for l in self.back_edges.iter().chain(&self.cross_edges) {
            if self.nodes[l.from].label != self.nodes[l.to].label {
                return Err(format!(
                    "fold {} -> {} joins different labels",
                    l.from, l.to
                ));
            }
            if self.nodes[l.from].kind != NodeKind::Folded {
                return Err(format!("fold source {} is not a folded node", l.from));
            }
        }
        for n in &self.nodes {
            let ok = match n.kind {
                NodeKind::TLeaf => n.label == SystemState::Accepted,
                NodeKind::FLeaf => match &n.label {
                    SystemState::Contradiction => true,
                    s @ SystemState::Eqs(_) => compatible_narrowings(s).is_ok_and(|v| v.is_empty()),
                    SystemState::Accepted => false,
                },
                _ => matches!(n.label, SystemState::Eqs(_)),
            };
            if !ok {
                return Err(format!(
                    "node {} has kind {:?} but label {}",
                    n.id, n.kind, n.label
                ));
            }
        }
        Ok(())
    }

    /// Nodes from which some T leaf is reachable, folds included.
    pub fn reaches_tleaf(&self) -> Vec<bool> {
        let mut reach: Vec<bool> = self
            .nodes
            .iter()
            .map(|n| n.kind == NodeKind::TLeaf)
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for n in self.nodes.iter().rev() {
                if reach[n.id] {
                    continue;
                }
                let r = match n.folds_to {
                    Some(t) => reach[t],
                    None => self.children[n.id]
                        .iter()
                        .any(|&e| reach[self.tree_edges[e].to]),
                };
                if r {
                    reach[n.id] = true;
                    changed = true;
                }
            }
        }
        reach
    }

    /// A copy keeping only the root and nodes that can reach a T leaf.
    pub fn pruned(&self) -> SolutionGraph {
        let reach = self.reaches_tleaf();
        let keep: Vec<bool> = (0..self.nodes.len())
            .map(|i| reach[i] || i == self.root)
            .collect();
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for n in &self.nodes {
            if keep[n.id] {
                new_id[n.id] = nodes.len();
                nodes.push(n.clone());
            }
        }
        for n in &mut nodes {
            n.id = new_id[n.id];
            n.parent = n.parent.map(|p| new_id[p]);
            n.folds_to = n.folds_to.map(|t| new_id[t]);
        }
        let mut children = vec![Vec::new(); nodes.len()];
        let mut tree_edges = Vec::new();
        for e in &self.tree_edges {
            if keep[e.from] && keep[e.to] {
                children[new_id[e.from]].push(tree_edges.len());
                tree_edges.push(TreeEdge {
                    from: new_id[e.from],
                    narrowing: e.narrowing,
                    to: new_id[e.to],
                });
            }
        }
        let relink = |links: &[Link]| {
            links
                .iter()
                .filter(|l| keep[l.from] && keep[l.to])
                .map(|l| Link {
                    from: new_id[l.from],
                    to: new_id[l.to],
                })
                .collect()
        };
        SolutionGraph {
            root: new_id[self.root],
            nodes,
            tree_edges,
            back_edges: relink(&self.back_edges),
            cross_edges: relink(&self.cross_edges),
            children,
            system: self.system.clone(),
            scheme: self.scheme,
        }
    }

    /// Graphviz text. Folded nodes are not drawn: the edge into a folded
    /// node points at its fold target instead, dashed for back edges and
    /// dotted for cross edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph solution_graph {\n");
        out.push_str("  node [fontname=\"monospace\"];\n");
        for n in &self.nodes {
            let (shape, style, text) = match n.kind {
                NodeKind::Folded => continue,
                NodeKind::Internal => ("box", None, dot_label(&n.label)),
                NodeKind::Open => ("box", Some("dotted"), dot_label(&n.label)),
                NodeKind::TLeaf => ("doublecircle", None, "T".to_string()),
                NodeKind::FLeaf => ("octagon", None, "F".to_string()),
            };
            let _ = write!(out, "  n{} [shape={shape}", n.id);
            if let Some(style) = style {
                let _ = write!(out, ", style={style}");
            }
            let _ = writeln!(out, ", label=\"{text}\"];");
        }
        for e in &self.tree_edges {
            let target = &self.nodes[e.to];
            let label = escape(&e.narrowing.to_string());
            match target.folds_to {
                None => {
                    let _ = writeln!(out, "  n{} -> n{} [label=\"{label}\"];", e.from, e.to);
                }
                Some(t) => {
                    let style = if self.back_edges.iter().any(|l| l.from == e.to) {
                        "dashed"
                    } else {
                        "dotted"
                    };
                    let _ = writeln!(
                        out,
                        "  n{} -> n{t} [label=\"{label}\", style={style}];",
                        e.from
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot_label(label: &SystemState) -> String {
    match label {
        SystemState::Eqs(eqs) => eqs
            .iter()
            .map(|e| escape(&e.to_string()))
            .collect::<Vec<_>>()
            .join("\\n"),
        other => escape(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(eqs: &[(&str, &str)]) -> Vec<Equation> {
        eqs.iter()
            .map(|(l, r)| Equation::parse(l, r).unwrap())
            .collect()
    }

    #[test]
    fn builds_the_axy_graph() {
        let out = build(&sys(&[("Axy", "xyA")]), Scheme::Base, Budget::default()).unwrap();
        let g = &out.graph;
        assert_eq!(out.status, BuildStatus::Complete);
        assert_eq!(g.count_kind(NodeKind::Internal), 2);
        assert_eq!(g.count_kind(NodeKind::TLeaf), 1);
        assert_eq!(g.back_edges.len(), 2);
        assert!(g
            .back_edges
            .iter()
            .all(|l| l.to == g.root || g.node(l.to).parent == Some(g.root)));
        assert_eq!(verdict(&out), Verdict::Sat);
        g.check_invariants().unwrap();
    }

    #[test]
    fn count_scheme_refutes_at_the_root() {
        let out = build(
            &sys(&[("xxAyBz", "Axxzy")]),
            Scheme::Count,
            Budget::default(),
        )
        .unwrap();
        assert_eq!(out.graph.len(), 1);
        assert_eq!(out.graph.node(0).kind, NodeKind::FLeaf);
        assert_eq!(verdict(&out), Verdict::Unsat);
    }

    #[test]
    fn base_scheme_runs_out_of_budget() {
        let budget = Budget::new(1000, 10_000).unwrap();
        let out = build(&sys(&[("xxAyBz", "Axxzy")]), Scheme::Base, budget).unwrap();
        assert_eq!(
            out.status,
            BuildStatus::BudgetExhausted(Exhaustion::NodeLimit)
        );
        assert_eq!(verdict(&out), Verdict::Unknown(Exhaustion::NodeLimit));
        out.graph.check_invariants().unwrap();
    }

    #[test]
    fn depth_limit_leaves_open_nodes() {
        let budget = Budget::new(1000, 3).unwrap();
        let out = build(&sys(&[("xxAyBz", "Axxzy")]), Scheme::Base, budget).unwrap();
        assert_eq!(
            out.status,
            BuildStatus::BudgetExhausted(Exhaustion::DepthLimit)
        );
        assert!(out.graph.count_kind(NodeKind::Open) > 0);
        assert!(out.graph.nodes.iter().all(|n| n.depth <= 3));
    }

    #[test]
    fn rejects_bad_budgets_and_inputs() {
        assert_eq!(Budget::new(0, 1), Err(Error::InvalidBudget));
        assert_eq!(Budget::new(1, 0), Err(Error::InvalidBudget));
        assert!(build(&[], Scheme::Split, Budget::default()).is_err());
        assert!(build(
            &sys(&[("x", "A"), ("y", "B")]),
            Scheme::Base,
            Budget::default()
        )
        .is_err());
    }

    #[test]
    fn early_stop_keeps_sat() {
        let system = sys(&[("xAy", "yAx")]);
        let opts = BuildOptions {
            early_stop: true,
            ..BuildOptions::new(Scheme::Base)
        };
        let out = build_with(&system, opts).unwrap();
        assert_eq!(verdict(&out), Verdict::Sat);
    }

    #[test]
    fn memo_mode_preserves_verdicts() {
        for (l, r) in [
            ("xAy", "yAx"),
            ("ABxxyy", "xxyyBA"),
            ("xy", "yx"),
            ("xAB", "Bx"),
        ] {
            for scheme in [Scheme::Split, Scheme::Count] {
                let system = sys(&[(l, r)]);
                let plain = build(&system, scheme, Budget::new(20_000, 1000).unwrap()).unwrap();
                let memo = build_with(
                    &system,
                    BuildOptions {
                        fold: FoldMode::Memo,
                        budget: Budget::new(20_000, 1000).unwrap(),
                        ..BuildOptions::new(scheme)
                    },
                )
                .unwrap();
                assert_eq!(verdict(&plain), verdict(&memo), "{l}={r} {scheme}");
                memo.graph.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn renders_single_node_graphs() {
        let out = build(&sys(&[("AB", "AB")]), Scheme::Base, Budget::default()).unwrap();
        let dot = out.graph.to_dot();
        assert!(dot.contains("n0 [shape=doublecircle, label=\"T\"]"));
        assert_eq!(dot.matches("shape=").count(), 1);

        let out = build(&sys(&[("A", "B")]), Scheme::Base, Budget::default()).unwrap();
        let dot = out.graph.to_dot();
        assert!(dot.contains("n0 [shape=octagon, label=\"F\"]"));
    }

    #[test]
    fn prunes_dead_branches() {
        let out = build(
            &sys(&[("xA", "Ax"), ("xB", "Bx")]),
            Scheme::Split,
            Budget::default(),
        )
        .unwrap();
        let pruned = out.graph.pruned();
        assert!(pruned.len() < out.graph.len());
        assert!(pruned.nodes.iter().all(|n| n.kind != NodeKind::FLeaf));
        pruned.check_invariants().unwrap();

        let unsat = build(&sys(&[("A", "B")]), Scheme::Base, Budget::default()).unwrap();
        assert_eq!(unsat.graph.pruned().len(), 1);
    }
}
