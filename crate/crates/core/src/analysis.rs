//! Qualitative fault tree analysis: minimal cut sets and the comparison of
//! two CFT projects by their cut-set families.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cft::{
    flatten, CftProject, ClassicFaultTree, FailureModeRef, FlattenError, GateKind, TreeNode,
};

/// A set of basic events whose joint occurrence causes the top event.
pub type CutSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("fault tree is not coherent: contains a {0} gate")]
    NonCoherentTree(GateKind),
    #[error(transparent)]
    Flatten(#[from] FlattenError),
}

/// Orders cut sets by size, then lexicographically.
pub fn sort_cut_sets(sets: &mut [CutSet]) {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// Drops every set that is a superset of another set in the family, and
/// duplicates. The result is sorted by [`sort_cut_sets`].
pub fn minimize<T: Ord + Clone>(family: impl IntoIterator<Item = BTreeSet<T>>) -> Vec<BTreeSet<T>> {
    let mut all: Vec<BTreeSet<T>> = family
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<BTreeSet<T>> = Vec::new();
    for s in all {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept
}

/// Computes the minimal cut sets of a coherent tree by top-down expansion:
/// starting from the top event, gates in a partial cut set are replaced by
/// their inputs (AND) or split into one partial set per input (OR), until
/// only basic events remain. Constant-false leaves kill the partial set
/// they appear in. Absorption runs on partial sets as the expansion goes.
pub fn minimal_cut_sets(tree: &ClassicFaultTree) -> Result<Vec<CutSet>, AnalysisError> {
    for n in &tree.nodes {
        if let TreeNode::Gate {
            kind: k @ (GateKind::Not | GateKind::Xor),
            ..
        } = n
        {
            return Err(AnalysisError::NonCoherentTree(*k));
        }
    }

    let mut pending: Vec<BTreeSet<usize>> = Vec::new();
    if !matches!(tree.nodes[tree.top], TreeNode::False) {
        pending.push(BTreeSet::from([tree.top]));
    }
    let mut done: Vec<BTreeSet<usize>> = Vec::new();
    // expand gates with the highest index first: parents precede children
    while !pending.is_empty() {
        let mut next = Vec::new();
        for row in pending {
            let gate = row
                .iter()
                .rev()
                .copied()
                .find(|&i| matches!(tree.nodes[i], TreeNode::Gate { .. }));
            let Some(g) = gate else {
                done.push(row);
                continue;
            };
            let TreeNode::Gate { kind, inputs } = &tree.nodes[g] else {
                unreachable!()
            };
            let mut rest = row;
            rest.remove(&g);
            match kind {
                GateKind::And => {
                    if inputs
                        .iter()
                        .any(|&i| matches!(tree.nodes[i], TreeNode::False))
                    {
                        continue;
                    }
                    rest.extend(inputs.iter().copied());
                    next.push(rest);
                }
                _ => {
                    for &i in inputs {
                        if matches!(tree.nodes[i], TreeNode::False) {
                            continue;
                        }
                        let mut r = rest.clone();
                        r.insert(i);
                        next.push(r);
                    }
                }
            }
        }
        // a partial set absorbs its supersets: every expansion of the
        // superset contains an expansion of the subset
        next.append(&mut done);
        let minimal = minimize(next);
        let (finished, open): (Vec<_>, Vec<_>) = minimal.into_iter().partition(|r| {
            r.iter()
                .all(|&i| matches!(tree.nodes[i], TreeNode::BasicEvent(_)))
        });
        done = finished;
        pending = open;
    }

    let named = done.into_iter().map(|row| {
        row.into_iter()
            .map(|i| match &tree.nodes[i] {
                TreeNode::BasicEvent(b) => b.clone(),
                _ => unreachable!("finished rows hold only basic events"),
            })
            .collect::<CutSet>()
    });
    Ok(minimize(named))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// Every cut set of B contains a cut set of A: A raises the top event
    /// whenever B does, so A is at least as pessimistic as B.
    AImpliesB,
    /// Every cut set of A contains a cut set of B: B is at least as
    /// pessimistic as A.
    BImpliesA,
    Incomparable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::AImpliesB => "A-implies-B",
            Verdict::BImpliesA => "B-implies-A",
            Verdict::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopComparison {
    pub top: FailureModeRef,
    pub verdict: Verdict,
    pub cut_sets_a: Vec<CutSet>,
    pub cut_sets_b: Vec<CutSet>,
    /// Cut sets of A missing from B, at most `witness_limit` of them.
    pub only_in_a: Vec<CutSet>,
    pub only_in_b: Vec<CutSet>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructuralDelta {
    pub elements_only_in_a: Vec<String>,
    pub elements_only_in_b: Vec<String>,
    pub ports_only_in_a: Vec<String>,
    pub ports_only_in_b: Vec<String>,
    pub failure_modes_only_in_a: Vec<String>,
    pub failure_modes_only_in_b: Vec<String>,
}

impl StructuralDelta {
    pub fn is_empty(&self) -> bool {
        self.elements_only_in_a.is_empty()
            && self.elements_only_in_b.is_empty()
            && self.ports_only_in_a.is_empty()
            && self.ports_only_in_b.is_empty()
            && self.failure_modes_only_in_a.is_empty()
            && self.failure_modes_only_in_b.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub tops: Vec<TopComparison>,
    pub structure: StructuralDelta,
}

impl DiffReport {
    pub fn all_equivalent(&self) -> bool {
        self.tops.iter().all(|t| t.verdict == Verdict::Equivalent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffOptions {
    pub witness_limit: usize,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self { witness_limit: 5 }
    }
}

fn covers(sets: &[CutSet], by: &[CutSet]) -> bool {
    sets.iter().all(|s| by.iter().any(|b| b.is_subset(s)))
}

/// Classifies how two cut-set families relate.
pub fn classify(a: &[CutSet], b: &[CutSet]) -> Verdict {
    if a == b {
        Verdict::Equivalent
    } else if covers(a, b) {
        Verdict::BImpliesA
    } else if covers(b, a) {
        Verdict::AImpliesB
    } else {
        Verdict::Incomparable
    }
}

fn structural_delta(a: &CftProject, b: &CftProject) -> StructuralDelta {
    fn split(a: BTreeSet<String>, b: BTreeSet<String>) -> (Vec<String>, Vec<String>) {
        (
            a.difference(&b).cloned().collect(),
            b.difference(&a).cloned().collect(),
        )
    }
    let elements = |p: &CftProject| {
        p.elements
            .iter()
            .map(|e| e.component.clone())
            .collect::<BTreeSet<_>>()
    };
    let ports = |p: &CftProject| {
        p.elements
            .iter()
            .flat_map(|e| {
                e.inports
                    .iter()
                    .map(move |x| alloc::format!("{}/{} (in)", e.component, x.name))
                    .chain(
                        e.outports
                            .iter()
                            .map(move |x| alloc::format!("{}/{} (out)", e.component, x.name)),
                    )
            })
            .collect::<BTreeSet<_>>()
    };
    let fms = |p: &CftProject| {
        p.elements
            .iter()
            .flat_map(|e| {
                e.input_failure_modes
                    .iter()
                    .chain(&e.output_failure_modes)
                    .map(move |f| alloc::format!("{}/{}/{}", e.component, f.port, f.failure_type))
            })
            .collect::<BTreeSet<_>>()
    };
    let (elements_only_in_a, elements_only_in_b) = split(elements(a), elements(b));
    let (ports_only_in_a, ports_only_in_b) = split(ports(a), ports(b));
    let (failure_modes_only_in_a, failure_modes_only_in_b) = split(fms(a), fms(b));
    StructuralDelta {
        elements_only_in_a,
        elements_only_in_b,
        ports_only_in_a,
        ports_only_in_b,
        failure_modes_only_in_a,
        failure_modes_only_in_b,
    }
}

/// Compares two projects top event by top event.
pub fn diff(
    a: &CftProject,
    b: &CftProject,
    tops: &[FailureModeRef],
    opts: &DiffOptions,
) -> Result<DiffReport, AnalysisError> {
    let mut out = Vec::with_capacity(tops.len());
    for top in tops {
        let cut_sets_a = minimal_cut_sets(&flatten(a, top)?)?;
        let cut_sets_b = minimal_cut_sets(&flatten(b, top)?)?;
        let verdict = classify(&cut_sets_a, &cut_sets_b);
        let only = |x: &[CutSet], y: &[CutSet]| {
            x.iter()
                .filter(|s| !y.contains(s))
                .take(opts.witness_limit)
                .cloned()
                .collect::<Vec<_>>()
        };
        out.push(TopComparison {
            top: top.clone(),
            verdict,
            only_in_a: only(&cut_sets_a, &cut_sets_b),
            only_in_b: only(&cut_sets_b, &cut_sets_a),
            cut_sets_a,
            cut_sets_b,
        });
    }
    Ok(DiffReport {
        tops: out,
        structure: structural_delta(a, b),
    })
}

/// Output failure modes present in both projects and driven in at least
/// one of them, in A's order. Failure modes without a driver on either side
/// are constant false and carry no comparison.
pub fn shared_tops(a: &CftProject, b: &CftProject) -> Vec<FailureModeRef> {
    let driven = |p: &CftProject, t: &FailureModeRef| {
        p.element(&t.component).is_some_and(|e| {
            e.driver(&crate::cft::failure_mode_id(
                &t.component,
                &t.port,
                t.failure_type,
            ))
            .is_some()
        })
    };
    let in_b: BTreeSet<FailureModeRef> = b.output_failure_modes().collect();
    a.output_failure_modes()
        .filter(|t| in_b.contains(t) && (driven(a, t) || driven(b, t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn cs(items: &[&str]) -> CutSet {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn tree(nodes: Vec<TreeNode>) -> ClassicFaultTree {
        let top = nodes.len() - 1;
        ClassicFaultTree { nodes, top }
    }

    fn be(n: &str) -> TreeNode {
        TreeNode::BasicEvent(n.into())
    }

    #[test]
    fn single_basic_event() {
        let t = tree(vec![be("x")]);
        assert_eq!(minimal_cut_sets(&t).unwrap(), [cs(&["x"])]);
    }

    #[test]
    fn and_of_or_with_shared_event() {
        // (a OR b) AND (a OR c) = a OR (b AND c)
        let t = tree(vec![
            be("a"),
            be("b"),
            be("c"),
            TreeNode::Gate {
                kind: GateKind::Or,
                inputs: vec![0, 1],
            },
            TreeNode::Gate {
                kind: GateKind::Or,
                inputs: vec![0, 2],
            },
            TreeNode::Gate {
                kind: GateKind::And,
                inputs: vec![3, 4],
            },
        ]);
        assert_eq!(minimal_cut_sets(&t).unwrap(), [cs(&["a"]), cs(&["b", "c"])]);
    }

    #[test]
    fn false_leaves_simplify() {
        let t = tree(vec![
            be("a"),
            TreeNode::False,
            be("b"),
            TreeNode::Gate {
                kind: GateKind::And,
                inputs: vec![0, 1],
            },
            TreeNode::Gate {
                kind: GateKind::Or,
                inputs: vec![3, 2, 1],
            },
        ]);
        assert_eq!(minimal_cut_sets(&t).unwrap(), [cs(&["b"])]);
        assert!(minimal_cut_sets(&tree(vec![TreeNode::False]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn non_coherent_tree_rejected() {
        let t = tree(vec![
            be("a"),
            TreeNode::Gate {
                kind: GateKind::Not,
                inputs: vec![0],
            },
        ]);
        assert_eq!(
            minimal_cut_sets(&t),
            Err(AnalysisError::NonCoherentTree(GateKind::Not))
        );
    }

    #[test]
    fn classification() {
        let a = vec![cs(&["x", "y"]), cs(&["x", "z"])];
        let b = vec![cs(&["x"]), cs(&["y"]), cs(&["z"])];
        assert_eq!(classify(&a, &a), Verdict::Equivalent);
        assert_eq!(classify(&a, &b), Verdict::BImpliesA);
        assert_eq!(classify(&b, &a), Verdict::AImpliesB);
        assert_eq!(
            classify(&[cs(&["p"])], &[cs(&["q"])]),
            Verdict::Incomparable
        );
    }

    #[test]
    fn minimize_removes_supersets_and_duplicates() {
        let m = minimize(vec![
            cs(&["a", "b"]),
            cs(&["a"]),
            cs(&["a"]),
            cs(&["c", "d"]),
        ]);
        assert_eq!(m, [cs(&["a"]), cs(&["c", "d"])]);
    }
}
