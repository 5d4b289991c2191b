//! Machine-readable form of a deduction tree.
//!
//! ```json
//! {"input":"x (r | -r) y",
//!  "nodes":[{"id":0,"parent":null,"children":[1],"rule":null,"premise":null,"var":null,
//!            "formulas":["x (r | -r) y"],"closed":false}, ...]}
//! ```
//!
//! `rule` is one of `or`, `and`, `not-or`, `not-and`, `not-not`, `not-comp`,
//! `not-comp-a`, `not-comp-b`, `comp-a`, `comp-b`; `premise` is the formula
//! the rule was applied to and `var` the variable it introduced or
//! instantiated. Node ids are creation order, so a parent always precedes
//! its children.

use serde::Serialize;

use super::{DeductionTree, Node, RuleTag};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeExport {
    pub input: String,
    pub nodes: Vec<NodeExport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeExport {
    pub id: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub rule: Option<RuleTag>,
    pub premise: Option<String>,
    pub var: Option<String>,
    pub formulas: Vec<String>,
    pub closed: bool,
}

impl From<&Node> for NodeExport {
    fn from(n: &Node) -> Self {
        NodeExport {
            id: n.id,
            parent: n.parent,
            children: n.children.clone(),
            rule: n.rule,
            premise: n.premise.as_ref().map(|p| p.to_string()),
            var: n.var.as_ref().map(|v| v.to_string()),
            formulas: n.formulas.iter().map(|f| f.to_string()).collect(),
            closed: n.closed,
        }
    }
}

impl From<&DeductionTree> for TreeExport {
    fn from(t: &DeductionTree) -> Self {
        TreeExport {
            input: t.input.to_string(),
            nodes: t.nodes.iter().map(NodeExport::from).collect(),
        }
    }
}

pub fn tree_to_json(t: &DeductionTree) -> serde_json::Value {
    serde_json::to_value(TreeExport::from(t)).expect("tree serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_procedure, Limits};
    use crate::relterm::parse_term;

    #[test]
    fn excluded_middle_tree() {
        let rep = run_procedure(&parse_term("r | -r").unwrap(), &Limits::default()).unwrap();
        let v = tree_to_json(&rep.tree);
        assert_eq!(v["input"], "x (r | -r) y");
        assert_eq!(v["nodes"][0]["children"], serde_json::json!([1]));
        assert_eq!(v["nodes"][1]["rule"], "or");
        assert_eq!(v["nodes"][1]["premise"], "x (r | -r) y");
        assert_eq!(v["nodes"][1]["formulas"], serde_json::json!(["x r y", "x -r y"]));
        assert_eq!(v["nodes"][1]["closed"], true);
    }
}
