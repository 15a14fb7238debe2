//! Shared-subterm derivation trees.
//!
//! A [`TermArena`] stores one node per derived object: either a generator or
//! the application of a basic operation to previously derived nodes. Closure
//! computations keep node index `i` aligned with the `i`-th discovered tuple,
//! so a node id doubles as a derivation handle.

use crate::algebra::op::OpTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermNode {
    Gen(usize),
    App { op: usize, args: Vec<usize> },
}

#[derive(Clone, Debug, Default)]
pub struct TermArena {
    nodes: Vec<TermNode>,
}

impl TermArena {
    pub fn new() -> Self {
        TermArena { nodes: Vec::new() }
    }

    pub fn push(&mut self, node: TermNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn node(&self, id: usize) -> &TermNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Evaluate the dag rooted at `root` with generator `g` valued as
    /// `gen_value(g)`, memoizing shared subterms.
    pub fn eval(
        &self,
        root: usize,
        ops: &[OpTable],
        gen_value: &mut dyn FnMut(usize) -> usize,
    ) -> usize {
        let mut memo: Vec<Option<usize>> = vec![None; self.nodes.len()];
        self.eval_memo(root, ops, gen_value, &mut memo)
    }

    fn eval_memo(
        &self,
        id: usize,
        ops: &[OpTable],
        gen_value: &mut dyn FnMut(usize) -> usize,
        memo: &mut Vec<Option<usize>>,
    ) -> usize {
        if let Some(v) = memo[id] {
            return v;
        }
        let v = match &self.nodes[id] {
            TermNode::Gen(g) => gen_value(*g),
            TermNode::App { op, args } => {
                let vals: Vec<usize> = args
                    .iter()
                    .map(|&a| self.eval_memo(a, ops, gen_value, memo))
                    .collect();
                ops[*op].apply(&vals)
            }
        };
        memo[id] = Some(v);
        v
    }

    /// Evaluate coordinatewise over generator tuples; the result is the tuple
    /// the rooted derivation reconstructs.
    pub fn eval_tuple(&self, root: usize, ops: &[OpTable], gen_tuples: &[Vec<usize>]) -> Vec<usize> {
        let arity = gen_tuples.first().map_or(0, |t| t.len());
        (0..arity)
            .map(|c| self.eval(root, ops, &mut |g| gen_tuples[g][c]))
            .collect()
    }

    /// Prefix-notation rendering; sharing is expanded.
    pub fn render(&self, root: usize, op_names: &[String], gen_names: &[String]) -> String {
        match &self.nodes[root] {
            TermNode::Gen(g) => gen_names[*g].clone(),
            TermNode::App { op, args } => {
                let inner: Vec<String> = args
                    .iter()
                    .map(|&a| self.render(a, op_names, gen_names))
                    .collect();
                format!("{}({})", op_names[*op], inner.join(", "))
            }
        }
    }
}
