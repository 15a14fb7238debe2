//! Double loops: the local free algebra on two generators, the 12-generator
//! quadruple relation, and extraction of a term satisfying the double loop
//! equations locally on a set `X`.
//!
//! Elements of the free algebra are binary operations `X^2 -> A` expressible
//! by terms, identified extensionally by their value tables; the generators
//! are the two projections `x` and `y`. The quadruple relation `Q` is the
//! closure of the 12 quadruples over `{x, y}` that differ in the first or
//! the second pair, ordered lexicographically with `x < y`. A double loop is
//! an element of the form `[a, a, b, b]`, and its derivation, read as a
//! 12-variable term `d`, satisfies
//!
//! ```text
//! d(xx, xxxx, yyyy, yy) = d(xx, yyyy, xxxx, yy)
//! d(xy, xxyy, xxyy, xy) = d(yx, xyxy, xyxy, yx)
//! ```
//!
//! for every choice of `x, y` from `X`.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::closure::subpower_closure;
use crate::algebra::op::OpTable;
use crate::algebra::taylor::{TaylorSystem, VarSym};
use crate::error::{Error, Result};
use crate::term::TermArena;

/// The local free algebra on two generators: all binary operations
/// `X^2 -> A` expressible by terms, with derivations.
pub struct FreeAlgebra {
    x_set: Vec<usize>,
    domain: usize,
    elements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    arena: TermArena,
    x: usize,
    y: usize,
}

impl FreeAlgebra {
    pub fn x_set(&self) -> &[usize] {
        &self.x_set
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element tables in discovery order; entry `(z0, z1)` of a table sits
    /// at rank `z0 * |X| + z1` over the sorted `X`.
    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn position(&self, table: &[usize]) -> Option<usize> {
        self.index.get(table).copied()
    }

    pub fn derivations(&self) -> &TermArena {
        &self.arena
    }

    /// Index of the first projection.
    pub fn x(&self) -> usize {
        self.x
    }

    /// Index of the second projection.
    pub fn y(&self) -> usize {
        self.y
    }
}

/// Close the two projections under the basic operations, pointwise on `X^2`.
pub fn local_free_algebra(
    ops: &[OpTable],
    x_set: &[usize],
    max_tuples: usize,
) -> Result<FreeAlgebra> {
    if ops.is_empty() {
        return Err(Error::InvalidParams("algebra needs at least one operation".into()));
    }
    let domain = ops[0].domain();
    if x_set.is_empty() {
        return Err(Error::InvalidParams("X must be nonempty".into()));
    }
    if let Some(&bad) = x_set.iter().find(|&&v| v >= domain) {
        return Err(Error::DomainMismatch {
            expected: domain,
            found: bad,
        });
    }
    let mut x_sorted = x_set.to_vec();
    x_sorted.sort_unstable();
    x_sorted.dedup();

    let points: Vec<(usize, usize)> = x_sorted
        .iter()
        .flat_map(|&z0| x_sorted.iter().map(move |&z1| (z0, z1)))
        .collect();
    let proj_x: Vec<usize> = points.iter().map(|&(z0, _)| z0).collect();
    let proj_y: Vec<usize> = points.iter().map(|&(_, z1)| z1).collect();

    let closure = subpower_closure(ops, &[proj_x.clone(), proj_y.clone()], true, max_tuples)?;
    let x = closure.position(&proj_x).expect("generator present");
    let y = closure.position(&proj_y).expect("generator present");
    let elements = closure.tuples().to_vec();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let arena = closure.derivations().expect("tracking enabled").clone();
    Ok(FreeAlgebra {
        x_set: x_sorted,
        domain,
        elements,
        index,
        arena,
        x,
        y,
    })
}

/// The 12 symbol quadruples `[a0, a1, b0, b1]` over `{x, y}` with
/// `a0 != a1 or b0 != b1`, in lexicographic order with `x < y`.
pub fn quad_columns() -> Vec<[VarSym; 4]> {
    let syms = [VarSym::X, VarSym::Y];
    let mut out = Vec::with_capacity(12);
    for &a0 in &syms {
        for &a1 in &syms {
            for &b0 in &syms {
                for &b1 in &syms {
                    if a0 != a1 || b0 != b1 {
                        out.push([a0, a1, b0, b1]);
                    }
                }
            }
        }
    }
    debug_assert_eq!(out.len(), 12);
    out
}

/// The two double loop equations as row pairs of the 4 x 12 symbol matrix:
/// `(rows[0], rows[1])` and `(rows[2], rows[3])`.
pub fn double_loop_rows() -> [Vec<VarSym>; 4] {
    let columns = quad_columns();
    std::array::from_fn(|r| columns.iter().map(|c| c[r]).collect())
}

/// The quadruple relation: closure of the 12 generators in `F^4` under the
/// lifted operations.
pub struct QuadRelation {
    columns: Vec<[VarSym; 4]>,
    /// Closure generator index of each column (columns collapse when the
    /// two projections coincide, i.e. `|X| = 1`).
    column_gen: Vec<usize>,
    lifted: Vec<OpTable>,
    quads: Vec<Vec<usize>>,
    arena: TermArena,
    generator_count: usize,
}

impl QuadRelation {
    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn quads(&self) -> &[Vec<usize>] {
        &self.quads
    }

    pub fn columns(&self) -> &[[VarSym; 4]] {
        &self.columns
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn derivations(&self) -> &TermArena {
        &self.arena
    }

    pub fn lifted_ops(&self) -> &[OpTable] {
        &self.lifted
    }

    /// Representative column of each closure generator, in generator order.
    pub fn generator_columns(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.generator_count];
        for (col, &g) in self.column_gen.iter().enumerate() {
            if reps[g] == usize::MAX {
                reps[g] = col;
            }
        }
        reps
    }
}

/// Lift the basic operations to the free algebra and close the 12
/// generator quadruples coordinatewise.
pub fn generate_q(free: &FreeAlgebra, ops: &[OpTable], max_tuples: usize) -> Result<QuadRelation> {
    let lifted: Vec<OpTable> = ops
        .iter()
        .map(|op| {
            OpTable::from_fn(op.arity(), free.len(), |args| {
                let cells = free.elements()[0].len();
                let mut image = Vec::with_capacity(cells);
                let mut point_args = vec![0usize; op.arity()];
                for c in 0..cells {
                    for (slot, &e) in point_args.iter_mut().zip(args) {
                        *slot = free.elements()[e][c];
                    }
                    image.push(op.apply(&point_args));
                }
                free.position(&image)
                    .expect("free algebra is closed under its operations")
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let columns = quad_columns();
    let gens: Vec<Vec<usize>> = columns
        .iter()
        .map(|quad| {
            quad.iter()
                .map(|sym| sym.pick(free.x(), free.y()))
                .collect()
        })
        .collect();

    let closure = subpower_closure(&lifted, &gens, true, max_tuples)?;
    let column_gen: Vec<usize> = gens
        .iter()
        .map(|g| closure.position(g).expect("generator present"))
        .collect();
    Ok(QuadRelation {
        columns,
        column_gen,
        lifted,
        generator_count: closure.generator_count(),
        quads: closure.tuples().to_vec(),
        arena: closure.derivations().expect("tracking enabled").clone(),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DoubleLoop {
    pub a: usize,
    pub b: usize,
    /// Index of the witnessing quadruple (and of its derivation node).
    pub root: usize,
}

/// First quadruple of the form `[a, a, b, b]` in discovery order.
pub fn find_double_loop(q: &QuadRelation) -> Option<DoubleLoop> {
    q.quads
        .iter()
        .position(|t| t[0] == t[1] && t[2] == t[3])
        .map(|root| DoubleLoop {
            a: q.quads[root][0],
            b: q.quads[root][2],
            root,
        })
}

#[derive(Debug, Serialize)]
pub struct EquationCheck {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct DoubleLoopTerm {
    pub term: String,
    /// For each term variable, the symbol quadruple it stands for.
    pub legend: Vec<String>,
    pub equations: Vec<EquationCheck>,
    pub assignments_checked: usize,
    pub verified: bool,
}

fn row_display(row: &[VarSym]) -> String {
    // group columns by their first-pair pattern: runs of sizes 2, 4, 4, 2
    let letters: Vec<char> = row
        .iter()
        .map(|s| match s {
            VarSym::X => 'x',
            VarSym::Y => 'y',
        })
        .collect();
    let groups = [2usize, 4, 4, 2];
    let mut out = Vec::new();
    let mut at = 0;
    for g in groups {
        out.push(letters[at..at + g].iter().collect::<String>());
        at += g;
    }
    format!("d({})", out.join(", "))
}

/// Read the term behind a double loop and verify both equations by direct
/// evaluation in the base algebra over every assignment from `X^2`.
pub fn extract_double_loop_term(
    free: &FreeAlgebra,
    q: &QuadRelation,
    dl: &DoubleLoop,
    ops: &[OpTable],
) -> Result<DoubleLoopTerm> {
    // the derivation must reconstruct its quadruple over F
    let gens: Vec<Vec<usize>> = q.quads[..q.generator_count].to_vec();
    let replayed = q.arena.eval_tuple(dl.root, &q.lifted, &gens);
    if replayed != q.quads[dl.root] {
        return Err(Error::Inconsistency(
            "derivation does not re-evaluate to its quadruple".into(),
        ));
    }

    let reps = q.generator_columns();
    let rows = double_loop_rows();
    let mut equations = Vec::new();
    let mut assignments = 0usize;
    let mut verified = true;
    for pair in [(0usize, 1usize), (2, 3)] {
        let (ra, rb) = (&rows[pair.0], &rows[pair.1]);
        let mut holds = true;
        for &z0 in free.x_set() {
            for &z1 in free.x_set() {
                assignments += 1;
                let va = q.arena.eval(dl.root, ops, &mut |g| {
                    ra[reps[g]].pick(z0, z1)
                });
                let vb = q.arena.eval(dl.root, ops, &mut |g| {
                    rb[reps[g]].pick(z0, z1)
                });
                if va != vb {
                    holds = false;
                }
            }
        }
        verified &= holds;
        equations.push(EquationCheck {
            lhs: row_display(ra),
            rhs: row_display(rb),
            holds,
        });
    }

    let op_names: Vec<String> = if ops.len() == 1 {
        vec!["t".into()]
    } else {
        (0..ops.len()).map(|i| format!("t{i}")).collect()
    };
    let gen_names: Vec<String> = (0..q.generator_count).map(|g| format!("g{g}")).collect();
    let legend = reps
        .iter()
        .map(|&c| {
            q.columns[c]
                .iter()
                .map(|s| match s {
                    VarSym::X => 'x',
                    VarSym::Y => 'y',
                })
                .collect()
        })
        .collect();

    Ok(DoubleLoopTerm {
        term: q.arena.render(dl.root, &op_names, &gen_names),
        legend,
        equations,
        assignments_checked: assignments,
        verified,
    })
}

/// Symbolic terms for equation checking: variables or applications of an
/// assigned symbol.
#[derive(Clone, Debug)]
pub enum SymTerm {
    Var(usize),
    App(usize, Vec<SymTerm>),
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub lhs: SymTerm,
    pub rhs: SymTerm,
}

/// A term operation assigned to a symbol: a basic operation or a derived
/// term over the basic operations (generators read as argument slots).
pub enum TermOp {
    Basic(usize),
    Derived {
        arena: TermArena,
        root: usize,
        arity: usize,
    },
}

impl TermOp {
    fn arity(&self, ops: &[OpTable]) -> usize {
        match self {
            TermOp::Basic(i) => ops[*i].arity(),
            TermOp::Derived { arity, .. } => *arity,
        }
    }

    fn eval(&self, ops: &[OpTable], args: &[usize]) -> usize {
        match self {
            TermOp::Basic(i) => ops[*i].apply(args),
            TermOp::Derived { arena, root, .. } => arena.eval(*root, ops, &mut |g| args[g]),
        }
    }
}

fn sym_vars(term: &SymTerm, max: &mut usize) {
    match term {
        SymTerm::Var(v) => *max = (*max).max(*v + 1),
        SymTerm::App(_, args) => args.iter().for_each(|a| sym_vars(a, max)),
    }
}

fn eval_sym(
    term: &SymTerm,
    ops: &[OpTable],
    assigned: &[TermOp],
    vars: &[usize],
) -> Result<usize> {
    match term {
        SymTerm::Var(v) => Ok(vars[*v]),
        SymTerm::App(sym, args) => {
            let op = assigned
                .get(*sym)
                .ok_or_else(|| Error::InvalidParams(format!("unassigned symbol {sym}")))?;
            if op.arity(ops) != args.len() {
                return Err(Error::InvalidParams(format!(
                    "symbol {sym} has arity {}, applied to {} arguments",
                    op.arity(ops),
                    args.len()
                )));
            }
            let vals = args
                .iter()
                .map(|a| eval_sym(a, ops, assigned, vars))
                .collect::<Result<Vec<_>>>()?;
            Ok(op.eval(ops, &vals))
        }
    }
}

/// Do the equations hold for every choice of variables from `X`?
pub fn check_local_satisfaction(
    ops: &[OpTable],
    assigned: &[TermOp],
    equations: &[Equation],
    x_set: &[usize],
) -> Result<bool> {
    if x_set.is_empty() {
        return Err(Error::InvalidParams("X must be nonempty".into()));
    }
    for eq in equations {
        let mut var_count = 0usize;
        sym_vars(&eq.lhs, &mut var_count);
        sym_vars(&eq.rhs, &mut var_count);
        let mut pick = vec![0usize; var_count];
        loop {
            let vars: Vec<usize> = pick.iter().map(|&i| x_set[i]).collect();
            if eval_sym(&eq.lhs, ops, assigned, &vars)?
                != eval_sym(&eq.rhs, ops, assigned, &vars)?
            {
                return Ok(false);
            }
            let mut done = true;
            for j in (0..var_count).rev() {
                pick[j] += 1;
                if pick[j] < x_set.len() {
                    done = false;
                    break;
                }
                pick[j] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(true)
}

/// The `n + 1` equations of a Taylor system (rows plus idempotency when
/// required) as symbolic equations over symbol 0, variables `0 = x`, `1 = y`.
pub fn taylor_system_equations(system: &TaylorSystem) -> Vec<Equation> {
    let row_term = |pats: &[VarSym]| {
        SymTerm::App(
            0,
            pats.iter()
                .map(|p| SymTerm::Var(matches!(p, VarSym::Y) as usize))
                .collect(),
        )
    };
    let mut out: Vec<Equation> = system
        .rows
        .iter()
        .map(|row| Equation {
            lhs: row_term(&row.left),
            rhs: row_term(&row.right),
        })
        .collect();
    if system.idempotent_required {
        let n = system.arity();
        out.push(Equation {
            lhs: SymTerm::App(0, vec![SymTerm::Var(0); n]),
            rhs: SymTerm::Var(0),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::taylor::find_taylor_system;

    const BUDGET: usize = 100_000;

    #[test]
    fn free_algebra_of_majority_is_two_projections() {
        let maj = OpTable::majority3().unwrap();
        let f = local_free_algebra(&[maj], &[0, 1], BUDGET).unwrap();
        assert_eq!(f.len(), 2);
        assert_ne!(f.x(), f.y());
    }

    #[test]
    fn free_algebra_of_min_has_three_elements() {
        let min = OpTable::min_chain(2).unwrap();
        let f = local_free_algebra(&[min], &[0, 1], BUDGET).unwrap();
        assert_eq!(f.len(), 3);
        // tables over (z0, z1) in {00, 01, 10, 11}: x, y, min
        assert!(f.position(&[0, 0, 1, 1]).is_some());
        assert!(f.position(&[0, 1, 0, 1]).is_some());
        assert!(f.position(&[0, 0, 0, 1]).is_some());
    }

    #[test]
    fn free_algebra_on_singleton_x_is_one_constant() {
        let maj = OpTable::majority3().unwrap();
        let f = local_free_algebra(&[maj], &[1], BUDGET).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.x(), f.y());
    }

    #[test]
    fn projections_generate_only_the_twelve_quads() {
        let proj = OpTable::projection(0, 3, 2).unwrap();
        let f = local_free_algebra(&[proj.clone()], &[0, 1], BUDGET).unwrap();
        let q = generate_q(&f, &[proj], BUDGET).unwrap();
        assert_eq!(q.len(), 12);
        assert!(find_double_loop(&q).is_none());
    }

    #[test]
    fn majority_has_a_double_loop_with_verified_term() {
        let maj = OpTable::majority3().unwrap();
        let f = local_free_algebra(&[maj.clone()], &[0, 1], BUDGET).unwrap();
        let q = generate_q(&f, &[maj.clone()], BUDGET).unwrap();
        let dl = find_double_loop(&q).expect("majority yields a double loop");
        let term = extract_double_loop_term(&f, &q, &dl, &[maj]).unwrap();
        assert!(term.verified, "equations: {:?}", term.equations);
        assert_eq!(term.assignments_checked, 8);
    }

    #[test]
    fn min_chain_has_a_double_loop_with_verified_term() {
        let min = OpTable::min_chain(2).unwrap();
        let f = local_free_algebra(&[min.clone()], &[0, 1], BUDGET).unwrap();
        let q = generate_q(&f, &[min.clone()], BUDGET).unwrap();
        let dl = find_double_loop(&q).expect("min yields a double loop");
        let term = extract_double_loop_term(&f, &q, &dl, &[min]).unwrap();
        assert!(term.verified);
    }

    #[test]
    fn degenerate_x_gives_a_generator_level_double_loop() {
        let maj = OpTable::majority3().unwrap();
        let f = local_free_algebra(&[maj.clone()], &[0], BUDGET).unwrap();
        let q = generate_q(&f, &[maj.clone()], BUDGET).unwrap();
        let dl = find_double_loop(&q).expect("x = y collapses the generators");
        assert!(dl.root < q.generator_count());
        let term = extract_double_loop_term(&f, &q, &dl, &[maj]).unwrap();
        assert!(term.verified);
    }

    #[test]
    fn taylor_rows_transfer_to_the_free_algebra() {
        // if t satisfies a Taylor system locally on X, the same system holds
        // in the free algebra on {x, y}
        for op in [OpTable::majority3().unwrap(), OpTable::min_chain(2).unwrap()] {
            let x_set = vec![0, 1];
            let sys = find_taylor_system(&op, &x_set, true).unwrap().unwrap();
            let f = local_free_algebra(std::slice::from_ref(&op), &x_set, BUDGET).unwrap();
            let q = generate_q(&f, std::slice::from_ref(&op), BUDGET).unwrap();
            let lifted = &q.lifted_ops()[0];
            for row in &sys.rows {
                let args_l: Vec<usize> =
                    row.left.iter().map(|s| s.pick(f.x(), f.y())).collect();
                let args_r: Vec<usize> =
                    row.right.iter().map(|s| s.pick(f.x(), f.y())).collect();
                assert_eq!(lifted.apply(&args_l), lifted.apply(&args_r));
            }
        }
    }

    #[test]
    fn local_satisfaction_checker() {
        let maj = OpTable::majority3().unwrap();
        let sys = find_taylor_system(&maj, &[0, 1], true).unwrap().unwrap();
        let eqs = taylor_system_equations(&sys);
        assert_eq!(eqs.len(), 4);
        assert!(check_local_satisfaction(
            std::slice::from_ref(&maj),
            &[TermOp::Basic(0)],
            &eqs,
            &[0, 1]
        )
        .unwrap());

        // a Taylor row fails for the projection
        let proj = OpTable::projection(0, 3, 2).unwrap();
        assert!(!check_local_satisfaction(
            std::slice::from_ref(&proj),
            &[TermOp::Basic(0)],
            &eqs[..1],
            &[0, 1]
        )
        .unwrap());
    }
}
