//! Finite operation tables and the machinery built on them: compatibility
//! with relations, star powers, subpower closure with derivation tracking,
//! and Taylor system search.

pub mod closure;
pub mod op;
pub mod star;
pub mod taylor;

pub use closure::{loop_oracle, subpower_closure, Closure, LoopWitness, DEFAULT_CLOSURE_BUDGET};
pub use op::{is_compatible, is_idempotent, OpTable, Relation};
pub use star::{star_power_eval, star_power_eval_folded, star_power_eval_with, StarSubstitution};
pub use taylor::{find_taylor_system, TaylorRow, TaylorSystem, VarSym};
