//! Conversion of definite logic programs into chain form, and
//! deterministic metainterpreters that evaluate goals against it.
//!
//! A chain program has nonunit clauses of the shape
//! `p(X0,Xn) :- q1(X0,X1), ..., qn(X_{n-1},Xn)` and binary unit clauses.
//! [`transform::transform_moded`] handles moded programs and yields G-chain
//! programs, which evaluate by matching alone;
//! [`transform::transform_definite`] handles any definite program.
//!
//! ```
//! use chainform::chainir::{compile_to_registry, TransformMode};
//! use chainform::engines::{eval_abcde, Unification};
//! use chainform::syntax::{parse_goal, parse_program};
//! use chainform::transform::{compile_goal, transform_moded};
//!
//! let src = parse_program(
//!     ":- mode(s,[in,out,out]).\ns(L,nil,L).\ns([A|N],[A|L],M) :- s(N,L,M).",
//! ).unwrap();
//! let chain = transform_moded(&src).unwrap();
//! assert_eq!(chain.len(), 4);
//!
//! let reg = compile_to_registry(&chain).unwrap();
//! let goal = parse_goal("s([a,b],Y,Z)").unwrap();
//! let plan = compile_goal(&goal, &chain, TransformMode::Moded).unwrap();
//! let answers = eval_abcde(&plan.initial, &plan.continuations, &reg, Unification::Match).unwrap();
//! assert_eq!(answers.len(), 3);
//! ```

pub mod chainir;
pub mod engines;
pub mod forms;
pub mod oracle;
pub mod syntax;
pub mod terms;
pub mod transform;
