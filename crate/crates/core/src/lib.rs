//! A workbench for a residually finite Dehn monster.
//!
//! The relator set `R` is produced by diagonalizing over an enumeration of
//! counter-machine programs ([`foundry`], [`tracer`], [`machine`],
//! [`stream_parser`]). The graded algebra `A = F<X>/(R)` is studied through
//! its degree truncations ([`quotient`]), the Golod–Shafarevich series is
//! checked exactly ([`gs_series`]), and the group `G = [[H, A], [0, 1]]` is
//! realized in finite quotients ([`group`]).
//!
//! Nothing here decides whether `A` is infinite or algorithmically finite.
//! Finite runs only produce exact witnesses: negative series values,
//! positive graded dimensions, and separations in finite quotients.

pub mod error;
pub mod field;
pub mod foundry;
pub mod freealg;
pub mod group;
pub mod gs_series;
pub mod machine;
pub mod quotient;
pub mod stream_parser;
pub mod tracer;

pub use error::{Error, Result};
pub use field::{AlgebraConfig, FieldElement, PrimeField};
pub use foundry::{FoundryConfig, FoundryState, LedgerEntry, Source};
pub use freealg::{Alphabet, Degree, Polynomial, Word};
pub use group::{GroupContext, GroupElement};
pub use gs_series::{DegreeTally, Rational, Schedule};
pub use machine::{Instruction, Machine, OutputSymbol, Program, ProgramSpace};
pub use quotient::{Quotient, RelatorSet, TruncatedElement};
pub use stream_parser::{ParseState, TupleEvent};
pub use tracer::{TraceAction, TraceSession};
