//! Distributed knowledge-how: formulas, models, model checking with
//! strategy synthesis, a Hilbert-style proof checker, and a randomized
//! soundness harness.
//!
//! ```
//! use dkh::{parse_formula, Model, ModelChecker};
//!
//! let model = Model::from_json(r#"{
//!     "agents": 2,
//!     "states": ["start", "done"],
//!     "valuation": {"goal": ["done"]},
//!     "actions": [
//!         {"name": "push", "owner": [0], "moves": [["start", "done"]]},
//!         {"name": "pull", "owner": [1], "moves": [["start", "done"], ["start", "start"]]}
//!     ]
//! }"#).unwrap();
//! let f = parse_formula("Kh{0} goal & ~Kh{1} goal").unwrap();
//! let start = model.state_id("start").unwrap();
//! assert!(ModelChecker::new(&model).holds_at(&f, start).unwrap());
//! ```

pub mod actions;
pub mod formula;
pub mod harness;
pub mod model;
pub mod parser;
pub mod proof;
pub mod semantics;
pub mod states;
pub mod template;

pub use actions::{ActionLimits, CapExceeded, JointAction, NestedAction};
pub use formula::{AgentId, Formula, Group};
pub use model::{EquivClass, Model, ModelDoc, ModelError};
pub use parser::{parse_formula, parse_template, ParseError};
pub use semantics::{eval, CheckError, Evaluate, ModelChecker, Strategy, StrategyVerdict};
pub use states::{StateId, StateSet};
