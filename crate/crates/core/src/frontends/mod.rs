//! Problems that reduce to validity of a single fragment term: entailments
//! between relational identities and multi-modal K formulas.

mod entailment;
mod kripke;
mod modal;

pub use entailment::{encode_entailment, EncodeError, EntailmentProblem};
pub use kripke::{kripke_countermodel, kripke_countermodel_with, KripkeModel, DEFAULT_KRIPKE_BUDGET};
pub use modal::{parse_modal, translate_modal, ModalError, ModalFormula};
