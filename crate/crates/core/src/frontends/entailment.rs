use thiserror::Error;

use crate::relterm::{fragment_check, nf_cmpl, simplify_ones, FragmentClause, FragmentVerdict, Rejection, RelTerm};

/// `R1 ≡ 1, …, Rn ≡ 1` entail `R ≡ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentProblem {
    pub premises: Vec<RelTerm>,
    pub conclusion: RelTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("an entailment needs at least one premise")]
    EmptyPremises,
    #[error("encoded entailment leaves the decidable fragment: {0}")]
    FragmentViolation(Rejection),
}

/// The term `(1 ; (nf(-(R1 & … & Rn)) ; 1)) | R`, valid exactly when the
/// premises entail the conclusion. Fails unless the complemented premises
/// normalize to a plain Boolean term.
pub fn encode_entailment(p: &EntailmentProblem) -> Result<RelTerm, EncodeError> {
    let mut rest = p.premises.iter().rev().cloned();
    let last = rest.next().ok_or(EncodeError::EmptyPremises)?;
    let all = rest.fold(last, |acc, r| RelTerm::inter(r, acc));
    let violation = |subterm: RelTerm| {
        EncodeError::FragmentViolation(Rejection {
            subterm,
            clause: FragmentClause::CompositionLeft,
        })
    };
    let negated = nf_cmpl(&RelTerm::cmpl(all.clone())).map_err(|_| violation(all))?;
    let negated = simplify_ones(&negated);
    if !negated.is_plain_boolean() {
        return Err(violation(negated));
    }
    let encoded = RelTerm::union(
        RelTerm::comp(RelTerm::One, RelTerm::comp(negated, RelTerm::One)),
        p.conclusion.clone(),
    );
    let encoded = simplify_ones(&encoded);
    match fragment_check(&encoded) {
        FragmentVerdict::Accept => Ok(encoded),
        FragmentVerdict::Reject(r) => Err(EncodeError::FragmentViolation(r)),
    }
}
