use std::fmt::Write;

use super::Lts;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("AUT needs exactly one initial state, found {0}")]
    InitialStates(usize),
    #[error("label {0:?} contains a line break, which AUT cannot represent")]
    MultilineLabel(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutExport {
    pub text: String,
    /// Information the format could not carry.
    pub warnings: Vec<String>,
}

/// Renders `l` in the Aldebaran format: `des (INIT, NTRANS, NSTATES)` then
/// one `(SRC,"LABEL",DST)` line per transition. Unlabeled transitions use
/// `tau`. Labels are written verbatim between the quotes; a reader finds
/// the label's end from the final `",`. Final states are dropped, with a
/// warning.
pub fn emit_aut(l: &Lts) -> Result<AutExport, AutError> {
    let init = l.single_initial().ok_or(AutError::InitialStates(l.initial.len()))?;
    let mut text = String::new();
    writeln!(text, "des ({init}, {}, {})", l.transitions.len(), l.num_states).unwrap();
    for t in &l.transitions {
        let label = t.label.as_deref().unwrap_or("tau");
        if label.contains(['\n', '\r']) {
            return Err(AutError::MultilineLabel(label.to_owned()));
        }
        writeln!(text, "({},\"{label}\",{})", t.source, t.target).unwrap();
    }
    let mut warnings = Vec::new();
    if !l.finals.is_empty() {
        warnings.push(format!(
            "AUT has no notion of final states; {} final state(s) not exported",
            l.finals.len()
        ));
    }
    Ok(AutExport { text, warnings })
}
