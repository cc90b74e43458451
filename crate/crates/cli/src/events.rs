//! Event-record files: JSON with the exact field names of the benchmark
//! schema, dates in ISO-8601.

use std::path::Path;

use groupsim_core::model::{validate_event, EventRecord};

use crate::CliError;

/// Read and validate an event record.
pub fn load_event(path: &Path) -> Result<EventRecord, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(&format!("reading event {}", path.display()), e))?;
    let record: EventRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("malformed event {}: {e}", path.display())))?;
    validate_event(record).map_err(|e| CliError::Validation(e.to_string()))
}

/// Write an event record as pretty JSON.
pub fn save_event(event: &EventRecord, path: &Path) -> Result<(), CliError> {
    let json =
        serde_json::to_string_pretty(event).map_err(|e| CliError::Validation(e.to_string()))?;
    std::fs::write(path, json)
        .map_err(|e| CliError::io(&format!("writing event {}", path.display()), e))
}
