//! Verification reports: {identity, params, trunc, status, first_mismatch?}.

use serde::Serialize;

/// The first differing cell of a failed character comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub coords: Vec<i64>,
    pub grade: u32,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Mismatch,
}

/// Outcome of one identity verification run.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: serde_json::Value,
    pub trunc: u32,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IdentityReport {
    pub fn new(
        identity: &str,
        params: serde_json::Value,
        trunc: u32,
        mismatch: Option<Mismatch>,
    ) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            params,
            trunc,
            status: if mismatch.is_none() {
                Status::Verified
            } else {
                Status::Mismatch
            },
            first_mismatch: mismatch,
            detail: None,
        }
    }

    pub fn verified(identity: &str, params: serde_json::Value, trunc: u32) -> Self {
        IdentityReport::new(identity, params, trunc, None)
    }

    pub fn failed_with_detail(
        identity: &str,
        params: serde_json::Value,
        trunc: u32,
        detail: String,
    ) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            params,
            trunc,
            status: Status::Mismatch,
            first_mismatch: None,
            detail: Some(detail),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}
