//! Certificate documents: a versioned JSON record holding the certificate
//! and the transcript of its verification.

use serde::{Deserialize, Serialize};

use crate::classify::{verify_certificate, Certificate};
use crate::error::{Error, Result};
use crate::foliation::Foliation;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub version: u32,
    pub certificate: Certificate,
    /// `ok: <identity>` or `fail: <identity>: <detail>` lines.
    pub transcript: Vec<String>,
}

impl CertificateDocument {
    /// Verifies `c` against `f` and records the transcript.
    pub fn new(c: Certificate, f: &Foliation) -> CertificateDocument {
        let transcript = verify_certificate(&c, f).transcript();
        CertificateDocument {
            version: FORMAT_VERSION,
            certificate: c,
            transcript,
        }
    }

    pub fn passed(&self) -> bool {
        !self.transcript.is_empty() && self.transcript.iter().all(|l| l.starts_with("ok: "))
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<CertificateDocument> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::Certificate(format!("unsupported version {}", doc.version)));
        }
        Ok(doc)
    }
}

/// Writes the document for `c` to `path` and returns it.
pub fn emit_certificate(c: &Certificate, f: &Foliation, path: &std::path::Path) -> Result<CertificateDocument> {
    let doc = CertificateDocument::new(c.clone(), f);
    std::fs::write(path, doc.to_text()).map_err(|e| Error::Io(e.to_string()))?;
    Ok(doc)
}
