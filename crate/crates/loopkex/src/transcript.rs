//! Transcript files: one JSON object per protocol run with a fixed field
//! order, so identical runs produce identical bytes.

use loopkex_core::{RightLoop, Transcript};
use serde::{Deserialize, Serialize};

use crate::formats::loop_hash;

/// A private exponent, or the literal string `"private"` when redacted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Value(u64),
    Redacted(Redacted),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Redacted {
    Private,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptFile {
    pub loop_file_hash: String,
    pub x: String,
    pub a: String,
    pub m: Exponent,
    pub n: Exponent,
    pub msg_ab: String,
    pub msg_ba: String,
    pub key_a: String,
    pub key_b: String,
    pub agreed: bool,
}

impl TranscriptFile {
    pub fn new(lp: &RightLoop, t: &Transcript, redact: bool) -> Self {
        let label = |i: usize| lp.label(i).to_owned();
        let exponent = |v: u64| {
            if redact {
                Exponent::Redacted(Redacted::Private)
            } else {
                Exponent::Value(v)
            }
        };
        TranscriptFile {
            loop_file_hash: loop_hash(lp),
            x: label(t.x),
            a: t.a.to_string(),
            m: exponent(t.m),
            n: exponent(t.n),
            msg_ab: label(t.message_a_to_b),
            msg_ba: label(t.message_b_to_a),
            key_a: label(t.key_a),
            key_b: label(t.key_b),
            agreed: t.agreed,
        }
    }

    /// Canonical text: pretty-printed JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("transcript serializes");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use loopkex_core::protocol::run_exchange;
    use loopkex_core::{CGroupoid, Perm, PublicParams};
    use std::sync::Arc;

    fn example() -> (RightLoop, Transcript) {
        let lp = RightLoop::example(16).unwrap();
        let c = Arc::new(CGroupoid::from_right_loop(&lp));
        let a = Perm::parse_cycles("(x3 x4 x1 x9 x8 x7)", c.domain()).unwrap();
        let params = PublicParams::new(c, 3, a).unwrap();
        (lp, run_exchange(&params, 2, 3).unwrap())
    }

    #[test]
    fn field_order_and_values() {
        let (lp, t) = example();
        let text = TranscriptFile::new(&lp, &t, false).to_text();
        let keys: Vec<&str> = text
            .lines()
            .filter_map(|l| l.trim().strip_prefix('"'))
            .filter_map(|l| l.split('"').next())
            .collect();
        assert_eq!(
            keys,
            ["loop_file_hash", "x", "a", "m", "n", "msg_ab", "msg_ba", "key_a", "key_b", "agreed"]
        );
        assert!(text.contains("\"a\": \"(x1 x9 x8 x7 x3 x4)\""));
        assert!(text.contains("\"key_b\": \"x8\""));
        assert!(text.contains("\"m\": 2"));
        assert_eq!(TranscriptFile::from_text(&text).unwrap(), TranscriptFile::new(&lp, &t, false));
    }

    #[test]
    fn redaction() {
        let (lp, t) = example();
        let file = TranscriptFile::new(&lp, &t, true);
        let text = file.to_text();
        assert!(text.contains("\"m\": \"private\""));
        assert!(text.contains("\"n\": \"private\""));
        assert_eq!(TranscriptFile::from_text(&text).unwrap(), file);
    }
}
