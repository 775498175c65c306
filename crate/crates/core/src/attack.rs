//! The obvious attack on the exchange: walk `β^1, β^2, …` from the public
//! `(a, x)` until the intercepted representative appears, then finish the
//! key derivation exactly like the legitimate party.

use core::time::Duration;

use crate::c_groupoid::CGroupoid;
use crate::general_extension::{ext_mul, ExtElement, ExtError};
use crate::protocol::{Party, ProtocolError, PublicParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackResult {
    pub found: bool,
    /// Least `r` with `β^r` equal to the target.
    pub exponent: Option<u64>,
    /// Exponents examined.
    pub iterations: u64,
    /// Wall-clock time, when measured by the caller.
    pub elapsed: Option<Duration>,
}

impl AttackResult {
    pub fn with_elapsed(self, elapsed: Duration) -> Self {
        AttackResult {
            elapsed: Some(elapsed),
            ..self
        }
    }
}

/// Scans `r = 1..=cap` for the first `β^r` equal to `target`.
pub fn recover_exponent(params: &PublicParams, target: usize, cap: u64) -> AttackResult {
    let c = params.cgroupoid();
    let (x, a) = (params.x(), params.a());
    let mut beta = x;
    for r in 1..=cap {
        if beta == target {
            return AttackResult {
                found: true,
                exponent: Some(r),
                iterations: r,
                elapsed: None,
            };
        }
        beta = c.op(c.theta(beta, a), x);
    }
    AttackResult {
        found: false,
        exponent: None,
        iterations: cap,
        elapsed: None,
    }
}

/// Scans the exponent range `start..end` (with `start >= 1`), jumping to
/// `β^start` by square-and-multiply. Disjoint ranges can be scanned
/// independently and merged by taking the smallest hit.
pub fn scan_range(params: &PublicParams, target: usize, start: u64, end: u64) -> Result<Option<u64>, ExtError> {
    if start >= end {
        return Ok(None);
    }
    let c = params.cgroupoid();
    let (x, a) = (params.x(), params.a());
    let mut beta = params.power(start.max(1))?.x;
    for r in start.max(1)..end {
        if beta == target {
            return Ok(Some(r));
        }
        beta = c.op(c.theta(beta, a), x);
    }
    Ok(None)
}

/// Completes a break: with a recovered exponent the attacker holds
/// `(g^r, β^r)` and derives the key from the other party's message.
pub fn break_key(params: &PublicParams, exponent: u64, peer_beta: usize) -> Result<usize, ProtocolError> {
    Party::new(params.clone(), exponent)?.derive_key(peer_beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleLength {
    Exact(u64),
    ExceedsCap,
}

/// Order of `p` in the general extension, searched up to `cap`.
pub fn element_order(c: &CGroupoid, p: &ExtElement, cap: u64) -> Result<CycleLength, ExtError> {
    let mut power = p.clone();
    for r in 1..=cap {
        if power.is_identity() {
            return Ok(CycleLength::Exact(r));
        }
        power = ext_mul(c, &power, p)?;
    }
    Ok(CycleLength::ExceedsCap)
}

/// Order of the public element `(a, x)`; bounds the number of distinct
/// shared keys the parameters can produce.
pub fn representative_cycle_length(params: &PublicParams, cap: u64) -> CycleLength {
    element_order(params.cgroupoid(), &params.base(), cap).expect("public parameters are validated")
}
