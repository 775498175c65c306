//! Two-party key exchange over the cyclic subgroup generated by a public
//! element `(a, x)` of the general extension.
//!
//! Each party raises `(a, x)` to its private exponent, publishes only the
//! representative `β`, and combines the peer's representative with its own
//! power: `K = β_peer θ g_own ∘ β_own`. Both sides land on `β^{m+n}`.

use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::sync::Arc;

use crate::c_groupoid::CGroupoid;
use crate::general_extension::{beta_by_recursion, ext_mul, ext_pow, ExtElement, ExtError};
use crate::permutation::Perm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error("public base must not be the identity")]
    BaseIsIdentity,
    #[error("public subgroup element must not be the identity")]
    ComponentIsIdentity,
    #[error("public subgroup element {0} does not fix the identity")]
    ComponentMovesIdentity(alloc::string::String),
    #[error("public subgroup element {0} is not in H")]
    ComponentNotInSubgroup(alloc::string::String),
    #[error("private exponents must be positive")]
    ZeroExponent,
    #[error("received representative index {0} is outside the carrier")]
    UnknownElement(usize),
    #[error("key derivation requires the peer's representative first")]
    MissingPeerMessage,
    #[error("parties disagree: {0:?}")]
    Disagreement(Box<Transcript>),
}

/// The public pair `(a, x)` over a c-groupoid.
#[derive(Debug, Clone)]
pub struct PublicParams {
    cgroupoid: Arc<CGroupoid>,
    x: usize,
    a: Perm,
}

impl PublicParams {
    pub fn new(cgroupoid: Arc<CGroupoid>, x: usize, a: Perm) -> Result<Self, ProtocolError> {
        if x >= cgroupoid.size() {
            return Err(ProtocolError::UnknownElement(x));
        }
        if x == 0 {
            return Err(ProtocolError::BaseIsIdentity);
        }
        if !a.same_domain(&Perm::identity(cgroupoid.domain())) {
            return Err(ExtError::Perm(crate::permutation::PermError::DomainMismatch).into());
        }
        if a.is_identity() {
            return Err(ProtocolError::ComponentIsIdentity);
        }
        if !a.fixes(0) {
            return Err(ProtocolError::ComponentMovesIdentity(a.to_string()));
        }
        if !cgroupoid.h_group().contains(&a) {
            return Err(ProtocolError::ComponentNotInSubgroup(a.to_string()));
        }
        Ok(PublicParams { cgroupoid, x, a })
    }

    pub fn cgroupoid(&self) -> &CGroupoid {
        &self.cgroupoid
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn a(&self) -> &Perm {
        &self.a
    }

    /// `(a, x)`.
    pub fn base(&self) -> ExtElement {
        ExtElement::new(self.a.clone(), self.x)
    }

    /// `(g^r, β^r)`.
    pub fn power(&self, r: u64) -> Result<ExtElement, ExtError> {
        ext_pow(&self.cgroupoid, &self.base(), r)
    }
}

/// One side of the exchange.
#[derive(Debug, Clone)]
pub struct Party {
    params: PublicParams,
    exponent: u64,
    own_power: ExtElement,
    peer_beta: Option<usize>,
}

impl Party {
    pub fn new(params: PublicParams, exponent: u64) -> Result<Self, ProtocolError> {
        if exponent == 0 {
            return Err(ProtocolError::ZeroExponent);
        }
        let own_power = params.power(exponent)?;
        Ok(Party {
            params,
            exponent,
            own_power,
            peer_beta: None,
        })
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The outgoing message: the representative `β^exponent` only.
    pub fn make_message(&self) -> usize {
        self.own_power.x
    }

    pub fn receive(&mut self, peer_beta: usize) -> Result<(), ProtocolError> {
        if peer_beta >= self.params.cgroupoid.size() {
            return Err(ProtocolError::UnknownElement(peer_beta));
        }
        self.peer_beta = Some(peer_beta);
        Ok(())
    }

    /// `peer_beta θ g^own ∘ β^own`. The subgroup component of the shared
    /// element stays unknown to this party, since the peer's `g` is private.
    pub fn derive_key(&self, peer_beta: usize) -> Result<usize, ProtocolError> {
        let c = &self.params.cgroupoid;
        if peer_beta >= c.size() {
            return Err(ProtocolError::UnknownElement(peer_beta));
        }
        Ok(c.op(c.theta(peer_beta, &self.own_power.h), self.own_power.x))
    }

    /// [`Party::derive_key`] against the message passed to [`Party::receive`].
    pub fn key(&self) -> Result<usize, ProtocolError> {
        self.derive_key(self.peer_beta.ok_or(ProtocolError::MissingPeerMessage)?)
    }
}

/// Everything observable in one run, plus both derived keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub x: usize,
    pub a: Perm,
    pub m: u64,
    pub n: u64,
    pub message_a_to_b: usize,
    pub message_b_to_a: usize,
    pub key_a: usize,
    pub key_b: usize,
    pub agreed: bool,
}

/// Exponents up to this bound are cross-checked by walking the `β`
/// recursion; larger ones by square-and-multiply.
const LINEAR_CROSS_CHECK: u64 = 1 << 20;

/// Runs both parties in sequence and cross-checks the agreed key against
/// `β^{m+n}` computed directly.
pub fn run_exchange(params: &PublicParams, m: u64, n: u64) -> Result<Transcript, ProtocolError> {
    let mut alice = Party::new(params.clone(), m)?;
    let mut bob = Party::new(params.clone(), n)?;
    let message_a_to_b = alice.make_message();
    let message_b_to_a = bob.make_message();
    bob.receive(message_a_to_b)?;
    alice.receive(message_b_to_a)?;
    let key_a = alice.key()?;
    let key_b = bob.key()?;

    let total = m.checked_add(n);
    let expected = match total {
        Some(t) if t <= LINEAR_CROSS_CHECK => beta_by_recursion(&params.cgroupoid, params.x, &params.a, t),
        Some(t) => params.power(t)?.x,
        None => ext_mul(&params.cgroupoid, &params.power(m)?, &params.power(n)?)?.x,
    };
    let transcript = Transcript {
        x: params.x,
        a: params.a.clone(),
        m,
        n,
        message_a_to_b,
        message_b_to_a,
        key_a,
        key_b,
        agreed: key_a == key_b,
    };
    if !transcript.agreed || key_a != expected {
        return Err(ProtocolError::Disagreement(Box::new(transcript)));
    }
    Ok(transcript)
}
