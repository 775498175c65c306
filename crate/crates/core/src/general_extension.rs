//! Arithmetic in the general extension `H × S` of a c-groupoid:
//!
//! `(a, x)·(b, y) = (a σ_x(b) f(xθb, y), (xθb) ∘ y)`
//!
//! together with the power sequences `(a, x)^n = (g^n, β^n)` and the bracket
//! iterates `[a σ_x(a)]_m` that give `β^m` in closed form.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::c_groupoid::CGroupoid;
use crate::permutation::{Domain, Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("element index {0} is outside the carrier")]
    UnknownElement(usize),
    #[error("subgroup component {0} does not fix the identity")]
    MovesIdentity(String),
    #[error("{0} is not an element of H")]
    NotInSubgroup(String),
    #[error("closed form needs m >= 2, got {0}")]
    ExponentTooSmall(u64),
    #[error("malformed extension element: {0}")]
    Malformed(&'static str),
}

/// An element `(h, x)` of `H × S`: subgroup component and representative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtElement {
    pub h: Perm,
    pub x: usize,
}

impl ExtElement {
    pub fn new(h: Perm, x: usize) -> Self {
        ExtElement { h, x }
    }

    /// The neutral element `(1, e)`.
    pub fn identity(domain: &Arc<Domain>) -> Self {
        ExtElement::new(Perm::identity(domain), 0)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.h.is_identity()
    }

    /// Parses `(<cycles> ; <label>)`, e.g. `((x3 x4 x1) ; x3)`.
    pub fn parse(text: &str, domain: &Arc<Domain>) -> Result<Self, ExtError> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or(ExtError::Malformed("expected `(<cycles> ; <label>)`"))?;
        let (cycles, label) = inner
            .rsplit_once(';')
            .ok_or(ExtError::Malformed("missing `;`"))?;
        let h = Perm::parse_cycles(cycles.trim(), domain)?;
        let x = domain.lookup(label.trim())?;
        Ok(ExtElement { h, x })
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {})", self.h, self.h.domain().label(self.x))
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check(c: &CGroupoid, p: &ExtElement) -> Result<(), ExtError> {
    if !p.h.domain().labels().eq(c.domain().labels()) {
        return Err(PermError::DomainMismatch.into());
    }
    if p.x >= c.size() {
        return Err(ExtError::UnknownElement(p.x));
    }
    if !p.h.fixes(0) {
        return Err(ExtError::MovesIdentity(p.h.to_string()));
    }
    Ok(())
}

fn sigma(c: &CGroupoid, x: usize, h: &Perm) -> Result<Perm, ExtError> {
    c.sigma(x, h).ok_or_else(|| ExtError::NotInSubgroup(h.to_string()))
}

/// The extension product `(a σ_x(b) f(xθb, y), (xθb) ∘ y)`.
pub fn ext_mul(c: &CGroupoid, p: &ExtElement, q: &ExtElement) -> Result<ExtElement, ExtError> {
    check(c, p)?;
    check(c, q)?;
    mul(c, p, q)
}

fn mul(c: &CGroupoid, p: &ExtElement, q: &ExtElement) -> Result<ExtElement, ExtError> {
    let xb = c.theta(p.x, &q.h);
    let h = p.h.then(&sigma(c, p.x, &q.h)?).then(c.f(xb, q.x));
    Ok(ExtElement::new(h, c.op(xb, q.x)))
}

/// The inverse of `(a, x)`: `y = x' θ a⁻¹` and `b = (σ_y(a) f(yθa, x))⁻¹`.
pub fn ext_left_inverse(c: &CGroupoid, p: &ExtElement) -> Result<ExtElement, ExtError> {
    check(c, p)?;
    let x_prime = c.carrier().left_inverse(p.x);
    let y = c.theta(x_prime, &p.h.inverse());
    let b = sigma(c, y, &p.h)?.then(c.f(c.theta(y, &p.h), p.x)).inverse();
    Ok(ExtElement::new(b, y))
}

/// `p^n` by square-and-multiply; `p^0 = (1, e)`.
pub fn ext_pow(c: &CGroupoid, p: &ExtElement, n: u64) -> Result<ExtElement, ExtError> {
    check(c, p)?;
    let mut result = ExtElement::identity(c.domain());
    let mut base = p.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            result = mul(c, &result, &base)?;
        }
        n >>= 1;
        if n > 0 {
            base = mul(c, &base, &base)?;
        }
    }
    Ok(result)
}

/// Conditions under which the closed forms are not covered by the usual
/// hypotheses `x ≠ e`, `a ≠ 1`. They are reported, not rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerWarning {
    BaseIsIdentity,
    ComponentIsIdentity,
}

/// `(g^r, β^r)` for `r = 1..=n`, built by the linear recursions
///
/// `β^{r+1} = β^r θ a ∘ x`, `g^{r+1} = g^r σ_{β^r}(a) f(β^r θ a, x)`,
///
/// and the brackets `[a σ_x(a)]_m` for `m = 0..=n-2`.
#[derive(Debug, Clone)]
pub struct PowerSequence {
    pub x: usize,
    pub a: Perm,
    /// `entries[r - 1] = (g^r, β^r)`.
    pub entries: Vec<ExtElement>,
    pub brackets: Vec<Perm>,
    pub warnings: Vec<PowerWarning>,
}

impl PowerSequence {
    /// `β^r`, for `1 <= r <= n`.
    pub fn beta(&self, r: usize) -> usize {
        self.entries[r - 1].x
    }

    /// `g^r`, for `1 <= r <= n`.
    pub fn g(&self, r: usize) -> &Perm {
        &self.entries[r - 1].h
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn power_sequence(c: &CGroupoid, x: usize, a: &Perm, n: usize) -> Result<PowerSequence, ExtError> {
    let base = ExtElement::new(a.clone(), x);
    check(c, &base)?;
    let mut warnings = Vec::new();
    if x == 0 {
        warnings.push(PowerWarning::BaseIsIdentity);
    }
    if a.is_identity() {
        warnings.push(PowerWarning::ComponentIsIdentity);
    }
    let sigma_a_cache = |beta: usize| sigma(c, beta, a);
    let mut entries: Vec<ExtElement> = Vec::with_capacity(n);
    if n >= 1 {
        entries.push(base);
    }
    while entries.len() < n {
        let last = entries.last().expect("non-empty");
        let moved = c.theta(last.x, a);
        let g = last.h.then(&sigma_a_cache(last.x)?).then(c.f(moved, x));
        entries.push(ExtElement::new(g, c.op(moved, x)));
    }
    let mut brackets = Vec::with_capacity(n.saturating_sub(1));
    if n >= 2 {
        brackets.push(a.clone());
        while brackets.len() < n - 1 {
            let prev = brackets.last().expect("non-empty");
            brackets.push(a.then(&sigma(c, x, prev)?));
        }
    }
    Ok(PowerSequence {
        x,
        a: a.clone(),
        entries,
        brackets,
        warnings,
    })
}

/// `β^n` alone, by the representative recursion. Needs no `σ` or `f`.
pub fn beta_by_recursion(c: &CGroupoid, x: usize, a: &Perm, n: u64) -> usize {
    let mut beta = x;
    for _ in 1..n {
        beta = c.op(c.theta(beta, a), x);
    }
    beta
}

/// `[a σ_x(a)]_m`: `[·]_0 = a` and `[·]_m = a σ_x([·]_{m-1})`.
pub fn iterate_bracket(c: &CGroupoid, x: usize, a: &Perm, m: u64) -> Result<Perm, ExtError> {
    check(c, &ExtElement::new(a.clone(), x))?;
    let mut bracket = a.clone();
    for _ in 0..m {
        bracket = a.then(&sigma(c, x, &bracket)?);
    }
    Ok(bracket)
}

/// Left-nested product `((… (xθb_{m-2} ∘ xθb_{m-3}) ∘ …) ∘ xθb_0) ∘ x`
/// where `b_k` is the `k`-th bracket produced by `bracket`.
fn nested_product(c: &CGroupoid, x: usize, m: u64, mut bracket: impl FnMut(u64) -> Result<Perm, ExtError>) -> Result<usize, ExtError> {
    if m < 2 {
        return Err(ExtError::ExponentTooSmall(m));
    }
    let mut brackets = Vec::with_capacity((m - 1) as usize);
    for k in 0..=m - 2 {
        brackets.push(bracket(k)?);
    }
    let mut acc = c.theta(x, &brackets[(m - 2) as usize]);
    for k in (0..m - 2).rev() {
        acc = c.op(acc, c.theta(x, &brackets[k as usize]));
    }
    Ok(c.op(acc, x))
}

/// `β^m` from the bracket iterates, for `m >= 2`.
pub fn beta_closed_form(c: &CGroupoid, x: usize, a: &Perm, m: u64) -> Result<usize, ExtError> {
    check(c, &ExtElement::new(a.clone(), x))?;
    let mut current = a.clone();
    let mut produced = 0;
    nested_product(c, x, m, |k| {
        // brackets are requested in increasing k
        while produced < k {
            current = a.then(&sigma(c, x, &current)?);
            produced += 1;
        }
        Ok(current.clone())
    })
}

/// `β^m` when `σ_x` is the identity on `H`, so that `[a σ_x(a)]_k = a^{k+1}`.
pub fn beta_gyro_closed_form(c: &CGroupoid, x: usize, a: &Perm, m: u64) -> Result<usize, ExtError> {
    check(c, &ExtElement::new(a.clone(), x))?;
    nested_product(c, x, m, |k| Ok(a.pow(k + 1)))
}

/// `[a σ_x(a)]_k` when `σ_x = η` is an involutory automorphism, from `a` and
/// `η(a)` alone: `a (η(a) a)^{k/2}` for even `k`, `(a η(a))^{(k+1)/2}` for odd.
pub fn bracket_twisted(a: &Perm, eta_a: &Perm, k: u64) -> Perm {
    if k % 2 == 0 {
        a.then(&eta_a.then(a).pow(k / 2))
    } else {
        a.then(eta_a).pow(k.div_ceil(2))
    }
}

/// `β^m` when `σ_x = η` is an involutory automorphism; `eta_a = η(a)`.
pub fn beta_twisted_closed_form(c: &CGroupoid, x: usize, a: &Perm, eta_a: &Perm, m: u64) -> Result<usize, ExtError> {
    check(c, &ExtElement::new(a.clone(), x))?;
    nested_product(c, x, m, |k| Ok(bracket_twisted(a, eta_a, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::right_loop::RightLoop;

    fn setup() -> (CGroupoid, Perm) {
        let c = CGroupoid::from_right_loop(&RightLoop::example(16).unwrap());
        let a = Perm::parse_cycles("(x3 x4 x1 x9 x8 x7)", c.domain()).unwrap();
        (c, a)
    }

    fn cyc(c: &CGroupoid, t: &str) -> Perm {
        Perm::parse_cycles(t, c.domain()).unwrap()
    }

    #[test]
    fn neutral_element() {
        let (c, a) = setup();
        let one = ExtElement::identity(c.domain());
        let p = ExtElement::new(a, 3);
        assert_eq!(ext_mul(&c, &one, &p).unwrap(), p);
        assert_eq!(ext_mul(&c, &p, &one).unwrap(), p);
    }

    #[test]
    fn example_products() {
        let (c, a) = setup();
        let id = Perm::identity(c.domain());
        let x3 = ExtElement::new(id.clone(), 3);
        assert!(ext_mul(&c, &x3, &x3).unwrap().is_identity());
        let p = ExtElement::new(a, 3);
        let sq = ext_mul(&c, &p, &p).unwrap();
        assert_eq!(sq, ExtElement::new(cyc(&c, "(x3 x1 x8 x4 x9 x7)"), 4));
        assert_eq!(ext_pow(&c, &p, 2).unwrap(), sq);
        assert_eq!(
            ext_pow(&c, &p, 3).unwrap(),
            ExtElement::new(cyc(&c, "(x1 x7 x4 x8 x3 x9)"), 1)
        );
        assert!(ext_pow(&c, &p, 0).unwrap().is_identity());
        assert_eq!(ext_pow(&c, &p, 1).unwrap(), p);
    }

    #[test]
    fn inverses() {
        let (c, a) = setup();
        let one = ExtElement::identity(c.domain());
        assert_eq!(ext_left_inverse(&c, &one).unwrap(), one);
        let x3 = ExtElement::new(Perm::identity(c.domain()), 3);
        assert_eq!(ext_left_inverse(&c, &x3).unwrap(), x3);
        let p = ExtElement::new(a, 3);
        let q = ext_left_inverse(&c, &p).unwrap();
        assert!(ext_mul(&c, &q, &p).unwrap().is_identity());
        assert!(ext_mul(&c, &p, &q).unwrap().is_identity());
    }

    #[test]
    fn example_power_sequence() {
        let (c, a) = setup();
        let seq = power_sequence(&c, 3, &a, 3).unwrap();
        assert!(seq.warnings.is_empty());
        assert_eq!(seq.entries[0], ExtElement::new(a.clone(), 3));
        assert_eq!(seq.beta(2), 4);
        assert_eq!(*seq.g(2), cyc(&c, "(x3 x1 x8 x4 x9 x7)"));
        let detail = seq.g(2).then(&a).then(&cyc(&c, "(x1 x3)"));
        assert_eq!(*seq.g(3), detail);
        assert_eq!(seq.beta(3), 1);
        assert_eq!(beta_by_recursion(&c, 3, &a, 3), 1);
        assert_eq!(seq.brackets.len(), 2);
    }

    #[test]
    fn power_sequence_warns_on_degenerate_input() {
        let (c, a) = setup();
        let seq = power_sequence(&c, 0, &Perm::identity(c.domain()), 2).unwrap();
        assert_eq!(
            seq.warnings,
            [PowerWarning::BaseIsIdentity, PowerWarning::ComponentIsIdentity]
        );
        let moves_e = Perm::transposition(c.domain(), 0, 1);
        assert!(matches!(power_sequence(&c, 3, &moves_e, 2), Err(ExtError::MovesIdentity(_))));
        assert!(power_sequence(&c, 3, &a, 0).unwrap().is_empty());
    }

    #[test]
    fn brackets_in_a_right_gyrogroup_are_powers() {
        let (c, a) = setup();
        assert_eq!(iterate_bracket(&c, 3, &a, 0).unwrap(), a);
        for m in 0..8 {
            assert_eq!(iterate_bracket(&c, 3, &a, m).unwrap(), a.pow(m + 1));
        }
    }

    #[test]
    fn twisted_brackets() {
        let d = Domain::indexed(5);
        let a = Perm::parse_cycles("(x1 x2 x3)", &d).unwrap();
        let eta_a = Perm::parse_cycles("(x2 x4)", &d).unwrap();
        assert_eq!(bracket_twisted(&a, &eta_a, 0), a);
        assert_eq!(bracket_twisted(&a, &eta_a, 1), a.then(&eta_a));
        assert_eq!(bracket_twisted(&a, &eta_a, 2), a.then(&eta_a).then(&a));
        assert_eq!(bracket_twisted(&a, &eta_a, 3), a.then(&eta_a).then(&a).then(&eta_a));
    }

    #[test]
    fn closed_forms_on_example() {
        let (c, a) = setup();
        assert_eq!(beta_closed_form(&c, 3, &a, 2).unwrap(), c.op(a.apply(3), 3));
        assert_eq!(beta_closed_form(&c, 3, &a, 3).unwrap(), 1);
        assert_eq!(beta_gyro_closed_form(&c, 3, &a, 3).unwrap(), 1);
        assert_eq!(beta_closed_form(&c, 3, &a, 1), Err(ExtError::ExponentTooSmall(1)));
        for m in 2..30 {
            let r = beta_by_recursion(&c, 3, &a, m);
            assert_eq!(beta_closed_form(&c, 3, &a, m).unwrap(), r);
            assert_eq!(beta_gyro_closed_form(&c, 3, &a, m).unwrap(), r);
        }
    }

    #[test]
    fn text_form() {
        let (c, a) = setup();
        let p = ExtElement::new(a, 3);
        assert_eq!(p.to_string(), "((x1 x9 x8 x7 x3 x4) ; x3)");
        assert_eq!(ExtElement::parse("((x3 x4 x1 x9 x8 x7) ; x3)", c.domain()).unwrap(), p);
        assert_eq!(ExtElement::identity(c.domain()).to_string(), "(() ; e)");
        assert!(ExtElement::parse("(x1 x2)", c.domain()).is_err());
    }
}
