//! Permutations of a labeled finite domain.
//!
//! Composition follows the right-action convention used throughout the
//! crate: `p.then(&q)` applies `p` first, so `x·(pq) = (x·p)·q`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use rand::Rng;

/// Errors raised while building domains and permutations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("domain must contain at least one label")]
    EmptyDomain,
    #[error("label `{0}` appears more than once in the domain")]
    DuplicateDomainLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` is repeated in the cycle notation")]
    RepeatedLabel(String),
    #[error("malformed cycle notation at byte {position}: {reason}")]
    Malformed { position: usize, reason: &'static str },
    #[error("permutations are defined over different domains")]
    DomainMismatch,
    #[error("image list is not a bijection on 0..{0}")]
    NotABijection(usize),
}

/// An ordered set of distinct element labels; index `i` names `labels[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Domain {
    pub fn new<I, S>(labels: I) -> Result<Arc<Self>, PermError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(PermError::EmptyDomain);
        }
        let mut index = BTreeMap::new();
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(PermError::DuplicateDomainLabel(label.clone()));
            }
        }
        Ok(Arc::new(Domain { labels, index }))
    }

    /// `{e, x1, .., x(n-1)}`, the labeling used by the generated example loops.
    pub fn indexed(n: usize) -> Arc<Self> {
        let labels = (0..n).map(|i| {
            if i == 0 {
                "e".to_string()
            } else {
                alloc::format!("x{i}")
            }
        });
        Domain::new(labels).expect("indexed labels are distinct and non-empty")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn lookup(&self, label: &str) -> Result<usize, PermError> {
        self.index_of(label)
            .ok_or_else(|| PermError::UnknownLabel(label.to_string()))
    }
}

/// A bijection on the indices of a [`Domain`].
#[derive(Clone)]
pub struct Perm {
    domain: Arc<Domain>,
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(domain: &Arc<Domain>) -> Self {
        Perm {
            domain: Arc::clone(domain),
            images: (0..domain.size()).collect(),
        }
    }

    pub fn from_images(domain: &Arc<Domain>, images: Vec<usize>) -> Result<Self, PermError> {
        let n = domain.size();
        if images.len() != n {
            return Err(PermError::NotABijection(n));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || core::mem::replace(&mut seen[i], true) {
                return Err(PermError::NotABijection(n));
            }
        }
        Ok(Perm {
            domain: Arc::clone(domain),
            images,
        })
    }

    /// Builds a permutation from a closure; the caller guarantees bijectivity.
    pub(crate) fn from_fn_unchecked(domain: &Arc<Domain>, f: impl FnMut(usize) -> usize) -> Self {
        let images: Vec<usize> = (0..domain.size()).map(f).collect();
        debug_assert!(is_bijection(&images));
        Perm {
            domain: Arc::clone(domain),
            images,
        }
    }

    /// Transposition of two indices.
    pub fn transposition(domain: &Arc<Domain>, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(domain);
        p.images.swap(i, j);
        p
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of index `i` (written `i θ p` in the algebra).
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn same_domain(&self, other: &Perm) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || self.domain.labels == other.domain.labels
    }

    /// Right-action product: the result maps `t` to `q(p(t))`.
    pub fn compose(&self, q: &Perm) -> Result<Perm, PermError> {
        if !self.same_domain(q) {
            return Err(PermError::DomainMismatch);
        }
        Ok(self.then(q))
    }

    /// [`Perm::compose`] without the domain check, for callers that already
    /// know both sides live on the same domain.
    #[inline]
    pub fn then(&self, q: &Perm) -> Perm {
        debug_assert_eq!(self.images.len(), q.images.len());
        Perm {
            domain: Arc::clone(&self.domain),
            images: self.images.iter().map(|&i| q.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm {
            domain: Arc::clone(&self.domain),
            images,
        }
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut result = Perm::identity(&self.domain);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.images[i] == i
    }

    /// Non-trivial cycles in canonical order: each cycle starts at its
    /// smallest index and cycles are sorted by that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Parses whitespace-separated cycles such as `(x3 x4 x1)(x2 x5)`.
    /// `()` is the identity; labels not mentioned are fixed.
    pub fn parse_cycles(text: &str, domain: &Arc<Domain>) -> Result<Perm, PermError> {
        let mut images: Vec<usize> = (0..domain.size()).collect();
        let mut used = vec![false; domain.size()];
        let mut current: Option<Vec<usize>> = None;
        let mut saw_group = false;
        let bytes = text.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let c = bytes[pos];
            match c {
                b'(' => {
                    if current.is_some() {
                        return Err(PermError::Malformed {
                            position: pos,
                            reason: "nested `(`",
                        });
                    }
                    current = Some(Vec::new());
                    saw_group = true;
                    pos += 1;
                }
                b')' => {
                    let cycle = current.take().ok_or(PermError::Malformed {
                        position: pos,
                        reason: "`)` without matching `(`",
                    })?;
                    for (k, &i) in cycle.iter().enumerate() {
                        images[i] = cycle[(k + 1) % cycle.len()];
                    }
                    pos += 1;
                }
                c if c.is_ascii_whitespace() => pos += 1,
                _ => {
                    let start = pos;
                    while pos < bytes.len()
                        && !bytes[pos].is_ascii_whitespace()
                        && bytes[pos] != b'('
                        && bytes[pos] != b')'
                    {
                        pos += 1;
                    }
                    let label = &text[start..pos];
                    let cycle = current.as_mut().ok_or(PermError::Malformed {
                        position: start,
                        reason: "label outside parentheses",
                    })?;
                    let i = domain.lookup(label)?;
                    if core::mem::replace(&mut used[i], true) {
                        return Err(PermError::RepeatedLabel(label.to_string()));
                    }
                    cycle.push(i);
                }
            }
        }
        if current.is_some() {
            return Err(PermError::Malformed {
                position: bytes.len(),
                reason: "unclosed `(`",
            });
        }
        if !saw_group {
            return Err(PermError::Malformed {
                position: 0,
                reason: "expected at least one parenthesized cycle",
            });
        }
        Ok(Perm {
            domain: Arc::clone(domain),
            images,
        })
    }

    /// Uniformly random element of the full symmetric group fixing `fixed`.
    pub fn random_fixing<R: Rng + ?Sized>(domain: &Arc<Domain>, fixed: usize, rng: &mut R) -> Perm {
        use rand::seq::SliceRandom;
        let mut moved: Vec<usize> = (0..domain.size()).filter(|&i| i != fixed).collect();
        let slots = moved.clone();
        moved.shuffle(rng);
        let mut images: Vec<usize> = (0..domain.size()).collect();
        for (&from, &to) in slots.iter().zip(&moved) {
            images[from] = to;
        }
        Perm {
            domain: Arc::clone(domain),
            images,
        }
    }
}

pub(crate) fn is_bijection(images: &[usize]) -> bool {
    let mut seen = vec![false; images.len()];
    images
        .iter()
        .all(|&i| i < images.len() && !core::mem::replace(&mut seen[i], true))
}

impl PartialEq for Perm {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.same_domain(other)
    }
}

impl Eq for Perm {}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.images.cmp(&other.images)
    }
}

impl core::hash::Hash for Perm {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

/// Canonical cycle notation; the identity prints as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, &i) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(self.domain.label(i))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

struct Level {
    point: usize,
    generators: Vec<Perm>,
    /// `transversal[b]` maps `point` to `b`, for every `b` in the orbit.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(point: usize, domain: &Arc<Domain>) -> Self {
        let mut transversal = vec![None; domain.size()];
        transversal[point] = Some(Perm::identity(domain));
        Level {
            point,
            generators: Vec::new(),
            transversal,
            orbit: vec![point],
        }
    }

    fn rebuild_orbit(&mut self) {
        let mut k = 0;
        while k < self.orbit.len() {
            let b = self.orbit[k];
            let ub = self.transversal[b].clone().expect("orbit point has a transversal");
            for s in &self.generators {
                let c = s.apply(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(ub.then(s));
                    self.orbit.push(c);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set for a permutation group, built by the
/// deterministic Schreier–Sims algorithm with base points taken in domain
/// order.
pub struct Bsgs {
    domain: Arc<Domain>,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn new(domain: &Arc<Domain>, generators: &[Perm]) -> Result<Self, PermError> {
        let mut bsgs = Bsgs {
            domain: Arc::clone(domain),
            generators: Vec::new(),
            levels: Vec::new(),
        };
        for g in generators {
            if g.domain.labels != domain.labels {
                return Err(PermError::DomainMismatch);
            }
            if !g.is_identity() {
                bsgs.generators.push(Perm {
                    domain: Arc::clone(domain),
                    images: g.images.clone(),
                });
            }
        }
        bsgs.build();
        Ok(bsgs)
    }

    /// Convenience constructor taking the domain from the first generator.
    pub fn from_generators(generators: &[Perm]) -> Result<Self, PermError> {
        match generators.first() {
            Some(g) => Bsgs::new(&Arc::clone(&g.domain), generators),
            None => Err(PermError::EmptyDomain),
        }
    }

    fn build(&mut self) {
        let gens = self.generators.clone();
        for g in &gens {
            if let Some(point) = first_moved(g) {
                if self.levels.is_empty() {
                    self.levels.push(Level::new(point, &self.domain));
                }
            }
        }
        if self.levels.is_empty() {
            return;
        }
        self.levels[0].generators = gens;
        self.levels[0].rebuild_orbit();

        let mut i = self.levels.len() - 1;
        loop {
            match self.find_nonsifting_schreier_generator(i) {
                Some((residue, drop_level)) => {
                    if drop_level == self.levels.len() {
                        let point = first_moved(&residue).expect("residue is not the identity");
                        self.levels.push(Level::new(point, &self.domain));
                    }
                    for l in (i + 1)..=drop_level {
                        self.levels[l].generators.push(residue.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    i = drop_level;
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }

    /// Looks for a Schreier generator of level `i` that does not sift through
    /// the levels below it. Returns the residue and the level it stopped at.
    fn find_nonsifting_schreier_generator(&self, i: usize) -> Option<(Perm, usize)> {
        let level = &self.levels[i];
        for &b in &level.orbit {
            let ub = level.transversal[b].as_ref().expect("orbit point");
            for s in &level.generators {
                let c = s.apply(b);
                let uc = level.transversal[c].as_ref().expect("orbit is closed");
                let schreier = ub.then(s).then(&uc.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (residue, stop) = self.strip(schreier, i + 1);
                if stop < self.levels.len() || !residue.is_identity() {
                    return Some((residue, stop));
                }
            }
        }
        None
    }

    /// Sifts `g` through the levels starting at `from`. Returns the residue
    /// and the index of the level where sifting stopped (`levels.len()` if it
    /// passed them all).
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (j, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.point);
            match &level.transversal[b] {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, j),
            }
        }
        (g, self.levels.len())
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Exact group order: the product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Group order if it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.levels
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.orbit.len() as u64))
    }

    pub fn contains(&self, p: &Perm) -> bool {
        if p.domain.labels != self.domain.labels {
            return false;
        }
        let (residue, stop) = self.strip(p.clone(), 0);
        stop == self.levels.len() && residue.is_identity()
    }

    /// Calls `visit` on every group element exactly once.
    pub fn for_each_element(&self, mut visit: impl FnMut(&Perm)) {
        // Every element factors as u_k ... u_1 u_0 with u_i a transversal
        // element of level i, so the deepest level is applied first.
        fn walk(levels: &[Level], acc: &Perm, visit: &mut dyn FnMut(&Perm)) {
            match levels.split_last() {
                None => visit(acc),
                Some((deepest, shallower)) => {
                    for &b in &deepest.orbit {
                        let u = deepest.transversal[b].as_ref().expect("orbit point");
                        walk(shallower, &acc.then(u), visit);
                    }
                }
            }
        }
        walk(&self.levels, &Perm::identity(&self.domain), &mut visit);
    }

    /// All group elements. Only sensible for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        self.for_each_element(|p| out.push(p.clone()));
        out
    }

    /// A uniformly distributed group element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(&self.domain);
        for level in self.levels.iter().rev() {
            let b = level.orbit[rng.random_range(0..level.orbit.len())];
            g = g.then(level.transversal[b].as_ref().expect("orbit point"));
        }
        g
    }
}

impl fmt::Debug for Bsgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bsgs")
            .field("base", &self.base())
            .field("order", &self.order())
            .finish()
    }
}

fn first_moved(p: &Perm) -> Option<usize> {
    p.images.iter().enumerate().find(|(i, &j)| *i != j).map(|(i, _)| i)
}

/// Order of the group generated by `generators`; the empty list generates the
/// trivial group.
pub fn bsgs_order(generators: &[Perm]) -> Result<BigUint, PermError> {
    if generators.is_empty() {
        return Ok(BigUint::from(1u32));
    }
    Ok(Bsgs::from_generators(generators)?.order())
}

/// Membership test in the group generated by `generators`.
pub fn bsgs_contains(generators: &[Perm], p: &Perm) -> Result<bool, PermError> {
    if generators.iter().any(|g| !g.same_domain(p)) {
        return Err(PermError::DomainMismatch);
    }
    if generators.is_empty() {
        return Ok(p.is_identity());
    }
    Ok(Bsgs::new(p.domain(), generators)?.contains(p))
}
