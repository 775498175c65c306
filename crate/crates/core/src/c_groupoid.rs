//! c-groupoids `(S, H, σ, f)`: the structure a right transversal induces on
//! itself, built either from a right loop or from a group with a chosen
//! subgroup and right transversal.
//!
//! `H` is always held concretely as permutations of `S` fixing `e`, and the
//! action `θ` is permutation application.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::general_extension::{ext_left_inverse, ext_mul, ExtElement};
use crate::permutation::{Bsgs, Domain, Perm, PermError};
use crate::right_loop::{verification_set, LoopError, RightLoop};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CGroupoidError {
    #[error(transparent)]
    Domain(#[from] PermError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error("not a group table: {0}")]
    NotAGroup(String),
    #[error("subgroup does not contain the identity")]
    SubgroupMissingIdentity,
    #[error("subgroup is not closed: {0} * {1} = {2} is outside it")]
    SubgroupNotClosed(String, String, String),
    #[error("transversal does not contain the identity")]
    TransversalMissingIdentity,
    #[error("transversal elements {0} and {1} lie in the same right coset")]
    TransversalRepeatsCoset(String, String),
    #[error("right coset of {0} has no representative in the transversal")]
    TransversalMissesCoset(String),
    #[error("the subgroup does not act faithfully on the transversal: {0} acts trivially")]
    NotFaithful(String),
    #[error("extension has {size} elements, above the materialization cap {cap}")]
    TooLarge { size: u128, cap: u64 },
}

/// A finite group given by a Cayley table, with a subgroup and a right
/// transversal to it. Index 0 is the group identity.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    domain: Arc<Domain>,
    table: Vec<usize>,
    subgroup: Vec<usize>,
    transversal: Vec<usize>,
}

impl GroupPresentation {
    /// Validates a labelled Cayley table together with the subgroup and
    /// transversal labels.
    pub fn new<L, R, C>(
        labels: &[L],
        rows: &[R],
        subgroup: &[&str],
        transversal: &[&str],
    ) -> Result<Self, CGroupoidError>
    where
        L: AsRef<str>,
        R: AsRef<[C]>,
        C: AsRef<str>,
    {
        // Group tables are in particular right loops; reuse the loop parser
        // for the shape checks and identity normalization.
        let lp = RightLoop::validate(labels, rows).map_err(|e| match e {
            LoopError::Domain(d) => CGroupoidError::Domain(d),
            other => CGroupoidError::NotAGroup(other.to_string()),
        })?;
        let domain = Arc::clone(lp.domain());
        let n = domain.size();
        let table = (0..n).flat_map(|i| lp.row(i).to_vec()).collect();
        let lookup = |names: &[&str]| -> Result<Vec<usize>, CGroupoidError> {
            names.iter().map(|s| Ok(domain.lookup(s)?)).collect()
        };
        let subgroup = lookup(subgroup)?;
        let transversal = lookup(transversal)?;
        GroupPresentation::from_indices(domain, table, subgroup, transversal)
    }

    /// Validates an index-level presentation whose identity is index 0.
    pub fn from_indices(
        domain: Arc<Domain>,
        table: Vec<usize>,
        subgroup: Vec<usize>,
        transversal: Vec<usize>,
    ) -> Result<Self, CGroupoidError> {
        let n = domain.size();
        let lp = RightLoop::from_table(Arc::clone(&domain), table.clone())
            .map_err(|e| CGroupoidError::NotAGroup(e.to_string()))?;
        let name = |i: usize| domain.label(i).to_string();
        for x in 0..n {
            for y in 0..n {
                let xy = lp.mul(x, y);
                for z in 0..n {
                    if lp.mul(xy, z) != lp.mul(x, lp.mul(y, z)) {
                        return Err(CGroupoidError::NotAGroup(format!(
                            "({0} {1}) {2} != {0} ({1} {2})",
                            name(x),
                            name(y),
                            name(z)
                        )));
                    }
                }
            }
        }

        let subgroup: Vec<usize> = dedup(subgroup);
        let members: BTreeSet<usize> = subgroup.iter().copied().collect();
        if !members.contains(&0) {
            return Err(CGroupoidError::SubgroupMissingIdentity);
        }
        // Closure under products suffices for a finite subset.
        for &a in &subgroup {
            for &b in &subgroup {
                let ab = lp.mul(a, b);
                if !members.contains(&ab) {
                    return Err(CGroupoidError::SubgroupNotClosed(name(a), name(b), name(ab)));
                }
            }
        }

        let mut transversal: Vec<usize> = dedup(transversal);
        let Some(pos) = transversal.iter().position(|&t| t == 0) else {
            return Err(CGroupoidError::TransversalMissingIdentity);
        };
        transversal[..=pos].rotate_right(1);

        let presentation = GroupPresentation {
            domain,
            table,
            subgroup,
            transversal,
        };
        presentation.coset_decomposition()?;
        Ok(presentation)
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn order(&self) -> usize {
        self.domain.size()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    /// Transversal elements, identity first.
    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    fn inverse(&self, g: usize) -> usize {
        (0..self.order())
            .find(|&h| self.mul(g, h) == 0)
            .expect("group elements are invertible")
    }

    /// For every group element `g`, the unique `(h, k)` with
    /// `g = h · transversal[k]` and `h` in the subgroup.
    fn coset_decomposition(&self) -> Result<Vec<(usize, usize)>, CGroupoidError> {
        let n = self.order();
        let in_subgroup: BTreeSet<usize> = self.subgroup.iter().copied().collect();
        let inverses: Vec<usize> = self.transversal.iter().map(|&t| self.inverse(t)).collect();
        let name = |i: usize| self.domain.label(i).to_string();
        let mut out = Vec::with_capacity(n);
        for g in 0..n {
            let mut found: Option<(usize, usize)> = None;
            for (k, &t_inv) in inverses.iter().enumerate() {
                let h = self.mul(g, t_inv);
                if in_subgroup.contains(&h) {
                    if let Some((_, first)) = found {
                        return Err(CGroupoidError::TransversalRepeatsCoset(
                            name(self.transversal[first]),
                            name(self.transversal[k]),
                        ));
                    }
                    found = Some((h, k));
                }
            }
            out.push(found.ok_or_else(|| CGroupoidError::TransversalMissesCoset(name(g)))?);
        }
        Ok(out)
    }
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    v.retain(|x| seen.insert(*x));
    v
}

/// Where `σ` values come from.
#[derive(Debug, Clone)]
enum SigmaSource {
    /// Evaluate `σ_y(h)` pointwise from the loop: `h(x∘y) = σ_y(h)(x) ∘ h(y)`.
    Loop,
    /// Tabulated over an explicit `H`: `values[x * |H| + k]` is `σ_x(elements[k])`.
    Table {
        elements: Vec<Perm>,
        values: Vec<Perm>,
    },
}

/// A c-groupoid with `H` realized as a permutation group on `S`.
#[derive(Debug, Clone)]
pub struct CGroupoid {
    carrier: RightLoop,
    h_generators: Vec<Perm>,
    h_group: Arc<Bsgs>,
    sigma: SigmaSource,
    f_table: Vec<Perm>,
    h_labels: Option<Vec<(String, Perm)>>,
}

impl CGroupoid {
    /// The c-groupoid `(S, G_S, σ, f)` of a right loop.
    pub fn from_right_loop(lp: &RightLoop) -> CGroupoid {
        let n = lp.size();
        let h_generators = lp.torsion_generators();
        let h_group = Arc::new(lp.torsion());
        let f_table = (0..n * n).map(|k| lp.inner_mapping(k / n, k % n)).collect();
        CGroupoid {
            carrier: lp.clone(),
            h_generators,
            h_group,
            sigma: SigmaSource::Loop,
            f_table,
            h_labels: None,
        }
    }

    /// Decomposes products in a group relative to a subgroup and right
    /// transversal: `s·t = f(s,t)·(s∘t)` and `s·h = σ_s(h)·(sθh)`.
    pub fn from_group_transversal(group: &GroupPresentation) -> Result<CGroupoid, CGroupoidError> {
        let parts = group.coset_decomposition()?;
        let reps = group.transversal();
        let n = reps.len();
        let domain = Domain::new(reps.iter().map(|&t| group.domain().label(t).to_string()))?;

        let action = |h: usize| -> Perm {
            Perm::from_fn_unchecked(&domain, |k| parts[group.mul(reps[k], h)].1)
        };
        let mut correspondence: Vec<(usize, Perm)> =
            group.subgroup().iter().map(|&h| (h, action(h))).collect();
        correspondence.sort_by(|a, b| a.1.cmp(&b.1));
        for pair in correspondence.windows(2) {
            if pair[0].1 == pair[1].1 {
                let moved = if pair[0].0 == 0 { pair[1].0 } else { pair[0].0 };
                return Err(CGroupoidError::NotFaithful(group.domain().label(moved).to_string()));
            }
        }
        let image_of = |h: usize| -> Perm {
            correspondence
                .iter()
                .find(|(g, _)| *g == h)
                .map(|(_, p)| p.clone())
                .expect("subgroup component lies in the subgroup")
        };

        let mut table = vec![0; n * n];
        let mut f_table = Vec::with_capacity(n * n);
        for s in 0..n {
            for t in 0..n {
                let (h, u) = parts[group.mul(reps[s], reps[t])];
                table[s * n + t] = u;
                f_table.push(image_of(h));
            }
        }
        let carrier = RightLoop::from_table(Arc::clone(&domain), table)?;

        let elements: Vec<Perm> = correspondence.iter().map(|(_, p)| p.clone()).collect();
        let mut values = Vec::with_capacity(n * elements.len());
        for s in 0..n {
            for (h, _) in &correspondence {
                values.push(image_of(parts[group.mul(reps[s], *h)].0));
            }
        }
        let h_generators: Vec<Perm> = elements.iter().filter(|p| !p.is_identity()).cloned().collect();
        let h_group = Arc::new(Bsgs::new(&domain, &h_generators)?);
        let h_labels = correspondence
            .iter()
            .map(|(h, p)| (group.domain().label(*h).to_string(), p.clone()))
            .collect();
        Ok(CGroupoid {
            carrier,
            h_generators,
            h_group,
            sigma: SigmaSource::Table { elements, values },
            f_table,
            h_labels: Some(h_labels),
        })
    }

    /// The carrier right loop `(S, ∘)`.
    pub fn carrier(&self) -> &RightLoop {
        &self.carrier
    }

    pub fn domain(&self) -> &Arc<Domain> {
        self.carrier.domain()
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn h_generators(&self) -> &[Perm] {
        &self.h_generators
    }

    pub fn h_group(&self) -> &Bsgs {
        &self.h_group
    }

    /// Labels of the abstract subgroup elements and their permutation
    /// images, for c-groupoids decomposed from a group.
    pub fn h_labels(&self) -> Option<&[(String, Perm)]> {
        self.h_labels.as_deref()
    }

    /// `x θ h`.
    #[inline]
    pub fn theta(&self, x: usize, h: &Perm) -> usize {
        h.apply(x)
    }

    /// `x ∘ y`.
    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.carrier.mul(x, y)
    }

    #[inline]
    pub fn f(&self, y: usize, z: usize) -> &Perm {
        &self.f_table[y * self.size() + z]
    }

    /// `σ_x(h)`. `None` when `σ` is tabulated and `h` is not in `H`.
    pub fn sigma(&self, x: usize, h: &Perm) -> Option<Perm> {
        match &self.sigma {
            SigmaSource::Loop => Some(self.carrier.sigma_unchecked(x, h)),
            SigmaSource::Table { elements, values } => elements
                .binary_search(h)
                .ok()
                .map(|k| values[x * elements.len() + k].clone()),
        }
    }

    /// Replaces a single `f(y, z)`; used to probe the axiom checker.
    pub fn with_f(mut self, y: usize, z: usize, value: Perm) -> CGroupoid {
        let n = self.size();
        self.f_table[y * n + z] = value;
        self
    }

    /// Evaluates the nine c-groupoid axioms plus membership of every `f` and
    /// `σ` value in `H`.
    pub fn check_axioms(&self, config: &AxiomConfig) -> AxiomReport {
        AxiomChecker::new(self, config).run()
    }

    /// Materializes the general extension `H × S`, checks it is a group,
    /// decomposes it again along `H × {e}` and `{1} × S`, and compares the
    /// result with `self`.
    pub fn extension_round_trip(&self, config: &RoundTripConfig) -> Result<bool, CGroupoidError> {
        let (h_order, within) = match self.h_group.order_u64() {
            Some(order) => (order as u128, order.saturating_mul(self.size() as u64) <= config.max_elements),
            None => (u128::MAX, false),
        };
        if !within {
            return Err(CGroupoidError::TooLarge {
                size: h_order.saturating_mul(self.size() as u128),
                cap: config.max_elements,
            });
        }
        let mut h_elements = self.h_group.elements();
        h_elements.sort();
        let n = self.size();
        let order = h_elements.len() * n;
        let element = |k: usize| ExtElement::new(h_elements[k / n].clone(), k % n);
        let index = |p: &ExtElement| -> Option<usize> {
            h_elements.binary_search(&p.h).ok().map(|hi| hi * n + p.x)
        };

        let mut table = vec![0; order * order];
        for i in 0..order {
            let p = element(i);
            for j in 0..order {
                let Ok(product) = ext_mul(self, &p, &element(j)) else {
                    return Ok(false);
                };
                match index(&product) {
                    Some(k) => table[i * order + j] = k,
                    None => return Ok(false),
                }
            }
        }

        // group laws: identity at index 0, inverses, associativity
        for i in 0..order {
            if table[i] != i || table[i * order] != i {
                return Ok(false);
            }
            let Ok(inv) = ext_left_inverse(self, &element(i)) else {
                return Ok(false);
            };
            let Some(j) = index(&inv) else { return Ok(false) };
            if table[j * order + i] != 0 || table[i * order + j] != 0 {
                return Ok(false);
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            table[table[a * order + b] * order + c] == table[a * order + table[b * order + c]]
        };
        let triples = (order as u128).pow(3);
        if triples <= config.exhaustive_triples as u128 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Ok(false);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for _ in 0..config.random_triples {
                let (a, b, c) = (
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                );
                if !assoc(a, b, c) {
                    return Ok(false);
                }
            }
        }

        let labels = (0..order).map(|k| format!("h{}.{}", k / n, self.domain().label(k % n)));
        let ext_domain = Domain::new(labels)?;
        let subgroup = (0..h_elements.len()).map(|hi| hi * n).collect();
        let transversal = (0..n).collect();
        let presentation = GroupPresentation::from_indices(ext_domain, table, subgroup, transversal)?;
        let rebuilt = CGroupoid::from_group_transversal(&presentation)?;

        // (h, e) acts on (1, x) as x ↦ x θ h, so its image must be h itself.
        let same = |p: &Perm, q: &Perm| p.images() == q.images();
        let Some(pairs) = rebuilt.h_labels() else { return Ok(false) };
        for (label, image) in pairs {
            let hi: usize = match label.strip_prefix('h').and_then(|l| l.split('.').next()) {
                Some(k) => match k.parse() {
                    Ok(k) => k,
                    Err(_) => return Ok(false),
                },
                None => return Ok(false),
            };
            if !same(image, &h_elements[hi]) {
                return Ok(false);
            }
        }
        for x in 0..n {
            if rebuilt.carrier.row(x) != self.carrier.row(x) {
                return Ok(false);
            }
            for y in 0..n {
                if !same(rebuilt.f(x, y), self.f(x, y)) {
                    return Ok(false);
                }
            }
        }
        for h in &h_elements {
            let rebuilt_h = Perm::from_images(rebuilt.domain(), h.images().to_vec())?;
            for x in 0..n {
                match (rebuilt.sigma(x, &rebuilt_h), self.sigma(x, h)) {
                    (Some(a), Some(b)) if same(&a, &b) => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomConfig {
    /// Largest `|H|` that is enumerated in full for `H`-quantified axioms.
    pub cap: u64,
    /// Random elements of `H` checked when `|H|` exceeds `cap`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            cap: 1_000_000,
            samples: 1_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundTripConfig {
    /// Largest `|H × S|` that is materialized as a Cayley table.
    pub max_elements: u64,
    /// Associativity is checked on all triples when there are at most this
    /// many, otherwise on `random_triples` seeded samples.
    pub exhaustive_triples: u64,
    pub random_triples: usize,
    pub seed: u64,
}

impl Default for RoundTripConfig {
    fn default() -> Self {
        RoundTripConfig {
            max_elements: 1_024,
            exhaustive_triples: 4_096,
            random_triples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    /// No violation on a random sample of `H`.
    Sampled,
    Fail,
}

/// An element of `S` or of `H` appearing in a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Element(usize),
    Subgroup(Perm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub status: AxiomStatus,
    pub counterexample: Option<Vec<Witness>>,
}

/// Result of [`CGroupoid::check_axioms`]. `axioms[k]` is axiom `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axioms: [AxiomOutcome; 9],
    /// Every `f(y, z)` and sampled `σ_x(h)` fixes `e` and lies in `H`.
    pub membership: AxiomOutcome,
    domain: Arc<Domain>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.axioms
            .iter()
            .chain(core::iter::once(&self.membership))
            .all(|o| o.status != AxiomStatus::Fail)
    }

    pub fn exhaustive(&self) -> bool {
        self.axioms.iter().all(|o| o.status == AxiomStatus::Pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = usize> + '_ {
        self.axioms
            .iter()
            .enumerate()
            .filter(|(_, o)| o.status == AxiomStatus::Fail)
            .map(|(k, _)| k + 1)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self
            .axioms
            .iter()
            .enumerate()
            .map(|(k, o)| (format!("axiom {}", k + 1), o))
            .chain(core::iter::once((String::from("membership"), &self.membership)));
        for (name, outcome) in rows {
            let status = match outcome.status {
                AxiomStatus::Pass => "pass",
                AxiomStatus::Sampled => "sampled",
                AxiomStatus::Fail => "FAIL",
            };
            write!(f, "{name}: {status}")?;
            if let Some(witness) = &outcome.counterexample {
                f.write_str(" at")?;
                for w in witness {
                    match w {
                        Witness::Element(x) => write!(f, " {}", self.domain.label(*x))?,
                        Witness::Subgroup(h) => write!(f, " {h}")?,
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct AxiomChecker<'a> {
    c: &'a CGroupoid,
    sample: Vec<Perm>,
    exhaustive: bool,
    identity: Perm,
}

type Check = Result<(), Vec<Witness>>;

impl<'a> AxiomChecker<'a> {
    fn new(c: &'a CGroupoid, config: &AxiomConfig) -> Self {
        let (sample, exhaustive) = verification_set(&c.h_group, config.cap, config.samples, config.seed);
        AxiomChecker {
            c,
            sample,
            exhaustive,
            identity: Perm::identity(c.domain()),
        }
    }

    fn run(&self) -> AxiomReport {
        let h_status = if self.exhaustive {
            AxiomStatus::Pass
        } else {
            AxiomStatus::Sampled
        };
        let outcome = |check: Check, quantifies_h: bool| match check {
            Ok(()) => AxiomOutcome {
                status: if quantifies_h { h_status } else { AxiomStatus::Pass },
                counterexample: None,
            },
            Err(witness) => AxiomOutcome {
                status: AxiomStatus::Fail,
                counterexample: Some(witness),
            },
        };
        AxiomReport {
            axioms: [
                outcome(self.axiom1(), false),
                outcome(self.axiom2(), false),
                outcome(self.axiom3(), true),
                outcome(self.axiom4(), false),
                outcome(self.axiom5(), true),
                outcome(self.axiom6(), false),
                outcome(self.axiom7(), true),
                outcome(self.axiom8(), false),
                outcome(self.axiom9(), true),
            ],
            membership: outcome(self.membership(), true),
            domain: Arc::clone(self.c.domain()),
        }
    }

    fn n(&self) -> usize {
        self.c.size()
    }

    fn sigma(&self, x: usize, h: &Perm) -> Result<Perm, Vec<Witness>> {
        self.c
            .sigma(x, h)
            .ok_or_else(|| vec![Witness::Element(x), Witness::Subgroup(h.clone())])
    }

    /// `x ∘ y = y ⇒ x = e`.
    fn axiom1(&self) -> Check {
        for x in 1..self.n() {
            for y in 0..self.n() {
                if self.c.op(x, y) == y {
                    return Err(vec![Witness::Element(x), Witness::Element(y)]);
                }
            }
        }
        Ok(())
    }

    /// Every `x` has some `x'` with `x' ∘ x = e`.
    fn axiom2(&self) -> Check {
        for x in 0..self.n() {
            if !(0..self.n()).any(|xp| self.c.op(xp, x) == 0) {
                return Err(vec![Witness::Element(x)]);
            }
        }
        Ok(())
    }

    /// `σ_e = I_H`.
    fn axiom3(&self) -> Check {
        for h in &self.sample {
            if self.sigma(0, h)? != *h {
                return Err(vec![Witness::Subgroup(h.clone())]);
            }
        }
        Ok(())
    }

    /// `f(x, e) = f(e, x) = 1`.
    fn axiom4(&self) -> Check {
        for x in 0..self.n() {
            if !self.c.f(x, 0).is_identity() || !self.c.f(0, x).is_identity() {
                return Err(vec![Witness::Element(x)]);
            }
        }
        Ok(())
    }

    /// `σ_x(h1 h2) = σ_x(h1) σ_{xθh1}(h2)`. With `h1` ranging over all of `H`,
    /// letting `h2` range over the generators and `1` is already complete:
    /// the identity then extends to all words in the generators.
    fn axiom5(&self) -> Check {
        let second: Vec<&Perm> = core::iter::once(&self.identity).chain(&self.c.h_generators).collect();
        for x in 0..self.n() {
            for h1 in &self.sample {
                let s1 = self.sigma(x, h1)?;
                let x1 = self.c.theta(x, h1);
                for &h2 in &second {
                    let lhs = self.sigma(x, &h1.then(h2))?;
                    if lhs != s1.then(&self.sigma(x1, h2)?) {
                        return Err(vec![
                            Witness::Element(x),
                            Witness::Subgroup(h1.clone()),
                            Witness::Subgroup(h2.clone()),
                        ]);
                    }
                }
            }
        }
        Ok(())
    }

    /// `(x∘y)∘z = xθf(y,z) ∘ (y∘z)`.
    fn axiom6(&self) -> Check {
        let c = self.c;
        for x in 0..self.n() {
            for y in 0..self.n() {
                for z in 0..self.n() {
                    if c.op(c.op(x, y), z) != c.op(c.theta(x, c.f(y, z)), c.op(y, z)) {
                        return Err(vec![Witness::Element(x), Witness::Element(y), Witness::Element(z)]);
                    }
                }
            }
        }
        Ok(())
    }

    /// `(x∘y)θh = xθσ_y(h) ∘ yθh`.
    fn axiom7(&self) -> Check {
        let c = self.c;
        for h in &self.sample {
            for y in 0..self.n() {
                let sy = self.sigma(y, h)?;
                for x in 0..self.n() {
                    if c.theta(c.op(x, y), h) != c.op(c.theta(x, &sy), c.theta(y, h)) {
                        return Err(vec![Witness::Element(x), Witness::Element(y), Witness::Subgroup(h.clone())]);
                    }
                }
            }
        }
        Ok(())
    }

    /// `f(x,y) f(x∘y,z) = σ_x(f(y,z)) f(xθf(y,z), y∘z)`.
    fn axiom8(&self) -> Check {
        let c = self.c;
        for x in 0..self.n() {
            for y in 0..self.n() {
                let xy = c.op(x, y);
                for z in 0..self.n() {
                    let fyz = c.f(y, z);
                    let lhs = c.f(x, y).then(c.f(xy, z));
                    let rhs = self.sigma(x, fyz)?.then(c.f(c.theta(x, fyz), c.op(y, z)));
                    if lhs != rhs {
                        return Err(vec![Witness::Element(x), Witness::Element(y), Witness::Element(z)]);
                    }
                }
            }
        }
        Ok(())
    }

    /// `f(x,y) σ_{x∘y}(h) = σ_x(σ_y(h)) f(xθσ_y(h), yθh)`.
    fn axiom9(&self) -> Check {
        let c = self.c;
        for h in &self.sample {
            for y in 0..self.n() {
                let sy = self.sigma(y, h)?;
                let yh = c.theta(y, h);
                for x in 0..self.n() {
                    let lhs = c.f(x, y).then(&self.sigma(c.op(x, y), h)?);
                    let rhs = self.sigma(x, &sy)?.then(c.f(c.theta(x, &sy), yh));
                    if lhs != rhs {
                        return Err(vec![Witness::Element(x), Witness::Element(y), Witness::Subgroup(h.clone())]);
                    }
                }
            }
        }
        Ok(())
    }

    fn membership(&self) -> Check {
        let group = &self.c.h_group;
        for y in 0..self.n() {
            for z in 0..self.n() {
                let f = self.c.f(y, z);
                if !f.fixes(0) || !group.contains(f) {
                    return Err(vec![Witness::Element(y), Witness::Element(z), Witness::Subgroup(f.clone())]);
                }
            }
        }
        let hs: Box<dyn Iterator<Item = &Perm>> = if self.exhaustive {
            Box::new(self.sample.iter())
        } else {
            Box::new(self.c.h_generators.iter())
        };
        for h in hs {
            for x in 0..self.n() {
                let s = self.sigma(x, h)?;
                if !s.fixes(0) || !group.contains(&s) {
                    return Err(vec![Witness::Element(x), Witness::Subgroup(h.clone())]);
                }
            }
        }
        Ok(())
    }
}
