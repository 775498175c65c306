//! Finite right loops given by Cayley tables, with their right inner
//! mappings `f(y, z)`, the twisting maps `σ_y(h)` and the group torsion.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::permutation::{Bsgs, Domain, Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoopError {
    #[error(transparent)]
    Domain(#[from] PermError),
    #[error("a right loop needs at least {min} elements, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("table has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("row `{row}` has {found} entries, expected {expected}")]
    RowLength {
        row: String,
        expected: usize,
        found: usize,
    },
    #[error("identity row violated: {identity} o {column} = {found}, expected {column}")]
    IdentityRow {
        identity: String,
        column: String,
        found: String,
    },
    #[error("identity column violated: {row} o {identity} = {found}, expected {row}")]
    IdentityColumn {
        identity: String,
        row: String,
        found: String,
    },
    #[error("column `{column}` is not a bijection: {first} o {column} = {second} o {column} = {value}")]
    ColumnNotBijective {
        column: String,
        value: String,
        first: String,
        second: String,
    },
    #[error("permutation {perm} does not fix the identity `{identity}`")]
    MovesIdentity { perm: String, identity: String },
}

/// A finite right loop. Index 0 is always the identity `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightLoop {
    domain: Arc<Domain>,
    table: Vec<usize>,
    /// `rdiv[y * n + x]` is the unique `z` with `z ∘ x = y`.
    rdiv: Vec<usize>,
}

impl RightLoop {
    /// Validates a table given by labels. The identity is located in the
    /// table and moved to index 0; all other labels keep their order.
    pub fn validate<L, R, C>(labels: &[L], rows: &[R]) -> Result<RightLoop, LoopError>
    where
        L: AsRef<str>,
        R: AsRef<[C]>,
        C: AsRef<str>,
    {
        let listed = Domain::new(labels.iter().map(|l| l.as_ref().to_string()))?;
        let n = listed.size();
        if rows.len() != n {
            return Err(LoopError::RowCount {
                expected: n,
                found: rows.len(),
            });
        }
        let mut table = vec![0; n * n];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(LoopError::RowLength {
                    row: listed.label(i).to_string(),
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, cell) in row.iter().enumerate() {
                table[i * n + j] = listed.lookup(cell.as_ref())?;
            }
        }

        let identity = (0..n)
            .find(|&u| (0..n).all(|j| table[u * n + j] == j && table[j * n + u] == j))
            .or_else(|| listed.index_of("e"))
            .unwrap_or(0);
        let order: Vec<usize> = core::iter::once(identity)
            .chain((0..n).filter(|&i| i != identity))
            .collect();
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let domain = Domain::new(order.iter().map(|&old| listed.label(old).to_string()))?;
        let mut normalized = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                normalized[position[i] * n + position[j]] = position[table[i * n + j]];
            }
        }
        RightLoop::from_table(domain, normalized)
    }

    /// Builds a loop from a row-major index table whose identity is index 0.
    pub fn from_table(domain: Arc<Domain>, table: Vec<usize>) -> Result<RightLoop, LoopError> {
        let n = domain.size();
        if table.len() != n * n {
            return Err(LoopError::RowCount {
                expected: n * n,
                found: table.len(),
            });
        }
        let name = |i: usize| domain.label(i).to_string();
        if let Some((j, &found)) = table[..n].iter().enumerate().find(|&(j, &v)| v != j) {
            return Err(LoopError::IdentityRow {
                identity: name(0),
                column: name(j),
                found: name(found),
            });
        }
        for i in 0..n {
            if table[i * n] != i {
                return Err(LoopError::IdentityColumn {
                    identity: name(0),
                    row: name(i),
                    found: name(table[i * n]),
                });
            }
        }
        let mut rdiv = vec![usize::MAX; n * n];
        for x in 0..n {
            for z in 0..n {
                let y = table[z * n + x];
                if y >= n {
                    return Err(PermError::NotABijection(n).into());
                }
                let slot = &mut rdiv[y * n + x];
                if *slot != usize::MAX {
                    return Err(LoopError::ColumnNotBijective {
                        column: name(x),
                        value: name(y),
                        first: name(*slot),
                        second: name(z),
                    });
                }
                *slot = z;
            }
        }
        Ok(RightLoop {
            domain,
            table,
            rdiv,
        })
    }

    /// The loop on `{e, x1, .., x(n-1)}` with `x_i ∘ x_j = x_i` for `i ≠ j`
    /// and `x_i ∘ x_i = e`.
    pub fn example(n: usize) -> Result<RightLoop, LoopError> {
        if n < 2 {
            return Err(LoopError::TooSmall { min: 2, got: n });
        }
        let domain = Domain::indexed(n);
        let mut table = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = match (i, j) {
                    (0, j) => j,
                    (i, 0) => i,
                    (i, j) if i == j => 0,
                    (i, _) => i,
                };
            }
        }
        RightLoop::from_table(domain, table)
    }

    /// A seeded random right loop: every non-identity column is an
    /// independent random bijection sending `e` to the column label.
    pub fn random(n: usize, seed: u64) -> Result<RightLoop, LoopError> {
        if n < 2 {
            return Err(LoopError::TooSmall { min: 2, got: n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Domain::indexed(n);
        let mut table = vec![0; n * n];
        for i in 0..n {
            table[i * n] = i;
        }
        for j in 1..n {
            let mut rest: Vec<usize> = (0..n).filter(|&v| v != j).collect();
            rest.shuffle(&mut rng);
            table[j] = j;
            for (i, v) in (1..n).zip(rest) {
                table[i * n + j] = v;
            }
        }
        RightLoop::from_table(domain, table)
    }

    /// The loop underlying a group Cayley table: `Z/n` with `e = 0`.
    pub fn cyclic(n: usize) -> Result<RightLoop, LoopError> {
        if n < 1 {
            return Err(LoopError::TooSmall { min: 1, got: n });
        }
        let domain = Domain::indexed(n);
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        RightLoop::from_table(domain, table)
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.size()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn label(&self, i: usize) -> &str {
        self.domain.label(i)
    }

    /// `x ∘ y`.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size() + y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        let n = self.size();
        &self.table[x * n..(x + 1) * n]
    }

    /// The unique `z` with `z ∘ x = y`.
    #[inline]
    pub fn right_divide(&self, y: usize, x: usize) -> usize {
        self.rdiv[y * self.size() + x]
    }

    /// The `x'` with `x' ∘ x = e`.
    pub fn left_inverse(&self, x: usize) -> usize {
        self.right_divide(0, x)
    }

    /// Whether `∘` is associative, i.e. the table is a group table.
    pub fn is_associative(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))))
        })
    }

    /// The right inner mapping `f(y, z)`: `x ↦ ((x∘y)∘z) / (y∘z)`.
    pub fn inner_mapping(&self, y: usize, z: usize) -> Perm {
        let yz = self.mul(y, z);
        Perm::from_fn_unchecked(&self.domain, |x| {
            self.right_divide(self.mul(self.mul(x, y), z), yz)
        })
    }

    /// `σ_y(h)`: the permutation `x ↦ h(x∘y) / h(y)`.
    pub fn sigma(&self, y: usize, h: &Perm) -> Result<Perm, LoopError> {
        if !h.domain().labels().eq(self.domain.labels()) {
            return Err(PermError::DomainMismatch.into());
        }
        if !h.fixes(0) {
            return Err(LoopError::MovesIdentity {
                perm: h.to_string(),
                identity: self.label(0).to_string(),
            });
        }
        Ok(self.sigma_unchecked(y, h))
    }

    /// [`RightLoop::sigma`] for callers that already know `h` fixes `e`.
    #[inline]
    pub fn sigma_unchecked(&self, y: usize, h: &Perm) -> Perm {
        let hy = h.apply(y);
        Perm::from_fn_unchecked(&self.domain, |x| {
            self.right_divide(h.apply(self.mul(x, y)), hy)
        })
    }

    /// Distinct non-identity right inner mappings, in order of first
    /// appearance scanning `(y, z)` row-major.
    pub fn torsion_generators(&self) -> Vec<Perm> {
        let n = self.size();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for y in 0..n {
            for z in 0..n {
                let f = self.inner_mapping(y, z);
                if !f.is_identity() && seen.insert(f.clone()) {
                    out.push(f);
                }
            }
        }
        out
    }

    /// Schreier–Sims structure for the group torsion `G_S`.
    pub fn torsion(&self) -> Bsgs {
        Bsgs::new(&self.domain, &self.torsion_generators())
            .expect("inner mappings share the loop domain")
    }

    /// Structural classification by the behaviour of `σ_x` for `x ≠ e`.
    pub fn classify(&self, config: &ClassifyConfig) -> LoopClass {
        let torsion = self.torsion();
        let (sample, exhaustive) = verification_set(&torsion, config.cap, config.samples, config.seed);
        let group_order = torsion.order();
        let non_identity: Vec<usize> = (1..self.size()).collect();

        let gyro = non_identity
            .iter()
            .all(|&x| sample.iter().all(|h| self.sigma_unchecked(x, h) == *h));
        if gyro {
            return LoopClass {
                kind: LoopKind::RightGyrogroup,
                exhaustive,
                group_order,
            };
        }

        let twisted = non_identity.first().and_then(|&witness| {
            let eta: Vec<Perm> = sample.iter().map(|h| self.sigma_unchecked(witness, h)).collect();
            let uniform = non_identity[1..].iter().all(|&x| {
                sample
                    .iter()
                    .zip(&eta)
                    .all(|(h, eh)| self.sigma_unchecked(x, h) == *eh)
            });
            let involutive = sample
                .iter()
                .zip(&eta)
                .all(|(h, eh)| self.sigma_unchecked(witness, eh) == *h);
            let multiplicative = sample.iter().zip(&eta).all(|(h, eh)| {
                torsion.generators().iter().all(|g| {
                    self.sigma_unchecked(witness, &h.then(g))
                        == eh.then(&self.sigma_unchecked(witness, g))
                })
            });
            (uniform && involutive && multiplicative).then_some(witness)
        });

        let kind = match twisted {
            Some(witness) => LoopKind::TwistedRightGyrogroup { eta_witness: witness },
            None => LoopKind::Generic,
        };
        LoopClass {
            kind,
            exhaustive,
            group_order,
        }
    }
}

/// Elements of `group` used to check statements quantified over the whole
/// group: every element when the order is at most `cap`, otherwise the
/// identity, the generators and `samples` seeded uniform random elements.
/// The flag reports whether the set is the whole group.
pub fn verification_set(group: &Bsgs, cap: u64, samples: usize, seed: u64) -> (Vec<Perm>, bool) {
    match group.order_u64() {
        Some(order) if order <= cap => (group.elements(), true),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut set = vec![Perm::identity(group.domain())];
            set.extend(group.generators().iter().cloned());
            set.extend((0..samples).map(|_| group.random_element(&mut rng)));
            (set, false)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyConfig {
    /// Largest torsion order that is enumerated in full.
    pub cap: u64,
    /// Random torsion elements checked when the order exceeds `cap`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            cap: 1_000_000,
            samples: 1_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    Generic,
    /// `σ_x` is the identity map of `G_S` for every `x ≠ e`.
    RightGyrogroup,
    /// `σ_x` is one fixed non-trivial involutory automorphism `η` of `G_S`
    /// for every `x ≠ e`; `η = σ_{eta_witness}`.
    TwistedRightGyrogroup { eta_witness: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopClass {
    pub kind: LoopKind,
    /// False when the verdict rests on a random sample of `G_S`.
    pub exhaustive: bool,
    pub group_order: BigUint,
}

impl LoopClass {
    /// `η(h)` for a twisted right gyrogroup.
    pub fn eta(&self, lp: &RightLoop, h: &Perm) -> Option<Perm> {
        match self.kind {
            LoopKind::TwistedRightGyrogroup { eta_witness } => Some(lp.sigma_unchecked(eta_witness, h)),
            _ => None,
        }
    }
}
