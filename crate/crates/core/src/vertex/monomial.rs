//! Canonical PBW monomials and the global intern table.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use parking_lot::RwLock;

/// One tensor factor's share of a monomial. Derivative orders are kept sorted
/// in descending order so that structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    /// βγ system: factors `∂^m β` and `∂^m γ`.
    BetaGamma { beta: Vec<u32>, gamma: Vec<u32> },
    /// η/λ± algebra: factors `∂^m η`, jets `∂^m λ₊` with `m ≥ 1`, and the power
    /// `λ₊^charge` (negative charge means powers of `λ₋ = λ₊⁻¹`).
    El {
        eta: Vec<u32>,
        jets: Vec<u32>,
        charge: i32,
    },
}

impl Part {
    pub fn empty_like(&self) -> Part {
        match self {
            Part::BetaGamma { .. } => Part::BetaGamma {
                beta: Vec::new(),
                gamma: Vec::new(),
            },
            Part::El { .. } => Part::El {
                eta: Vec::new(),
                jets: Vec::new(),
                charge: 0,
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Part::BetaGamma { beta, gamma } => beta.is_empty() && gamma.is_empty(),
            Part::El { eta, jets, charge } => eta.is_empty() && jets.is_empty() && *charge == 0,
        }
    }

    fn vectors(&self) -> &[u32] {
        match self {
            Part::BetaGamma { beta, .. } => beta,
            Part::El { eta, .. } => eta,
        }
    }

    fn vectors_mut(&mut self) -> &mut Vec<u32> {
        match self {
            Part::BetaGamma { beta, .. } => beta,
            Part::El { eta, .. } => eta,
        }
    }

    fn same_kind(&self, other: &Part) -> bool {
        matches!(
            (self, other),
            (Part::BetaGamma { .. }, Part::BetaGamma { .. }) | (Part::El { .. }, Part::El { .. })
        )
    }
}

/// A vector-type generator derivative `∂^order v`, where `v` is the β of a βγ
/// slot or the η of an EL slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VecGen {
    pub slot: usize,
    pub order: u32,
}

/// A right-nested normally ordered product of generator derivatives, read in the
/// fixed global order: slot by slot, vectors (descending order) before functions.
/// Inside an EL slot the functions are jets (descending) then the charge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    parts: Vec<Part>,
}

pub(crate) fn insert_desc(v: &mut Vec<u32>, x: u32) {
    let pos = v.partition_point(|&y| y > x);
    v.insert(pos, x);
}

pub(crate) fn remove_one(v: &mut Vec<u32>, x: u32) {
    let pos = v.iter().position(|&y| y == x).expect("order present");
    v.remove(pos);
}

impl Monomial {
    pub fn from_parts(mut parts: Vec<Part>) -> Self {
        for p in &mut parts {
            match p {
                Part::BetaGamma { beta, gamma } => {
                    beta.sort_unstable_by(|a, b| b.cmp(a));
                    gamma.sort_unstable_by(|a, b| b.cmp(a));
                }
                Part::El { eta, jets, .. } => {
                    eta.sort_unstable_by(|a, b| b.cmp(a));
                    jets.sort_unstable_by(|a, b| b.cmp(a));
                    assert!(jets.iter().all(|&m| m >= 1), "jet orders start at 1");
                }
            }
        }
        Monomial { parts }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn is_vacuum(&self) -> bool {
        self.parts.iter().all(Part::is_empty)
    }

    pub fn vector_count(&self) -> usize {
        self.parts.iter().map(|p| p.vectors().len()).sum()
    }

    pub fn is_function(&self) -> bool {
        self.parts.iter().all(|p| p.vectors().is_empty())
    }

    /// Same number and kinds of tensor factors.
    pub fn same_layout(&self, other: &Monomial) -> bool {
        self.parts.len() == other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a.same_kind(b))
    }

    pub fn vacuum_like(&self) -> Monomial {
        Monomial {
            parts: self.parts.iter().map(Part::empty_like).collect(),
        }
    }

    /// Splits off the leftmost vector factor: `self = :v rest:`.
    pub fn split_first_vector(&self) -> Option<(VecGen, Monomial)> {
        for (slot, p) in self.parts.iter().enumerate() {
            if let Some(&order) = p.vectors().first() {
                let mut rest = self.clone();
                rest.parts[slot].vectors_mut().remove(0);
                return Some((VecGen { slot, order }, rest));
            }
        }
        None
    }

    /// `:v self:` for a vector generator `v`. Creation modes of vectors commute,
    /// so this is multiset insertion.
    pub fn with_vector(&self, v: VecGen) -> Monomial {
        let mut out = self.clone();
        insert_desc(out.parts[v.slot].vectors_mut(), v.order);
        out
    }

    /// Commutative product of two function-sector monomials.
    pub fn function_product(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.is_function() && other.is_function());
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| match (a, b) {
                (
                    Part::BetaGamma { gamma: ga, .. },
                    Part::BetaGamma { gamma: gb, .. },
                ) => Part::BetaGamma {
                    beta: Vec::new(),
                    gamma: merge_desc(ga, gb),
                },
                (
                    Part::El {
                        jets: ja,
                        charge: ca,
                        ..
                    },
                    Part::El {
                        jets: jb,
                        charge: cb,
                        ..
                    },
                ) => Part::El {
                    eta: Vec::new(),
                    jets: merge_desc(ja, jb),
                    charge: ca + cb,
                },
                _ => panic!("layout mismatch"),
            })
            .collect();
        Monomial { parts }
    }

    /// Conformal-weight grading.
    pub fn grading(&self) -> u32 {
        self.parts
            .iter()
            .map(|p| match p {
                Part::BetaGamma { beta, gamma } => {
                    beta.iter().map(|m| m + 1).sum::<u32>() + gamma.iter().sum::<u32>()
                }
                Part::El { eta, jets, .. } => {
                    eta.iter().map(|m| m + 1).sum::<u32>() + jets.iter().sum::<u32>()
                }
            })
            .sum()
    }

    pub(crate) fn parts_mut(&mut self) -> &mut Vec<Part> {
        &mut self.parts
    }
}

fn merge_desc(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// Interned handle to a [`Monomial`]. Ids are stable for the process lifetime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoId(u32);

#[derive(Default)]
struct Interner {
    items: Vec<Arc<Monomial>>,
    index: HashMap<Arc<Monomial>, u32>,
}

static INTERNER: LazyLock<RwLock<Interner>> = LazyLock::new(Default::default);

impl MonoId {
    pub fn intern(m: Monomial) -> MonoId {
        if let Some(&id) = INTERNER.read().index.get(&m) {
            return MonoId(id);
        }
        let mut table = INTERNER.write();
        if let Some(&id) = table.index.get(&m) {
            return MonoId(id);
        }
        let id = u32::try_from(table.items.len()).expect("intern table overflow");
        let m = Arc::new(m);
        table.items.push(m.clone());
        table.index.insert(m, id);
        MonoId(id)
    }

    pub fn get(self) -> Arc<Monomial> {
        INTERNER.read().items[self.0 as usize].clone()
    }
}

/// Number of distinct monomials interned so far.
pub fn interned_count() -> usize {
    INTERNER.read().items.len()
}
