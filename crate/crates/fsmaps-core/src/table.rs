//! Graded count tables shared by the extraction pipeline, the census oracle
//! and the closed-form regressions.
//!
//! An entry is keyed by the vertex count and the internal-face degree
//! profile; the boundary degrees and genus are fixed per table. Counts are
//! rationals: integers for rooted maps, sums of inverse automorphism orders
//! for closed ones.

use crate::rational::Rat;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableKind {
    Ordinary,
    FullySimple,
    Closed,
}

impl TableKind {
    pub fn name(&self) -> &'static str {
        match self {
            TableKind::Ordinary => "ordinary",
            TableKind::FullySimple => "fully_simple",
            TableKind::Closed => "closed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Recursion,
    Census,
    ClosedForm,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Recursion => "tr",
            Provenance::Census => "oracle",
            Provenance::ClosedForm => "closed_form",
        }
    }
}

/// Internal-face degree profile: sorted (degree, count) pairs, counts > 0.
pub type Profile = Vec<(usize, usize)>;

pub fn profile_edges_contribution(profile: &Profile) -> usize {
    profile.iter().map(|(d, c)| d * c).sum()
}

pub fn profile_faces(profile: &Profile) -> usize {
    profile.iter().map(|(_, c)| c).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub kind: TableKind,
    pub g: u32,
    pub boundary: Vec<usize>,
    pub entries: BTreeMap<(u32, Profile), Rat>,
    pub provenance: Provenance,
    /// Exclusive bound on the graded exponent the producing series knows;
    /// None for exhaustive sources (census, closed forms).
    pub window: Option<i64>,
}

impl CountTable {
    pub fn new(kind: TableKind, g: u32, boundary: Vec<usize>, provenance: Provenance) -> Self {
        CountTable {
            kind,
            g,
            boundary,
            entries: BTreeMap::new(),
            provenance,
            window: None,
        }
    }

    pub fn insert(&mut self, v: u32, profile: Profile, count: Rat) {
        if !count.is_zero() {
            self.entries.insert((v, profile), count);
        }
    }

    pub fn get(&self, v: u32, profile: &Profile) -> Rat {
        self.entries
            .get(&(v, profile.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Entries agree exactly (missing entries count as zero).
    pub fn agrees_with(&self, other: &CountTable) -> bool {
        let keys: alloc::collections::BTreeSet<_> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .cloned()
            .collect();
        keys.into_iter().all(|k| {
            let a = self.entries.get(&k).cloned().unwrap_or_else(Rat::zero);
            let b = other.entries.get(&k).cloned().unwrap_or_else(Rat::zero);
            a == b
        })
    }

    pub fn render_profile(profile: &Profile) -> String {
        if profile.is_empty() {
            return String::from("-");
        }
        let parts: Vec<String> = profile.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        parts.join(",")
    }
}
