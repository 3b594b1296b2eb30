use serde::Serialize;

use crate::{Error, Result};

/// What a constrained position must hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Slot {
    Zero,
    One,
    /// Anything but the digit of θ at the same position.
    NotTheta,
    /// Exactly the digit of θ at the same position.
    ThetaCopy,
}

impl Slot {
    pub fn is_forbidden_type(self) -> bool {
        self == Slot::NotTheta
    }
}

/// `count` copies of `pattern` starting at offsets `first, first + spacing, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub first: u128,
    pub spacing: u128,
    pub count: u128,
    pub pattern: Vec<Slot>,
}

impl Group {
    fn single(first: u128, pattern: Vec<Slot>) -> Self {
        Group { first, spacing: pattern.len() as u128, count: 1, pattern }
    }

    fn last(&self) -> u128 {
        self.first + (self.count - 1) * self.spacing + self.pattern.len() as u128 - 1
    }

    fn slot(&self, o: u128) -> Option<Slot> {
        if self.count == 0 || o < self.first || o > self.last() {
            return None;
        }
        let d = o - self.first;
        let (t, j) = (d / self.spacing, d % self.spacing);
        (t < self.count && (j as usize) < self.pattern.len()).then(|| self.pattern[j as usize])
    }

    /// Occurrences of pattern index `j` at offsets `<= o`.
    fn occurrences(&self, j: usize, o: u128) -> u128 {
        let p = self.first + j as u128;
        if self.count == 0 || o < p {
            return 0;
        }
        ((o - p) / self.spacing + 1).min(self.count)
    }

    /// Offsets in `[lo, hi]` where this group places pattern index `j`.
    pub fn positions_in(&self, j: usize, lo: u128, hi: u128) -> impl Iterator<Item = u128> + '_ {
        let p = self.first + j as u128;
        let t0 = if lo <= p { 0 } else { (lo - p).div_ceil(self.spacing) };
        (t0..self.count).map(move |t| p + t * self.spacing).take_while(move |&x| x <= hi)
    }
}

/// Constraint layout of one block of the construction, offsets `1..=len`
/// relative to the global position `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordTemplate {
    pub start: u128,
    pub len: u128,
    pub groups: Vec<Group>,
}

impl WordTemplate {
    fn checked(start: u128, len: u128, groups: Vec<Group>) -> Result<Self> {
        let mut gs: Vec<&Group> = groups.iter().filter(|g| g.count > 0).collect();
        gs.sort_by_key(|g| g.first);
        let mut prev_end = 0u128;
        for g in &gs {
            if g.count > 1 && g.spacing < g.pattern.len() as u128 {
                return Err(Error::Internal(format!("self-overlapping group at offset {}", g.first)));
            }
            if g.first <= prev_end || g.last() > len {
                return Err(Error::Internal(format!(
                    "forced positions collide near offset {} of the block at {start}",
                    g.first
                )));
            }
            prev_end = g.last();
        }
        Ok(WordTemplate { start, len, groups: groups.into_iter().filter(|g| g.count > 0).collect() })
    }

    /// `𝒲_0`: separator pairs `(0, 1)` ending at multiples of the spacing, and `01` at the end.
    pub(crate) fn w0(n0: u128, spacing: u128, r: u128) -> Result<Self> {
        let mut groups = vec![];
        if r > 0 {
            groups.push(Group {
                first: spacing - 1,
                spacing,
                count: r,
                pattern: vec![Slot::Zero, Slot::One],
            });
        }
        groups.push(Group::single(n0 - 1, vec![Slot::Zero, Slot::One]));
        Self::checked(0, n0, groups)
    }

    /// `𝒲_{2k+1}`: `0^m 1 ≠θ`, periodic `(0, 1, ≠θ)`, terminal `(0, 1, ≠θ)`.
    pub(crate) fn odd(start: u128, len: u128, m: u128, spacing: u128, r: u128) -> Result<Self> {
        let triple = vec![Slot::Zero, Slot::One, Slot::NotTheta];
        let groups = vec![
            Group { first: 1, spacing: 1, count: m, pattern: vec![Slot::Zero] },
            Group::single(m + 1, vec![Slot::One, Slot::NotTheta]),
            Group { first: m + spacing, spacing, count: r, pattern: triple.clone() },
            Group::single(len - 2, triple),
        ];
        Self::checked(start, len, groups)
    }

    /// `𝒲_{2k+2}`: θ-copy of length `m'`, `r + 1` periodic `(≠θ, 0, 1)`, terminal `(≠θ, 0, 1)`.
    pub(crate) fn even(start: u128, len: u128, mp: u128, spacing: u128, r: u128) -> Result<Self> {
        let triple = vec![Slot::NotTheta, Slot::Zero, Slot::One];
        let groups = vec![
            Group { first: 1, spacing: 1, count: mp, pattern: vec![Slot::ThetaCopy] },
            Group { first: mp + 1, spacing, count: r + 1, pattern: triple.clone() },
            Group::single(len - 2, triple),
        ];
        Self::checked(start, len, groups)
    }

    /// Constraint at offset `o` (1-based); `None` means free.
    pub fn slot(&self, o: u128) -> Option<Slot> {
        self.groups.iter().find_map(|g| g.slot(o))
    }

    /// `(fixed, forbidden)` positions among offsets `1..=o`.
    pub fn counts_upto(&self, o: u128) -> (u128, u128) {
        let (mut fixed, mut forb) = (0, 0);
        for g in &self.groups {
            for (j, s) in g.pattern.iter().enumerate() {
                let c = g.occurrences(j, o);
                if s.is_forbidden_type() {
                    forb += c;
                } else {
                    fixed += c;
                }
            }
        }
        (fixed, forb)
    }

    pub fn counts(&self) -> (u128, u128) {
        self.counts_upto(self.len)
    }
}
