//! Iterated-revision postulates checked on concrete (before, formula, after)
//! triples, plus sufficient syntactic conditions on graph transformations
//! (see [`conditions`]).
//!
//! Every failing report carries witnesses sorted by world position, and
//! [`PostulateReport::reverify`] re-checks each one against the raw
//! definition without going through the sweep code.

pub mod conditions;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::formula::Formula;
use crate::par::Execution;
use crate::semantics::{ModelError, PreferenceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Postulate {
    #[serde(rename = "DP-1")]
    Dp1,
    #[serde(rename = "DP-2")]
    Dp2,
    #[serde(rename = "DP-3")]
    Dp3,
    #[serde(rename = "DP-4")]
    Dp4,
    #[serde(rename = "Rec")]
    Rec,
    #[serde(rename = "Ind")]
    Ind,
    #[serde(rename = "Faith")]
    Faith,
    #[serde(rename = "CB")]
    Cb,
}

impl Postulate {
    pub const ALL: [Postulate; 8] = [
        Postulate::Dp1,
        Postulate::Dp2,
        Postulate::Dp3,
        Postulate::Dp4,
        Postulate::Rec,
        Postulate::Ind,
        Postulate::Faith,
        Postulate::Cb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Postulate::Dp1 => "DP-1",
            Postulate::Dp2 => "DP-2",
            Postulate::Dp3 => "DP-3",
            Postulate::Dp4 => "DP-4",
            Postulate::Rec => "Rec",
            Postulate::Ind => "Ind",
            Postulate::Faith => "Faith",
            Postulate::Cb => "CB",
        }
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Postulate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Postulate::ALL
            .into_iter()
            .find(|p| {
                p.name()
                    .chars()
                    .filter(|c| c.is_ascii_alphanumeric())
                    .collect::<String>()
                    .to_ascii_lowercase()
                    == norm
            })
            .ok_or_else(|| format!("unknown postulate `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A pair `(left, right)` for which the pairwise condition fails.
    Pair { left: String, right: String },
    /// A world in exactly one of the two minimal sets compared by Faith.
    World { world: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostulateReport {
    pub postulate: Postulate,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl PostulateReport {
    /// True when every witness is a genuine violation.
    pub fn reverify(&self, m: &PreferenceModel, f: &Formula, m2: &PreferenceModel) -> bool {
        self.holds == self.witnesses.is_empty()
            && self
                .witnesses
                .iter()
                .all(|w| witness_violates(self.postulate, m, f, m2, w))
    }
}

/// Checks one postulate. `m` and `m2` must have the same frame.
pub fn check(
    postulate: Postulate,
    m: &PreferenceModel,
    f: &Formula,
    m2: &PreferenceModel,
) -> Result<PostulateReport, ModelError> {
    if !m.same_frame(m2) {
        return Err(ModelError::FrameMismatch);
    }
    let ext = m.extension(f);
    let witnesses = match postulate {
        Postulate::Faith => faith_witnesses(m, &ext, m2),
        Postulate::Cb => {
            let mut min = vec![false; m.len()];
            for w in m.min_of(&ext) {
                min[w] = true;
            }
            pairwise(m, |a, b| !min[a] && !min[b] && m.leq(a, b) != m2.leq(a, b))
        }
        Postulate::Dp1 => pairwise(m, |a, b| ext[a] && ext[b] && m2.leq(a, b) != m.leq(a, b)),
        Postulate::Dp2 => pairwise(m, |a, b| !ext[a] && !ext[b] && m2.leq(a, b) != m.leq(a, b)),
        Postulate::Dp3 => pairwise(m, |a, b| {
            ext[a] && !ext[b] && m.less(a, b) && !m2.less(a, b)
        }),
        Postulate::Dp4 => pairwise(m, |a, b| ext[a] && !ext[b] && m.leq(a, b) && !m2.leq(a, b)),
        Postulate::Rec => pairwise(m, |a, b| ext[a] && !ext[b] && !m2.less(a, b)),
        Postulate::Ind => pairwise(m, |a, b| ext[a] && !ext[b] && m.leq(a, b) && !m2.less(a, b)),
    };
    Ok(PostulateReport {
        postulate,
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// Checks several postulates on the same triple.
pub fn check_all(
    postulates: &[Postulate],
    m: &PreferenceModel,
    f: &Formula,
    m2: &PreferenceModel,
) -> Result<Vec<PostulateReport>, ModelError> {
    postulates.iter().map(|p| check(*p, m, f, m2)).collect()
}

macro_rules! checker {
    ($($name:ident => $p:expr),* $(,)?) => {
        $(
            pub fn $name(
                m: &PreferenceModel,
                f: &Formula,
                m2: &PreferenceModel,
            ) -> Result<PostulateReport, ModelError> {
                check($p, m, f, m2)
            }
        )*
    };
}

checker! {
    check_dp1 => Postulate::Dp1,
    check_dp2 => Postulate::Dp2,
    check_dp3 => Postulate::Dp3,
    check_dp4 => Postulate::Dp4,
    check_rec => Postulate::Rec,
    check_ind => Postulate::Ind,
    check_faith => Postulate::Faith,
    check_cb => Postulate::Cb,
}

/// Models at least this large have their rows checked in parallel.
const PARALLEL_ROWS: usize = 64;

/// Pairs `(a, b)` flagged by `bad`, in world order.
fn pairwise(m: &PreferenceModel, bad: impl Fn(usize, usize) -> bool + Sync + Send) -> Vec<Witness> {
    let n = m.len();
    let execution = if n >= PARALLEL_ROWS {
        Execution::default()
    } else {
        Execution::Sequential
    };
    execution
        .map_range(n, |a| {
            (0..n)
                .filter(|b| bad(a, *b))
                .map(|b| Witness::Pair {
                    left: m.world(a).id.clone(),
                    right: m.world(b).id.clone(),
                })
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
}

fn faith_witnesses(m: &PreferenceModel, ext: &[bool], m2: &PreferenceModel) -> Vec<Witness> {
    if !ext.iter().any(|x| *x) {
        return Vec::new();
    }
    let before = m.min_of(ext);
    let after = m2.min_of(&vec![true; m2.len()]);
    (0..m.len())
        .filter(|w| before.contains(w) != after.contains(w))
        .map(|w| Witness::World {
            world: m.world(w).id.clone(),
        })
        .collect()
}

/// Re-derives a violation straight from the postulate's wording.
fn witness_violates(
    postulate: Postulate,
    m: &PreferenceModel,
    f: &Formula,
    m2: &PreferenceModel,
    witness: &Witness,
) -> bool {
    let sig = m.signature();
    let sat = |i: usize| f.eval(sig, m.world(i).valuation);
    let lt = |model: &PreferenceModel, a: usize, b: usize| model.leq(a, b) && !model.leq(b, a);
    // Minimal elements of `set` under `model`, by direct search.
    let minimal = |model: &PreferenceModel, set: &dyn Fn(usize) -> bool, w: usize| {
        set(w) && (0..model.len()).all(|v| !(set(v) && lt(model, v, w)))
    };
    match witness {
        Witness::Pair { left, right } => {
            let (Some(a), Some(b)) = (m.index_of(left), m.index_of(right)) else {
                return false;
            };
            let (wa, wb) = (sat(a), sat(b));
            match postulate {
                Postulate::Dp1 => wa && wb && (m2.leq(a, b) != m.leq(a, b)),
                Postulate::Dp2 => !wa && !wb && (m2.leq(a, b) != m.leq(a, b)),
                Postulate::Dp3 => wa && !wb && lt(m, a, b) && !lt(m2, a, b),
                Postulate::Dp4 => wa && !wb && m.leq(a, b) && !m2.leq(a, b),
                Postulate::Rec => wa && !wb && !lt(m2, a, b),
                Postulate::Ind => wa && !wb && m.leq(a, b) && !lt(m2, a, b),
                Postulate::Cb => {
                    !minimal(m, &sat, a) && !minimal(m, &sat, b) && (m.leq(a, b) != m2.leq(a, b))
                }
                Postulate::Faith => false,
            }
        }
        Witness::World { world } => {
            let Some(w) = m.index_of(world) else {
                return false;
            };
            postulate == Postulate::Faith
                && (0..m.len()).any(sat)
                && minimal(m, &sat, w) != minimal(m2, &|_| true, w)
        }
    }
}
