//! Adversaries choose which robot acts next, subject to a bounded fairness
//! window.
//!
//! Fairness: in every window of `W` consecutive events each robot performs
//! at least one MOVE. A robot that last moved at event `l` must move again
//! by event `l + W`; an idle robot still needs two events (LOOK, MOVE), a
//! computed one needs one. A choice is admissible only if the remaining
//! obligations can still be met when served earliest-deadline-first.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Isometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryKind {
    Random,
    RoundRobin,
    MaxStale,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 3] = [
        AdversaryKind::Random,
        AdversaryKind::RoundRobin,
        AdversaryKind::MaxStale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::Random => "random",
            AdversaryKind::RoundRobin => "round_robin",
            AdversaryKind::MaxStale => "max_stale",
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random" => Ok(AdversaryKind::Random),
            "round_robin" | "roundrobin" => Ok(AdversaryKind::RoundRobin),
            "max_stale" | "stale" => Ok(AdversaryKind::MaxStale),
            _ => Err(format!("unknown adversary {s:?}")),
        }
    }
}

/// What the adversary may see of a robot when choosing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    /// True if the robot holds a computed, not yet executed decision.
    pub computed: bool,
    /// Last event index by which the robot must have moved.
    pub deadline: u64,
}

impl Slot {
    fn need(&self) -> u64 {
        if self.computed {
            1
        } else {
            2
        }
    }
}

/// Whether every robot can still meet its deadline when the next event has
/// index `now`.
pub fn feasible(slots: &[Slot], now: u64) -> bool {
    let mut order: Vec<&Slot> = slots.iter().collect();
    order.sort_by_key(|s| s.deadline);
    let mut used = 0u64;
    for s in order {
        used += s.need();
        if s.deadline + 1 < now + used {
            return false;
        }
    }
    true
}

/// The slots after robot `i` performs its enabled event at index `now`.
fn after_event(slots: &[Slot], i: usize, now: u64, window: u64) -> Vec<Slot> {
    let mut next = slots.to_vec();
    next[i] = if slots[i].computed {
        Slot {
            computed: false,
            deadline: now + window,
        }
    } else {
        Slot {
            computed: true,
            ..slots[i]
        }
    };
    next
}

#[derive(Debug, Clone)]
pub struct Adversary {
    kind: AdversaryKind,
    seed: u64,
    window: u64,
    rng: ChaCha8Rng,
    cursor: usize,
}

/// Builds an adversary for `robots` robots with fairness window `window`.
pub fn make_adversary(
    kind: AdversaryKind,
    seed: u64,
    window: usize,
    robots: usize,
) -> Result<Adversary> {
    if window < 2 * robots {
        return Err(Error::FairnessWindow { window, robots });
    }
    Ok(Adversary {
        kind,
        seed,
        window: window as u64,
        rng: ChaCha8Rng::seed_from_u64(seed),
        cursor: 0,
    })
}

impl Adversary {
    pub fn kind(&self) -> AdversaryKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// Deadline of a robot that has not moved yet.
    pub fn initial_deadline(&self) -> u64 {
        self.window - 1
    }

    /// One local orientation per robot, drawn from the eight axis-aligned
    /// ones.
    pub fn draw_orientations(&mut self, robots: usize) -> Vec<Isometry> {
        let all: Vec<Isometry> = Isometry::orientations().collect();
        (0..robots)
            .map(|_| *all.choose(&mut self.rng).expect("eight orientations"))
            .collect()
    }

    /// The robot whose enabled event happens at index `now`.
    pub fn choose(&mut self, slots: &[Slot], now: u64) -> usize {
        let admissible: Vec<usize> = (0..slots.len())
            .filter(|&i| feasible(&after_event(slots, i, now, self.window), now + 1))
            .collect();
        assert!(
            !admissible.is_empty(),
            "fairness obligations became infeasible"
        );
        match self.kind {
            AdversaryKind::Random => admissible[self.rng.gen_range(0..admissible.len())],
            AdversaryKind::RoundRobin => self.round_robin(slots, &admissible),
            AdversaryKind::MaxStale => self.max_stale(slots, &admissible),
        }
    }

    fn round_robin(&mut self, slots: &[Slot], admissible: &[usize]) -> usize {
        let pick = if slots[self.cursor].computed {
            let r = self.cursor;
            self.cursor = (self.cursor + 1) % slots.len();
            r
        } else {
            self.cursor
        };
        debug_assert!(admissible.contains(&pick));
        pick
    }

    fn max_stale(&mut self, slots: &[Slot], admissible: &[usize]) -> usize {
        let looks: Vec<usize> = admissible
            .iter()
            .copied()
            .filter(|&i| !slots[i].computed)
            .collect();
        if !looks.is_empty() {
            return looks[self.rng.gen_range(0..looks.len())];
        }
        let earliest = admissible
            .iter()
            .map(|&i| slots[i].deadline)
            .min()
            .expect("nonempty");
        let due: Vec<usize> = admissible
            .iter()
            .copied()
            .filter(|&i| slots[i].deadline == earliest)
            .collect();
        due[self.rng.gen_range(0..due.len())]
    }
}
