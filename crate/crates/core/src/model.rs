//! Shared vocabulary of the qualification pipeline: league tiers, match
//! records and the overall Nations League ranking.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::team::{TeamId, TEAM_COUNT};

/// One of the four Nations League divisions. `A` is the highest-ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    A,
    B,
    C,
    D,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::A, Tier::B, Tier::C, Tier::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Tier {
        Tier::ALL[index]
    }

    /// Number of teams in the league.
    pub fn size(self) -> usize {
        match self {
            Tier::A | Tier::B => 12,
            Tier::C => 15,
            Tier::D => 16,
        }
    }

    /// First coefficient rank (and first overall position) covered by the league.
    pub fn first_rank(self) -> u8 {
        match self {
            Tier::A => 1,
            Tier::B => 13,
            Tier::C => 25,
            Tier::D => 40,
        }
    }

    pub fn last_rank(self) -> u8 {
        self.first_rank() + self.size() as u8 - 1
    }

    /// League whose rank band contains `rank` (1..=55).
    pub fn of_rank(rank: u8) -> Tier {
        match rank {
            1..=12 => Tier::A,
            13..=24 => Tier::B,
            25..=39 => Tier::C,
            _ => Tier::D,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tier::A => "A",
            Tier::B => "B",
            Tier::C => "C",
            Tier::D => "D",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The members of one Nations League division, best coefficient rank first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct League {
    pub tier: Tier,
    pub members: Vec<TeamId>,
}

/// Result of a single drawless match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatchRecord {
    pub home: TeamId,
    pub away: TeamId,
    pub winner: TeamId,
}

impl MatchRecord {
    pub fn new(home: TeamId, away: TeamId, home_won: bool) -> Self {
        let winner = if home_won { home } else { away };
        MatchRecord { home, away, winner }
    }

    pub fn loser(&self) -> TeamId {
        if self.winner == self.home {
            self.away
        } else {
            self.home
        }
    }

    pub fn involves(&self, team: TeamId) -> bool {
        self.home == team || self.away == team
    }
}

/// The 1–55 overall Nations League ranking that seeds everything downstream.
///
/// Index `i` of `positions` holds the team at overall position `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverallRanking {
    positions: [TeamId; TEAM_COUNT],
    position_of: [u8; TEAM_COUNT],
    group_winner: [bool; TEAM_COUNT],
}

impl OverallRanking {
    /// Builds the ranking from its position order and the set of group winners.
    ///
    /// Panics if `positions` is not a permutation of all team ids.
    pub fn new(positions: [TeamId; TEAM_COUNT], group_winners: &[TeamId]) -> Self {
        let mut position_of = [0u8; TEAM_COUNT];
        for (i, team) in positions.iter().enumerate() {
            assert_eq!(position_of[team.index()], 0, "team {team} ranked twice");
            position_of[team.index()] = i as u8 + 1;
        }
        let mut group_winner = [false; TEAM_COUNT];
        for team in group_winners {
            group_winner[team.index()] = true;
        }
        OverallRanking {
            positions,
            position_of,
            group_winner,
        }
    }

    pub fn positions(&self) -> &[TeamId; TEAM_COUNT] {
        &self.positions
    }

    /// Team at the 1-based overall `position`.
    pub fn at(&self, position: u8) -> TeamId {
        self.positions[position as usize - 1]
    }

    /// 1-based overall position of `team`.
    pub fn position_of(&self, team: TeamId) -> u8 {
        self.position_of[team.index()]
    }

    pub fn is_group_winner(&self, team: TeamId) -> bool {
        self.group_winner[team.index()]
    }

    /// League whose block contains the team's overall position.
    pub fn tier_of(&self, team: TeamId) -> Tier {
        Tier::of_rank(self.position_of(team))
    }
}
