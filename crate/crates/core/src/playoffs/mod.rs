//! Qualifying play-offs: selection of the 16 entrants from the Nations
//! League rankings, path formation under one of three policies, and the
//! four single-elimination paths.

mod regular;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::config::PathPolicy;
use crate::elo::MatchOdds;
use crate::model::{MatchRecord, OverallRanking, Tier};
use crate::nations_league::LeagueRanking;
use crate::qualifiers::DIRECT_QUALIFIERS;
use crate::team::{TeamId, TEAM_COUNT};

pub use regular::{admissible_arrangements, arrangement_cost, form_paths_regular};

pub const ENTRANTS: usize = 16;
pub const PATH_COUNT: usize = 4;
const QUOTA: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlayoffEntrant {
    pub team: TeamId,
    /// League whose four-team quota the entrant fills.
    pub source_league: Tier,
    /// League the team played its Nations League season in.
    pub league: Tier,
    pub is_group_winner: bool,
    pub overall_position: u8,
}

/// Four entrants in slot order. Slots 1 and 2 host the semifinals against
/// slots 4 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayoffPath {
    pub entrants: [PlayoffEntrant; 4],
}

impl PlayoffPath {
    /// Slots follow overall position: best-ranked entrant first.
    pub fn new(mut entrants: [PlayoffEntrant; 4]) -> Self {
        entrants.sort_by_key(|e| e.overall_position);
        PlayoffPath { entrants }
    }

    /// Slots in the order the entrants were drawn.
    pub fn drawn(entrants: [PlayoffEntrant; 4]) -> Self {
        PlayoffPath { entrants }
    }

    pub fn contains(&self, team: TeamId) -> bool {
        self.entrants.iter().any(|e| e.team == team)
    }

    /// Group winners sharing the path with a team from a higher-ranked league.
    pub fn exposed_group_winners(&self) -> usize {
        let top = self
            .entrants
            .iter()
            .map(|e| e.league)
            .min()
            .expect("four entrants");
        self.entrants
            .iter()
            .filter(|e| e.is_group_winner && e.league > top)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFormation {
    pub paths: [PlayoffPath; PATH_COUNT],
    /// Group winners that had to be placed against a higher-league team
    /// because no arrangement avoided it. Always 0 outside the regular policy.
    pub relaxed_group_winners: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathResult {
    pub winner: TeamId,
    /// 1 or 2: the semifinal whose winner hosts the final.
    pub host_semifinal: u8,
    /// Semifinal 1, semifinal 2, final.
    pub matches: [MatchRecord; 3],
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlayoffError {
    #[error("expected {DIRECT_QUALIFIERS} direct qualifiers, got {0}")]
    DirectCount(usize),
    #[error("only {0} teams are available for the play-offs")]
    NotEnoughTeams(usize),
    #[error("expected {ENTRANTS} play-off entrants, got {0}")]
    EntrantCount(usize),
}

/// Picks the 16 play-off teams.
///
/// Each league has a quota of four, filled with its group winners that did
/// not qualify directly and then with its next best-ranked non-qualified
/// teams. A league that cannot fill its quota takes the spare teams of the
/// next lower-ranked leagues in turn (A→B→C→D); once those are exhausted,
/// it takes from the nearest higher-ranked league with spare teams.
pub fn select_playoff_teams(
    overall: &OverallRanking,
    league_rankings: &[LeagueRanking; 4],
    direct: &[TeamId],
) -> Result<Vec<PlayoffEntrant>, PlayoffError> {
    if direct.len() != DIRECT_QUALIFIERS {
        return Err(PlayoffError::DirectCount(direct.len()));
    }
    let mut qualified = [false; TEAM_COUNT];
    for t in direct {
        qualified[t.index()] = true;
    }

    let mut available: [Vec<TeamId>; 4] = std::array::from_fn(|i| {
        league_rankings[i]
            .entries
            .iter()
            .map(|e| e.team)
            .filter(|t| !qualified[t.index()])
            .collect()
    });
    let total: usize = available.iter().map(Vec::len).sum();
    if total < ENTRANTS {
        return Err(PlayoffError::NotEnoughTeams(total));
    }

    let mut quotas: [Vec<TeamId>; 4] = std::array::from_fn(|i| {
        let own = available[i].len().min(QUOTA);
        available[i].drain(..own).collect()
    });

    for (tier, quota) in quotas.iter_mut().enumerate() {
        let donors = (tier + 1..4).chain((0..tier).rev());
        for donor in donors {
            let missing = QUOTA - quota.len();
            if missing == 0 {
                break;
            }
            let take = missing.min(available[donor].len());
            quota.extend(available[donor].drain(..take));
        }
    }

    let mut entrants = Vec::with_capacity(ENTRANTS);
    for (tier, quota) in quotas.iter().enumerate() {
        for &team in quota {
            entrants.push(PlayoffEntrant {
                team,
                source_league: Tier::from_index(tier),
                league: overall.tier_of(team),
                is_group_winner: overall.is_group_winner(team),
                overall_position: overall.position_of(team),
            });
        }
    }
    Ok(entrants)
}

/// Uniform random partition of the entrants into four paths. The draw also
/// fixes the slots, so semifinal pairings and hosts are random as well.
pub fn form_paths_random<R: Rng + ?Sized>(
    entrants: &[PlayoffEntrant],
    rng: &mut R,
) -> PathFormation {
    assert_eq!(entrants.len(), ENTRANTS);
    let mut shuffled = entrants.to_vec();
    shuffled.shuffle(rng);
    PathFormation {
        paths: std::array::from_fn(|p| {
            PlayoffPath::drawn(std::array::from_fn(|i| shuffled[4 * p + i]))
        }),
        relaxed_group_winners: 0,
    }
}

/// Quartiles of the overall ranking form four pots; every path receives one
/// team from each pot, drawn uniformly.
pub fn form_paths_seeded<R: Rng + ?Sized>(
    entrants: &[PlayoffEntrant],
    rng: &mut R,
) -> PathFormation {
    assert_eq!(entrants.len(), ENTRANTS);
    let mut sorted = entrants.to_vec();
    sorted.sort_by_key(|e| e.overall_position);
    for pot in sorted.chunks_mut(4) {
        pot.shuffle(rng);
    }
    PathFormation {
        paths: std::array::from_fn(|p| {
            PlayoffPath::new(std::array::from_fn(|pot| sorted[4 * pot + p]))
        }),
        relaxed_group_winners: 0,
    }
}

pub fn form_paths<R: Rng + ?Sized>(
    policy: PathPolicy,
    entrants: &[PlayoffEntrant],
    rng: &mut R,
) -> Result<PathFormation, PlayoffError> {
    if entrants.len() != ENTRANTS {
        return Err(PlayoffError::EntrantCount(entrants.len()));
    }
    Ok(match policy {
        PathPolicy::Regular => form_paths_regular(entrants, rng),
        PathPolicy::Random => form_paths_random(entrants, rng),
        PathPolicy::Seeded => form_paths_seeded(entrants, rng),
    })
}

/// Plays a path: the final's host is drawn first, then slot 1 hosts slot 4
/// and slot 2 hosts slot 3, and the drawn semifinal's winner hosts the final.
/// Consumes exactly four uniform variates.
pub fn play_path<R: Rng + ?Sized>(path: &PlayoffPath, odds: &MatchOdds, rng: &mut R) -> PathResult {
    let host_semifinal = if rng.random::<f64>() < 0.5 { 1 } else { 2 };
    let [s1, s2, s3, s4] = path.entrants.map(|e| e.team);
    let sf1 = odds.play(s1, s4, rng);
    let sf2 = odds.play(s2, s3, rng);
    let (home, away) = if host_semifinal == 1 {
        (sf1.winner, sf2.winner)
    } else {
        (sf2.winner, sf1.winner)
    };
    let last = odds.play(home, away, rng);
    PathResult {
        winner: last.winner,
        host_semifinal,
        matches: [sf1, sf2, last],
    }
}

#[cfg(test)]
mod tests;
