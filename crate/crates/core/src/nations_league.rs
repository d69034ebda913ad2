//! The 2018-19 Nations League: league allocation, seeded group draws,
//! double round-robin play and the rankings derived from it.
//!
//! Matches cannot be drawn, so a team's points are an affine function of its
//! wins and standings compare win counts. Whatever the regulations settle by
//! goal difference or further criteria is settled by a uniform random
//! tie-break instead.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::elo::MatchOdds;
use crate::model::{League, MatchRecord, OverallRanking, Tier};
use crate::team::{TeamId, TeamSet, TEAM_COUNT};

const GROUPS_PER_LEAGUE: usize = 4;
/// Largest round-robin group in the pipeline (Euro qualifying Groups F–J).
pub const MAX_GROUP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NlGroup {
    pub tier: Tier,
    /// 1..=4
    pub index: u8,
    /// Members in pot order.
    pub members: Vec<TeamId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub team: TeamId,
    pub wins: u8,
    /// 1-based position in the group.
    pub position: u8,
}

/// Final order of one round-robin group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageStanding {
    pub placements: Vec<Placement>,
}

impl StageStanding {
    pub fn team_at(&self, position: u8) -> TeamId {
        self.placements[position as usize - 1].team
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct GroupResult {
    pub group: NlGroup,
    pub records: Vec<MatchRecord>,
    pub standing: StageStanding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeagueEntry {
    pub team: TeamId,
    /// 1-based position within the league.
    pub position: u8,
    pub group_winner: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeagueRanking {
    pub tier: Tier,
    pub entries: Vec<LeagueEntry>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StageError {
    #[error("expected {expected} match records for the group, found {found}")]
    RecordCount { expected: usize, found: usize },
    #[error("match record {0:?} involves a team outside the group or is malformed")]
    ForeignRecord(MatchRecord),
    #[error("fixture {home} v {away} recorded more than once")]
    DuplicateFixture { home: TeamId, away: TeamId },
}

/// Partitions the teams into Leagues A–D by coefficient rank bands
/// 1–12, 13–24, 25–39 and 40–55.
pub fn allocate_leagues(teams: &TeamSet) -> [League; 4] {
    Tier::ALL.map(|tier| League {
        tier,
        members: (tier.first_rank()..=tier.last_rank())
            .map(|rank| teams.at_rank(rank).id)
            .collect(),
    })
}

/// Draws the four groups of a league. Pots are consecutive blocks of four
/// members (best first); each pot is spread over distinct groups uniformly at
/// random. League C's three-team Pot 4 leaves one uniformly chosen group short.
pub fn draw_nl_groups<R: Rng + ?Sized>(league: &League, rng: &mut R) -> [NlGroup; 4] {
    let mut groups: [NlGroup; 4] = std::array::from_fn(|i| NlGroup {
        tier: league.tier,
        index: i as u8 + 1,
        members: Vec::with_capacity(4),
    });
    let mut slots: [usize; GROUPS_PER_LEAGUE] = [0, 1, 2, 3];
    for pot in league.members.chunks(GROUPS_PER_LEAGUE) {
        slots.shuffle(rng);
        for (team, &group) in pot.iter().zip(slots.iter()) {
            groups[group].members.push(*team);
        }
    }
    groups
}

/// Plays a double round-robin: every ordered pair `(i, j)`, `i != j`, once
/// with `i` at home, in lexicographic order of member indices.
pub fn play_group<R: Rng + ?Sized>(
    members: &[TeamId],
    odds: &MatchOdds,
    rng: &mut R,
) -> Vec<MatchRecord> {
    let n = members.len();
    let mut records = Vec::with_capacity(n * (n - 1));
    for (i, &home) in members.iter().enumerate() {
        for (j, &away) in members.iter().enumerate() {
            if i != j {
                records.push(odds.play(home, away, rng));
            }
        }
    }
    records
}

/// Orders a group by wins, breaking ties uniformly at random.
pub fn rank_group<R: Rng + ?Sized>(
    members: &[TeamId],
    records: &[MatchRecord],
    rng: &mut R,
) -> Result<StageStanding, StageError> {
    let n = members.len();
    assert!(n <= MAX_GROUP, "groups have at most {MAX_GROUP} teams");
    if records.len() != n * (n - 1) {
        return Err(StageError::RecordCount {
            expected: n * (n - 1),
            found: records.len(),
        });
    }
    let mut slot_of = [u8::MAX; TEAM_COUNT];
    for (i, m) in members.iter().enumerate() {
        slot_of[m.index()] = i as u8;
    }
    let slot = |team: TeamId| match slot_of.get(team.index()) {
        Some(&s) if s != u8::MAX => Some(s as usize),
        _ => None,
    };
    let mut played = [false; MAX_GROUP * MAX_GROUP];
    let mut wins = [0u8; MAX_GROUP];
    for record in records {
        let (Some(h), Some(a)) = (slot(record.home), slot(record.away)) else {
            return Err(StageError::ForeignRecord(*record));
        };
        if h == a || !(record.winner == record.home || record.winner == record.away) {
            return Err(StageError::ForeignRecord(*record));
        }
        if std::mem::replace(&mut played[h * n + a], true) {
            return Err(StageError::DuplicateFixture {
                home: record.home,
                away: record.away,
            });
        }
        wins[if record.winner == record.home { h } else { a }] += 1;
    }

    let mut order: [usize; MAX_GROUP] = std::array::from_fn(|i| i);
    let order = &mut order[..n];
    order.sort_by(|&x, &y| wins[y].cmp(&wins[x]));
    shuffle_ties(order, |&i| wins[i], rng);

    Ok(StageStanding {
        placements: order
            .iter()
            .copied()
            .enumerate()
            .map(|(pos, i)| Placement {
                team: members[i],
                wins: wins[i],
                position: pos as u8 + 1,
            })
            .collect(),
    })
}

/// Shuffles every maximal run of equal keys in an already sorted slice.
pub(crate) fn shuffle_ties<T, K: PartialEq, R: Rng + ?Sized>(
    sorted: &mut [T],
    key: impl Fn(&T) -> K,
    rng: &mut R,
) {
    let mut start = 0;
    while start < sorted.len() {
        let k = key(&sorted[start]);
        let mut end = start + 1;
        while end < sorted.len() && key(&sorted[end]) == k {
            end += 1;
        }
        if end - start > 1 {
            sorted[start..end].shuffle(rng);
        }
        start = end;
    }
}

/// Wins used to compare equally placed teams across a league's groups.
///
/// In League C one group has only three teams, so results against the
/// fourth-placed team of a four-team group are discarded, leaving every
/// team but the fourth-placed ones with four comparable matches.
pub fn comparison_wins(tier: Tier, result: &GroupResult, team: TeamId) -> u8 {
    let standing = &result.standing;
    let placement = standing
        .placements
        .iter()
        .find(|p| p.team == team)
        .expect("team belongs to the group");
    if tier != Tier::C || standing.len() < 4 || placement.position == 4 {
        return placement.wins;
    }
    let last = standing.team_at(4);
    let against_last = result
        .records
        .iter()
        .filter(|m| m.winner == team && m.involves(last))
        .count() as u8;
    placement.wins - against_last
}

/// Ranks a league: all group winners first, then all runners-up, and so on.
/// Within a block teams are ordered by [`comparison_wins`], ties at random.
pub fn league_ranking<R: Rng + ?Sized>(
    tier: Tier,
    results: &[GroupResult],
    rng: &mut R,
) -> LeagueRanking {
    let deepest = results.iter().map(|r| r.standing.len()).max().unwrap_or(0);
    let mut entries = Vec::with_capacity(tier.size());
    for position in 1..=deepest as u8 {
        let mut block: Vec<(TeamId, u8)> = results
            .iter()
            .filter(|r| r.standing.len() >= position as usize)
            .map(|r| {
                let team = r.standing.team_at(position);
                (team, comparison_wins(tier, r, team))
            })
            .collect();
        block.sort_by_key(|x| std::cmp::Reverse(x.1));
        shuffle_ties(&mut block, |e| e.1, rng);
        for (team, _) in block {
            entries.push(LeagueEntry {
                team,
                position: entries.len() as u8 + 1,
                group_winner: position == 1,
            });
        }
    }
    LeagueRanking { tier, entries }
}

/// Concatenates the league rankings: A fills positions 1–12, B 13–24,
/// C 25–39 and D 40–55. Positions 1–4 come straight from League A's ranking
/// (no Finals are played).
pub fn overall_ranking(rankings: &[LeagueRanking; 4]) -> OverallRanking {
    let mut positions = [TeamId(0); TEAM_COUNT];
    let mut winners = Vec::with_capacity(16);
    let mut next = 0;
    for ranking in rankings {
        debug_assert_eq!(next + 1, ranking.tier.first_rank() as usize);
        for entry in &ranking.entries {
            positions[next] = entry.team;
            next += 1;
            if entry.group_winner {
                winners.push(entry.team);
            }
        }
    }
    assert_eq!(next, TEAM_COUNT, "league rankings must cover all teams");
    OverallRanking::new(positions, &winners)
}

/// One simulated Nations League season.
#[derive(Debug, Clone)]
pub struct NationsLeagueSeason {
    /// Sixteen groups, League A's four first.
    pub groups: Vec<GroupResult>,
    pub league_rankings: [LeagueRanking; 4],
    pub overall: OverallRanking,
}

impl NationsLeagueSeason {
    pub fn match_count(&self) -> usize {
        self.groups.iter().map(|g| g.records.len()).sum()
    }
}

pub fn play_nations_league<R: Rng + ?Sized>(
    teams: &TeamSet,
    odds: &MatchOdds,
    rng: &mut R,
) -> NationsLeagueSeason {
    let leagues = allocate_leagues(teams);
    let mut groups = Vec::with_capacity(16);
    for league in &leagues {
        for group in draw_nl_groups(league, rng) {
            let records = play_group(&group.members, odds, rng);
            let standing = rank_group(&group.members, &records, rng).expect("complete round robin");
            groups.push(GroupResult {
                group,
                records,
                standing,
            });
        }
    }
    let league_rankings: [LeagueRanking; 4] = std::array::from_fn(|i| {
        let block = &groups[i * GROUPS_PER_LEAGUE..(i + 1) * GROUPS_PER_LEAGUE];
        league_ranking(Tier::from_index(i), block, rng)
    });
    let overall = overall_ranking(&league_rankings);
    NationsLeagueSeason {
        groups,
        league_rankings,
        overall,
    }
}
