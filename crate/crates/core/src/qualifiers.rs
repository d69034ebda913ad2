//! Euro 2020 qualifying group stage: seeding pots from the overall ranking,
//! the group draw (without the geopolitical and travel restrictions) and the
//! 20 direct qualifiers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::elo::MatchOdds;
use crate::model::{MatchRecord, OverallRanking};
use crate::nations_league::{play_group, rank_group, StageStanding};
use crate::team::TeamId;

pub const GROUP_COUNT: usize = 10;
pub const DIRECT_QUALIFIERS: usize = 2 * GROUP_COUNT;

/// Inclusive overall-position bands of the UNL Pot and Pots 1–6.
pub const POT_BANDS: [(u8, u8); 7] = [
    (1, 4),
    (5, 10),
    (11, 20),
    (21, 30),
    (31, 40),
    (41, 50),
    (51, 55),
];

/// Groups (by index, A = 0) each pot is spread over. Groups A–E hold five
/// teams, F–J six.
const POT_GROUPS: [std::ops::Range<usize>; 7] = [0..4, 4..10, 0..10, 0..10, 0..10, 0..10, 5..10];

/// Seeding pots. Index 0 is the UNL Pot, indices 1–6 are Pots 1–6.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifierPots {
    pub pots: [Vec<TeamId>; 7],
}

impl QualifierPots {
    pub fn unl(&self) -> &[TeamId] {
        &self.pots[0]
    }

    pub fn sizes(&self) -> [usize; 7] {
        std::array::from_fn(|i| self.pots[i].len())
    }

    /// Pot index (0 = UNL Pot) holding `team`.
    pub fn pot_of(&self, team: TeamId) -> Option<usize> {
        self.pots.iter().position(|p| p.contains(&team))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QGroup {
    /// 'A'..='J'
    pub label: char,
    /// Members in pot order.
    pub members: Vec<TeamId>,
}

#[derive(Debug, Clone)]
pub struct QGroupResult {
    pub group: QGroup,
    pub records: Vec<MatchRecord>,
    pub standing: StageStanding,
}

#[derive(Debug, Clone)]
pub struct QualifierResult {
    pub groups: Vec<QGroupResult>,
    /// Winners and runners-up, group by group.
    pub direct: Vec<TeamId>,
}

impl QualifierResult {
    pub fn match_count(&self) -> usize {
        self.groups.iter().map(|g| g.records.len()).sum()
    }
}

pub fn form_pots(overall: &OverallRanking) -> QualifierPots {
    QualifierPots {
        pots: POT_BANDS.map(|(lo, hi)| (lo..=hi).map(|pos| overall.at(pos)).collect()),
    }
}

/// Spreads each pot uniformly over its eligible groups, one team per group.
pub fn draw_q_groups<R: Rng + ?Sized>(pots: &QualifierPots, rng: &mut R) -> Vec<QGroup> {
    let mut groups: Vec<QGroup> = (0..GROUP_COUNT)
        .map(|i| QGroup {
            label: (b'A' + i as u8) as char,
            members: Vec::with_capacity(6),
        })
        .collect();
    let mut drawn = Vec::with_capacity(10);
    for (pot, eligible) in pots.pots.iter().zip(POT_GROUPS) {
        debug_assert_eq!(pot.len(), eligible.len());
        drawn.clear();
        drawn.extend_from_slice(pot);
        drawn.shuffle(rng);
        for (team, group) in drawn.iter().zip(eligible) {
            groups[group].members.push(*team);
        }
    }
    groups
}

/// Plays every group as a double round-robin; the top two qualify.
pub fn play_qualifiers<R: Rng + ?Sized>(
    groups: Vec<QGroup>,
    odds: &MatchOdds,
    rng: &mut R,
) -> QualifierResult {
    let mut direct = Vec::with_capacity(DIRECT_QUALIFIERS);
    let groups: Vec<QGroupResult> = groups
        .into_iter()
        .map(|group| {
            let records = play_group(&group.members, odds, rng);
            let standing = rank_group(&group.members, &records, rng).expect("complete round robin");
            direct.push(standing.team_at(1));
            direct.push(standing.team_at(2));
            QGroupResult {
                group,
                records,
                standing,
            }
        })
        .collect();
    QualifierResult { groups, direct }
}
