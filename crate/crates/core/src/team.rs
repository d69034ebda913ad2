//! Teams and the 55-team input set.

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TEAM_COUNT: usize = 55;

/// Dense team index. Ids are assigned in coefficient-rank order when a set is
/// built and stay attached to the team through counterfactual swaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TeamId(pub u8);

impl TeamId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TeamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Team {
    pub id: TeamId,
    pub name: String,
    /// Initial UEFA coefficient rank, 1..=55.
    pub uefa_rank: u8,
    pub elo: f64,
}

/// One input row: team name, coefficient rank, Elo rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamRecord {
    pub name: String,
    pub uefa_rank: i64,
    pub elo: f64,
}

impl TeamRecord {
    pub fn new(name: impl Into<String>, uefa_rank: i64, elo: f64) -> Self {
        TeamRecord {
            name: name.into(),
            uefa_rank,
            elo,
        }
    }
}

#[derive(Debug, Error)]
pub enum TeamSetError {
    #[error("expected {TEAM_COUNT} teams, found {0}")]
    WrongCount(usize),
    #[error("team {name:?} has uefa_rank {rank}, outside 1..={TEAM_COUNT}")]
    RankOutOfRange { name: String, rank: i64 },
    #[error("uefa_rank {rank} is used by both {first:?} and {second:?}")]
    DuplicateRank {
        rank: i64,
        first: String,
        second: String,
    },
    #[error("uefa_rank {0} is not assigned to any team")]
    MissingRank(u8),
    #[error("team {name:?} has non-positive or non-finite elo {elo}")]
    InvalidElo { name: String, elo: f64 },
    #[error("failed to read team table: {0}")]
    Csv(#[from] csv::Error),
    #[error("failed to open team table {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// The complete set of 55 teams, addressable by id and by coefficient rank.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamSet {
    teams: Vec<Team>,
    by_rank: Vec<TeamId>,
}

const REFERENCE_TABLE: &str = include_str!("../data/euro2020_teams.csv");

impl TeamSet {
    /// Validates the records and assigns ids in coefficient-rank order.
    pub fn build(records: &[TeamRecord]) -> Result<TeamSet, TeamSetError> {
        if records.len() != TEAM_COUNT {
            return Err(TeamSetError::WrongCount(records.len()));
        }
        let mut slot: Vec<Option<&TeamRecord>> = vec![None; TEAM_COUNT];
        for record in records {
            if !(1..=TEAM_COUNT as i64).contains(&record.uefa_rank) {
                return Err(TeamSetError::RankOutOfRange {
                    name: record.name.clone(),
                    rank: record.uefa_rank,
                });
            }
            if !(record.elo.is_finite() && record.elo > 0.0) {
                return Err(TeamSetError::InvalidElo {
                    name: record.name.clone(),
                    elo: record.elo,
                });
            }
            let entry = &mut slot[record.uefa_rank as usize - 1];
            if let Some(first) = entry {
                return Err(TeamSetError::DuplicateRank {
                    rank: record.uefa_rank,
                    first: first.name.clone(),
                    second: record.name.clone(),
                });
            }
            *entry = Some(record);
        }

        let mut teams = Vec::with_capacity(TEAM_COUNT);
        for (i, record) in slot.into_iter().enumerate() {
            let record = record.ok_or(TeamSetError::MissingRank(i as u8 + 1))?;
            teams.push(Team {
                id: TeamId(i as u8),
                name: record.name.clone(),
                uefa_rank: i as u8 + 1,
                elo: record.elo,
            });
        }
        let by_rank = teams.iter().map(|t| t.id).collect();
        Ok(TeamSet { teams, by_rank })
    }

    /// Reads a comma-separated table with a `name,uefa_rank,elo` header.
    pub fn from_reader<R: Read>(reader: R) -> Result<TeamSet, TeamSetError> {
        let mut csv = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let records = csv
            .deserialize::<TeamRecord>()
            .collect::<Result<Vec<_>, _>>()?;
        TeamSet::build(&records)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<TeamSet, TeamSetError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| TeamSetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        TeamSet::from_reader(std::io::BufReader::new(file))
    }

    /// Coefficient ranks and Elo ratings (as of 6 December 2017) of the 55
    /// UEFA members at the start of the Euro 2020 qualification.
    pub fn reference() -> TeamSet {
        TeamSet::from_reader(REFERENCE_TABLE.as_bytes()).expect("bundled team table is valid")
    }

    pub fn reference_csv() -> &'static str {
        REFERENCE_TABLE
    }

    pub fn len(&self) -> usize {
        self.teams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.teams.is_empty()
    }

    pub fn get(&self, id: TeamId) -> &Team {
        &self.teams[id.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Team> {
        self.teams.iter()
    }

    /// Team currently holding coefficient rank `rank` (1..=55).
    pub fn at_rank(&self, rank: u8) -> &Team {
        self.get(self.by_rank[rank as usize - 1])
    }

    /// Team ids in coefficient-rank order.
    pub fn by_rank(&self) -> &[TeamId] {
        &self.by_rank
    }

    /// Case-insensitive lookup by name.
    pub fn find(&self, name: &str) -> Option<TeamId> {
        self.teams
            .iter()
            .find(|t| t.name.eq_ignore_ascii_case(name.trim()))
            .map(|t| t.id)
    }

    /// Exchanges the coefficient ranks of `subject` and whichever team holds
    /// `target_rank`. Elo ratings and every other rank are untouched.
    pub fn apply_counterfactual(
        &self,
        subject: TeamId,
        target_rank: u8,
    ) -> Result<TeamSet, TeamSetError> {
        if !(1..=TEAM_COUNT as u8).contains(&target_rank) {
            return Err(TeamSetError::RankOutOfRange {
                name: self.get(subject).name.clone(),
                rank: target_rank as i64,
            });
        }
        let mut swapped = self.clone();
        let occupant = self.by_rank[target_rank as usize - 1];
        let subject_rank = self.get(subject).uefa_rank;
        swapped.teams[subject.index()].uefa_rank = target_rank;
        swapped.teams[occupant.index()].uefa_rank = subject_rank;
        swapped.by_rank[target_rank as usize - 1] = subject;
        swapped.by_rank[subject_rank as usize - 1] = occupant;
        Ok(swapped)
    }
}
