//! Monte Carlo simulation of the UEFA Euro 2020 qualification: the 2018-19
//! Nations League, the qualifying group stage and the play-offs, with
//! per-team qualification probabilities, counterfactual rank swaps and
//! alternative play-off path formation policies.
//!
//! ```no_run
//! use euroqual_core::{run_simulation, SimConfig, TeamSet};
//!
//! let teams = TeamSet::reference();
//! let report = run_simulation(&teams, &SimConfig::default().with_iterations(10_000))?;
//! let germany = teams.find("Germany").unwrap();
//! println!("{:.4}", report.p_total(germany));
//! # Ok::<_, euroqual_core::SimError>(())
//! ```

pub mod config;
pub mod elo;
pub mod engine;
pub mod model;
pub mod nations_league;
pub mod playoffs;
pub mod qualifiers;
pub mod rng;
pub mod team;

pub use config::{ConfigError, Counterfactual, PathPolicy, SimConfig};
pub use elo::{sample_match, win_expectancy, MatchOdds, Venue};
pub use engine::{
    run_counterfactual, run_iteration, run_sensitivity, run_simulation,
    run_simulation_with_threads, CounterfactualReport, IterationDetail, IterationOutcome, Pipeline,
    ProbabilityReport, SimError, Tally, TeamRow,
};
pub use model::{League, MatchRecord, OverallRanking, Tier};
pub use rng::RandomStream;
pub use team::{Team, TeamId, TeamRecord, TeamSet, TeamSetError, TEAM_COUNT};
