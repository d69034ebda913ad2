//! Command-line front end: argument parsing, experiment dispatch and report
//! files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};
use euroqual_core::{
    run_counterfactual, run_simulation, PathPolicy, ProbabilityReport, SimConfig, TeamId, TeamSet,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One simulation of the given team file.
    Simulate,
    /// The file as given against one team moved to another rank.
    Counterfactual,
    /// One simulation per scale value.
    Sensitivity,
    /// The same experiment under all three path formation policies.
    PolicyCompare,
}

#[derive(Debug, Parser)]
#[command(
    name = "euroqual",
    version,
    about = "Monte Carlo simulation of the UEFA Euro 2020 qualification"
)]
pub struct Args {
    /// Team table: CSV with columns name,uefa_rank,elo.
    #[arg(long, value_name = "PATH")]
    pub teams: PathBuf,
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    pub iterations: u64,
    #[arg(long, value_name = "N", default_value_t = 2020)]
    pub seed: u64,
    /// Scale of the win expectancy curve.
    #[arg(long = "scale-s", value_name = "X", default_value_t = 400.0)]
    pub scale: f64,
    #[arg(long, value_name = "X", default_value_t = 100.0)]
    pub home_advantage: f64,
    #[arg(long, value_name = "POLICY", default_value = "regular", value_parser = parse_policy)]
    pub policy: PathPolicy,
    #[arg(long, value_enum, default_value_t = Mode::Simulate)]
    pub mode: Mode,
    /// Move a team to another coefficient rank, as NAME:RANK.
    #[arg(long, value_name = "NAME:RANK", value_parser = parse_swap)]
    pub swap: Option<Swap>,
    /// Comma-separated scale values.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub s_values: Option<Vec<f64>>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Also write plot-ready tables.
    #[arg(long)]
    pub emit_figure_data: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Swap {
    pub team: String,
    pub rank: u8,
}

fn parse_policy(s: &str) -> Result<PathPolicy, String> {
    s.parse()
        .map_err(|e: euroqual_core::ConfigError| e.to_string())
}

pub fn parse_swap(s: &str) -> Result<Swap, String> {
    let (team, rank) = s
        .rsplit_once(':')
        .ok_or_else(|| format!("expected NAME:RANK, got {s:?}"))?;
    let team = team.trim();
    if team.is_empty() {
        return Err(format!("missing team name in {s:?}"));
    }
    let rank: u8 = rank
        .trim()
        .parse()
        .map_err(|_| format!("rank in {s:?} is not a number between 1 and 55"))?;
    if !(1..=55).contains(&rank) {
        return Err(format!("rank {rank} is outside 1..=55"));
    }
    Ok(Swap {
        team: team.to_string(),
        rank,
    })
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub config: SimConfig,
    pub teams_path: PathBuf,
    pub out_dir: PathBuf,
    pub swap: Option<Swap>,
    pub s_values: Vec<f64>,
    pub emit_figure_data: bool,
}

impl RunSpec {
    pub fn from_args(args: Args) -> Result<RunSpec> {
        match args.mode {
            Mode::Simulate if args.swap.is_some() => {
                bail!("--swap needs --mode counterfactual (or sensitivity / policy-compare)")
            }
            Mode::Counterfactual if args.swap.is_none() => {
                bail!("--mode counterfactual needs --swap NAME:RANK")
            }
            Mode::Sensitivity if args.s_values.as_ref().is_none_or(Vec::is_empty) => {
                bail!("--mode sensitivity needs --s-values, e.g. 400,600,800,1200")
            }
            Mode::Sensitivity => {}
            _ if args.s_values.is_some() => {
                bail!("--s-values is only used with --mode sensitivity")
            }
            _ => {}
        }
        if !args.teams.is_file() {
            bail!("team file {} does not exist", args.teams.display());
        }
        let config = SimConfig {
            scale: args.scale,
            home_advantage: args.home_advantage,
            iterations: args.iterations,
            master_seed: args.seed,
            path_policy: args.policy,
            counterfactual: None,
        };
        config.validate()?;
        for &s in args.s_values.iter().flatten() {
            config.clone().with_scale(s).validate()?;
        }
        Ok(RunSpec {
            mode: args.mode,
            config,
            teams_path: args.teams,
            out_dir: args.out,
            swap: args.swap,
            s_values: args.s_values.unwrap_or_default(),
            emit_figure_data: args.emit_figure_data,
        })
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunSpec>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    RunSpec::from_args(args)
}

/// One simulated scenario and where its files go (relative to the output
/// directory; empty for the top level).
#[derive(Debug, Clone)]
pub struct Scenario {
    pub label: String,
    pub report: ProbabilityReport,
}

/// A baseline/swapped pair for the counterfactual bar chart.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub label: String,
    pub subject: TeamId,
    pub baseline: usize,
    pub swapped: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub scenarios: Vec<Scenario>,
    pub comparisons: Vec<Comparison>,
}

impl Outcome {
    fn push_single(&mut self, label: String, report: ProbabilityReport) {
        self.scenarios.push(Scenario { label, report });
    }

    fn push_pair(
        &mut self,
        label: &str,
        teams: &TeamSet,
        cfg: &SimConfig,
        subject: TeamId,
        rank: u8,
    ) -> Result<()> {
        let pair = run_counterfactual(teams, cfg, subject, rank)?;
        let base = self.scenarios.len();
        let name = &teams.get(subject).name;
        let prefix = if label.is_empty() {
            String::new()
        } else {
            format!("{label}/")
        };
        self.push_single(format!("{prefix}baseline"), pair.baseline);
        self.push_single(format!("{prefix}{}_{rank}", slug(name)), pair.swapped);
        self.comparisons.push(Comparison {
            label: label.to_string(),
            subject,
            baseline: base,
            swapped: base + 1,
        });
        Ok(())
    }
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

fn resolve_swap(teams: &TeamSet, swap: &Swap) -> Result<TeamId> {
    teams
        .find(&swap.team)
        .ok_or_else(|| anyhow!("no team named {:?} in the team file", swap.team))
}

/// Runs the experiment a spec asks for.
pub fn execute(spec: &RunSpec) -> Result<Outcome> {
    let teams = TeamSet::from_path(&spec.teams_path)
        .with_context(|| format!("reading {}", spec.teams_path.display()))?;
    let subject = spec
        .swap
        .as_ref()
        .map(|s| resolve_swap(&teams, s))
        .transpose()?;
    let mut outcome = Outcome::default();
    let run = |outcome: &mut Outcome, label: String, cfg: &SimConfig| -> Result<()> {
        match (subject, &spec.swap) {
            (Some(id), Some(swap)) => outcome.push_pair(&label, &teams, cfg, id, swap.rank),
            _ => {
                outcome.push_single(label, run_simulation(&teams, cfg)?);
                Ok(())
            }
        }
    };
    match spec.mode {
        Mode::Simulate | Mode::Counterfactual => run(&mut outcome, String::new(), &spec.config)?,
        Mode::Sensitivity => {
            for &s in &spec.s_values {
                run(
                    &mut outcome,
                    format!("s_{s}"),
                    &spec.config.clone().with_scale(s),
                )?;
            }
        }
        Mode::PolicyCompare => {
            for policy in PathPolicy::ALL {
                run(
                    &mut outcome,
                    policy.to_string(),
                    &spec.config.clone().with_policy(policy),
                )?;
            }
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamCounts {
    pub team: String,
    pub uefa_rank: u8,
    pub direct: u64,
    pub playoff: u64,
    pub playoff_entries: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub label: String,
    pub config: SimConfig,
    /// Name of the moved team, if any.
    pub swapped_team: Option<String>,
    pub master_seed: u64,
    pub iterations: u64,
    pub relaxed_formations: u64,
    pub teams: Vec<TeamCounts>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: Mode,
    pub teams_file: String,
    pub scenarios: Vec<ScenarioSummary>,
}

impl ScenarioSummary {
    pub fn new(scenario: &Scenario) -> Self {
        let r = &scenario.report;
        ScenarioSummary {
            label: scenario.label.clone(),
            config: r.config.clone(),
            swapped_team: r
                .config
                .counterfactual
                .map(|c| r.teams.get(c.subject).name.clone()),
            master_seed: r.config.master_seed,
            iterations: r.tally.iterations,
            relaxed_formations: r.tally.relaxed_formations,
            teams: r
                .teams
                .by_rank()
                .iter()
                .map(|&id| TeamCounts {
                    team: r.teams.get(id).name.clone(),
                    uefa_rank: r.teams.get(id).uefa_rank,
                    direct: r.tally.direct[id.index()],
                    playoff: r.tally.playoff[id.index()],
                    playoff_entries: r.tally.playoff_entries[id.index()],
                })
                .collect(),
        }
    }
}

fn p6(x: f64) -> String {
    format!("{x:.6}")
}

fn create(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))
}

fn write_team_table(report: &ProbabilityReport, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_record([
        "team",
        "league",
        "uefa_rank",
        "elo",
        "p_direct",
        "p_playoff",
        "p_total",
        "stderr_total",
    ])?;
    for row in report.rows() {
        w.write_record([
            row.team,
            row.league.to_string(),
            row.uefa_rank.to_string(),
            row.elo.to_string(),
            p6(row.p_direct),
            p6(row.p_playoff),
            p6(row.p_total),
            p6(row.stderr_total),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_figure_tables(report: &ProbabilityReport, dir: &Path) -> Result<()> {
    let mut scatter = create(&dir.join("elo_vs_total.csv"))?;
    scatter.write_record(["league", "team", "elo", "p_total"])?;
    let mut decomposed = create(&dir.join("decomposed.csv"))?;
    decomposed.write_record(["league", "team", "uefa_rank", "p_direct", "p_playoff"])?;
    let mut rows = report.rows();
    rows.sort_by_key(|r| (r.league, r.uefa_rank));
    for r in rows {
        scatter.write_record([
            r.league.to_string(),
            r.team.clone(),
            r.elo.to_string(),
            p6(r.p_total),
        ])?;
        decomposed.write_record([
            r.league.to_string(),
            r.team,
            r.uefa_rank.to_string(),
            p6(r.p_direct),
            p6(r.p_playoff),
        ])?;
    }
    scatter.flush()?;
    decomposed.flush()?;
    Ok(())
}

fn write_bars(outcome: &Outcome, cmp: &Comparison, dir: &Path) -> Result<()> {
    let mut w = create(&dir.join("counterfactual_bars.csv"))?;
    w.write_record(["scenario", "team", "uefa_rank", "p_direct", "p_playoff"])?;
    for (name, idx) in [("baseline", cmp.baseline), ("swapped", cmp.swapped)] {
        let r = &outcome.scenarios[idx].report;
        let team = r.teams.get(cmp.subject);
        w.write_record([
            name.to_string(),
            team.name.clone(),
            team.uefa_rank.to_string(),
            p6(r.p_direct(cmp.subject)),
            p6(r.p_playoff(cmp.subject)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `teams.csv` per scenario, one `summary.json` and, if asked, the
/// figure tables. Returns the files written.
pub fn write_report(outcome: &Outcome, spec: &RunSpec) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mkdir = |dir: &Path| {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
    };
    mkdir(&spec.out_dir)?;
    for scenario in &outcome.scenarios {
        let dir = spec.out_dir.join(&scenario.label);
        mkdir(&dir)?;
        write_team_table(&scenario.report, &dir.join("teams.csv"))?;
        written.push(dir.join("teams.csv"));
        if spec.emit_figure_data {
            write_figure_tables(&scenario.report, &dir)?;
            written.push(dir.join("elo_vs_total.csv"));
            written.push(dir.join("decomposed.csv"));
        }
    }
    if spec.emit_figure_data {
        for cmp in &outcome.comparisons {
            let dir = spec.out_dir.join(&cmp.label);
            write_bars(outcome, cmp, &dir)?;
            written.push(dir.join("counterfactual_bars.csv"));
        }
    }
    let summary = Summary {
        mode: spec.mode,
        teams_file: spec.teams_path.display().to_string(),
        scenarios: outcome.scenarios.iter().map(ScenarioSummary::new).collect(),
    };
    let path = spec.out_dir.join("summary.json");
    fs::write(&path, serde_json::to_string_pretty(&summary)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    written.push(path);
    Ok(written)
}

/// Parses, runs and writes; what the binary does.
pub fn run<I, T>(argv: I) -> Result<Vec<PathBuf>>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let spec = parse_args(argv)?;
    let outcome = execute(&spec)?;
    write_report(&outcome, &spec)
}
