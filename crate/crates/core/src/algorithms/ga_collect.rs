//! Plain GA runs that record parents and offspring at chosen generations,
//! for scoring surrogate selection offline.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::evolution::{ga_step, GaSettings, Population, Solution};
use crate::problems::Objective;
use crate::rng::seeded;
use crate::{Error, Result};

pub const DEFAULT_RECORDED_GENERATIONS: [usize; 3] = [2, 22, 42];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaCollectConfig {
    pub ga: GaSettings,
    pub generations: Vec<usize>,
    /// One run per seed; run `r` uses `seeds[r]`.
    pub seeds: Vec<u64>,
}

impl Default for GaCollectConfig {
    fn default() -> Self {
        Self { ga: GaSettings::default(), generations: DEFAULT_RECORDED_GENERATIONS.to_vec(), seeds: (0..30).collect() }
    }
}

/// Parents and offspring of one recorded generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaRecord {
    pub run: usize,
    pub gen: usize,
    pub parents: Vec<Solution>,
    pub offspring: Vec<Solution>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaDataset {
    pub dim: usize,
    pub records: Vec<GaRecord>,
}

fn evaluate_all(problem: &dyn Objective, xs: Vec<Vec<f64>>) -> Result<Vec<Solution>> {
    xs.into_iter()
        .map(|x| {
            let f = problem.evaluate(&x)?;
            Solution::evaluated(x, f)
        })
        .collect()
}

/// Generation `g` is the `g`-th round of offspring.
pub fn ga_collect_run(problem: &dyn Objective, cfg: &GaCollectConfig) -> Result<GaDataset> {
    cfg.ga.validate()?;
    if cfg.generations.is_empty() || cfg.generations.contains(&0) {
        return Err(Error::InvalidInput("recorded generations must be positive and nonempty".into()));
    }
    let last = *cfg.generations.iter().max().unwrap_or(&0);
    let n = cfg.ga.pop_size;
    let (lower, upper) = (problem.lower(), problem.upper());
    let mut records = Vec::with_capacity(cfg.seeds.len() * cfg.generations.len());
    for (run, &seed) in cfg.seeds.iter().enumerate() {
        let mut rng = seeded(seed);
        let init: Vec<Vec<f64>> =
            (0..n).map(|_| (0..problem.dim()).map(|d| rng.random_range(lower[d]..=upper[d])).collect()).collect();
        let mut pop = Population::from_members(evaluate_all(problem, init)?, n);
        for gen in 1..=last {
            let offspring = evaluate_all(problem, ga_step(&pop.members, problem, &cfg.ga, &mut rng)?)?;
            if cfg.generations.contains(&gen) {
                records.push(GaRecord { run, gen, parents: pop.members.clone(), offspring: offspring.clone() });
            }
            pop.members.extend(offspring);
            pop.truncate_best();
        }
    }
    records.sort_by_key(|r| (r.run, r.gen));
    Ok(GaDataset { dim: problem.dim(), records })
}

/// Writes `run,gen,role,x1..xn,f` rows, roles `parent` and `offspring`.
pub fn write_dataset_csv<W: Write>(data: &GaDataset, mut out: W) -> std::io::Result<()> {
    let xs: Vec<String> = (1..=data.dim).map(|i| format!("x{i}")).collect();
    writeln!(out, "run,gen,role,{},f", xs.join(","))?;
    for r in &data.records {
        for (role, set) in [("parent", &r.parents), ("offspring", &r.offspring)] {
            for s in set {
                let coords: Vec<String> = s.x.iter().map(f64::to_string).collect();
                writeln!(out, "{},{},{},{},{}", r.run, r.gen, role, coords.join(","), s.f())?;
            }
        }
    }
    Ok(())
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("dataset line {line}: {msg}"))
}

pub fn read_dataset_csv<R: BufRead>(input: R) -> Result<GaDataset> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty dataset".into()))?
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.len() < 5 || cols[..3] != ["run", "gen", "role"] || cols.last() != Some(&"f") {
        return Err(Error::InvalidInput(format!("unexpected dataset header '{header}'")));
    }
    let dim = cols.len() - 4;
    let mut records: Vec<GaRecord> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::InvalidInput(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != cols.len() {
            return Err(bad(i + 2, "wrong number of fields"));
        }
        let run: usize = fields[0].parse().map_err(|e| bad(i + 2, e))?;
        let gen: usize = fields[1].parse().map_err(|e| bad(i + 2, e))?;
        let nums =
            fields[3..].iter().map(|s| s.parse::<f64>().map_err(|e| bad(i + 2, e))).collect::<Result<Vec<_>>>()?;
        let s = Solution::evaluated(nums[..dim].to_vec(), nums[dim])?;
        if records.last().is_none_or(|r| (r.run, r.gen) != (run, gen)) {
            records.push(GaRecord { run, gen, parents: Vec::new(), offspring: Vec::new() });
        }
        let rec = records.last_mut().expect("record was just pushed");
        match fields[2] {
            "parent" => rec.parents.push(s),
            "offspring" => rec.offspring.push(s),
            other => return Err(bad(i + 2, format!("unknown role '{other}'"))),
        }
    }
    Ok(GaDataset { dim, records })
}
