//! Result tables: per-group mean(std), bracketed ranks, rank-sum symbols
//! against a reference arm, and mean ranks over groups.

use std::io::Write;

use anyhow::{ensure, Result};
use laea_core::stats::{mean, mean_rank, midranks, sample_std, wilcoxon_rank_sum, Symbol, DEFAULT_ALPHA};

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub problem: String,
    pub dim: usize,
    pub arm: String,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub rank: Option<f64>,
    pub symbol: Option<Symbol>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["problem", "dim", "arm", "metric", "mean", "std", "rank", "symbol"])?;
        for r in &self.rows {
            let rank = r.rank.map(|v| v.to_string()).unwrap_or_default();
            let symbol = r.symbol.map(|s| s.as_str()).unwrap_or_default();
            w.write_record([
                r.problem.as_str(),
                &r.dim.to_string(),
                &r.arm,
                &r.metric,
                &r.mean.to_string(),
                &r.std.to_string(),
                &rank,
                symbol,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows for one (problem, dim, arm), in insertion order.
    pub fn find(&self, problem: &str, dim: usize, arm: &str, metric: &str) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.problem == problem && r.dim == dim && r.arm == arm && r.metric == metric)
    }
}

/// Final objective values of every arm on one (problem, dim) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub problem: String,
    pub dim: usize,
    /// `per_arm[a]` holds one value per seed, in seed order.
    pub per_arm: Vec<Vec<f64>>,
}

/// Minimization comparison of several arms over groups of problems.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub metric: String,
    pub arms: Vec<String>,
    pub reference: usize,
    pub groups: Vec<Group>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tally {
    pub plus: usize,
    pub minus: usize,
    pub approx: usize,
}

impl Comparison {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.reference < self.arms.len(), "reference arm out of range");
        for g in &self.groups {
            ensure!(g.per_arm.len() == self.arms.len(), "{}-{}: arm count mismatch", g.problem, g.dim);
            ensure!(g.per_arm.iter().all(|v| !v.is_empty()), "{}-{}: an arm has no results", g.problem, g.dim);
        }
        Ok(())
    }

    fn means(&self, g: &Group) -> Vec<f64> {
        g.per_arm.iter().map(|v| mean(v)).collect()
    }

    /// `None` for the reference arm and when either side has fewer than
    /// three runs.
    fn symbol(&self, g: &Group, arm: usize) -> Result<Option<Symbol>> {
        let (a, r) = (&g.per_arm[arm], &g.per_arm[self.reference]);
        if arm == self.reference || a.len() < 3 || r.len() < 3 {
            return Ok(None);
        }
        Ok(Some(wilcoxon_rank_sum(a, r, DEFAULT_ALPHA)?.symbol))
    }

    pub fn table(&self) -> Result<ResultTable> {
        self.validate()?;
        let mut rows = Vec::new();
        for g in &self.groups {
            let ranks = midranks(&self.means(g));
            for (a, name) in self.arms.iter().enumerate() {
                rows.push(ResultRow {
                    problem: g.problem.clone(),
                    dim: g.dim,
                    arm: name.clone(),
                    metric: self.metric.clone(),
                    mean: mean(&g.per_arm[a]),
                    std: sample_std(&g.per_arm[a]),
                    rank: Some(ranks[a]),
                    symbol: self.symbol(g, a)?,
                });
            }
        }
        Ok(ResultTable { rows })
    }

    pub fn mean_ranks(&self) -> Vec<f64> {
        let per: Vec<Vec<f64>> = self.groups.iter().map(|g| self.means(g)).collect();
        mean_rank(&per)
    }

    pub fn tallies(&self) -> Result<Vec<Tally>> {
        let mut out = vec![Tally::default(); self.arms.len()];
        for g in &self.groups {
            for (a, t) in out.iter_mut().enumerate() {
                match self.symbol(g, a)? {
                    Some(Symbol::Plus) => t.plus += 1,
                    Some(Symbol::Minus) => t.minus += 1,
                    Some(Symbol::Approx) => t.approx += 1,
                    None => {}
                }
            }
        }
        Ok(out)
    }

    /// `arm,mean_rank,plus,minus,approx`; the reference arm has empty tallies.
    pub fn write_ranks_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["arm", "mean_rank", "plus", "minus", "approx"])?;
        let ranks = self.mean_ranks();
        for (a, t) in self.tallies()?.iter().enumerate() {
            let counts = if a == self.reference {
                [String::new(), String::new(), String::new()]
            } else {
                [t.plus.to_string(), t.minus.to_string(), t.approx.to_string()]
            };
            w.write_record([
                self.arms[a].clone(),
                ranks[a].to_string(),
                counts[0].clone(),
                counts[1].clone(),
                counts[2].clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Plain-text table: one row per group, one column per arm, each cell
    /// `mean(std) [rank] symbol`, then the symbol tally and mean-rank rows.
    pub fn render_text(&self) -> Result<String> {
        self.validate()?;
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec![String::from("problem"), String::from("n")];
        header.extend(self.arms.iter().map(|a| {
            if self.arms[self.reference] == *a {
                format!("{a} (ref)")
            } else {
                a.clone()
            }
        }));
        grid.push(header);
        for g in &self.groups {
            let ranks = midranks(&self.means(g));
            let mut row = vec![g.problem.clone(), g.dim.to_string()];
            for (a, (values, rank)) in g.per_arm.iter().zip(&ranks).enumerate() {
                let sym = self.symbol(g, a)?.map(|s| format!(" {}", s.as_str())).unwrap_or_default();
                row.push(format!("{:.4e}({:.2e}) [{rank}]{sym}", mean(values), sample_std(values)));
            }
            grid.push(row);
        }
        let mut tally_row = vec![String::from("+/-/≈"), String::new()];
        for (a, t) in self.tallies()?.iter().enumerate() {
            tally_row.push(if a == self.reference {
                String::from("-")
            } else {
                format!("{}/{}/{}", t.plus, t.minus, t.approx)
            });
        }
        grid.push(tally_row);
        let mut rank_row = vec![String::from("mean rank"), String::new()];
        rank_row.extend(self.mean_ranks().iter().map(|r| format!("{r}")));
        grid.push(rank_row);
        Ok(render_grid(&grid))
    }
}

/// Left-aligned columns separated by two spaces.
pub fn render_grid(grid: &[Vec<String>]) -> String {
    let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| grid.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in grid {
        let cells: Vec<String> =
            row.iter().enumerate().map(|(c, s)| format!("{s}{}", " ".repeat(widths[c] - s.chars().count()))).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
