use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use qcoherence::measures::Measure;

#[derive(Debug, Parser)]
#[command(name = "qcoherence", version, about = "Coherence quantifiers for finite-dimensional quantum states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every randomized step (default 0; never taken from the clock).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Override of the optimizer convergence tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Report format; defaults to csv for `sweep` and json elsewhere.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one coherence measure of a state file.
    Coherence {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = Measure::from_str)]
        measure: Measure,
        /// Entropy order; required for cq and tsallis-alpha.
        #[arg(long)]
        q: Option<f64>,
    },
    /// Tabulate a measure over a range of q.
    Sweep {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_parser = Measure::from_str)]
        measure: Measure,
        /// START:STOP:STEPS, endpoints included.
        #[arg(long, value_parser = SweepRange::from_str)]
        sweep: SweepRange,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Dimensions to test, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3])]
        d: Vec<usize>,
        /// Negative control: add a channel with broken completeness.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Search for a strong-monotonicity violation of the Tsallis α-coherence.
    SearchViolation {
        #[arg(long, value_parser = Measure::from_str)]
        measure: Measure,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 5000)]
        trials: usize,
    },
    /// Emit the maximally coherent state of dimension d as a state file, or
    /// with --q the closed-form value of C_q on it.
    MaxCoherent {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    /// Evenly spaced points, snapped to a 1e-12 grid so that e.g. 0.3 prints
    /// as `0.3`; a single step yields `start`.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| ((self.start + k as f64 * h) * 1e12).round() / 1e12)
            .collect()
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(format!("expected START:STOP:STEPS, got '{s}'"));
        };
        let real = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number '{x}': {e}"));
        let steps: usize = steps.trim().parse().map_err(|e| format!("bad step count '{steps}': {e}"))?;
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        Ok(Self { start: real(start)?, stop: real(stop)?, steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_range_parsing() {
        let r: SweepRange = "0.1:0.9:9".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 9);
        assert!((p[8] - 0.9).abs() < 1e-15);
        assert_eq!("0.3:0.9:1".parse::<SweepRange>().unwrap().points(), vec![0.3]);
        assert!("0.1:0.9:0".parse::<SweepRange>().is_err());
        assert!("0.1:0.9".parse::<SweepRange>().is_err());
        assert!("a:0.9:3".parse::<SweepRange>().is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
