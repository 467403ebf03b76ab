//! Figure presets: the parameter sweeps behind the standard plots, rendered
//! as deterministic CSV tables (12 significant digits, LF line endings,
//! `inf` literal for diverged entries).

use rayon::prelude::*;

use crate::config::InterferometerConfig;
use crate::error::Result;
use crate::numfmt::fmt_sig;
use crate::optimize::{optimal_phase, optimal_r2};
use crate::sensitivity::phase_sensitivity_noisy;

pub const ALPHA_SQRT10: f64 = 3.162_277_660_168_379_5;
pub const ETAS: [f64; 3] = [1.0, 0.9, 0.8];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "fig2" => Some(Self::Fig2),
            "fig3" => Some(Self::Fig3),
            "fig4a" => Some(Self::Fig4a),
            "fig4b" => Some(Self::Fig4b),
            "fig4c" => Some(Self::Fig4c),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Fig4c => "fig4c",
        }
    }
}

/// A rendered table: header plus rows of already-formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Diverged entries encountered while filling the table.
    pub divergences: usize,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

fn count_inf(rows: &[Vec<String>]) -> usize {
    rows.iter()
        .flat_map(|r| r.iter())
        .filter(|c| c.as_str() == "inf" || c.as_str() == "-inf")
        .count()
}

/// Scaled sensitivity of the conventional scheme at its fixed working point
/// φ = π/2.
fn caves_scaled(alpha: f64, r: f64, eta: f64) -> Result<f64> {
    let cfg = InterferometerConfig::new(alpha, r, 0.0, std::f64::consts::FRAC_PI_2, eta)?;
    Ok(phase_sensitivity_noisy(&cfg)?.scaled)
}

/// Scaled phase sensitivity versus input squeezing at α = √10:
/// conventional scheme, φ-optimized balanced scheme, and the ultimate
/// bound, plus the optimized working points.
pub fn fig2(points: usize) -> Result<Table> {
    let alpha = ALPHA_SQRT10;
    let rows: Result<Vec<Vec<String>>> = linspace(0.0, 3.0, points)
        .par_iter()
        .map(|&r| {
            let caves = caves_scaled(alpha, r, 1.0)?;
            let (phi_opt, rep) = optimal_phase(alpha, r, r, 1.0)?;
            let cfg = InterferometerConfig::balanced(alpha, r, 1.0)?;
            let bound_scaled = cfg.n_bar().sqrt() * crate::sensitivity::qcrb_bound(alpha, r);
            Ok(vec![
                fmt_sig(r),
                fmt_sig(caves),
                fmt_sig(rep.scaled),
                fmt_sig(bound_scaled),
                fmt_sig(phi_opt),
            ])
        })
        .collect();
    let rows = rows?;
    let divergences = count_inf(&rows);
    Ok(Table {
        columns: ["r", "scaled_caves", "scaled_ds", "scaled_bound", "phi_opt_ds"]
            .map(String::from)
            .to_vec(),
        rows,
        divergences,
    })
}

/// Scaled sensitivity under imperfect detection (η = 1, 0.9, 0.8) for the
/// conventional and balanced schemes at α = √10.
pub fn fig3(points: usize) -> Result<Table> {
    let alpha = ALPHA_SQRT10;
    let rows: Result<Vec<Vec<String>>> = linspace(0.0, 3.0, points)
        .par_iter()
        .map(|&r| {
            let mut row = vec![fmt_sig(r)];
            for eta in ETAS {
                row.push(fmt_sig(caves_scaled(alpha, r, eta)?));
            }
            for eta in ETAS {
                let (_, rep) = optimal_phase(alpha, r, r, eta)?;
                row.push(fmt_sig(rep.scaled));
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let divergences = count_inf(&rows);
    Ok(Table {
        columns: [
            "r",
            "scaled_caves_eta1.0",
            "scaled_caves_eta0.9",
            "scaled_caves_eta0.8",
            "scaled_ds_eta1.0",
            "scaled_ds_eta0.9",
            "scaled_ds_eta0.8",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        divergences,
    })
}

/// Scaled sensitivity versus output squeezing r₂ at α = √10, r₁ = 1.87,
/// with φ optimized per point, for each detection efficiency.
pub fn fig4a(points: usize) -> Result<Table> {
    let alpha = ALPHA_SQRT10;
    let r1 = 1.87;
    let rows: Result<Vec<Vec<String>>> = linspace(0.0, 6.0, points)
        .par_iter()
        .map(|&r2| {
            let mut scaled = Vec::new();
            let mut phis = Vec::new();
            for eta in ETAS {
                let (phi_opt, rep) = optimal_phase(alpha, r1, r2, eta)?;
                scaled.push(fmt_sig(rep.scaled));
                phis.push(fmt_sig(phi_opt));
            }
            let mut row = vec![fmt_sig(r2)];
            row.extend(scaled);
            row.extend(phis);
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let divergences = count_inf(&rows);
    Ok(Table {
        columns: [
            "r2",
            "scaled_eta1.0",
            "scaled_eta0.9",
            "scaled_eta0.8",
            "phi_opt_eta1.0",
            "phi_opt_eta0.9",
            "phi_opt_eta0.8",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        divergences,
    })
}

/// Optimal output squeezing r₂,opt versus input squeezing r₁ at α = √10
/// (φ optimized jointly) for each detection efficiency.
pub fn fig4b(points: usize) -> Result<Table> {
    let alpha = ALPHA_SQRT10;
    let rows: Result<Vec<Vec<String>>> = linspace(0.0, 2.5, points)
        .par_iter()
        .map(|&r1| {
            let mut row = vec![fmt_sig(r1)];
            for eta in ETAS {
                let (r2_opt, _, _) = optimal_r2(alpha, r1, eta)?;
                row.push(fmt_sig(r2_opt));
            }
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let divergences = count_inf(&rows);
    Ok(Table {
        columns: ["r1", "r2_opt_eta1.0", "r2_opt_eta0.9", "r2_opt_eta0.8"]
            .map(String::from)
            .to_vec(),
        rows,
        divergences,
    })
}

/// Optimal working point φ_opt versus input squeezing r₁ at α = √10 with
/// r₂ optimized jointly, plus the balanced (r₂ = r₁, η = 1) reference.
pub fn fig4c(points: usize) -> Result<Table> {
    let alpha = ALPHA_SQRT10;
    let rows: Result<Vec<Vec<String>>> = linspace(0.1, 2.5, points)
        .par_iter()
        .map(|&r1| {
            let mut row = vec![fmt_sig(r1)];
            for eta in ETAS {
                let (_, phi_opt, _) = optimal_r2(alpha, r1, eta)?;
                row.push(fmt_sig(phi_opt));
            }
            let (phi_bal, _) = optimal_phase(alpha, r1, r1, 1.0)?;
            row.push(fmt_sig(phi_bal));
            Ok(row)
        })
        .collect();
    let rows = rows?;
    let divergences = count_inf(&rows);
    Ok(Table {
        columns: [
            "r1",
            "phi_opt_eta1.0",
            "phi_opt_eta0.9",
            "phi_opt_eta0.8",
            "phi_opt_balanced",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        divergences,
    })
}

/// Default point counts chosen so every preset completes in seconds while
/// resolving the structure of its figure.
pub fn run(preset: Preset) -> Result<Table> {
    match preset {
        Preset::Fig2 => fig2(121),
        Preset::Fig3 => fig3(121),
        Preset::Fig4a => fig4a(121),
        Preset::Fig4b => fig4b(51),
        Preset::Fig4c => fig4c(25),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_has_divergence_spike_and_finite_ds() {
        // 121 points puts a sample within 0.007 of the equal-intensity spike
        let t = fig2(121).unwrap();
        assert_eq!(t.columns.len(), 5);
        assert_eq!(t.rows.len(), 121);
        // Caves column blows up near the equal-intensity point while the
        // dual-squeezing column stays finite everywhere.
        let caves: Vec<f64> = t
            .rows
            .iter()
            .map(|r| r[1].parse().unwrap_or(f64::INFINITY))
            .collect();
        let ds: Vec<f64> = t.rows.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(caves.iter().cloned().fold(0.0, f64::max) > 50.0);
        // sub-shot-noise everywhere except the r = 0 endpoint (exactly 1)
        assert!(ds.iter().all(|v| v.is_finite() && *v <= 1.0));
        assert!(ds.last().unwrap() < &0.25);
    }

    #[test]
    fn preset_tables_are_deterministic() {
        let a = fig4a(15).unwrap().to_csv();
        let b = fig4a(15).unwrap().to_csv();
        assert_eq!(a, b);
    }

    #[test]
    fn preset_names_round_trip() {
        for p in [Preset::Fig2, Preset::Fig3, Preset::Fig4a, Preset::Fig4b, Preset::Fig4c] {
            assert_eq!(Preset::parse(p.name()), Some(p));
        }
        assert_eq!(Preset::parse("fig9"), None);
    }
}
