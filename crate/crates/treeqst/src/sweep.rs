//! Parameter sweeps over time and weak-measurement strength.

use treeqst_core::entanglement::{optimal_concurrence_closed, optimal_ed_success_probability};
use treeqst_core::protocol::success_probability;
use treeqst_core::{
    amplitudes_analytic, average_fidelity_closed, average_fidelity_natural,
    average_success_probability, concurrence, distribute, AmplitudeTrajectory, BathSpec, Complex64,
    Error, ProtocolParams, QubitState, TreeSpec,
};

use crate::config::{Mode, RunConfig};
use crate::error::{CliError, Result};

/// Named numeric columns, one row per sample. `NaN` marks a value that does
/// not exist (a post-selected quantity whose success probability is zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn tree_and_bath(config: &RunConfig) -> Result<(TreeSpec, BathSpec)> {
    Ok((
        TreeSpec::new(config.generations, config.omega0, config.nu)?,
        BathSpec::new(config.gamma, config.lambda)?,
    ))
}

pub fn trajectory(config: &RunConfig) -> Result<(TreeSpec, AmplitudeTrajectory)> {
    let (tree, bath) = tree_and_bath(config)?;
    let traj = amplitudes_analytic(&config.times(), &tree, &bath)?;
    Ok((tree, traj))
}

/// Evaluate the sweep selected by `config.mode`. Rows are ordered by time,
/// then by `p` in the order given.
pub fn run(config: &RunConfig) -> Result<Table> {
    config.validate()?;
    if config.mode == Mode::Verify {
        return Err(CliError::Config(
            "mode = verify produces a report, not a table".into(),
        ));
    }
    let (tree, traj) = trajectory(config)?;
    if config.mode == Mode::Amplitudes {
        return Ok(amplitude_table(&traj));
    }
    let generation = ProtocolParams::new(0.0, config.site, &tree)?.target_generation();
    let state = QubitState::new(config.theta, config.phi)?;

    let mut table = Table::new(match config.mode {
        Mode::Fidelity => &["t", "p", "f_abs", "F_ave", "F_natural", "P_success"],
        Mode::Success => &["t", "p", "f_abs", "P_success", "P_success_state"],
        Mode::Concurrence => &["t", "p", "f_abs", "C_opt", "C_natural", "P_ed"],
        Mode::EdSuccess => &["t", "p", "f_abs", "P_ed", "q_opt"],
        Mode::Amplitudes | Mode::Verify => unreachable!(),
    });
    for (k, &t) in traj.times().iter().enumerate() {
        let f = traj.transfer_amplitude(k, generation);
        let f_abs = f.norm();
        for &p in &config.p {
            let tail = match config.mode {
                Mode::Fidelity => vec![
                    average_fidelity_closed(p, f_abs),
                    average_fidelity_natural(f_abs),
                    average_success_probability(p, f_abs),
                ],
                Mode::Success => vec![
                    average_success_probability(p, f_abs),
                    success_probability(&state, p, f_abs),
                ],
                Mode::Concurrence => {
                    let (c_opt, p_ed) = optimal_concurrence(config, p, f_abs)?;
                    vec![c_opt, natural_concurrence(config, f)?, p_ed]
                }
                Mode::EdSuccess => vec![
                    optimal_ed_success_probability(config.theta, p, f_abs),
                    treeqst_core::optimal_qmr_strength(p, f)?,
                ],
                Mode::Amplitudes | Mode::Verify => unreachable!(),
            };
            let mut row = vec![t, p, f_abs];
            row.extend(tail);
            table.rows.push(row);
        }
    }
    Ok(table)
}

/// Closed form; `NaN` only when the success probability is exactly zero.
fn optimal_concurrence(config: &RunConfig, p: f64, f_abs: f64) -> Result<(f64, f64)> {
    let prob = optimal_ed_success_probability(config.theta, p, f_abs);
    match optimal_concurrence_closed(config.theta, p, f_abs) {
        Ok(c) => Ok((c, prob)),
        Err(Error::ZeroSuccessProbability) => Ok((f64::NAN, prob)),
        Err(e) => Err(e.into()),
    }
}

fn natural_concurrence(config: &RunConfig, f: Complex64) -> Result<f64> {
    match distribute(config.theta, config.phi, 0.0, 0.0, f) {
        Ok(state) => Ok(concurrence(&state)),
        Err(Error::ZeroSuccessProbability) => Ok(f64::NAN),
        Err(e) => Err(e.into()),
    }
}

fn amplitude_table(traj: &AmplitudeTrajectory) -> Table {
    let n = traj.generations();
    let mut columns = vec!["t".to_string()];
    for m in 1..=n {
        columns.push(format!("C{m}_re"));
        columns.push(format!("C{m}_im"));
        columns.push(format!("C{m}_abs"));
    }
    columns.push("leaked".to_string());
    let rows = traj
        .times()
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut row = vec![t];
            for c in traj.amplitudes_at(k) {
                row.extend([c.re, c.im, c.norm()]);
            }
            row.push(traj.leaked_weight()[k]);
            row
        })
        .collect();
    Table { columns, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigLayer;

    fn config(layer: ConfigLayer) -> RunConfig {
        layer.resolve().unwrap()
    }

    #[test]
    fn row_order_is_time_then_p() {
        let c = config(ConfigLayer {
            steps: Some(3),
            p: Some(vec![0.6, 0.2]),
            ..ConfigLayer::default()
        });
        let t = run(&c).unwrap();
        let order: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0], r[1])).collect();
        assert_eq!(
            order,
            vec![
                (0.0, 0.6),
                (0.0, 0.2),
                (10.0, 0.6),
                (10.0, 0.2),
                (20.0, 0.6),
                (20.0, 0.2)
            ]
        );
    }

    #[test]
    fn closed_two_generation_amplitudes() {
        let c = config(ConfigLayer {
            mode: Some(Mode::Amplitudes),
            generations: Some(2),
            gamma: Some(0.0),
            steps: Some(41),
            tmax: Some(4.0),
            ..ConfigLayer::default()
        });
        let t = run(&c).unwrap();
        assert_eq!(t.columns.len(), 1 + 3 * 2 + 1);
        let ts = t.column("t").unwrap();
        let c1 = t.column("C1_abs").unwrap();
        let c2 = t.column("C2_abs").unwrap();
        for k in 0..ts.len() {
            let w = 2f64.sqrt() * ts[k];
            assert!((c1[k] - w.cos().abs()).abs() < 1e-12);
            assert!((c2[k] - w.sin().abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn early_concurrence_approaches_its_small_amplitude_limit() {
        // at t = 0 almost nothing has reached a deep site; the post-selected
        // concurrence tends to 1 / (1 + (1-p)/2) for theta = pi/2
        let c = config(ConfigLayer {
            mode: Some(Mode::Concurrence),
            steps: Some(2),
            p: Some(vec![0.3]),
            ..ConfigLayer::default()
        });
        let t = run(&c).unwrap();
        assert!(t.rows[0][2] < 1e-12);
        assert!(t.rows[0][5] < 1e-24);
        let limit = 1.0 / (1.0 + 0.7 / 2.0);
        assert!((t.rows[0][3] - limit).abs() < 1e-9);
        assert!(t.rows[1][3].is_finite());
    }

    #[test]
    fn verify_mode_has_no_table() {
        let c = config(ConfigLayer {
            mode: Some(Mode::Verify),
            ..ConfigLayer::default()
        });
        assert!(run(&c).is_err());
    }
}
