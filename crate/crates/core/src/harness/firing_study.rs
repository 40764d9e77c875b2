//! Firing-rate response study: drive a LIF population with Poisson
//! external input of mean mu_ext and measure how linearly the population
//! rate encodes the input mean.

use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::metrics::linear_fit;
use crate::rng::rng_from;
use crate::spiking::{step_layer, LayerState, LayerWeights, NeuronParams, V0Mode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiringStudyConfig {
    pub n_inputs: usize,
    pub n_neurons: usize,
    pub steps: usize,
    pub weight: f64,
    pub v_threshold: f64,
    pub seed: u64,
}

impl Default for FiringStudyConfig {
    fn default() -> Self {
        FiringStudyConfig {
            n_inputs: 20,
            n_neurons: 10,
            steps: 2000,
            weight: 0.15,
            v_threshold: 1.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiringStudyReport {
    pub mu_grid: Vec<f64>,
    /// Mean firing probability per neuron per step at each drive level.
    pub rates: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Drive a single LIF layer with uniform positive weights from Poisson
/// spike-count inputs of mean `mu_ext` per channel per step, and measure
/// the stationary firing rate for every grid point.
pub fn firing_rate_study(mu_grid: &[f64], config: &FiringStudyConfig) -> Result<FiringStudyReport> {
    if mu_grid.len() < 4 {
        return Err(Error::InvalidArgument {
            name: "mu_grid",
            message: format!("need at least 4 grid points, got {}", mu_grid.len()),
        });
    }
    if mu_grid.iter().any(|&m| m < 0.0) {
        return Err(Error::InvalidArgument {
            name: "mu_grid",
            message: "drive means must be non-negative".into(),
        });
    }
    let params = NeuronParams::new(20.0, 150.0, 20.0, config.v_threshold, V0Mode::PaperFormula)?;
    let weights = LayerWeights {
        ff: Mat {
            rows: config.n_neurons,
            cols: config.n_inputs,
            data: vec![config.weight; config.n_neurons * config.n_inputs],
        },
        rec: None,
    };

    let mut rates = Vec::with_capacity(mu_grid.len());
    for (gi, &mu) in mu_grid.iter().enumerate() {
        let mut rng = rng_from(config.seed, &format!("firing-study-{gi}"));
        let mut state = LayerState::zeros(config.n_inputs, config.n_neurons, false);
        let mut spikes = 0.0f64;
        let poisson = if mu > 0.0 {
            Some(Poisson::new(mu).map_err(|e| Error::InvalidArgument {
                name: "mu_grid",
                message: format!("bad Poisson mean {mu}: {e}"),
            })?)
        } else {
            None
        };
        let mut input = vec![0.0f64; config.n_inputs];
        for _ in 0..config.steps {
            match &poisson {
                Some(p) => {
                    for v in &mut input {
                        *v = p.sample(&mut rng);
                    }
                }
                None => input.iter_mut().for_each(|v| *v = 0.0),
            }
            state = step_layer(&state, &input, &params, &weights)?;
            spikes += state.o_output.iter().sum::<f64>();
        }
        rates.push(spikes / (config.steps as f64 * config.n_neurons as f64));
    }

    let (slope, intercept, r_squared) = linear_fit(mu_grid, &rates)?;
    Ok(FiringStudyReport {
        mu_grid: mu_grid.to_vec(),
        rates,
        slope,
        intercept,
        r_squared,
    })
}
