//! Order-dependence construction: the same two spike sequences presented in
//! opposite orders make a single first-layer neuron emit different
//! per-sequence firing patterns, because a fire triggers a weight update
//! that the reverse order never sees.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderDemoConfig {
    /// Sequence length; must be even so the half-one sequence is defined.
    pub l: usize,
    /// Mean of the Gaussian weight initialization.
    pub mu: f64,
    /// Std of the Gaussian weight initialization.
    pub sigma: f64,
    /// Weight mean after the post-fire update. The update rule between
    /// samples is otherwise unspecified, so the target mean is explicit.
    pub mu_prime: f64,
    pub v_th: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDemoOutcome {
    /// Per-sequence firing bits for the order all-one -> half-one.
    pub order_a_output: Vec<u8>,
    /// Per-sequence firing bits for the order half-one -> all-one.
    pub order_b_output: Vec<u8>,
    pub differ: bool,
    /// Membrane potentials reached per presented sequence, for diagnostics.
    pub order_a_potentials: Vec<f64>,
    pub order_b_potentials: Vec<f64>,
}

/// One neuron with `l` input synapses, one per sequence position. The
/// potential reached by a sequence is the mean synaptic drive
/// (1/l) * sum_i w_i s_i, so an all-one sequence reaches the weight mean
/// and a half-one sequence reaches half of it. When the neuron fires, all
/// weights shift so their mean becomes `mu_prime`.
#[derive(Debug, Clone)]
pub struct OrderDemo {
    weights: Vec<f64>,
    v_th: f64,
    mu_prime: f64,
}

impl OrderDemo {
    pub fn new(config: &OrderDemoConfig) -> Result<Self> {
        if config.l == 0 || config.l % 2 != 0 {
            return Err(Error::InvalidArgument {
                name: "l",
                message: format!("sequence length must be even and positive, got {}", config.l),
            });
        }
        if !(config.v_th > 0.0) {
            return Err(Error::InvalidArgument {
                name: "v_th",
                message: format!("threshold must be positive, got {}", config.v_th),
            });
        }
        if !(config.sigma >= 0.0) {
            return Err(Error::InvalidArgument {
                name: "sigma",
                message: format!("sigma must be non-negative, got {}", config.sigma),
            });
        }
        let mut rng = rng_from(config.seed, "order-demo-weights");
        let weights = if config.sigma == 0.0 {
            vec![config.mu; config.l]
        } else {
            let normal = Normal::new(config.mu, config.sigma).unwrap();
            (0..config.l).map(|_| normal.sample(&mut rng)).collect()
        };
        Ok(OrderDemo {
            weights,
            v_th: config.v_th,
            mu_prime: config.mu_prime,
        })
    }

    fn potential(&self, sequence: &[u8]) -> f64 {
        let l = self.weights.len() as f64;
        sequence
            .iter()
            .zip(&self.weights)
            .filter(|(&s, _)| s == 1)
            .map(|(_, w)| w)
            .sum::<f64>()
            / l
    }

    fn fire_and_update(&mut self, sequence: &[u8]) -> (bool, f64) {
        let v = self.potential(sequence);
        let fired = v >= self.v_th;
        if fired {
            let mean = self.weights.iter().sum::<f64>() / self.weights.len() as f64;
            let shift = self.mu_prime - mean;
            for w in &mut self.weights {
                *w += shift;
            }
        }
        (fired, v)
    }

    /// Present two sequences in order, returning the firing bits and the
    /// potentials each sequence reached.
    pub fn run_order(&self, first: &[u8], second: &[u8]) -> (Vec<u8>, Vec<f64>) {
        let mut demo = self.clone();
        let mut bits = Vec::with_capacity(2);
        let mut potentials = Vec::with_capacity(2);
        for seq in [first, second] {
            let (fired, v) = demo.fire_and_update(seq);
            bits.push(fired as u8);
            potentials.push(v);
        }
        (bits, potentials)
    }
}

/// Canonical sequences: all-one, and zeros over the first half.
pub fn canonical_sequences(l: usize) -> (Vec<u8>, Vec<u8>) {
    let all_one = vec![1u8; l];
    let mut half_one = vec![0u8; l];
    for s in half_one.iter_mut().skip(l / 2) {
        *s = 1;
    }
    (all_one, half_one)
}

/// Run the construction in both orders and report whether the per-sequence
/// outputs differ.
pub fn theorem1_demo(config: &OrderDemoConfig) -> Result<OrderDemoOutcome> {
    let demo = OrderDemo::new(config)?;
    let (s0, s1) = canonical_sequences(config.l);
    let (order_a_output, order_a_potentials) = demo.run_order(&s0, &s1);
    let (order_b_output, order_b_potentials) = demo.run_order(&s1, &s0);
    let differ = order_a_output != order_b_output;
    Ok(OrderDemoOutcome {
        order_a_output,
        order_b_output,
        differ,
        order_a_potentials,
        order_b_potentials,
    })
}
