//! Minimal feed-forward network substrate: seeded initialization, forward
//! evaluation, exact reverse-mode gradients, and Adam updates.
//!
//! Shapes follow one convention everywhere: a batch is `(n, d)` with one
//! sample per row, and the weight matrix of layer `i` is
//! `(layer_dims[i+1], layer_dims[i])`, so a layer computes
//! `a · Wᵀ + b` row-wise. All math is `f64`; feature files are the only
//! place single precision appears.

mod adam;
mod gradcheck;
mod loss;

pub use adam::AdamState;
pub use gradcheck::{check_gradients, GradCheckConfig, GradCheckReport};
pub use loss::{
    gaussian_kl, gaussian_kl_grad, log_sigmoid, logsumexp, sigmoid, softmax_nll, softplus,
};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, truncated_normal};
use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

/// Initialization constants used by every network: truncated normal with
/// mean 0, stddev 0.01, clipped at ±2 stddev; biases start at zero.
pub const INIT_STDDEV: f64 = 0.01;
pub const INIT_BOUND_SIGMAS: f64 = 2.0;

/// Default negative-side slope for leaky rectified units.
pub const DEFAULT_LEAKY_SLOPE: f64 = 0.01;

/// Per-layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Activation {
    /// max(x, 0); subgradient at 0 is taken from the negative side (0).
    Relu,
    /// x for x > 0, slope·x otherwise; derivative at 0 is the slope.
    LeakyRelu(f64),
    Identity,
}

impl Activation {
    fn apply(&self, x: f64) -> f64 {
        match *self {
            Activation::Relu => x.max(0.0),
            Activation::LeakyRelu(s) => {
                if x > 0.0 {
                    x
                } else {
                    s * x
                }
            }
            Activation::Identity => x,
        }
    }

    /// Derivative as a function of the pre-activation.
    fn derivative(&self, x: f64) -> f64 {
        match *self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu(s) => {
                if x > 0.0 {
                    1.0
                } else {
                    s
                }
            }
            Activation::Identity => 1.0,
        }
    }
}

/// Dense feed-forward network: the unit of every learnable component.
#[derive(Debug, Clone)]
pub struct MlpModel {
    layer_dims: Vec<usize>,
    weights: Vec<Array2<f64>>,
    biases: Vec<Array1<f64>>,
    activations: Vec<Activation>,
}

/// Parameter-shaped gradient (or moment) buffers for one [`MlpModel`].
#[derive(Debug, Clone)]
pub struct MlpGrads {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Intermediate activations kept by [`MlpModel::forward_cached`] so that
/// [`MlpModel::backward`] can run without recomputing the forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Post-activation of every layer; `post[0]` is the input batch.
    post: Vec<Array2<f64>>,
    /// Pre-activation of every weight layer.
    pre: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &Array2<f64> {
        self.post.last().expect("cache holds at least the input")
    }

    pub fn input(&self) -> &Array2<f64> {
        &self.post[0]
    }

    pub fn batch_size(&self) -> usize {
        self.post[0].nrows()
    }
}

impl MlpModel {
    /// Build a model with truncated-normal weights and zero biases.
    /// Identical `(layer_dims, activations, seed)` produce bit-identical
    /// parameters.
    pub fn init(layer_dims: &[usize], activations: &[Activation], seed: u64) -> Result<Self> {
        if layer_dims.len() < 2 {
            return Err(Error::config(format!(
                "layer_dims needs at least input and output entries, got {:?}",
                layer_dims
            )));
        }
        if layer_dims.iter().any(|&d| d == 0) {
            return Err(Error::config(format!(
                "layer_dims must be positive, got {:?}",
                layer_dims
            )));
        }
        if activations.len() != layer_dims.len() - 1 {
            return Err(Error::config(format!(
                "expected {} activations for {} layers, got {}",
                layer_dims.len() - 1,
                layer_dims.len(),
                activations.len()
            )));
        }
        let mut rng = rng_from_seed(seed);
        let mut weights = Vec::with_capacity(layer_dims.len() - 1);
        let mut biases = Vec::with_capacity(layer_dims.len() - 1);
        for w in layer_dims.windows(2) {
            let (d_in, d_out) = (w[0], w[1]);
            let mut m = Array2::<f64>::zeros((d_out, d_in));
            for v in m.iter_mut() {
                *v = truncated_normal(&mut rng, 0.0, INIT_STDDEV, INIT_BOUND_SIGMAS);
            }
            weights.push(m);
            biases.push(Array1::<f64>::zeros(d_out));
        }
        Ok(MlpModel {
            layer_dims: layer_dims.to_vec(),
            weights,
            biases,
            activations: activations.to_vec(),
        })
    }

    /// Build directly from explicit parameters (used by checkpoint loading
    /// and tests that plant exact weights).
    pub fn from_parts(
        layer_dims: Vec<usize>,
        weights: Vec<Array2<f64>>,
        biases: Vec<Array1<f64>>,
        activations: Vec<Activation>,
    ) -> Result<Self> {
        let model = MlpModel {
            layer_dims,
            weights,
            biases,
            activations,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.layer_dims.len() < 2 {
            return Err(Error::config("layer_dims needs at least 2 entries"));
        }
        let n_layers = self.layer_dims.len() - 1;
        if self.weights.len() != n_layers
            || self.biases.len() != n_layers
            || self.activations.len() != n_layers
        {
            return Err(Error::config("parameter list lengths disagree"));
        }
        for i in 0..n_layers {
            let want = (self.layer_dims[i + 1], self.layer_dims[i]);
            if self.weights[i].dim() != want {
                return Err(Error::shape(format!(
                    "weight {} has shape {:?}, expected {:?}",
                    i,
                    self.weights[i].dim(),
                    want
                )));
            }
            if self.biases[i].len() != self.layer_dims[i + 1] {
                return Err(Error::shape(format!(
                    "bias {} has length {}, expected {}",
                    i,
                    self.biases[i].len(),
                    self.layer_dims[i + 1]
                )));
            }
        }
        Ok(())
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    pub fn weights(&self) -> &[Array2<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Array1<f64>] {
        &self.biases
    }

    pub fn num_parameters(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>()
            + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Mutable access for optimizers and finite-difference probes.
    pub fn params_mut(&mut self) -> (&mut [Array2<f64>], &mut [Array1<f64>]) {
        (&mut self.weights, &mut self.biases)
    }

    fn check_input(&self, batch: &Array2<f64>) -> Result<()> {
        if batch.ncols() != self.input_dim() {
            return Err(Error::shape(format!(
                "batch has {} columns, model expects input dim {}",
                batch.ncols(),
                self.input_dim()
            )));
        }
        Ok(())
    }

    /// Final-layer activations for a `(n, input_dim)` batch.
    pub fn forward(&self, batch: &Array2<f64>) -> Result<Array2<f64>> {
        self.check_input(batch)?;
        let mut a = batch.clone();
        for (i, w) in self.weights.iter().enumerate() {
            let mut z = a.dot(&w.t());
            z += &self.biases[i];
            z.mapv_inplace(|x| self.activations[i].apply(x));
            a = z;
        }
        Ok(a)
    }

    /// Forward pass that keeps pre/post activations for [`Self::backward`].
    pub fn forward_cached(&self, batch: &Array2<f64>) -> Result<ForwardCache> {
        self.check_input(batch)?;
        let mut post = Vec::with_capacity(self.weights.len() + 1);
        let mut pre = Vec::with_capacity(self.weights.len());
        post.push(batch.clone());
        for (i, w) in self.weights.iter().enumerate() {
            let mut z = post[i].dot(&w.t());
            z += &self.biases[i];
            pre.push(z.clone());
            z.mapv_inplace(|x| self.activations[i].apply(x));
            post.push(z);
        }
        Ok(ForwardCache { post, pre })
    }

    /// Exact gradients of the forward map. `upstream` is dL/d(output) with
    /// the output's shape; returns parameter gradients and dL/d(input).
    pub fn backward(
        &self,
        cache: &ForwardCache,
        upstream: &Array2<f64>,
    ) -> Result<(MlpGrads, Array2<f64>)> {
        let out = cache.output();
        if upstream.dim() != out.dim() {
            return Err(Error::shape(format!(
                "upstream grad has shape {:?}, output has {:?}",
                upstream.dim(),
                out.dim()
            )));
        }
        let n_layers = self.weights.len();
        let mut grads = MlpGrads::zeros_like(self);
        let mut da = upstream.clone();
        for l in (0..n_layers).rev() {
            // dz = da ⊙ act'(pre)
            let mut dz = da;
            ndarray::Zip::from(&mut dz)
                .and(&cache.pre[l])
                .for_each(|g, &z| *g *= self.activations[l].derivative(z));
            grads.weights[l] = dz.t().dot(&cache.post[l]);
            grads.biases[l] = dz.sum_axis(Axis(0));
            da = dz.dot(&self.weights[l]);
        }
        Ok((grads, da))
    }
}

impl MlpGrads {
    pub fn zeros_like(model: &MlpModel) -> Self {
        MlpGrads {
            weights: model
                .weights
                .iter()
                .map(|w| Array2::zeros(w.dim()))
                .collect(),
            biases: model.biases.iter().map(|b| Array1::zeros(b.len())).collect(),
        }
    }

    /// self += scale · other
    pub fn add_scaled(&mut self, other: &MlpGrads, scale: f64) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            a.scaled_add(scale, b);
        }
        for (a, b) in self.biases.iter_mut().zip(&other.biases) {
            a.scaled_add(scale, b);
        }
    }

    pub fn scale(&mut self, s: f64) {
        for w in &mut self.weights {
            w.mapv_inplace(|x| x * s);
        }
        for b in &mut self.biases {
            b.mapv_inplace(|x| x * s);
        }
    }

    pub fn max_abs(&self) -> f64 {
        let w = self
            .weights
            .iter()
            .flat_map(|m| m.iter())
            .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
        self.biases
            .iter()
            .flat_map(|b| b.iter())
            .fold(w, |acc, &x| acc.max(x.abs()))
    }
}
