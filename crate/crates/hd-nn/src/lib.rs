//! Two-layer neural networks over phase symbols: complex-weighted bundling
//! layers, quadrature classification targets, similarity loss, analytic
//! gradients, and execution of the trained weights on either the
//! floating-point phase backend or the oscillator substrate.

mod error;
mod infer;
mod io;
mod layer;
mod matrix;
mod task;
mod train;

pub use error::{NnError, Result};
pub use infer::{
    backend_agreement, direct_drive_settle, evaluate_osc, gaussian_pulse, osc_layer, osc_mlp,
    OscInference, PulseShape,
};
pub use io::{load_weights, save_weights, WeightsFile};
pub use layer::{hd_layer, hd_mlp, loss, predict_class, quadrature_target, QuadratureTarget};
pub use matrix::Matrix;
pub use task::{synthetic_split, SyntheticTaskConfig};
pub use train::{
    evaluate, init_weights, loss_gradients, train, EpochRecord, Hyperparams, LayerShapes,
    TrainedNetwork, DEGENERATE_SUM_FLOOR,
};
