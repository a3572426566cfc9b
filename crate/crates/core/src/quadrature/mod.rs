//! Adaptive Gauss–Kronrod quadrature and the model integrals built on it.

mod engine;
mod h_kernel;
mod integrals;
mod panels;
mod transforms;

pub use engine::{integrate_adaptive, integrate_breakpoints, IntegralResult, QuadratureConfig};
pub use h_kernel::{evaluate_h, evaluate_h_with_form, HForm, HRemainder, HValue};
pub use integrals::{evaluate_gm_integral, evaluate_k, truncation_point, KEvaluation};
pub use panels::{SampledPanels, NODES_PER_PANEL};
pub use transforms::{fourier_forward_density, fourier_inverse_cf, CosineKernelTail, ForwardPlan, TailModel};
