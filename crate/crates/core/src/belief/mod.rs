//! State encoders: Naive Bayes product fusion and the Dirichlet generative
//! model of classifier beliefs, with the special functions both need.

mod dirichlet;
pub mod special;
mod state;
mod vector;

pub use dirichlet::{
    batch_log_likelihood, dirichlet_grad_loglik, dirichlet_log_density, DirichletTable,
};
pub use special::{digamma, ln_gamma};
pub use state::{EncodedState, EncoderKind, LOG_FLOOR};
pub use vector::{argmax, BeliefVector, BELIEF_FLOOR, SIMPLEX_TOL};
