//! RLML toolchain library: parse and validate models, compile environments
//! into tabular MDPs, train agents, compare them, persist them and generate
//! standalone programs from them.

pub mod codegen;
pub mod compare;
pub mod engine;
pub mod mdp;
pub mod model;
pub mod rng;
pub mod textio;
pub mod validate;

pub use mdp::Mdp;
pub use model::{
    AgentSpec, AlgorithmKind, ComparatorModel, EnvironmentSpec, Hyperparameters, InputSource,
    Model, RlmlModel,
};
pub use rng::Rng;
