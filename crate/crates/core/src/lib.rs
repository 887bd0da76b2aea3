//! Token repetition learning for Java code completion.
//!
//! The pipeline: parse Java source into ASTs, linearize each method by
//! pre-order traversal into a token-event sequence (leaf nodes split into a
//! type token and a content token), filter `SimpleName` nodes down to the
//! repetition-prone "cared" subset, train an LSTM language model, then train
//! a bilinear repetition pointer head (and an additive attention-pointer
//! baseline) on the frozen LSTM states, and evaluate stratified top-k
//! accuracy over all / cared / unseen-cared content tokens.

pub mod artifact;
pub mod config;
pub mod corpus;
pub mod model;
pub mod numeric;
pub mod syntax;
pub mod train;
