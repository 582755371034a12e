//! Seismic damage classification pipeline: ground-motion intensity measures,
//! labeled feature tables, preprocessing, a from-scratch kernel SVM with simple
//! baselines, and cross-validated evaluation.

pub mod signal;
pub mod dataset;
pub mod tree;
pub mod preprocess;
pub mod eval;
pub mod models;
