//! Intraday non-Gaussianity statistics for high-frequency price series.
//!
//! The library ingests intraday quote files, computes per-day proxies for the
//! shape of the return distribution (p-volatility, p-kurtosis and its
//! half-moment and quantile variants, tail-event counts), quantifies the
//! kurtosis floor induced by intraday volatility seasonality, and provides a
//! two-Gaussian mixture null model with sampling, analytic moments,
//! finite-sample experiments, inverse calibration and synthetic scenario
//! generation.
//!
//! All estimators are pure functions of their inputs; simulations draw from
//! per-day seeded substreams so results are reproducible regardless of
//! parallel scheduling.

pub mod error;
pub mod estimators;
pub mod market_data;
pub mod pipeline;
pub mod seasonality;
pub mod series;
pub mod simulator;

pub use error::{Error, ErrorClass, Result};
