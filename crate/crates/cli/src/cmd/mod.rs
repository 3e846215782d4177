pub mod approx;
pub mod entropy;
pub mod formula;
pub mod metric;
pub mod rank;
pub mod stability;
