pub mod logic;
pub mod modes;
pub mod saturation;
pub mod graph;
pub mod dataset;
