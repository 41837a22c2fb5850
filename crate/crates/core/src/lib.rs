pub mod bounds;
pub mod blocks;
pub mod canon;
pub mod cli;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod params;
pub mod spectra;
pub mod transforms;
pub mod verify;
