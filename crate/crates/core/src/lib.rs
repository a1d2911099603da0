pub mod gf;
pub mod json;
pub mod tpoly;
pub mod localfield;
pub mod wedge;
pub mod bloch;
pub mod cycles;
pub mod omega;
pub mod regulator;
pub mod sample;
pub mod verify;
