pub mod error;
pub mod exactmath;
pub mod gamma;
pub mod datum;
pub mod series;
pub mod congruence;
pub mod report;
pub mod modular;
pub mod residues;
pub mod verify;
