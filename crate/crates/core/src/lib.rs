pub mod analysis;
pub mod cells;
pub mod coxeter;
pub mod hecke;
pub mod jring;
pub mod laurent;
pub mod report;
pub mod theorems;
pub mod verify;
