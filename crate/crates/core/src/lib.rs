#![no_std]
extern crate alloc;

pub mod fixtures;
pub mod hopf;
pub mod linalg;
pub mod presentations;
pub mod simplicial;
pub mod subgroups;
pub mod volumes;
