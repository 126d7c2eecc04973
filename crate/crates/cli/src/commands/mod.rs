pub mod eigen;
pub mod kacrice;
pub mod lattice;
pub mod loglab;
pub mod measure;
pub mod nodal;
pub mod rwm;
