pub mod bounds;
pub mod codes;
pub mod decoder;
pub mod ensemble;
pub mod experiment;
pub mod field;
pub mod partition;
