pub mod bounds;
pub mod catalog;
pub mod counting;
pub mod error;
pub mod exec;
pub mod gf;
pub mod input;
pub mod linalg;
pub mod mpoly;
pub mod pipeline;
pub mod points;
pub mod report;
pub mod valueset;
