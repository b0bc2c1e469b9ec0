pub mod analyze;
pub mod arrangement;
pub mod cli;
pub mod corpus;
pub mod criteria;
pub mod curvefile;
pub mod field;
pub mod global;
pub mod linalg;
pub mod local;
pub mod modular;
pub mod parse;
pub mod poly;
pub mod report;
pub mod screen;
pub(crate) mod upoly;
