pub mod cli;
pub mod dowling;
pub mod poset;
pub mod reflection;
pub mod series;
pub mod shellability;
