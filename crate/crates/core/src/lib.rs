pub mod complexity;
pub mod diagram;
pub mod gen;
pub mod grading;
pub mod machine;
pub mod suite;
pub mod sweep;
pub mod tree;

pub use tree::Tree;
