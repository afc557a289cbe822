pub mod algebra;
pub mod error;
pub mod finite_loop;
pub mod free_loop;
pub mod ideal;
pub mod linalg;
pub mod parse;
pub mod rewrite;
pub mod verify;
pub mod word;
