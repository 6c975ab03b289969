pub mod error;
pub mod fock;
pub mod kernel;
pub mod modes;
pub mod quad;
pub mod response;
