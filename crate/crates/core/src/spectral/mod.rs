//! Lévy–Khinchine representations of the model and its factors.

mod certificate;
mod gm;
mod lk;
mod scan;
mod theorems;

pub use certificate::*;
pub use gm::*;
pub use lk::*;
pub use scan::*;
pub use theorems::*;
