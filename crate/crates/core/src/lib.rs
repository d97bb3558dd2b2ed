pub mod catalog;
pub mod determining;
pub mod geodesics;
pub mod lie;
pub mod linalg;
pub mod rational;
pub mod solver;
pub mod symbolic;
