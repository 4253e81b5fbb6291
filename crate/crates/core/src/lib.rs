pub mod cli;
pub mod gauge;
pub mod io;
pub mod lie;
pub mod rmatrix;
pub mod linalg;
pub mod moduli;
pub mod scalar;
pub mod series;
pub mod tensor;
