pub mod blowup;
pub mod cli;
pub mod euler;
pub mod gf;
pub mod laurent;
pub mod polygon;
pub mod reduce;
