pub mod agcode;
pub mod constructions;
pub mod curve;
pub mod gf;
pub mod lincode;
pub mod poly;
pub mod repro;
