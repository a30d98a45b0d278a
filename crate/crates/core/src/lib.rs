pub mod complex;
pub mod cone;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod instances;
pub mod foliation;
pub mod lattice;
pub mod lift;
pub mod lp;
pub mod matrix;
pub mod normality;
pub mod quotient;
pub mod rational;
pub mod sampling;
pub mod subspace;
pub mod symbolic;
pub mod tkform;
