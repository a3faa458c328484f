pub mod amplify;
pub mod certify;
pub mod eval;
pub mod solve;
pub mod validate;
pub mod witness;
