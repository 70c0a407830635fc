pub mod germ;
pub mod linalg;
pub mod polyring;
