pub mod box_model;
pub mod landauer;
pub mod partition;
pub mod sweep;
pub mod switch;
