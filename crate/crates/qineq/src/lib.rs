pub mod catalog;
pub mod expr;
pub mod ineq;
pub mod integrate;
pub mod qcore;
pub mod search;
pub mod report;
pub mod reproduce;
