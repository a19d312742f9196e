pub mod sphere;
pub mod path;
pub mod overlay;
pub mod carrier;
pub mod isotopy;
pub mod fixtures;
pub mod blowup;
pub mod par;
pub mod lifting;
pub mod action;
pub mod twisting;
pub mod decomposition;
pub mod classify;
