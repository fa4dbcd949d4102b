pub mod functor;
pub mod twovect;
pub mod samples;
pub mod types;
pub mod verify;
