pub mod correlate;
pub mod ingest;
pub mod plotdata;
pub mod qqe;
pub mod summary;
