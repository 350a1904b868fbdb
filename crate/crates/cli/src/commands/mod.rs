mod bag;
mod bag_validate;
mod common;
mod datacite;
mod deposit;
mod release;
mod remote;
mod steps;
mod sync;
mod validate;

pub use bag::run_bag;
pub use bag_validate::run_bag_validate;
pub use datacite::run_datacite;
pub use deposit::run_deposit;
pub use release::run_release;
pub use sync::run_sync;
pub use validate::run_validate;
