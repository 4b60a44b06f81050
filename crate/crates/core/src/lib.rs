pub mod centrality;
pub mod counter;
pub mod dhrg;
pub mod error;
pub mod metrics;
pub mod oracle;
pub mod paircount;
pub mod rght;
pub mod stg;

pub use error::{Error, Result};
