pub mod cli_io;
pub mod fm;
pub mod identify;
pub mod labels;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod sheaf;
pub mod trunc;
