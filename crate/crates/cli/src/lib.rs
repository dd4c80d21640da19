//! Command-line front end: table and trace file formats plus one function
//! per subcommand. Exit statuses are 0 when the property holds, 1 when it is
//! refuted and a witness was printed, 2 on usage or format errors.

pub mod commands;
pub mod formats;
