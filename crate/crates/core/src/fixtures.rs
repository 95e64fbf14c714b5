//! Small datasets shared by unit tests, integration tests and the docs.

/// Eight-row running example: three categorical attributes, class `C`, two
/// missing cells.
pub const RUNNING_EXAMPLE_CSV: &str = "\
A1,A2,A3,C
a1,a1,a1,c1
a1,a1,?,c1
a1,a1,a2,c1
a1,a2,a3,c3
a2,a2,a3,c3
a2,a2,?,c2
a2,a2,a2,c2
a1,a2,a2,c2
";
