//! Runs the guide's code snippets as doc-tests.
