//! Zeros of analytic characteristic functions: winding numbers over
//! rectangles, subdivision, Newton refinement, multiplicities by local
//! winding.

pub mod contour;
pub mod pattern;
pub mod zeros;

pub use contour::{winding_count, winding_in, RootWindow, Winding, MIN_SAMPLES};
pub use pattern::{default_window, verify_mode_pattern, verify_mode_pattern_in, ModePattern, PATTERN_CHECKS};
pub use zeros::{find_zeros, search_zeros, ZeroRecord, ZeroSearch};
