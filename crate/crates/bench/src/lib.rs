//! Wall-time companion to the counter-based `reachplan bench`
//! subcommand; the actual measurements live in `benches/`.
