"""Static I/O lower-bound analysis for affine programs, with a pebble-game oracle."""
