"""Domain types, time grids and the coefficient model."""
