"""Trial generation and visual-search simulation."""
