"""Contact configurations, kinematic subspaces and strict collision maps."""
