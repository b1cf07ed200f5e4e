"""Mass distributions, the kinetic-energy metric and free flight."""
