"""Computation services: algebra, diagrams, disks, homology and geography."""
