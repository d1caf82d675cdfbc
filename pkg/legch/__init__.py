"""Legendrian contact homology toolkit: DGAs, augmentations and duality checks over Z2."""
