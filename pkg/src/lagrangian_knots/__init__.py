"""Lagrangian intersection model for coloured Jones and ADO invariants of braid closures."""
