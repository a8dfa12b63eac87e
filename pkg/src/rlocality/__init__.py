"""Locality toolkit for first-order models valued in finite residuated lattices."""
