"""Optimal seeding of a product of uncertain quality on random networks."""
