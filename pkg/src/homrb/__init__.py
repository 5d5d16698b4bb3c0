"""Exact verification and construction toolkit for Rota-Baxter Hom-algebras."""

__version__ = "0.1.0"
