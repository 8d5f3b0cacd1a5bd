"""Coherent-logic prover with proof objects, XML interchange and proof-script export."""

__version__ = "0.1.0"
