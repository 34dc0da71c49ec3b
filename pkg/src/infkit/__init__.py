"""Desk-scale verification kernel for infinitary logic under Boolean-valued
semantics: finite Boolean algebras and regular-open completions, Boolean-valued
models and quotients, consistency properties with forcing-style generic
filters, the Mansfield term-model construction, and a sequent calculus checker.
"""

__version__ = "0.1.0"
