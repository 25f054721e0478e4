"""
Core package: integer programs, solvers, modelers, verifier structures,
witness protocols and exact oracles.
"""
