"""
CLI commands: eigen, propagate, lorentz, validate
"""
