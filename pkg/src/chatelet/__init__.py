"""Point counts and local-global data for the surfaces x^2 + delta*y^2 = f(z)."""
__version__ = "0.1.0"
