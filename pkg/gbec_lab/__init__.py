"""
gbec-lab - generalized Bose-Einstein condensation numerical lab
"""

__version__ = "0.1.0"
