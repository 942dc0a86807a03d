"""
wkbwave: WKB and spectral wave propagation in separable dispersive media
"""
import logging

__version__ = "1.0.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
