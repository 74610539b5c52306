"""Small oscillations of a thin vortex ring: classical and quantized dynamics."""

__version__ = "0.1.0"
