"""saginlab: a desk-scale laboratory for quantum multi-agent scheduling of
ground-station links to CubeSats and high-altitude UAVs."""

__version__ = "0.1.0"
