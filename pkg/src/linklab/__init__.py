"""Link-budget and fog-fading statistics for surface-assisted THz links."""

__version__ = "0.1.0"
