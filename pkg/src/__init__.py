"""conetoric - exact moment-cone classification of contact toric manifolds."""

__version__ = "1.0.0"
