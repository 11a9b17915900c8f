"""semiriem-lab - numerical laboratory for curvature bounds on semi-Riemannian manifolds."""

__version__ = "0.1.0"
