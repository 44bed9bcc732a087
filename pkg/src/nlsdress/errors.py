class DomainError(ValueError):
    """Raised when an input falls outside the region where a construction is defined.

    Examples are excluded spectral parameters, a complex branch of Omega at the
    boundary, a pole of a boundary matrix, or a degenerate dressing chain.
    """
