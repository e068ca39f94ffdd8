"""logcap: capacity, mixed derivatives and log-concavity for nonnegative polynomials."""

__version__ = "0.1.0"
