"""Exception types raised across linklab."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its tolerance within the cap."""


class ConsistencyError(ArithmeticError):
    """A computed probability fell outside [0, 1] beyond round-off."""


class CatalogParseError(ValueError):
    """Malformed record in a HITRAN line catalog."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConfigError(ValueError):
    """Invalid or inconsistent scenario configuration."""
