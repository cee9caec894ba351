"""Exception hierarchy shared across the package."""


class CiteScopeError(Exception):
    """Base class for all citescope errors."""


class MalformedCorpus(CiteScopeError):
    """Corpus JSON violates the documented schema.

    ``pointer`` is a JSON-pointer-like path to the offending location.
    """

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class CorpusIoError(CiteScopeError):
    """Corpus file could not be read or written."""


class EmptyQuery(CiteScopeError):
    """No terms survive query filtering for a citation."""


class EmptyGraph(CiteScopeError):
    """Graph operation requires at least one positive-weight edge."""


class DegenerateData(CiteScopeError):
    """Classifier training data contains fewer than two classes."""


class NoConvergence(CiteScopeError):
    """Power iteration hit max_iter before reaching tolerance."""

    def __init__(self, iterations, residual):
        super().__init__(
            f"no convergence after {iterations} iterations (residual={residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class EmptyGroups(CiteScopeError):
    """Selection requires at least one non-empty group."""


class EmptyInput(CiteScopeError):
    """Operation requires a non-empty input collection."""
