from typing import Any, Dict, List, Optional

from bapcore.response.schemas import ErrorDetail

EXIT_RUNTIME_ERROR = 1
EXIT_INPUT_ERROR = 2


class BapException(Exception):
    """Base exception for all solver exceptions."""

    def __init__(
        self,
        detail: str = "An error occurred",
        error_code: str = "INTERNAL_ERROR",
        exit_code: int = EXIT_RUNTIME_ERROR,
        error_details: Optional[List[ErrorDetail]] = None,
    ):
        self.detail = detail
        self.error_code = error_code
        self.exit_code = exit_code
        self.error_details = error_details or []
        super().__init__(self.detail)


# Input errors (exit code 2)
class InvalidInputException(BapException):
    """Raised when caller-supplied data is invalid."""

    def __init__(
        self,
        detail: str = "Invalid input data",
        error_code: str = "INVALID_INPUT",
        error_details: Optional[List[ErrorDetail]] = None,
    ):
        super().__init__(
            detail=detail,
            error_code=error_code,
            exit_code=EXIT_INPUT_ERROR,
            error_details=error_details,
        )


class InvalidGraphException(InvalidInputException):
    """Raised when a graph has inconsistent shape, mask or weights."""

    def __init__(
        self,
        detail: str = "Invalid bipartite graph",
        error_code: str = "INVALID_GRAPH",
        error_details: Optional[List[ErrorDetail]] = None,
    ):
        super().__init__(detail=detail, error_code=error_code, error_details=error_details)


class VertexOutOfRangeException(InvalidInputException):
    """Raised when a vertex index does not belong to the graph."""

    def __init__(self, vertex: Any, bound: int):
        detail = f"Vertex {vertex} is out of range (size {bound})"
        super().__init__(
            detail=detail,
            error_code="VERTEX_OUT_OF_RANGE",
            error_details=[ErrorDetail(field="vertex", code="VERTEX_OUT_OF_RANGE", message=detail)],
        )


class InvalidMatchingException(InvalidInputException):
    """Raised when a set of edges is not a matching of the graph."""

    def __init__(
        self,
        detail: str = "Invalid matching",
        error_code: str = "INVALID_MATCHING",
        error_details: Optional[List[ErrorDetail]] = None,
    ):
        super().__init__(detail=detail, error_code=error_code, error_details=error_details)


class NotMaximumMatchingException(InvalidMatchingException):
    """Raised when a matching is required to be of maximum cardinality but is not."""

    def __init__(self, cardinality: int, maximum: int):
        super().__init__(
            detail=f"Matching has cardinality {cardinality}, maximum is {maximum}",
            error_code="NOT_MAXIMUM_MATCHING",
        )


class EmptyMatchingException(InvalidMatchingException):
    """Raised when an operation needs at least one matched edge."""

    def __init__(self, detail: str = "Matching is empty"):
        super().__init__(detail=detail, error_code="EMPTY_MATCHING")


class OverlappingMatchingsException(InvalidMatchingException):
    """Raised when matchings to be joined share an agent or a task."""

    def __init__(self, detail: str = "Matchings share a vertex"):
        super().__init__(detail=detail, error_code="OVERLAPPING_MATCHINGS")


class InvalidPathException(InvalidInputException):
    """Raised when a vertex sequence is not a path or not augmenting."""

    def __init__(
        self,
        detail: str = "Invalid path",
        error_code: str = "INVALID_PATH",
        error_details: Optional[List[ErrorDetail]] = None,
    ):
        super().__init__(detail=detail, error_code=error_code, error_details=error_details)


class InstanceTooLargeException(InvalidInputException):
    """Raised when an exhaustive oracle is asked to handle too many tasks."""

    def __init__(self, size: int, limit: int):
        super().__init__(
            detail=f"Instance with {size} tasks exceeds the exhaustive limit of {limit}",
            error_code="INSTANCE_TOO_LARGE",
        )


class TopologyException(InvalidInputException):
    """Raised when a communication topology is unknown or not connected."""

    def __init__(self, detail: str = "Invalid communication topology"):
        super().__init__(detail=detail, error_code="INVALID_TOPOLOGY")


class InstanceFileException(InvalidInputException):
    """Raised when an instance, matching or topology file cannot be parsed."""

    def __init__(self, path: str, reason: str):
        detail = f"Cannot read {path}: {reason}"
        super().__init__(
            detail=detail,
            error_code="INVALID_FILE",
            error_details=[ErrorDetail(field="path", code="INVALID_FILE", message=reason, target=path)],
        )


class PreconditionException(InvalidInputException):
    """Raised when a documented precondition (criticality, optimality, clustering) fails."""

    def __init__(self, detail: str = "Precondition violated"):
        super().__init__(detail=detail, error_code="PRECONDITION_FAILED")


# Runtime errors (exit code 1)
class SearchInvariantException(BapException):
    """Raised when a search produces a structure that breaks alternation or cardinality."""

    def __init__(self, detail: str = "Search invariant violated"):
        super().__init__(detail=detail, error_code="SEARCH_INVARIANT")


class ConsensusException(BapException):
    """Raised when agents disagree after a full consensus phase."""

    def __init__(self, detail: str = "Agents did not reach agreement"):
        super().__init__(detail=detail, error_code="CONSENSUS_FAILED")


class ExperimentIOException(BapException):
    """Raised when experiment output cannot be written."""

    def __init__(self, path: str, reason: str):
        detail = f"Cannot write {path}: {reason}"
        super().__init__(
            detail=detail,
            error_code="EXPERIMENT_IO",
            error_details=[ErrorDetail(field="out", code="EXPERIMENT_IO", message=reason, target=path)],
        )


def create_validation_errors(field_errors: Dict[str, str]) -> List[ErrorDetail]:
    """Create ErrorDetail list from field validation errors."""
    return [
        ErrorDetail(field=field, message=message, code="VALIDATION_ERROR")
        for field, message in field_errors.items()
    ]


def format_exception_response(exception: BapException) -> Dict[str, Any]:
    """Format an exception for the CLI's JSON error output."""
    response: Dict[str, Any] = {
        "success": False,
        "error_code": exception.error_code,
        "message": exception.detail,
    }

    if exception.error_details:
        response["error_details"] = [detail.model_dump() for detail in exception.error_details]

    return response
