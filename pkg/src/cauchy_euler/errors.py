"""Exception hierarchy shared by all modules."""


class CauchyEulerError(Exception):
    """Base class for every error raised by the package."""


class NonManifoldBoundary(CauchyEulerError):
    def __init__(self, vertex):
        super().__init__(f"more than two boundary edges meet at vertex {vertex}")
        self.vertex = vertex


class NotClosedSurface(CauchyEulerError):
    pass


class OddDefect(CauchyEulerError):
    pass


class DegenerateAngle(CauchyEulerError):
    pass


class ProjectionOverlap(CauchyEulerError):
    pass


class NonSimpleFace(CauchyEulerError):
    pass


class InadmissibleScheme(CauchyEulerError):
    def __init__(self, pattern, detail=""):
        msg = pattern if not detail else f"{pattern}: {detail}"
        super().__init__(msg)
        self.pattern = pattern
        self.detail = detail


class ResolutionTooSmall(CauchyEulerError):
    pass


class NotSharedFace(CauchyEulerError):
    pass


class NonPseudomanifold(CauchyEulerError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} lies in more than two triangles")
        self.edge = edge


class DegenerateCut(CauchyEulerError):
    pass


class NonTransversalTrace(CauchyEulerError):
    pass


class EdgeOnBoundary(CauchyEulerError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} does not have exactly two incident triangles")
        self.edge = edge


class NotAdjacentToHole(CauchyEulerError):
    pass


class IllegalRemoval(CauchyEulerError):
    def __init__(self, illegal):
        super().__init__(str(illegal))
        self.illegal = illegal


class SeedOnBoundary(CauchyEulerError):
    pass


class StripHasInteriorVertex(CauchyEulerError):
    pass


class ProofFailure(CauchyEulerError):
    def __init__(self, message, cause=None):
        super().__init__(message)
        self.cause = cause


class DocumentError(CauchyEulerError):
    pass


class SyntaxError(DocumentError):  # noqa: A001 - name fixed by the document grammar
    def __init__(self, line, message, column=None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class SemanticError(DocumentError):
    pass
