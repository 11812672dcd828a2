"""Exception hierarchy shared by all modules."""


class VCMinimalError(Exception):
    pass


class MalformedInputError(VCMinimalError, ValueError):
    """Indices out of range, mismatched ground sizes, unparsable files."""


class NotDirectedError(VCMinimalError, ValueError):
    def __init__(self, first, second):
        self.witness = (first, second)
        super().__init__(
            f"family is not directed: {first} and {second} overlap without nesting"
        )


class DisjointnessError(VCMinimalError, ValueError):
    def __init__(self, i, j):
        self.indices = (i, j)
        super().__init__(f"cheeses {i} and {j} overlap")


class InexpressibleError(VCMinimalError, ValueError):
    def __init__(self, witness, vertex=None):
        self.witness = witness
        self.vertex = vertex
        where = "" if vertex is None else f"left vertex {vertex}: "
        super().__init__(f"{where}set is not a disjoint union of Swiss cheeses ({witness})")


class ValidationError(VCMinimalError, ValueError):
    def __init__(self, message, vertex=None):
        self.vertex = vertex
        super().__init__(message if vertex is None else f"left vertex {vertex}: {message}")


class ComplexityBoundError(ValidationError):
    """A decomposition's complexity is not below the declared bound N."""


class ClaimViolation(VCMinimalError, AssertionError):
    """A homogeneity claim from the extraction argument failed at runtime.

    On a validated instance this can only mean an implementation bug.
    """
