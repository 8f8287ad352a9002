"""Shared exception types for the package."""


class ResourceCapError(RuntimeError):
    """A configured resource cap was exceeded (bitset size, tree node count,
    enumeration cell count, or oracle modulus)."""


class WrongDispatchError(ValueError):
    """A prime-regime-specific routine was called for the wrong regime
    (e.g. the ramified closed form at an unramified prime)."""


class TreeParseError(ValueError):
    """A serialized tree document failed validation.

    The message names the offending JSON path, e.g. ``nodes[3].truant``.
    """


class InternalConsistencyError(RuntimeError):
    """Two independent routes that must agree returned different answers.

    Raised by cross-checks (set membership vs. lattice counts, formula vs.
    residue-count oracle); indicates a bug, never bad user input.
    """
